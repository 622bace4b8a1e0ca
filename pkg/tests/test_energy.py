import pytest

from qcps import EnergyLedger, RadioParams, charge_message, compare_costs
from qcps.errors import ScenarioMismatch
from qcps.protocol import Message


def msg(src, dst, bits):
    return Message(1, 0.0, "report", src, dst, bits)


@pytest.fixture
def ledger():
    return EnergyLedger.for_nodes(["a", "b"], RadioParams(e_elec_nj=50, e_amp_pj=100))


def test_zero_distance(ledger):
    charge_message(ledger, msg("a", "b", 1000), 0.0)
    assert ledger.nodes["a"].tx_energy == pytest.approx(50e-9 * 1000, rel=1e-12)
    assert ledger.nodes["b"].rx_energy == pytest.approx(50e-9 * 1000, rel=1e-12)


def test_ten_meters(ledger):
    charge_message(ledger, msg("a", "b", 1000), 10.0)
    # 50e-9 * 1000 + 100e-12 * 10**2 * 1000
    assert ledger.nodes["a"].tx_energy == pytest.approx(6.0e-5, rel=1e-12)
    assert (ledger.nodes["a"].msgs_sent, ledger.nodes["b"].msgs_received) == (1, 1)


def test_cloud_is_not_tracked(ledger):
    charge_message(ledger, msg("a", "cloud", 1000), 30.0)
    charge_message(ledger, msg("cloud", "b", 1000), 30.0)
    assert ledger.nodes["a"].rx_energy == 0
    assert ledger.nodes["b"].tx_energy == 0
    assert ledger.nodes["b"].rx_energy == pytest.approx(5e-5)
    assert "cloud" not in ledger.nodes


def test_negative_distance(ledger):
    with pytest.raises(ValueError):
        charge_message(ledger, msg("a", "b", 10), -1.0)


def test_radio_validation():
    with pytest.raises(ValueError):
        RadioParams(e_elec_nj=-1)
    with pytest.raises(ValueError):
        RadioParams(header_bits=0)


def test_compare_empty():
    radio = RadioParams()
    report = compare_costs(EnergyLedger.for_nodes("ab", radio), EnergyLedger.for_nodes("ab", radio))
    assert report.qcps_total == report.baseline_total == 0
    assert report.total_ratio is None and report.radio_ratio is None
    assert not report.qcps_cheaper
    assert report.to_text().endswith("QCPS cheaper: no\n")


def test_compare_mismatch():
    radio = RadioParams()
    with pytest.raises(ScenarioMismatch):
        compare_costs(EnergyLedger.for_nodes("ab", radio), EnergyLedger.for_nodes("abc", radio))


def test_compare_csv():
    radio = RadioParams()
    q, b = EnergyLedger.for_nodes("a", radio), EnergyLedger.for_nodes("a", radio)
    q.nodes["a"].tx_energy = 1e-6
    b.nodes["a"].tx_energy = 2e-6
    report = compare_costs(q, b)
    assert report.qcps_cheaper and report.radio_ratio == pytest.approx(0.5)
    assert report.to_csv() == (
        "node_id,model,tx_j,rx_j,compute_j,msgs_sent,msgs_received\n"
        "a,qcps,1e-06,0.0,0.0,0,0\n"
        "a,baseline,2e-06,0.0,0.0,0,0\n"
    )
