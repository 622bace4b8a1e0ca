"""Grid-partitioned heterogeneous sensor networks with a coordinator-mediated cloud."""

from .cloud import AggregateKind, Cloud, RegistrationRecord
from .election import Centroid, centroid, elect_all, elect_coordinator
from .energy import EnergyLedger, RadioParams, charge_message, compare_costs
from .model import CLOUD, Position, Reading, SensorNode, euclidean_distance
from .partition import Grid, compute_grids, label_nodes
from .protocol import CrossGridQuery, Message, QcpsProtocol
from .scenario_file import dump_scenario, load_scenario, parse_scenario
from .sim import CrossQuery, Scenario, Sense, Sync, UserAggregate, run, run_pair, with_random_queries

__version__ = "0.1.0"
