from .config import DEFAULTS, LARGE, experiment_config, load_overrides, overrides_for, config_hash
from .common import Stopwatch, make_report
from .confounder import run_confounder
from .misspecified import run_misspecified
from .tunneling import run_tunneling
from .bench1000 import run_benchmark_1000d
from .fullrank import run_fullrank_audit
from .manifold import run_manifold_recovery
from .runner import ExperimentRunner

EXPERIMENTS = {
    'confounder': run_confounder,
    'misspecified': run_misspecified,
    'tunneling': run_tunneling,
    'bench1000': run_benchmark_1000d,
    'fullrank': run_fullrank_audit,
    'manifold': run_manifold_recovery,
}
