from clinrisk.harness import (
    ExperimentConfig,
    RunResult,
    load_config,
    run_matrix,
    run_single,
)
from clinrisk.methods import METHODS, TrainingMethod

__version__ = "1.0.0"

__all__ = [
    "ExperimentConfig",
    "RunResult",
    "TrainingMethod",
    "METHODS",
    "load_config",
    "run_single",
    "run_matrix",
]
