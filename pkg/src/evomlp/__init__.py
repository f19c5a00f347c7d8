"""evomlp: MLP classifiers trained by particle swarm, differential evolution,
and genetic algorithms, exportable as standalone source code."""

from .data import (
    Dataset,
    DataError,
    MissingPolicy,
    PreprocessPolicy,
    RawTable,
    TransformKind,
    TransformParams,
    apply_transform,
    load_csv,
    preprocess,
)
from .de import DeParams, DeStrategy
from .engine import (
    GenerationStats,
    Population,
    RunConfig,
    RunResult,
    StoppingRule,
    StopStatistic,
    evaluate_fitness,
    init_population,
    run,
    should_stop,
)
from .ga import GaMutation, GaParams, GaSelection
from .mlp import (
    Activation,
    Topology,
    forward,
    forward_batch,
    genome_length,
    predict,
    predict_batch,
)
from .pso import InertiaKind, InertiaSchedule, Particle, PsoParams

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "DataError",
    "Dataset",
    "DeParams",
    "DeStrategy",
    "GaMutation",
    "GaParams",
    "GaSelection",
    "GenerationStats",
    "InertiaKind",
    "InertiaSchedule",
    "MissingPolicy",
    "Particle",
    "Population",
    "PreprocessPolicy",
    "PsoParams",
    "RawTable",
    "RunConfig",
    "RunResult",
    "StopStatistic",
    "StoppingRule",
    "Topology",
    "TransformKind",
    "TransformParams",
    "apply_transform",
    "evaluate_fitness",
    "forward",
    "forward_batch",
    "genome_length",
    "init_population",
    "load_csv",
    "predict",
    "predict_batch",
    "preprocess",
    "run",
    "should_stop",
]
