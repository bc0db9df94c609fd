"""Generate 2D point sets whose scagnostic measures match chosen targets."""

from .exceptions import (
    InsufficientPointsError,
    InvalidInputError,
    InvalidParameterError,
    ObjectiveError,
    PointsFormatError,
    ScagenError,
)
from .scagnostics import MEASURE_NAMES, Measure, ScagnosticOptions, ScagnosticVector, compute, compute_all
from .optimizer import GsaParams, GsaResult, ObjectiveSpec, gsa_minimize
from .generator import GenerationResult, GeneratorConfig, TargetSpec, clone_targets, generate, loss
from .evaluation import ExperimentPlan, ExperimentReport, rmse, run_reliability, run_timing

__version__ = "0.1.0"

__all__ = [
    "MEASURE_NAMES",
    "Measure",
    "ScagnosticOptions",
    "ScagnosticVector",
    "compute",
    "compute_all",
    "GsaParams",
    "GsaResult",
    "ObjectiveSpec",
    "gsa_minimize",
    "GenerationResult",
    "GeneratorConfig",
    "TargetSpec",
    "clone_targets",
    "generate",
    "loss",
    "ExperimentPlan",
    "ExperimentReport",
    "rmse",
    "run_reliability",
    "run_timing",
    "ScagenError",
    "InvalidInputError",
    "InsufficientPointsError",
    "InvalidParameterError",
    "ObjectiveError",
    "PointsFormatError",
]
