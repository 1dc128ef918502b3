__version__ = "1.0.0"

from .errors import (
    CavityError,
    ConfigError,
    InvalidDensityMatrixError,
    InvalidParametersError,
    NumericalError,
    SingularCouplingError,
    StepSizeError,
    TruncationError,
    UndefinedMandelError,
    UnmeasurableOutcomeError,
)
from .nonlinearity import INonlinearity, NonlinearityFactory
from .fock import (
    FieldCoeffs,
    ModelParams,
    PassageState,
    choose_truncation,
    coherent_coeffs,
    fock_state,
)
from .cubic import CubicCoeffs, CubicRoots, trig_cubic_roots
from .solver import (
    ProjectionResult,
    cubic_coeffs,
    initial_state,
    matrix_exp_level,
    passage_amplitudes,
    passage_series,
    project_ground,
    run_cascade,
)
from .oracle import IntegratorConfig, integrate_passage, integrate_series, resolved_step

__all__ = [
    "__version__",
    "CavityError",
    "ConfigError",
    "InvalidDensityMatrixError",
    "InvalidParametersError",
    "NumericalError",
    "SingularCouplingError",
    "StepSizeError",
    "TruncationError",
    "UndefinedMandelError",
    "UnmeasurableOutcomeError",
    "INonlinearity",
    "NonlinearityFactory",
    "FieldCoeffs",
    "ModelParams",
    "PassageState",
    "choose_truncation",
    "coherent_coeffs",
    "fock_state",
    "CubicCoeffs",
    "CubicRoots",
    "trig_cubic_roots",
    "ProjectionResult",
    "cubic_coeffs",
    "initial_state",
    "matrix_exp_level",
    "passage_amplitudes",
    "passage_series",
    "project_ground",
    "run_cascade",
    "IntegratorConfig",
    "integrate_passage",
    "integrate_series",
    "resolved_step",
]
