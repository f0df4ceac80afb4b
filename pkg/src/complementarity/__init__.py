"""Measurement view operators, information exclusion relations and their
applications: tomography, interferometer duality, guessing games with quantum
memory and correlation witnesses."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AuditFailure,
    ComplementarityError,
    DimensionError,
    PreconditionError,
    ValidationError,
)
from .linalg import BipartiteState, RngSpec  # noqa: E402
from .measurements import MumSpec, Povm, WeightedEnsemble, mub_measurements, mum_family  # noqa: E402
from .views import (  # noqa: E402
    average_view,
    complete_info,
    ensemble_norm,
    info_gain,
    reconstruct_state,
    exclusion_audit,
    view_operator,
)

__all__ = [
    "AuditFailure",
    "BipartiteState",
    "ComplementarityError",
    "DimensionError",
    "MumSpec",
    "Povm",
    "PreconditionError",
    "RngSpec",
    "ValidationError",
    "WeightedEnsemble",
    "average_view",
    "complete_info",
    "ensemble_norm",
    "info_gain",
    "mub_measurements",
    "mum_family",
    "reconstruct_state",
    "exclusion_audit",
    "view_operator",
]
