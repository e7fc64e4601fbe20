"""lckgeom: a workbench for locally conformally Kahler geometry on Lie algebras."""

__version__ = "0.1.0"

from .scalars import FLOAT, RATIONAL  # noqa: F401
from .exterior import (  # noqa: F401
    KForm,
    LieAlgebra,
    ValidationReport,
    ce_differential,
    codifferential,
    metric_dual,
    validate_algebra,
    wedge,
)
