"""Toolkit for bivariate Boolean-function constructions over GF(2^rm) x GF(2^m)."""

__version__ = "0.1.0"

from .boolfn import AnfPolynomial, TruthTable  # noqa: E402
from .constructions import ConstructionParams, construct_balanced, construct_unbalanced  # noqa: E402
from .gf2field import FieldSpec, field_for  # noqa: E402

__all__ = [
    "AnfPolynomial", "TruthTable", "ConstructionParams", "construct_balanced",
    "construct_unbalanced", "FieldSpec", "field_for", "__version__",
]
