"""Exact computations with polynomial functors, tensor strength and specialisation in P_infinity."""

from .errors import BudgetExceeded, DepthExceeded, InsufficientData, NotEnoughBlocks, NotFound
from .fields import GF, QQ, parse_field
from .functors import Element, Ext, FunctorSpec, SchurOf, Sym, Tensor, apply_map, parse_spec
from .limits import EElement, TruncatedElement, coherence_check, compose_e, e_apply
from .linalg import Matrix

__all__ = [
    "BudgetExceeded", "DepthExceeded", "InsufficientData", "NotEnoughBlocks", "NotFound",
    "GF", "QQ", "parse_field",
    "Element", "Ext", "FunctorSpec", "SchurOf", "Sym", "Tensor", "apply_map", "parse_spec",
    "EElement", "TruncatedElement", "coherence_check", "compose_e", "e_apply",
    "Matrix",
]
