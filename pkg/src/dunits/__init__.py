"""Unit groups and unitary subgroups of GF(2^n) D_{2p^m}."""

from .ff import FieldCtx, FieldElem, field, find_irreducible
from .grpalg import AlgebraElem, GroupAlgebra, ParseError, group_algebra, try_invert
from .numtheory import OrderTower, build_tower, unit_group_order, unitary_group_order
from .unitary import build_B, closure_order, sl2_preimage, structure_report
from .wedderburn import Decomposition, decomposition

__all__ = [
    "AlgebraElem", "Decomposition", "FieldCtx", "FieldElem", "GroupAlgebra", "OrderTower",
    "ParseError", "build_B", "build_tower", "closure_order", "decomposition", "field",
    "find_irreducible", "group_algebra", "sl2_preimage", "structure_report", "try_invert",
    "unit_group_order", "unitary_group_order",
]
