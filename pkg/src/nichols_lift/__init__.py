"""Exact computations with Nichols algebras of diagonal type and their liftings."""

from .scalars import CycNumber
from .yddata import AbelianGroup, YDDatum, minimal_realization
from .algebra import SmashElement, TensorElement, antipode, coproduct, q_bracket, root_vectors
from .rewrite import MonomialOrder, RewriteSystem, complete
from .nichols import Power, Stratification, Stratum

__all__ = [
    "AbelianGroup",
    "CycNumber",
    "MonomialOrder",
    "Power",
    "RewriteSystem",
    "SmashElement",
    "Stratification",
    "Stratum",
    "TensorElement",
    "YDDatum",
    "antipode",
    "complete",
    "coproduct",
    "minimal_realization",
    "q_bracket",
    "root_vectors",
]
