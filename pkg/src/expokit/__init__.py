"""Exponentiable objects over finite posets.

Finite spaces, posets, relations and small categories fibred over a finite
poset B, their decomposition into lax functors on B and back, deciders
for exponentiability, explicit exponentials, and brute-force oracles
checking the corresponding universal properties.
"""

from .order import FinLattice, FinPoset, FinPreorder, FinSpace, OrderError
from .cat import FinCat, FinFunctor, Profunctor
from .doctrines import Doctrine, MeetMap, OrderIdeal, Relation
from .laxcat import LaxFunctor
from .glueing import ObjectOverB, decompose, glue, identity_over, subset_over
from .expcheck import check_exponentiable, exponential_over_B, locally_closed
from .catprof import giraud_conduche, cat_exponential

__all__ = [
    "FinLattice", "FinPoset", "FinPreorder", "FinSpace", "OrderError",
    "FinCat", "FinFunctor", "Profunctor",
    "Doctrine", "MeetMap", "OrderIdeal", "Relation",
    "LaxFunctor", "ObjectOverB", "decompose", "glue", "identity_over", "subset_over",
    "check_exponentiable", "exponential_over_B", "locally_closed",
    "giraud_conduche", "cat_exponential",
]
__version__ = "0.1.0"
