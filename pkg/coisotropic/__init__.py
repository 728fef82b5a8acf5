"""Exact classification data for symplectic torus actions with coisotropic principal orbits."""

from coisotropic.ingredients import IngredientList, canonicalize, dim_m, validate
from coisotropic.invariants import invariant_report, lists_equal, splitting
from coisotropic.schema import parse, serialize

__all__ = [
    "IngredientList",
    "canonicalize",
    "dim_m",
    "invariant_report",
    "lists_equal",
    "parse",
    "serialize",
    "splitting",
    "validate",
]
