"""Apolar ideals of cubic forms and the small tangent space condition."""

from .apolar import ApolarIdeal, hilbert_function, minimal_generators_by_degree
from .exactalg import QQ, PrimeField, Rationals, SparseMatrix, parse_field, rank
from .families import family_cubic, random_cubic
from .ring import HomogeneousForm, RingContext, format_form, parse_form
from .tangent import Verdict, check_small_tangent, tangent_hilbert_function

__all__ = [
    "ApolarIdeal", "HomogeneousForm", "PrimeField", "QQ", "Rationals", "RingContext",
    "SparseMatrix", "Verdict", "check_small_tangent", "family_cubic", "format_form",
    "hilbert_function", "minimal_generators_by_degree", "parse_field", "parse_form",
    "random_cubic", "rank", "tangent_hilbert_function",
]
