"""Explicit cubic forms with small tangent space, plus random cubics.

Variables are named a1..am, b1..bm, c1..cm, then d (n = 3m+1, 3m+2) and e
(n = 3m+2).  Block indices are cyclic modulo m.  The special cases n = 6 and
n = 8 use m = 2 with their own extra terms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .exactalg import Field, QQ
from .ring import Exp, HomogeneousForm, RingContext, basis

RATIONAL_BOUND = 100


class UnsupportedNError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyDescriptor:
    n: int
    kind: str  # ThreeM | ThreeMplus1 | ThreeMplus2 | SpecialN6 | SpecialN8
    m: int

    @classmethod
    def for_n(cls, n: int) -> "FamilyDescriptor":
        if n == 6:
            return cls(n, "SpecialN6", 2)
        if n == 8:
            return cls(n, "SpecialN8", 2)
        if n < 9:
            raise UnsupportedNError(
                f"no family for n={n}: the condition fails for n <= 5 and n = 7")
        kind = ("ThreeM", "ThreeMplus1", "ThreeMplus2")[n % 3]
        return cls(n, kind, n // 3)

    @property
    def extras(self) -> Tuple[str, ...]:
        return {"ThreeM": (), "SpecialN6": (), "ThreeMplus1": ("d",)}.get(self.kind, ("d", "e"))

    def names(self) -> Tuple[str, ...]:
        blocks = tuple(f"{x}{i}" for x in "abc" for i in range(1, self.m + 1))
        return blocks + self.extras


def variable_index(name: str, desc: FamilyDescriptor) -> int:
    """Position of a family variable: a_i -> i-1, b_i -> m+i-1, c_i -> 2m+i-1, d -> 3m, e -> 3m+1."""
    try:
        return desc.names().index(name)
    except ValueError:
        raise KeyError(f"unknown variable {name!r} for n={desc.n}") from None


def family_context(n: int, F: Field = QQ) -> RingContext:
    return RingContext(n, F, FamilyDescriptor.for_n(n).names())


def _mono(ctx: RingContext, *names: str) -> Exp:
    idx = ctx.index_of
    e = [0] * ctx.n
    for v in names:
        e[idx[v]] += 1
    return tuple(e)


def family_monomials(n: int) -> List[Tuple[str, ...]]:
    """The family's terms as variable-name tuples (each coefficient is 1)."""
    desc = FamilyDescriptor.for_n(n)
    m = desc.m

    def var(x, i):
        return f"{x}{(i - 1) % m + 1}"

    terms: List[Tuple[str, ...]] = []
    if desc.kind in ("SpecialN6", "SpecialN8"):
        terms += [("a1", "b1", "c1"), ("a2", "b2", "c2"),
                  ("a1", "a2", "a2"), ("b1", "b2", "b2"), ("c1", "c2", "c2")]
        if desc.kind == "SpecialN6":
            terms += [("a1",) * 3, ("b1",) * 3, ("c1",) * 3]
        else:
            terms += [("a1", "d", "e"), ("b1", "b1", "d"), ("c1", "c1", "e")]
        return terms
    for i in range(1, m + 1):
        terms.append((var("a", i), var("b", i), var("c", i)))
        for x in "abc":
            terms.append((var(x, i), var(x, i + 1), var(x, i + 1)))
        if desc.kind in ("ThreeMplus1", "ThreeMplus2"):
            terms.append((var("a", i), var("b", i + 1), "d"))
        if desc.kind == "ThreeMplus2":
            terms.append((var("b", i), var("c", i + 1), "e"))
    return terms


def family_cubic(n: int, F: Field = QQ) -> HomogeneousForm:
    """The family cubic for ``n`` as a dual form, every divided-power coefficient 1."""
    ctx = family_context(n, F)
    coeffs = {}
    for t in family_monomials(n):
        e = _mono(ctx, *t)
        if e in coeffs:  # pragma: no cover - families have distinct terms
            raise AssertionError(f"repeated family term {t}")
        coeffs[e] = F.one
    return HomogeneousForm(ctx, 3, coeffs, dual=True)


def shift_form(f: HomogeneousForm, desc: FamilyDescriptor, step: int = 1) -> HomogeneousForm:
    """Apply the index translation i -> i+step (mod m) to the a/b/c blocks."""
    m = desc.m
    perm = list(range(f.ctx.n))
    for blk in range(3):
        for i in range(m):
            perm[blk * m + i] = blk * m + (i + step) % m
    return permute_form(f, perm)


def permute_form(f: HomogeneousForm, perm: List[int]) -> HomogeneousForm:
    """Relabel variables: variable ``i`` becomes variable ``perm[i]``."""
    out = {}
    for a, v in f.coeffs.items():
        b = [0] * len(a)
        for i, x in enumerate(a):
            b[perm[i]] += x
        out[tuple(b)] = v
    return HomogeneousForm(f.ctx, f.degree, out, f.dual)


def random_cubic(n: int, F: Field, seed: Optional[int] = None,
                 ctx: Optional[RingContext] = None) -> HomogeneousForm:
    """Dense random cubic dual form.

    Coefficients are uniform residues over a prime field and uniform integers
    in [-RATIONAL_BOUND, RATIONAL_BOUND] over the rationals.
    """
    rng = random.Random(seed)
    ctx = ctx or RingContext(n, F)
    coeffs = {}
    for e in basis(n, 3).monomials:
        if F.characteristic:
            v = rng.randrange(F.characteristic)
        else:
            v = rng.randint(-RATIONAL_BOUND, RATIONAL_BOUND)
        v = F(v)
        if v:
            coeffs[e] = v
    if not coeffs:  # astronomically unlikely except over tiny fields
        coeffs[basis(n, 3).monomials[0]] = F.one
    return HomogeneousForm(ctx, 3, coeffs, dual=True)


def auxiliary_generators(n: int) -> List[Tuple[str, ...]]:
    """Extra degree-4 monomials adjoined to Ann(F)^2 to cover all of S_4 (large m).

    These are a_i a_{i+1} a_{i+2}^2 and its b/c analogues, plus a1*b1*c1*d and
    a1*b1*c1*e when d and e exist.  Only defined for the cyclic families (n >= 9).
    """
    desc = FamilyDescriptor.for_n(n)
    if desc.kind in ("SpecialN6", "SpecialN8"):
        return []
    m = desc.m

    def var(x, i):
        return f"{x}{(i - 1) % m + 1}"

    gens = [(var(x, i), var(x, i + 1), var(x, i + 2), var(x, i + 2))
            for x in "abc" for i in range(1, m + 1)]
    gens += [("a1", "b1", "c1", v) for v in desc.extras]
    return gens


def monomial_form(ctx: RingContext, names: Tuple[str, ...]) -> HomogeneousForm:
    return ctx.monomial(_mono(ctx, *names))
