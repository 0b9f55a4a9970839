"""Apolar ideals Ann(f) of homogeneous dual forms, degree by degree."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List

from .exactalg import RowBasis, SparseMatrix, kernel, row_reduce
from .ring import (Exp, HomogeneousForm, RingContext, basis, contract_poly, dim,
                   product_row, sub_exp)


class ZeroFormError(ValueError):
    pass


@dataclass
class GradedSubspace:
    ctx: RingContext
    degree: int
    basis: RowBasis

    @property
    def dim(self) -> int:
        return self.basis.rank

    def forms(self) -> List[HomogeneousForm]:
        return [HomogeneousForm.from_row(self.ctx, self.degree, r) for r in self.basis.rows]

    def contains(self, s: HomogeneousForm) -> bool:
        return self.basis.contains(s.to_row())


def _sub_exponents(a: Exp, e: int):
    """All b <= a (componentwise) with |b| = e."""
    supp = [i for i, x in enumerate(a) if x]
    for choice in iproduct(*(range(a[i] + 1) for i in supp)):
        if sum(choice) == e:
            b = [0] * len(a)
            for i, x in zip(supp, choice):
                b[i] = x
            yield tuple(b)


def contraction_matrix(f: HomogeneousForm, e: int) -> SparseMatrix:
    """Matrix of ``S_e -> P_{d-e}, s |-> s.f``; columns index S_e, rows index P_{d-e}."""
    d = f.degree
    src = basis(f.ctx.n, e).position
    tgt = basis(f.ctx.n, d - e).position
    rows: List[Dict[int, object]] = [dict() for _ in range(len(tgt))]
    for a, v in f.coeffs.items():
        for b in _sub_exponents(a, e):
            rows[tgt[sub_exp(a, b)]][src[b]] = v
    return SparseMatrix(f.ctx.field, len(src), rows)


def apolar_piece(f: HomogeneousForm, e: int) -> GradedSubspace:
    """Degree-e part of Ann(f): the kernel of contraction S_e -> P_{d-e}."""
    if not f.dual:
        raise ValueError("f must be an element of P")
    if f.is_zero():
        raise ZeroFormError("Ann(0) is the unit ideal")
    if not 0 <= e <= f.degree:
        raise ValueError(f"degree {e} outside 0..{f.degree}")
    return GradedSubspace(f.ctx, e, kernel(contraction_matrix(f, e)))


@dataclass
class ApolarIdeal:
    """Ann(f) stored through degree deg f; in higher degrees it is all of S."""

    f: HomogeneousForm
    pieces: List[GradedSubspace]

    @classmethod
    def of(cls, f: HomogeneousForm) -> "ApolarIdeal":
        return cls(f, [apolar_piece(f, e) for e in range(f.degree + 1)])

    @property
    def ctx(self) -> RingContext:
        return self.f.ctx

    @property
    def n(self) -> int:
        return self.f.ctx.n

    def piece(self, e: int) -> GradedSubspace:
        return self.pieces[e]

    def dim(self, e: int) -> int:
        if e > self.f.degree:
            return dim(self.n, e)
        return self.pieces[e].dim

    @property
    def hilbert_function(self) -> List[int]:
        return [dim(self.n, e) - p.dim for e, p in enumerate(self.pieces)]


def hilbert_function(f: HomogeneousForm) -> List[int]:
    """HF of S/Ann(f) in degrees 0..deg f."""
    if f.is_zero():
        raise ZeroFormError("Ann(0) is the unit ideal")
    return ApolarIdeal.of(f).hilbert_function


def multiples_by_variables(I: ApolarIdeal, e: int) -> List[Dict[int, object]]:
    """Rows of S_1 * I_{e-1} in degree-e coordinates."""
    n = I.n
    F = I.ctx.field
    lower = basis(n, e - 1).monomials
    one = basis(n, 1).monomials
    pos = basis(n, e).position
    rows = []
    for r in I.piece(e - 1).basis.rows:
        for k in range(n):
            rows.append(product_row(r, {k: F.one}, lower, one, pos, F))
    return rows


def minimal_generators_by_degree(I: ApolarIdeal, e: int) -> GradedSubspace:
    """A complement of S_1 * I_{e-1} inside I_e, reduced against both."""
    if e < 1:
        raise ValueError("generators start in degree 1")
    n = I.n
    F = I.ctx.field
    N = dim(n, e)
    if e > I.f.degree:
        full = row_reduce(SparseMatrix(F, N, [{c: F.one} for c in range(N)]))
        target = full
    else:
        target = I.piece(e).basis
    lower = row_reduce(SparseMatrix(F, N, multiples_by_variables(I, e))) if e > 1 \
        else RowBasis(F, N, [], [])
    residues = [lower.residue(r) for r in target.rows]
    gens = row_reduce(SparseMatrix(F, N, [r for r in residues if r]))
    return GradedSubspace(I.ctx, e, gens)


def annihilates(s: HomogeneousForm, f: HomogeneousForm) -> bool:
    return contract_poly(s, f).is_zero()
