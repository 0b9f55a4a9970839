"""HF(S/I^2) in degrees 4 and 5, the small tangent space verdict, and witnesses.

Two independent routes compute dim (I^2)_e for a cubic f with I = Ann(f):

* ``span``: the rank of all products of basis elements (I_2*I_2 in degree 4,
  I_2*I_3 in degree 5);
* ``dual``: the dimension of the orthogonal complement
  ``{G in P_e : h.G in S_{5-e}.f for every h in I_2}``, found as the kernel of a
  sparse system in G and the multipliers expressing each ``h.G``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .apolar import ApolarIdeal
from .exactalg import DENSE_ROW_LENGTH, IncrementalBasis, SparseMatrix, rank
from .ring import HomogeneousForm, basis, contract_poly, dim, product_row

BAD_HF = "bad-hf"
SQUARE_DEG4 = "square-degree-4"
SQUARE_DEG5 = "square-degree-5"

DUAL_THRESHOLD = 10  # the dual route is the default above this many variables


class PreconditionError(ValueError):
    pass


class MethodDisagreement(RuntimeError):
    """The span and dual routes returned different dimensions."""


class NotFinitelyDetermined(ValueError):
    pass


def _require_cubic_no_linear(I: ApolarIdeal):
    if I.f.degree != 3:
        raise PreconditionError("only cubic forms are supported")
    if I.dim(0) or I.dim(1):
        raise PreconditionError("Ann(f) has a linear form; I^2 is not I_2*I_2 + I_2*I_3")


def _expected_hf(n: int) -> List[int]:
    return [1, n, n, 1]


def square_piece_dim_span(I: ApolarIdeal, e: int, backend: str = "auto") -> int:
    """dim (I^2)_e as the rank of all pairwise products of basis elements.

    Sparse products are streamed into an echelon basis (stopping once it is
    full); dense ones are ranked in one batch.
    """
    _require_cubic_no_linear(I)
    if e not in (4, 5):
        raise ValueError("degree must be 4 or 5")
    n = I.n
    F = I.ctx.field
    m2 = basis(n, 2).monomials
    pos = basis(n, e).position
    I2 = I.piece(2).basis.rows
    if e == 4:
        left, right, other = I2, I2, m2
        pairs = ((I2[i], I2[j]) for i in range(len(I2)) for j in range(i, len(I2)))
    else:
        _check_linear_multiples(I)
        left, right, other = I2, I.piece(3).basis.rows, basis(n, 3).monomials
        pairs = ((g, h) for g in left for h in right)
    if not left or not right:
        return 0
    if backend == "auto":
        width = _mean_len(left) * _mean_len(right)
        backend = "stream" if width <= DENSE_ROW_LENGTH else "flint"
    if backend == "stream":
        b = IncrementalBasis(F, len(pos))
        for g, h in pairs:
            b.insert(product_row(g, h, m2, other, pos, F))
            if b.full:
                break
        return b.rank
    rows = [product_row(g, h, m2, other, pos, F) for g, h in pairs]
    return rank(SparseMatrix(F, len(pos), rows), backend)


def _mean_len(rows) -> float:
    return sum(len(r) for r in rows) / len(rows)


def _check_linear_multiples(I: ApolarIdeal):
    """Assert S_1 * I_2 lies in I_3, which makes I_2*I_3 all of (I^2)_5."""
    f = I.f
    F = I.ctx.field
    n = I.n
    m2 = basis(n, 2).monomials
    for r in I.piece(2).basis.rows:
        for k in range(n):
            total = 0
            for c, v in r.items():
                a = list(m2[c])
                a[k] += 1
                w = f.coeffs.get(tuple(a))
                if w:
                    total += v * w
            if F(total):
                raise AssertionError("S_1 * I_2 is not contained in I_3")


def dual_system(I: ApolarIdeal, e: int) -> Tuple[SparseMatrix, int]:
    """The linear system whose kernel is (I^2)_e-perp; returns it and dim P_e.

    Unknowns: one multiplier per (h, spanning form of S_{5-e}.f), then the
    coordinates of G in P_e.  Equations: ``h.G - sum(lambda * w) = 0``
    coordinatewise in P_{e-2}.
    """
    f = I.f
    n = I.n
    F = I.ctx.field
    if I.hilbert_function != _expected_hf(n):
        raise PreconditionError(f"HF(S/I) = {I.hilbert_function}, not (1,n,n,1)")
    if e not in (4, 5):
        raise ValueError("degree must be 4 or 5")
    low = basis(n, e - 2)
    pos_e = basis(n, e).position
    m2 = basis(n, 2).monomials
    # spanning forms of perp(I_{e-2}) = S_{5-e}.f, as {nu index: coeff}
    if e == 5:
        W = [{low.position[a]: v for a, v in f.coeffs.items()}]
    else:
        W = [dict() for _ in range(n)]
        for a, v in f.coeffs.items():
            for k in range(n):
                if a[k]:
                    b = list(a)
                    b[k] -= 1
                    W[k][low.position[tuple(b)]] = v
    k_w = len(W)
    # nu -> [(j, w_j[nu])]
    w_at: Dict[int, List[Tuple[int, object]]] = {}
    for j, w in enumerate(W):
        for nu, v in w.items():
            w_at.setdefault(nu, []).append((j, v))
    I2 = I.piece(2).basis.rows
    offset = len(I2) * k_w
    rows = []
    for t, h in enumerate(I2):
        hb = [(m2[c], v) for c, v in h.items()]
        for nu_i, nu in enumerate(low.monomials):
            row = {}
            for b, v in hb:
                col = offset + pos_e[tuple(x + y for x, y in zip(nu, b))]
                row[col] = v
            for j, wv in w_at.get(nu_i, ()):
                row[t * k_w + j] = F(-wv)
            rows.append(row)
    return SparseMatrix(F, offset + len(pos_e), rows), len(pos_e)


def square_piece_dim_dual(I: ApolarIdeal, e: int, backend: str = "auto") -> int:
    """dim (I^2)_e as dim P_e minus the dimension of its orthogonal complement."""
    m, N = dual_system(I, e)
    perp = m.ncols - rank(m, backend)
    return N - perp


@dataclass
class Verdict:
    n: int
    condition_holds: bool
    hf_quotient: List[int]
    hf_square: List[Optional[int]]
    tangent_hf: Optional[Tuple[int, int, int]] = None
    failure_reason: Optional[str] = None
    methods: List[Optional[str]] = field(default_factory=lambda: [None] * 6)
    timing: Dict[str, float] = field(default_factory=dict)


def _square_dim(I: ApolarIdeal, e: int, method: str) -> Tuple[int, str]:
    if method == "span":
        return square_piece_dim_span(I, e), "span"
    if method == "dual":
        return square_piece_dim_dual(I, e), "dual"
    if method == "both":
        a = square_piece_dim_span(I, e)
        b = square_piece_dim_dual(I, e)
        if a != b:
            raise MethodDisagreement(f"degree {e}: span gives {a}, dual gives {b}")
        return a, "both"
    raise ValueError(f"unknown method {method!r}")


def resolve_method(method: str, n: int) -> str:
    if method == "auto":
        return "dual" if n > DUAL_THRESHOLD else "span"
    return method


def check_small_tangent(f: HomogeneousForm, method: str = "auto",
                        ideal: Optional[ApolarIdeal] = None) -> Verdict:
    """Decide the small tangent space condition for a cubic dual form.

    Checks run in order HF(S/I), degree 4, degree 5 and stop at the first
    failure; every value computed so far is reported.
    """
    if not f.dual:
        raise ValueError("f must be an element of P")
    if f.is_zero() or f.degree != 3:
        raise ValueError("need a nonzero cubic")
    n = f.ctx.n
    method = resolve_method(method, n)
    timing = {}
    t0 = time.perf_counter()
    I = ideal or ApolarIdeal.of(f)
    hf = I.hilbert_function
    timing["apolar"] = time.perf_counter() - t0
    hf_sq: List[Optional[int]] = [None] * 6
    methods: List[Optional[str]] = [None] * 6
    if hf != _expected_hf(n):
        return Verdict(n, False, hf, hf_sq, None, BAD_HF, methods, timing)
    for e in range(4):
        hf_sq[e] = dim(n, e)
        methods[e] = "forced"
    for e, reason, ok in ((4, SQUARE_DEG4, lambda v: v == n), (5, SQUARE_DEG5, lambda v: v == 0)):
        t0 = time.perf_counter()
        d, tag = _square_dim(I, e, method)
        timing[f"degree{e}"] = time.perf_counter() - t0
        hf_sq[e] = dim(n, e) - d
        methods[e] = tag
        if not ok(hf_sq[e]):
            return Verdict(n, False, hf, hf_sq, None, reason, methods, timing)
    tangent = tangent_hf_from_values(hf, hf_sq)
    return Verdict(n, True, hf, hf_sq, (tangent[-1], tangent[0], tangent[1]), None, methods, timing)


def tangent_hf_from_values(hf_quotient: List[int], hf_square: List[Optional[int]]) -> Dict[int, int]:
    """HF of (I/I^2)^dual shifted by -3, at tangent degrees -2..3 (zero elsewhere)."""
    if hf_square[5] != 0:
        raise NotFinitelyDetermined(
            "HF(S/I^2)_5 != 0: the tangent space is not determined by degrees <= 5")
    q = list(hf_quotient) + [0, 0]
    return {3 - e: hf_square[e] - q[e] for e in range(6)}


def tangent_hilbert_function(f: HomogeneousForm, method: str = "auto",
                             ideal: Optional[ApolarIdeal] = None) -> Dict[int, int]:
    """Graded dimensions of the tangent space to the Hilbert scheme at Ann(f)."""
    I = ideal or ApolarIdeal.of(f)
    n = I.n
    if f.degree != 3:
        raise PreconditionError("only cubic forms are supported")
    hf = I.hilbert_function
    if hf != _expected_hf(n):
        raise PreconditionError(f"HF(S/I) = {hf}, not (1,n,n,1)")
    method = resolve_method(method, n)
    hf_sq = [dim(n, e) for e in range(4)]
    for e in (4, 5):
        hf_sq.append(dim(n, e) - _square_dim(I, e, method)[0])
    return tangent_hf_from_values(hf, hf_sq)


def tangent_formula(n: int) -> Tuple[int, int, int]:
    """Tangent HF at degrees -1, 0, 1 when the condition holds."""
    return n, comb(n + 2, 3) - 1, comb(n + 1, 2) - n


# ------------------------------------------------------------------ witnesses

@dataclass
class WitnessCombination:
    """``target == sum(c * g * h for c, g, h in terms) + sum(c * q for c, q in extra_terms)``.

    ``terms`` hold products of two elements of I; ``extra_terms`` is empty
    unless the target needed one of the auxiliary generators.
    """

    target: HomogeneousForm
    terms: List[Tuple[object, HomogeneousForm, HomogeneousForm]]
    extra_terms: List[Tuple[object, HomogeneousForm]] = field(default_factory=list)

    @property
    def in_square(self) -> bool:
        return not self.extra_terms

    def expand(self) -> HomogeneousForm:
        acc = self.target.ctx.zero(self.target.degree)
        for c, g, h in self.terms:
            acc = acc + (g * h).scaled(c)
        for c, q in self.extra_terms:
            acc = acc + q.scaled(c)
        return acc

    def verify(self, f: Optional[HomogeneousForm] = None) -> bool:
        """Re-expand exactly; with ``f`` also check every factor annihilates it."""
        if self.expand() != self.target:
            return False
        if f is not None:
            for _, g, h in self.terms:
                if not (contract_poly(g, f).is_zero() and contract_poly(h, f).is_zero()):
                    return False
        return True


class SquareSpan:
    """(I^2)_e spanned by products of basis elements, with certificate tracking.

    ``extras`` (degree-e forms) are inserted after every product, so a target
    in I^2 never receives an extra term in its certificate.
    """

    def __init__(self, I: ApolarIdeal, e: int, extras: Sequence[HomogeneousForm] = ()):
        _require_cubic_no_linear(I)
        if e not in (4, 5):
            raise ValueError("degree must be 4 or 5")
        self.ideal = I
        self.degree = e
        n = I.n
        F = I.ctx.field
        m2 = basis(n, 2).monomials
        self.pos = basis(n, e).position
        I2 = I.piece(2).basis.rows
        if e == 4:
            left, right, other = I2, I2, m2
            pairs = [(i, j) for i in range(len(I2)) for j in range(i, len(I2))]
        else:
            _check_linear_multiples(I)
            left, right, other = I2, I.piece(3).basis.rows, basis(n, 3).monomials
            pairs = [(i, j) for i in range(len(left)) for j in range(len(right))]
        self._left, self._right = left, right
        self.span = IncrementalBasis(F, len(self.pos), track=True)
        for i, j in pairs:
            self.span.insert(product_row(left[i], right[j], m2, other, self.pos, F), (i, j))
        self.square_dim = self.span.rank
        self.extras = list(extras)
        for k, q in enumerate(self.extras):
            self.span.insert(q.to_row(), ("extra", k))

    @property
    def dim(self) -> int:
        return self.square_dim

    def residue(self, target: HomogeneousForm) -> Dict[int, object]:
        """Residue of ``target`` modulo I^2 plus the extras."""
        return self.span.residue(target.to_row())

    def witness(self, target: HomogeneousForm) -> Optional[WitnessCombination]:
        if target.degree != self.degree or target.dual:
            raise ValueError(f"target must be in S_{self.degree}")
        cert = self.span.certificate(target.to_row())
        if cert is None:
            return None
        ctx = self.ideal.ctx
        e2 = 2 if self.degree == 4 else 3
        terms, extra = [], []
        for label, c in sorted(cert.items(), key=lambda kv: (kv[0][0] == "extra", kv[0])):
            if label[0] == "extra":
                extra.append((c, self.extras[label[1]]))
            else:
                i, j = label
                g = HomogeneousForm.from_row(ctx, 2, self._left[i])
                h = HomogeneousForm.from_row(ctx, e2, self._right[j])
                terms.append((c, g, h))
        return WitnessCombination(target, terms, extra)


def witness_square_membership(target: HomogeneousForm, I: ApolarIdeal,
                              span: Optional[SquareSpan] = None) -> Optional[WitnessCombination]:
    """Products of elements of I summing to ``target``, or None if it is not in I^2."""
    if target.degree not in (4, 5):
        raise ValueError("witnesses are computed in degrees 4 and 5 only")
    span = span or SquareSpan(I, target.degree)
    w = span.witness(target)
    if w is not None and not w.in_square:
        return None
    return w
