"""Exact scalar fields and sparse row reduction.

Rows are plain dicts mapping a column index to a nonzero scalar.  Scalars are
:class:`fractions.Fraction` over the rationals and canonical ``int`` residues
over a prime field.  Everything here is exact; there is no floating point.
"""

from __future__ import annotations

import heapq
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Row = Dict[int, object]

MAX_PRIME = 2**61


class MalformedMatrixError(ValueError):
    pass


class Field:
    """Base class for the two supported scalar fields."""

    characteristic: int

    def __call__(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def axpy(self, target: Row, factor, source: Row) -> None:
        """In place ``target -= factor * source``, dropping zeros."""
        raise NotImplementedError

    def scale(self, row: Row, factor) -> Row:
        raise NotImplementedError

    def is_canonical(self, x) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(Field):
    characteristic: int = field(default=0, init=False)

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def axpy(self, target, factor, source):
        get = target.get
        for c, v in source.items():
            x = get(c, 0) - factor * v
            if x:
                target[c] = x
            else:
                target.pop(c, None)

    def scale(self, row, factor):
        return {c: v * factor for c, v in row.items()}

    def is_canonical(self, x):
        # Fraction normalizes on construction; denominators are always > 0.
        return isinstance(x, Fraction) and x.denominator > 0

    def __str__(self):
        return "q"


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        from sympy import isprime

        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")
        if self.p >= MAX_PRIME:
            raise ValueError(f"prime fields are limited to p < 2^61, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def axpy(self, target, factor, source):
        p = self.p
        get = target.get
        for c, v in source.items():
            x = (get(c, 0) - factor * v) % p
            if x:
                target[c] = x
            else:
                target.pop(c, None)

    def scale(self, row, factor):
        p = self.p
        return {c: v * factor % p for c, v in row.items()}

    def is_canonical(self, x):
        return isinstance(x, int) and 0 <= x < self.p

    def __str__(self):
        return f"fp:{self.p}"


QQ = Rationals()


def parse_field(text: str) -> Field:
    """Parse ``q`` or ``fp:<p>``."""
    t = text.strip().lower()
    if t in ("q", "qq"):
        return QQ
    if t.startswith("fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise ValueError(f"bad prime in field descriptor {text!r}") from None
        return PrimeField(p)
    raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")


@dataclass
class SparseMatrix:
    """A list of sparse rows with a fixed column count."""

    field: Field
    ncols: int
    rows: List[Row]

    def __post_init__(self):
        for r in self.rows:
            for c, v in r.items():
                if not 0 <= c < self.ncols:
                    raise MalformedMatrixError(f"column {c} out of range [0, {self.ncols})")
                if not v:
                    raise MalformedMatrixError("stored zero entry")

    @classmethod
    def from_rows(cls, F: Field, ncols: int, rows: Iterable) -> "SparseMatrix":
        """Build from dicts or dense sequences, coercing scalars and dropping zeros."""
        out = []
        for r in rows:
            items = r.items() if isinstance(r, dict) else enumerate(r)
            d = {}
            for c, v in items:
                v = F(v)
                if v:
                    d[int(c)] = v
            out.append(d)
        return cls(F, ncols, out)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row_items(self, i: int) -> List[Tuple[int, object]]:
        return sorted(self.rows[i].items())


@dataclass
class RowBasis:
    """Rows in reduced row echelon form.

    ``pivots[i]`` is the pivot column of ``rows[i]``; pivots increase and each
    pivot entry is 1.
    """

    field: Field
    ncols: int
    rows: List[Row]
    pivots: List[int]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def as_matrix(self) -> SparseMatrix:
        return SparseMatrix(self.field, self.ncols, [dict(r) for r in self.rows])

    def residue(self, v: Row) -> Row:
        """Reduce ``v`` modulo the row space; zero iff ``v`` is in the span."""
        res = dict(v)
        F = self.field
        for r, c in zip(self.rows, self.pivots):
            x = res.get(c)
            if x:
                F.axpy(res, x, r)
        return res

    def contains(self, v: Row) -> bool:
        return not self.residue(v)

    def __eq__(self, other):
        if not isinstance(other, RowBasis):
            return NotImplemented
        return (self.field == other.field and self.ncols == other.ncols
                and self.pivots == other.pivots and self.rows == other.rows)


def _forward(m: SparseMatrix) -> Tuple[List[Row], List[int]]:
    """Column-ordered structured elimination.

    Columns are visited in increasing order.  The pivot for a column is the
    sparsest active row containing it (ties to the lowest row index); the
    column is then cleared from every other active row.  Returns the pivot
    rows (normalized to a leading 1) in pivot-column order.
    """
    F = m.field
    active: Dict[int, Row] = {}
    colidx: Dict[int, set] = {}
    heap: List[int] = []
    for i, r in enumerate(m.rows):
        if not r:
            continue
        active[i] = dict(r)
        for c in r:
            s = colidx.get(c)
            if s is None:
                colidx[c] = {i}
                heap.append(c)
            else:
                s.add(i)
    heapq.heapify(heap)

    pivot_rows: List[Row] = []
    pivots: List[int] = []
    while heap:
        c = heapq.heappop(heap)
        cand = colidx.pop(c, None)
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(active[i]), i))
        prow = active.pop(piv)
        for cc in prow:
            if cc != c:
                colidx[cc].discard(piv)
        lead = prow[c]
        if lead != 1:
            prow = F.scale(prow, F.inv(lead))
        cand.discard(piv)
        for i in cand:
            row = active[i]
            before = row.keys() - {c}
            F.axpy(row, row[c], prow)
            after = row.keys()
            for cc in before - after:
                colidx[cc].discard(i)
            for cc in after - before:
                s = colidx.get(cc)
                if s is None:
                    colidx[cc] = {i}
                    heapq.heappush(heap, cc)
                else:
                    s.add(i)
            if not row:
                del active[i]
        pivot_rows.append(prow)
        pivots.append(c)
    return pivot_rows, pivots


DENSE_ROW_LENGTH = 6  # mean stored entries per row above which fill-in dominates


def _flint_rank(m: SparseMatrix) -> int:
    import flint

    F = m.field
    if F.characteristic == 0:
        A = flint.fmpz_mat(m.nrows, m.ncols)
        for i, r in enumerate(m.rows):
            # scaling a row by a nonzero rational leaves the rank unchanged
            for c, v in integer_row(r).items():
                A[i, c] = v
    else:
        A = flint.nmod_mat(m.nrows, m.ncols, F.characteristic)
        for i, r in enumerate(m.rows):
            for c, v in r.items():
                A[i, c] = v
    return A.rank()


def integer_row(r: Row) -> Dict[int, int]:
    """Primitive integer multiple of a rational row."""
    den = 1
    for v in r.values():
        den = den * v.denominator // gcd(den, v.denominator)
    iv = {c: int(v * den) for c, v in r.items()}
    g = gcd(*iv.values()) if iv else 1
    return {c: x // g for c, x in iv.items()}


def is_dense(m: SparseMatrix) -> bool:
    nnz = sum(len(r) for r in m.rows)
    return m.nrows > 0 and nnz > DENSE_ROW_LENGTH * m.nrows


def rank(m: SparseMatrix, backend: str = "auto") -> int:
    """Exact rank.

    ``backend`` is ``sparse`` (the structured elimination here), ``flint``
    (dense FLINT matrices) or ``auto``, which picks FLINT for dense input.
    """
    if backend == "auto":
        backend = "flint" if is_dense(m) else "sparse"
    if backend == "flint":
        return _flint_rank(m)
    if backend == "sparse":
        return len(_forward(m)[1])
    raise ValueError(f"unknown backend {backend!r}")


def row_reduce(m: SparseMatrix) -> RowBasis:
    """Reduced row echelon form with the deterministic pivot rule of :func:`_forward`."""
    rows, pivots = _forward(m)
    F = m.field
    pivot_of = {c: k for k, c in enumerate(pivots)}
    # back substitution, last pivot first so every row used is already reduced
    for k in range(len(rows) - 1, -1, -1):
        r = rows[k]
        c0 = pivots[k]
        hits = sorted(c for c in r if c != c0 and c in pivot_of)
        for c in hits:
            x = r.get(c)
            if x:
                F.axpy(r, x, rows[pivot_of[c]])
    return RowBasis(F, m.ncols, rows, pivots)


def kernel(m: SparseMatrix) -> RowBasis:
    """Basis of the right null space ``{v : m v = 0}`` in reduced echelon form."""
    b = row_reduce(m)
    F = m.field
    pivset = set(b.pivots)
    # column j -> [(pivot column, entry)] over the reduced rows
    bycol: Dict[int, List[Tuple[int, object]]] = {}
    for r, c0 in zip(b.rows, b.pivots):
        for c, v in r.items():
            if c != c0:
                bycol.setdefault(c, []).append((c0, v))
    vecs = []
    for j in range(m.ncols):
        if j in pivset:
            continue
        v = {j: F.one}
        for c0, x in bycol.get(j, ()):
            v[c0] = F(-x)
        vecs.append(v)
    return row_reduce(SparseMatrix(F, m.ncols, vecs))


def combine(F: Field, ncols: int, coeffs: Sequence, rows: Sequence[Row]) -> Row:
    """Evaluate ``sum(coeffs[i] * rows[i])`` exactly."""
    out: Row = {}
    for a, r in zip(coeffs, rows):
        if a:
            F.axpy(out, -a, r)
    return out


class IncrementalBasis:
    """Echelon basis grown one row at a time.

    Each stored row has a leading (lowest) column carrying coefficient 1 and
    no stored row shares a leading column.  With ``track=True`` every stored
    row remembers its expression in terms of the inserted rows' labels, so
    membership answers come with a certificate.
    """

    def __init__(self, F: Field, ncols: int, track: bool = False):
        self.field = F
        self.ncols = ncols
        self.track = track
        self.lead: Dict[int, Row] = {}
        self.certs: Dict[int, Dict[Hashable, object]] = {}

    @property
    def rank(self) -> int:
        return len(self.lead)

    @property
    def full(self) -> bool:
        return len(self.lead) == self.ncols

    def _reduce(self, row: Row, cert, stop_at_free: bool):
        F = self.field
        lead = self.lead
        res = dict(row)
        heap = list(res)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            x = res.get(c)
            if not x:
                continue
            prow = lead.get(c)
            if prow is None:
                if stop_at_free:
                    return res, c, cert
                continue
            before = res.keys()
            new = [cc for cc in prow if cc not in before]
            F.axpy(res, x, prow)
            for cc in new:
                heapq.heappush(heap, cc)
            if cert is not None:
                F.axpy(cert, x, self.certs[c])
        return res, None, cert

    def insert(self, row: Row, label: Hashable = None) -> bool:
        """Add ``row``; return True when it increased the rank."""
        F = self.field
        cert = {label: F.one} if self.track else None
        res, c, cert = self._reduce(row, cert, stop_at_free=True)
        if c is None:
            return False
        x = res[c]
        if x != 1:
            inv = F.inv(x)
            res = F.scale(res, inv)
            if cert is not None:
                cert = F.scale(cert, inv)
        self.lead[c] = res
        if cert is not None:
            self.certs[c] = cert
        return True

    def residue(self, row: Row) -> Row:
        return self._reduce(row, None, stop_at_free=False)[0]

    def certificate(self, row: Row) -> Optional[Dict[Hashable, object]]:
        """Coefficients over inserted labels reproducing ``row``, or None."""
        if not self.track:
            raise RuntimeError("basis was built without certificate tracking")
        F = self.field
        res, _, cert = self._reduce(row, {}, stop_at_free=True)
        if res:
            return None
        # the accumulator holds minus the combination that was subtracted from row
        neg = F(-1)
        return {k: F(v * neg) for k, v in cert.items() if v}


def streaming_rank(F: Field, ncols: int, rows: Iterable[Row]) -> int:
    """Rank of a row stream, stopping early once the rank is full."""
    b = IncrementalBasis(F, ncols)
    for r in rows:
        b.insert(r)
        if b.full:
            break
    return b.rank


def in_span_with_certificate(v: Row, b: RowBasis, originals: SparseMatrix) -> Optional[List]:
    """Coefficients ``c`` with ``v == sum(c[i] * originals.rows[i])``, or None.

    ``b`` must be ``row_reduce(originals)``; it answers membership cheaply and
    the coefficients are only solved for when ``v`` is in the span.
    """
    if b.ncols != originals.ncols:
        raise MalformedMatrixError("basis and originals disagree on column count")
    if any(not 0 <= c < b.ncols for c in v):
        raise MalformedMatrixError("vector has columns outside the matrix")
    if not b.contains(v):
        return None
    F = originals.field
    ib = IncrementalBasis(F, originals.ncols, track=True)
    for i, r in enumerate(originals.rows):
        ib.insert(r, i)
    cert = ib.certificate(v)
    if cert is None:  # pragma: no cover - b and originals disagree
        raise MalformedMatrixError("basis is not the reduction of originals")
    return [cert.get(i, F.zero) for i in range(originals.nrows)]
