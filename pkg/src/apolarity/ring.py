"""Graded pieces of S = k[alpha_1..alpha_n] and its divided power dual P.

Monomials of both rings are exponent tuples.  A monomial ``a`` of P stands for
the divided power ``x^[a]``, the functional dual to ``alpha^a``; contraction
by ``alpha^b`` sends it to ``x^[a-b]`` (no binomial factors) or to zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import Field, Row

Exp = Tuple[int, ...]


class ContextMismatchError(ValueError):
    pass


class FormParseError(ValueError):
    pass


@dataclass(frozen=True)
class RingContext:
    n: int
    field: Field
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one variable")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.n)))
        if len(self.names) != self.n or len(set(self.names)) != self.n:
            raise ValueError("variable names must be n distinct strings")

    @property
    def index_of(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.names)}

    def var(self, i: int, dual: bool = False) -> "HomogeneousForm":
        e = [0] * self.n
        e[i] = 1
        return HomogeneousForm(self, 1, {tuple(e): self.field.one}, dual)

    def monomial(self, e: Sequence[int], dual: bool = False) -> "HomogeneousForm":
        e = tuple(e)
        if len(e) != self.n:
            raise ContextMismatchError("exponent length differs from n")
        return HomogeneousForm(self, sum(e), {e: self.field.one}, dual)

    def zero(self, degree: int, dual: bool = False) -> "HomogeneousForm":
        return HomogeneousForm(self, degree, {}, dual)


@dataclass(frozen=True)
class MonomialIndexer:
    """Degree-d monomials in grlex order (variable 0 heaviest) and their positions."""

    n: int
    degree: int
    monomials: Tuple[Exp, ...]
    position: Dict[Exp, int] = field(compare=False, repr=False)

    def __len__(self):
        return len(self.monomials)

    def __getitem__(self, i: int) -> Exp:
        return self.monomials[i]


@lru_cache(maxsize=None)
def _basis(n: int, d: int) -> MonomialIndexer:
    mons = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        mons.append(tuple(e))
    # combinations_with_replacement already yields descending lex order of exponents
    return MonomialIndexer(n, d, tuple(mons), {m: i for i, m in enumerate(mons)})


def basis(ctx: RingContext | int, d: int) -> MonomialIndexer:
    n = ctx if isinstance(ctx, int) else ctx.n
    if d < 0:
        return MonomialIndexer(n, d, (), {})
    return _basis(n, d)


def dim(n: int, d: int) -> int:
    """Dimension of S_d in n variables."""
    return comb(n + d - 1, d) if d >= 0 else 0


def add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def sub_exp(a: Exp, b: Exp) -> Optional[Exp]:
    """``a - b`` when ``a >= b`` componentwise, else None."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class HomogeneousForm:
    """Sparse homogeneous element of S (``dual=False``) or of P (``dual=True``)."""

    ctx: RingContext
    degree: int
    coeffs: Dict[Exp, object]
    dual: bool = False

    def __post_init__(self):
        for e, v in self.coeffs.items():
            if len(e) != self.ctx.n or sum(e) != self.degree:
                raise ValueError(f"exponent {e} does not have degree {self.degree}")
            if not v:
                raise ValueError("zero coefficient stored")

    @classmethod
    def build(cls, ctx: RingContext, degree: int, terms: Iterable[Tuple[Exp, object]],
              dual: bool = False) -> "HomogeneousForm":
        """Sum the given terms (repeats allowed), coercing into the field."""
        F = ctx.field
        acc: Dict[Exp, object] = {}
        for e, v in terms:
            acc[e] = acc.get(e, 0) + v
        return cls(ctx, degree, {e: F(v) for e, v in acc.items() if F(v)}, dual)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        if self.ctx != other.ctx or self.dual != other.dual:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.degree, self.dual, frozenset(self.coeffs.items())))

    def __add__(self, other):
        _same(self, other)
        return HomogeneousForm.build(self.ctx, self.degree,
                                     list(self.coeffs.items()) + list(other.coeffs.items()), self.dual)

    def __neg__(self):
        F = self.ctx.field
        return HomogeneousForm(self.ctx, self.degree, {e: F(-v) for e, v in self.coeffs.items()}, self.dual)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "HomogeneousForm":
        F = self.ctx.field
        c = F(c)
        return HomogeneousForm(self.ctx, self.degree,
                               {e: F(v * c) for e, v in self.coeffs.items() if F(v * c)}, self.dual)

    def __mul__(self, other):
        if isinstance(other, HomogeneousForm):
            return multiply(self, other)
        return self.scaled(other)

    __rmul__ = scaled

    def to_row(self) -> Row:
        pos = basis(self.ctx.n, self.degree).position
        return {pos[e]: v for e, v in self.coeffs.items()}

    @classmethod
    def from_row(cls, ctx: RingContext, degree: int, row: Row, dual: bool = False) -> "HomogeneousForm":
        mons = basis(ctx.n, degree).monomials
        return cls(ctx, degree, {mons[c]: v for c, v in row.items()}, dual)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        side = "P" if self.dual else "S"
        return f"<{side}_{self.degree}: {format_form(self)}>"


def _same(s: HomogeneousForm, t: HomogeneousForm):
    if s.ctx != t.ctx:
        raise ContextMismatchError("forms live in different rings")
    if s.dual != t.dual:
        raise ContextMismatchError("cannot mix elements of S and P")
    if s.degree != t.degree and s.coeffs and t.coeffs:
        raise ValueError("degree mismatch")


def contract(b: Exp, g: HomogeneousForm) -> HomogeneousForm:
    """Contract the dual form ``g`` by the monomial ``alpha^b``."""
    if not g.dual:
        raise ContextMismatchError("contraction acts on elements of P")
    if len(b) != g.ctx.n:
        raise ContextMismatchError("exponent length differs from n")
    deg = g.degree - sum(b)
    out = {}
    if deg >= 0:
        for a, v in g.coeffs.items():
            r = sub_exp(a, b)
            if r is not None:
                out[r] = v
    return HomogeneousForm(g.ctx, deg, out, True)


def contract_poly(s: HomogeneousForm, g: HomogeneousForm) -> HomogeneousForm:
    """Bilinear extension of :func:`contract`: the action ``s . g``."""
    if s.dual or not g.dual:
        raise ContextMismatchError("need s in S and g in P")
    if s.ctx != g.ctx:
        raise ContextMismatchError("forms live in different rings")
    deg = g.degree - s.degree
    terms = []
    if deg >= 0:
        for b, sv in s.coeffs.items():
            for a, gv in g.coeffs.items():
                r = sub_exp(a, b)
                if r is not None:
                    terms.append((r, sv * gv))
    return HomogeneousForm.build(g.ctx, deg, terms, True)


def multiply(s: HomogeneousForm, t: HomogeneousForm) -> HomogeneousForm:
    """Ordinary product in S."""
    if s.ctx != t.ctx:
        raise ContextMismatchError("forms live in different rings")
    if s.dual or t.dual:
        raise ContextMismatchError("multiply is defined on S only")
    terms = [(add_exp(a, b), x * y) for a, x in s.coeffs.items() for b, y in t.coeffs.items()]
    return HomogeneousForm.build(s.ctx, s.degree + t.degree, terms)


def pairing(s: HomogeneousForm, g: HomogeneousForm):
    """Evaluation pairing of ``s`` in S_d with ``g`` in P_d."""
    if s.dual or not g.dual:
        raise ContextMismatchError("need s in S and g in P")
    if s.ctx != g.ctx:
        raise ContextMismatchError("forms live in different rings")
    if s.degree != g.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {g.degree}")
    F = s.ctx.field
    total = F.zero
    for e, v in s.coeffs.items():
        w = g.coeffs.get(e)
        if w:
            total = F(total + v * w)
    return total


def product_row(s: Row, t: Row, mons_s: Sequence[Exp], mons_t: Sequence[Exp],
                pos: Dict[Exp, int], F: Field) -> Row:
    """Product of two S-forms given as coordinate rows, as a row in the target degree."""
    out: Row = {}
    for i, x in s.items():
        a = mons_s[i]
        for j, y in t.items():
            c = pos[tuple(p + q for p, q in zip(a, mons_t[j]))]
            v = F(out.get(c, 0) + x * y)
            if v:
                out[c] = v
            else:
                out.pop(c, None)
    return out


# ---------------------------------------------------------------- text grammar

_ALLOWED = re.compile(r"^[a-zA-Z0-9^*+\- \t\r\n]*$")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[a-zA-Z]+\d*)|(?P<op>[+\-*^]))")


def _tokens(text: str):
    if not _ALLOWED.match(text):
        bad = sorted({ch for ch in text if not re.match(r"[a-zA-Z0-9^*+\- \t\r\n]", ch)})
        raise FormParseError(f"illegal characters: {''.join(bad)!r}")
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormParseError(f"cannot tokenize at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        yield kind, m.group(kind)


def parse_terms(text: str) -> List[Tuple[int, Dict[str, int]]]:
    """Parse the text grammar into ``(integer coefficient, {name: power})`` terms."""
    toks = list(_tokens(text))
    terms = []
    i = 0
    sign = 1
    if not toks:
        raise FormParseError("empty polynomial")
    expect_term = True
    coef: Optional[int] = None
    powers: Dict[str, int] = {}

    def flush():
        if coef is None and not powers:
            raise FormParseError("empty term")
        terms.append((sign * (1 if coef is None else coef), dict(powers)))

    while i < len(toks):
        kind, val = toks[i]
        if kind == "op" and val in "+-":
            if not expect_term:
                flush()
                coef, powers = None, {}
                sign = 1
            elif terms or i > 0:
                raise FormParseError("two signs in a row")
            sign = -1 if val == "-" else 1
            expect_term = True
            i += 1
            continue
        if kind == "num":
            if not expect_term or coef is not None or powers:
                raise FormParseError(f"unexpected number {val}")
            coef = int(val)
            expect_term = False
            i += 1
            continue
        if kind == "op" and val == "*":
            if expect_term and coef is None and not powers:
                raise FormParseError("'*' without left operand")
            if i + 1 >= len(toks) or toks[i + 1][0] != "var":
                raise FormParseError("'*' must be followed by a variable")
            i += 1
            continue
        if kind == "var":
            p = 1
            if i + 1 < len(toks) and toks[i + 1] == ("op", "^"):
                if i + 2 >= len(toks) or toks[i + 2][0] != "num":
                    raise FormParseError("'^' must be followed by a natural number")
                p = int(toks[i + 2][1])
                i += 2
            powers[val] = powers.get(val, 0) + p
            expect_term = False
            i += 1
            continue
        raise FormParseError(f"unexpected token {val!r}")
    if expect_term:
        raise FormParseError("polynomial ends with an operator")
    flush()
    return terms


def parse_form(text: str, ctx: RingContext, dual: bool = True) -> HomogeneousForm:
    """Parse a homogeneous form; in P, ``x^k`` denotes the divided power ``x^[k]``."""
    idx = ctx.index_of
    raw = []
    degrees = set()
    for c, powers in parse_terms(text):
        e = [0] * ctx.n
        for name, p in powers.items():
            if name not in idx:
                raise FormParseError(f"unknown variable {name!r}")
            e[idx[name]] += p
        raw.append((tuple(e), c))
        degrees.add(sum(e))
    acc: Dict[Exp, int] = {}
    for e, c in raw:
        acc[e] = acc.get(e, 0) + c
    nonzero = {e: ctx.field(c) for e, c in acc.items() if ctx.field(c)}
    degs = {sum(e) for e in nonzero}
    if len(degs) > 1:
        raise FormParseError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
    if not nonzero:
        # a zero form keeps its written degree when that is unambiguous
        return HomogeneousForm(ctx, degrees.pop() if len(degrees) == 1 else 0, {}, dual)
    return HomogeneousForm(ctx, degs.pop(), nonzero, dual)


def variables_in(text: str) -> List[str]:
    seen = []
    for _, powers in parse_terms(text):
        for v in powers:
            if v not in seen:
                seen.append(v)
    return seen


def _format_coef(v) -> str:
    return str(v)


def format_form(f: HomogeneousForm) -> str:
    """Render in the text grammar, terms in grlex order."""
    if not f.coeffs:
        return "0"
    F = f.ctx.field
    pos = basis(f.ctx.n, f.degree).position
    parts = []
    for e in sorted(f.coeffs, key=pos.__getitem__):
        v = f.coeffs[e]
        neg = False
        if F.characteristic == 0 and v < 0:
            neg, v = True, -v
        mon = "*".join(f"{name}^{k}" if k > 1 else name
                       for name, k in zip(f.ctx.names, e) if k)
        if v == 1 and mon:
            body = mon
        elif mon:
            body = f"{_format_coef(v)}*{mon}"
        else:
            body = _format_coef(v)
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[1:]
