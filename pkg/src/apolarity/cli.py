"""Command line interface.

Exit codes: 0 the condition holds (or a certificate was found), 1 it fails,
2 bad input, 3 the two dimension algorithms disagree.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .apolar import ApolarIdeal
from .exactalg import Field, parse_field
from .families import (UnsupportedNError, auxiliary_generators, family_context,
                       family_cubic, monomial_form, random_cubic)
from .m2 import m2_script
from .ring import (FormParseError, HomogeneousForm, RingContext, format_form, multiply,
                   parse_form, variables_in)
from .tangent import MethodDisagreement, SquareSpan, check_small_tangent

EXIT_HOLDS, EXIT_FAILS, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3

RANDOM_FIELD = "fp:32003"
FAMILY_FIELD = "q"


class InputError(ValueError):
    pass


@dataclass
class ReportDocument:
    n: int
    field: str
    polynomial: str
    hf_quotient: List[int]
    hf_square: List[Optional[int]]
    condition_holds: bool
    tangent_hf: Optional[List[int]]
    failure_reason: Optional[str]
    timing: Dict[str, float] = field(default_factory=dict)
    methods: List[Optional[str]] = field(default_factory=list)
    source: str = ""
    error: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))


def run_check(f: HomogeneousForm, method: str = "auto", source: str = "") -> ReportDocument:
    v = check_small_tangent(f, method)
    return ReportDocument(
        n=f.ctx.n, field=str(f.ctx.field), polynomial=format_form(f),
        hf_quotient=list(v.hf_quotient), hf_square=list(v.hf_square),
        condition_holds=v.condition_holds,
        tangent_hf=list(v.tangent_hf) if v.tangent_hf else None,
        failure_reason=v.failure_reason,
        timing={k: round(t, 6) for k, t in v.timing.items()},
        methods=list(v.methods), source=source)


def context_for(text: str, n: int, F: Field) -> RingContext:
    """Family names when they cover the polynomial's variables, else x1..xn."""
    names = set(variables_in(text))
    try:
        ctx = family_context(n, F)
        if names <= set(ctx.names):
            return ctx
    except UnsupportedNError:
        pass
    ctx = RingContext(n, F)
    if names <= set(ctx.names):
        return ctx
    raise InputError(f"variables {sorted(names - set(ctx.names))} are not among "
                     f"x1..x{n} or the family names for n={n}")


def read_cubic(path: str, n: int, F: Field) -> HomogeneousForm:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    f = parse_form(text, context_for(text, n, F), dual=True)
    if f.is_zero():
        raise InputError("polynomial is zero")
    if f.degree != 3:
        raise InputError(f"polynomial has degree {f.degree}, expected 3")
    return f


# ------------------------------------------------------------------ check

def _format_human(r: ReportDocument) -> str:
    def val(x):
        return "?" if x is None else str(x)

    hq, hs = r.hf_quotient, r.hf_square
    checks = [
        ("HF(S/I)_0 == 1", hq[0] if hq else None, lambda x: x == 1),
        ("HF(S/I)_1 == n", hq[1] if len(hq) > 1 else None, lambda x: x == r.n),
        ("HF(S/I^2)_4 == n", hs[4], lambda x: x == r.n),
        ("HF(S/I^2)_5 == 0", hs[5], lambda x: x == 0),
    ]
    lines = [f"n = {r.n}, field = {r.field}, source = {r.source or 'input'}",
             f"F = {r.polynomial}"]
    for label, x, ok in checks:
        tag = "skip" if x is None else ("pass" if ok(x) else "FAIL")
        lines.append(f"  [{tag}] {label:<18} ({val(x)})")
    lines.append(f"HF(S/I)   = ({', '.join(map(val, hq))})")
    lines.append(f"HF(S/I^2) = ({', '.join(map(val, hs))})  methods: {', '.join(map(val, r.methods))}")
    if r.tangent_hf:
        lines.append(f"tangent HF at degrees -1, 0, 1 = ({', '.join(map(str, r.tangent_hf))})")
    verdict = "holds" if r.condition_holds else f"fails ({r.failure_reason})"
    lines.append(f"small tangent space condition: {verdict}")
    if r.condition_holds:
        lines.append("  => Ann(F) is a smooth point of an elementary component of the Hilbert scheme")
    lines.append("timing: " + ", ".join(f"{k} {t:.3f}s" for k, t in r.timing.items()))
    return "\n".join(lines)


def cmd_check(args) -> int:
    F = parse_field(args.field or (FAMILY_FIELD if args.family else RANDOM_FIELD))
    if args.family:
        f, source = family_cubic(args.n, F), "family"
    elif args.random is not None:
        f, source = random_cubic(args.n, F, seed=args.random), f"random:{args.random}"
    else:
        f, source = read_cubic(args.poly, args.n, F), f"file:{args.poly}"
    r = run_check(f, args.method, source)
    print(r.to_json() if args.json else _format_human(r))
    return EXIT_HOLDS if r.condition_holds else EXIT_FAILS


# ------------------------------------------------------------------ sweep

def _sweep_entry(task) -> ReportDocument:
    n, fld, seed, method = task
    F = parse_field(fld)
    try:
        if seed is None:
            f, source = family_cubic(n, F), "family"
        else:
            f, source = random_cubic(n, F, seed=seed), f"random:{seed}"
        return run_check(f, method, source)
    except (UnsupportedNError, MethodDisagreement, ValueError) as exc:
        src = "family" if seed is None else f"random:{seed}"
        return ReportDocument(n, str(F), "", [], [None] * 6, False, None, None,
                              source=src, error=f"{type(exc).__name__}: {exc}")


CSV_COLUMNS = ["n", "field", "source", "condition_holds", "failure_reason", "hf_quotient",
               "hf_square", "tangent_hf", "t_apolar", "t_degree4", "t_degree5", "error"]


def _csv_row(r: ReportDocument) -> Dict[str, object]:
    def seq(x):
        return "" if not x else " ".join("" if v is None else str(v) for v in x)

    return {"n": r.n, "field": r.field, "source": r.source,
            "condition_holds": int(r.condition_holds), "failure_reason": r.failure_reason or "",
            "hf_quotient": seq(r.hf_quotient), "hf_square": seq(r.hf_square),
            "tangent_hf": seq(r.tangent_hf),
            "t_apolar": r.timing.get("apolar", ""), "t_degree4": r.timing.get("degree4", ""),
            "t_degree5": r.timing.get("degree5", ""), "error": r.error or ""}


def _field_key(text: str):
    F = parse_field(text)
    return (F.characteristic == 0, F.characteristic)


def run_sweep(n_min: int, n_max: int, fields: List[str], random_count: int = 0, seed: int = 0,
              method: str = "auto", jobs: int = 1) -> List[ReportDocument]:
    fields = sorted({str(parse_field(f)) for f in fields}, key=_field_key)
    tasks = []
    for n in range(n_min, n_max + 1):
        for fld in fields:
            if random_count:
                tasks += [(n, fld, seed + k, method) for k in range(random_count)]
            else:
                tasks.append((n, fld, None, method))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_entry, tasks))
    return [_sweep_entry(t) for t in tasks]


def write_sweep(reports: List[ReportDocument], out: Path, plot: bool = True) -> List[Path]:
    out = Path(out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            w.writeheader()
            for r in reports:
                w.writerow(_csv_row(r))
        jpath = out.with_suffix(".jsonl")
        jpath.write_text("".join(r.to_json() + "\n" for r in reports), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from None
    written = [out, jpath]
    if plot:
        from .plotting import plot_sweep

        written.append(plot_sweep(reports, out.with_suffix(".png")))
    return written


def summarize(reports: List[ReportDocument]) -> str:
    groups: Dict[tuple, List[ReportDocument]] = {}
    for r in reports:
        groups.setdefault((r.n, r.field), []).append(r)
    lines = [f"{'n':>3}  {'field':<10} {'holds':>7}  {'HF(S/I^2)_4':>12}  notes"]
    for (n, fld), rs in groups.items():
        held = sum(r.condition_holds for r in rs)
        h4 = sorted({r.hf_square[4] for r in rs if r.hf_square and r.hf_square[4] is not None})
        notes = sorted({r.error.split(":")[0] if r.error else (r.failure_reason or "") for r in rs} - {""})
        lines.append(f"{n:>3}  {fld:<10} {held:>3}/{len(rs):<3}  {','.join(map(str, h4)) or '-':>12}  "
                     f"{' '.join(notes)}")
    return "\n".join(lines)


def cmd_sweep(args) -> int:
    if args.n_min > args.n_max or args.n_min < 1:
        raise InputError("need 1 <= n-min <= n-max")
    fields = [f for f in args.fields.split(",") if f.strip()]
    for f in fields:
        parse_field(f)
    out = Path(args.out)
    try:
        # fail before the sweep rather than after it
        out.parent.mkdir(parents=True, exist_ok=True)
        out.open("a").close()
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from None
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("APOLAR_JOBS", "1"))
    if jobs < 1:
        raise InputError("--jobs must be at least 1")
    reports = run_sweep(args.n_min, args.n_max, fields, args.random, args.seed, args.method, jobs)
    paths = write_sweep(reports, out, plot=not args.no_plot)
    print(summarize(reports))
    print("wrote " + ", ".join(map(str, paths)))
    return EXIT_HOLDS if all(r.condition_holds for r in reports) else EXIT_FAILS


# ------------------------------------------------------------------ witness

def _extras(n: int, ctx: RingContext, degree: int) -> List[HomogeneousForm]:
    gens = [monomial_form(ctx, g) for g in auxiliary_generators(n)]
    if degree == 4:
        return gens
    return [multiply(ctx.var(k), g) for g in gens for k in range(ctx.n)]


def cmd_witness(args) -> int:
    F = parse_field(args.field or FAMILY_FIELD)
    f = family_cubic(args.n, F)
    ctx = f.ctx
    target = parse_form(args.target, ctx, dual=False)
    if target.is_zero():
        raise InputError("target is zero")
    if target.degree not in (4, 5):
        raise InputError(f"target has degree {target.degree}; witnesses exist in degrees 4 and 5")
    I = ApolarIdeal.of(f)
    sp = SquareSpan(I, target.degree, extras=_extras(args.n, ctx, target.degree))
    w = sp.witness(target)
    e = target.degree
    doc = {"n": args.n, "field": str(F), "target": format_form(target), "degree": e}
    if w is None:
        res = sp.residue(target)
        doc.update(member=False, in_square=False, residue_nonzero=len(res))
        text = (f"{format_form(target)} is not a member of (I^2)_{e}"
                f" (residue has {len(res)} nonzero coordinates)")
    else:
        assert w.verify(f)
        doc.update(member=True, in_square=w.in_square,
                   terms=[[str(c), format_form(g), format_form(h)] for c, g, h in w.terms],
                   extra_terms=[[str(c), format_form(q)] for c, q in w.extra_terms])
        head = (f"{format_form(target)} is in (I^2)_{e}:" if w.in_square else
                f"{format_form(target)} is not a member of (I^2)_{e}; it lies in I^2 + "
                f"<auxiliary generators> using {len(w.extra_terms)} of them:")
        body = [f"  {c} * ({format_form(g)}) * ({format_form(h)})" for c, g, h in w.terms]
        body += [f"  {c} * {format_form(q)}    [auxiliary generator]" for c, q in w.extra_terms]
        text = "\n".join([head] + body)
    print(json.dumps(doc) if args.json else text)
    return EXIT_HOLDS if w is not None else EXIT_FAILS


# ------------------------------------------------------------------ export

def cmd_export_m2(args) -> int:
    F = parse_field(args.field or FAMILY_FIELD)
    script = m2_script(args.n, F)
    if args.out in (None, "-"):
        sys.stdout.write(script)
    else:
        try:
            Path(args.out).write_text(script, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from None
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apolarity",
                                description="Small tangent space checks for apolar algebras of cubics.")
    sub = p.add_subparsers(dest="command", required=True)
    methods = ["auto", "dual", "span", "both"]

    c = sub.add_parser("check", help="decide the condition for one cubic")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--field", help="q or fp:<p> (default q for --family, fp:32003 otherwise)")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", action="store_true", help="use the explicit family cubic")
    src.add_argument("--poly", metavar="FILE", help="cubic in the text grammar")
    src.add_argument("--random", type=int, metavar="SEED", help="random dense cubic")
    c.add_argument("--method", choices=methods, default="auto")
    c.add_argument("--json", action="store_true", help="one-line JSON report")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="check a range of n over several fields")
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--fields", default="q,fp:2,fp:3", help="comma separated, e.g. q,fp:2")
    s.add_argument("--random", type=int, default=0, metavar="K",
                   help="K random cubics per (n, field) instead of the family")
    s.add_argument("--seed", type=int, default=0, help="first seed for --random")
    s.add_argument("--method", choices=methods, default="auto")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default $APOLAR_JOBS or 1)")
    s.add_argument("--out", required=True, help="CSV path; .jsonl and .png are written next to it")
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(func=cmd_sweep)

    w = sub.add_parser("witness", help="certify membership of a monomial in Ann(F)^2")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--field")
    w.add_argument("--family", action="store_true", default=True)
    w.add_argument("--target", required=True, help="degree 4 or 5 form, e.g. a1^4")
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_witness)

    x = sub.add_parser("export-m2", help="write a Macaulay2 script for the family cubic")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--field")
    x.add_argument("--out", help="output file (default stdout)")
    x.set_defaults(func=cmd_export_m2)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        return args.func(args)
    except MethodDisagreement as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (InputError, FormParseError, UnsupportedNError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
