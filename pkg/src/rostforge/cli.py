"""Command-line interface.

Exit codes: 0 on success, 2 for malformed input, 3 when a result is not
computable (including an exhausted rewrite budget).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import dsl, rank as rank_mod
from .cycles import AffineLine, ProjectiveLine, chow_group
from .errors import FieldError, NonTerminating, NotComputable, ParseError
from .fields import is_number_field
from .milnor import CLASSIC, ROST, MilnorClass, MilnorK, equivalent, expanded_class, norm as milnor_norm
from .schemas import envelope, validate_report

EXIT_OK, EXIT_USAGE, EXIT_NOT_COMPUTABLE = 0, 2, 3

_RANGE_FLAGS = ("--n-range", "--i-range", "--degrees")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _range(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _join_range_values(argv):
    """Let ``--n-range -2..4`` through argparse, which would read -2..4 as a flag."""
    out = []
    k = 0
    while k < len(argv):
        if argv[k] in _RANGE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def build_parser():
    p = _Parser(prog="rostforge", description="Milnor K-theory, cycle-module words and motivic rank tables.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_choices=("json", "text")):
        sp.add_argument("--format", choices=fmt_choices, default="text", help="output format (default: text)")

    ksym = sub.add_parser("ksym", help="Milnor K-theory symbols")
    ksub = ksym.add_subparsers(dest="action", required=True, parser_class=_Parser)
    kn = ksub.add_parser("normalize", help="canonical form of a class")
    kn.add_argument("--field", required=True)
    kn.add_argument("symbol")
    common(kn)
    kr = ksub.add_parser("residue", help="tame symbol at a place")
    kr.add_argument("--field", required=True)
    kr.add_argument("--at", required=True, help="place: (p) over Q, (f(t)) or inf over F(t)")
    kr.add_argument("--tame-sign", choices=(CLASSIC, ROST), default=CLASSIC)
    kr.add_argument("symbol")
    common(kr)
    km = ksub.add_parser("norm", help="norm along a finite extension (degrees 0 and 1)")
    km.add_argument("--ext", required=True, help="L/E, optionally 'L/E: x->image'")
    km.add_argument("symbol")
    common(km)

    morph = sub.add_parser("morph", help="morphism words")
    msub = morph.add_subparsers(dest="action", required=True, parser_class=_Parser)
    mn = msub.add_parser("normalize", help="rewrite a word to normal form")
    mn.add_argument("--field", help="source field (inferred from rst/nrm when omitted)")
    mn.add_argument("--n", type=int, default=0, help="source twist (default: 0)")
    mn.add_argument("--tame-sign", choices=(CLASSIC, ROST), default=CLASSIC)
    mn.add_argument("--budget", type=int, default=None,
                    help="rewrite step budget (default: ROSTFORGE_STEP_BUDGET or 10000)")
    mn.add_argument("word")
    common(mn)

    rk = sub.add_parser("rank", help="rank of rational motivic cohomology H^{n,i}")
    rk.add_argument("--field", required=True)
    rk.add_argument("--n", type=int, required=True)
    rk.add_argument("--i", type=int, required=True)
    rk.add_argument("--ring", choices=("field", "integers"), default="field",
                    help="the field itself, or its ring of integers (number fields)")
    rk.add_argument("--assume-conjectures", action="store_true")
    common(rk)

    rt = sub.add_parser("rank-table", help="rank table over a range of (n, i)")
    rt.add_argument("--field", required=True)
    rt.add_argument("--n-range", type=_range, default=(-2, 4), help="a..b (default: -2..4)")
    rt.add_argument("--i-range", type=_range, default=(-2, 8), help="a..b (default: -2..8)")
    rt.add_argument("--ring", choices=("field", "integers", "both"), default=None,
                    help="default: both for number fields, field otherwise")
    rt.add_argument("--assume-conjectures", action="store_true")
    rt.add_argument("--figure", help="write a heatmap per table (PNG/PDF/SVG by suffix)")
    common(rt, ("json", "md", "text"))

    bo = sub.add_parser("borel", help="Borel generators and K-group ranks")
    bo.add_argument("--r1", type=int, required=True)
    bo.add_argument("--r2", type=int, required=True)
    bo.add_argument("--degrees", type=_range, default=(2, 20), help="a..b with a >= 2 (default: 2..20)")
    bo.add_argument("--figure", help="write a bar chart of the ranks")
    common(bo, ("json", "md", "text"))

    ch = sub.add_parser("chow", help="truncated Chow groups with Milnor K coefficients")
    ch.add_argument("--model", choices=("A1", "P1"), default="A1")
    ch.add_argument("--field", required=True, help="a finite field")
    ch.add_argument("--twist", type=int, default=1, help="coefficient twist (default: 1)")
    ch.add_argument("--codim", type=int, default=0, help="0 or 1 (default: 0)")
    ch.add_argument("--bound", type=int, default=4, help="degree bound on closed points (default: 4)")
    common(ch)
    return p


# ---------------------------------------------------------------------------
# commands; each returns (command name, result dict, text lines, figures)


def _class_json(x):
    try:
        zero = equivalent(x, MilnorClass.zero(x.field, x.degree))
    except NotComputable:
        zero = None
    out = {"field": str(x.field), "degree": x.degree, "value": str(x), "is_zero": zero}
    try:
        out["expanded"] = str(expanded_class(x))
    except NotComputable:
        pass
    return out


def _cmd_ksym(args):
    if args.action == "norm":
        word = dsl.parse_word(f"nrm[{args.ext}]")
        (seq, _), = word.terms
        phi = seq[0].phi
        x = dsl.parse_symbol(args.symbol, phi.target)
        y = milnor_norm(x, phi)
        result = {"input": args.symbol, "extension": args.ext, "norm": _class_json(y)}
        return "ksym norm", result, [str(y)], []
    F = dsl.parse_field(args.field)
    x = dsl.parse_symbol(args.symbol, F)
    if args.action == "normalize":
        cls = _class_json(x)
        lines = [cls.get("expanded", cls["value"])]
        return "ksym normalize", {"input": args.symbol, "normal_form": cls}, lines, []
    v = dsl.parse_place(args.at, F)
    y = MilnorK(args.tame_sign).residue(v, x)
    result = {"input": args.symbol, "place": str(v), "tame_sign": args.tame_sign, "residue": _class_json(y)}
    return "ksym residue", result, [str(y)], []


def _cmd_morph(args):
    from .rewriter import normalize

    F = dsl.parse_field(args.field) if args.field else None
    w = dsl.parse_word(args.word, field=F, twist=args.n, sign=args.tame_sign)
    res = normalize(w, budget=args.budget, tame_sign=args.tame_sign)
    result = {"input": args.word, "source": w.source.to_json(), "target": w.target.to_json()}
    result.update(res.to_json())
    lines = [str(res.word), f"steps: {res.steps}"] + [f"  {s.rule}: {s.before}  ->  {s.after}" for s in res.trace]
    return "morph normalize", result, lines, []


def _record(K, ring, n, i, assume):
    if ring == "integers":
        d = rank_mod.rank_HB_OK(K, n, i)
    else:
        d = rank_mod.rank_HB(K, n, i, assume_conjectures=assume)
    return {"field": str(K), "ring": ring, "n": n, "i": i, **d.to_json()}


def _cmd_rank(args):
    K = dsl.parse_field(args.field)
    if args.ring == "integers" and not is_number_field(K):
        raise FieldError(f"{K} is not a number field; --ring integers needs one")
    rec = _record(K, args.ring, args.n, args.i, args.assume_conjectures)
    value = rank_mod.rank_from_json(rec["rank"])
    lines = [f"H^{{{args.n},{args.i}}}({'O_K' if args.ring == 'integers' else K}) : {value}"]
    lines += [f"  {t}" for t in rec["trace"]]
    return "rank", rec, lines, []


def _short(rank_json):
    tag = next(iter(rank_json))
    if tag == "zero":
        return "0"
    if tag == "finite":
        return str(rank_json["finite"])
    if tag == "countably_infinite":
        return "aleph0"
    if tag == "cardinal_of_field":
        return "card(K)"
    lower = rank_json["unknown"]
    return "?" if lower is None else f"?>={_short(lower)}"


def _grid(records, n_range, i_range, md):
    cell = {(r["n"], r["i"]): _short(r["rank"]) for r in records}
    cols = list(range(i_range[0], i_range[1] + 1))
    header = ["n \\ i"] + [str(i) for i in cols]
    rows = [[str(n)] + [cell[(n, i)] for i in cols] for n in range(n_range[0], n_range[1] + 1)]
    if md:
        out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        out += ["| " + " | ".join(r) + " |" for r in rows]
        return out
    width = max(len(c) for r in rows + [header] for c in r)
    return ["  ".join(c.rjust(width) for c in r) for r in [header] + rows]


def _case_rows(K, ring):
    """The number-field theorem's cases, in its order, with this field's values."""
    look = rank_mod.rank_HB_OK if ring == "integers" else rank_mod.rank_HB
    cases = [("n=i=0", 0, 0), ("n=i=1", 1, 1), ("n=1, i>1, i even", 1, 2), ("n=1, i>1, i odd", 1, 3)]
    if ring == "integers":
        cases.append(("n=2, i=1", 2, 1))
    rows = [(label, _short(look(K, n, i).value.to_json())) for label, n, i in cases]
    rows.append(("otherwise", "0"))
    return rows


def _cmd_rank_table(args):
    K = dsl.parse_field(args.field)
    nf = is_number_field(K)
    ring = args.ring or ("both" if nf else "field")
    if ring != "field" and not nf:
        raise FieldError(f"{K} is not a number field; ring of integers tables need one")
    rings = ["field", "integers"] if ring == "both" else [ring]
    tables = {}
    for r in rings:
        tables[r] = [_record(K, r, n, i, args.assume_conjectures)
                     for n in range(args.n_range[0], args.n_range[1] + 1)
                     for i in range(args.i_range[0], args.i_range[1] + 1)]
    result = {"field": str(K), "n_range": list(args.n_range), "i_range": list(args.i_range), "tables": tables}
    md = args.format == "md"
    lines = []
    for r in rings:
        name = "O_K" if r == "integers" else str(K)
        lines.append(f"## H^{{n,i}}({name})" if md else f"H^{{n,i}}({name}), rows n, columns i")
        if md:
            lines.append("")
        if nf:
            if md:
                lines += ["| case | rank |", "|---|---|"] + [f"| {a} | {b} |" for a, b in _case_rows(K, r)]
                lines.append("")
            else:
                lines += [f"  {a}: {b}" for a, b in _case_rows(K, r)]
        lines += _grid(tables[r], args.n_range, args.i_range, md)
        lines.append("")
    figures = []
    if args.figure:
        from .plotting import rank_heatmap

        for r in rings:
            path = Path(args.figure)
            if len(rings) > 1 and r == "integers":
                path = path.with_name(f"{path.stem}-integers{path.suffix}")
            name = "O_K" if r == "integers" else str(K)
            figures.append(rank_heatmap(tables[r], f"rank of H^(n,i)({name})", str(path)))
    return "rank-table", result, lines, figures


def _cmd_borel(args):
    if args.r1 < 0 or args.r2 < 0:
        raise FieldError("r1 and r2 must be nonnegative")
    a, b = args.degrees
    if a < 2:
        raise FieldError("K-group ranks are reported for degrees >= 2")
    r1, r2 = args.r1, args.r2
    gens = rank_mod.borel_generators(r1, r2, b)
    kr = [{"degree": n, "rank": rank_mod.k_rank(r1, r2, n)} for n in range(a, b + 1)]
    result = {"r1": r1, "r2": r2, "degrees": [a, b], "generators": gens.to_json(), "k_ranks": kr}
    if args.format == "md":
        lines = ["| degree | rank |", "|---|---|"] + [f"| {d['degree']} | {d['rank']} |" for d in kr]
    else:
        lines = [f"generators (degree, weight, multiplicity): {list(gens)}"]
        lines += [f"  rank K_{d['degree']} = {d['rank']}" for d in kr]
    figures = []
    if args.figure:
        from .plotting import borel_bars

        figures.append(borel_bars(kr, f"K-group ranks, r1={r1}, r2={r2}", args.figure))
    return "borel", result, lines, figures


def _cmd_chow(args):
    F = dsl.parse_field(args.field)
    X = (ProjectiveLine if args.model == "P1" else AffineLine)(F)
    rep = chow_group(X, twist=args.twist, bound=args.bound, codim=args.codim)
    result = rep.to_json()
    tors = " + ".join(f"Z/{d}" for d in rep.invariant_factors)
    free = f"Z^{rep.free_rank}" if rep.free_rank else ""
    group = " + ".join(s for s in (free, tors) if s) or "0"
    lines = [f"A^{args.codim}({X}; K^M_{args.twist}) = {group}  (bound {args.bound}, "
             f"{'stable' if rep.stabilized else 'not yet stable'} at bound {args.bound + 1})"]
    return "chow", result, lines, []


_DISPATCH = {"ksym": _cmd_ksym, "morph": _cmd_morph, "rank": _cmd_rank, "rank-table": _cmd_rank_table,
             "borel": _cmd_borel, "chow": _cmd_chow}


def _command_name(args):
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def _emit_error(args, exc, code, out, err):
    info = {"type": type(exc).__name__, "message": str(exc.args[0] if exc.args else exc)}
    if isinstance(exc, ParseError):
        info["position"] = exc.pos
        info["input"] = exc.text
    if args is not None and getattr(args, "format", "text") == "json":
        report = envelope(_command_name(args), error=info)
        validate_report(report)
        print(json.dumps(report, indent=2), file=out)
    else:
        msg = exc.diagnostic() if isinstance(exc, ParseError) else info["message"]
        print(f"error: {msg}", file=err)
    return code


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_range_values(argv))
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=err)
        print(str(exc), file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        name, result, lines, figures = _DISPATCH[args.command](args)
    except (ParseError, FieldError) as exc:
        return _emit_error(args, exc, EXIT_USAGE, out, err)
    except (NotComputable, NonTerminating) as exc:
        return _emit_error(args, exc, EXIT_NOT_COMPUTABLE, out, err)
    if args.format == "json":
        report = envelope(name, result, figures=figures)
        validate_report(report)
        print(json.dumps(report, indent=2), file=out)
    else:
        for line in lines:
            print(line, file=out)
        for path in figures:
            print(f"figure: {path}", file=out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
