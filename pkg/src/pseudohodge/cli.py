"""Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 unsupported evaluator.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .algebra import check_indices, codim_part, mumford_lhs, mumford_rhs
from .arith import rational_to_json
from .graphs import format_graph
from .hodge import (
    UnsupportedHodgePart,
    cor_closed_form,
    mfint_full,
    mumford_integral_family,
    ps_faber,
    qhi_lhs_via_graphs,
    qhi_rhs,
)
from .psipoly import PsiPolynomial, compositions
from .series import Bounds, build_F, defect_cells, exp_z_over_24, series_equal_report
from .wk import TauIndex, WKCapExceeded, default_engine

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3
CACHE_FILE = "wk_cache.json"


class UsageError(Exception):
    pass


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _textable(obj: Any) -> str:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return ",".join(_textable(v) for v in obj)
    return str(obj)


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _parse_F(text: str | None, n: int) -> PsiPolynomial:
    if text is None or text.strip() == "":
        return PsiPolynomial.constant(n)
    try:
        F = PsiPolynomial.parse(text, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return F


def _warn_force(g: int, n: int, force: bool) -> None:
    if force and g + n <= 2:
        print(f"warning: ({g}, {n}) is not a pseudostable index; computing formally", file=sys.stderr)


def _check(g: int, n: int, force: bool) -> None:
    try:
        if g > 0:
            check_indices(g, n, force)
        elif 2 * g - 2 + n <= 0:
            raise ValueError(f"({g}, {n}) is not a stable index")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _warn_force(g, n, force)


# -- commands --------------------------------------------------------------------


def cmd_wk(args) -> tuple[dict, int]:
    d = _parse_ints(args.d)
    try:
        idx = TauIndex(args.g, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not idx.stable:
        raise UsageError(f"unstable index g={args.g}, n={idx.n}")
    value = default_engine.value(idx.g, idx.d)
    return {"g": args.g, "d": list(d), "value": value, "admissible": idx.admissible}, EXIT_OK


def cmd_mumford_verify(args) -> tuple[dict, int]:
    _check(args.g, args.n, args.force)
    lhs = mumford_lhs(args.g, args.n, force=args.force)
    rhs = mumford_rhs(args.g, args.n, force=args.force)
    if args.codim is not None:
        lhs, rhs = codim_part(lhs, args.codim), codim_part(rhs, args.codim)
    diff = lhs - rhs
    out = {
        "g": args.g,
        "n": args.n,
        "codim": args.codim,
        "match": not diff,
        "lhs_terms": len(lhs),
        "rhs_terms": len(rhs),
        "diff": [{"graph": format_graph(gr), "coeff": c} for gr, c in diff.sorted_items()],
    }
    if args.show:
        out["lhs"] = [{"graph": format_graph(gr), "coeff": c} for gr, c in lhs.sorted_items()]
    return out, EXIT_OK if not diff else EXIT_MISMATCH


def cmd_qhi(args) -> tuple[dict, int]:
    _check(args.g, args.n, args.force)
    F = _parse_F(args.F, args.n)
    if not (0 <= args.i <= args.g and 0 <= args.j <= args.g):
        raise UsageError(f"lambda indices ({args.i}, {args.j}) out of range for genus {args.g}")
    lhs = qhi_lhs_via_graphs(args.g, args.n, args.i, args.j, F, force=args.force)
    rhs = qhi_rhs(args.g, args.n, args.i, args.j, F, force=args.force)
    out = {"g": args.g, "n": args.n, "i": args.i, "j": args.j, "F": args.F or "1",
           "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}
    return out, EXIT_OK if lhs == rhs else EXIT_MISMATCH


def _minimal_n(g: int) -> int:
    return 2 if g == 1 else 1


def _genus_range(args) -> range:
    if args.g is not None:
        return range(args.g, args.g + 1)
    return range(1, args.gmax + 1)


def cmd_table(args) -> tuple[dict, int]:
    rows: list[dict] = []
    ok = True
    if args.family == "cor-values":
        columns = ["g", "n", "k", "value", "closed_form", "match"]
        for g in _genus_range(args):
            n = args.n if args.n is not None else _minimal_n(g)
            _check(g, n, args.force)
            for k in range(g + 1):
                v = mumford_integral_family(g, n, k, force=args.force)
                c = cor_closed_form(g, k)
                ok &= v == c
                rows.append({"g": g, "n": n, "k": k, "value": v, "closed_form": c, "match": v == c})
    elif args.family == "ps-faber":
        columns = ["g", "n", "d", "ps_faber", "qhi_rhs", "match"]
        ns = [args.n] if args.n is not None else [1, 2]
        for g in _genus_range(args):
            for n in ns:
                if g + n <= 2 and not args.force:
                    continue
                if args.d is not None:
                    ds = [_parse_ints(args.d)]
                else:
                    ds = list(compositions(g - 2 + n, n)) if n else []
                for d in ds:
                    if len(d) != n:
                        raise UsageError(f"--d has {len(d)} entries, expected {n}")
                    v = ps_faber(g, n, d)
                    r = qhi_rhs(g, n, g, g - 1, PsiPolynomial.monomial(d), force=args.force)
                    ok &= v == r
                    rows.append({"g": g, "n": n, "d": list(d), "ps_faber": v, "qhi_rhs": r, "match": v == r})
    else:
        columns = ["g", "n", "value"]
        n = args.n if args.n is not None else 1
        for g in _genus_range(args):
            if g + n <= 2 and not args.force:
                continue
            rows.append({"g": g, "n": n, "value": mfint_full(g, n, force=args.force)})
    return {"family": args.family, "columns": columns, "rows": rows, "match": ok}, EXIT_OK if ok else EXIT_MISMATCH


def cmd_series(args) -> tuple[dict, int]:
    for name in ("xmax", "ymax", "zmax", "tmax", "nt"):
        if getattr(args, name) < 0:
            raise UsageError(f"--{name} must be nonnegative")
    bounds = Bounds(args.xmax, args.ymax, args.zmax, args.tmax, args.nt)
    ps = build_F("pseudostable", bounds)
    st = build_F("stable", bounds)
    rep = series_equal_report(ps, exp_z_over_24(bounds) * st)
    out = rep.to_json()
    predicted = defect_cells(bounds)
    out["outside_defect_cells"] = [list(c) for c in rep.mismatches if c not in predicted]
    out["diagnostics"] = ps.diagnostics + st.diagnostics
    return out, EXIT_OK if rep.match else EXIT_MISMATCH


# -- plumbing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudohodge", description="Exact tautological-class and Hodge-integral calculator.")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    # also accepted after the subcommand name
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("wk", parents=[fmt], help="pure psi intersection number")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--d", required=True, help="comma-separated exponents")
    s.set_defaults(func=cmd_wk)

    s = sub.add_parser("mumford-verify", parents=[fmt], help="compare both sides of the pseudostable Mumford relation")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--codim", type=int)
    s.add_argument("--force", action="store_true")
    s.add_argument("--show", action="store_true", help="include the expanded class")
    s.set_defaults(func=cmd_mumford_verify)

    s = sub.add_parser("qhi", parents=[fmt], help="quadratic pseudostable Hodge integral, both sides")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--F", help="exponents '2,0' or polynomial 'c*e1,e2;c*e1,e2'")
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_qhi)

    s = sub.add_parser("table", parents=[fmt], help="tables of closed-form families")
    s.add_argument("--family", choices=["cor-values", "ps-faber", "mfint"], required=True)
    s.add_argument("--g", type=int)
    s.add_argument("--gmax", type=int, default=4)
    s.add_argument("--n", type=int)
    s.add_argument("--d")
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("series", parents=[fmt], help="compare truncated generating series")
    s.add_argument("--xmax", type=int, default=1)
    s.add_argument("--ymax", type=int, default=1)
    s.add_argument("--zmax", type=int, default=3)
    s.add_argument("--tmax", type=int, default=6)
    s.add_argument("--nt", type=int, default=1)
    s.set_defaults(func=cmd_series)
    return p


def _render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(result), sort_keys=True, indent=2)
    if fmt == "csv" and "rows" in result:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result["columns"])
        for row in result["rows"]:
            w.writerow([_textable(row[c]) for c in result["columns"]])
        return buf.getvalue().rstrip("\n")
    if fmt == "csv":
        keys = sorted(k for k, v in result.items() if not isinstance(v, (list, dict)))
        return ",".join(keys) + "\n" + ",".join(_textable(result[k]) for k in keys)
    lines = []
    for k in sorted(result):
        v = result[k]
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            for row in v:
                lines.append("  " + " ".join(f"{a}={_textable(b)}" for a, b in sorted(row.items())))
        else:
            lines.append(f"{k}: {_textable(v)}")
    return "\n".join(lines)


def _cache_path() -> Path | None:
    root = os.environ.get("TAUT_CACHE_DIR")
    return Path(root) / CACHE_FILE if root else None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = _cache_path()
    if cache is not None and cache.exists():
        try:
            default_engine.load(cache)
        except (ValueError, KeyError, TypeError) as exc:
            print(f"error: invalid cache file {cache}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        result, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedHodgePart as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except WKCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = {"command": args.command, **result}
    print(_render(result, args.format))
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        default_engine.save(cache)
    return code


if __name__ == "__main__":
    sys.exit(main())
