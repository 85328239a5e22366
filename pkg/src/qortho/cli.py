"""Command-line front end: eval, gram, identity and report subcommands.

Every command prints one envelope

    {"schema_version": 1, "tool_version": ..., "command": ..., "config": {...},
     "results": [...], "overall_pass": ...}

as JSON (default), CSV or plain text. Exit codes: 0 pass, 1 check failure,
2 domain or usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from enum import Enum

import numpy as np

from . import __version__, identities, kernels, ortho
from .errors import DomainError, QOrthoError
from .families import Family, FamilyParams, Method, PARAM_NAMES, evaluate
from .qcore import QContext

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# parameters used by ``eval`` when a flag is not given
EVAL_DEFAULTS = {
    Family.BIG_Q_JACOBI: dict(a=0.5, b=0.5, c=-0.5),
    Family.LITTLE_Q_JACOBI: dict(a=0.5, b=0.5),
    Family.DISC_ULTRA_C: dict(alpha=0.5),
    Family.DISC_ULTRA_C_TILDE: dict(alpha=0.5),
    Family.DUAL_BIG_D: dict(a=0.5, b=0.5, c=-0.5),
    Family.DUAL_LITTLE_D: dict(a=0.7, b=0.4),
    Family.DUAL_DISC_D: dict(alpha=0.5),
    Family.DUAL_DISC_D_TILDE: dict(alpha=0.5),
    Family.Q_MEIXNER_POLLACZEK: dict(a=0.5),
}

PARAM_FLAGS = ("alpha", "a", "b", "c", "d", "t1", "t2")


# ---------------------------------------------------------------- serialisation


def _plain(obj):
    """Recursively convert numpy scalars, enums and tuples to JSON-ready values."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, range, np.ndarray)):
        return [_plain(v) for v in obj]
    return obj


def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def dumps(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


CSV_COLUMNS = (
    "kind", "id", "params", "n", "x", "value", "method", "est_error",
    "max_offdiag_rel", "max_diag_rel_err", "residual", "tol", "pass", "error",
)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _num(v).strip('"')
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _to_csv(env: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in env["results"]:
        row = dict(rec)
        row.setdefault("id", rec.get("relation") or rec.get("family"))
        w.writerow([_cell(row.get(c)) for c in CSV_COLUMNS])
    w.writerow(["summary", env["command"]] + [""] * (len(CSV_COLUMNS) - 4) + [_cell(env["overall_pass"]), ""])
    return buf.getvalue()


def _text_line(rec: dict) -> str:
    status = {True: "PASS", False: "FAIL", None: "    "}[rec.get("pass")]
    kind = rec["kind"]
    if "error" in rec:
        return f"{status} {kind:8s} {rec.get('id', '')} error: {rec['error']}"
    if kind == "eval":
        return (f"     eval     {rec['family']} n={rec['n']} x={rec['x']:.17g} value={rec['value']:.17g} "
                f"method={rec['method']} est_error={rec['est_error']:.3g}")
    if kind == "gram":
        p = " ".join(f"{k}={v:.6g}" for k, v in rec["params"].items())
        return (f"{status} gram     {rec['relation']} [{p}] offdiag={rec['max_offdiag_rel']:.3g} "
                f"diag={rec['max_diag_rel_err']:.3g} tol={rec['tol']:.0e}")
    return f"{status} identity {rec['id']} residual={rec['residual']:.3g} tol={rec['tol']:.0e}"


def _to_text(env: dict) -> str:
    lines = [_text_line(r) for r in env["results"]]
    lines.append(f"overall: {'PASS' if env['overall_pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render(env: dict, fmt: str) -> str:
    env = _plain(env)
    if fmt == "csv":
        return _to_csv(env)
    if fmt == "text":
        return _to_text(env)
    return dumps(env) + "\n"


# ---------------------------------------------------------------- commands


def _context(args) -> QContext:
    try:
        return QContext.from_env(args.q, args.eps, args.max_terms)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad QORTHO_EPS / QORTHO_MAXTERMS value: {exc}") from None


def _given_params(args) -> dict:
    return {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}


def _error_record(kind: str, rid: str, params: dict, exc: Exception) -> dict:
    return {"kind": kind, "id": rid, "params": params, "pass": False, "error": str(exc)}


def cmd_eval(args, ctx: QContext) -> list[dict]:
    fam = Family(args.family)
    given = _given_params(args)
    names = PARAM_NAMES[fam]
    extra = sorted(set(given) - set(names))
    if extra:
        raise DomainError(f"{fam.value}: unknown parameter(s) {', '.join(extra)}; expected {', '.join(names)}")
    if fam is Family.U_FAMILY:
        defaults = dict(t1=math.sqrt(ctx.q**3), t2=math.sqrt(ctx.q))
    else:
        defaults = EVAL_DEFAULTS[fam]
    params = {**defaults, **given}
    fp = FamilyParams.make(fam, **params)
    res = evaluate(fp, args.n, args.x, ctx, args.method)
    if not math.isfinite(res.value):
        raise QOrthoError(f"{fam.value}: evaluation overflowed (n={args.n}, x={args.x!r})")
    return [{
        "kind": "eval", "family": fam.value, "params": fp.as_dict(), "n": args.n, "x": args.x,
        "value": res.value, "method": res.method.value, "est_error": res.est_error, "pass": None,
    }]


def _relation_params(rid: str, given: dict, q: float) -> dict:
    params = dict(ortho.default_grid(rid, q)[0])
    params.update(given)
    if "t1" in given or "t2" in given:
        params.pop("a", None)
    if ":" in rid:
        params.pop("d", None)
    return params


def cmd_gram(args, ctx: QContext) -> list[dict]:
    params = _relation_params(args.relation, _given_params(args), ctx.q)
    rel = ortho.make_relation(args.relation, params, ctx)
    n_max = ortho.default_nmax(args.relation) if args.nmax is None else args.nmax
    tol = ortho.default_tol(args.relation) if args.tol is None else args.tol
    return [ortho.verify(rel, n_max, tol).as_dict()]


def cmd_identity(args, ctx: QContext) -> list[dict]:
    check = identities.run_identity(
        args.id, ctx, alpha=args.alpha, a=args.a, d=args.d, c_shift=args.c_shift,
        n=args.n, x=args.x, n_max=args.nmax,
    )
    return [check.as_dict()]


def _selected(only: str | None) -> tuple[list[str], list[str]]:
    """Relation ids and identity ids covered by a report."""
    if only is None or only == "all":
        return list(ortho.RELATION_IDS), list(identities.IDENTITY_IDS)
    rels, ids = [], []
    for item in (s.strip() for s in only.split(",")):
        if item == "relations":
            rels.extend(ortho.RELATION_IDS)
        elif item == "identities":
            ids.extend(identities.IDENTITY_IDS)
        elif item.partition(":")[0] in ortho.RELATION_IDS:
            ortho.parse_relation_id(item)
            rels.append(item)
        elif item in identities.IDENTITY_IDS:
            ids.append(item)
        else:
            raise DomainError(f"--only: unknown selection {item!r}")
    return rels, ids


def run_report(ctx: QContext, only: str | None = None) -> list[dict]:
    """Relations on their default grids, then the identity suite, in catalog order."""
    rels, ids = _selected(only)
    out = []
    for rid in rels:
        for params in ortho.default_grid(rid, ctx.q):
            try:
                rel = ortho.make_relation(rid, params, ctx)
                out.append(ortho.verify(rel, ortho.default_nmax(rid), ortho.default_tol(rid)).as_dict())
            except QOrthoError as exc:
                out.append(_error_record("gram", rid, params, exc))
    for iid, opts in identities.default_suite(ctx):
        if iid not in ids:
            continue
        try:
            out.append(identities.run_identity(iid, ctx, **opts).as_dict())
        except QOrthoError as exc:
            out.append(_error_record("identity", iid, opts, exc))
    return out


def cmd_report(args, ctx: QContext) -> list[dict]:
    if args.all and args.only:
        raise DomainError("--all and --only are mutually exclusive")
    return run_report(ctx, None if args.all else args.only)


# ---------------------------------------------------------------- argument parsing


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("numerical policy and output")
    g.add_argument("--q", type=float, default=0.5, help="base q in (0, 1) (default 0.5)")
    g.add_argument("--eps", type=float, default=None, help="eps_term (env QORTHO_EPS, default 1e-12)")
    g.add_argument("--max-terms", type=int, default=None, help="max_terms (env QORTHO_MAXTERMS, default 4096)")
    g.add_argument("--format", choices=("json", "csv", "text"), default="json")
    g.add_argument("--out", default=None, help="write to this file instead of stdout")
    g.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")


def _param_flags(p: argparse.ArgumentParser, names=PARAM_FLAGS):
    for name in names:
        p.add_argument(f"--{name}", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qortho", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"qortho {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one family member", allow_abbrev=False)
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--x", type=float, default=0.0,
                   help="point (lattice coordinate for dual families, sinh(xi) for u, theta for qmp)")
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    _param_flags(p)
    _common(p)

    p = sub.add_parser("gram", help="Gram matrix of one orthogonality relation", allow_abbrev=False)
    p.add_argument("--relation", required=True, help="catalog id, e.g. c-full or u-family:0.7")
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    _param_flags(p)
    _common(p)

    p = sub.add_parser("identity", help="run one identity check", allow_abbrev=False)
    p.add_argument("--id", required=True, help="identity id, e.g. prop1, eq36, favard:ctilde")
    p.add_argument("--c-shift", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--nmax", type=int, default=None)
    _param_flags(p, ("alpha", "a", "d"))
    _common(p)

    p = sub.add_parser("report", help="full verification report", allow_abbrev=False)
    p.add_argument("--all", action="store_true", help="every relation and identity (the default)")
    p.add_argument("--only", default=None,
                   help="'relations', 'identities', or a comma-separated list of catalog ids")
    _common(p)
    return parser


COMMANDS = {"eval": cmd_eval, "gram": cmd_gram, "identity": cmd_identity, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ctx = _context(args)
        results = COMMANDS[args.command](args, ctx)
    except DomainError as exc:
        print(f"qortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QOrthoError, ArithmeticError) as exc:
        print(f"qortho: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    overall = all(r.get("pass") is not False for r in results)
    env = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "config": {
            "q": ctx.q, "eps_term": ctx.eps_term, "max_terms": ctx.max_terms,
            "output_format": args.format, "out_path": args.out, "backend": kernels.BACKEND,
        },
        "results": results,
        "overall_pass": overall,
    }
    if not args.no_timestamp:
        env["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    text = render(env, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if overall else EXIT_FAIL
