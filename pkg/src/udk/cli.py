"""Command-line interface.

Exit codes: 0 success, 1 property or expectation violation, 2 input error
(parse, format, missing file, unknown name), 3 cap exceeded.  With --json
every command, and every error, prints one JSON document; exact numbers are
decimal strings.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import catalog, reproduce, symplectic
from .designs import IntegralityViolation, certify, moment
from .fileformat import FormatError, ParseError, load_group_file
from .haar import haar_moment, mc_haar_estimate
from .matrep import DEFAULT_CAP, CapExceeded

OK, VIOLATION, INPUT_ERROR, CAP_EXCEEDED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def _load_unitary(path: str, cap: Optional[int] = None):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    gf = load_group_file(p)
    if gf.symplectic:
        raise InputError(f"{path} is a symplectic group file")
    return gf, gf.group(cap)


def _load_symplectic(path: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    gf = load_group_file(p)
    if not gf.symplectic:
        raise InputError(f"{path} is not a symplectic group file")
    return symplectic.SympGroup(gf.modulus, gf.dimension // 2, gf.generators, name=gf.name)


# ---------------------------------------------------------------------------
# commands


def cmd_haar(args) -> int:
    exact = haar_moment(args.dim, args.t)
    payload = {"command": "haar", "dim": str(args.dim), "t": str(args.t), "haar_moment": str(exact)}
    text = str(exact)
    if args.mc:
        mean, err = mc_haar_estimate(args.dim, args.t, args.mc, args.seed)
        payload["mc"] = {"samples": str(args.mc), "seed": str(args.seed), "mean_float": mean, "stderr_float": err}
        text += f"\nmc {mean:.6f} +- {err:.6f} (N = {args.mc}, seed {args.seed})"
    _emit(args, payload, text)
    return OK


def cmd_moment(args) -> int:
    _, G = _load_unitary(args.group)
    G.enumerate()
    m = moment(G, args.t)
    _emit(args, {"command": "moment", "name": G.name, "order": str(G.order()), "t": str(args.t), "moment": str(m)},
          str(m))
    return OK


def cmd_certify(args) -> int:
    gf, G = _load_unitary(args.group, args.cap)
    rep = certify(G, args.tmax)
    payload = {"command": "certify", **rep.to_dict()}
    lines = [f"{rep.name}: dim {rep.dim}, order {rep.order}, scalar order {rep.scalar_order}"]
    for r in rep.rows:
        lines.append(f"  t = {r.t}: M = {r.group_moment}  Haar = {r.haar_moment}  {'equal' if r.equal else 'unequal'}")
    lines.append(f"  unitary {rep.max_t}-group" if rep.max_t else "  not a unitary 1-group")
    code = OK if all(rep.flags.values()) else VIOLATION
    exp = gf.expected
    if "max_t" in exp and int(exp["max_t"]) <= args.tmax - 1 and int(exp["max_t"]) != rep.max_t:
        lines.append(f"  expected max_t {exp['max_t']}")
        code = VIOLATION
    if "order" in exp and int(exp["order"]) != rep.order:
        lines.append(f"  expected order {exp['order']}")
        code = VIOLATION
    payload["exit_code"] = str(code)
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_catalog(args) -> int:
    if args.action == "list":
        entries = catalog.list_catalog()
        rows = [e.summary() for e in entries]
        text = "\n".join(f"{r['name']:22s} {r['kind']:9s} dim {r['dim']:>2s}  order {r.get('order', '?'):>7s}"
                         f"  max_t {r.get('max_t', '?')}" for r in rows)
        _emit(args, {"command": "catalog list", "entries": rows}, text)
        return OK
    if args.action == "emit":
        if not args.name:
            raise InputError("catalog emit needs a NAME")
        out = Path(args.out or f"{args.name}.json")
        path = catalog.emit(args.name, out)
        _emit(args, {"command": "catalog emit", "name": args.name, "path": str(path)}, str(path))
        return OK
    # verify
    if args.all:
        todo = catalog.names()
    elif args.name:
        todo = [args.name]
    else:
        raise InputError("catalog verify needs NAME or --all")
    results = []
    code = OK
    for name in todo:
        try:
            rep = catalog.verify(name, strict=False, cap=args.cap)
        except catalog.DataMissing as exc:
            results.append({"name": name, "ok": False, "error": f"data missing: {exc}"})
            code = max(code, INPUT_ERROR)
            continue
        results.append({"name": name, "ok": rep.ok, "order": str(rep.order), "scalar_order": str(rep.scalar_order),
                        "max_t": None if rep.max_t is None else str(rep.max_t), "checks": rep.checks})
        if not rep.ok:
            code = max(code, VIOLATION)
    text = "\n".join(
        f"{r['name']:22s} {'ok' if r['ok'] else 'FAILED'}" + (f"  order {r['order']}" if "order" in r else f"  {r['error']}")
        + ("" if r["ok"] or "checks" not in r else "  " + ", ".join(k for k, v in r["checks"].items() if not v))
        for r in results)
    _emit(args, {"command": "catalog verify", "results": results, "exit_code": str(code)}, text)
    return code


def cmd_orbits(args) -> int:
    H = _load_symplectic(args.group)
    sizes = symplectic.orbits(H)
    trans = sizes == [H.nvectors]
    payload = {"command": "orbits", "name": H.name, "p": str(H.p), "dim": str(H.dim),
               "orbit_sizes": [str(s) for s in sizes], "transitive": trans}
    text = f"{H.name}: orbits on the {H.nvectors} nonzero vectors of F_{H.p}^{H.dim}: {sizes}\n"
    text += "transitive" if trans else "not transitive"
    if trans:
        cert = symplectic.transitivity_certificate(H)
        payload["certificate"] = {"order": str(cert.order), "nvectors": str(cert.nvectors),
                                  "index_divides": cert.index_divides}
        text += f" (|H| = {cert.order} divisible by {cert.nvectors}: {cert.index_divides})"
    _emit(args, payload, text)
    return OK


def cmd_search(args) -> int:
    try:
        classes = symplectic.search_transitive_2dim(args.p)
    except symplectic.UnsupportedPrime as exc:
        raise InputError(str(exc)) from exc
    rows = [{"order": str(c.order), "center_order": str(c.center_order), "derived_order": str(c.derived_order),
             "element_orders": {str(k): str(v) for k, v in c.order_histogram}} for c in classes]
    text = f"transitive subgroups of Sp_2({args.p}) on {args.p ** 2 - 1} vectors, up to conjugacy:\n"
    text += "\n".join(f"  order {r['order']:>5s}  center {r['center_order']}  derived {r['derived_order']}" for r in rows)
    _emit(args, {"command": "search-transitive", "p": str(args.p), "classes": rows}, text)
    return OK


def cmd_reproduce(args) -> int:
    rows = reproduce.reproduce(args.section, args.cap)
    bad = reproduce.failed(rows)
    code = VIOLATION if bad else OK
    width = max(len(r.anchor) for r in rows) if rows else 10
    lines = []
    for r in rows:
        extra = f"  [{r.note}]" if r.note else ""
        lines.append(f"{r.status:8s} {r.section:10s} {r.anchor:{width}s}  expected {r.expected:>16s}  "
                     f"computed {r.computed:>16s}{extra}")
    lines.append(f"{len(rows)} rows, {len(bad)} failed, "
                 f"{sum(r.status == 'SKIPPED' for r in rows)} skipped")
    _emit(args, {"command": "reproduce", "section": args.section, "rows": [r.to_dict() for r in rows],
                 "exit_code": str(code)}, "\n".join(lines))
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="udk", description="Exact certification of unitary t-groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("haar", help="exact Haar moment over U_d")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--mc", type=int, default=0, metavar="N", help="also estimate by N Haar samples")
    p.add_argument("--seed", type=int, default=0)
    add_json(p)
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("moment", help="exact moment M_2t of a group file")
    p.add_argument("--group", required=True)
    p.add_argument("--t", type=int, default=1)
    add_json(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("certify", help="moment report and max t")
    p.add_argument("--group", required=True)
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    add_json(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("catalog", help="list, emit or verify catalog groups")
    p.add_argument("action", choices=("list", "emit", "verify"))
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.add_argument("--all", action="store_true")
    p.add_argument("--cap", type=int, default=None)
    add_json(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("orbits", help="orbits of a symplectic group on nonzero vectors")
    p.add_argument("--group", required=True)
    add_json(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("search-transitive", help="transitive subgroups of Sp_2(p)")
    p.add_argument("--p", type=int, required=True)
    add_json(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", help="recompute the published anchor values")
    p.add_argument("--section", default="all", choices=("all",) + reproduce.SECTIONS)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    add_json(p)
    p.set_defaults(func=cmd_reproduce)
    return ap


def _fail(args, code: int, kind: str, message: str) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"error": kind, "message": message, "exit_code": str(code)}, indent=1))
    else:
        print(f"udk: {kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except CapExceeded as exc:
        return _fail(args, CAP_EXCEEDED, "cap_exceeded", str(exc))
    except ParseError as exc:
        return _fail(args, INPUT_ERROR, "parse_error", str(exc))
    except (FormatError, InputError, json.JSONDecodeError, FileNotFoundError) as exc:
        return _fail(args, INPUT_ERROR, "input_error", str(exc))
    except (catalog.UnknownName, symplectic.UnknownWitness) as exc:
        return _fail(args, INPUT_ERROR, "unknown_name", str(exc))
    except (catalog.TooLarge, ValueError) as exc:
        return _fail(args, INPUT_ERROR, "input_error", str(exc))
    except (IntegralityViolation, catalog.VerificationFailed) as exc:
        return _fail(args, VIOLATION, "violation", str(exc))


if __name__ == "__main__":
    sys.exit(main())
