"""Command-line driver: enumerate classes, compute products, run verification suites.

Exit codes: 0 pass, 1 verification failure, 2 configuration or domain error,
3 enumeration budget exceeded.  Output is JSON (sorted keys; byte-identical
for identical configurations except for the timestamp field) with an optional
CSV projection.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import sys

from .complexes import CB, CYC, WIN
from .errors import BudgetExceededError, DomainError, HallcpxError
from .field import DEFAULT_BUDGET
from .hall import ComplexBackend, HallAlgebra, merge_keys
from .quiver import Quiver, a_n_quiver
from .suites import SUITES, RunConfig, Workspace

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

BUILTIN_QUIVERS = {
    "a1": lambda: a_n_quiver(1),
    "a2": lambda: a_n_quiver(2),
    "a3": lambda: a_n_quiver(3),
}


def _parse_quiver(spec: str) -> Quiver:
    if spec in BUILTIN_QUIVERS:
        return BUILTIN_QUIVERS[spec]()
    return Quiver.load(spec)


def _parse_levels(spec: str):
    if ".." not in spec:
        raise DomainError("levels must look like LO..HI, e.g. -2..3")
    lo, hi = spec.split("..", 1)
    return int(lo), int(hi)


def build_config(args) -> RunConfig:
    quiver = _parse_quiver(args.quiver)
    max_dim = tuple(int(x) for x in args.max_dim.split(","))
    return RunConfig(
        quiver=quiver,
        p=args.p,
        max_dim=max_dim,
        m=args.m,
        levels=_parse_levels(args.levels),
        budget=args.budget,
        samples=args.samples,
        seed=args.seed,
    )


def _module_name_table(ws: Workspace):
    table = {"0": ()}
    for rep in ws.classes:
        key = ws.modcat.class_key(rep)
        if len(key) == 1 and key[0][1] == 1:
            table[ws.modcat.key_name(key)] = key
    return table


def _complex_name_table(ws: Workspace, ambient: str):
    m = ws.cfg.m
    if ambient == "cyclic":
        pool = ws.cyclic_label_pool(m)
        backend = ComplexBackend(ws.ccat(CYC, m))
    elif ambient == "window":
        pool = ws.window_label_pool(m)
        backend = ComplexBackend(ws.ccat(WIN, m))
    else:
        pool = ws.bounded_label_pool()
        backend = ComplexBackend(ws.ccat(CB))
    table = {"0": ()}
    for lab in pool:
        key = ((lab, 1),)
        table[backend.key_str(key)] = key
    return table, backend


def _resolve_key(table, name: str):
    name = name.strip()
    if name in table:
        return table[name]
    key = ()
    for part in name.split("+"):
        part = part.strip()
        if part not in table:
            raise DomainError(f"unknown class name {part!r}; run enumerate to list names")
        key = merge_keys(key, table[part])
    return key


def cmd_enumerate(cfg: RunConfig, ambient: str) -> dict:
    ws = Workspace(cfg)
    rows = []
    if ambient == "modules":
        for rep in ws.classes:
            key = ws.modcat.class_key(rep)
            rows.append(
                {
                    "key": ws.modcat.key_name(key),
                    "dims": list(rep.dims),
                    "total_dim": rep.total_dim,
                    "aut": ws.modcat.aut_order(key),
                }
            )
    else:
        table, backend = _complex_name_table(ws, ambient)
        for name, key in table.items():
            if not key:
                continue
            X = backend.realize(key)
            profile = {str(X.degree_of_index(j)): list(c.dims) for j, c in enumerate(X.components) if c.total_dim}
            rows.append({"key": name, "components": profile, "aut": backend.aut(key)})
        rows.sort(key=lambda r: r["key"])
    return {"command": "enumerate", "ambient": ambient, "rows": rows}


def cmd_product(cfg: RunConfig, ambient: str, lhs: str, rhs: str, twisted: bool) -> dict:
    ws = Workspace(cfg)
    if ambient == "modules":
        table = _module_name_table(ws)
        backend = ws.module_backend
        algebra = ws.module_hall
    else:
        table, backend = _complex_name_table(ws, ambient)
        algebra = HallAlgebra(backend)
    kl = _resolve_key(table, lhs)
    kr = _resolve_key(table, rhs)
    twist = 0
    if twisted:
        if ambient == "modules":
            twist = ws.modcat.euler_form(ws.modcat.dims_of_key(kl), ws.modcat.dims_of_key(kr))
        elif ambient == "cyclic":
            raise DomainError("the twisted product needs an Euler form; cyclic has none")
        else:
            twist = backend.cat.euler_form(backend.realize(kl), backend.realize(kr))
    rows = []
    from fractions import Fraction

    factor = Fraction(cfg.p) ** twist
    for key, coef in sorted(algebra.product_pair(kl, kr).items()):
        c = coef * factor
        rows.append(
            {
                "lhs": lhs,
                "rhs": rhs,
                "term": backend.key_str(key) if ambient != "modules" else ws.modcat.key_name(key),
                "numerator": c.numerator,
                "denominator": c.denominator,
            }
        )
    return {"command": "product", "ambient": ambient, "twisted": twisted, "rows": rows}


def cmd_verify(cfg: RunConfig, suite: str) -> dict:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}")
    ws = Workspace(cfg)
    report = SUITES[suite](ws)
    return {"command": "verify", "report": report}


def _emit(payload: dict, args) -> None:
    payload = dict(payload)
    payload["config"] = {
        "quiver": args.quiver,
        "p": args.p,
        "max_dim": args.max_dim,
        "m": args.m,
        "levels": args.levels,
        "budget": args.budget,
        "samples": args.samples,
        "seed": args.seed,
    }
    payload["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    else:
        rows = payload.get("rows")
        if rows is None and "report" in payload:
            rows = payload["report"]["instances"]
        buf = io.StringIO()
        if rows:
            fields = sorted({k for r in rows for k in r})
            writer = csv.DictWriter(buf, fieldnames=fields)
            writer.writeheader()
            for r in rows:
                writer.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + ("\n" if not text.endswith("\n") else ""))
    else:
        sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", default="a2", help="a1|a2|a3 or a JSON file {'vertices': n, 'arrows': [[s,t],...]}")
    common.add_argument("--p", type=int, default=2, help="prime field size")
    common.add_argument("--max-dim", default="1,1", help="comma-separated dimension bound per vertex")
    common.add_argument("--m", type=int, default=2, help="number of terms / cyclic length")
    common.add_argument("--levels", default="-2..3", help="level window LO..HI for the bounded ambient")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--samples", type=int, default=50, help="random instances for sampled suites")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled suites")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    ap = argparse.ArgumentParser(
        prog="hallcpx",
        description="Exact Hall algebras of complexes of projective quiver representations.",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="command", required=True)
    pe = sub.add_parser("enumerate", help="list iso classes", parents=[common])
    pe.add_argument("--ambient", choices=("modules", "cyclic", "window", "bounded"), default="modules")
    pp = sub.add_parser("product", help="Hall product of two classes", parents=[common])
    pp.add_argument("--ambient", choices=("modules", "cyclic", "window", "bounded"), default="modules")
    pp.add_argument("--lhs", required=True)
    pp.add_argument("--rhs", required=True)
    pp.add_argument("--twisted", action="store_true", help="apply the Euler-form power twist")
    pv = sub.add_parser("verify", help="run a named verification suite", parents=[common])
    pv.add_argument("suite", choices=sorted(SUITES))
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "enumerate":
            payload = cmd_enumerate(cfg, args.ambient)
        elif args.command == "product":
            payload = cmd_product(cfg, args.ambient, args.lhs, args.rhs, args.twisted)
        else:
            payload = cmd_verify(cfg, args.suite)
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (DomainError, OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except HallcpxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    _emit(payload, args)
    if args.command == "verify" and not payload["report"]["pass"]:
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
