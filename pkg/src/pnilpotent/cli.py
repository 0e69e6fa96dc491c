"""Command-line interface: ``pnilpotent <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import ancestry, props, rank2, suites
from .catalog import catalog_for_order

FORMATS = ("json", "table")
ANCESTRY_FORMATS = ("json", "table", "dot")


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _order_range(args) -> range:
    lo = args.order
    hi = args.to if args.to is not None else lo
    if lo < 1:
        raise UsageError("--order", "must be at least 1")
    if hi < lo:
        raise UsageError("--to", "must not be below --order")
    return range(lo, hi + 1)


def _check_prime(p: int | None, flag: str = "--p") -> int:
    if p is None:
        raise UsageError(flag, "is required")
    if not _is_prime(p):
        raise UsageError(flag, f"{p} is not prime")
    return p


# -- commands ---------------------------------------------------------------------------


def cmd_count(args) -> tuple[int, str]:
    fn = rank2.count_closed if args.method == "closed" else rank2.count_brute
    rows = [fn(x).to_dict() for x in _order_range(args)]
    if args.format == "table":
        keys = ["x", "abelian", "type1", "type2", "total", "method"]
        return 0, _table(keys, [[r[k] for k in keys] for r in rows])
    return 0, _dumps(rows[0] if len(rows) == 1 else rows)


def cmd_list_rank2(args) -> tuple[int, str]:
    rows = []
    for x in _order_range(args):
        en = rank2.enumerate_rank2(x)
        rows += [{"x": x, "kind": "abelian", "label": f"Ab({a},{b})", "params": [a, b]} for a, b in en.abelian]
        rows += [
            {"x": x, "kind": f"type {q.variant}", "label": q.label, "params": q.to_dict()}
            for q in en.type1 + en.type2
        ]
    if args.format == "table":
        return 0, _table(["x", "kind", "group"], [[r["x"], r["kind"], r["label"]] for r in rows])
    return 0, _dumps(rows)


def cmd_catalog(args) -> tuple[int, str]:
    p = _check_prime(args.p)
    xs = _order_range(args)
    if xs.stop - 1 > 6:
        raise UsageError("--order", "catalogs exist for orders up to p^6")
    entries = [e for x in xs for e in catalog_for_order(p, x)]
    if args.format == "table":
        rows = []
        for e in entries:
            rep = props.property_report(e.group)
            rows.append([
                f"p^{e.order_exp}",
                e.label,
                "(" + ",".join(map(str, rep["type"] or [])) + ")",
                rep["class"],
                rep["coclass"],
                "yes" if rep["is_strongly_powerful"] else "no",
            ])
        return 0, _table(["order", "group", "type", "class", "coclass", "strongly powerful"], rows)
    return 0, _dumps({"p": p, "orders": list(xs), "entries": [e.to_dict(args.properties) for e in entries]})


def _parse_group(text: str | None, flag: str = "--group"):
    if text is None:
        raise UsageError(flag, "is required")
    try:
        d = ancestry.parse_descriptor(text)
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None
    if isinstance(d, rank2.Rank2Params) and not rank2.validate(d):
        raise UsageError(flag, f"{d} violates the parameter constraints")
    return d


def _emit_edges(edges, fmt: str, extra: dict | None = None) -> str:
    if fmt == "dot":
        return ancestry.edges_dot(edges)
    if fmt == "table":
        return _table(["child", "parent", "rule"], [[c.label, q.label, r] for c, q, r in edges])
    data = json.loads(ancestry.edges_json(edges))
    if extra:
        data.update(extra)
    return _dumps(data)


def cmd_descend(args) -> tuple[int, str]:
    d = _parse_group(args.group)
    if not isinstance(d, rank2.Rank2Params):
        raise UsageError("--group", "abelian groups have no descendant")
    chain = ancestry.descent_chain(d)
    edges = ancestry.chain_edges(chain)
    status, extra = 0, {"chain": [c.label for c in chain]}
    if args.verify is not None:
        p = _check_prime(args.verify, "--verify")
        checks = [ancestry.verify_descendant(q, p) for q in chain if isinstance(q, rank2.Rank2Params)]
        extra["verified"] = [{"group": c.params.label, "ok": c.ok, "message": c.message} for c in checks]
        status = 0 if all(checks) else 1
    return status, _emit_edges(edges, args.format, extra if args.format == "json" else None)


def cmd_ancestors(args) -> tuple[int, str]:
    d = _parse_group(args.group)
    if args.max_order is None:
        raise UsageError("--max-order", "is required")
    anc = ancestry.direct_ancestors(d, args.max_order)
    edges = [(d, q, ancestry.descendant_rule(q)) for q in anc]
    if not edges and args.format == "json":
        return 0, _dumps({"nodes": [], "edges": [], "target": d.label})
    return 0, _emit_edges(edges, args.format, {"target": d.label})


def cmd_branch(args) -> tuple[int, str]:
    try:
        branch = ancestry.infinite_branch(args.nbar, args.r, args.depth)
    except ValueError as exc:
        raise UsageError("--r", str(exc)) from None
    edges = ancestry.chain_edges(branch)
    if not edges and args.format == "json":
        return 0, _dumps({"nodes": [{"id": branch[0].label}], "edges": []})
    return 0, _emit_edges(edges, args.format)


def cmd_verify_all(args) -> tuple[int, str]:
    p = _check_prime(args.p)
    if not 4 <= args.max_order <= 6:
        raise UsageError("--max-order", "must be between 4 and 6")
    try:
        lam = tuple(int(v) for v in args.lambda_primes.split(",") if v)
    except ValueError:
        raise UsageError("--lambda-primes", "expects a comma-separated list of primes") from None
    if not all(_is_prime(q) and q > 2 for q in lam):
        raise UsageError("--lambda-primes", "expects odd primes")
    results = suites.run_all(p, args.max_order, args.rank2_order, args.descent_order, lam)
    ok = all(r.ok for r in results)
    if args.format == "table":
        head = ["suite", "result"] + (["time"] if args.timings else [])
        rows = [[r.name, "pass" if r.ok else "FAIL"] + ([f"{r.seconds:.1f}s"] if args.timings else []) for r in results]
        out = _table(head, rows)
    else:
        out = _dumps({"ok": ok, "p": p, "suites": [r.to_dict(args.timings) for r in results]})
    return (0 if ok else 1), out


# -- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pnilpotent", description="Powerfully nilpotent p-groups toolkit")
    ap.add_argument("--output", "-o", help="write the report to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def orders(sp):
        sp.add_argument("--order", type=int, required=True, help="order exponent x (|G| = p^x)")
        sp.add_argument("--to", type=int, help="last order exponent of a range")

    sp = sub.add_parser("count", help="count rank-2 powerfully nilpotent groups of order p^x")
    orders(sp)
    sp.add_argument("--method", choices=("closed", "brute"), default="closed")
    sp.add_argument("--format", choices=FORMATS, default="json")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("list-rank2", help="list the rank-2 parameter tuples of order p^x")
    orders(sp)
    sp.add_argument("--format", choices=FORMATS, default="json")
    sp.set_defaults(func=cmd_list_rank2)

    sp = sub.add_parser("catalog", help="all powerfully nilpotent groups of order p^x, x <= 6")
    sp.add_argument("--p", type=int, required=True)
    orders(sp)
    sp.add_argument("--properties", action="store_true", help="include property reports")
    sp.add_argument("--format", choices=FORMATS, default="json")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("ancestry-descend", help="iterated descendants G -> G/Z(G)^p")
    sp.add_argument("--group", help="e.g. G(4,2,2) or G(5,4,3,2)")
    sp.add_argument("--verify", type=int, metavar="P", help="check each step on the concrete group at prime P")
    sp.add_argument("--format", choices=ANCESTRY_FORMATS, default="json")
    sp.set_defaults(func=cmd_descend)

    sp = sub.add_parser("ancestry-ancestors", help="direct ancestors up to a bounded order")
    sp.add_argument("--group", help="A(n), B(n), Ab(n1,n2) or G(...)")
    sp.add_argument("--max-order", type=int)
    sp.add_argument("--format", choices=ANCESTRY_FORMATS, default="json")
    sp.set_defaults(func=cmd_ancestors)

    sp = sub.add_parser("ancestry-branch", help="the infinite branch above A(nbar) for a given r")
    sp.add_argument("--nbar", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--format", choices=ANCESTRY_FORMATS, default="json")
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser("verify-all", help="run every verification suite")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--max-order", type=int, default=6, help="largest catalog order exponent (4..6)")
    sp.add_argument("--rank2-order", type=int, default=12, help="largest order exponent of the round-trip sweep")
    sp.add_argument("--descent-order", type=int, default=10, help="largest n+m of the descendant sweep")
    sp.add_argument("--lambda-primes", default="3,5,7", help="primes for the square-class check")
    sp.add_argument("--timings", action="store_true", help="report run times (output is then not reproducible)")
    sp.add_argument("--format", choices=FORMATS, default="json")
    sp.set_defaults(func=cmd_verify_all)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, text = args.func(args)
    except UsageError as exc:
        print(f"pnilpotent {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
