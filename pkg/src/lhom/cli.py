"""Command-line entry point: ``lhom <command> ...``.

Exit codes: 0 ok/true, 1 negative result, 2 usage/parse/precondition error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from lhom import io
from lhom.detect import classify, find_circular_n
from lhom.errors import InternalError, LhomError, PreconditionError
from lhom.gadget import build_gadget
from lhom.hmchain import build_hm_chain, verify_hm_identities, verify_polymorphism
from lhom.pairs import PairStructure
from lhom.selftest import run_selftest
from lhom.solver import oracle_solve, solve

OK, NEGATIVE, USAGE, INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors already; keep that but route the
    message through stderr with our prefix."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"lhom: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(io.dumps(payload))
    else:
        print(text)


def _map_text(f) -> str:
    return " ".join(f"{v}->{c}" for v, c in enumerate(f))


def cmd_analyze(args) -> int:
    H = io.read_digraph(args.template)
    P = PairStructure(H)
    c = classify(H, P)
    payload = io.classification_to_json(c)
    payload["pair_structure"] = P.summary()
    lines = [f"verdict: {c.verdict.value}",
             f"circular N: {'yes' if c.has_circular_n else 'no'}",
             f"DAT: {'yes' if c.has_dat else 'no'}",
             f"bicycle: {'yes' if c.has_bicycle else 'no'}",
             f"independent edges: {'yes' if c.has_independent_edges else 'no'}",
             f"HM chain length: {c.hm_chain_length if c.hm_chain_length is not None else '-'}",
             f"pairs: {P.m}, components: {len(P.components)}, max mu: {P.max_mu}"]
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_solve(args) -> int:
    H = io.read_digraph(args.template)
    inst = io.read_instance(args.instance)
    inst.check_against(H)
    if args.oracle:
        f, method = oracle_solve(H, inst), "oracle"
    else:
        f, method = solve(H, inst, force=args.force), "transducer-chain"
    payload = {"satisfiable": f is not None, "method": method}
    if args.witness or args.json:
        payload["homomorphism"] = list(f) if f is not None else None
    text = "yes" if f is not None else "no"
    if args.witness and f is not None:
        text += "\n" + _map_text(f)
    _emit(args, payload, text)
    return OK if f is not None else NEGATIVE


def cmd_oracle(args) -> int:
    H = io.read_digraph(args.template)
    inst = io.read_instance(args.instance)
    inst.check_against(H)
    f = oracle_solve(H, inst)
    payload = {"satisfiable": f is not None, "homomorphism": list(f) if f is not None else None}
    _emit(args, payload, "no" if f is None else f"yes\n{_map_text(f)}")
    return OK if f is not None else NEGATIVE


def cmd_hm_chain(args) -> int:
    H = io.read_digraph(args.template)
    P = PairStructure(H)
    chain = build_hm_chain(H, P)
    if chain is None:
        _emit(args, {"k": None, "tables": None, "identities": None, "polymorphism": None},
              "no HM chain: the template has a circular N")
        return NEGATIVE
    ids = verify_hm_identities(chain)
    poly = {i: verify_polymorphism(H, f, limit=args.max_report) for i, f in enumerate(chain, start=1)}
    bad_poly = {i: v for i, v in poly.items() if v}
    payload = {
        "n": H.n,
        "k": len(chain),
        "tables": io.chain_to_json(chain),
        "identities": {"ok": not ids, "violations": [str(v) for v in ids[: args.max_report]]},
        "polymorphism": {"ok": not bad_poly,
                         "violations": {str(i): [[list(a) for a in arcs] for arcs in v] for i, v in bad_poly.items()}},
    }
    lines = [f"k = {len(chain)}",
             f"identities: {'ok' if not ids else f'{len(ids)} violations'}",
             f"polymorphism: {'ok' if not bad_poly else f'{len(bad_poly)} operations fail'}"]
    for v in ids[: args.max_report]:
        lines.append(f"  {v}")
    _emit(args, payload, "\n".join(lines))
    return OK if not ids and not bad_poly else INTERNAL


def cmd_gadget(args) -> int:
    H = io.read_digraph(args.template)
    D = io.read_digraph(args.st_graph)
    w = find_circular_n(H)
    if w is None:
        raise PreconditionError("template has no circular N, so no hardness gadget exists")
    out = build_gadget(H, w, D, args.s, args.t)
    inst_json = io.instance_to_json(out.instance)
    prov_json = [list(p) if p[0] == "vertex" else [p[0], list(p[1]), p[2]] for p in out.provenance]
    if args.output:
        path = Path(args.output)
        path.write_text(io.dumps(inst_json) + "\n")
        prov_path = path.with_suffix(".provenance.json")
        prov_path.write_text(io.dumps(prov_json) + "\n")
        _emit(args, {"instance": str(path), "provenance": str(prov_path), "vertices": out.instance.g.n},
              f"wrote {path} ({out.instance.g.n} vertices) and {prov_path}")
    else:
        print(io.dumps({"instance": inst_json, "provenance": prov_json}))
    return OK


def cmd_selftest(args) -> int:
    report = run_selftest(args.max_n, args.samples, args.seed, args.solver_cases, args.st_graphs)
    if args.json:
        print(io.dumps(report.to_json()))
    else:
        sys.stdout.write(report.render())
    return OK if report.ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lhom", description="List homomorphism classification and solving for digraph templates.")
    parser.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        p.set_defaults(func=func)
        return p

    p = command("analyze", cmd_analyze, "classify a template and report witnesses")
    p.add_argument("template", help="template digraph (.dg)")

    p = command("solve", cmd_solve, "decide an instance with the transducer chain")
    p.add_argument("template")
    p.add_argument("instance", help="instance JSON")
    p.add_argument("--witness", action="store_true", help="print the homomorphism found")
    p.add_argument("--oracle", action="store_true", help="use the brute-force oracle instead")
    p.add_argument("--force", action="store_true", help="run the chain even if the template has a circular N")

    p = command("oracle", cmd_oracle, "decide an instance by exhaustive search")
    p.add_argument("template")
    p.add_argument("instance")

    p = command("hm-chain", cmd_hm_chain, "build and verify a Hagemann-Mitschke chain")
    p.add_argument("template")
    p.add_argument("--max-report", type=int, default=20, help="cap on listed violations (default 20)")

    p = command("gadget", cmd_gadget, "build the st-connectivity reduction instance")
    p.add_argument("template")
    p.add_argument("st_graph", help="st-graph (.dg)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", "--output", help="instance JSON path; provenance goes next to it")

    p = command("selftest", cmd_selftest, "run the consistency suites")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--solver-cases", type=int, default=100)
    p.add_argument("--st-graphs", type=int, default=10)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalError as exc:
        print(f"lhom: internal error: {exc}", file=sys.stderr)
        return INTERNAL
    except (LhomError, OSError, json.JSONDecodeError) as exc:
        print(f"lhom: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
