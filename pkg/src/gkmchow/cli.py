"""``gkm`` command line.

Exit status: 0 on success, 1 for unreadable or invalid input, 2 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, gkmgraph, ppmodule, verify
from .errors import GkmError, NotMember, SchemaError
from .polyalg import Polynomial

VERBS = ["hilbert", "generators", "freeness", "cup", "mod-delta", "invariants", "product",
         "strata", "membership", "catalog", "verify"]


class InputError(Exception):
    pass


def read_graph(path):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: file not found")
    try:
        return gkmgraph.parse(p.read_text(encoding="utf-8"))
    except GkmError as exc:
        raise InputError(f"{path}: {exc}") from None


def _class_components(doc, graph):
    if not isinstance(doc, dict):
        raise SchemaError("class literal must map vertex ids to polynomials")
    unknown = [v for v in doc if v not in graph.vertex_index]
    if unknown:
        raise SchemaError(f"unknown vertex {unknown[0]!r}", f"$.{unknown[0]}")
    missing = [v for v in graph.vertices if v not in doc]
    if missing:
        raise SchemaError(f"missing vertex {missing[0]!r}", f"$.{missing[0]}")
    comps = []
    for v in graph.vertices:
        try:
            comps.append(Polynomial.from_json(doc[v], graph.torus_rank))
        except (ValueError, TypeError) as exc:
            raise SchemaError(str(exc), f"$.{v}") from None
    return comps


def parse_class_literal(text: str, graph) -> ppmodule.PPClass:
    """JSON ``{vertex: polynomial}`` -> membership-checked class; raises NotMember."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, "$", exc.lineno) from None
    return ppmodule.PPClass(graph, _class_components(doc, graph))


def _read_text(path):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: file not found")
    return p.read_text(encoding="utf-8")


def _table(header, rows):
    cols = [[str(h)] + [str(r[i]) for r in rows] for i, h in enumerate(header)]
    widths = [max(len(c) for c in col) for col in cols]
    lines = []
    for k in range(len(rows) + 1):
        lines.append(" ".join(col[k].ljust(w) for col, w in zip(cols, widths)).rstrip())
    return "\n".join(lines)


def _dims_table(label, dims, max_degree):
    degs = [str(d) for d in range(len(dims))]
    vals = [str(x) for x in dims]
    w = max(max(map(len, degs), default=1), max(map(len, vals), default=1))
    pad = max(len("degree"), len(label))
    return "\n".join([
        f"max_degree {max_degree}",
        "degree".ljust(pad) + " " + " ".join(s.rjust(w) for s in degs),
        label.ljust(pad) + " " + " ".join(s.rjust(w) for s in vals),
    ])


def _emit(obj, fmt, table_text):
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(table_text)


def cmd_hilbert(args):
    g = read_graph(args.graph)
    t = ppmodule.hilbert(g, args.max_degree)
    _emit(t.to_json(), args.format, _dims_table("dim", t.dims, t.max_degree))


def cmd_generators(args):
    g = read_graph(args.graph)
    pres = ppmodule.generators(g, args.max_degree)
    obj = {"max_degree": pres.certified_to, **pres.to_json()}
    lines = [f"max_degree {pres.certified_to}",
             f"free {pres.free}",
             f"rank_equals_fixed_points {str(pres.rank_equals_fixed_points).lower()}",
             "generator_degrees " + " ".join(map(str, pres.generator_degrees))]
    for i, c in enumerate(pres.generators):
        lines.append(f"gen {i} (degree {c.degree}): "
                     + ", ".join(f"{v}: {p}" for v, p in zip(g.vertices, c.components)))
    _emit(obj, args.format, "\n".join(lines))


def cmd_freeness(args):
    g = read_graph(args.graph)
    cert = ppmodule.freeness_certificate(g, args.max_degree)
    obj = cert.to_json()
    _emit(obj, args.format, _table(["key", "value"], [(k, json.dumps(v)) for k, v in obj.items()]))


def cmd_mod_delta(args):
    g = read_graph(args.graph)
    D = ppmodule.default_max_degree(g) if args.max_degree is None else args.max_degree
    dims = ppmodule.mod_delta_dims(g, D)
    _emit({"max_degree": D, "dims": dims}, args.format, _dims_table("dim", dims, D))


def cmd_invariants(args):
    g = read_graph(args.graph)
    t = ppmodule.weyl_invariants(g, args.max_degree)
    _emit(t.to_json(), args.format, _dims_table("dim^W", t.dims, t.max_degree))


def cmd_strata(args):
    g = read_graph(args.graph)
    rep = gkmgraph.strata_by_subtorus(g)
    obj = {"strata": [{"direction": list(s.direction), "edges": list(s.edges),
                       "relations": list(s.relations)} for s in rep.strata]}
    rows = [(json.dumps(list(s.direction)), json.dumps(list(s.edges)), json.dumps(list(s.relations)))
            for s in rep.strata]
    _emit(obj, args.format, _table(["direction", "edges", "relations"], rows))


def _write_or_print(text, path):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_product(args):
    if len(args.graph) != 2:
        raise InputError("product takes exactly two graph files")
    g = gkmgraph.product(read_graph(args.graph[0]), read_graph(args.graph[1]))
    gkmgraph.ensure_valid(g)
    _write_or_print(gkmgraph.serialize(g), args.emit)


def _load_classes(args, g, n, check):
    paths = args.cls or []
    if len(paths) != n:
        raise InputError(f"expected {n} --class operand(s), got {len(paths)}")
    out = []
    for p in paths:
        text = _read_text(p)
        try:
            if check:
                out.append(parse_class_literal(text, g))
            else:
                doc = json.loads(text)
                out.append(_class_components(doc, g))
        except json.JSONDecodeError as exc:
            raise InputError(f"{p}: line {exc.lineno}: {exc.msg}") from None
        except NotMember as exc:
            raise InputError(f"{p}: {exc}") from None
    return out


def cmd_cup(args):
    g = read_graph(args.graph)
    a, b = _load_classes(args, g, 2, check=True)
    c = ppmodule.cup(a, b)
    if ppmodule.first_violation(g, c.components) is not None:
        raise AssertionError("cup product left the ring")
    _emit(c.to_json(), args.format,
          "\n".join([f"degree {c.degree}"] + [f"{v}: {p}" for v, p in zip(g.vertices, c.components)]))


def cmd_membership(args):
    g = read_graph(args.graph)
    (comps,) = _load_classes(args, g, 1, check=False)
    ok = ppmodule.membership(g, comps)
    bad = None if ok else ppmodule.first_violation(g, comps)
    _emit({"member": ok, "violated": bad}, args.format,
          "true" if ok else f"false (violates {bad})")


def cmd_catalog(args):
    if not args.name:
        for name in sorted(catalog.FAMILIES):
            print(f"{name} --n <int>" if name in catalog.PARAMETRIC else name)
        return
    try:
        entry = catalog.build(args.name, args.n)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    text = gkmgraph.serialize(entry.graph)
    _write_or_print(text, args.emit)
    if args.emit and entry.expected:
        p = Path(args.emit)
        golden = p.with_name(p.stem + ".golden.json")
        golden.write_text(json.dumps(entry.expected, indent=2) + "\n", encoding="utf-8")


def cmd_verify(args):
    results = verify.run(all_checks=args.all)
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + ("" if ok else f": {detail}"))
        failed += not ok
    print(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        raise AssertionError(f"{failed} verification checks failed")


COMMANDS = {
    "hilbert": cmd_hilbert, "generators": cmd_generators, "freeness": cmd_freeness,
    "cup": cmd_cup, "mod-delta": cmd_mod_delta, "invariants": cmd_invariants,
    "product": cmd_product, "strata": cmd_strata, "membership": cmd_membership,
    "catalog": cmd_catalog, "verify": cmd_verify,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="gkm", description="Equivariant Chow rings from GKM graphs")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, graphs=1):
        if graphs == 1:
            p.add_argument("graph", help="graph JSON file")
        elif graphs == 2:
            p.add_argument("graph", nargs="+", help="two graph JSON files")
        p.add_argument("--max-degree", type=int, default=None,
                       help="degree bound (default: 2*(max congruence order) + torus rank + 2)")
        p.add_argument("--format", choices=["table", "json"], default="table")
        return p

    for verb in ["hilbert", "generators", "freeness", "mod-delta", "invariants", "strata"]:
        common(sub.add_parser(verb))
    for verb in ["cup", "membership"]:
        common(sub.add_parser(verb)).add_argument(
            "--class", dest="cls", action="append", metavar="PATH",
            help="class literal: JSON mapping vertex -> polynomial")
    common(sub.add_parser("product"), graphs=2).add_argument("--emit", metavar="PATH")
    cat = sub.add_parser("catalog")
    cat.add_argument("name", nargs="?")
    cat.add_argument("--n", type=int)
    cat.add_argument("--emit", metavar="PATH")
    ver = sub.add_parser("verify")
    ver.add_argument("--all", action="store_true", help="also run the property checks")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.verb](args)
    except InputError as exc:
        print(f"gkm: {exc}", file=sys.stderr)
        return 1
    except GkmError as exc:
        print(f"gkm: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"gkm: internal check failed: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
