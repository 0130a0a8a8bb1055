"""Self-checks run by ``gkm verify``: catalog goldens plus structural properties."""

from __future__ import annotations

from itertools import combinations_with_replacement

from . import catalog
from .gkmgraph import product
from .ppmodule import (CERTIFIED, express_in_basis, freeness_certificate, generators, hilbert,
                       membership, mod_delta_dims, stratified_dim, weyl_invariants)


def check_goldens(entry):
    g = entry.graph
    if not entry.expected:
        return [(f"{entry.name}: golden present", False, "no golden file")]
    D = entry.expected["max_degree"]
    out = []
    pres = generators(g, D)
    checks = [
        ("hilbert", list(hilbert(g, D).dims)),
        ("mod_delta", mod_delta_dims(g, D)),
        ("generator_degrees", pres.generator_degrees),
    ]
    if g.weyl is not None:
        checks.append(("weyl_invariants", list(weyl_invariants(g, D).dims)))
    for key, got in checks:
        want = entry.golden_value(key)
        out.append((f"{entry.name}: {key}", got == want, f"got {got}, golden {want}"))
    return out


def check_properties(entry, max_degree=4):
    g = entry.graph
    out = []
    D = entry.expected["max_degree"] if entry.expected else None
    cert = freeness_certificate(g, D)
    if cert.status == CERTIFIED:
        out.append((f"{entry.name}: generator count = |V|", cert.rank_equals_fixed_points,
                    f"{cert.generator_count} generators, {cert.vertex_count} vertices"))
    pres = generators(g, D)
    ok = True
    detail = "all products in span"
    for a, b in combinations_with_replacement(pres.generators, 2):
        if a.degree + b.degree > max_degree:
            continue
        c = a * b
        if not membership(g, c.components):
            ok, detail = False, f"product of degrees {a.degree},{b.degree} not a member"
            break
        express_in_basis(c, pres)
    out.append((f"{entry.name}: ring closure", ok, detail))
    base = hilbert(g, 3).dims
    flipped = hilbert(g.replace_characters(lambda c: tuple(-x for x in c)), 3).dims
    scaled = hilbert(g.replace_characters(lambda c: tuple(3 * x for x in c)), 3).dims
    out.append((f"{entry.name}: sign/scale invariance", base == flipped == scaled,
                f"{base} / {flipped} / {scaled}"))
    strat = tuple(stratified_dim(g, d) for d in range(4))
    out.append((f"{entry.name}: stratified dims", strat == base[:4], f"{strat} vs {base[:4]}"))
    return out


def check_kunneth(max_degree=5):
    out = []
    p1, p2 = catalog.projective_space(1).graph, catalog.projective_space(2).graph
    for name, (a, b) in {"P1xP1": (p1, p1), "P1xP2": (p1, p2)}.items():
        ga = generators(a, max_degree).generator_degrees
        gb = generators(b, max_degree).generator_degrees
        want = sorted(x + y for x in ga for y in gb if x + y <= max_degree)
        got = generators(product(a, b), max_degree).generator_degrees
        out.append((f"kunneth {name}", got == want, f"got {got}, want {want}"))
    return out


def run(all_checks=False):
    """List of (name, passed, detail) in a fixed order."""
    results = []
    entries = catalog.standard_entries()
    for e in entries:
        results.extend(check_goldens(e))
    if all_checks:
        for e in entries:
            results.extend(check_properties(e))
        results.extend(check_kunneth())
    return results
