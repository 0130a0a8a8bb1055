"""Standard GKM inputs: projective spaces, rank-one surfaces with an SL2 action,
complete 2D fans, the SL3 flag variety and a mixed synthetic example.

Golden outputs live next to this module in ``goldens/<entry>.json``.  They are
written by ``python -m gkmchow.oracle --write``, which recomputes every table
on the slow independent path; never edit them by hand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import permutations
from math import gcd

from .errors import IncompleteFan, NonSimplicial
from .gkmgraph import Edge, GkmGraph, SurfaceRelation, WeylAction, WeylGenerator, ensure_valid


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: GkmGraph
    expected: dict | None = None

    def golden_value(self, key):
        if not self.expected or key not in self.expected:
            return None
        return self.expected[key]["value"]


def load_golden(name: str) -> dict | None:
    path = resources.files(__package__) / "goldens" / f"{name}.json"
    if not path.is_file():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def _entry(name, graph):
    return CatalogEntry(name, ensure_valid(graph), load_golden(name))


def _identity(r):
    return [[int(i == j) for j in range(r)] for i in range(r)]


def projective_space(n: int) -> CatalogEntry:
    """P^n under the rank-n torus, with S_(n+1) permuting coordinates.

    Vertex e_i has weight eps_i, where eps_0 = 0 and eps_1..eps_n is the
    standard basis; the curve e_i e_j has character eps_j - eps_i.
    """
    if n < 1:
        raise ValueError("projective_space needs n >= 1")
    verts = [f"e{i}" for i in range(n + 1)]

    def eps(i):
        return [int(k == i - 1) for k in range(n)]

    edges = [Edge((verts[i], verts[j]), [b - a for a, b in zip(eps(i), eps(j))])
             for i in range(n + 1) for j in range(i + 1, n + 1)]
    gens = []
    for k in range(n):
        sigma = list(range(n + 1))
        sigma[k], sigma[k + 1] = k + 1, k
        # eps_i - eps_0  ->  eps_sigma(i) - eps_sigma(0)
        cols = [[a - b for a, b in zip(eps(sigma[i]), eps(sigma[0]))] for i in range(1, n + 1)]
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        gens.append(WeylGenerator({verts[i]: verts[sigma[i]] for i in range(n + 1)}, mat))
    return _entry(f"projective_space_{n}", GkmGraph(n, verts, edges, (), WeylAction(gens)))


def _sl2_swap(pairs, fixed=()):
    perm = {a: b for a, b in pairs}
    perm.update({b: a for a, b in pairs})
    perm.update({v: v for v in fixed})
    return WeylAction([WeylGenerator(perm, [[-1]])])


def hirzebruch(n: int) -> CatalogEntry:
    """Rational ruled surface F_n under the diagonal torus of SL2.

    Fixed points x, y over 0 and z, t over infinity; x, z on one invariant
    section, y, t on the other.  The presentation does not depend on n.
    """
    if n < 0:
        raise ValueError("hirzebruch needs n >= 0")
    rel = SurfaceRelation.quad_ruled("x", "y", "z", "t", [1])
    weyl = _sl2_swap([("x", "z"), ("y", "t")])
    return _entry(f"hirzebruch_{n}", GkmGraph(1, ["x", "y", "z", "t"], (), [rel], weyl))


def weighted_plane(n: int) -> CatalogEntry:
    """F_n with its negative section contracted; fixed points x, y, z, y the image of the section."""
    if n < 1:
        raise ValueError("weighted_plane needs n >= 1")
    rel = SurfaceRelation.triple_plane("x", "y", "z", [1])
    weyl = _sl2_swap([("x", "z")], fixed=["y"])
    return _entry(f"weighted_plane_{n}", GkmGraph(1, ["x", "y", "z"], (), [rel], weyl))


def plane_sl2() -> CatalogEntry:
    """P(V) for a nontrivial 3-dimensional SL2-module; x, y, z in weight order, y of weight 0."""
    rel = SurfaceRelation.triple_plane("x", "y", "z", [1])
    weyl = _sl2_swap([("x", "z")], fixed=["y"])
    return _entry("plane_sl2", GkmGraph(1, ["x", "y", "z"], (), [rel], weyl))


def _det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def toric_from_fan_2d(rays, max_cones, name="toric_fan") -> CatalogEntry:
    """GKM graph of a complete simplicial 2D fan.

    Vertices are the maximal cones ``c0, c1, ...`` in input order; adjacent
    cones share a ray and are joined by the curve whose character is the
    primitive normal of that ray.
    """
    rays = [tuple(int(c) for c in r) for r in rays]
    for i, r in enumerate(rays):
        if len(r) != 2 or gcd(*r) != 1:
            raise ValueError(f"ray {i} = {list(r)} is not a primitive integer 2-vector")
    cones = [tuple(c) for c in max_cones]
    for k, c in enumerate(cones):
        if len(c) != 2 or c[0] == c[1] or not all(0 <= i < len(rays) for i in c):
            raise NonSimplicial(f"cone {k} = {list(c)} is not a pair of distinct ray indices")
        if _det2(rays[c[0]], rays[c[1]]) <= 0:
            raise NonSimplicial(f"cone {k} is not a strictly convex cone listed counterclockwise")
    if not cones:
        raise IncompleteFan("fan has no maximal cones")
    # chain the cones counterclockwise: cone k ends where the next one starts
    by_start = {}
    for k, c in enumerate(cones):
        if c[0] in by_start:
            raise IncompleteFan(f"two cones start at ray {c[0]}")
        by_start[c[0]] = k
    seq = [0]
    while True:
        nxt = by_start.get(cones[seq[-1]][1])
        if nxt is None:
            raise IncompleteFan(f"no cone continues past ray {cones[seq[-1]][1]}")
        if nxt == 0:
            break
        if nxt in seq:
            raise IncompleteFan("cones do not form a single cycle")
        seq.append(nxt)
    if len(seq) != len(cones):
        raise IncompleteFan("some cones are not part of the cycle")
    # winding number: cones whose half-open span [u, v) contains (1, 0)
    e = (1, 0)
    winding = 0
    for u, v in ((rays[a], rays[b]) for a, b in cones):
        du = _det2(u, e)
        starts_before = du > 0 or (du == 0 and u[0] > 0)
        if starts_before and _det2(e, v) > 0:
            winding += 1
    if winding != 1:
        raise IncompleteFan(f"cones wind {winding} times around the origin")
    verts = [f"c{k}" for k in range(len(cones))]
    edges = []
    for k in seq:
        nxt = by_start[cones[k][1]]
        a, b = rays[cones[k][1]]
        edges.append(Edge((verts[k], verts[nxt]), [-b, a]))
    return _entry(name, GkmGraph(2, verts, edges))


def fan_p1xp1() -> CatalogEntry:
    return toric_from_fan_2d([(1, 0), (0, 1), (-1, 0), (0, -1)],
                             [(0, 1), (1, 2), (2, 3), (3, 0)], name="fan_p1xp1")


def fan_p2() -> CatalogEntry:
    return toric_from_fan_2d([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)], name="fan_p2")


def fan_hirzebruch(a: int) -> CatalogEntry:
    """Toric F_a, rays e1, e2, -e1 + a e2, -e2."""
    return toric_from_fan_2d([(1, 0), (0, 1), (-1, a), (0, -1)],
                             [(0, 1), (1, 2), (2, 3), (3, 0)], name=f"fan_hirzebruch_{a}")


def _perm_name(p):
    return "".join(str(i) for i in p)


def flag_sl3() -> CatalogEntry:
    """Complete flags in C^3: vertices are S_3 in one-line notation, characters in
    simple-root coordinates, W acting by left multiplication."""
    elements = sorted(permutations((1, 2, 3)))
    names = {w: _perm_name(w) for w in elements}

    def transposition(a, b):
        return {a: b, b: a}

    def left(s, w):
        return tuple(s.get(i, i) for i in w)

    roots = [((1, 0), transposition(1, 2)), ((0, 1), transposition(2, 3)), ((1, 1), transposition(1, 3))]
    edges = []
    for chi, s in roots:
        for w in elements:
            sw = left(s, w)
            if w < sw:
                edges.append(Edge((names[w], names[sw]), chi))
    # simple reflections on simple-root coordinates (columns are images of a1, a2)
    s1 = [[-1, 1], [0, 1]]
    s2 = [[1, 0], [1, -1]]
    gens = [WeylGenerator({names[w]: names[left(transposition(1, 2), w)] for w in elements}, s1),
            WeylGenerator({names[w]: names[left(transposition(2, 3), w)] for w in elements}, s2)]
    return _entry("flag_sl3", GkmGraph(2, [names[w] for w in elements], edges, (), WeylAction(gens)))


def spherical_demo() -> CatalogEntry:
    """Synthetic rank-2 input carrying all three congruence kinds at once.

    No claim is made that a variety realizes it; it exists to exercise the
    solver.  One ruled-surface relation on a, b, c, d along (1, 0), one plane
    relation on d, e, f along (0, 1), two plain curves a-f and b-e.
    """
    verts = ["a", "b", "c", "d", "e", "f"]
    rels = [SurfaceRelation.quad_ruled("a", "b", "c", "d", [1, 0]),
            SurfaceRelation.triple_plane("d", "e", "f", [0, 1])]
    edges = [Edge(("a", "f"), [1, 1]), Edge(("b", "e"), [1, -1])]
    return _entry("spherical_demo", GkmGraph(2, verts, edges, rels))


# name -> constructor taking the --n parameter (or None)
FAMILIES = {
    "projective_space": projective_space,
    "hirzebruch": hirzebruch,
    "weighted_plane": weighted_plane,
    "fan_hirzebruch": fan_hirzebruch,
    "plane_sl2": plane_sl2,
    "fan_p1xp1": fan_p1xp1,
    "fan_p2": fan_p2,
    "flag_sl3": flag_sl3,
    "spherical_demo": spherical_demo,
}
PARAMETRIC = {"projective_space", "hirzebruch", "weighted_plane", "fan_hirzebruch"}

# the instances carrying pinned goldens
STANDARD = [
    ("projective_space", 1), ("projective_space", 2), ("projective_space", 3),
    ("hirzebruch", 0), ("hirzebruch", 1), ("hirzebruch", 2), ("hirzebruch", 5),
    ("weighted_plane", 1), ("weighted_plane", 2), ("weighted_plane", 3),
    ("plane_sl2", None), ("fan_p1xp1", None), ("fan_p2", None), ("fan_hirzebruch", 1),
    ("flag_sl3", None), ("spherical_demo", None),
]

# values worked out by hand, checked against the oracle when goldens are regenerated
HAND_VALUES = {
    "projective_space_1": {"hilbert": [1, 2, 2, 2], "mod_delta": [1, 1], "weyl_invariants": [1, 1, 1, 1]},
    "projective_space_2": {"mod_delta": [1, 1, 1]},
    "projective_space_3": {"mod_delta": [1, 1, 1, 1]},
    "fan_p1xp1": {"hilbert": [1, 4, 8, 12, 16]},
    **{f"hirzebruch_{n}": {"hilbert": [1, 3, 4, 4], "generator_degrees": [0, 1, 1, 2],
                           "mod_delta": [1, 2, 1]} for n in (0, 1, 2, 5)},
    **{name: {"hilbert": [1, 2, 3, 3], "generator_degrees": [0, 1, 2], "mod_delta": [1, 1, 1]}
       for name in ("weighted_plane_1", "weighted_plane_2", "weighted_plane_3", "plane_sl2")},
}


def build(family: str, n: int | None = None) -> CatalogEntry:
    if family not in FAMILIES:
        raise KeyError(f"unknown catalog entry {family!r}; choose from {sorted(FAMILIES)}")
    ctor = FAMILIES[family]
    if family in PARAMETRIC:
        if n is None:
            raise ValueError(f"{family} needs --n")
        return ctor(n)
    return ctor()


def standard_entries() -> list[CatalogEntry]:
    return [build(f, n) for f, n in STANDARD]
