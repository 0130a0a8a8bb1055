"""GKM graph data model: fixed points, invariant curves, surface relations and
Weyl symmetry, with validation, products, strata and JSON (de)serialization.

Point order inside a surface relation is data.  For ``triple_plane`` the
middle point ``y`` carries the coefficient -2 in ``f_x - 2 f_y + f_z``; for
``quad_ruled`` the points ``x, z`` lie on one invariant section and ``y, t``
on the other.  Neither can be inferred from the character data, so documents
must list points in that order.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import SchemaError, UnsupportedSurfaceRelations, ValidationError, WeylClosureExceeded
from .polyalg import int_det, primitive_part

TRIPLE_PLANE = "triple_plane"
QUAD_RULED = "quad_ruled"
RELATION_ARITY = {TRIPLE_PLANE: 3, QUAD_RULED: 4}

DEFAULT_CLOSURE_BOUND = 10_000


@dataclass(frozen=True)
class Edge:
    """An invariant curve.  One end means a loop (a curve with one fixed point)."""

    ends: tuple
    character: tuple

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))
        object.__setattr__(self, "character", tuple(int(c) for c in self.character))

    @classmethod
    def loop(cls, x, character):
        return cls((x,), character)

    @property
    def is_loop(self) -> bool:
        return len(self.ends) == 1


@dataclass(frozen=True)
class SurfaceRelation:
    kind: str
    points: tuple
    root: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "root", tuple(int(c) for c in self.root))

    @classmethod
    def triple_plane(cls, x, y, z, root):
        return cls(TRIPLE_PLANE, (x, y, z), root)

    @classmethod
    def quad_ruled(cls, x, y, z, t, root):
        return cls(QUAD_RULED, (x, y, z, t), root)

    def shape_key(self):
        """Data invariant under the symmetries of the relation itself."""
        if self.kind == TRIPLE_PLANE:
            x, y, z = self.points
            return (self.kind, y, frozenset((x, z)))
        x, y, z, t = self.points
        return (self.kind, frozenset((frozenset((x, z)), frozenset((y, t)))))


@dataclass(frozen=True)
class WeylGenerator:
    vertex_perm: tuple  # (source, image) pairs
    char_matrix: tuple  # rows; acts on characters as column vectors

    def __post_init__(self):
        perm = self.vertex_perm
        if isinstance(perm, dict):
            perm = perm.items()
        object.__setattr__(self, "vertex_perm", tuple(sorted((a, b) for a, b in perm)))
        object.__setattr__(self, "char_matrix",
                           tuple(tuple(int(e) for e in row) for row in self.char_matrix))

    @property
    def mapping(self) -> dict:
        return dict(self.vertex_perm)

    def act_on_character(self, chi):
        return tuple(sum(m * c for m, c in zip(row, chi)) for row in self.char_matrix)


@dataclass(frozen=True)
class WeylAction:
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))


@dataclass(frozen=True)
class GkmGraph:
    torus_rank: int
    vertices: tuple
    edges: tuple = ()
    surface_relations: tuple = ()
    weyl: WeylAction | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "surface_relations", tuple(self.surface_relations))

    @property
    def two_ended(self):
        return tuple(e for e in self.edges if not e.is_loop)

    @property
    def loops(self):
        return tuple(e for e in self.edges if e.is_loop)

    @property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def replace_characters(self, fn) -> GkmGraph:
        """Apply ``fn`` to every edge character and relation root (for invariance tests)."""
        return GkmGraph(
            self.torus_rank,
            self.vertices,
            [Edge(e.ends, fn(e.character)) for e in self.edges],
            [SurfaceRelation(s.kind, s.points, fn(s.root)) for s in self.surface_relations],
            self.weyl,
        )


# --- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str

    def __str__(self):
        return f"{self.code} at {self.path}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code, path, message):
        self.violations.append(Violation(code, path, message))


def _check_character(report, chi, r, path):
    if len(chi) != r:
        report.add("BadCharacterLength", path, f"length {len(chi)}, torus rank {r}")
    elif not any(chi):
        report.add("ZeroCharacter", path, "character is zero")


def components(g: GkmGraph):
    """Connected components of the vertex set under edges and surface relations."""
    parent = list(range(len(g.vertices)))
    idx = g.vertex_index

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    groups = [e.ends for e in g.two_ended] + [s.points for s in g.surface_relations]
    for pts in groups:
        ids = [idx[p] for p in pts if p in idx]
        for a in ids[1:]:
            ra, rb = find(ids[0]), find(a)
            if ra != rb:
                parent[rb] = ra
    out = {}
    for i, v in enumerate(g.vertices):
        out.setdefault(find(i), []).append(v)
    return list(out.values())


def validate(g: GkmGraph, closure_bound: int = DEFAULT_CLOSURE_BOUND) -> ValidationReport:
    report = ValidationReport()
    r = g.torus_rank
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        report.add("BadTorusRank", "$.torus_rank", f"must be a positive integer, got {r!r}")
        return report
    seen = set()
    for i, v in enumerate(g.vertices):
        if not isinstance(v, str) or not v:
            report.add("BadVertexId", f"$.vertices[{i}]", f"{v!r} is not a nonempty string")
        if v in seen:
            report.add("DuplicateVertex", f"$.vertices[{i}]", f"{v!r} listed twice")
        seen.add(v)
    for i, e in enumerate(g.edges):
        path = f"$.edges[{i}]"
        if len(e.ends) not in (1, 2):
            report.add("BadEdge", path, "an edge has one (loop) or two ends")
        for x in e.ends:
            if x not in seen:
                report.add("UnknownVertex", path, f"unknown vertex {x!r}")
        if len(e.ends) == 2 and e.ends[0] == e.ends[1]:
            report.add("DegenerateEdge", path, "two-ended edge with equal endpoints; use a loop")
        _check_character(report, e.character, r, path + ".character")
    for i, s in enumerate(g.surface_relations):
        path = f"$.surface_relations[{i}]"
        if s.kind not in RELATION_ARITY:
            report.add("UnknownRelationKind", path, f"kind {s.kind!r}")
        elif len(s.points) != RELATION_ARITY[s.kind]:
            report.add("BadRelationArity", path,
                       f"{s.kind} takes {RELATION_ARITY[s.kind]} points, got {len(s.points)}")
        for x in s.points:
            if x not in seen:
                report.add("UnknownVertex", path, f"unknown vertex {x!r}")
        if len(set(s.points)) != len(s.points):
            report.add("DuplicatePoint", path, "relation points must be distinct")
        _check_character(report, s.root, r, path + ".root")
    if g.weyl is not None and report.ok:
        _validate_weyl(g, report, closure_bound)
    if report.ok and len(components(g)) > 1:
        report.warnings.append(
            f"graph has {len(components(g))} connected components; degree-0 piece has that dimension")
    return report


def _edge_signature(g, perm=None, mat=None):
    sig = Counter()
    for e in g.edges:
        ends = e.ends if perm is None else tuple(perm[x] for x in e.ends)
        chi = e.character if mat is None else mat.act_on_character(e.character)
        sig[(frozenset(ends), len(ends), primitive_part(chi))] += 1
    for s in g.surface_relations:
        rel = s if perm is None else SurfaceRelation(s.kind, [perm[x] for x in s.points], s.root)
        root = s.root if mat is None else mat.act_on_character(s.root)
        sig[(rel.shape_key(), primitive_part(root))] += 1
    return sig


def _validate_weyl(g, report, closure_bound):
    r = g.torus_rank
    verts = set(g.vertices)
    for i, w in enumerate(g.weyl.generators):
        path = f"$.weyl.generators[{i}]"
        perm = w.mapping
        if set(perm) != verts or set(perm.values()) != verts or len(perm) != len(w.vertex_perm):
            report.add("WeylNotBijection", path + ".vertex_perm", "not a bijection of the vertices")
            continue
        m = w.char_matrix
        if len(m) != r or any(len(row) != r for row in m):
            report.add("WeylBadShape", path + ".char_matrix", f"must be {r}x{r}")
            continue
        if int_det(m) == 0:
            report.add("WeylSingular", path + ".char_matrix", "matrix is not invertible")
            continue
        if _edge_signature(g, perm, w) != _edge_signature(g):
            report.add("WeylIncompatible", path, "does not map the curve/relation data onto itself")
    if report.ok:
        try:
            weyl_group_elements(g, closure_bound)
        except WeylClosureExceeded as exc:
            report.add("WeylNotFinite", "$.weyl", str(exc))


def weyl_group_elements(g: GkmGraph, bound: int = DEFAULT_CLOSURE_BOUND):
    """All elements of the generated group as (vertex index permutation, matrix).

    Raises WeylClosureExceeded past ``bound`` elements.
    """
    n = len(g.vertices)
    r = g.torus_rank
    idx = g.vertex_index
    ident = (tuple(range(n)), tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))
    gens = []
    for w in (g.weyl.generators if g.weyl else ()):
        perm = w.mapping
        gens.append((tuple(idx[perm[v]] for v in g.vertices), w.char_matrix))

    def compose(a, b):
        pa, ma = a
        pb, mb = b
        p = tuple(pa[pb[i]] for i in range(n))
        m = tuple(tuple(sum(ma[i][k] * mb[k][j] for k in range(r)) for j in range(r))
                  for i in range(r))
        return p, m

    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for el in frontier:
            for s in gens:
                c = compose(s, el)
                if c not in seen:
                    seen.add(c)
                    if len(seen) > bound:
                        raise WeylClosureExceeded(f"Weyl group exceeds {bound} elements")
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def ensure_valid(g: GkmGraph) -> GkmGraph:
    report = validate(g)
    if not report.ok:
        raise ValidationError(report)
    return g


# --- products and strata ---------------------------------------------------

def pair_id(x, y) -> str:
    return f"({x},{y})"


def product(g1: GkmGraph, g2: GkmGraph) -> GkmGraph:
    """Product graph: characters of g1 padded on the right, of g2 on the left."""
    if g1.surface_relations or g2.surface_relations:
        raise UnsupportedSurfaceRelations("products of graphs with surface relations are not supported")
    r1, r2 = g1.torus_rank, g2.torus_rank
    verts = [pair_id(x, y) for x in g1.vertices for y in g2.vertices]
    edges = []
    for e in g1.edges:
        for y in g2.vertices:
            edges.append(Edge([pair_id(x, y) for x in e.ends], e.character + (0,) * r2))
    for e in g2.edges:
        for x in g1.vertices:
            edges.append(Edge([pair_id(x, y) for y in e.ends], (0,) * r1 + e.character))
    weyl = None
    if g1.weyl or g2.weyl:
        gens = []
        for w in (g1.weyl.generators if g1.weyl else ()):
            perm = w.mapping
            mat = [list(row) + [0] * r2 for row in w.char_matrix]
            mat += [[0] * r1 + [int(i == j) for j in range(r2)] for i in range(r2)]
            gens.append(WeylGenerator({pair_id(x, y): pair_id(perm[x], y)
                                       for x in g1.vertices for y in g2.vertices}, mat))
        for w in (g2.weyl.generators if g2.weyl else ()):
            perm = w.mapping
            mat = [[int(i == j) for j in range(r1)] + [0] * r2 for i in range(r1)]
            mat += [[0] * r1 + list(row) for row in w.char_matrix]
            gens.append(WeylGenerator({pair_id(x, y): pair_id(x, perm[y])
                                       for x in g1.vertices for y in g2.vertices}, mat))
        weyl = WeylAction(gens)
    return GkmGraph(r1 + r2, verts, edges, (), weyl)


@dataclass(frozen=True)
class Stratum:
    direction: tuple  # primitive, first nonzero entry positive
    edges: tuple  # indices into g.edges
    relations: tuple  # indices into g.surface_relations


@dataclass(frozen=True)
class StrataReport:
    strata: tuple

    def __len__(self):
        return len(self.strata)


def strata_by_subtorus(g: GkmGraph) -> StrataReport:
    """Group curves and relations by the rational line of their character.

    Each line is the character of a codimension-one subtorus ``ker chi``.
    """
    order = []
    members = {}
    for i, e in enumerate(g.edges):
        d = primitive_part(e.character)
        if d not in members:
            order.append(d)
            members[d] = ([], [])
        members[d][0].append(i)
    for i, s in enumerate(g.surface_relations):
        d = primitive_part(s.root)
        if d not in members:
            order.append(d)
            members[d] = ([], [])
        members[d][1].append(i)
    return StrataReport(tuple(Stratum(d, tuple(members[d][0]), tuple(members[d][1])) for d in order))


# --- serialization ---------------------------------------------------------

def to_dict(g: GkmGraph) -> dict:
    return {
        "torus_rank": g.torus_rank,
        "vertices": list(g.vertices),
        "edges": [{"ends": list(e.ends), "character": list(e.character)} for e in g.two_ended],
        "loops": [{"vertex": e.ends[0], "character": list(e.character)} for e in g.loops],
        "surface_relations": [
            {"kind": s.kind, "points": list(s.points), "root": list(s.root)}
            for s in g.surface_relations
        ],
        "weyl": None if g.weyl is None else {
            "generators": [
                {"vertex_perm": {v: w.mapping[v] for v in g.vertices if v in w.mapping},
                 "char_matrix": [list(row) for row in w.char_matrix]}
                for w in g.weyl.generators
            ]
        },
    }


_INLINE_WIDTH = 96


def _render(value, indent):
    """Inline when short, otherwise one element per line."""
    flat = json.dumps(value, ensure_ascii=False)
    if len(flat) + indent <= _INLINE_WIDTH or not isinstance(value, (list, dict)) or not value:
        return flat
    pad = " " * (indent + 2)
    if isinstance(value, list):
        items = [pad + _render(v, indent + 2) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"
    items = [pad + json.dumps(k, ensure_ascii=False) + ": " + _render(v, indent + 2)
             for k, v in value.items()]
    return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"


def _format(doc) -> str:
    lines = [f"  {json.dumps(k)}: {_render(v, 2)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def serialize(g: GkmGraph) -> str:
    """Canonical text: fixed key order, short values kept on one line."""
    return _format(to_dict(g))


def _expect(cond, msg, path):
    if not cond:
        raise SchemaError(msg, path)


def _int_vector(val, r, path):
    _expect(isinstance(val, list), "expected an integer array", path)
    for i, c in enumerate(val):
        _expect(isinstance(c, int) and not isinstance(c, bool), "expected an integer", f"{path}[{i}]")
    _expect(len(val) == r, f"expected length {r} (torus_rank), got {len(val)}", path)
    return tuple(val)


def _str_list(val, path, n=None):
    _expect(isinstance(val, list), "expected an array of vertex ids", path)
    for i, v in enumerate(val):
        _expect(isinstance(v, str), "vertex ids are strings", f"{path}[{i}]")
    if n is not None:
        _expect(len(val) == n, f"expected {n} entries, got {len(val)}", path)
    return tuple(val)


def from_dict(doc) -> GkmGraph:
    """Build a graph from a parsed document; raises SchemaError on shape errors."""
    _expect(isinstance(doc, dict), "document must be a JSON object", "$")
    known = {"torus_rank", "vertices", "edges", "loops", "surface_relations", "weyl"}
    for k in doc:
        _expect(k in known, f"unknown key {k!r}", f"$.{k}")
    _expect("torus_rank" in doc, "missing key", "$.torus_rank")
    r = doc["torus_rank"]
    _expect(isinstance(r, int) and not isinstance(r, bool) and r >= 1,
            "torus_rank must be a positive integer", "$.torus_rank")
    _expect("vertices" in doc, "missing key", "$.vertices")
    verts = _str_list(doc["vertices"], "$.vertices")
    edges = []
    raw_edges = doc.get("edges", [])
    _expect(isinstance(raw_edges, list), "expected an array", "$.edges")
    for i, e in enumerate(raw_edges):
        p = f"$.edges[{i}]"
        _expect(isinstance(e, dict) and set(e) == {"ends", "character"},
                'edge must be {"ends": [x, y], "character": [...]}', p)
        edges.append(Edge(_str_list(e["ends"], p + ".ends", 2), _int_vector(e["character"], r, p + ".character")))
    raw_loops = doc.get("loops", [])
    _expect(isinstance(raw_loops, list), "expected an array", "$.loops")
    for i, e in enumerate(raw_loops):
        p = f"$.loops[{i}]"
        _expect(isinstance(e, dict) and set(e) == {"vertex", "character"},
                'loop must be {"vertex": x, "character": [...]}', p)
        _expect(isinstance(e["vertex"], str), "vertex ids are strings", p + ".vertex")
        edges.append(Edge.loop(e["vertex"], _int_vector(e["character"], r, p + ".character")))
    rels = []
    raw_rels = doc.get("surface_relations", [])
    _expect(isinstance(raw_rels, list), "expected an array", "$.surface_relations")
    for i, s in enumerate(raw_rels):
        p = f"$.surface_relations[{i}]"
        _expect(isinstance(s, dict) and set(s) == {"kind", "points", "root"},
                'relation must be {"kind", "points", "root"}', p)
        _expect(s["kind"] in RELATION_ARITY, f"kind must be one of {sorted(RELATION_ARITY)}", p + ".kind")
        pts = _str_list(s["points"], p + ".points", RELATION_ARITY[s["kind"]])
        rels.append(SurfaceRelation(s["kind"], pts, _int_vector(s["root"], r, p + ".root")))
    weyl = None
    raw_w = doc.get("weyl")
    if raw_w is not None:
        _expect(isinstance(raw_w, dict) and set(raw_w) == {"generators"}, 'weyl must be {"generators": [...]}', "$.weyl")
        _expect(isinstance(raw_w["generators"], list), "expected an array", "$.weyl.generators")
        gens = []
        for i, w in enumerate(raw_w["generators"]):
            p = f"$.weyl.generators[{i}]"
            _expect(isinstance(w, dict) and set(w) == {"vertex_perm", "char_matrix"},
                    'generator must be {"vertex_perm", "char_matrix"}', p)
            perm = w["vertex_perm"]
            _expect(isinstance(perm, dict) and all(isinstance(v, str) for v in perm.values()),
                    "vertex_perm maps vertex ids to vertex ids", p + ".vertex_perm")
            mat = w["char_matrix"]
            _expect(isinstance(mat, list) and len(mat) == r, f"char_matrix must have {r} rows", p + ".char_matrix")
            rows = [_int_vector(row, r, f"{p}.char_matrix[{j}]") for j, row in enumerate(mat)]
            gens.append(WeylGenerator(perm, rows))
        weyl = WeylAction(gens)
    return GkmGraph(r, verts, edges, rels, weyl)


def parse(text: str) -> GkmGraph:
    """Parse and validate a graph document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, "$", exc.lineno) from None
    g = from_dict(doc)
    return ensure_valid(g)


def canonicalize(text: str) -> str:
    """Canonical text of a document: schema key order, defaults filled in."""
    doc = json.loads(text)
    out = {
        "torus_rank": doc["torus_rank"],
        "vertices": doc["vertices"],
        "edges": [{"ends": e["ends"], "character": e["character"]} for e in doc.get("edges", [])],
        "loops": [{"vertex": e["vertex"], "character": e["character"]} for e in doc.get("loops", [])],
        "surface_relations": [{"kind": s["kind"], "points": s["points"], "root": s["root"]}
                              for s in doc.get("surface_relations", [])],
        "weyl": None,
    }
    if doc.get("weyl") is not None:
        order = doc["vertices"]
        out["weyl"] = {"generators": [
            {"vertex_perm": {v: w["vertex_perm"][v] for v in order if v in w["vertex_perm"]},
             "char_matrix": w["char_matrix"]}
            for w in doc["weyl"]["generators"]]}
    return _format(out)
