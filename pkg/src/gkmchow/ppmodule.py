"""Piecewise polynomial ring of a GKM graph, degree by degree.

A family ``(f_x)`` of degree-``d`` forms is stored as one coefficient vector
in ``(+)_x S_d``: vertex-major, monomials in ascending order inside each
block.  Every congruence ``g = 0 mod chi^k`` becomes the vanishing of the
coefficients of ``g`` with first-coordinate degree < k after the unimodular
coordinate change adapted to ``chi``, so each graded piece is the kernel of
an integer matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil, comb

from flint import fmpq_mat, fmpz_mat

from .errors import (DegreeMismatch, GraphMismatch, NoWeylData, NonUniqueSolution, NotInSpan,
                     NotMember)
from .gkmgraph import QUAD_RULED, TRIPLE_PLANE, GkmGraph, ensure_valid, strata_by_subtorus
from .polyalg import (Polynomial, _as_fraction, divisibility_rows, flint_nullspace, flint_rank,
                      flint_rref, monomial_index, monomials, primitive_part, vanishing_order)

CERTIFIED = "certified"
UNKNOWN = "unknown"


def witness(d: int) -> str:
    return f"witness:{d}"


# --- constraint compilation --------------------------------------------------

def _relation_terms(rel):
    """(coefficient map, order) pairs making up a surface relation."""
    pts = rel.points
    out = [({a: 1, b: -1}, 1) for a, b in zip(pts, pts[1:])]
    if rel.kind == TRIPLE_PLANE:
        x, y, z = pts
        out.append(({x: 1, y: -2, z: 1}, 2))
    else:
        x, y, z, t = pts
        out.append(({x: 1, y: -1, z: 1, t: -1}, 2))
    return out


def constraint_terms(g: GkmGraph, edges=None, relations=None):
    """Congruences as (label, direction, {vertex: coeff}, order); loops add nothing."""
    edges = range(len(g.edges)) if edges is None else edges
    relations = range(len(g.surface_relations)) if relations is None else relations
    out = []
    for i in edges:
        e = g.edges[i]
        if e.is_loop:
            continue
        x, y = e.ends
        out.append((f"edge {i} {{{x}, {y}}} chi={list(e.character)}",
                    primitive_part(e.character), {x: 1, y: -1}, 1))
    for i in relations:
        s = g.surface_relations[i]
        label = f"{s.kind} relation {i} {list(s.points)} root={list(s.root)}"
        for coeffs, order in _relation_terms(s):
            out.append((label, primitive_part(s.root), coeffs, order))
    return out


def _constraint_matrix(g, d, edges=None, relations=None):
    r = g.torus_rank
    n = len(monomials(r, d))
    idx = g.vertex_index
    ncols = n * len(g.vertices)
    flat = []
    nrows = 0
    for _, direction, coeffs, order in constraint_terms(g, edges, relations):
        blocks = [(idx[v] * n, c) for v, c in coeffs.items()]
        for fr in divisibility_rows(direction, d, order):
            row = [0] * ncols
            for start, c in blocks:
                row[start:start + n] = [c * e for e in fr]
            flat.extend(row)
            nrows += 1
    return fmpz_mat(nrows, ncols, flat), ncols


@lru_cache(maxsize=256)
def _piece(g: GkmGraph, d: int):
    """Kernel basis of degree d (rows of an fmpq_mat) and its free columns."""
    m, ncols = _constraint_matrix(g, d)
    basis = flint_nullspace(m, ncols)
    _, pivots = flint_rref(m) if m.nrows() else (None, [])
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    return basis, free


def default_max_degree(g: GkmGraph) -> int:
    order = 2 if g.surface_relations else 1
    return 2 * order + g.torus_rank + 2


# --- classes -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PPClass:
    """A family of homogeneous forms, one per fixed point, satisfying every congruence."""

    graph: GkmGraph
    components: tuple
    degree: int

    def __init__(self, graph, components, degree=None, check=True):
        comps = tuple(components)
        if degree is None:
            degree = _common_degree(graph, comps)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "degree", degree)
        if check:
            bad = first_violation(graph, comps)
            if bad is not None:
                raise NotMember(f"not a piecewise polynomial: violates {bad}", bad)

    @classmethod
    def from_vector(cls, graph, degree, vec, check=False):
        n = len(monomials(graph.torus_rank, degree))
        comps = [Polynomial.from_vector(graph.torus_rank, degree, vec[i * n:(i + 1) * n])
                 for i in range(len(graph.vertices))]
        return cls(graph, comps, degree, check=check)

    def vector(self):
        out = []
        for p in self.components:
            out.extend(p.coefficient_vector(self.degree))
        return out

    def __getitem__(self, vertex):
        return self.components[self.graph.vertex_index[vertex]]

    def scale(self, p: Polynomial) -> PPClass:
        """Action of a homogeneous element of S."""
        deg = self.degree + max(p.degree(), 0)
        return PPClass(self.graph, [p * c for c in self.components], deg, check=False)

    def __add__(self, other):
        if other.graph != self.graph:
            raise GraphMismatch("classes over different graphs")
        if other.degree != self.degree:
            raise DegreeMismatch("adding classes of different degrees")
        return PPClass(self.graph, [a + b for a, b in zip(self.components, other.components)],
                       self.degree, check=False)

    def __mul__(self, other):
        return cup(self, other)

    def __eq__(self, other):
        return (isinstance(other, PPClass) and self.graph == other.graph
                and self.degree == other.degree and self.components == other.components)

    def __hash__(self):
        return hash((self.degree, self.components))

    def to_json(self) -> dict:
        return {v: p.to_json() for v, p in zip(self.graph.vertices, self.components)}

    def __repr__(self):
        inner = ", ".join(f"{v}: {p}" for v, p in zip(self.graph.vertices, self.components))
        return f"PPClass(deg {self.degree}; {inner})"


def _common_degree(graph, comps):
    if len(comps) != len(graph.vertices):
        raise DegreeMismatch(f"{len(comps)} components for {len(graph.vertices)} vertices")
    degs = set()
    for p in comps:
        if p.nvars != graph.torus_rank:
            raise DegreeMismatch(f"component in {p.nvars} variables, torus rank {graph.torus_rank}")
        if not p.is_homogeneous():
            raise DegreeMismatch(f"component {p} is not homogeneous")
        if not p.is_zero():
            degs.add(p.degree())
    if len(degs) > 1:
        raise DegreeMismatch(f"components of different degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def first_violation(g: GkmGraph, comps):
    """Label of the first congruence the family breaks, or None."""
    comp = dict(zip(g.vertices, comps))
    for label, direction, coeffs, order in constraint_terms(g):
        combo = Polynomial.zero(g.torus_rank)
        for v, c in coeffs.items():
            combo = combo + comp[v] * c
        if vanishing_order(combo, direction) < order:
            return label
    return None


def membership(g: GkmGraph, candidate) -> bool:
    ensure_valid(g)
    comps = tuple(candidate)
    _common_degree(g, comps)
    return first_violation(g, comps) is None


def graded_piece(g: GkmGraph, d: int) -> list[PPClass]:
    """A Q-basis of the degree-d piece (deterministic kernel order)."""
    ensure_valid(g)
    if d < 0:
        return []
    if not g.vertices:
        return []
    basis, _ = _piece(g, d)
    return [PPClass.from_vector(g, d, row) for row in basis.tolist()]


def cup(a: PPClass, b: PPClass) -> PPClass:
    if a.graph != b.graph:
        raise GraphMismatch("cup of classes over different graphs")
    return PPClass(a.graph, [p * q for p, q in zip(a.components, b.components)],
                   a.degree + b.degree, check=False)


# --- Hilbert tables and presentations ---------------------------------------

@dataclass(frozen=True)
class HilbertTable:
    max_degree: int
    dims: tuple

    def to_json(self):
        return {"max_degree": self.max_degree, "dims": list(self.dims)}


def piece_dim(g, d):
    if not g.vertices or d < 0:
        return 0
    return _piece(g, d)[0].nrows()


def hilbert(g: GkmGraph, max_degree: int | None = None) -> HilbertTable:
    ensure_valid(g)
    D = default_max_degree(g) if max_degree is None else max_degree
    return HilbertTable(D, tuple(piece_dim(g, d) for d in range(D + 1)))


def _shifted_coords(g, d):
    """Matrix whose rows are x_i * b (b in the degree d-1 basis), in degree-d basis coordinates.

    Coordinates in a free-variable kernel basis are the values at its free
    columns, so only those columns are gathered.
    """
    r = g.torus_rank
    _, free = _piece(g, d)
    prev, _ = _piece(g, d - 1)
    if prev.nrows() == 0 or not free:
        return fmpq_mat(0, len(free))
    n_d = len(monomials(r, d))
    n_p = len(monomials(r, d - 1))
    prev_idx = monomial_index(r, d - 1)
    mons = monomials(r, d)
    sources = []  # per variable: source column for each free column (or None)
    for i in range(r):
        src = []
        for j in free:
            v, k = divmod(j, n_d)
            m = mons[k]
            if m[i] == 0:
                src.append(None)
            else:
                lower = m[:i] + (m[i] - 1,) + m[i + 1:]
                src.append(v * n_p + prev_idx[lower])
        sources.append(src)
    rows = prev.tolist()
    out = fmpq_mat(r * len(rows), len(free))
    k = 0
    for src in sources:
        for row in rows:
            for c, s in enumerate(src):
                if s is not None:
                    val = row[s]
                    if val != 0:
                        out[k, c] = val
            k += 1
    return out


@lru_cache(maxsize=256)
def _new_generator_columns(g, d):
    """Positions (in the degree-d basis) of the new generators of degree d."""
    width = piece_dim(g, d)
    if width == 0:
        return ()
    if d == 0:
        return tuple(range(width))
    m = _shifted_coords(g, d)
    if m.nrows() == 0:
        return tuple(range(width))
    _, pivots = flint_rref(m)
    piv = set(pivots)
    return tuple(j for j in range(width) if j not in piv)


@dataclass(frozen=True)
class ModulePresentation:
    graph: GkmGraph
    generators: tuple
    certified_to: int
    free: str
    rank_equals_fixed_points: bool

    @property
    def generator_degrees(self):
        return [c.degree for c in self.generators]

    def to_json(self):
        return {
            "generator_degrees": self.generator_degrees,
            "generators": [[p.to_json() for p in c.components] for c in self.generators],
            "free": self.free,
            "rank_equals_fixed_points": self.rank_equals_fixed_points,
        }


def _expected_free_dim(gen_degrees, r, d):
    return sum(comb(d - e + r - 1, r - 1) for e in gen_degrees if e <= d)


@dataclass(frozen=True)
class FreenessCertificate:
    """Truncated evidence of freeness.

    ``status`` is ``certified`` when the Hilbert function through
    ``certified_to`` equals that of a free module on the generator degrees and
    no generator appears in the top ``ceil(r/2) + 1`` degrees; this is a
    stabilization heuristic, not a proof.
    """

    status: str
    certified_to: int
    generator_degrees: tuple
    generator_count: int
    vertex_count: int

    @property
    def rank_equals_fixed_points(self):
        return self.generator_count == self.vertex_count

    def to_json(self):
        return {
            "free": self.status,
            "max_degree": self.certified_to,
            "generator_degrees": list(self.generator_degrees),
            "generator_count": self.generator_count,
            "vertex_count": self.vertex_count,
            "rank_equals_fixed_points": self.rank_equals_fixed_points,
        }


def _certificate(g, D, degrees, dims):
    r = g.torus_rank
    status = CERTIFIED
    for d in range(D + 1):
        if dims[d] != _expected_free_dim(degrees, r, d):
            status = witness(d)
            break
    else:
        top = ceil(r / 2) + 1
        if any(e > D - top for e in degrees):
            status = UNKNOWN
    return FreenessCertificate(status, D, tuple(degrees), len(degrees), len(g.vertices))


def generators(g: GkmGraph, max_degree: int | None = None) -> ModulePresentation:
    """Minimal generators through ``max_degree`` by graded Nakayama extraction."""
    ensure_valid(g)
    D = default_max_degree(g) if max_degree is None else max_degree
    gens = []
    for d in range(D + 1):
        if not g.vertices:
            break
        cols = _new_generator_columns(g, d)
        if cols:
            basis = _piece(g, d)[0].tolist()
            gens.extend(PPClass.from_vector(g, d, basis[j]) for j in cols)
    degrees = [c.degree for c in gens]
    cert = _certificate(g, D, degrees, hilbert(g, D).dims)
    return ModulePresentation(g, tuple(gens), D, cert.status, cert.rank_equals_fixed_points)


def freeness_certificate(g: GkmGraph, max_degree: int | None = None) -> FreenessCertificate:
    ensure_valid(g)
    D = default_max_degree(g) if max_degree is None else max_degree
    degrees = [d for d in range(D + 1) for _ in (_new_generator_columns(g, d) if g.vertices else ())]
    return _certificate(g, D, degrees, hilbert(g, D).dims)


def mod_delta_dims(g: GkmGraph, max_degree: int | None = None) -> list[int]:
    """dim of PP^d modulo the span of x_i * PP^(d-1), for d <= max_degree."""
    ensure_valid(g)
    D = default_max_degree(g) if max_degree is None else max_degree
    if not g.vertices:
        return [0] * (D + 1)
    return [len(_new_generator_columns(g, d)) for d in range(D + 1)]


def express_in_basis(c: PPClass, pres: ModulePresentation) -> list[Polynomial]:
    """Coefficients p_i with ``c = sum p_i * gen_i``; each p_i of degree deg(c) - deg(gen_i)."""
    g = pres.graph
    if c.graph != g:
        raise GraphMismatch("class and presentation over different graphs")
    r = g.torus_rank
    d = c.degree
    columns = []  # (generator index, monomial)
    vectors = []
    for i, gen in enumerate(pres.generators):
        k = d - gen.degree
        for m in monomials(r, k):
            columns.append((i, m))
            mono = Polynomial(r, {m: 1})
            vectors.append(gen.scale(mono).vector() if k >= 0 else [])
    target = c.vector()
    nrows = len(target)
    aug = fmpq_mat(nrows, len(columns) + 1)
    for j, vec in enumerate(vectors):
        for i, v in enumerate(vec):
            if v:
                aug[i, j] = _fmpq(v)
    for i, v in enumerate(target):
        if v:
            aug[i, len(columns)] = _fmpq(v)
    red, pivots = flint_rref(aug) if nrows else (aug, [])
    if len(columns) in pivots:
        hint = "" if d <= pres.certified_to else f" (presentation only certified to degree {pres.certified_to})"
        raise NotInSpan(f"class is not in the span of the generators{hint}")
    if len(pivots) < len(columns) and pres.free != CERTIFIED:
        raise NonUniqueSolution("generators are not certified free; coefficients are not unique")
    assert len(pivots) == len(columns) or pres.free == CERTIFIED
    sol = [0] * len(columns)
    for row, p in enumerate(pivots):
        sol[p] = red[row, len(columns)]
    coeffs = [dict() for _ in pres.generators]
    for (i, m), v in zip(columns, sol):
        if v != 0:
            coeffs[i][m] = _as_fraction(v)
    return [Polynomial(r, t) for t in coeffs]


def _fmpq(v):
    from flint import fmpq
    v = _as_fraction(v)
    return fmpq(v.numerator, v.denominator)


# --- Weyl invariants ---------------------------------------------------------

@lru_cache(maxsize=None)
def _substitution_matrix(char_matrix, d):
    """Matrix of p -> p(M^T x) on degree-d forms (sends the form of chi to that of M chi)."""
    r = len(char_matrix)
    mt = [[char_matrix[j][i] for j in range(r)] for i in range(r)]
    idx = monomial_index(r, d)
    mons = monomials(r, d)
    cols = []
    for m in mons:
        img = Polynomial(r, {m: 1}).substitute_linear(mt)
        col = [0] * len(mons)
        for e, c in img.terms.items():
            col[idx[e]] = int(c)
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(len(mons))) for i in range(len(mons)))


def weyl_action_matrix(g: GkmGraph, generator, d):
    """Matrix (fmpz_mat) of the action of one Weyl generator on (+)_x S_d."""
    n = len(monomials(g.torus_rank, d))
    sub = _substitution_matrix(generator.char_matrix, d)
    idx = g.vertex_index
    perm = generator.mapping
    big = fmpz_mat(n * len(g.vertices), n * len(g.vertices))
    for v in g.vertices:
        src, dst = idx[v] * n, idx[perm[v]] * n
        for i in range(n):
            for j in range(n):
                if sub[i][j]:
                    big[dst + i, src + j] = sub[i][j]
    return big


def weyl_invariants(g: GkmGraph, max_degree: int | None = None) -> HilbertTable:
    """Dimensions of the subspace of PP^d fixed by every Weyl generator."""
    ensure_valid(g)
    if g.weyl is None:
        raise NoWeylData("graph carries no Weyl action")
    D = default_max_degree(g) if max_degree is None else max_degree
    dims = []
    for d in range(D + 1):
        k = piece_dim(g, d)
        if k == 0:
            dims.append(0)
            continue
        basis, free = _piece(g, d)
        blocks = []
        for w in g.weyl.generators:
            moved = basis * weyl_action_matrix(g, w, d).transpose()  # rows: w . b_j
            coords = fmpq_mat(k, k)
            for i in range(k):
                for c, j in enumerate(free):
                    coords[i, c] = moved[i, j]
            diff = coords.transpose() - fmpq_mat(k, k, [int(i == j) for i in range(k) for j in range(k)])
            blocks.append(diff)
        stacked = fmpq_mat(k * len(blocks), k)
        for b, blk in enumerate(blocks):
            for i in range(k):
                for j in range(k):
                    stacked[b * k + i, j] = blk[i, j]
        dims.append(k - flint_rank(stacked))
    return HilbertTable(D, tuple(dims))


# --- stratified evaluation ---------------------------------------------------

def _intersect(a, b):
    """Intersection of row spaces of two fmpq_mat with independent rows."""
    if a.nrows() == 0 or b.nrows() == 0:
        return fmpq_mat(0, a.ncols())
    stacked = fmpq_mat(a.nrows() + b.nrows(), a.ncols())
    for i in range(a.nrows()):
        for j in range(a.ncols()):
            stacked[i, j] = a[i, j]
    for i in range(b.nrows()):
        for j in range(b.ncols()):
            stacked[a.nrows() + i, j] = b[i, j]
    rel = flint_nullspace(stacked.transpose())  # rows (alpha, beta) with alpha A + beta B = 0
    if rel.nrows() == 0:
        return fmpq_mat(0, a.ncols())
    alpha = fmpq_mat(rel.nrows(), a.nrows())
    for i in range(rel.nrows()):
        for j in range(a.nrows()):
            alpha[i, j] = rel[i, j]
    out = alpha * a
    red, pivots = flint_rref(out)
    res = fmpq_mat(len(pivots), a.ncols())
    for i in range(len(pivots)):
        for j in range(a.ncols()):
            res[i, j] = red[i, j]
    return res


def stratified_dim(g: GkmGraph, d: int) -> int:
    """dim PP^d computed as the intersection of each stratum's solution space."""
    ensure_valid(g)
    if not g.vertices or d < 0:
        return 0
    n = len(monomials(g.torus_rank, d)) * len(g.vertices)
    space = fmpq_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])
    for st in strata_by_subtorus(g).strata:
        m, ncols = _constraint_matrix(g, d, st.edges, st.relations)
        space = _intersect(space, flint_nullspace(m, ncols))
    return space.nrows()
