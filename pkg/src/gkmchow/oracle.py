"""Slow, independent recomputation of the catalog tables.

Nothing here touches the coordinate changes or flint: a congruence
``g = 0 mod chi^k`` is written as ``g - chi^k * h = 0`` with a fresh unknown
``h`` of degree ``d - k`` (multiplication by ``chi^k`` is injective, so ``h`` is
determined by ``g``), monomials are enumerated directly, and the systems are
reduced with plain Fraction elimination on a shuffled row order.

Run ``python -m gkmchow.oracle --write`` to regenerate ``gkmchow/goldens``;
``--check`` compares instead of writing.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from itertools import product as iproduct
from pathlib import Path

from . import catalog
from .gkmgraph import QUAD_RULED, TRIPLE_PLANE
from .ppmodule import default_max_degree
from .polyalg import rank_python, rref_python

SEED = 20240601


def _mons(r, d):
    return [e for e in iproduct(range(d + 1), repeat=r) if sum(e) == d]


def _poly_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _linear(chi):
    r = len(chi)
    return {tuple(int(i == j) for j in range(r)): Fraction(c) for i, c in enumerate(chi) if c}


def _power(p, k, r):
    out = {(0,) * r: Fraction(1)}
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


def _congruences(g):
    """(vertex coefficients, character, order), listed straight from the relation definitions."""
    out = []
    for e in g.edges:
        if len(e.ends) == 2:
            out.append(({e.ends[0]: 1, e.ends[1]: -1}, e.character, 1))
    for s in g.surface_relations:
        p = s.points
        for a in range(len(p)):
            for b in range(a + 1, len(p)):
                out.append(({p[a]: 1, p[b]: -1}, s.root, 1))
        if s.kind == TRIPLE_PLANE:
            out.append(({p[0]: 1, p[1]: -2, p[2]: 1}, s.root, 2))
        elif s.kind == QUAD_RULED:
            out.append(({p[0]: 1, p[1]: -1, p[2]: 1, p[3]: -1}, s.root, 2))
    return out


def piece_basis(g, d, rng):
    """Vectors (vertex-major, ``_mons`` order) spanning PP^d."""
    r = g.torus_rank
    mons = _mons(r, d)
    n = len(mons)
    col = {(v, m): i * n + k for i, v in enumerate(g.vertices) for k, m in enumerate(mons)}
    nf = len(col)
    rows = []
    aux = nf
    for coeffs, chi, order in _congruences(g):
        lower = _mons(r, d - order)
        chik = _power(_linear(chi), order, r)
        hcols = {m: aux + k for k, m in enumerate(lower)}
        aux += len(lower)
        for m in mons:
            row = [Fraction(0)] * nf
            for v, c in coeffs.items():
                row[col[(v, m)]] += c
            extra = {}
            for h in lower:
                for e, c in chik.items():
                    if tuple(a + b for a, b in zip(h, e)) == m:
                        extra[hcols[h]] = extra.get(hcols[h], 0) - c
            rows.append((row, extra))
    width = aux
    dense = []
    for row, extra in rows:
        full = row + [Fraction(0)] * (width - nf)
        for j, c in extra.items():
            full[j] += c
        dense.append(full)
    if not dense:
        return [[Fraction(int(i == j)) for j in range(nf)] for i in range(nf)]
    order = list(range(len(dense)))
    rng.shuffle(order)
    red, pivots = rref_python(dense, order)
    pivset = set(pivots)
    basis = []
    for j in range(width):
        if j in pivset:
            continue
        vec = [Fraction(0)] * width
        vec[j] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -red[i][j]
        # h is determined by f, so the projection stays independent
        basis.append(vec[:nf])
    return basis


def hilbert(g, max_degree, seed=SEED):
    rng = random.Random(seed)
    return [len(piece_basis(g, d, rng)) for d in range(max_degree + 1)]


def _shift(vec, i, r, d, nverts):
    """x_i times a degree-d family, as a degree-(d+1) vector."""
    src = _mons(r, d)
    dst = {m: k for k, m in enumerate(_mons(r, d + 1))}
    out = [Fraction(0)] * (len(dst) * nverts)
    for v in range(nverts):
        for k, m in enumerate(src):
            c = vec[v * len(src) + k]
            if c:
                up = tuple(e + (j == i) for j, e in enumerate(m))
                out[v * len(dst) + dst[up]] = c
    return out


def mod_delta(g, max_degree, seed=SEED):
    rng = random.Random(seed)
    r = g.torus_rank
    nv = len(g.vertices)
    out = []
    prev = None
    for d in range(max_degree + 1):
        cur = piece_basis(g, d, rng)
        if d == 0 or not prev:
            out.append(len(cur))
        else:
            shifted = [_shift(b, i, r, d - 1, nv) for b in prev for i in range(r)]
            out.append(len(cur) - rank_python(shifted, rng))
        prev = cur
    return out


def _group(g):
    idx = {v: i for i, v in enumerate(g.vertices)}
    r = g.torus_rank
    gens = []
    for w in g.weyl.generators:
        perm = dict(w.vertex_perm)
        gens.append((tuple(idx[perm[v]] for v in g.vertices), tuple(map(tuple, w.char_matrix))))
    ident = (tuple(range(len(g.vertices))), tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))
    elems = {ident}
    stack = [ident]
    while stack:
        p, m = stack.pop()
        for q, n in gens:
            c = (tuple(q[p[i]] for i in range(len(p))),
                 tuple(tuple(sum(n[i][k] * m[k][j] for k in range(r)) for j in range(r)) for i in range(r)))
            if c not in elems:
                elems.add(c)
                stack.append(c)
    return elems


def _act(vec, elem, r, d):
    """(w f)_{w x} = f_x with each character chi replaced by M chi."""
    perm, m = elem
    mons = _mons(r, d)
    n = len(mons)
    pos = {mo: k for k, mo in enumerate(mons)}
    images = [{} for _ in range(r)]
    for i in range(r):
        # x_i is the character e_i; M e_i is column i of M
        images[i] = _linear([m[j][i] for j in range(r)])
    out = [Fraction(0)] * len(vec)
    for v in range(len(perm)):
        for k, mo in enumerate(mons):
            c = vec[v * n + k]
            if not c:
                continue
            img = {(0,) * r: Fraction(1)}
            for i, e in enumerate(mo):
                img = _poly_mul(img, _power(images[i], e, r))
            for e, cc in img.items():
                out[perm[v] * n + pos[e]] += c * cc
    return out


def weyl_invariants(g, max_degree, seed=SEED):
    """Rank of the Reynolds average of a basis of each graded piece."""
    rng = random.Random(seed)
    elems = _group(g)
    r = g.torus_rank
    out = []
    for d in range(max_degree + 1):
        basis = piece_basis(g, d, rng)
        avg = []
        for b in basis:
            tot = [Fraction(0)] * len(b)
            for el in elems:
                tot = [x + y for x, y in zip(tot, _act(b, el, r, d))]
            avg.append(tot)
        out.append(rank_python(avg, rng) if avg else 0)
    return out


def golden_payload(entry, seed=SEED):
    g = entry.graph
    D = default_max_degree(g)
    hand = catalog.HAND_VALUES.get(entry.name, {})
    tables = {"hilbert": hilbert(g, D, seed), "mod_delta": mod_delta(g, D, seed)}
    tables["generator_degrees"] = [d for d, k in enumerate(tables["mod_delta"]) for _ in range(k)]
    if g.weyl is not None:
        tables["weyl_invariants"] = weyl_invariants(g, D, seed)
    payload = {"name": entry.name, "max_degree": D}
    for key, value in tables.items():
        source = "oracle"
        if key in hand:
            want = hand[key]
            got = value if key == "generator_degrees" else value[:len(want)]
            if key == "mod_delta":
                got, want = value, want + [0] * (len(value) - len(want))
            if got != want:
                raise AssertionError(f"{entry.name}.{key}: oracle {got} disagrees with hand value {want}")
            source = "oracle+hand"
        payload[key] = {"value": value, "source": source}
    return payload


def format_golden(payload) -> str:
    """One top-level key per line, values compact."""
    lines = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in payload.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def golden_dir() -> Path:
    return Path(catalog.__file__).parent / "goldens"


def main(argv=None):
    ap = argparse.ArgumentParser(prog="python -m gkmchow.oracle", description=__doc__.splitlines()[0])
    mode = ap.add_mutually_exclusive_group(required=True)
    mode.add_argument("--write", action="store_true", help="rewrite the golden files")
    mode.add_argument("--check", action="store_true", help="compare against the golden files")
    args = ap.parse_args(argv)
    out = golden_dir()
    out.mkdir(exist_ok=True)
    bad = 0
    for entry in catalog.standard_entries():
        payload = golden_payload(entry)
        text = format_golden(payload)
        path = out / f"{entry.name}.json"
        if args.write:
            path.write_text(text, encoding="utf-8")
            print(f"wrote {path.name}")
        else:
            same = path.is_file() and path.read_text(encoding="utf-8") == text
            bad += not same
            print(f"{'ok  ' if same else 'DIFF'} {entry.name}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
