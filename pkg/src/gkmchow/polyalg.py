"""Exact arithmetic substrate: rationals, graded polynomials, linear algebra over Q
and unimodular coordinate changes adapted to a character.

Rationals are :class:`fractions.Fraction`.  Polynomials live in
``Q[x_1, ..., x_r]``, where ``x_i`` is the i-th coordinate character, so a
character ``chi`` is the linear form ``sum(chi[i] * x_i)``.

Monomials are ordered graded-lexicographically with ``x_1 < ... < x_r``.
Matrices are reduced with a fixed left-to-right pivot order, so every basis
computed here is reproducible.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from flint import fmpq, fmpq_mat, fmpz_mat

from .errors import NotPrimitive, ZeroCharacter

Rational = Fraction
INFINITY = math.inf


# --- monomials ---------------------------------------------------------------

def monomial_key(exp):
    """Sort key for graded lex order with x_1 < ... < x_r."""
    return (sum(exp), tuple(reversed(exp)))


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total ``degree`` in ``nvars`` variables, ascending."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    out.sort(key=monomial_key)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


# --- polynomials -------------------------------------------------------------

def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(c)


class Polynomial:
    """Immutable polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero Fractions.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = _as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # terms already clean
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def linear_form(cls, chi):
        """The linear polynomial ``sum(chi[i] * x_i)`` of a character."""
        n = len(chi)
        terms = {}
        for i, c in enumerate(chi):
            if c:
                exp = [0] * n
                exp[i] = 1
                terms[tuple(exp)] = Fraction(c)
        return cls._raw(n, terms)

    @classmethod
    def from_vector(cls, nvars, degree, coeffs):
        """Inverse of :meth:`coefficient_vector`."""
        terms = {}
        for m, c in zip(monomials(nvars, degree), coeffs):
            c = _as_fraction(c)
            if c:
                terms[m] = c
        return cls._raw(nvars, terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]))

    def coefficient(self, exp) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, d):
        return Polynomial._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def coefficient_vector(self, degree):
        """Coefficients on ``monomials(nvars, degree)``; other degrees must be absent."""
        idx = monomial_index(self.nvars, degree)
        vec = [Fraction(0)] * len(idx)
        for e, c in self._terms.items():
            if e not in idx:
                raise ValueError(f"term of degree {sum(e)} in a degree-{degree} vector")
            vec[idx[e]] = c
        return vec

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return multiply(self, other)
        c = _as_fraction(other)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: c * v for e, v in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(point, e):
                if k:
                    term *= Fraction(v) ** k
            total += term
        return total

    def substitute_linear(self, matrix):
        """Replace ``x_i`` by ``sum_j matrix[i][j] * y_j``; returns a polynomial in y."""
        n = len(matrix[0]) if matrix else 0
        forms = [Polynomial.linear_form(row) for row in matrix]
        out = Polynomial.zero(n)
        cache = {}
        for e, c in self._terms.items():
            out = out + _monomial_image(e, forms, cache) * c
        return out

    def to_json(self):
        """``[{"exp": [...], "num": "...", "den": "..."}]`` in ascending monomial order."""
        return [
            {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in self.items()
        ]

    @classmethod
    def from_json(cls, data, nvars):
        """Accepts the term-list form, or a bare integer / numeric string for constants."""
        if isinstance(data, bool):
            raise ValueError("boolean is not a polynomial")
        if isinstance(data, int):
            return cls.constant(nvars, data)
        if isinstance(data, str):
            return cls.constant(nvars, Fraction(data))
        if not isinstance(data, list):
            raise ValueError(f"polynomial must be a list of terms, got {type(data).__name__}")
        terms = {}
        for t in data:
            if not isinstance(t, dict) or "exp" not in t or "num" not in t:
                raise ValueError(f"bad term {t!r}")
            exp = tuple(t["exp"])
            if len(exp) != nvars:
                raise ValueError(f"exponent {list(exp)} has length {len(exp)}, expected {nvars}")
            c = Fraction(int(t["num"]), int(t.get("den", "1")))
            terms[exp] = terms.get(exp, 0) + c
        return cls(nvars, terms)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in reversed(self.items()):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _monomial_image(exp, forms, cache):
    if exp in cache:
        return cache[exp]
    k = max((i for i, e in enumerate(exp) if e), default=None)
    if k is None:
        res = Polynomial.constant(forms[0].nvars if forms else 0, 1)
    else:
        lower = list(exp)
        lower[k] -= 1
        res = multiply(_monomial_image(tuple(lower), forms, cache), forms[k])
    cache[exp] = res
    return res


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    out = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = _add_exp(e1, e2)
            out[e] = out.get(e, 0) + c1 * c2
    return Polynomial._raw(p.nvars, {e: c for e, c in out.items() if c})


# --- matrices ----------------------------------------------------------------

class QMatrix:
    """Dense immutable rational matrix, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols=None, entries=None):
        if entries is None:
            data = [list(r) for r in rows]
            rows = len(data)
            cols = len(data[0]) if data else (cols or 0)
            entries = [c for r in data for c in r]
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(_as_fraction(e) for e in entries)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_flint(cls, m):
        return cls(m.nrows(), m.ncols(), [e for row in m.tolist() for e in row])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def to_flint(self):
        return fmpq_mat(self.rows, self.cols,
                        [fmpq(e.numerator, e.denominator) for e in self.entries])

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    out.append(sum(r[k] * other[k, j] for k in range(self.cols)))
            return QMatrix(self.rows, other.cols, out)
        vec = [_as_fraction(v) for v in other]
        return [sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"QMatrix({self.tolist()})"


def to_flint_matrix(rows, ncols):
    """Rows of ints/Fractions -> fmpq_mat (fmpz_mat when everything is integral)."""
    flat = [e for r in rows for e in r]
    if all(isinstance(e, int) for e in flat):
        return fmpz_mat(len(rows), ncols, flat)
    return fmpq_mat(len(rows), ncols, [fmpq(Fraction(e).numerator, Fraction(e).denominator)
                                       for e in flat])


def flint_rref(m):
    """RREF of an fmpz_mat / fmpq_mat: returns (fmpq_mat R, pivots)."""
    if isinstance(m, fmpz_mat):
        r, den, rank = m.rref()
        r = fmpq_mat(r) / den if rank else fmpq_mat(m.nrows(), m.ncols())
    else:
        r, rank = m.rref()
    pivots = []
    j = 0
    ncols = r.ncols()
    for i in range(rank):
        while r[i, j] == 0:
            j += 1
        pivots.append(j)
        j += 1
    return r, pivots


def flint_nullspace(m, ncols=None):
    """Standard free-variable kernel basis, as the rows of an fmpq_mat."""
    n = m.ncols() if ncols is None else ncols
    if m.nrows() == 0:
        return fmpq_mat(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])
    r, pivots = flint_rref(m)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    out = fmpq_mat(len(free), n)
    for k, j in enumerate(free):
        out[k, j] = 1
        for i, p in enumerate(pivots):
            v = r[i, j]
            if v != 0:
                out[k, p] = -v
    return out


def flint_rank(m):
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def rref(m: QMatrix):
    """Reduced row echelon form over Q: (matrix, pivot columns, rank)."""
    if m.rows == 0 or m.cols == 0:
        return m, [], 0
    r, pivots = flint_rref(m.to_flint())
    return QMatrix.from_flint(r), pivots, len(pivots)


def kernel_basis(m: QMatrix):
    """Null space basis; one vector per free column, that column set to 1."""
    if m.cols == 0:
        return []
    basis = flint_nullspace(m.to_flint() if m.rows else fmpq_mat(0, m.cols), m.cols)
    return [tuple(_as_fraction(e) for e in row) for row in basis.tolist()]


def rref_python(rows, row_order=None):
    """Plain Fraction Gauss-Jordan; slow reference path independent of flint.

    ``row_order`` optionally permutes the input rows first (the RREF itself is
    unique, so the order only exercises a different elimination path).
    """
    data = [[Fraction(e) for e in r] for r in rows]
    if row_order is not None:
        data = [data[i] for i in row_order]
    nrows = len(data)
    ncols = len(data[0]) if data else 0
    pivots = []
    pr = 0
    for c in range(ncols):
        sel = next((i for i in range(pr, nrows) if data[i][c]), None)
        if sel is None:
            continue
        data[pr], data[sel] = data[sel], data[pr]
        inv = 1 / data[pr][c]
        data[pr] = [e * inv for e in data[pr]]
        prow = data[pr]
        for i in range(nrows):
            if i != pr and data[i][c]:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], prow)]
        pivots.append(c)
        pr += 1
        if pr == nrows:
            break
    return data, pivots


def rank_python(rows, rng: random.Random | None = None):
    if not rows:
        return 0
    order = list(range(len(rows)))
    if rng is not None:
        rng.shuffle(order)
    return len(rref_python(rows, order)[1])


# --- characters and coordinate changes --------------------------------------

def primitive_part(chi):
    """Divide out the gcd and fix the sign so the first nonzero entry is positive."""
    chi = tuple(int(c) for c in chi)
    g = math.gcd(*chi)
    if g == 0:
        raise ZeroCharacter(f"zero character {list(chi)}")
    lead = next(c for c in chi if c)
    if lead < 0:
        g = -g
    return tuple(c // g for c in chi)


def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


@lru_cache(maxsize=None)
def _completion(chi):
    r = len(chi)
    row = list(chi)
    # column operations: row * V = e_1, V unimodular
    v = [[int(i == j) for j in range(r)] for i in range(r)]
    for j in range(1, r):
        a, b = row[0], row[j]
        if b == 0:
            continue
        x, y, g = _xgcd(a, b)
        p, q = -b // g, a // g
        for k in range(r):
            c0, cj = v[k][0], v[k][j]
            v[k][0] = x * c0 + y * cj
            v[k][j] = p * c0 + q * cj
        row[0], row[j] = g, 0
    if row[0] == -1:
        for k in range(r):
            v[k][0] = -v[k][0]
    # inverse of V; V is unimodular so the inverse is integral
    inv = rref_python([[Fraction(e) for e in v[i]] + [Fraction(int(i == j)) for j in range(r)]
                       for i in range(r)])[0]
    u = tuple(tuple(int(inv[i][r + j]) for j in range(r)) for i in range(r))
    return u, tuple(tuple(vi) for vi in v)


def unimodular_completion(chi):
    """Integer matrix U with det(U) = +-1 whose first row is ``chi``.

    With new coordinates ``y = U x`` the linear form of ``chi`` is ``y_1``.
    ``chi`` must be nonzero and primitive.
    """
    chi = tuple(int(c) for c in chi)
    g = math.gcd(*chi)
    if g == 0:
        raise ZeroCharacter(f"zero character {list(chi)}")
    if g != 1:
        raise NotPrimitive(f"character {list(chi)} has content {g}")
    return _completion(chi)[0]


def completion_inverse(chi):
    """Inverse of :func:`unimodular_completion` (``x = U^-1 y``)."""
    unimodular_completion(chi)
    return _completion(tuple(int(c) for c in chi))[1]


def int_det(m):
    """Exact determinant of a small integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    return int(fmpz_mat([list(r) for r in m]).det())


def vanishing_order(p: Polynomial, chi):
    """Largest k with chi^k dividing p over Q; INFINITY for p = 0."""
    prim = primitive_part(chi)
    if p.is_zero():
        return INFINITY
    q = p.substitute_linear(completion_inverse(prim))
    return min(e[0] for e in q._terms)


@lru_cache(maxsize=None)
def coordinate_change(chi, degree):
    """Integer matrix T with ``coeffs_y = T @ coeffs_x`` on degree-``degree`` forms,
    for the coordinates ``y = U x`` adapted to the primitive character ``chi``."""
    r = len(chi)
    v = completion_inverse(chi)
    forms = [Polynomial.linear_form(row) for row in v]
    ys = monomial_index(r, degree)
    cols = []
    cache = {}
    for m in monomials(r, degree):
        img = _monomial_image(m, forms, cache)
        col = [0] * len(ys)
        for e, c in img._terms.items():
            col[ys[e]] = int(c)
        cols.append(col)
    n = len(ys)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def divisibility_rows(chi, degree, order):
    """Linear functionals on degree-``degree`` forms whose common kernel is
    ``chi^order * S_{degree-order}``: the y-coefficients with y_1-degree < order."""
    t = coordinate_change(chi, degree)
    return tuple(t[i] for i, m in enumerate(monomials(len(chi), degree)) if m[0] < order)
