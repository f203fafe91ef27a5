"""Subspaces of W = K^d in canonical reduced row-echelon form.

Vectors are tuples of field elements (ints).  A :class:`Subspace` stores
its RREF basis, so two subspaces are equal as sets iff their bases are
identical, and they hash and sort by that basis.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BadCodimension, DimensionMismatch, NotContained, TooLarge
from .gf import FieldSpec, enumerate_projective_line

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]

DEFAULT_MAX_POINTS = 1 << 24
DEFAULT_MAX_SUBSPACES = 1 << 20


@dataclass(frozen=True)
class AmbientSpace:
    field: FieldSpec
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise DimensionMismatch(f"ambient dimension {self.d} is negative")

    @property
    def q(self) -> int:
        return self.field.q

    def zero(self) -> Vector:
        return (0,) * self.d

    def unit(self, i: int) -> Vector:
        """Standard basis vector e_i (0-based)."""
        return tuple(1 if j == i else 0 for j in range(self.d))

    def check(self, x: Sequence[int]) -> Vector:
        x = tuple(x)
        if len(x) != self.d:
            raise DimensionMismatch(f"vector of length {len(x)} in ambient of dim {self.d}")
        return x

    def full(self) -> Subspace:
        return Subspace(self, tuple(self.unit(i) for i in range(self.d)))

    def zero_space(self) -> Subspace:
        return Subspace(self, ())


def vec_add(f: FieldSpec, x: Vector, y: Vector) -> Vector:
    return tuple(f.add(a, b) for a, b in zip(x, y))


def vec_scale(f: FieldSpec, c: int, x: Vector) -> Vector:
    return tuple(f.mul(c, a) for a in x)


def vec_axpy(f: FieldSpec, c: int, x: Vector, y: Vector) -> Vector:
    """c*x + y"""
    return tuple(f.add(f.mul(c, a), b) for a, b in zip(x, y))


def lin_comb(f: FieldSpec, coeffs: Sequence[int], vecs: Sequence[Vector], d: int) -> Vector:
    out = (0,) * d
    for c, v in zip(coeffs, vecs):
        if c:
            out = vec_axpy(f, c, v, out)
    return out


def rref(f: FieldSpec, rows: Iterable[Sequence[int]], width: int) -> Matrix:
    """Reduced row-echelon form with unit pivots; zero rows dropped."""
    m = [list(r) for r in rows if any(r)]
    r = 0
    for c in range(width):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = f.inv(m[r][c])
        row = [f.mul(inv, v) for v in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                fac = f.neg(m[i][c])
                m[i] = [f.add(a, f.mul(fac, b)) for a, b in zip(m[i], row)]
        r += 1
    return tuple(tuple(x) for x in m[:r])


def is_rref(rows: Sequence[Sequence[int]]) -> bool:
    last = -1
    pivots = []
    for row in rows:
        nz = [i for i, v in enumerate(row) if v]
        if not nz or nz[0] <= last or row[nz[0]] != 1:
            return False
        last = nz[0]
        pivots.append(last)
    for i, c in enumerate(pivots):
        if any(rows[j][c] for j in range(len(rows)) if j != i):
            return False
    return True


def _pivots(basis: Matrix) -> tuple[int, ...]:
    return tuple(next(i for i, v in enumerate(row) if v) for row in basis)


@dataclass(frozen=True, order=False)
class Subspace:
    ambient: AmbientSpace
    basis: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> FieldSpec:
        return self.ambient.field

    @property
    def d(self) -> int:
        return self.ambient.d

    @property
    def pivots(self) -> tuple[int, ...]:
        return _pivots(self.basis)

    @property
    def size(self) -> int:
        return self.field.q**self.dim

    @property
    def key(self) -> tuple:
        """Canonical sort key: dimension, then basis."""
        return (self.dim, self.basis)

    def __lt__(self, other: Subspace) -> bool:
        return self.key < other.key

    def __contains__(self, x) -> bool:
        return contains_point(self, x)

    def __repr__(self) -> str:
        rows = ",".join("(" + ",".join(map(str, r)) + ")" for r in self.basis)
        return f"<{rows}>" if rows else "{0}"

    def reduce(self, x: Vector) -> Vector:
        """Residue of ``x`` after clearing the pivot columns."""
        f = self.field
        for row, c in zip(self.basis, self.pivots):
            if x[c]:
                x = vec_axpy(f, f.neg(x[c]), row, x)
        return x


def _same_ambient(*spaces: Subspace) -> AmbientSpace:
    amb = spaces[0].ambient
    for s in spaces[1:]:
        if s.ambient != amb:
            raise DimensionMismatch(f"subspaces of {amb} and {s.ambient}")
    return amb


def span(amb: AmbientSpace, gens: Iterable[Sequence[int]]) -> Subspace:
    gens = [amb.check(g) for g in gens]
    return Subspace(amb, rref(amb.field, gens, amb.d))


def subspace_from_rref(amb: AmbientSpace, rows: Sequence[Sequence[int]]) -> Subspace:
    """Wrap an already-canonical basis; raises if it is not RREF."""
    from .errors import NonCanonicalBasis

    rows = tuple(amb.check(r) for r in rows)
    if not is_rref(rows):
        raise NonCanonicalBasis(f"basis {rows} is not in reduced row-echelon form")
    return Subspace(amb, rows)


def contains_point(V: Subspace, x: Sequence[int]) -> bool:
    x = V.ambient.check(x)
    return not any(V.reduce(x))


def contains_space(V: Subspace, S: Subspace) -> bool:
    _same_ambient(V, S)
    if S.dim > V.dim:
        return False
    return all(not any(V.reduce(row)) for row in S.basis)


def sum_spaces(*spaces: Subspace) -> Subspace:
    amb = _same_ambient(*spaces)
    return Subspace(amb, rref(amb.field, [r for s in spaces for r in s.basis], amb.d))


def intersect(V1: Subspace, V2: Subspace) -> Subspace:
    """Zassenhaus: RREF of [[v, v], [u, 0]]; rows with zero left half span V1 ∩ V2."""
    amb = _same_ambient(V1, V2)
    if V1.dim == 0 or V2.dim == 0:
        return amb.zero_space()
    if V1 == V2:
        return V1
    d = amb.d
    zero = (0,) * d
    rows = [r + r for r in V1.basis] + [r + zero for r in V2.basis]
    red = rref(amb.field, rows, 2 * d)
    gens = [r[d:] for r in red if not any(r[:d])]
    return Subspace(amb, rref(amb.field, gens, d))


def meet(spaces: Sequence[Subspace]) -> Subspace:
    out = spaces[0]
    for s in spaces[1:]:
        out = intersect(out, s)
    return out


def coordinates(f: FieldSpec, vecs: Sequence[Vector], x: Vector) -> list[int] | None:
    """Coefficients c with sum c_i vecs_i = x, or None if x is outside the span.

    The vectors must be linearly independent.
    """
    k, d = len(vecs), len(x)
    rows = [tuple(v) + tuple(1 if j == i else 0 for j in range(k)) for i, v in enumerate(vecs)]
    red = rref(f, rows, d + k)
    y = tuple(x) + (0,) * k
    for row in red:
        c = next(i for i, v in enumerate(row) if v)
        if c >= d:
            break
        if y[c]:
            y = vec_axpy(f, f.neg(y[c]), row, y)
    if any(y[:d]):
        return None
    return [f.neg(v) for v in y[d:]]


class QuotientChart:
    """Coordinates on W/S.

    The free (non-pivot) columns of S's RREF basis give a complement, so a
    vector reduced against S is determined by its free coordinates.
    ``project`` is linear with kernel S; ``lift`` is a section of it.
    """

    def __init__(self, S: Subspace):
        self.S = S
        self.source = S.ambient
        piv = set(S.pivots)
        self.free = tuple(c for c in range(S.d) if c not in piv)
        self.ambient = AmbientSpace(S.field, len(self.free))

    def project(self, x: Sequence[int]) -> Vector:
        r = self.S.reduce(self.source.check(x))
        return tuple(r[c] for c in self.free)

    def lift(self, y: Sequence[int]) -> Vector:
        y = self.ambient.check(y)
        out = [0] * self.source.d
        for c, v in zip(self.free, y):
            out[c] = v
        return tuple(out)

    def image(self, T: Subspace) -> Subspace:
        if not contains_space(T, self.S):
            raise NotContained(f"{T} does not contain {self.S}")
        return span(self.ambient, [self.project(r) for r in T.basis])

    def preimage(self, Tbar: Subspace) -> Subspace:
        if Tbar.ambient != self.ambient:
            raise DimensionMismatch("subspace is not in this quotient")
        return span(self.source, list(self.S.basis) + [self.lift(r) for r in Tbar.basis])


def quotient(V: Subspace, S: Subspace):
    """Chart for W/S: returns ``(quotient ambient, T -> T/S)``."""
    if not contains_space(V, S):
        raise NotContained(f"{V} does not contain {S}")
    chart = QuotientChart(S)
    return chart.ambient, chart.image


def point_count(V: Subspace) -> int:
    return V.size


def iter_points(V: Subspace, max_points: int = DEFAULT_MAX_POINTS) -> Iterator[Vector]:
    if V.size > max_points:
        raise TooLarge(f"{V.size} points exceed the cap {max_points}")
    f, d = V.field, V.d
    for coeffs in itertools.product(range(f.q), repeat=V.dim):
        yield lin_comb(f, coeffs, V.basis, d)


def enumerate_points(V: Subspace, max_points: int = DEFAULT_MAX_POINTS) -> list[Vector]:
    return list(iter_points(V, max_points))


def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(amb: AmbientSpace, k: int) -> int:
    return gaussian_binomial(amb.d, k, amb.q)


def _rref_of_dim(amb: AmbientSpace, k: int) -> Iterator[Subspace]:
    q, d = amb.q, amb.d
    for pivots in itertools.combinations(range(d), k):
        piv = set(pivots)
        # free slots: (row, col) with col > pivot of row and col not a pivot
        slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, d) if c not in piv]
        for vals in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * d for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), v in zip(slots, vals):
                rows[r][c] = v
            yield Subspace(amb, tuple(tuple(row) for row in rows))


def enumerate_subspaces(
    amb: AmbientSpace, k: int | None = None, max_subspaces: int = DEFAULT_MAX_SUBSPACES
) -> list[Subspace]:
    """All subspaces (of dimension k, or of every dimension), sorted by key."""
    dims = range(amb.d + 1) if k is None else [k]
    total = sum(count_subspaces(amb, j) for j in dims)
    if total > max_subspaces:
        raise TooLarge(f"{total} subspaces exceed the cap {max_subspaces}")
    out = [s for j in dims for s in _rref_of_dim(amb, j)]
    out.sort(key=lambda s: s.key)
    return out


def subspaces_between(S: Subspace, J: Subspace, max_subspaces: int = DEFAULT_MAX_SUBSPACES):
    """All T with S ⊆ T ⊆ J, sorted by key."""
    chart = QuotientChart(S)
    Jbar = chart.image(J)
    inner = AmbientSpace(S.field, Jbar.dim)
    out = []
    for T in enumerate_subspaces(inner, max_subspaces=max_subspaces):
        gens = [lin_comb(S.field, row, Jbar.basis, chart.ambient.d) for row in T.basis]
        out.append(chart.preimage(span(chart.ambient, gens)))
    out.sort(key=lambda s: s.key)
    return out


def hyperplanes_through(V: Subspace, S: Subspace) -> list[Subspace]:
    """The q+1 hyperplanes of V containing S (dim S = dim V - 2).

    Ordered by the projective line applied to the quotient basis of V/S.
    """
    if not contains_space(V, S):
        raise NotContained(f"{V} does not contain {S}")
    if S.dim != V.dim - 2:
        raise BadCodimension(f"dim S = {S.dim}, dim V = {V.dim}; need codimension 2")
    f = V.field
    chart = QuotientChart(S)
    u1, u2 = chart.image(V).basis
    out = []
    for a, b in enumerate_projective_line(f):
        w = vec_add(f, vec_scale(f, a, u1), vec_scale(f, b, u2))
        out.append(span(V.ambient, list(S.basis) + [chart.lift(w)]))
    return out


# linear maps; row vectors act as x -> x @ A


def mat_vec(f: FieldSpec, x: Vector, A: Sequence[Sequence[int]]) -> Vector:
    d_out = len(A[0])
    out = [0] * d_out
    for xi, row in zip(x, A):
        if xi:
            for j in range(d_out):
                if row[j]:
                    out[j] = f.add(out[j], f.mul(xi, row[j]))
    return tuple(out)


def apply_map(V: Subspace, A: Sequence[Sequence[int]], target: AmbientSpace | None = None) -> Subspace:
    target = target or V.ambient
    return span(target, [mat_vec(V.field, r, A) for r in V.basis])


def random_invertible(amb: AmbientSpace, rng: random.Random) -> Matrix:
    q, d = amb.q, amb.d
    while True:
        A = tuple(tuple(rng.randrange(q) for _ in range(d)) for _ in range(d))
        if len(rref(amb.field, A, d)) == d:
            return A


def point_index(x: Sequence[int], q: int) -> int:
    """Base-q little-endian integer encoding of a vector."""
    n = 0
    for c in reversed(x):
        n = n * q + c
    return n
