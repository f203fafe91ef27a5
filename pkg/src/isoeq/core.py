"""Tuples of subspaces and exact verification of the isometry equation.

The two sides are weighted indicator sums with weights 1/|V_i| = q^-dim V_i.
Multiplying through by q^D (D the largest dimension present) leaves
nonnegative integers, so the equation is checked in exact integer
arithmetic.  Both sides vanish outside the join of all spaces, and
evaluation is restricted to it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DimensionMismatch, NotASolution, NotContained, TooLarge
from .gf import FieldSpec
from .linalg import (
    DEFAULT_MAX_POINTS,
    AmbientSpace,
    QuotientChart,
    Subspace,
    Vector,
    contains_point,
    contains_space,
    iter_points,
    meet,
    sum_spaces,
)


@dataclass(frozen=True)
class SpaceTuple:
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        spaces = tuple(self.spaces)
        object.__setattr__(self, "spaces", spaces)
        if not spaces:
            raise DimensionMismatch("a tuple of spaces needs at least one member")
        amb = spaces[0].ambient
        if any(s.ambient != amb for s in spaces):
            raise DimensionMismatch("all spaces of a tuple must share the ambient")

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.spaces)

    def __len__(self) -> int:
        return len(self.spaces)

    def __getitem__(self, i):
        return self.spaces[i]

    @property
    def ambient(self) -> AmbientSpace:
        return self.spaces[0].ambient

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)

    def key(self) -> tuple:
        """Multiset key: the sorted canonical keys of the members."""
        return tuple(sorted(s.key for s in self.spaces))

    def sorted(self) -> SpaceTuple:
        return SpaceTuple(tuple(sorted(self.spaces, key=lambda s: s.key)))


@dataclass(frozen=True)
class SolutionPair:
    """A candidate pair (U, V); it need not satisfy the equation."""

    U: SpaceTuple
    V: SpaceTuple

    def __post_init__(self):
        if not isinstance(self.U, SpaceTuple):
            object.__setattr__(self, "U", SpaceTuple(tuple(self.U)))
        if not isinstance(self.V, SpaceTuple):
            object.__setattr__(self, "V", SpaceTuple(tuple(self.V)))
        if len(self.U) != len(self.V):
            raise DimensionMismatch(f"tuple lengths differ: {len(self.U)} vs {len(self.V)}")
        if self.U.ambient != self.V.ambient:
            raise DimensionMismatch("U and V live in different ambients")

    @property
    def m(self) -> int:
        return len(self.U)

    @property
    def ambient(self) -> AmbientSpace:
        return self.U.ambient

    @property
    def field(self) -> FieldSpec:
        return self.U.ambient.field

    def spaces(self) -> tuple[Subspace, ...]:
        return self.U.spaces + self.V.spaces

    def swap(self) -> SolutionPair:
        return SolutionPair(self.V, self.U)

    def key(self) -> tuple:
        """Pair-equivalence key: unordered pair of tuple keys."""
        return tuple(sorted((self.U.key(), self.V.key())))


@dataclass(frozen=True)
class ScaledIndicatorSum:
    """sum_i q^(D - dim V_i) * id_{V_i}, i.e. q^D times one side of the equation."""

    scale_exponent: int
    terms: tuple[tuple[Subspace, int], ...]

    @classmethod
    def from_tuple(cls, t: SpaceTuple, D: int) -> ScaledIndicatorSum:
        q = t.ambient.q
        if D < max(t.dims):
            raise DimensionMismatch(f"scale exponent {D} below max dim {max(t.dims)}")
        return cls(D, tuple((s, q ** (D - s.dim)) for s in t))

    def __call__(self, x: Sequence[int]) -> int:
        return sum(w for s, w in self.terms if contains_point(s, x))

    def at_zero(self) -> int:
        return sum(w for _, w in self.terms)

    def table(self, max_points: int = DEFAULT_MAX_POINTS) -> Counter:
        """Values on the support, as point -> value."""
        out: Counter = Counter()
        for s, w in self.terms:
            for x in iter_points(s, max_points):
                out[x] += w
        return out


def eval_side(t: SpaceTuple, x: Sequence[int], D: int) -> int:
    return ScaledIndicatorSum.from_tuple(t, D)(x)


def scale_exponent(p: SolutionPair) -> int:
    return max(s.dim for s in p.spaces())


def join_space(p: SolutionPair) -> Subspace:
    return sum_spaces(*p.spaces())


def common_meet(p: SolutionPair) -> Subspace:
    return meet(p.spaces())


def _sides_equal(p: SolutionPair, max_points: int) -> bool:
    J = join_space(p)
    if J.size > max_points:
        raise TooLarge(f"join space has {J.size} points, cap is {max_points}")
    D = scale_exponent(p)
    left = ScaledIndicatorSum.from_tuple(p.U, D)
    right = ScaledIndicatorSum.from_tuple(p.V, D)
    if left.at_zero() != right.at_zero():
        return False
    return left.table(max_points) == right.table(max_points)


def factor_pair(p: SolutionPair, S: Subspace) -> SolutionPair:
    """Images of all spaces in W/S; S must lie in every space."""
    for s in p.spaces():
        if not contains_space(s, S):
            raise NotContained(f"{s} does not contain {S}")
    chart = QuotientChart(S)
    return SolutionPair(
        SpaceTuple(tuple(chart.image(s) for s in p.U)),
        SpaceTuple(tuple(chart.image(s) for s in p.V)),
    )


def verify_equation(
    p: SolutionPair, factor: bool = True, max_points: int = DEFAULT_MAX_POINTS
) -> bool:
    """Exact check of sum 1/|U_i| id_{U_i} == sum 1/|V_i| id_{V_i}.

    With ``factor`` the pair is first pushed to W/S for S the common meet,
    which gives the same answer on q^dim S times fewer points.
    """
    if factor:
        S = common_meet(p)
        if S.dim:
            p = factor_pair(p, S)
    return _sides_equal(p, max_points)


def tuples_equivalent(t1: SpaceTuple, t2: SpaceTuple) -> bool:
    return len(t1) == len(t2) and t1.key() == t2.key()


def pairs_equivalent(p1: SolutionPair, p2: SolutionPair) -> bool:
    if tuples_equivalent(p1.U, p2.U) and tuples_equivalent(p1.V, p2.V):
        return True
    return tuples_equivalent(p1.U, p2.V) and tuples_equivalent(p1.V, p2.U)


def is_trivial_solution(p: SolutionPair, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    if not verify_equation(p, max_points=max_points):
        raise NotASolution("pair does not satisfy the isometry equation")
    return tuples_equivalent(p.U, p.V)


def verification_report(p: SolutionPair, max_points: int = DEFAULT_MAX_POINTS) -> dict:
    ok = verify_equation(p, max_points=max_points)
    return {
        "solution": ok,
        "trivial": ok and tuples_equivalent(p.U, p.V),
        "join_dim": join_space(p).dim,
        "meet_dim": common_meet(p).dim,
    }


def transform_pair(p: SolutionPair, fn) -> SolutionPair:
    """Apply ``fn: Subspace -> Subspace`` to every member."""
    return SolutionPair(
        SpaceTuple(tuple(fn(s) for s in p.U)), SpaceTuple(tuple(fn(s) for s in p.V))
    )


def value_at_zero(t: SpaceTuple, D: int) -> int:
    q = t.ambient.q
    return sum(q ** (D - s.dim) for s in t)


__all__ = [
    "SpaceTuple",
    "SolutionPair",
    "ScaledIndicatorSum",
    "eval_side",
    "verify_equation",
    "verification_report",
    "tuples_equivalent",
    "pairs_equivalent",
    "is_trivial_solution",
    "common_meet",
    "join_space",
    "factor_pair",
    "transform_pair",
    "value_at_zero",
    "Vector",
]
