"""Classification of minimal solutions (m = q + 1) into Trivial / A / B / C.

Witnesses are reconstructed in the quotient by the common meet S, where
the maximal spaces are planes, and lifted back to W.  Every witness is
rebuilt and compared with the input; a mismatch raises
:class:`ClassificationFailed`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .constructors import (
    TypeASpec,
    TypeBSpec,
    TypeCSpec,
    build_type_a,
    build_type_b,
    build_type_c,
)
from .core import (
    SolutionPair,
    common_meet,
    pairs_equivalent,
    tuples_equivalent,
    verify_equation,
)
from .errors import ClassificationFailed, NotASolution, NotMinimalLength, PreconditionError
from .linalg import (
    QuotientChart,
    Subspace,
    contains_space,
    coordinates,
    hyperplanes_through,
    intersect,
    sum_spaces,
    vec_add,
    vec_scale,
)

TRIVIAL, TYPE_A, TYPE_B, TYPE_C = "Trivial", "TypeA", "TypeB", "TypeC"


@dataclass(frozen=True)
class DimensionProfile:
    n: int
    X: tuple[int, ...]
    Y: tuple[int, ...]
    max_v: int
    max_u: int


@dataclass(frozen=True)
class IntersectionGrid:
    Z: tuple[tuple[Subspace, ...], ...]  # Z[i][j] = U_i ∩ V_j
    S: Subspace


@dataclass(frozen=True)
class Classification:
    kind: str
    witness: Optional[object] = None


@dataclass
class CheckResult:
    passed: bool
    counterexample: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample)
        return out


@dataclass
class LemmaReport:
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": {k: c.to_json() for k, c in self.checks.items()}}


def dimension_profile(p: SolutionPair) -> DimensionProfile:
    max_v, max_u = max(p.V.dims), max(p.U.dims)
    n = max(max_v, max_u)
    X = tuple(i for i, s in enumerate(p.V) if s.dim == n - 1)
    Y = tuple(i for i, s in enumerate(p.U) if s.dim == n - 1)
    return DimensionProfile(n, X, Y, max_v, max_u)


def intersection_grid(p: SolutionPair) -> IntersectionGrid:
    Z = tuple(tuple(intersect(u, v) for v in p.V) for u in p.U)
    return IntersectionGrid(Z, common_meet(p))


def _first(pred, items):
    for item in items:
        if pred(*item):
            return CheckResult(False, item)
    return CheckResult(True)


def check_structural_lemmas(p: SolutionPair, strict: bool = True) -> LemmaReport:
    """Audit the structure forced on a minimal nontrivial solution with equal maxima.

    Counterexample indices are 0-based.  Grid meets are checked between
    distinct grid lines: when |X| = |Y| = 1 the short row and column of
    the grid repeat a single line, and those repeats are not compared.

    With ``strict=False`` only the length is required, so the audit can
    be run on arbitrary pairs to see which properties they break.
    """
    q = p.field.q
    if p.m != q + 1:
        raise NotMinimalLength(f"m = {p.m}, expected q + 1 = {q + 1}")
    prof = dimension_profile(p)
    if strict:
        if not verify_equation(p):
            raise NotASolution("pair does not satisfy the isometry equation")
        if tuples_equivalent(p.U, p.V):
            raise PreconditionError("structural lemmas apply to nontrivial solutions")
        if prof.max_u != prof.max_v:
            raise PreconditionError("structural lemmas need equal tuple maxima")

    U, V, m, n = p.U, p.V, p.m, prof.n
    idx = range(m)
    pairs = [(i, j) for i in idx for j in idx]
    rep = LemmaReport()
    c = rep.checks

    c["a_U_ne_V"] = _first(lambda i, j: U[i] == V[j], pairs)
    c["b_V_antichain"] = _first(
        lambda i, j: i != j and contains_space(V[j], V[i]), pairs
    )
    c["b_U_antichain"] = _first(
        lambda i, j: i != j and contains_space(U[j], U[i]), pairs
    )
    c["c_dims"] = _first(
        lambda side, i: (V if side == "V" else U)[i].dim < n - 1,
        [(s, i) for s in ("V", "U") for i in idx],
    )
    c["d_V_in_bigger_U"] = _first(
        lambda i, j: U[j].dim > V[i].dim and not contains_space(U[j], V[i]), pairs
    )
    c["d_U_in_bigger_V"] = _first(
        lambda i, j: V[j].dim > U[i].dim and not contains_space(V[j], U[i]), pairs
    )
    grid = intersection_grid(p)
    S = grid.S
    c["e_meet_dim"] = CheckResult(S.dim == n - 2, None if S.dim == n - 2 else (S.dim,))
    c["XY_sizes"] = CheckResult(
        len(prof.X) == len(prof.Y) <= 1,
        None if len(prof.X) == len(prof.Y) <= 1 else (len(prof.X), len(prof.Y)),
    )

    Z = grid.Z
    c["Z_offdiag_dim"] = _first(lambda i, j: i != j and Z[i][j].dim != n - 1, pairs)
    c["Z_full_column_dim"] = _first(
        lambda i, j: V[j].dim == n and Z[i][j].dim != n - 1, pairs
    )
    c["Z_column_covering"] = _first(
        lambda j: V[j].dim == n and not _is_pencil([Z[i][j] for i in idx], V[j], S),
        [(j,) for j in idx],
    )
    lines = {}
    for i, j in pairs:
        if Z[i][j].dim == n - 1:
            lines.setdefault(Z[i][j], (i, j))
    distinct = list(lines.items())
    c["Z_pairwise_meet"] = _first(
        lambda a, b: intersect(a[0], b[0]) != S,
        list(combinations(distinct, 2)),
    )
    if not c["Z_pairwise_meet"].passed:
        a, b = c["Z_pairwise_meet"].counterexample
        c["Z_pairwise_meet"] = CheckResult(False, (a[1], b[1]))
    for name, res in sum_bound_report(p).checks.items():
        c[name] = res
    return rep


def _is_pencil(members, V: Subspace, S: Subspace) -> bool:
    if S.dim != V.dim - 2:
        return False
    pencil = sorted(hyperplanes_through(V, S), key=lambda s: s.key)
    return sorted(members, key=lambda s: s.key) == pencil


def sum_bound_report(p: SolutionPair) -> LemmaReport:
    """For i != j: every member of both tuples lies in V_i + V_j, and
    dim(V_i + V_j) <= 2 + max dim V."""
    V = p.V
    n = max(V.dims)
    rep = LemmaReport()
    contain, bound = CheckResult(True), CheckResult(True)
    everything = p.spaces()
    for i, j in combinations(range(p.m), 2):
        T = sum_spaces(V[i], V[j])
        if bound.passed and T.dim > n + 2:
            bound = CheckResult(False, (i, j))
        if contain.passed and not all(contains_space(T, s) for s in everything):
            contain = CheckResult(False, (i, j))
    rep.checks["sum_contains_all"] = contain
    rep.checks["sum_dim_bound"] = bound
    return rep


def _basis_vector(s: Subspace):
    return s.basis[0]


def _witness_a(p: SolutionPair, chart: QuotientChart, S: Subspace) -> tuple[TypeASpec, SolutionPair]:
    if max(p.U.dims) > max(p.V.dims):
        p = p.swap()
    top = max(p.V, key=lambda s: s.dim)
    u1, u2 = chart.image(top).basis
    spec = TypeASpec(S, chart.lift(u1), chart.lift(u2))
    return spec, build_type_a(spec)


def _witness_b(p: SolutionPair, chart: QuotientChart, S: Subspace, prof: DimensionProfile):
    Ub = [chart.image(s) for s in p.U]
    Vb = [chart.image(s) for s in p.V]
    (x,), (y,) = prof.X, prof.Y
    a = _basis_vector(Vb[x])
    b = _basis_vector(Ub[y])
    i = next(k for k in range(p.m) if k != y)
    j = next(k for k in range(p.m) if k != x)
    c = _basis_vector(intersect(Ub[i], Vb[j]))
    spec = TypeBSpec(S, chart.lift(a), chart.lift(b), chart.lift(c))
    return spec, build_type_b(spec)


def _witness_c(p: SolutionPair, chart: QuotientChart, S: Subspace):
    f = p.field
    Ub = [chart.image(s) for s in p.U]
    Vb = [chart.image(s) for s in p.V]
    a = _basis_vector(intersect(Ub[0], Vb[0]))
    b = _basis_vector(intersect(Ub[0], Vb[1]))
    c = _basis_vector(intersect(Ub[1], Vb[0]))
    d0 = _basis_vector(intersect(Ub[1], Vb[1]))
    # scale d so that <a+b, c+d> is a member of V
    ab = vec_add(f, a, b)
    w = next((k for k in range(2, p.m) if ab in Vb[k]), None)
    if w is None:
        raise ClassificationFailed("no V member contains a + b; grid is not of Type C")
    z = intersect(Vb[w], Ub[1])
    if z.dim != 1:
        raise ClassificationFailed("unexpected intersection dimension in Type C grid")
    coeffs = coordinates(f, [c, d0], z.basis[0])
    if coeffs is None or coeffs[0] == 0:
        raise ClassificationFailed("Type C grid line not spanned as expected")
    nu = f.div(coeffs[1], coeffs[0])
    d = vec_scale(f, nu, d0)
    spec = TypeCSpec(S, chart.lift(a), chart.lift(b), chart.lift(c), chart.lift(d))
    return spec, build_type_c(spec)


def classify(p: SolutionPair) -> Classification:
    q = p.field.q
    if p.m != q + 1:
        raise NotMinimalLength(f"m = {p.m}, expected q + 1 = {q + 1}")
    if not verify_equation(p):
        raise NotASolution("pair does not satisfy the isometry equation")
    if tuples_equivalent(p.U, p.V):
        return Classification(TRIVIAL)

    prof = dimension_profile(p)
    S = common_meet(p)
    chart = QuotientChart(S)
    try:
        if prof.max_u != prof.max_v:
            kind = TYPE_A
            spec, rebuilt = _witness_a(p, chart, S)
        elif len(prof.X) == len(prof.Y) == 1:
            kind = TYPE_B
            spec, rebuilt = _witness_b(p, chart, S, prof)
        elif len(prof.X) == len(prof.Y) == 0:
            kind = TYPE_C
            spec, rebuilt = _witness_c(p, chart, S)
        else:
            raise ClassificationFailed(f"dimension profile |X|={len(prof.X)}, |Y|={len(prof.Y)}")
    except ClassificationFailed:
        raise
    except (ValueError, ArithmeticError, StopIteration) as exc:
        raise ClassificationFailed(f"witness extraction failed: {exc}") from exc
    if not pairs_equivalent(rebuilt, p):
        raise ClassificationFailed(f"{kind} witness does not reproduce the pair")
    return Classification(kind, spec)
