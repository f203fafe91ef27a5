"""Exhaustive searches over small instances.

Two partner-matching strategies share one candidate representation (each
candidate subspace as an array of point ids inside a host space):

* brute force: every multiset of m candidates is summed and compared;
* backtracking: candidates are subtracted from the target function one at
  a time and a branch dies once the residual would go negative.

The backtracking search can also apply the structure theorems for m = q+1
(``lemma_constraints``).  Those are audited by comparing against brute
force on small cases.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

import numpy as np

from .classify import Classification, classify
from .core import SolutionPair, SpaceTuple
from .errors import (
    NotACovering,
    PreconditionError,
    StructureViolation,
    TooLarge,
)
from .gf import FieldSpec
from .linalg import (
    DEFAULT_MAX_POINTS,
    DEFAULT_MAX_SUBSPACES,
    AmbientSpace,
    QuotientChart,
    Subspace,
    contains_space,
    count_subspaces,
    enumerate_subspaces,
    hyperplanes_through,
    iter_points,
    meet,
    point_index,
    subspaces_between,
    sum_spaces,
)

DEFAULT_MAX_TUPLES = 1 << 22


@dataclass(frozen=True)
class Pruning:
    value_at_zero: bool = True
    dim_multiset: bool = True
    lemma_constraints: bool = True

    @classmethod
    def off(cls) -> Pruning:
        return cls(False, False, False)

    @classmethod
    def default(cls, m: int, q: int) -> Pruning:
        return cls(True, True, m == q + 1)

    @property
    def enabled(self) -> bool:
        return self.value_at_zero or self.dim_multiset or self.lemma_constraints

    def to_json(self) -> dict:
        return {
            "value_at_zero": self.value_at_zero,
            "dim_multiset": self.dim_multiset,
            "lemma_constraints": self.lemma_constraints,
        }


def _check_pruning(pruning: Pruning, m: int, q: int) -> None:
    if pruning.lemma_constraints and m != q + 1:
        raise PreconditionError(f"lemma constraints require m = q + 1 = {q + 1}, got m = {m}")


@dataclass(frozen=True)
class SearchConfig:
    field: FieldSpec
    d: int
    m: int
    pruning: Optional[Pruning] = None
    max_points: int = DEFAULT_MAX_POINTS
    max_tuples: int = DEFAULT_MAX_TUPLES
    jobs: int = 1

    def __post_init__(self):
        if self.pruning is None:
            object.__setattr__(self, "pruning", Pruning.default(self.m, self.field.q))
        if self.m < 1 or self.d < 1:
            raise PreconditionError("need m >= 1 and d >= 1")
        if self.max_points < 1 or self.max_tuples < 1 or self.jobs < 1:
            raise PreconditionError("caps and job count must be positive")
        _check_pruning(self.pruning, self.m, self.field.q)

    @property
    def ambient(self) -> AmbientSpace:
        return AmbientSpace(self.field, self.d)


@dataclass
class SearchReport:
    config: SearchConfig
    solutions: list[SolutionPair] = field(default_factory=list)
    classifications: list[Optional[Classification]] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def class_keys(self) -> list[tuple]:
        return [p.key() for p in self.solutions]

    def kinds(self) -> Counter:
        return Counter(c.kind for c in self.classifications if c is not None)


# candidate index


class _Index:
    """Subspaces of a host space H, each as the sorted ids of its points.

    A point x of H gets the id of its coordinate vector w.r.t. H's RREF
    basis (x restricted to H's pivot columns); id 0 is the origin.
    Weights are q^(D - dim) with D = dim H.
    """

    def __init__(self, host: Subspace, spaces: Sequence[Subspace], max_points: int):
        if host.size > max_points:
            raise TooLarge(f"host space has {host.size} points, cap is {max_points}")
        self.host = host
        self.q = host.field.q
        self.D = host.dim
        self.npoints = host.size
        self.spaces = list(spaces)
        self.ids = {s: i for i, s in enumerate(self.spaces)}
        piv = host.pivots
        self.dims = np.array([s.dim for s in self.spaces], dtype=np.int64)
        self.weights = [self.q ** (self.D - s.dim) for s in self.spaces]
        self.points = []
        self.masks = []
        for s in self.spaces:
            pts = sorted(point_index([x[c] for c in piv], self.q) for x in iter_points(s, max_points))
            self.points.append(np.array(pts, dtype=np.int64))
            mask = 0
            for t in pts:
                mask |= 1 << t
            self.masks.append(mask)
        self.by_mask = {mk: i for i, mk in enumerate(self.masks)}

    def target(self, members: Sequence[int]) -> np.ndarray:
        f = np.zeros(self.npoints, dtype=np.int64)
        for i in members:
            f[self.points[i]] += self.weights[i]
        return f

    def dense(self, cands: Sequence[int]) -> np.ndarray:
        M = np.zeros((len(cands), self.npoints), dtype=np.int64)
        for r, i in enumerate(cands):
            M[r, self.points[i]] = self.weights[i]
        return M


def _brute_match(index: _Index, target: np.ndarray, cands: Sequence[int], m: int, max_tuples: int):
    total = comb(len(cands) + m - 1, m)
    if total > max_tuples:
        raise TooLarge(f"{total} candidate multisets exceed the cap {max_tuples}")
    found = []
    if not cands:
        return found, 0
    M = index.dense(cands)
    combos = itertools.combinations_with_replacement(range(len(cands)), m)
    chunk = 1 << 14
    tested = 0
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        block = block.reshape(-1, m)
        tested += len(block)
        F = M[block].sum(axis=1)
        hits = np.nonzero((F == target).all(axis=1))[0]
        for h in hits:
            found.append(tuple(cands[k] for k in block[h]))
    return found, tested


def _allowed_dim_prefixes(index: _Index, cands, m: int, at_zero: int) -> set:
    dims = sorted({int(index.dims[c]) for c in cands})
    q, D = index.q, index.D
    prefixes = set()
    for ms in itertools.combinations_with_replacement(dims, m):
        if sum(q ** (D - k) for k in ms) == at_zero:
            # chosen dims arrive sorted, so sorted sub-multisets suffice
            for r in range(m + 1):
                prefixes.update(itertools.combinations(ms, r))
    return prefixes


def _backtrack_match(index: _Index, target: np.ndarray, cands: Sequence[int], m: int, pruning: Pruning):
    cands = sorted(cands, key=lambda i: index.spaces[i].key)
    weights = [index.weights[c] for c in cands]
    points = [index.points[c] for c in cands]
    dims = [int(index.dims[c]) for c in cands]
    n = len(cands)
    suffix_min = [0] * (n + 1)
    run = None
    for k in range(n - 1, -1, -1):
        run = weights[k] if run is None else min(run, weights[k])
        suffix_min[k] = run
    prefixes = (
        _allowed_dim_prefixes(index, cands, m, int(target[0])) if pruning.dim_multiset else None
    )
    residual = target.copy()
    found = []
    chosen: list[int] = []
    chosen_dims: list[int] = []
    tested = 0

    def rec(start: int) -> None:
        nonlocal tested
        k = len(chosen)
        if k == m:
            tested += 1
            if not residual.any():
                found.append(tuple(cands[i] for i in chosen))
            return
        left = m - k
        r0 = int(residual[0])
        for pos in range(start, n):
            w = weights[pos]
            if pruning.value_at_zero:
                # later candidates weigh at most w
                if r0 > left * w:
                    break
                if r0 < w + (left - 1) * suffix_min[pos]:
                    continue
            if prefixes is not None and tuple(chosen_dims + [dims[pos]]) not in prefixes:
                continue
            ids = points[pos]
            if (residual[ids] < w).any():
                continue
            residual[ids] -= w
            chosen.append(pos)
            chosen_dims.append(dims[pos])
            rec(pos)
            chosen.pop()
            chosen_dims.pop()
            residual[ids] += w

    rec(0)
    return found, tested


def _match(index, target, cands, m, pruning, max_tuples):
    if pruning.enabled:
        return _backtrack_match(index, target, cands, m, pruning)
    return _brute_match(index, target, cands, m, max_tuples)


def _lemma_admissible(V_dims: Sequence[int], meet_dim: int) -> bool:
    n = max(V_dims)
    return meet_dim in (n - 2, n - 1)


def _lemma_dim_ok(dim: int, V_max: int) -> bool:
    return V_max - 1 <= dim <= V_max + 1


def find_partners(
    V: SpaceTuple,
    trivial_excluded: bool = True,
    pruning: Optional[Pruning] = None,
    max_points: int = DEFAULT_MAX_POINTS,
    max_tuples: int = DEFAULT_MAX_TUPLES,
) -> list[SpaceTuple]:
    """All U (one per tuple-equivalence class) such that (U, V) is a solution.

    Candidates are subspaces of the join of V, since every U_i lies inside
    the support of the V side.  Results are sorted by multiset key.
    """
    q, m = V.ambient.q, len(V)
    pruning = pruning or Pruning.default(m, q)
    _check_pruning(pruning, m, q)
    J = sum_spaces(*V)
    M = meet(list(V))
    Vkey = V.key()

    if pruning.lemma_constraints:
        if not _lemma_admissible(V.dims, M.dim):
            found_tuples = []
        else:
            chart = QuotientChart(M)
            Jbar = chart.image(J)
            host_spaces = subspaces_between(chart.ambient.zero_space(), Jbar)
            index = _Index(Jbar, host_spaces, max_points)
            Vbar = [index.ids[chart.image(s)] for s in V]
            vmax = max(V.dims) - M.dim
            vset = set(Vbar)
            cands = [
                i for i, s in enumerate(index.spaces)
                if i not in vset and _lemma_dim_ok(s.dim, vmax)
            ]
            raw, _ = _match(index, index.target(Vbar), cands, m, pruning, max_tuples)
            found_tuples = [
                SpaceTuple(tuple(chart.preimage(index.spaces[i]) for i in r)) for r in raw
            ]
        if not trivial_excluded:
            found_tuples.append(V.sorted())
    else:
        index = _Index(J, subspaces_between(J.ambient.zero_space(), J), max_points)
        Vids = [index.ids[s] for s in V]
        raw, _ = _match(index, index.target(Vids), range(len(index.spaces)), m, pruning, max_tuples)
        found_tuples = [SpaceTuple(tuple(index.spaces[i] for i in r)) for r in raw]
        if trivial_excluded:
            found_tuples = [t for t in found_tuples if t.key() != Vkey]

    uniq = {t.key(): t.sorted() for t in found_tuples}
    return [uniq[k] for k in sorted(uniq)]


# global search over W


class _SearchState:
    """All subspaces of W indexed once; joins memoized by id pair."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        amb = cfg.ambient
        spaces = enumerate_subspaces(amb)
        self.index = _Index(amb.full(), spaces, cfg.max_points)
        self._sums: dict = {}

    def join(self, ids: Sequence[int]) -> int:
        cur = ids[0]
        for j in ids[1:]:
            key = (cur, j) if cur <= j else (j, cur)
            if key not in self._sums:
                s = sum_spaces(self.index.spaces[key[0]], self.index.spaces[key[1]])
                self._sums[key] = self.index.ids[s]
            cur = self._sums[key]
        return cur

    def meet_id(self, ids: Sequence[int]) -> int:
        mk = -1
        for i in ids:
            mk &= self.index.masks[i]
        return self.index.by_mask[mk]

    def partners(self, Vids: tuple[int, ...]):
        cfg, idx = self.cfg, self.index
        pruning = cfg.pruning
        J = self.join(Vids)
        jmask = idx.masks[J]
        cands = [i for i, mk in enumerate(idx.masks) if mk & ~jmask == 0]
        if pruning.lemma_constraints:
            Mid = self.meet_id(Vids)
            vdims = [idx.spaces[i].dim for i in Vids]
            if not _lemma_admissible(vdims, idx.spaces[Mid].dim):
                return [], 0
            mmask = idx.masks[Mid]
            vmax = max(vdims)
            vset = set(Vids)
            cands = [
                i for i in cands
                if i not in vset
                and idx.masks[i] & mmask == mmask
                and _lemma_dim_ok(idx.spaces[i].dim, vmax)
            ]
        raw, tested = _match(idx, idx.target(Vids), cands, cfg.m, pruning, cfg.max_tuples)
        out = sorted({tuple(sorted(r)) for r in raw if tuple(sorted(r)) != Vids})
        return out, tested


_WORKER: Optional[_SearchState] = None


def _worker_init(cfg: SearchConfig) -> None:
    global _WORKER
    _WORKER = _SearchState(cfg)


def _scan(first_ids: Sequence[int]):
    state = _WORKER
    n, m = len(state.index.spaces), state.cfg.m
    hits, scanned, tested = [], 0, 0
    for first in first_ids:
        for rest in itertools.combinations_with_replacement(range(first, n), m - 1):
            Vids = (first,) + rest
            scanned += 1
            found, t = state.partners(Vids)
            tested += t
            for Uids in found:
                hits.append((Vids, Uids))
    return hits, scanned, tested


def search_nontrivial(cfg: SearchConfig) -> SearchReport:
    """Scan every V multiset of size m in W, collect nontrivial partners,
    keep one representative per pair-equivalence class, and classify
    when m = q + 1."""
    start = time.perf_counter()
    amb = cfg.ambient
    nspaces = sum(count_subspaces(amb, k) for k in range(cfg.d + 1))
    ntuples = comb(nspaces + cfg.m - 1, cfg.m)
    if ntuples > cfg.max_tuples:
        raise TooLarge(f"{ntuples} V-tuples exceed the cap {cfg.max_tuples}")
    if nspaces > DEFAULT_MAX_SUBSPACES:
        raise TooLarge(f"{nspaces} subspaces exceed the cap {DEFAULT_MAX_SUBSPACES}")

    firsts = list(range(nspaces))
    if cfg.jobs == 1:
        _worker_init(cfg)
        state = _WORKER
        results = [_scan(firsts)]
    else:
        state = _SearchState(cfg)
        chunks = [firsts[i:: cfg.jobs * 4] for i in range(cfg.jobs * 4)]
        with ProcessPoolExecutor(cfg.jobs, initializer=_worker_init, initargs=(cfg,)) as pool:
            results = list(pool.map(_scan, chunks))

    hits = sorted(h for r in results for h in r[0])
    scanned = sum(r[1] for r in results)
    tested = sum(r[2] for r in results)

    seen = set()
    report = SearchReport(cfg)
    spaces = state.index.spaces
    for Vids, Uids in hits:
        key = tuple(sorted((Vids, Uids)))
        if key in seen:
            continue
        seen.add(key)
        pair = SolutionPair(
            SpaceTuple(tuple(spaces[i] for i in Uids)), SpaceTuple(tuple(spaces[i] for i in Vids))
        )
        report.solutions.append(pair)
    q = cfg.field.q
    for pair in report.solutions:
        report.classifications.append(classify(pair) if cfg.m == q + 1 else None)
    report.counts = {
        "tuples_scanned": scanned,
        "pairs_tested": tested,
        "classes_found": len(report.solutions),
    }
    report.elapsed = time.perf_counter() - start
    return report


# coverings


def enumerate_coverings(
    V: Subspace, m: int, max_subspaces: int = DEFAULT_MAX_SUBSPACES,
    max_points: int = DEFAULT_MAX_POINTS,
) -> list[tuple[Subspace, ...]]:
    """Every multiset of m proper subspaces of V whose union is V."""
    if V.dim < 1:
        raise PreconditionError("the zero space has no covering by proper subspaces")
    proper = [s for s in subspaces_between(V.ambient.zero_space(), V, max_subspaces) if s != V]
    index = _Index(V, proper, max_points)
    full = (1 << index.npoints) - 1
    sizes = [len(p) for p in index.points]
    n = len(proper)
    biggest = max(sizes)
    out = []
    chosen: list[int] = []

    def rec(start: int, covered: int) -> None:
        k = len(chosen)
        if k == m:
            if covered == full:
                out.append(tuple(proper[i] for i in chosen))
            return
        missing = index.npoints - bin(covered).count("1")
        if missing > (m - k) * biggest:
            return
        for pos in range(start, n):
            chosen.append(pos)
            rec(pos, covered | index.masks[pos])
            chosen.pop()

    rec(0, 0)
    return out


def verify_covering_structure(V: Subspace, cover: Sequence[Subspace]) -> dict:
    """Certificate that a (q+1)-covering of V is a hyperplane pencil.

    Checks: S = intersection of the members has codimension 2, the members
    are exactly the hyperplanes of V through S, and
    sum id_{W_i} = id_V + q id_S at every point of V.
    """
    f = V.field
    q = f.q
    if len(cover) != q + 1:
        raise NotACovering(f"covering has {len(cover)} members, expected q + 1 = {q + 1}")
    for W_i in cover:
        if W_i == V or not contains_space(V, W_i):
            raise NotACovering(f"{W_i} is not a proper subspace of {V}")
    points = list(iter_points(V))
    if not all(any(x in W_i for W_i in cover) for x in points):
        raise NotACovering("members do not cover V")
    S = meet(list(cover))
    if S.dim != V.dim - 2:
        raise StructureViolation(f"meet has dim {S.dim}, expected {V.dim - 2}")
    pencil = sorted(hyperplanes_through(V, S), key=lambda s: s.key)
    if sorted(cover, key=lambda s: s.key) != pencil:
        raise StructureViolation("members are not the hyperplanes through their meet")
    for x in points:
        lhs = sum(1 for W_i in cover if x in W_i)
        rhs = 1 + (q if x in S else 0)
        if lhs != rhs:
            raise StructureViolation(f"covering identity fails at {x}: {lhs} != {rhs}")
    return {"S": S, "meet_dim": S.dim, "points_checked": len(points), "identity_holds": True}
