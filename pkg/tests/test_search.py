import itertools
from collections import defaultdict
from fractions import Fraction

import pytest

from conftest import amb, sp
from isoeq.classify import TYPE_A, TYPE_B, TYPE_C
from isoeq.constructors import build, default_spec
from isoeq.core import SpaceTuple, pairs_equivalent, tuples_equivalent, verify_equation
from isoeq.errors import NotACovering, PreconditionError, TooLarge
from isoeq.gf import field_make
from isoeq.linalg import count_subspaces, enumerate_points, enumerate_subspaces, hyperplanes_through
from isoeq.search import (
    Pruning,
    SearchConfig,
    enumerate_coverings,
    find_partners,
    search_nontrivial,
    verify_covering_structure,
)


def oracle_classes(p, d, m):
    """Group every multiset of m subspaces by its rational function on W."""
    a = amb(p, d)
    spaces = enumerate_subspaces(a)
    points = enumerate_points(a.full())
    member = [[x in s for x in points] for s in spaces]
    groups = defaultdict(list)
    for t in itertools.combinations_with_replacement(range(len(spaces)), m):
        vals = [Fraction(0)] * len(points)
        for i in t:
            w = Fraction(1, p ** spaces[i].dim)
            for k, inside in enumerate(member[i]):
                if inside:
                    vals[k] += w
        groups[tuple(vals)].append(t)
    classes = set()
    for ts in groups.values():
        for x, y in itertools.combinations(ts, 2):
            classes.add((min(x, y), max(x, y)))
    return classes


def report_pairs(rep):
    return {tuple(sorted((p.U.key(), p.V.key()))) for p in rep.solutions}


def test_coverings_counts():
    assert len(enumerate_coverings(amb(2, 2).full(), 3)) == 1
    assert len(enumerate_coverings(amb(3, 2).full(), 4)) == 1
    assert len(enumerate_coverings(amb(2, 3).full(), 3)) == 7 == count_subspaces(amb(2, 3), 1)


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_no_covering_below_q_plus_one(p, d):
    for m in range(1, p + 1):
        assert enumerate_coverings(amb(p, d).full(), m) == []


@pytest.mark.parametrize("p,d", [(2, 2), (3, 2), (2, 3)])
def test_minimal_coverings_are_pencils(p, d):
    V = amb(p, d).full()
    for cover in enumerate_coverings(V, p + 1):
        cert = verify_covering_structure(V, cover)
        assert cert["identity_holds"] and cert["meet_dim"] == d - 2
        assert cert["points_checked"] == p**d


def test_covering_certificate_examples():
    a = amb(3, 2)
    cert = verify_covering_structure(a.full(), enumerate_subspaces(a, 1))
    assert cert["S"] == a.zero_space()
    b = amb(2, 4)
    S = sp(b, (0, 0, 1, 0), (0, 0, 0, 1))
    assert verify_covering_structure(b.full(), hyperplanes_through(b.full(), S))["S"] == S


def test_covering_rejects():
    a = amb(2, 2)
    lines = enumerate_subspaces(a, 1)
    with pytest.raises(NotACovering):
        verify_covering_structure(a.full(), lines[:2])
    with pytest.raises(NotACovering):
        verify_covering_structure(a.full(), [lines[0], lines[0], lines[1]])
    with pytest.raises(PreconditionError):
        enumerate_coverings(a.zero_space(), 3)


def test_find_partners_type_a_plane():
    a = amb(2, 2)
    W, Z = a.full(), a.zero_space()
    found = find_partners(SpaceTuple((W, W, Z)))
    assert len(found) == 1
    assert tuples_equivalent(found[0], SpaceTuple(tuple(enumerate_subspaces(a, 1))))
    unpruned = find_partners(SpaceTuple((W, W, Z)), pruning=Pruning.off())
    assert [t.key() for t in unpruned] == [t.key() for t in found]


def test_find_partners_none():
    a = amb(2, 2)
    W = a.full()
    assert find_partners(SpaceTuple((W, W, W))) == []
    assert find_partners(SpaceTuple((W, W, W)), pruning=Pruning.off()) == []


def test_find_partners_keeps_trivial_when_asked():
    a = amb(2, 2)
    t = SpaceTuple((a.full(), a.full(), a.zero_space()))
    for pruning in (Pruning.off(), None):
        found = find_partners(t, trivial_excluded=False, pruning=pruning)
        assert any(f.key() == t.key() for f in found)
        assert len(found) == 2


@pytest.mark.parametrize("kind", "ABC")
@pytest.mark.parametrize("p", [2, 3])
def test_find_partners_unique_for_constructed(kind, p):
    a = amb(p, {"A": 2, "B": 3, "C": 4}[kind])
    pair = build(default_spec(kind, a, 0))
    for side, other in ((pair.V, pair.U), (pair.U, pair.V)):
        found = find_partners(side)
        assert len(found) == 1
        assert tuples_equivalent(found[0], other)


def test_pruning_config_validation():
    f = field_make(2)
    with pytest.raises(PreconditionError):
        SearchConfig(f, 2, 2, Pruning(True, True, True))
    with pytest.raises(PreconditionError):
        SearchConfig(f, 2, 3, jobs=0)
    assert SearchConfig(f, 2, 2).pruning == Pruning(True, True, False)
    with pytest.raises(PreconditionError):
        find_partners(SpaceTuple((amb(2, 2).full(),) * 2), pruning=Pruning())


def test_search_cap():
    with pytest.raises(TooLarge):
        search_nontrivial(SearchConfig(field_make(2), 4, 3, max_tuples=100))


@pytest.mark.parametrize("p,d,m", [(2, 1, 2), (2, 2, 2), (2, 3, 2), (3, 1, 3), (3, 2, 2), (3, 2, 3)])
def test_no_solutions_below_q_plus_one(p, d, m):
    rep = search_nontrivial(SearchConfig(field_make(p), d, m))
    assert rep.solutions == []
    assert rep.counts["classes_found"] == 0


def test_search_plane_type_a_only():
    rep = search_nontrivial(SearchConfig(field_make(2), 2, 3))
    assert rep.solutions
    assert set(rep.kinds()) == {TYPE_A}


@pytest.mark.parametrize("p,d,m", [(2, 2, 3), (2, 3, 3), (3, 2, 4)])
def test_pruning_soundness(p, d, m):
    f = field_make(p)
    pruned = search_nontrivial(SearchConfig(f, d, m))
    brute = search_nontrivial(SearchConfig(f, d, m, Pruning.off()))
    assert pruned.class_keys() == brute.class_keys()
    assert pruned.counts["pairs_tested"] <= brute.counts["pairs_tested"]


def test_search_matches_rational_oracle_q2_d3():
    rep = search_nontrivial(SearchConfig(field_make(2), 3, 3, Pruning.off()))
    a = amb(2, 3)
    spaces = enumerate_subspaces(a)
    expected = {
        tuple(sorted((tuple(spaces[i].key for i in x), tuple(spaces[i].key for i in y))))
        for x, y in oracle_classes(2, 3, 3)
    }
    assert report_pairs(rep) == expected
    assert set(rep.kinds()) == {TYPE_A, TYPE_B}
    for pair, c in zip(rep.solutions, rep.classifications):
        assert verify_equation(pair)
        assert pairs_equivalent(build(c.witness), pair)


def test_representatives_pairwise_inequivalent():
    rep = search_nontrivial(SearchConfig(field_make(2), 3, 3))
    keys = [tuple(sorted((p.U.key(), p.V.key()))) for p in rep.solutions]
    assert len(set(keys)) == len(keys)


def test_determinism_across_jobs():
    f = field_make(2)
    one = search_nontrivial(SearchConfig(f, 3, 3))
    again = search_nontrivial(SearchConfig(f, 3, 3))
    two = search_nontrivial(SearchConfig(f, 3, 3, jobs=2))
    assert one.class_keys() == again.class_keys() == two.class_keys()
    assert [c.kind for c in one.classifications] == [c.kind for c in two.classifications]
    assert one.counts == two.counts


def test_m_above_q_plus_one_is_unclassified():
    rep = search_nontrivial(SearchConfig(field_make(2), 2, 4))
    assert rep.solutions
    assert all(c is None for c in rep.classifications)
    assert all(verify_equation(p) for p in rep.solutions)


@pytest.mark.slow
def test_search_q2_d4_all_types_against_oracle():
    rep = search_nontrivial(SearchConfig(field_make(2), 4, 3))
    assert set(rep.kinds()) == {TYPE_A, TYPE_B, TYPE_C}
    a = amb(2, 4)
    spaces = enumerate_subspaces(a)
    expected = {
        tuple(sorted((tuple(spaces[i].key for i in x), tuple(spaces[i].key for i in y))))
        for x, y in oracle_classes(2, 4, 3)
    }
    assert report_pairs(rep) == expected
