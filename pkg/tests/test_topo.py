import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modaltopo import topo
from modaltopo.bits import full, members, subsets
from modaltopo.errors import BudgetExceeded, InvalidTopology
from modaltopo.kripke import (Frame, chain, cluster_frame, enumerate_frames, reflexive_closure,
                              transitive_closure)
from modaltopo.topo import (TopSpace, alexandrov_from_frame, all_topologies, closure, derived,
                            discrete, homeomorphic, indiscrete, interior, make_space, sierpinski,
                            spaces_up_to, specialization_frame, subspace, topologies_by_families)


def opens_closure_brute(opens, s, n):
    """Closure from the definition: x is in cl S iff every open around x meets S."""
    return sum(1 << x for x in range(n) if all(o & s for o in opens if o >> x & 1))


def derived_brute(opens, s, n):
    return sum(1 << x for x in range(n)
               if all(o & s & ~(1 << x) for o in opens if o >> x & 1))


def resolvable_brute(X, k, within):
    """Try every labelling of ``within`` by k cells plus 'unused'."""
    pts = members(within)
    opens = [o & within for o in X.opens if o & within]
    for labels in itertools.product(range(k + 1), repeat=len(pts)):
        cells = [0] * k
        for p, lab in zip(pts, labels):
            if lab < k:
                cells[lab] |= 1 << p
        if all(c and all(o & c for o in opens) for c in cells):
            return True
    return False


def scattered_brute(X):
    for s in range(1, 1 << X.n):
        sub, _ = subspace(X, s)
        if topo.is_crowded(sub):
            return False
    return True


@st.composite
def spaces(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    succ = tuple(draw(st.integers(0, full(n))) for _ in range(n))
    pre = reflexive_closure(transitive_closure(Frame(n, succ)))
    return TopSpace(n, pre.succ)


# ---------------------------------------------------------------- examples

def test_make_space_examples():
    assert make_space(2, []).opens == {0, 0b11}
    assert make_space(2, [[1]]).opens == {0, 0b10, 0b11}
    assert make_space(2, [[0], [1]]) == discrete(2)
    assert sierpinski().opens == {0, 0b10, 0b11}
    with pytest.raises(InvalidTopology):
        make_space(3, [[0], [1]], complete=False)
    with pytest.raises(InvalidTopology):
        TopSpace(3, (0b011, 0b110, 0b100))


def test_json_round_trip():
    for X in spaces_up_to(3):
        assert TopSpace.from_json(X.to_json()) == X
    X = TopSpace.from_json({"points": 3, "opens": [[0], [1, 2]], "complete": True})
    assert X.opens == {0, 0b001, 0b110, 0b111}


def test_operator_examples():
    X = indiscrete(2)
    assert closure(X, 0b01) == 0b11
    assert derived(X, 0b01) == 0b10
    for Y in spaces_up_to(3):
        assert closure(Y, 0) == 0 and interior(Y, 0) == 0
    S = sierpinski()
    assert derived(S, 0b10) == 0b01 and derived(S, 0b01) == 0


def test_subspace_examples():
    S = sierpinski()
    assert subspace(S, S.points)[0] == S
    one, labels = subspace(S, 0b01)
    assert one.n == 1 and labels == (0,)


def test_classify_examples():
    c = topo.classify(indiscrete(2))
    assert (c.is_crowded, c.is_TD, c.is_T1, c.is_scattered, c.is_densely_discrete) == \
        (True, False, False, False, False)
    for n in range(1, 5):
        c = topo.classify(discrete(n))
        assert c.is_TD and c.is_T1 and c.is_scattered and c.is_densely_discrete
        assert not c.is_crowded
    c = topo.classify(sierpinski())
    assert c.is_TD and not c.is_T1 and c.is_T0


def test_resolvability_examples():
    X = indiscrete(2)
    cells = topo.resolution(X, 2)
    assert sorted(cells) == [0b01, 0b10]
    assert topo.k_resolvable(indiscrete(3), 3)
    assert not topo.k_resolvable(sierpinski(), 2)
    assert topo.hereditarily_irresolvable(X, 3) and not topo.hereditarily_irresolvable(X, 2)
    for n in range(1, 5):
        for k in (2, 3, 4):
            assert topo.hereditarily_irresolvable(discrete(n), k)
    assert not topo.openly_irresolvable(X)


def test_alexandrov_examples():
    assert alexandrov_from_frame(chain(2)) == sierpinski()
    assert alexandrov_from_frame(cluster_frame(2)) == indiscrete(2)
    for F in enumerate_frames(4, transitive=True, reflexive=True):
        assert specialization_frame(alexandrov_from_frame(F)) == F


def test_alexandrov_opens_are_up_sets():
    for F in enumerate_frames(3):
        X = alexandrov_from_frame(F)
        ups = {s for s in subsets(F.points)
               if all(F.succ[y] & ~s == 0 for y in members(s))}
        assert X.opens == ups


# ------------------------------------------------------------ enumeration

@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_topology_counts_two_ways(n, count):
    via_preorders = {X.opens for X in all_topologies(n)}
    via_families = set(topologies_by_families(n))
    assert len(via_preorders) == count
    assert via_preorders == via_families


def test_homeomorphism_classes():
    counts = []
    for n in range(1, 5):
        reps = []
        for X in all_topologies(n):
            if not any(homeomorphic(X, Y) for Y in reps):
                reps.append(X)
        counts.append(len(reps))
    assert counts == [1, 3, 9, 33]


def test_enumeration_caps():
    with pytest.raises(BudgetExceeded):
        list(all_topologies(6))
    with pytest.raises(BudgetExceeded):
        list(topologies_by_families(5))


# ------------------------------------------------------------- oracles

def test_operators_match_definitions():
    for X in spaces_up_to(4):
        opens = X.opens
        for s in subsets(X.points):
            assert closure(X, s) == opens_closure_brute(opens, s, X.n)
            assert derived(X, s) == derived_brute(opens, s, X.n)
            assert interior(X, s) == max(o for o in opens if o & ~s == 0)


def test_min_neighbourhood_is_intersection_of_opens():
    for X in spaces_up_to(4):
        for x in range(X.n):
            inter = X.points
            for o in X.opens:
                if o >> x & 1:
                    inter &= o
            assert inter == X.min_nbhd[x]
        for s in subsets(X.points):
            assert X.is_open(s) == (s in X.opens)


def test_resolution_matches_backtracking():
    for X in spaces_up_to(4):
        for k in (2, 3):
            for s in range(1, 1 << X.n):
                fast = topo._subspace_resolvable(X.min_nbhd, s, k)
                assert fast == resolvable_brute(X, k, s)
            cells = topo.resolution(X, k)
            if cells is not None:
                assert all(c and topo.is_dense(X, c) for c in cells)
                assert all(not a & b for a, b in itertools.combinations(cells, 2))


def test_scattered_matches_definition():
    for X in spaces_up_to(4):
        assert topo.is_scattered(X) == scattered_brute(X)


def test_td_characterisations_agree():
    for X in spaces_up_to(5):
        assert topo.is_TD_by_derived(X) == topo.is_TD_by_closure(X)
        # finite spaces: T_D, T_0 and scattered coincide
        assert topo.is_TD(X) == topo.is_T0(X) == topo.is_scattered(X)


def test_door_matches_definition():
    for X in spaces_up_to(3):
        closed = {X.points & ~o for o in X.opens}
        assert topo.is_door(X) == all(s in X.opens or s in closed for s in subsets(X.points))


# ---------------------------------------------------------- invariants

@settings(max_examples=150, deadline=None)
@given(spaces(), st.data())
def test_closure_operator_laws(X, data):
    s = data.draw(st.integers(0, X.points))
    t = data.draw(st.integers(0, X.points))
    cl = closure(X, s)
    assert s & ~cl == 0 and closure(X, cl) == cl
    assert closure(X, s | t) == cl | closure(X, t)
    if s & ~t == 0:
        assert cl & ~closure(X, t) == 0
    assert cl == s | derived(X, s)
    assert interior(X, s) == X.points & ~closure(X, X.points & ~s)


@settings(max_examples=150, deadline=None)
@given(spaces(), st.data())
def test_open_trace_laws(X, data):
    s = data.draw(st.integers(0, X.points))
    o = data.draw(st.sampled_from(sorted(X.opens)))
    assert o & closure(X, s) & ~closure(X, o & s) == 0
    assert o & derived(X, s) & ~derived(X, o & s) == 0
    if o and topo.is_dense(X, s):
        assert topo.is_dense(X, o & s, within=o)
    if topo.is_crowded_in(X, s):
        assert topo.is_crowded_in(X, o & s)


@settings(max_examples=150, deadline=None)
@given(spaces(), st.data())
def test_subspace_closure(X, data):
    s = data.draw(st.integers(1, X.points))
    y = data.draw(st.integers(0, X.points)) & s
    sub, labels = subspace(X, s)
    local = sum(1 << i for i, p in enumerate(labels) if y >> p & 1)
    back = sum(1 << labels[i] for i in members(closure(sub, local)))
    assert back == s & closure(X, y)


@settings(max_examples=100, deadline=None)
@given(spaces())
def test_resolvability_is_monotone(X):
    for m in range(3, X.n + 1):
        for k in range(2, m):
            if topo.k_resolvable(X, m):
                assert topo.k_resolvable(X, k)


def test_hi_implies_td_and_chain_of_implications():
    for X in spaces_up_to(5):
        hi = topo.hereditarily_irresolvable(X, 2)
        if hi:
            assert topo.is_TD(X)
            assert topo.openly_irresolvable(X)
        if topo.is_scattered(X):
            assert hi


def test_no_finite_crowded_td_space():
    assert not any(topo.is_crowded(X) and topo.is_TD(X) for X in spaces_up_to(5))
