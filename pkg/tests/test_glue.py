import random

import pytest

from modaltopo import dsem, topo
from modaltopo.bits import full, members
from modaltopo.errors import InvalidAssignment, NotTransitive
from modaltopo.glue import (ClusterSpace, assignment_from_json, assignment_problems,
                            assignment_to_json, default_assignment, glue, glued_opens_by_definition,
                            non_closed_singleton)
from modaltopo.kripke import (ClusterKind, Frame, chain, cluster_frame, clusters, enumerate_frames,
                              irreflexive_point, reflexive_point)
from modaltopo.topo import TopSpace, discrete, homeomorphic, indiscrete, spaces_up_to


def test_glue_examples():
    g = glue(irreflexive_point())
    assert g.space.n == 1 and g.f == (0,)
    cs = ClusterSpace(indiscrete(4), {0: 0b0011, 1: 0b1100})
    g = glue(cluster_frame(2), {0b11: cs})
    assert g.space == indiscrete(4)
    for w in (0, 1):
        cell = g.fiber(w)
        assert topo.is_dense(g.space, cell) and topo.is_crowded_in(g.space, cell)
    g = glue(chain(2))
    assert g.space.opens == {0, 0b10, 0b11}


def test_default_assignment_examples():
    a = default_assignment(reflexive_point(), 2)
    assert a[1].space == indiscrete(2) and a[1].cells == {0: 0b11}
    a = default_assignment(cluster_frame(3), 2)
    piece = a[0b111]
    assert piece.space == indiscrete(6)
    assert sorted(piece.cells.values()) == [0b11, 0b1100, 0b110000]
    assert not assignment_problems(cluster_frame(3), a)
    for frame in enumerate_frames(3, transitive=True):
        if all(k is ClusterKind.DEGENERATE for k in clusters(frame).kinds):
            assert all(piece.space.n == 1 for piece in default_assignment(frame).values())
    with pytest.raises(ValueError):
        default_assignment(reflexive_point(), 1)


def test_invalid_assignments_are_named():
    frame = cluster_frame(2)
    bad = {0b11: ClusterSpace(discrete(2), {0: 0b01, 1: 0b10})}
    problems = assignment_problems(frame, bad)
    assert any("dense failed" in p for p in problems)
    assert any("crowded failed" in p for p in problems)
    with pytest.raises(InvalidAssignment, match="crowded"):
        glue(frame, bad)
    overlap = {0b11: ClusterSpace(indiscrete(3), {0: 0b011, 1: 0b110})}
    assert any("disjoint failed" in p for p in assignment_problems(frame, overlap, strict=False))
    gap = {0b11: ClusterSpace(indiscrete(3), {0: 0b001, 1: 0b010})}
    assert any("cover failed" in p for p in assignment_problems(frame, gap, strict=False))
    empty = {0b11: ClusterSpace(indiscrete(2), {0: 0b11, 1: 0})}
    assert any("nonempty failed" in p for p in assignment_problems(frame, empty, strict=False))
    assert assignment_problems(frame, {}) == ["cluster [0, 1]: no space assigned"]
    with pytest.raises(NotTransitive):
        glue(Frame.from_edges(3, [(0, 1), (1, 2)]))


def test_assignment_json_round_trip():
    frame = Frame.from_edges(3, [(0, 1), (1, 0), (0, 0), (1, 1), (0, 2), (1, 2)])
    a = default_assignment(frame, 3)
    assert assignment_from_json(assignment_to_json(a)) == a
    assert glue(frame, assignment_from_json(assignment_to_json(a))) == glue(frame, a)


def test_glued_opens_match_definition():
    for frame in enumerate_frames(3, transitive=True):
        a = default_assignment(frame, 2)
        g = glue(frame, a)
        assert g.space.opens == glued_opens_by_definition(frame, a, g)


def test_glued_opens_match_definition_random_pieces():
    rng = random.Random(0)
    pool = list(spaces_up_to(3))
    frames = list(enumerate_frames(3, transitive=True))
    for _ in range(150):
        frame = rng.choice(frames)
        a = {}
        for c in clusters(frame).clusters:
            ws = members(c)
            X = rng.choice([Y for Y in pool if Y.n >= len(ws)])
            cells = [1 << i for i in range(len(ws))]
            cells[-1] |= full(X.n) & ~full(len(ws))
            a[c] = ClusterSpace(X, dict(zip(ws, cells)))
        g = glue(frame, a, strict=False)
        assert g.space.opens == glued_opens_by_definition(frame, a, g)


def test_glued_structure():
    for frame in enumerate_frames(4, transitive=True):
        a = default_assignment(frame, 2)
        g = glue(frame, a)
        dec = clusters(frame)
        for i, c in enumerate(dec.clusters):
            block = g.cluster_block(i)
            assert sum(g.fiber(w) for w in members(c)) == block
            sub, _ = topo.subspace(g.space, block)
            assert sub == a[c].space
        for x, (i, w, local) in enumerate(g.provenance):
            assert g.f[x] == w and g.offsets[i] + local == x


def test_relabeling_gives_homeomorphic_result():
    rng = random.Random(9)
    for frame in enumerate_frames(3, transitive=True):
        a = default_assignment(frame, 2)
        shuffled = {}
        for c, piece in a.items():
            perm = list(range(piece.space.n))
            rng.shuffle(perm)
            nb = [0] * piece.space.n
            for x, u in enumerate(piece.space.min_nbhd):
                nb[perm[x]] = sum(1 << perm[y] for y in members(u))
            cells = {w: sum(1 << perm[y] for y in members(cell)) for w, cell in piece.cells.items()}
            shuffled[c] = ClusterSpace(TopSpace(piece.space.n, tuple(nb)), cells)
        assert homeomorphic(glue(frame, a).space, glue(frame, shuffled).space)


def test_d_morphism_up_to_five_points():
    # being a d-morphism is invariant under relabeling, so one frame per class suffices
    for frame in enumerate_frames(5, transitive=True, iso_dedup=True):
        g = glue(frame, default_assignment(frame, 2))
        assert dsem.d_morphism_violation(dsem.DMorphism(g.f, g.space, frame)) is None


def test_d_morphism_larger_cells():
    for frame in enumerate_frames(3, transitive=True):
        g = glue(frame, default_assignment(frame, 3))
        assert dsem.is_d_morphism(dsem.DMorphism(g.f, g.space, frame))


def test_non_t1_and_shape_remarks():
    for frame in enumerate_frames(4, transitive=True):
        dec = clusters(frame)
        g = glue(frame)
        if any(dec.strict_order):
            x = non_closed_singleton(g)
            assert x is not None and not g.space.is_closed(1 << x)
        finals = [k for k, fin in zip(dec.kinds, dec.final) if fin]
        if all(k.nondegenerate for k in finals):
            assert topo.is_crowded(g.space)
        if all(k is ClusterKind.DEGENERATE for k in finals):
            assert topo.is_densely_discrete(g.space)


def test_td_preserved_for_irreflexive_frames():
    for frame in enumerate_frames(4, transitive=True):
        if all(k is ClusterKind.DEGENERATE for k in clusters(frame).kinds):
            assert topo.is_TD(glue(frame).space)


def test_td_preserved_with_td_pieces():
    rng = random.Random(3)
    pool = [X for X in spaces_up_to(4) if topo.is_TD(X)]
    frames = list(enumerate_frames(4, transitive=True))
    for _ in range(200):
        frame = rng.choice(frames)
        a = {}
        for c in clusters(frame).clusters:
            ws = members(c)
            X = rng.choice([Y for Y in pool if Y.n >= len(ws)])
            labels = list(range(len(ws))) + [rng.randrange(len(ws)) for _ in range(X.n - len(ws))]
            rng.shuffle(labels)
            cells = [0] * len(ws)
            for x, lab in enumerate(labels):
                cells[lab] |= 1 << x
            a[c] = ClusterSpace(X, dict(zip(ws, cells)))
        assert topo.is_TD(glue(frame, a, strict=False).space)


def test_hi_preserved_on_four_point_frames():
    # cluster spaces up to 3 points keep the glued space at 12 points or fewer
    rng = random.Random(8)
    for k in (2, 3):
        pool = [X for X in spaces_up_to(3) if topo.hereditarily_irresolvable(X, k)]
        frames = list(enumerate_frames(4, transitive=True, iso_dedup=True))
        for _ in range(100):
            frame = rng.choice(frames)
            a = {}
            for c in clusters(frame).clusters:
                ws = members(c)
                X = rng.choice([Y for Y in pool if Y.n >= len(ws)])
                cells = [1 << i for i in range(len(ws))]
                cells[-1] |= full(X.n) & ~full(len(ws))
                a[c] = ClusterSpace(X, dict(zip(ws, cells)))
            assert topo.hereditarily_irresolvable(glue(frame, a, strict=False).space, k)


def test_strict_assignment_with_three_hi_pieces():
    # a simple cluster can take the 2-point indiscrete space: one crowded dense
    # cell, and the space is 3-HI
    frame = Frame.from_edges(3, [(0, 1), (0, 2), (1, 2), (1, 1), (2, 2)])
    a = default_assignment(frame, 2)
    assert all(topo.hereditarily_irresolvable(piece.space, 3) for piece in a.values())
    assert topo.hereditarily_irresolvable(glue(frame, a).space, 3)
