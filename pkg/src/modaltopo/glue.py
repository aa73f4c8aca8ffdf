"""Gluing finite spaces along the cluster order of a transitive frame.

Each cluster ``C`` of the frame is replaced by a space ``X_C`` partitioned
into one cell per member of ``C``.  A set ``O`` of the disjoint union is
open when its trace on every ``X_C`` is open there and, whenever that trace
is non-empty, ``O`` contains every ``X_C'`` with ``C'`` strictly above
``C``.  The map sending a cell to its cluster member is returned with the
space.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .bits import full, iter_bits, mask, members, subsets
from .errors import InvalidAssignment
from .kripke import ClusterKind, Frame, clusters
from .topo import TopSpace, derived, indiscrete, is_crowded_in, is_dense


@dataclass(frozen=True)
class ClusterSpace:
    """The space standing in for one cluster, with a cell per cluster member."""

    space: TopSpace
    cells: Mapping[int, int]


ClusterAssignment = dict[int, ClusterSpace]
"""Maps a cluster (as a point mask of the frame) to its replacement space."""


@dataclass(frozen=True)
class GluedSpace:
    space: TopSpace
    f: tuple[int, ...]
    provenance: tuple[tuple[int, int, int], ...]
    offsets: tuple[int, ...]

    def cluster_block(self, i: int) -> int:
        """Points of the glued space coming from cluster ``i``."""
        return sum(1 << x for x, p in enumerate(self.provenance) if p[0] == i)

    def fiber(self, w: int) -> int:
        return sum(1 << x for x, v in enumerate(self.f) if v == w)

    def to_json(self) -> dict:
        out = self.space.to_json()
        out["map"] = list(self.f)
        out["provenance"] = [{"cluster": c, "member": w, "local": i}
                             for c, w, i in self.provenance]
        return out


def assignment_from_json(obj: Mapping) -> ClusterAssignment:
    """Read ``{"clusters": [{"members", "space", "cells"}]}``; cell keys are member ids."""
    out: ClusterAssignment = {}
    for entry in obj["clusters"]:
        c = mask(entry["members"])
        if c in out:
            raise InvalidAssignment(f"cluster {members(c)} assigned twice")
        space = TopSpace.from_json(entry["space"])
        cells = {int(w): mask(pts) for w, pts in entry["cells"].items()}
        out[c] = ClusterSpace(space, cells)
    return out


def assignment_to_json(assignment: ClusterAssignment) -> dict:
    return {"clusters": [
        {"members": members(c), "space": piece.space.to_json(),
         "cells": {str(w): members(cell) for w, cell in sorted(piece.cells.items())}}
        for c, piece in sorted(assignment.items())]}


def default_assignment(frame: Frame, cell_size: int = 2) -> ClusterAssignment:
    """Degenerate clusters get a point; a k-cluster gets k cells of an indiscrete space."""
    if cell_size < 2:
        raise ValueError("cells must have at least 2 points to be crowded")
    dec = clusters(frame)
    out: ClusterAssignment = {}
    for c, kind in zip(dec.clusters, dec.kinds):
        ws = members(c)
        if kind is ClusterKind.DEGENERATE:
            out[c] = ClusterSpace(TopSpace(1, (1,)), {ws[0]: 1})
            continue
        cells = {w: full(cell_size) << (i * cell_size) for i, w in enumerate(ws)}
        out[c] = ClusterSpace(indiscrete(cell_size * len(ws)), cells)
    return out


def assignment_problems(frame: Frame, assignment: ClusterAssignment,
                        strict: bool = True) -> list[str]:
    """Every way ``assignment`` fails to fit ``frame``; empty when it fits.

    The partition conditions (non-empty, disjoint, covering cells, one per
    member) are always checked.  With ``strict`` each cell of a
    non-degenerate cluster must also be dense and crowded, and a degenerate
    cluster must be a one-point space.
    """
    dec = clusters(frame)
    problems = []
    extra = set(assignment) - set(dec.clusters)
    for c in sorted(extra):
        problems.append(f"{members(c)} is not a cluster of the frame")
    for c, kind in zip(dec.clusters, dec.kinds):
        label = f"cluster {members(c)}"
        piece = assignment.get(c)
        if piece is None:
            problems.append(f"{label}: no space assigned")
            continue
        X = piece.space
        if set(piece.cells) != set(iter_bits(c)):
            problems.append(f"{label}: cells must be indexed by exactly its members")
            continue
        seen = 0
        for w, cell in sorted(piece.cells.items()):
            where = f"{label}, cell of {w}"
            if cell == 0:
                problems.append(f"{where}: nonempty failed")
            if cell >> X.n:
                problems.append(f"{where}: points outside the cluster space")
            if cell & seen:
                problems.append(f"{where}: disjoint failed")
            seen |= cell
            if strict and kind.nondegenerate and cell:
                if not is_dense(X, cell):
                    problems.append(f"{where}: dense failed")
                if not is_crowded_in(X, cell):
                    problems.append(f"{where}: crowded failed")
        if seen != X.points:
            problems.append(f"{label}: cover failed")
        if strict and kind is ClusterKind.DEGENERATE and X.n != 1:
            problems.append(f"{label}: a degenerate cluster needs a one-point space")
    return problems


def glue(frame: Frame, assignment: ClusterAssignment | None = None,
         strict: bool = True, cell_size: int = 2) -> GluedSpace:
    """Build the glued space and its map onto ``frame``.

    Glued points are laid out cluster by cluster, in cluster order, each
    block in the local point order.  The minimal neighbourhood of a point
    is its local one plus every block strictly above its cluster.
    """
    if assignment is None:
        assignment = default_assignment(frame, cell_size)
    problems = assignment_problems(frame, assignment, strict)
    if problems:
        raise InvalidAssignment("; ".join(problems))
    dec = clusters(frame)
    offsets = []
    blocks = []
    total = 0
    for c in dec.clusters:
        offsets.append(total)
        m = assignment[c].space.n
        blocks.append(full(m) << total)
        total += m
    f = [0] * total
    prov = [(0, 0, 0)] * total
    nbhd = [0] * total
    for i, c in enumerate(dec.clusters):
        piece = assignment[c]
        off = offsets[i]
        above = 0
        for j in iter_bits(dec.strict_order[i]):
            above |= blocks[j]
        for w, cell in piece.cells.items():
            for x in iter_bits(cell):
                f[off + x] = w
                prov[off + x] = (i, w, x)
        for x, u in enumerate(piece.space.min_nbhd):
            nbhd[off + x] = (u << off) | above
    return GluedSpace(TopSpace(total, tuple(nbhd)), tuple(f), tuple(prov), tuple(offsets))


def glued_opens_by_definition(frame: Frame, assignment: ClusterAssignment,
                              glued: GluedSpace) -> frozenset[int]:
    """Opens of the glued space straight from the open-set definition.

    Enumerates all subsets, so only for small instances.
    """
    dec = clusters(frame)
    blocks = [glued.cluster_block(i) for i in range(len(dec))]
    out = set()
    for o in subsets(glued.space.points):
        ok = True
        for i, c in enumerate(dec.clusters):
            trace = (o & blocks[i]) >> glued.offsets[i]
            if not assignment[c].space.is_open(trace):
                ok = False
                break
            if trace and any(blocks[j] & ~o for j in iter_bits(dec.strict_order[i])):
                ok = False
                break
        if ok:
            out.add(o)
    return frozenset(out)


def non_closed_singleton(glued: GluedSpace) -> int | None:
    """Some point whose singleton is not closed in the glued space, or None."""
    for x in range(glued.space.n):
        if derived(glued.space, 1 << x):
            return x
    return None
