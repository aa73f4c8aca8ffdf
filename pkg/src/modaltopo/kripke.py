"""Finite Kripke frames: evaluation, validity, clusters, morphisms, enumeration."""
from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .bits import full, iter_bits, mask, members, popcount, subsets
from .engine import DEFAULT_BIT_BUDGET, Countermodel, find_counterexample, truth_set
from .errors import BudgetExceeded, NotTransitive
from .formula import Formula

Valuation = Mapping[str, int]


def as_valuation(val: Mapping[str, Any], n: int) -> dict[str, int]:
    """Normalise a valuation whose values are masks or iterables of points."""
    out = {}
    for name, v in val.items():
        m = v if isinstance(v, int) else mask(v)
        if m >> n:
            raise ValueError(f"valuation of {name!r} mentions points outside 0..{n - 1}")
        out[name] = m
    return out


@dataclass(frozen=True)
class Violation:
    """A named failed condition with the points that witness the failure."""

    condition: str
    detail: dict = field(default_factory=dict)

    def __str__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{self.condition}({args})"


@dataclass(frozen=True)
class Frame:
    """A relation on points ``0..n-1``; ``succ[x]`` is the mask of R(x)."""

    n: int
    succ: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("point count must be >= 0")
        if len(self.succ) != self.n:
            raise ValueError(f"expected {self.n} successor sets, got {len(self.succ)}")
        for x, s in enumerate(self.succ):
            if s < 0 or s >> self.n:
                raise ValueError(f"successor of point {x} out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Frame:
        succ = [0] * n
        for x, y in edges:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"edge ({x}, {y}) out of range for {n} points")
            succ[x] |= 1 << y
        return cls(n, tuple(succ))

    @classmethod
    def from_json(cls, obj: Mapping) -> Frame:
        n = obj["points"]
        if not isinstance(n, int) or n < 0:
            raise ValueError("'points' must be a non-negative integer")
        seen = set()
        edges = []
        for e in obj.get("edges", []):
            if len(e) != 2:
                raise ValueError(f"edge {e!r} is not a pair")
            pair = (int(e[0]), int(e[1]))
            if pair in seen:
                raise ValueError(f"duplicate edge {list(pair)}")
            seen.add(pair)
            edges.append(pair)
        return cls.from_edges(n, edges)

    def to_json(self) -> dict:
        return {"points": self.n, "edges": [list(e) for e in self.edges()]}

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in iter_bits(self.succ[x])]

    def related(self, x: int, y: int) -> bool:
        return bool(self.succ[x] >> y & 1)

    def predecessors(self) -> tuple[int, ...]:
        pred = [0] * self.n
        for x, s in enumerate(self.succ):
            for y in iter_bits(s):
                pred[y] |= 1 << x
        return tuple(pred)

    @property
    def points(self) -> int:
        return full(self.n)


def chain(n: int) -> Frame:
    """Strict linear order 0 < 1 < ... < n-1 (irreflexive, transitive)."""
    return Frame(n, tuple(full(n) & ~full(x + 1) for x in range(n)))


def cluster_frame(m: int) -> Frame:
    """A single non-degenerate cluster: the universal relation on m points."""
    return Frame(m, (full(m),) * m)


def irreflexive_point() -> Frame:
    return Frame(1, (0,))


def reflexive_point() -> Frame:
    return Frame(1, (1,))


# ------------------------------------------------------------- semantics

def eval_frame(frame: Frame, val: Mapping[str, Any], phi: Formula) -> int:
    """Truth set (mask) of ``phi`` in the model ``(frame, val)``."""
    return truth_set(phi, frame.succ, as_valuation(val, frame.n))


def countermodel(frame: Frame, phi: Formula,
                 bit_budget: int = DEFAULT_BIT_BUDGET) -> Countermodel | None:
    return find_counterexample(phi, frame.succ, bit_budget)


def valid_in_frame(frame: Frame, phi: Formula, bit_budget: int = DEFAULT_BIT_BUDGET) -> bool:
    """Whether ``phi`` is true at every point under every valuation.

    Use :func:`countermodel` to obtain the falsifying valuation and point.
    """
    return countermodel(frame, phi, bit_budget) is None


# -------------------------------------------------------------- closures

def is_transitive(frame: Frame) -> bool:
    succ = frame.succ
    for s in succ:
        for y in iter_bits(s):
            if succ[y] & ~s:
                return False
    return True


def is_reflexive(frame: Frame) -> bool:
    return all(s >> x & 1 for x, s in enumerate(frame.succ))


def is_irreflexive(frame: Frame) -> bool:
    return not any(s >> x & 1 for x, s in enumerate(frame.succ))


def transitive_closure(frame: Frame) -> Frame:
    succ = list(frame.succ)
    changed = True
    while changed:
        changed = False
        for x in range(frame.n):
            reach = succ[x]
            for y in iter_bits(succ[x]):
                reach |= succ[y]
            if reach != succ[x]:
                succ[x] = reach
                changed = True
    return Frame(frame.n, tuple(succ))


def reflexive_closure(frame: Frame) -> Frame:
    return Frame(frame.n, tuple(s | 1 << x for x, s in enumerate(frame.succ)))


def _require_transitive(frame: Frame):
    if not is_transitive(frame):
        raise NotTransitive("operation defined only for transitive frames")


# -------------------------------------------------------------- clusters

class ClusterKind(str, enum.Enum):
    DEGENERATE = "degenerate"
    SIMPLE = "simple"
    PROPER = "nondegenerate-proper"

    @property
    def nondegenerate(self) -> bool:
        return self is not ClusterKind.DEGENERATE


@dataclass(frozen=True)
class ClusterDecomposition:
    """Clusters of a transitive frame, ordered by their least point.

    ``strict_order[i]`` is the mask of cluster indices ``j`` with
    ``clusters[i]`` strictly below ``clusters[j]``.
    """

    clusters: tuple[int, ...]
    kinds: tuple[ClusterKind, ...]
    strict_order: tuple[int, ...]
    final: tuple[bool, ...]
    cluster_of: tuple[int, ...]

    def __len__(self):
        return len(self.clusters)

    def above(self, i: int) -> int:
        """Union (point mask) of all clusters strictly above cluster ``i``."""
        out = 0
        for j in iter_bits(self.strict_order[i]):
            out |= self.clusters[j]
        return out


def clusters(frame: Frame) -> ClusterDecomposition:
    _require_transitive(frame)
    succ = frame.succ
    pred = frame.predecessors()
    cluster_of = [-1] * frame.n
    cl = []
    for x in range(frame.n):
        if cluster_of[x] >= 0:
            continue
        c = (1 << x) | (succ[x] & pred[x])
        for y in iter_bits(c):
            cluster_of[y] = len(cl)
        cl.append(c)
    kinds = []
    strict = []
    for i, c in enumerate(cl):
        x = (c & -c).bit_length() - 1
        if popcount(c) > 1:
            kinds.append(ClusterKind.PROPER)
        elif succ[x] >> x & 1:
            kinds.append(ClusterKind.SIMPLE)
        else:
            kinds.append(ClusterKind.DEGENERATE)
        above = 0
        for y in iter_bits(succ[x] & ~c):
            above |= 1 << cluster_of[y]
        strict.append(above)
    return ClusterDecomposition(
        clusters=tuple(cl),
        kinds=tuple(kinds),
        strict_order=tuple(strict),
        final=tuple(s == 0 for s in strict),
        cluster_of=tuple(cluster_of),
    )


def circumference(frame: Frame) -> int:
    """Size of the largest non-degenerate cluster (0 when there is none).

    Only defined for transitive frames, where it equals the longest cycle.
    """
    dec = clusters(frame)
    return max((popcount(c) for c, k in zip(dec.clusters, dec.kinds) if k.nondegenerate),
               default=0)


# ------------------------------------------------------------- morphisms

def bounded_morphism_violation(f: Sequence[int], source: Frame,
                               target: Frame) -> Violation | None:
    """First failure of the forth or back condition for ``f``, else None."""
    if len(f) != source.n:
        raise ValueError("map must be defined on every source point")
    if any(not 0 <= v < target.n for v in f):
        raise ValueError("map value outside target points")
    for x in range(source.n):
        for y in iter_bits(source.succ[x]):
            if not target.related(f[x], f[y]):
                return Violation("forth", {"x": x, "y": y, "fx": f[x], "fy": f[y]})
    for x in range(source.n):
        reached = 0
        for y in iter_bits(source.succ[x]):
            reached |= 1 << f[y]
        missing = target.succ[f[x]] & ~reached
        if missing:
            return Violation("back", {"x": x, "fx": f[x], "v": members(missing)[0]})
    return None


def is_bounded_morphism(f: Sequence[int], source: Frame, target: Frame) -> bool:
    return bounded_morphism_violation(f, source, target) is None


def is_surjective(f: Sequence[int], n_target: int) -> bool:
    return set(f) == set(range(n_target))


# ------------------------------------------------------------ enumeration

FINAL_KINDS = ("all-degenerate", "all-nondegenerate", "all-simple")

# Largest sizes the enumerator accepts: all relations, labeled transitive
# frames, and isomorphism classes of transitive frames.
MAX_ANY = 4
MAX_TRANSITIVE = 5
MAX_TRANSITIVE_DEDUP = 6


@dataclass(frozen=True)
class FrameConstraints:
    transitive: bool = False
    reflexive: bool = False
    circumference_at_most: int | None = None
    final_clusters: str | None = None
    iso_dedup: bool = False

    def __post_init__(self):
        if self.final_clusters is not None and self.final_clusters not in FINAL_KINDS:
            raise ValueError(f"final_clusters must be one of {FINAL_KINDS}")
        if not self.transitive and (self.circumference_at_most is not None
                                    or self.final_clusters is not None):
            raise ValueError("cluster constraints require transitive=True")

    def size_cap(self) -> int:
        if not self.transitive:
            return MAX_ANY
        return MAX_TRANSITIVE_DEDUP if self.iso_dedup else MAX_TRANSITIVE

    def admits(self, frame: Frame) -> bool:
        if self.transitive and not is_transitive(frame):
            return False
        if self.reflexive and not is_reflexive(frame):
            return False
        if self.circumference_at_most is None and self.final_clusters is None:
            return True
        dec = clusters(frame)
        if self.circumference_at_most is not None:
            size = max((popcount(c) for c, k in zip(dec.clusters, dec.kinds)
                        if k.nondegenerate), default=0)
            if size > self.circumference_at_most:
                return False
        if self.final_clusters is not None:
            finals = [k for k, fin in zip(dec.kinds, dec.final) if fin]
            want = {
                "all-degenerate": lambda k: k is ClusterKind.DEGENERATE,
                "all-nondegenerate": lambda k: k.nondegenerate,
                "all-simple": lambda k: k is ClusterKind.SIMPLE,
            }[self.final_clusters]
            if not all(want(k) for k in finals):
                return False
        return True


def _up_closed(succ: Sequence[int], s: int) -> bool:
    return all(succ[y] & ~s == 0 for y in iter_bits(s))


def preorders(n: int) -> Iterator[Frame]:
    """All reflexive transitive relations on ``n`` labeled points.

    Built one point at a time: the new point ``m`` picks an up-closed set
    ``S`` of points above it and a down-closed set ``T`` below it with every
    point of ``T`` below every point of ``S``.
    """
    def extend(succ: list[int], pred: list[int]) -> Iterator[Frame]:
        m = len(succ)
        if m == n:
            yield Frame(n, tuple(succ))
            return
        universe = full(m)
        ups = [s for s in subsets(universe) if _up_closed(succ, s)]
        downs = [t for t in subsets(universe) if _up_closed(pred, t)]
        for s in ups:
            for t in downs:
                if any(s & ~succ[y] for y in iter_bits(t)):
                    continue
                new_succ = [v | (1 << m) if t >> y & 1 else v for y, v in enumerate(succ)]
                new_pred = [v | (1 << m) if s >> y & 1 else v for y, v in enumerate(pred)]
                new_succ.append(s | 1 << m)
                new_pred.append(t | 1 << m)
                yield from extend(new_succ, new_pred)

    yield from extend([], [])


def transitive_relations(n: int) -> Iterator[Frame]:
    """All transitive relations on ``n`` labeled points.

    Each comes from exactly one preorder by removing self-loops from some
    points that form singleton clusters.
    """
    for q in preorders(n):
        pred = q.predecessors()
        singletons = mask(x for x in range(n) if q.succ[x] & pred[x] == 1 << x)
        for drop in subsets(singletons):
            yield Frame(n, tuple(s & ~(1 << x) if drop >> x & 1 else s
                                 for x, s in enumerate(q.succ)))


def all_relations(n: int) -> Iterator[Frame]:
    for code in range(1 << (n * n)):
        yield Frame(n, tuple((code >> (x * n)) & full(n) for x in range(n)))


def _invariant(frame: Frame, pred: Sequence[int], x: int) -> tuple:
    return (frame.succ[x] >> x & 1, popcount(frame.succ[x]), popcount(pred[x]))


def _orders(frame: Frame) -> Iterator[list[int]]:
    pred = frame.predecessors()
    keyed = sorted(range(frame.n), key=lambda x: _invariant(frame, pred, x))
    groups = [list(g) for _, g in itertools.groupby(
        keyed, key=lambda x: _invariant(frame, pred, x))]
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        yield [x for part in parts for x in part]


def _rows(frame: Frame, order: Sequence[int]) -> tuple[int, ...]:
    n = frame.n
    pos = [0] * n
    for i, x in enumerate(order):
        pos[x] = i
    rows = []
    for x in order:
        r = 0
        for y in iter_bits(frame.succ[x]):
            r |= 1 << (n - 1 - pos[y])
        rows.append(r)
    return tuple(rows)


def canonical_form(frame: Frame) -> tuple[int, tuple[int, ...]]:
    """Isomorphism-invariant key: the lexicographically least adjacency matrix.

    Points are first sorted by (reflexive, out-degree, in-degree); the
    minimum is taken over all relabelings consistent with that sort.  Rows
    are encoded most-significant-column-first so tuple order is matrix order.
    """
    best = min(_rows(frame, order) for order in _orders(frame))
    return frame.n, best


def canonical_frame(frame: Frame) -> Frame:
    n, rows = canonical_form(frame)
    succ = []
    for r in rows:
        s = 0
        for j in range(n):
            if r >> (n - 1 - j) & 1:
                s |= 1 << j
        succ.append(s)
    return Frame(n, tuple(succ))


def are_isomorphic(a: Frame, b: Frame) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


def _closed_sets(adj: Sequence[int]) -> list[int]:
    return [s for s in subsets(full(len(adj))) if _up_closed(adj, s)]


@functools.lru_cache(maxsize=None)
def _transitive_reps(n: int) -> tuple[Frame, ...]:
    """One canonical frame per isomorphism class of transitive relations."""
    if n == 0:
        reps = [Frame(0, ())]
    else:
        found: dict[tuple, Frame] = {}
        m = n - 1
        for base in _transitive_reps(m):
            pred = base.predecessors()
            ups = _closed_sets(base.succ)
            downs = _closed_sets(pred)
            for s in ups:
                for t in downs:
                    if any(s & ~base.succ[y] for y in iter_bits(t)):
                        continue
                    for loop in (0, 1):
                        succ = [v | (1 << m) if t >> y & 1 else v
                                for y, v in enumerate(base.succ)]
                        own = s | (loop << m)
                        if loop:
                            for y in iter_bits(t):
                                succ[y] |= own
                        succ.append(own)
                        cand = Frame(n, tuple(succ))
                        if not is_transitive(cand):
                            continue
                        key = canonical_form(cand)
                        if key not in found:
                            found[key] = cand
        reps = [canonical_frame(found[k]) for k in sorted(found)]
    return tuple(reps)


def enumerate_frames(max_n: int, constraints: FrameConstraints | None = None,
                     min_n: int = 1, **kwargs) -> Iterator[Frame]:
    """Frames of each size ``min_n..max_n`` satisfying ``constraints``.

    Keyword arguments build a :class:`FrameConstraints` when none is given.
    With ``iso_dedup`` one canonical representative per isomorphism class
    is produced, in increasing canonical order.
    """
    c = constraints or FrameConstraints(**kwargs)
    if max_n > c.size_cap():
        raise BudgetExceeded(f"frame enumeration capped at {c.size_cap()} points "
                             f"for these constraints, asked for {max_n}")
    for n in range(min_n, max_n + 1):
        if c.iso_dedup and c.transitive:
            source: Iterable[Frame] = _transitive_reps(n)
        elif c.iso_dedup:
            keys = sorted({canonical_form(f) for f in all_relations(n)})
            source = (Frame(n, tuple(sum(1 << j for j in range(n) if r >> (n - 1 - j) & 1)
                                     for r in rows)) for _, rows in keys)
        elif c.reflexive and c.transitive:
            source = preorders(n)
        elif c.transitive:
            source = transitive_relations(n)
        else:
            source = all_relations(n)
        for frame in source:
            if c.admits(frame):
                yield frame
