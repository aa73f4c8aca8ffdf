"""Finite topological spaces.

A finite space is determined by the minimal open neighbourhood ``U_x`` of
each point (the intersection of all opens containing ``x``): a set is open
iff it is a union of such neighbourhoods.  Every operator below works from
that table; the full family of opens is only materialised on request.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .bits import full, iter_bits, mask, members, popcount, subsets
from .errors import BudgetExceeded, InvalidTopology
from .kripke import Frame, canonical_form, preorders, transitive_closure

# Enumeration caps: via preorders, and by filtering raw set families.
MAX_ENUM_POINTS = 5
MAX_FAMILY_POINTS = 4


@dataclass(frozen=True)
class TopSpace:
    """A topology on points ``0..n-1`` given by minimal neighbourhoods."""

    n: int
    min_nbhd: tuple[int, ...]

    def __post_init__(self):
        if len(self.min_nbhd) != self.n:
            raise InvalidTopology(f"expected {self.n} neighbourhoods, got {len(self.min_nbhd)}")
        for x, u in enumerate(self.min_nbhd):
            if not u >> x & 1:
                raise InvalidTopology(f"neighbourhood of {x} does not contain it")
            if u >> self.n:
                raise InvalidTopology(f"neighbourhood of {x} leaves the space")
            for y in iter_bits(u):
                if self.min_nbhd[y] & ~u:
                    raise InvalidTopology(f"neighbourhoods of {x} and {y} are inconsistent")

    @property
    def points(self) -> int:
        return full(self.n)

    @functools.cached_property
    def opens(self) -> frozenset[int]:
        found = {0}
        for u in set(self.min_nbhd):
            found |= {o | u for o in found}
        return frozenset(found)

    def is_open(self, s: int) -> bool:
        return all(self.min_nbhd[x] & ~s == 0 for x in iter_bits(s))

    def is_closed(self, s: int) -> bool:
        return self.is_open(self.points & ~s)

    @functools.cached_property
    def punctured(self) -> tuple[int, ...]:
        return tuple(u & ~(1 << x) for x, u in enumerate(self.min_nbhd))

    @classmethod
    def from_json(cls, obj: Mapping) -> TopSpace:
        return make_space(obj["points"], obj.get("opens", []), obj.get("complete", True))

    def to_json(self) -> dict:
        return {"points": self.n, "opens": [members(o) for o in sorted(self.opens)],
                "complete": False}


def _neighbourhoods(n: int, family: Iterable[int]) -> tuple[int, ...]:
    family = list(family)
    out = []
    for x in range(n):
        u = full(n)
        for s in family:
            if s >> x & 1:
                u &= s
        out.append(u)
    return tuple(out)


def make_space(n: int, generating_sets: Iterable, complete: bool = True) -> TopSpace:
    """Build a space on ``n`` points from a family of point sets.

    With ``complete`` the family is closed under unions and intersections
    (and gets the empty and full sets); otherwise it must already be a
    topology and :class:`InvalidTopology` names the first failed axiom.
    """
    if n < 0:
        raise InvalidTopology("point count must be >= 0")
    family = set()
    for s in generating_sets:
        m = s if isinstance(s, int) else mask(s)
        if m >> n:
            raise InvalidTopology(f"set {members(m)} has points outside 0..{n - 1}")
        family.add(m)
    space = TopSpace(n, _neighbourhoods(n, family))
    if not complete:
        if 0 not in family or full(n) not in family:
            raise InvalidTopology("a topology must contain the empty and the full set")
        for a, b in itertools.combinations(family, 2):
            if a | b not in family:
                raise InvalidTopology(f"union of {members(a)} and {members(b)} is missing")
            if a & b not in family:
                raise InvalidTopology(f"intersection of {members(a)} and {members(b)} is missing")
    return space


def indiscrete(n: int) -> TopSpace:
    return TopSpace(n, (full(n),) * n)


def discrete(n: int) -> TopSpace:
    return TopSpace(n, tuple(1 << x for x in range(n)))


def sierpinski() -> TopSpace:
    """Opens {}, {1}, {0, 1}."""
    return TopSpace(2, (0b11, 0b10))


# ------------------------------------------------------------- operators

def closure(X: TopSpace, s: int) -> int:
    return sum(1 << x for x, u in enumerate(X.min_nbhd) if u & s)


def interior(X: TopSpace, s: int) -> int:
    return sum(1 << x for x, u in enumerate(X.min_nbhd) if u & ~s == 0)


def derived(X: TopSpace, s: int) -> int:
    """Limit points of ``s``: every punctured neighbourhood meets ``s``."""
    return sum(1 << x for x, u in enumerate(X.punctured) if u & s)


def is_dense(X: TopSpace, s: int, within: int | None = None) -> bool:
    """Whether ``s`` is dense in the subspace ``within`` (default: all of X)."""
    within = X.points if within is None else within
    return within & ~closure(X, s) == 0


def is_crowded_in(X: TopSpace, s: int) -> bool:
    return s & ~derived(X, s) == 0


def isolated_points(X: TopSpace) -> int:
    return X.points & ~derived(X, X.points)


def subspace(X: TopSpace, s: int) -> tuple[TopSpace, tuple[int, ...]]:
    """The subspace on ``s`` relabeled ``0..m-1``, with the original labels."""
    if s == 0:
        raise ValueError("subspace of the empty set")
    if s >> X.n:
        raise ValueError("subspace set leaves the space")
    labels = tuple(members(s))
    index = {p: i for i, p in enumerate(labels)}
    nb = []
    for p in labels:
        nb.append(sum(1 << index[q] for q in iter_bits(X.min_nbhd[p] & s)))
    return TopSpace(len(labels), tuple(nb)), labels


# -------------------------------------------------------- classification

@dataclass(frozen=True)
class Classification:
    is_TD: bool
    is_T0: bool
    is_T1: bool
    is_scattered: bool
    is_crowded: bool
    is_densely_discrete: bool
    is_door: bool
    isolated_points: tuple[int, ...]

    def to_json(self) -> dict:
        d = asdict(self)
        d["isolated_points"] = list(self.isolated_points)
        return d


def is_TD_by_derived(X: TopSpace) -> bool:
    """Every singleton's derived set contains its own derived set."""
    for x in range(X.n):
        d = derived(X, 1 << x)
        if derived(X, d) & ~d:
            return False
    return True


def is_TD_by_closure(X: TopSpace) -> bool:
    """No point lies in the closure of its own singleton's derived set."""
    return all(not closure(X, derived(X, 1 << x)) >> x & 1 for x in range(X.n))


def is_TD(X: TopSpace) -> bool:
    a, b = is_TD_by_derived(X), is_TD_by_closure(X)
    if a != b:
        raise AssertionError(f"T_D characterisations disagree on {X}")
    return a


def is_T0(X: TopSpace) -> bool:
    return len(set(X.min_nbhd)) == X.n


def is_T1(X: TopSpace) -> bool:
    return all(derived(X, 1 << x) == 0 for x in range(X.n))


def is_scattered(X: TopSpace) -> bool:
    """Peel off isolated points until nothing is left or a crowded core remains."""
    rest = X.points
    while rest:
        iso = sum(1 << x for x in iter_bits(rest) if X.min_nbhd[x] & rest == 1 << x)
        if not iso:
            return False
        rest &= ~iso
    return True


def is_crowded(X: TopSpace) -> bool:
    return derived(X, X.points) == X.points


def is_densely_discrete(X: TopSpace) -> bool:
    return closure(X, isolated_points(X)) == X.points


def is_door(X: TopSpace) -> bool:
    return all(X.is_open(s) or X.is_closed(s) for s in subsets(X.points))


def classify(X: TopSpace) -> Classification:
    return Classification(
        is_TD=is_TD(X),
        is_T0=is_T0(X),
        is_T1=is_T1(X),
        is_scattered=is_scattered(X),
        is_crowded=is_crowded(X),
        is_densely_discrete=is_densely_discrete(X),
        is_door=is_door(X),
        isolated_points=tuple(members(isolated_points(X))),
    )


# ---------------------------------------------------------- resolvability

def _minimal_opens(nbhd: Sequence[int], s: int) -> list[int]:
    """Minimal non-empty opens of the subspace ``s`` (pairwise disjoint)."""
    seen = 0
    out = []
    for x in iter_bits(s):
        if seen >> x & 1:
            continue
        u = nbhd[x] & s
        if all(nbhd[y] & s == u for y in iter_bits(u)):
            out.append(u)
            seen |= u
    return out


def _subspace_resolvable(nbhd: Sequence[int], s: int, k: int) -> bool:
    return all(popcount(m) >= k for m in _minimal_opens(nbhd, s))


def resolution(X: TopSpace, k: int, within: int | None = None) -> list[int] | None:
    """``k`` pairwise disjoint non-empty dense subsets of the subspace, or None.

    A subset is dense iff it meets every minimal non-empty open; those are
    pairwise disjoint in a finite space, so a resolution exists iff each of
    them has at least ``k`` points.  Points outside the minimal opens are
    left unassigned.
    """
    if k < 2:
        raise ValueError("resolvability needs k >= 2")
    s = X.points if within is None else within
    if s == 0:
        raise ValueError("resolvability of the empty space")
    cells = [0] * k
    for m in _minimal_opens(X.min_nbhd, s):
        pts = members(m)
        if len(pts) < k:
            return None
        for i, p in enumerate(pts):
            cells[min(i, k - 1)] |= 1 << p
    return cells


def k_resolvable(X: TopSpace, k: int) -> bool:
    return resolution(X, k) is not None


def resolvable_subspace(X: TopSpace, k: int) -> int | None:
    """Some non-empty ``k``-resolvable subspace (as a mask), or None."""
    if k < 2:
        raise ValueError("resolvability needs k >= 2")
    if X.n > 16:
        raise BudgetExceeded("hereditary irresolvability checks are capped at 16 points")
    for s in range(1, 1 << X.n):
        if _subspace_resolvable(X.min_nbhd, s, k):
            return s
    return None


def hereditarily_irresolvable(X: TopSpace, k: int = 2) -> bool:
    """No non-empty subspace of ``X`` is ``k``-resolvable (k-HI)."""
    return resolvable_subspace(X, k) is None


def resolvable_open(X: TopSpace) -> int | None:
    for o in sorted(X.opens):
        if o and _subspace_resolvable(X.min_nbhd, o, 2):
            return o
    return None


def openly_irresolvable(X: TopSpace) -> bool:
    """No non-empty open subspace is 2-resolvable."""
    return resolvable_open(X) is None


# ---------------------------------------------------------- frames bridge

def alexandrov_from_frame(frame: Frame) -> TopSpace:
    """The space whose opens are the up-sets of the relation."""
    reach = transitive_closure(frame).succ
    return TopSpace(frame.n, tuple(r | 1 << x for x, r in enumerate(reach)))


def specialization_frame(X: TopSpace) -> Frame:
    """Preorder with ``x <= y`` iff ``x`` is in the closure of ``{y}``."""
    return Frame(X.n, X.min_nbhd)


def homeomorphic(X: TopSpace, Y: TopSpace) -> bool:
    return X.n == Y.n and canonical_form(specialization_frame(X)) == \
        canonical_form(specialization_frame(Y))


# ------------------------------------------------------------ enumeration

def all_topologies(n: int) -> Iterator[TopSpace]:
    """Every topology on ``n`` labeled points, via specialization preorders."""
    if n > MAX_ENUM_POINTS:
        raise BudgetExceeded(f"topology enumeration capped at {MAX_ENUM_POINTS} points")
    for q in preorders(n):
        yield TopSpace(n, q.succ)


def topologies_by_families(n: int) -> Iterator[frozenset[int]]:
    """Open-set families of every topology on ``n`` points, by direct filtering.

    Scans all families of subsets that contain the empty and full sets and
    keeps those closed under pairwise union and intersection.
    """
    if n > MAX_FAMILY_POINTS:
        raise BudgetExceeded(f"family filtering capped at {MAX_FAMILY_POINTS} points")
    everything = full(n)
    middle = [s for s in range(1, everything)] if n > 0 else []
    for code in range(1 << len(middle)):
        fam = {0, everything}
        for i, s in enumerate(middle):
            if code >> i & 1:
                fam.add(s)
        if all(a | b in fam and a & b in fam for a, b in itertools.combinations(fam, 2)):
            yield frozenset(fam)


def spaces_up_to(max_points: int, min_points: int = 1) -> Iterator[TopSpace]:
    for n in range(min_points, max_points + 1):
        yield from all_topologies(n)
