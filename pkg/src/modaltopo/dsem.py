"""Topological semantics: derived-set (d) and closure (C) interpretations.

Under the d-semantics ``<>φ`` denotes the derived set of the truth set of
``φ``; under the C-semantics it denotes the closure.  On a finite space
both are relational semantics in disguise: ``x`` sees the punctured
minimal neighbourhood of ``x`` (d) or the whole minimal neighbourhood (C).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .bits import full, iter_bits, members, subsets
from .engine import (DEFAULT_BIT_BUDGET, Countermodel, VectorEvaluator, find_counterexample,
                     truth_set)
from .formula import Formula, variables
from .errors import NotTransitive
from .kripke import Frame, Violation, as_valuation, is_surjective, is_transitive
from .topo import TopSpace, closure, derived, interior

SEMANTICS = ("d", "c")
PULLBACK_BITS = 16


def _nbhd(space: TopSpace, semantics: str) -> tuple[int, ...]:
    if semantics == "d":
        return space.punctured
    if semantics == "c":
        return space.min_nbhd
    raise ValueError(f"semantics must be 'd' or 'c', got {semantics!r}")


@dataclass(frozen=True)
class TopoModel:
    space: TopSpace
    val: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "val", as_valuation(self.val, self.space.n))


def eval_d(model: TopoModel, phi: Formula) -> int:
    return truth_set(phi, model.space.punctured, model.val)


def eval_c(model: TopoModel, phi: Formula) -> int:
    return truth_set(phi, model.space.min_nbhd, model.val)


def evaluate(model: TopoModel, phi: Formula, semantics: str = "d") -> int:
    return truth_set(phi, _nbhd(model.space, semantics), model.val)


def countermodel(space: TopSpace, phi: Formula, semantics: str = "d",
                 bit_budget: int = DEFAULT_BIT_BUDGET) -> Countermodel | None:
    """A valuation and point where ``phi`` fails in ``space``, or None."""
    return find_counterexample(phi, _nbhd(space, semantics), bit_budget)


def d_valid(space: TopSpace, phi: Formula, bit_budget: int = DEFAULT_BIT_BUDGET) -> bool:
    return countermodel(space, phi, "d", bit_budget) is None


def c_valid(space: TopSpace, phi: Formula, bit_budget: int = DEFAULT_BIT_BUDGET) -> bool:
    return countermodel(space, phi, "c", bit_budget) is None


def interior_closure_matches_interior_derived(X: TopSpace) -> bool:
    """Whether int cl S = int de S for every subset S.

    This holds in every crowded T_D space; a finite space can satisfy it
    without being one, so it is a necessary condition only.
    """
    return all(interior(X, closure(X, s)) == interior(X, derived(X, s))
               for s in subsets(X.points))


# ------------------------------------------------------------ d-morphisms

@dataclass(frozen=True)
class DMorphism:
    f: tuple[int, ...]
    space: TopSpace
    frame: Frame

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        if len(self.f) != self.space.n:
            raise ValueError("map must be defined on every point of the space")
        if any(not 0 <= w < self.frame.n for w in self.f):
            raise ValueError("map value outside the frame")

    def fiber(self, w: int) -> int:
        return sum(1 << x for x, v in enumerate(self.f) if v == w)

    def preimage(self, s: int) -> int:
        return sum(1 << x for x, v in enumerate(self.f) if s >> v & 1)

    def image(self, s: int) -> int:
        out = 0
        for x in iter_bits(s):
            out |= 1 << self.f[x]
        return out

    @property
    def surjective(self) -> bool:
        return is_surjective(self.f, self.frame.n)


def d_morphism_violation(dm: DMorphism) -> Violation | None:
    """First failed d-morphism condition, or None.

    Checks continuity on the basic opens ``{w} ∪ R(w)``, openness on the
    minimal neighbourhoods (images commute with unions), that fibers over
    reflexive points are crowded and that fibers over irreflexive points
    are discrete.
    """
    frame, space = dm.frame, dm.space
    if not is_transitive(frame):
        raise NotTransitive("d-morphism target must be transitive")
    succ = frame.succ
    for w in range(frame.n):
        basic = succ[w] | 1 << w
        pre = dm.preimage(basic)
        if not space.is_open(pre):
            return Violation("continuity", {"w": w, "preimage": members(pre)})
    for x, u in enumerate(space.min_nbhd):
        img = dm.image(u)
        for v in iter_bits(img):
            if succ[v] & ~img:
                return Violation("openness", {"x": x, "image": members(img)})
    for w in range(frame.n):
        fib = dm.fiber(w)
        de = derived(space, fib)
        if succ[w] >> w & 1:
            if fib & ~de:
                return Violation("crowded-fiber", {"w": w, "fiber": members(fib)})
        elif fib & de:
            return Violation("discrete-fiber", {"w": w, "fiber": members(fib)})
    return None


def is_d_morphism(dm: DMorphism) -> bool:
    return d_morphism_violation(dm) is None


@dataclass(frozen=True)
class TransferVerdict:
    """Outcome of comparing d-validity on a space with validity on its image.

    ``truth_preserved`` records whether, for every frame valuation V, the
    d-truth set under the pulled-back valuation equals the preimage of the
    frame truth set (None when that check was over budget).
    """

    consistent: bool
    space_valid: bool
    frame_valid: bool
    truth_preserved: bool | None
    witness: dict | None = None


def validity_transfer_check(dm: DMorphism, phi: Formula,
                            bit_budget: int = DEFAULT_BIT_BUDGET) -> TransferVerdict:
    """Evaluate both sides of the d-morphism transfer for ``phi``.

    An inconsistent verdict means a bug in this package, not in the
    mathematics.  Raises ValueError unless ``dm`` is a surjective d-morphism.
    """
    if not dm.surjective:
        raise ValueError("validity transfer needs a surjective map")
    bad = d_morphism_violation(dm)
    if bad is not None:
        raise ValueError(f"not a d-morphism: {bad}")

    space_cm = countermodel(dm.space, phi, "d", bit_budget)
    names = sorted(variables(phi))
    W = dm.frame.n
    frame_bits = len(names) * W
    truth_preserved = None
    frame_cm = None
    witness = None
    if frame_bits <= min(bit_budget, PULLBACK_BITS):
        truth_preserved, frame_cm, witness = _pullback_check(dm, phi, names)
    else:
        frame_cm = find_counterexample(phi, dm.frame.succ, bit_budget)
    space_valid = space_cm is None
    frame_valid = frame_cm is None
    consistent = (not space_valid or frame_valid) and truth_preserved is not False
    if witness is None and not (not space_valid or frame_valid):
        witness = {"frame_countermodel": frame_cm.to_json()}
    return TransferVerdict(consistent, space_valid, frame_valid, truth_preserved, witness)


def _pullback_check(dm: DMorphism, phi: Formula, names: Sequence[str]):
    W = dm.frame.n
    total = 1 << (len(names) * W)
    idx = np.arange(total, dtype=np.uint64)
    wfull = np.uint64(full(W))
    frame_val = {name: (idx >> np.uint64(i * W)) & wfull for i, name in enumerate(names)}
    pull = np.array([dm.preimage(m) for m in range(1 << W)], dtype=np.uint64)
    space_val = {name: pull[a] for name, a in frame_val.items()}
    frame_truth = VectorEvaluator(dm.frame.succ).evaluate(phi, frame_val, total)
    space_truth = VectorEvaluator(dm.space.punctured).evaluate(phi, space_val, total)
    mismatch = np.flatnonzero(pull[frame_truth] != space_truth)
    frame_bad = np.flatnonzero(frame_truth != wfull)
    frame_cm = None
    if frame_bad.size:
        v = int(frame_bad[0])
        frame_cm = Countermodel({name: (v >> (i * W)) & full(W) for i, name in enumerate(names)},
                                members(full(W) & ~int(frame_truth[v]))[0])
    if mismatch.size:
        v = int(mismatch[0])
        witness = {"frame_valuation": {name: members((v >> (i * W)) & full(W))
                                       for i, name in enumerate(names)},
                   "frame_truth": members(int(frame_truth[v])),
                   "space_truth": members(int(space_truth[v]))}
        return False, frame_cm, witness
    return True, frame_cm, None
