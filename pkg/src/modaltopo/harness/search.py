"""Bounded countermodel search over enumerated frames or spaces.

Running out of structures is not a proof of validity in the logic: the
search only reports that nothing up to the size bound falsifies the
formula.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .. import dsem, kripke
from ..engine import DEFAULT_BIT_BUDGET, Countermodel
from ..errors import BudgetExceeded
from ..formula import Formula
from ..kripke import Frame, FrameConstraints, enumerate_frames
from ..topo import TopSpace, classify

MODES = ("frame", "space-d", "space-c")
MAX_SPACE_POINTS = 6


@dataclass(frozen=True)
class SearchSpec:
    formula: Formula
    max_size: int
    constraints: FrameConstraints = field(
        default_factory=lambda: FrameConstraints(transitive=True, iso_dedup=True))
    mode: str = "frame"
    space_filter: dict[str, bool] | None = None
    bit_budget: int = DEFAULT_BIT_BUDGET

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")


@dataclass
class SearchResult:
    found: bool
    max_size: int
    examined: int
    structure: Frame | TopSpace | None = None
    countermodel: Countermodel | None = None

    @property
    def message(self) -> str:
        if self.found:
            return f"countermodel on {self.structure.n} points"
        return f"no countermodel up to {self.max_size} points"

    def to_json(self) -> dict:
        out = {"found": self.found, "max_size": self.max_size, "examined": self.examined,
               "message": self.message}
        if self.found:
            out["structure"] = self.structure.to_json()
            out["countermodel"] = self.countermodel.to_json()
        return out


def _spaces(spec: SearchSpec) -> Iterator[TopSpace]:
    if spec.max_size > MAX_SPACE_POINTS:
        raise BudgetExceeded(f"space search capped at {MAX_SPACE_POINTS} points")
    # homeomorphism classes of finite spaces = isomorphism classes of preorders
    for q in enumerate_frames(spec.max_size, transitive=True, reflexive=True, iso_dedup=True):
        X = TopSpace(q.n, q.succ)
        if spec.space_filter:
            flags = classify(X)
            if any(getattr(flags, k) != v for k, v in spec.space_filter.items()):
                continue
        yield X


def countermodel_search(spec: SearchSpec) -> SearchResult:
    examined = 0
    if spec.mode == "frame":
        for frame in enumerate_frames(spec.max_size, spec.constraints):
            examined += 1
            cm = kripke.countermodel(frame, spec.formula, spec.bit_budget)
            if cm is not None:
                return SearchResult(True, spec.max_size, examined, frame, cm)
        return SearchResult(False, spec.max_size, examined)
    semantics = spec.mode[-1]
    for X in _spaces(spec):
        examined += 1
        cm = dsem.countermodel(X, spec.formula, semantics, spec.bit_budget)
        if cm is not None:
            return SearchResult(True, spec.max_size, examined, X, cm)
    return SearchResult(False, spec.max_size, examined)
