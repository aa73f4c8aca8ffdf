"""Truth-set evaluation shared by relational and topological semantics.

All three semantics in this package have the same shape: a point ``x``
satisfies ``<>φ`` iff some point of a fixed set ``nbhd[x]`` satisfies ``φ``,
and ``[]φ`` iff every point of ``nbhd[x]`` does.  For a frame ``nbhd[x]`` is
the successor set, for the derived-set semantics it is the punctured
minimal neighbourhood, for the closure semantics the minimal neighbourhood.

Two evaluators live here.  :func:`truth_set` works on one valuation with
Python integers.  :func:`find_counterexample` enumerates every valuation of
the formula's variables at once with numpy arrays of masks, in chunks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .bits import full, lowest, members
from .errors import BudgetExceeded, UnboundVariable
from .formula import And, Bot, Box, Dia, Formula, Imp, Not, Or, Top, Var, variables

DEFAULT_BIT_BUDGET = 24
CHUNK = 1 << 14
_TABLE_MAX_POINTS = 16
MAX_POINTS = 63


@dataclass(frozen=True)
class Countermodel:
    """A valuation and a point at which a formula is false."""

    valuation: dict[str, int]
    point: int

    def to_json(self) -> dict:
        return {"valuation": {k: members(v) for k, v in sorted(self.valuation.items())},
                "point": self.point}


def dia_set(nbhd: Sequence[int], s: int) -> int:
    out = 0
    for x, nb in enumerate(nbhd):
        if nb & s:
            out |= 1 << x
    return out


def box_set(nbhd: Sequence[int], s: int) -> int:
    out = 0
    for x, nb in enumerate(nbhd):
        if nb & ~s == 0:
            out |= 1 << x
    return out


def truth_set(phi: Formula, nbhd: Sequence[int], val: Mapping[str, int]) -> int:
    """Truth set of ``phi`` under a single valuation (masks)."""
    n = len(nbhd)
    everything = full(n)
    memo: dict[int, int] = {}

    def ev(f: Formula) -> int:
        key = id(f)
        if key in memo:
            return memo[key]
        if isinstance(f, Var):
            try:
                r = val[f.name] & everything
            except KeyError:
                raise UnboundVariable(f.name) from None
        elif isinstance(f, Top):
            r = everything
        elif isinstance(f, Bot):
            r = 0
        elif isinstance(f, Not):
            r = everything & ~ev(f.arg)
        elif isinstance(f, And):
            r = ev(f.left) & ev(f.right)
        elif isinstance(f, Or):
            r = ev(f.left) | ev(f.right)
        elif isinstance(f, Imp):
            r = (everything & ~ev(f.left)) | ev(f.right)
        elif isinstance(f, Dia):
            r = dia_set(nbhd, ev(f.arg))
        elif isinstance(f, Box):
            r = box_set(nbhd, ev(f.arg))
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[key] = r
        return r

    return ev(phi)


class VectorEvaluator:
    """Evaluates formulas over arrays of valuations for one structure."""

    def __init__(self, nbhd: Sequence[int]):
        n = len(nbhd)
        if n > MAX_POINTS:
            raise BudgetExceeded(f"{n} points exceeds the {MAX_POINTS}-point limit")
        self.n = n
        self.nbhd = tuple(nbhd)
        self.full = np.uint64(full(n))
        self._dia = self._box = None
        if n <= _TABLE_MAX_POINTS:
            ms = np.arange(1 << n, dtype=np.uint64)
            dia = np.zeros(1 << n, dtype=np.uint64)
            box = np.zeros(1 << n, dtype=np.uint64)
            for x, nb in enumerate(self.nbhd):
                nbu = np.uint64(nb)
                bit = np.uint64(1 << x)
                dia |= np.where((ms & nbu) != 0, bit, np.uint64(0))
                box |= np.where((ms & nbu) == nbu, bit, np.uint64(0))
            self._dia, self._box = dia, box

    def dia(self, a: np.ndarray) -> np.ndarray:
        if self._dia is not None:
            return self._dia[a]
        out = np.zeros_like(a)
        for x, nb in enumerate(self.nbhd):
            nbu = np.uint64(nb)
            out |= np.where((a & nbu) != 0, np.uint64(1 << x), np.uint64(0))
        return out

    def box(self, a: np.ndarray) -> np.ndarray:
        if self._box is not None:
            return self._box[a]
        out = np.zeros_like(a)
        for x, nb in enumerate(self.nbhd):
            nbu = np.uint64(nb)
            out |= np.where((a & nbu) == nbu, np.uint64(1 << x), np.uint64(0))
        return out

    def evaluate(self, phi: Formula, val: Mapping[str, np.ndarray], size: int) -> np.ndarray:
        memo: dict[int, np.ndarray] = {}
        everything = self.full

        def ev(f: Formula) -> np.ndarray:
            key = id(f)
            if key in memo:
                return memo[key]
            if isinstance(f, Var):
                try:
                    r = val[f.name]
                except KeyError:
                    raise UnboundVariable(f.name) from None
            elif isinstance(f, Top):
                r = np.full(size, everything, dtype=np.uint64)
            elif isinstance(f, Bot):
                r = np.zeros(size, dtype=np.uint64)
            elif isinstance(f, Not):
                r = ev(f.arg) ^ everything
            elif isinstance(f, And):
                r = ev(f.left) & ev(f.right)
            elif isinstance(f, Or):
                r = ev(f.left) | ev(f.right)
            elif isinstance(f, Imp):
                r = (ev(f.left) ^ everything) | ev(f.right)
            elif isinstance(f, Dia):
                r = self.dia(ev(f.arg))
            elif isinstance(f, Box):
                r = self.box(ev(f.arg))
            else:
                raise TypeError(f"not a formula: {f!r}")
            memo[key] = r
            return r

        return ev(phi)


def find_counterexample(phi: Formula, nbhd: Sequence[int],
                        bit_budget: int = DEFAULT_BIT_BUDGET,
                        evaluator: VectorEvaluator | None = None) -> Countermodel | None:
    """First (valuation, point) falsifying ``phi``, or None if ``phi`` is valid.

    Valuations are enumerated over the variables of ``phi`` in sorted order;
    valuation number ``v`` gives variable ``i`` the mask ``(v >> i*n) & full``.
    """
    n = len(nbhd)
    names = sorted(variables(phi))
    bits = len(names) * n
    if bits > bit_budget:
        raise BudgetExceeded(
            f"{len(names)} variables x {n} points = {bits} bits exceeds budget {bit_budget}")
    if n == 0:
        return None
    ev = evaluator or VectorEvaluator(nbhd)
    total = 1 << bits
    everything = np.uint64(full(n))
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        idx = np.arange(start, stop, dtype=np.uint64)
        val = {name: (idx >> np.uint64(i * n)) & everything for i, name in enumerate(names)}
        result = ev.evaluate(phi, val, stop - start)
        bad = np.flatnonzero(result != everything)
        if bad.size:
            j = int(bad[0])
            v = start + j
            valuation = {name: (v >> (i * n)) & full(n) for i, name in enumerate(names)}
            point = lowest(full(n) & ~int(result[j]))
            return Countermodel(valuation, point)
    return None
