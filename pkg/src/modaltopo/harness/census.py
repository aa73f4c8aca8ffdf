"""One row per labeled topology: classification flags and axiom validity."""
from __future__ import annotations

import csv
import io

from .. import dsem, topo
from ..bits import members
from ..errors import BudgetExceeded
from ..formula import AXIOM_NAMES, named_axiom, scheme_C
from ..kripke import canonical_form
from ..topo import all_topologies, specialization_frame

MAX_CENSUS_POINTS = 4
FLAGS = ("TD", "T0", "T1", "scattered", "crowded", "densely_discrete", "door",
         "HI2", "HI3", "OI")


def _formulas():
    out = [(name, named_axiom(name)) for name in AXIOM_NAMES]
    out += [(f"C{n}", scheme_C(n)) for n in (1, 2)]
    return out


def census(max_points: int) -> list[dict]:
    """Rows for every topology on 1..max_points points.

    ``class`` numbers homeomorphism classes in order of first appearance.
    """
    if max_points > MAX_CENSUS_POINTS:
        raise BudgetExceeded(f"census is capped at {MAX_CENSUS_POINTS} points")
    formulas = _formulas()
    classes: dict = {}
    rows = []
    for n in range(1, max_points + 1):
        for X in all_topologies(n):
            key = canonical_form(specialization_frame(X))
            cls = classes.setdefault(key, len(classes))
            c = topo.classify(X)
            row = {"points": n,
                   "opens": " ".join("{" + ",".join(map(str, members(o))) + "}"
                                     for o in sorted(X.opens)),
                   "class": cls,
                   "TD": c.is_TD, "T0": c.is_T0, "T1": c.is_T1,
                   "scattered": c.is_scattered, "crowded": c.is_crowded,
                   "densely_discrete": c.is_densely_discrete, "door": c.is_door,
                   "HI2": topo.hereditarily_irresolvable(X, 2),
                   "HI3": topo.hereditarily_irresolvable(X, 3),
                   "OI": topo.openly_irresolvable(X)}
            for name, phi in formulas:
                row[f"d:{name}"] = dsem.d_valid(X, phi)
                row[f"c:{name}"] = dsem.c_valid(X, phi)
            rows.append(row)
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: int(v) if isinstance(v, bool) else v for k, v in row.items()})
    return buf.getvalue()
