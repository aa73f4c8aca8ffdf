"""Exhaustive and sampled property drivers.

Each suite checks one equivalence or implication over every structure up
to a size cap (or over a seeded random sample) and returns a
:class:`Report`.  Implications also count how often their hypothesis held;
a suite whose hypothesis never fires is reported VACUOUS, not PASS.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from .. import dsem, topo
from ..bits import full, members, popcount
from ..engine import truth_set
from ..formula import Formula, named_axiom, parse, random_formula, scheme_C
from ..glue import ClusterSpace, default_assignment, glue, non_closed_singleton
from ..kripke import (ClusterKind, Frame, bounded_morphism_violation, circumference, clusters,
                      countermodel, enumerate_frames, is_surjective, valid_in_frame)
from ..topo import TopSpace, alexandrov_from_frame, spaces_up_to

PASS, FAIL, VACUOUS = "PASS", "FAIL", "VACUOUS"


@dataclass
class Report:
    property_id: str
    description: str
    instances: int = 0
    coverage: int | None = None
    verdict: str = PASS
    witness: dict | None = None
    seed: int | None = None
    cap: int | None = None
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def fail(self, witness: dict):
        if self.verdict != FAIL:
            self.verdict = FAIL
            self.witness = witness

    def to_json(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        cov = "" if self.coverage is None else f", coverage {self.coverage}"
        text = (f"{self.verdict:8s} {self.property_id}: {self.instances} instances{cov}"
                f" (cap {self.cap}, seed {self.seed}, {self.seconds:.1f}s)")
        for note in self.notes:
            text += f"\n         note: {note}"
        if self.witness is not None:
            text += f"\n         witness: {self.witness}"
        return text


def _space_json(X: TopSpace) -> dict:
    return X.to_json()


def _witness(structure: Frame | TopSpace, phi: Formula | None = None,
             semantics: str = "frame", **extra) -> dict:
    """Serializable witness; carries a countermodel when ``phi`` fails."""
    key = "frame" if isinstance(structure, Frame) else "space"
    w = {key: structure.to_json(), **extra}
    if phi is not None:
        w["formula"] = str(phi)
        w["semantics"] = semantics
        if isinstance(structure, Frame):
            cm = countermodel(structure, phi)
        else:
            cm = dsem.countermodel(structure, phi, semantics)
        if cm is not None:
            w["countermodel"] = cm.to_json()
    return w


def _transitive_frames(cap: int, **kw):
    return enumerate_frames(cap, transitive=True, **kw)


# ------------------------------------------------------------ frame suites

def circumference_scheme(cap: int = 4, seed: int = 0) -> Report:
    r = Report("circumference-scheme",
               "transitive frames: the circumference scheme of index n is valid "
               "iff circumference <= n (n = 0..3)", cap=cap, seed=seed)
    schemes = [(n, scheme_C(n)) for n in range(4)]
    for frame in _transitive_frames(cap):
        circ = circumference(frame)
        for n, phi in schemes:
            r.instances += 1
            valid = valid_in_frame(frame, phi)
            if valid != (circ <= n):
                r.fail(_witness(frame, phi, n=n, valid=valid, circumference=circ))
    return r


def singleton_clusters_grz(cap: int = 4, seed: int = 0) -> Report:
    r = Report("singleton-clusters-grz",
               "transitive frames: Grz-box is valid iff every cluster is a singleton",
               cap=cap, seed=seed)
    grz = named_axiom("Grz")
    for frame in _transitive_frames(cap):
        r.instances += 1
        singletons = all(popcount(c) == 1 for c in clusters(frame).clusters)
        if valid_in_frame(frame, grz) != singletons:
            r.fail(_witness(frame, grz, singletons=singletons))
    return r


def d_c1_implies_m(cap: int = 4, seed: int = 0) -> Report:
    r = Report("d-c1-implies-m",
               "transitive frames validating D and the index-1 circumference scheme "
               "validate M", cap=cap, seed=seed)
    D, M, C1 = named_axiom("D"), named_axiom("M"), scheme_C(1)
    r.coverage = 0
    for frame in _transitive_frames(cap):
        r.instances += 1
        if valid_in_frame(frame, D) and valid_in_frame(frame, C1):
            r.coverage += 1
            if not valid_in_frame(frame, M):
                r.fail(_witness(frame, M))
    if r.coverage == 0 and r.verdict == PASS:
        r.verdict = VACUOUS
    return r


def _maps(n_src: int, n_tgt: int):
    if n_src == 0:
        yield ()
        return
    for rest in _maps(n_src - 1, n_tgt):
        for v in range(n_tgt):
            yield rest + (v,)


def bounded_morphism_preservation(cap: int = 3, seed: int = 0, formulas: int = 5) -> Report:
    r = Report("bounded-morphism-preservation",
               "surjective bounded morphisms between transitive frames carry "
               "validity of random formulas from source to target", cap=cap, seed=seed)
    rng = random.Random(seed)
    frames = list(_transitive_frames(cap, iso_dedup=True))
    r.coverage = 0
    for src in frames:
        for tgt in frames:
            if tgt.n > src.n:
                continue
            for f in _maps(src.n, tgt.n):
                if not is_surjective(f, tgt.n) or bounded_morphism_violation(f, src, tgt):
                    continue
                r.coverage += 1
                for _ in range(formulas):
                    phi = random_formula(rng, 4, ("p", "q"))
                    r.instances += 1
                    if valid_in_frame(src, phi) and not valid_in_frame(tgt, phi):
                        r.fail(_witness(tgt, phi, source=src.to_json(), map=list(f)))
    return r


def preorder_circumference_hi(cap: int = 5, seed: int = 0) -> Report:
    r = Report("preorder-circumference-hi",
               "reflexive transitive frames: circumference <= n iff the up-set "
               "topology is hereditarily (n+1)-irresolvable (n = 1..3)", cap=cap, seed=seed)
    for frame in enumerate_frames(cap, transitive=True, reflexive=True):
        circ = circumference(frame)
        X = alexandrov_from_frame(frame)
        for n in (1, 2, 3):
            r.instances += 1
            hi = topo.hereditarily_irresolvable(X, n + 1)
            if hi != (circ <= n):
                r.fail({"frame": frame.to_json(), "n": n, "hi": hi, "circumference": circ})
    return r


# ------------------------------------------------------------ space suites

def esakia_td(cap: int = 4, seed: int = 0) -> Report:
    r = Report("esakia-td", "spaces: axiom 4 is d-valid iff the space is T_D, and the two "
               "T_D characterisations agree", cap=cap, seed=seed)
    four = named_axiom("4")
    for X in spaces_up_to(cap):
        r.instances += 1
        a, b = topo.is_TD_by_derived(X), topo.is_TD_by_closure(X)
        valid = dsem.d_valid(X, four)
        if not (a == b == valid):
            r.fail(_witness(X, four, "d", by_derived=a, by_closure=b, d_valid=valid))
    return r


def crowded_d(cap: int = 4, seed: int = 0) -> Report:
    r = Report("crowded-d", "spaces: D is d-valid iff the space is crowded", cap=cap, seed=seed)
    D = named_axiom("D")
    for X in spaces_up_to(cap):
        r.instances += 1
        if dsem.d_valid(X, D) != topo.is_crowded(X):
            r.fail(_witness(X, D, "d", crowded=topo.is_crowded(X)))
    return r


def densely_discrete_e(cap: int = 4, seed: int = 0) -> Report:
    r = Report("densely-discrete-e", "spaces: E is d-valid iff isolated points are dense, iff "
               "(X - de X) | de(X - de X) = X", cap=cap, seed=seed)
    E = named_axiom("E")
    for X in spaces_up_to(cap):
        r.instances += 1
        iso = X.points & ~topo.derived(X, X.points)
        identity = (iso | topo.derived(X, iso)) == X.points
        a, b = dsem.d_valid(X, E), topo.is_densely_discrete(X)
        if not (a == b == identity):
            r.fail(_witness(X, E, "d", densely_discrete=b, identity=identity))
    return r


def hi_scheme(cap: int = 4, seed: int = 0) -> Report:
    r = Report("hi-scheme", "spaces: the circumference scheme of index n is d-valid iff "
               "C-valid iff hereditarily (n+1)-irresolvable (n = 1, 2)", cap=cap, seed=seed)
    schemes = [(n, scheme_C(n)) for n in (1, 2)]
    for X in spaces_up_to(cap):
        for n, phi in schemes:
            r.instances += 1
            d, c = dsem.d_valid(X, phi), dsem.c_valid(X, phi)
            hi = topo.hereditarily_irresolvable(X, n + 1)
            if not (d == c == hi):
                r.fail(_witness(X, phi, "d" if d != hi else "c", n=n, d=d, c=c, hi=hi))
    return r


def open_irresolvability_scheme(cap: int = 4, seed: int = 0) -> Report:
    r = Report("open-irresolvability-scheme", "spaces: openly irresolvable iff "
               "<*>([*]p | [*]~p) is d-valid", cap=cap, seed=seed)
    phi = named_axiom("M_star")
    for X in spaces_up_to(cap):
        r.instances += 1
        if topo.openly_irresolvable(X) != dsem.d_valid(X, phi):
            r.fail(_witness(X, phi, "d", oi=topo.openly_irresolvable(X)))
    return r


def crowded_oi_m(cap: int = 5, seed: int = 0) -> Report:
    r = Report("crowded-oi-m", "spaces: crowded and openly irresolvable implies M d-valid",
               cap=cap, seed=seed)
    M = named_axiom("M")
    r.coverage = 0
    for X in spaces_up_to(cap):
        r.instances += 1
        if topo.is_crowded(X) and topo.openly_irresolvable(X):
            r.coverage += 1
            if not dsem.d_valid(X, M):
                r.fail(_witness(X, M, "d"))
    if r.coverage == 0 and r.verdict == PASS:
        r.verdict = VACUOUS
        r.notes.append("no finite crowded space is openly irresolvable at this size")
    # the converse fails: the two-point indiscrete space validates M but is not OI
    X = topo.indiscrete(2)
    if not (dsem.d_valid(X, M) and not topo.openly_irresolvable(X)):
        r.fail({"converse_counterexample": _space_json(X)})
    else:
        r.notes.append("converse fails on the 2-point indiscrete space (checked)")
    return r


def scattered_loeb(cap: int = 4, seed: int = 0) -> Report:
    r = Report("scattered-loeb", "spaces: Loeb is d-valid iff the space is scattered",
               cap=cap, seed=seed)
    loeb = named_axiom("Loeb")
    for X in spaces_up_to(cap):
        r.instances += 1
        if dsem.d_valid(X, loeb) != topo.is_scattered(X):
            r.fail(_witness(X, loeb, "d", scattered=topo.is_scattered(X)))
    return r


def crowded_td_identities(cap: int = 5, seed: int = 0) -> Report:
    r = Report("crowded-td-identities",
               "spaces that are crowded and T_D satisfy int cl S = int de S and the "
               "starred/unstarred M forms agree; T_D spaces validating M are crowded "
               "and openly irresolvable", cap=cap, seed=seed)
    M, M_dia, M_star = named_axiom("M"), named_axiom("M_dia"), named_axiom("M_star")
    r.coverage = 0
    for X in spaces_up_to(cap):
        r.instances += 1
        td = topo.is_TD(X)
        if not td:
            continue
        crowded = topo.is_crowded(X)
        if crowded:
            r.coverage += 1
            if not dsem.interior_closure_matches_interior_derived(X):
                r.fail({"space": _space_json(X), "failed": "int cl = int de"})
            for s in range(1 << X.n):
                model = dsem.TopoModel(X, {"p": s})
                if dsem.eval_d(model, M_star) != dsem.eval_d(model, M_dia):
                    r.fail({"space": _space_json(X), "failed": "M forms", "p": members(s)})
        if dsem.d_valid(X, M):
            r.coverage += 1
            if not (crowded and topo.openly_irresolvable(X)):
                r.fail({"space": _space_json(X), "failed": "M implies crowded OI"})
    if r.coverage == 0 and r.verdict == PASS:
        r.verdict = VACUOUS
        r.notes.append("no finite space up to the cap is crowded and T_D, "
                       "or T_D and d-validates M")
    return r


def no_crowded_td(cap: int = 5, seed: int = 0) -> Report:
    r = Report("no-crowded-td", "no finite space is both crowded and T_D", cap=cap, seed=seed)
    for X in spaces_up_to(cap):
        r.instances += 1
        if topo.is_crowded(X) and topo.is_TD(X):
            r.fail({"space": _space_json(X)})
    return r


def topology_laws(cap: int = 4, seed: int = 0) -> Report:
    r = Report("topology-laws", "closure operator laws, open-set trace laws, dense/crowded "
               "traces on opens, resolvability monotonicity, HI => T_D, "
               "scattered => HI => OI", cap=cap, seed=seed)
    for X in spaces_up_to(cap):
        everything = X.points
        opens = sorted(X.opens)
        hi = topo.hereditarily_irresolvable(X, 2)
        scattered = topo.is_scattered(X)
        oi = topo.openly_irresolvable(X)
        if (hi and not topo.is_TD(X)) or (scattered and not hi) or (hi and not oi):
            r.fail({"space": _space_json(X), "hi": hi, "scattered": scattered, "oi": oi})
        for k in range(2, X.n + 1):
            if topo.k_resolvable(X, k + 1) and not topo.k_resolvable(X, k):
                r.fail({"space": _space_json(X), "k": k})
        for s in range(1 << X.n):
            r.instances += 1
            cl = topo.closure(X, s)
            if s & ~cl or topo.closure(X, cl) != cl:
                r.fail({"space": _space_json(X), "S": members(s), "law": "closure"})
            if cl != s | topo.derived(X, s):
                r.fail({"space": _space_json(X), "S": members(s), "law": "cl = S | de"})
            if topo.interior(X, s) != everything & ~topo.closure(X, everything & ~s):
                r.fail({"space": _space_json(X), "S": members(s), "law": "duality"})
            dense = cl == everything
            crowded = topo.is_crowded_in(X, s)
            for o in opens:
                if o & cl & ~topo.closure(X, o & s):
                    r.fail({"space": _space_json(X), "S": members(s), "O": members(o),
                            "law": "O & cl S <= cl(O & S)"})
                if o & topo.derived(X, s) & ~topo.derived(X, o & s):
                    r.fail({"space": _space_json(X), "S": members(s), "O": members(o),
                            "law": "O & de S <= de(O & S)"})
                if dense and o and not topo.is_dense(X, o & s, within=o):
                    r.fail({"space": _space_json(X), "S": members(s), "O": members(o),
                            "law": "dense trace"})
                if crowded and not topo.is_crowded_in(X, o & s):
                    r.fail({"space": _space_json(X), "S": members(s), "O": members(o),
                            "law": "crowded trace"})
    return r


# ------------------------------------------------------------ glue suites

def gluing_d_morphism(cap: int = 4, seed: int = 0, formulas: int = 50) -> Report:
    r = Report("gluing-d-morphism", "transitive frames with the default assignment: the "
               "glued map is a d-morphism and d-validity transfers to the frame",
               cap=cap, seed=seed)
    rng = random.Random(seed)
    r.coverage = 0
    for frame in _transitive_frames(cap):
        g = glue(frame, default_assignment(frame, 2))
        dm = dsem.DMorphism(g.f, g.space, frame)
        bad = dsem.d_morphism_violation(dm)
        r.instances += 1
        if bad is not None:
            r.fail({"frame": frame.to_json(), "violation": str(bad)})
            continue
        for _ in range(formulas):
            phi = random_formula(rng, 4, ("p", "q"))
            verdict = dsem.validity_transfer_check(dm, phi)
            r.instances += 1
            if verdict.space_valid:
                r.coverage += 1
            if not verdict.consistent:
                r.fail({"frame": frame.to_json(), "formula": str(phi),
                        "verdict": asdict(verdict)})
    return r


def _random_partition(rng: random.Random, n: int, k: int) -> list[int]:
    """A random surjection of points 0..n-1 onto k non-empty cells."""
    labels = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
    rng.shuffle(labels)
    cells = [0] * k
    for x, c in enumerate(labels):
        cells[c] |= 1 << x
    return cells


def _random_assignment(rng: random.Random, frame: Frame, pool: list[TopSpace]):
    dec = clusters(frame)
    out = {}
    for c in dec.clusters:
        ws = members(c)
        choices = [X for X in pool if X.n >= len(ws)]
        X = rng.choice(choices)
        cells = _random_partition(rng, X.n, len(ws))
        out[c] = ClusterSpace(X, dict(zip(ws, cells)))
    return out


def _hi_pool(max_points: int, k: int) -> list[TopSpace]:
    return [X for X in spaces_up_to(max_points) if topo.hereditarily_irresolvable(X, k)]


def gluing_preserves_hi(cap: int = 3, seed: int = 0, samples: int = 200,
                        cluster_cap: int = 4) -> Report:
    r = Report("gluing-preserves-hi", "gluing cluster spaces that are all n-HI gives an "
               "n-HI space (n = 2 sampled with arbitrary partitions; n = 3 with "
               "crowded dense cells)", cap=cap, seed=seed)
    rng = random.Random(seed)
    frames = list(_transitive_frames(cap))
    pool2 = _hi_pool(cluster_cap, 2)
    for _ in range(samples):
        frame = rng.choice(frames)
        assignment = _random_assignment(rng, frame, pool2)
        g = glue(frame, assignment, strict=False)
        r.instances += 1
        if not topo.hereditarily_irresolvable(g.space, 2):
            r.fail({"frame": frame.to_json(), "n": 2, "glued": _space_json(g.space)})
    # strict instances for n = 3: a simple or 2-element cluster can use an
    # indiscrete space whose cells have 2 points and which is still 3-HI
    r.coverage = 0
    pool3 = _hi_pool(cluster_cap, 3)
    for frame in frames:
        dec = clusters(frame)
        assignment = {}
        for c, kind in zip(dec.clusters, dec.kinds):
            ws = members(c)
            if kind is ClusterKind.DEGENERATE:
                assignment[c] = ClusterSpace(TopSpace(1, (1,)), {ws[0]: 1})
                continue
            fits = [X for X in pool3 if X.n == 2 * len(ws) and X.min_nbhd == (full(X.n),) * X.n]
            if not fits:
                break
            X = fits[0]
            assignment[c] = ClusterSpace(X, {w: 0b11 << (2 * i) for i, w in enumerate(ws)})
        else:
            g = glue(frame, assignment, strict=True)
            r.coverage += 1
            r.instances += 1
            if not topo.hereditarily_irresolvable(g.space, 3):
                r.fail({"frame": frame.to_json(), "n": 3, "glued": _space_json(g.space)})
    return r


def gluing_preserves_td(cap: int = 3, seed: int = 0, samples: int = 200,
                        cluster_cap: int = 4) -> Report:
    r = Report("gluing-preserves-td", "gluing T_D cluster spaces gives a T_D space "
               "(all irreflexive frames strictly; sampled frames with arbitrary "
               "partitions)", cap=cap, seed=seed)
    rng = random.Random(seed)
    frames = list(_transitive_frames(cap))
    r.coverage = 0
    for frame in frames:
        if all(k is ClusterKind.DEGENERATE for k in clusters(frame).kinds):
            r.coverage += 1
            r.instances += 1
            if not topo.is_TD(glue(frame).space):
                r.fail({"frame": frame.to_json(), "mode": "strict"})
    pool = [X for X in spaces_up_to(cluster_cap) if topo.is_TD(X)]
    for _ in range(samples):
        frame = rng.choice(frames)
        g = glue(frame, _random_assignment(rng, frame, pool), strict=False)
        r.instances += 1
        if not topo.is_TD(g.space):
            r.fail({"frame": frame.to_json(), "glued": _space_json(g.space)})
    return r


def gluing_shape(cap: int = 4, seed: int = 0) -> Report:
    r = Report("gluing-shape", "default gluing: a strict cluster edge leaves a singleton "
               "non-closed; non-degenerate final clusters give a crowded space; "
               "degenerate final clusters give a densely discrete space; each cluster "
               "block is a subspace homeomorphic to its cluster space", cap=cap, seed=seed)
    for frame in _transitive_frames(cap):
        dec = clusters(frame)
        assignment = default_assignment(frame, 2)
        g = glue(frame, assignment)
        r.instances += 1
        finals = [k for k, fin in zip(dec.kinds, dec.final) if fin]
        if any(dec.strict_order) and non_closed_singleton(g) is None:
            r.fail({"frame": frame.to_json(), "failed": "non-T1"})
        if all(k.nondegenerate for k in finals) and not topo.is_crowded(g.space):
            r.fail({"frame": frame.to_json(), "failed": "crowded"})
        if all(k is ClusterKind.DEGENERATE for k in finals) and \
                not topo.is_densely_discrete(g.space):
            r.fail({"frame": frame.to_json(), "failed": "densely discrete"})
        for i, c in enumerate(dec.clusters):
            sub, _ = topo.subspace(g.space, g.cluster_block(i))
            if sub != assignment[c].space:
                r.fail({"frame": frame.to_json(), "failed": "subspace", "cluster": i})
            for w, cell in assignment[c].cells.items():
                if g.fiber(w) != cell << g.offsets[i]:
                    r.fail({"frame": frame.to_json(), "failed": "fiber", "w": w})
    return r


SUITES: dict[str, Callable[..., Report]] = {
    "circumference-scheme": circumference_scheme,
    "singleton-clusters-grz": singleton_clusters_grz,
    "d-c1-implies-m": d_c1_implies_m,
    "bounded-morphism-preservation": bounded_morphism_preservation,
    "preorder-circumference-hi": preorder_circumference_hi,
    "esakia-td": esakia_td,
    "crowded-d": crowded_d,
    "densely-discrete-e": densely_discrete_e,
    "hi-scheme": hi_scheme,
    "open-irresolvability-scheme": open_irresolvability_scheme,
    "crowded-oi-m": crowded_oi_m,
    "scattered-loeb": scattered_loeb,
    "crowded-td-identities": crowded_td_identities,
    "no-crowded-td": no_crowded_td,
    "topology-laws": topology_laws,
    "gluing-d-morphism": gluing_d_morphism,
    "gluing-preserves-hi": gluing_preserves_hi,
    "gluing-preserves-td": gluing_preserves_td,
    "gluing-shape": gluing_shape,
}


def run_property_suite(suite_id: str, cap: int | None = None, seed: int = 0) -> list[Report]:
    """Run one suite (or ``"all"``) and return its reports.

    ``cap`` overrides each suite's default size cap.
    """
    if suite_id == "all":
        ids = list(SUITES)
    elif suite_id in SUITES:
        ids = [suite_id]
    else:
        raise KeyError(f"unknown suite {suite_id!r}; known: all, {', '.join(SUITES)}")
    reports = []
    for sid in ids:
        fn = SUITES[sid]
        start = time.perf_counter()
        report = fn(seed=seed) if cap is None else fn(cap=cap, seed=seed)
        report.seconds = time.perf_counter() - start
        reports.append(report)
    return reports


def replay_witness(report: Report) -> bool | None:
    """Re-evaluate the countermodel in a FAIL witness.

    True when the formula is indeed false at the witness point, False when
    it is not, None when the witness carries no countermodel.
    """
    w = report.witness or {}
    if "countermodel" not in w:
        return None
    phi = parse(w["formula"])
    cm = w["countermodel"]
    val = {k: sum(1 << p for p in v) for k, v in cm["valuation"].items()}
    if "frame" in w:
        nbhd = Frame.from_json(w["frame"]).succ
    else:
        X = TopSpace.from_json(w["space"])
        nbhd = X.punctured if w["semantics"] == "d" else X.min_nbhd
    return not truth_set(phi, nbhd, val) >> cm["point"] & 1
