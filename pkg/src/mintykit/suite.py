"""Randomized property battery for the monotone / KKM / Minty equivalences.

A suite config lists generator specs; each spec expands into `trials`
instances with seeds ``seed, seed + 1, ...``. Every instance is run
through all applicable properties and the outcomes are aggregated per
config entry and per property. Everything is driven by seeded PCG64
streams, so reports are reproducible.
"""

import itertools
import json
import logging
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import oracles
from .errors import MintyError
from .gamma_map import (build_gamma_system, check_fip, check_kkm,
                        constructive_fip, fip_objective, fip_property,
                        kkm_property)
from .minty_vi import construct_witness, solve_finite_mvi, solve_mvi
from .operator_graph import is_monotone, is_quasimonotone, shift
from .polyhedra import DEFAULT_TOL, Tolerance, contains, feasible_in_hull
from .randgen import GenSpec, generate, make_rng

log = logging.getLogger(__name__)

PROPERTIES = (
    "kkm_fip_equivalence",
    "kkm_fip_induction",
    "minty_forward",
    "minty_converse",
    "mvi_fip_bridge",
    "prop_a1",
    "prop_a2",
    "prop_b",
    "corollary",
    "constructive_fip",
    "grid_oracle",
)

WITNESS_IDENTITY_TOL = 1e-9
GRID_SAMPLES = 10_000


@dataclass
class Instance:
    spec: GenSpec
    T: object
    monotone: bool

    @property
    def seed(self):
        return self.spec.seed

    @property
    def label(self):
        return self.spec.label()


@dataclass
class Check:
    prop: str
    passed: bool
    detail: str = ""
    band: bool = False   # decided inside the (eq_tol, strict_margin) band
    info: bool = False   # observation only, never a failure


@dataclass
class SuiteSettings:
    """Per-instance workload of each property."""

    gamma_systems: int = 2
    max_subset: int = 5
    forward_xstars: int = 5
    forward_subsets: int = 5
    a1_subsets: int = 3
    b_shifts: int = 10
    corollary_xstars: int = 10
    bridge_probes: int = 3
    constructive_systems: int = 1
    grid_samples: int = GRID_SAMPLES
    enabled: tuple = PROPERTIES


def load_default_config():
    text = resources.files("mintykit").joinpath("data/default_suite.json").read_text()
    return json.loads(text)


def expand_config(config):
    """Yield (entry index, GenSpec) pairs for every instance of the config."""
    for k, entry in enumerate(config.get("suites", [])):
        trials = int(entry.get("trials", 1))
        for t in range(trials):
            yield k, GenSpec(int(entry["dim"]), int(entry["num_points"]),
                             entry["family"], float(entry.get("magnitude", 0.0)),
                             int(entry["seed"]) + t)


def make_instance(spec, tol=DEFAULT_TOL):
    T = generate(spec)
    return Instance(spec, T, is_monotone(T, tol).holds)


# --- random probes --------------------------------------------------------

def _random_xstar(T, rng):
    _, _, _, D = T.flat()
    centre = D[rng.integers(D.shape[0])]
    spread = float(np.std(D)) + 0.1
    return centre + rng.normal(scale=spread, size=T.dim)


def _random_subset(T, rng, max_size):
    dom = T.domain_indices()
    size = int(rng.integers(1, min(max_size, len(dom)) + 1))
    return sorted(int(i) for i in rng.choice(dom, size=size, replace=False))


# --- properties -----------------------------------------------------------

def _counterexample_ok(sys, kkm, tol):
    """The KKM counterexample lies in [A] and escapes every Gamma strictly."""
    for poly, a in zip(sys.polyhedra, kkm.selection):
        h = poly.constraints[a]
        if -h.slack(kkm.point) / np.linalg.norm(h.normal) < tol.strict_margin * (1 - 1e-6):
            return False
    return contains(sys.hull, [], kkm.point, tol)


def _kkm_fip_agree(sys, tol, expect=None):
    """Checks for one GammaSystem.

    The theorem-level check compares (KKM) and (FIP) over all
    sub-collections of A. The induction step is checked on A itself:
    KKM(A) with FIP on proper sub-collections gives FIP(A), and FIP(A) with
    KKM on proper sub-collections gives KKM(A). Whether check_kkm and
    check_fip agree on A alone is only recorded as an observation, tagged
    "kkm_only" (A covered, no common point) or "fip_only" (the reverse).
    """
    prop = "kkm_fip_equivalence"
    kkm_all = kkm_property(sys, tol)
    fip_all = fip_property(sys, tol)
    kkm = check_kkm(sys, tol)
    fip = check_fip(sys, tol)
    out = []
    ok = kkm_all.holds == fip_all.holds
    detail = "" if ok else (f"KKM={kkm_all.holds} (fails on {kkm_all.subset}) "
                            f"FIP={fip_all.holds} (fails on {fip_all.subset}) "
                            f"A={sys.base_indices}")
    if ok and expect is not None and kkm_all.holds != expect:
        ok, detail = False, f"expected KKM={expect} on A={sys.base_indices}"
    out.append(Check(prop, ok, detail))
    if sys.size > 1:
        if kkm.holds and fip_property(sys, tol, proper=True).holds:
            out.append(Check("kkm_fip_induction", fip.feasible,
                             "" if fip.feasible else "KKM step did not give FIP"))
        if fip.feasible and kkm_property(sys, tol, proper=True).holds:
            out.append(Check("kkm_fip_induction", kkm.holds,
                             "" if kkm.holds else "FIP step did not give KKM"))
    if not kkm.holds and not _counterexample_ok(sys, kkm, tol):
        out.append(Check(prop, False, "counterexample does not escape Gamma"))
    agree = kkm.holds == fip.feasible
    kind = "" if agree else ("kkm_only" if kkm.holds else "fip_only")
    out.append(Check("kkm_fip_per_system", agree, kind, info=True))
    return out


def prop_kkm_fip_equivalence(inst, rng, tol, cfg):
    T = inst.T
    out = []
    for _ in range(cfg.gamma_systems):
        A = _random_subset(T, rng, cfg.max_subset)
        out.extend(_kkm_fip_agree(build_gamma_system(T, A, _random_xstar(T, rng)), tol))
    if not inst.monotone:
        v = is_monotone(T, tol).violation
        w = construct_witness(v.pair, tol)
        sys = build_gamma_system(T, list(v.entries), w.zstar)
        out.extend(_kkm_fip_agree(sys, tol, expect=False))
    return out


def prop_minty_forward(inst, rng, tol, cfg):
    if not inst.monotone:
        return []
    T = inst.T
    out = []
    for _ in range(cfg.forward_xstars):
        xstar = _random_xstar(T, rng)
        for _ in range(cfg.forward_subsets):
            subset = _random_subset(T, rng, 6)
            ok = solve_finite_mvi(T, subset, xstar, tol).feasible
            out.append(Check("minty_forward", ok,
                             "" if ok else f"infeasible subset={subset}"))
    return out


def prop_minty_converse(inst, rng, tol, cfg):
    if inst.monotone:
        return []
    v = is_monotone(inst.T, tol).violation
    w = construct_witness(v.pair, tol)
    ident = (abs(w.a - w.delta / 2) <= WITNESS_IDENTITY_TOL
             and abs(w.b + w.delta / 2) <= WITNESS_IDENTITY_TOL)
    infeasible = not solve_mvi(w.problem(), tol).feasible
    ok = ident and infeasible
    detail = "" if ok else f"identities={ident} infeasible={infeasible}"
    return [Check("minty_converse", ok, detail)]


def prop_mvi_fip_bridge(inst, rng, tol, cfg):
    T = inst.T
    out = []
    for _ in range(cfg.bridge_probes):
        subset = _random_subset(T, rng, cfg.max_subset)
        xstar = _random_xstar(T, rng)
        a = solve_finite_mvi(T, subset, xstar, tol).feasible
        b = check_fip(build_gamma_system(T, subset, xstar), tol).feasible
        out.append(Check("mvi_fip_bridge", a == b,
                         "" if a == b else f"mvi={a} fip={b} subset={subset}"))
    return out


def prop_a1(inst, rng, tol, cfg):
    if not inst.monotone:
        return []
    T = inst.T
    zero = np.zeros(T.dim)
    out = []
    for _ in range(cfg.a1_subsets):
        A = _random_subset(T, rng, cfg.max_subset)
        ok = check_kkm(build_gamma_system(T, A, zero), tol).holds
        out.append(Check("prop_a1", ok, "" if ok else f"KKM fails on A={A}"))
    return out


def _a2_for(T, tol, tag):
    q = is_quasimonotone(T, tol)
    if q.holds:
        return None
    i, j = q.violation.entries
    kkm = check_kkm(build_gamma_system(T, [i, j], np.zeros(T.dim)), tol)
    ok = not kkm.holds
    band = False
    if not ok:
        # the midpoint escapes both Gamma sets by |value| / (2 ||dual||)
        v = q.violation
        margin = -v.value / (2 * max(np.linalg.norm(v.xstar), np.linalg.norm(v.ystar)))
        band = margin < tol.strict_margin
    return Check("prop_a2", ok, "" if ok else f"{tag}: pair {(i, j)} stays KKM",
                 band=band)


def prop_a2(inst, rng, tol, cfg):
    out = []
    c = _a2_for(inst.T, tol, "T")
    if c is not None:
        out.append(c)
    if not inst.monotone:
        w = construct_witness(is_monotone(inst.T, tol).violation.pair, tol)
        c = _a2_for(shift(inst.T, w.zstar), tol, "T - z*")
        if c is None:
            c = Check("prop_a2", False, "witness shift is quasimonotone")
        out.append(c)
    return out


def prop_b(inst, rng, tol, cfg):
    T = inst.T
    if inst.monotone:
        out = []
        for _ in range(cfg.b_shifts):
            u = _random_xstar(T, rng)
            ok = is_quasimonotone(shift(T, u), tol).holds
            out.append(Check("prop_b", ok, "" if ok else "monotone shift not quasimonotone"))
        return out
    w = construct_witness(is_monotone(T, tol).violation.pair, tol)
    ok = not is_quasimonotone(shift(T, w.zstar), tol).holds
    return [Check("prop_b", ok, "" if ok else "witness shift stays quasimonotone")]


def prop_corollary(inst, rng, tol, cfg):
    """All two-point MVIs solvable over the probes iff the graph is monotone.

    Probes per pair: `corollary_xstars` random shifts plus the midpoint of
    the pair's duals, the shift that splits a violating pair evenly.
    """
    T = inst.T
    dom = T.domain_indices()
    shared = [_random_xstar(T, rng) for _ in range(cfg.corollary_xstars)]
    all_ok = True
    for i, j in itertools.combinations(dom, 2):
        probes = shared + [0.5 * (a + b) for a in T.duals[i] for b in T.duals[j]]
        for xstar in probes:
            if not solve_finite_mvi(T, [i, j], xstar, tol).feasible:
                all_ok = False
                break
        if not all_ok:
            break
    ok = all_ok == inst.monotone
    return [Check("corollary", ok,
                  "" if ok else f"pairwise MVI={all_ok} monotone={inst.monotone}")]


def prop_constructive_fip(inst, rng, tol, cfg):
    if not inst.monotone:
        return []
    T = inst.T
    out = []
    for _ in range(cfg.constructive_systems):
        A = _random_subset(T, rng, cfg.max_subset)
        sys = build_gamma_system(T, A, _random_xstar(T, rng))
        try:
            y = constructive_fip(sys, tol)
        except MintyError as exc:
            out.append(Check("constructive_fip", False, f"A={A}: {exc}"))
            continue
        f = fip_objective(sys, y, tol)
        inside = contains(sys.hull, sys.all_constraints(), y, tol)
        fip = check_fip(sys, tol).feasible
        ok = f <= tol.fip_tol and inside and fip
        out.append(Check("constructive_fip", ok,
                         "" if ok else f"A={A} f={f:.3e} contains={inside} fip={fip}"))
    return out


def prop_grid_oracle(inst, rng, tol, cfg):
    """check_kkm and feasible_in_hull against dense sampling (dims 1 and 2)."""
    T = inst.T
    if T.dim > 2:
        return []
    A = _random_subset(T, rng, cfg.max_subset)
    sys = build_gamma_system(T, A, _random_xstar(T, rng))
    X, radius = oracles.hull_samples(sys.hull.vertices, cfg.grid_samples)
    out = []

    # KKM: a sample escaping every Gamma by > strict_margin refutes KKM
    margins = oracles.uncovered_margin(sys, X)
    grid_escape = bool(np.any(margins > tol.strict_margin))
    kkm = check_kkm(sys, tol)
    band = False
    if grid_escape and kkm.holds:
        ok = False
    elif not kkm.holds and not grid_escape:
        # the LP found an escaping region the grid missed
        ok = False
        band = kkm.slack < tol.strict_margin
    else:
        ok = True
    if not kkm.holds:
        recomputed = oracles.uncovered_margin(sys, kkm.point[None, :])[0]
        if recomputed < tol.strict_margin * (1 - 1e-6):
            ok = False
    out.append(Check("grid_oracle", ok,
                     "" if ok else f"kkm={kkm.holds} grid_escape={grid_escape} "
                                   f"slack={kkm.slack}", band=band))

    # FIP feasibility of the same system
    cons = sys.all_constraints()
    grid_feasible = bool(np.any(oracles.min_raw_slack(cons, X) >= -tol.eq_tol))
    fip = feasible_in_hull(sys.hull, cons, tol)
    ok, band = True, False
    if grid_feasible and not fip.feasible:
        ok = False
    elif fip.feasible and not grid_feasible:
        ok = False
        band = fip.slack <= tol.strict_margin
    out.append(Check("grid_oracle", ok,
                     "" if ok else f"fip={fip.feasible} grid={grid_feasible} "
                                   f"slack={fip.slack} radius={radius:.2e}",
                     band=band))
    return out


PROPERTY_FUNCS = {
    "kkm_fip_equivalence": prop_kkm_fip_equivalence,
    "kkm_fip_induction": None,
    "minty_forward": prop_minty_forward,
    "minty_converse": prop_minty_converse,
    "mvi_fip_bridge": prop_mvi_fip_bridge,
    "prop_a1": prop_a1,
    "prop_a2": prop_a2,
    "prop_b": prop_b,
    "corollary": prop_corollary,
    "constructive_fip": prop_constructive_fip,
    "grid_oracle": prop_grid_oracle,
}


def run_instance(inst, tol=DEFAULT_TOL, cfg=None, props=None):
    """All property checks for one instance, each with its own PCG64 stream."""
    cfg = cfg or SuiteSettings()
    props = props or cfg.enabled
    checks = []
    for k, name in enumerate(PROPERTIES):
        if name not in props or PROPERTY_FUNCS[name] is None:
            continue
        rng = make_rng(inst.seed, stream=100 + k)
        try:
            checks.extend(PROPERTY_FUNCS[name](inst, rng, tol, cfg))
        except MintyError as exc:
            checks.append(Check(name, False, f"{type(exc).__name__}: {exc}"))
    return checks


def _tally():
    return {"passed": 0, "failed": 0, "band": 0, "failing_seeds": []}


def _info_tally():
    return {"agree": 0, "disagree": 0, "kinds": {}, "seeds": []}


def run_suite(config, tol=None, cfg=None):
    """Run the battery described by `config`; return a JSON-ready dict.

    ``config["tolerance"]`` may override Tolerance fields. The report has
    one block per config entry plus totals per property; ``ok`` is true
    iff no check failed outside the degeneracy band.
    """
    if tol is None:
        tol = Tolerance.from_overrides(**config.get("tolerance", {}))
    cfg = cfg or SuiteSettings()
    entries = config.get("suites", [])
    blocks = [{"family": e["family"], "dim": int(e["dim"]),
               "num_points": int(e["num_points"]),
               "magnitude": float(e.get("magnitude", 0.0)),
               "seed": int(e["seed"]), "trials": int(e.get("trials", 1)),
               "monotone_instances": 0, "properties": {}} for e in entries]
    totals = {}
    observations = {}
    band_log = []
    for k, spec in expand_config(config):
        block = blocks[k]
        try:
            inst = make_instance(spec, tol)
        except MintyError as exc:
            t = block["properties"].setdefault("generation", _tally())
            t["failed"] += 1
            t["failing_seeds"].append(spec.seed)
            log.warning("generation failed for %s: %s", spec.label(), exc)
            continue
        block["monotone_instances"] += int(inst.monotone)
        for chk in run_instance(inst, tol, cfg):
            if chk.info:
                t = observations.setdefault(chk.prop, _info_tally())
                t["agree" if chk.passed else "disagree"] += 1
                if not chk.passed:
                    t["kinds"][chk.detail] = t["kinds"].get(chk.detail, 0) + 1
                    if spec.seed not in t["seeds"]:
                        t["seeds"].append(spec.seed)
                continue
            for t in (block["properties"].setdefault(chk.prop, _tally()),
                      totals.setdefault(chk.prop, _tally())):
                if chk.passed:
                    t["passed"] += 1
                elif chk.band:
                    t["band"] += 1
                else:
                    t["failed"] += 1
                    if spec.seed not in t["failing_seeds"]:
                        t["failing_seeds"].append(spec.seed)
            if chk.band:
                band_log.append({"instance": spec.label(), "property": chk.prop,
                                 "detail": chk.detail})
                log.info("degeneracy band: %s %s %s", spec.label(), chk.prop, chk.detail)
            elif not chk.passed:
                log.warning("FAIL %s %s %s", spec.label(), chk.prop, chk.detail)
    failed = sum(t["failed"] for b in blocks for t in b["properties"].values())
    return {
        "suites": blocks,
        "totals": {p: totals[p] for p in PROPERTIES if p in totals},
        "observations": observations,
        "band_cases": band_log,
        "failures": failed,
        "ok": failed == 0,
        "tolerance": tol.as_dict(),
    }
