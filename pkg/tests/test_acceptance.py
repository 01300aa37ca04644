"""Acceptance gate: ten end-to-end criteria with stated tolerances and budgets.

Each criterion prints one PASS/FAIL line to the real stdout so the verdicts
stay visible under pytest's capture. A criterion passes only if its numeric
condition holds AND it finishes inside its time budget.
"""

import time

import numpy as np
import pytest

from czlab import GridFunction, GridSpec, apply_T, builtin_kernel
from czlab.harness.claims import verify_claim

from oracles import oracle_commutator, truncated_convolution

_CAPSYS = None


@pytest.fixture(autouse=True)
def _live_verdicts(capsys):
    # let _verdict write through pytest's fd-level capture
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def _verdict(num: int, ok: bool, summary: str) -> bool:
    line = f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'} - {summary}"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
    return ok


def _rows(rep, check=None):
    if check is None:
        return rep.rows
    return [r for r in rep.rows if r["params"].get("check") == check]


# ---------------------------------------------------------------------------

def test_criterion_01_engine_matches_independent_oracle():
    # triple-loop oracle with its own interpolation and midpoint chord rule
    # against the production engine on Gauss-Legendre nodes
    budget, tol = 60.0, 1e-6
    t0 = time.perf_counter()
    spec = GridSpec(d=2, N=16, S=1.0)
    kernel = builtin_kernel("riesz-x1", d=2)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(5):
        a = GridFunction(spec, rng.uniform(-1.0, 1.0, size=spec.shape))
        f = GridFunction(spec, rng.normal(size=spec.shape))
        engine = apply_T(kernel, a, f, 0.0, num_s=2048).values
        oracle = oracle_commutator(a.real_values, f.real_values, spec.S, 0.0,
                                   num_s=4096)
        rel = np.linalg.norm(engine - oracle) / np.linalg.norm(oracle)
        worst = max(worst, float(rel))
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and elapsed < budget
    assert _verdict(1, ok, f"engine vs oracle, d=2 N=16, 5 random pairs: "
                           f"worst rel l2 {worst:.3e} <= {tol:g}, {elapsed:.1f}s")


def test_criterion_02_constant_symbol_reduces_to_convolution():
    budget, tol = 30.0, 1e-10
    t0 = time.perf_counter()
    spec = GridSpec(d=2, N=64, S=1.0)
    kernel = builtin_kernel("riesz-x1", d=2)
    rng = np.random.default_rng(7)
    a = GridFunction(spec, np.ones(spec.shape))
    f = GridFunction(spec, rng.normal(size=spec.shape))
    engine = apply_T(kernel, a, f, 0.0, num_s=8).values
    tab = kernel.sample(spec, rmin=0.0)
    expect = truncated_convolution(tab.real_values, f.values, spec.h)
    rel = float(np.max(np.abs(engine - expect)) / np.max(np.abs(expect)))
    elapsed = time.perf_counter() - t0
    ok = rel <= tol and elapsed < budget
    assert _verdict(2, ok, f"constant symbol vs truncated-kernel convolution, "
                           f"N=64: rel sup {rel:.3e} <= {tol:g}, {elapsed:.1f}s")


def test_criterion_03_decomposition_invariants():
    budget = 60.0
    t0 = time.perf_counter()
    rep = verify_claim("czd-invariants")
    elapsed = time.perf_counter() - t0
    cfg = rep.config
    sized = (cfg["random"][0]["count"] == 100 and cfg["planted"]["count"] == 20)
    checks = {r["params"].get("check") for r in rep.rows}
    complete = {"reconstruction", "atom-mean-zero", "good-sup-bound",
                "cube-sum-bound", "atom-l1-bound", "cube-disjointness",
                "exceptional-measure", "planted-recovery"} <= checks
    ok = rep.passed and sized and complete and elapsed < budget
    assert _verdict(3, ok, f"decomposition invariants on 100 random + 20 planted "
                           f"inputs: verdict {rep.verdict}, worst ratio "
                           f"{rep.worst_ratio():.3g}, {elapsed:.1f}s")


def test_criterion_04_exact_identities():
    budget = 120.0
    t0 = time.perf_counter()
    reps = {cid: verify_claim(cid) for cid in
            ("sector-sum-identity", "kernel-telescoping", "partition-unity",
             "shell-telescoping")}
    elapsed = time.perf_counter() - t0
    tols = {
        "sector-sum-identity": 1e-8,
        "kernel-telescoping": 1e-8,
        "partition-unity": 1e-10,
        "shell-telescoping": 1e-10,
    }
    worst = {cid: max(r["lhs"] for r in rep.rows) for cid, rep in reps.items()}
    within = all(worst[cid] <= tols[cid] for cid in reps)
    pts = [sw.get("num_points", 10000) for sw in
           reps["partition-unity"].config["sweeps"] if sw["d"] == 2]
    sampled = all(p >= 10_000 for p in pts)
    ok = all(r.passed for r in reps.values()) and within and sampled and elapsed < budget
    detail = ", ".join(f"{cid} {worst[cid]:.1e}" for cid in sorted(reps))
    assert _verdict(4, ok, f"sector sum / kernel and shell telescoping / "
                           f"partition of unity: {detail}, {elapsed:.1f}s")


def test_criterion_05_mollified_piece_l1_error():
    budget, band = 120.0, 8.0
    t0 = time.perf_counter()
    rep = verify_claim("mollified-piece-l1-error")
    elapsed = time.perf_counter() - t0
    ns = {r["params"]["n"] for r in rep.rows}
    eps = {r["params"]["eps"] for r in rep.rows}
    ratios = [r["ratio"] for r in rep.rows]
    spread = max(ratios) / min(ratios)
    ok = (rep.passed and ns == {4, 6, 8, 12, 16} and eps == {1.0, 0.5}
          and spread <= band and elapsed < budget)
    assert _verdict(5, ok, f"smoothing-scale power law of the ring l1 error, "
                           f"n in {sorted(ns)}, eps in {sorted(eps)}: combined "
                           f"spread {spread:.3f} <= {band:g}, {elapsed:.1f}s")


def test_criterion_06_endpoint_cutoff_gap():
    budget, band = 600.0, 8.0
    t0 = time.perf_counter()
    rep = verify_claim("endpoint-cutoff-gap")
    elapsed = time.perf_counter() - t0
    ns = {r["params"]["n"] for r in rep.rows}
    ratios = [r["ratio"] for r in rep.rows]
    spread = max(ratios) / min(ratios)
    ok = rep.passed and ns == {4, 6, 8, 12} and spread <= band and elapsed < budget
    assert _verdict(6, ok, f"endpoint-damped chord average gap follows n^-2, "
                           f"n in {sorted(ns)}: spread {spread:.3f} <= {band:g}, "
                           f"{elapsed:.1f}s")


def test_criterion_07_net_geometry():
    budget = 120.0
    t0 = time.perf_counter()
    card = verify_claim("net-cardinality")
    over = verify_claim("sector-overlap")
    elapsed = time.perf_counter() - t0
    spreads = [r["lhs"] for r in _rows(card, "spread")]
    dims = {r["params"]["d"] for r in _rows(card, "spread")}
    tight = len(spreads) == 2 and all(s <= 4.0 for s in spreads)
    over_ok = all(1.0 / 8.0 <= r["ratio"] <= 8.0 for r in over.rows)
    ok = (card.passed and over.passed and tight and dims == {2, 3}
          and over_ok and elapsed < budget)
    assert _verdict(7, ok, f"direction-net cardinality spreads "
                           f"{['%.3f' % s for s in spreads]} <= 4 (d=2,3) and "
                           f"sector overlap ratios within factor 8, {elapsed:.1f}s")


def test_criterion_08_tube_majorization():
    budget = 300.0
    t0 = time.perf_counter()
    rep = verify_claim("tube-majorization")
    elapsed = time.perf_counter() - t0
    point = _rows(rep, "pointwise")
    c_worst = max(r["lhs"] for r in point)
    mass = [r["lhs"] for r in _rows(rep, "tube-mass")]
    mass_ok = all(0.5 <= m <= 2.0 for m in mass)
    ok = (rep.passed and len(point) >= 10 and c_worst <= 32.0 and mass_ok
          and elapsed < budget)
    assert _verdict(8, ok, f"tube convolution dominates the rough sector piece "
                           f"pointwise over {len(point)} cases: C {c_worst:.3f} "
                           f"<= 32, tube mass within factor 2, {elapsed:.1f}s")


def test_criterion_09_bad_part_support():
    budget, tol = 60.0, 1e-12
    t0 = time.perf_counter()
    rep = verify_claim("bad-part-support")
    elapsed = time.perf_counter() - t0
    cfg = rep.config
    reach = 1.2 * 2.0 ** cfg["j"]
    margin = (2.0 ** cfg["dilate"] - 1.0) * 2.0 ** (cfg["m"] - 1)
    geometry = reach <= margin
    clean = all(r["lhs"] <= tol * r["params"]["inside_peak"]
                and r["params"]["inside_peak"] > 0 for r in rep.rows)
    worst_out = max(r["lhs"] for r in rep.rows)
    ok = rep.passed and geometry and clean and elapsed < budget
    assert _verdict(9, ok, f"applied pieces of dilated-cube atoms vanish off the "
                           f"exceptional set (reach {reach:g} <= margin "
                           f"{margin:g}): worst exterior value {worst_out:.1e}, "
                           f"{elapsed:.1f}s")


def test_criterion_10_weak_type_stability():
    budget = 900.0
    t0 = time.perf_counter()
    rep = verify_claim("weak-type-stability")
    elapsed = time.perf_counter() - t0
    cfg = rep.config
    setup = (cfg["grid"]["N"] == 64 and cfg["kernel"]["name"] == "riesz-x1"
             and [s["kind"] for s in cfg["symbols"]] ==
             ["random-signs", "checkerboard", "planted-sector"])
    snaps = [r["lhs"] for r in _rows(rep, "scale-invariance")]
    rels = [r["lhs"] for r in _rows(rep, "width-halving")]
    stable = (len(snaps) == 3 and all(s <= 0.05 for s in snaps)
              and len(rels) == 9 and all(1.0 / 1.2 <= r <= 1.2 for r in rels))
    ok = rep.passed and setup and stable and elapsed < budget
    assert _verdict(10, ok, f"weak-type functional: scale snaps <= 5% and three "
                            f"width halvings within +-20% for three rough "
                            f"symbols at N=64 (worst snap {max(snaps):.2e}, "
                            f"rels {min(rels):.3f}..{max(rels):.3f}), "
                            f"{elapsed:.1f}s")
