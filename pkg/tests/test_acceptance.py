"""Acceptance gates, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line (also printed) that the
terminal summary repeats after the run. Wall-clock gates time only the work
under test, not fixture construction or imports.
"""

import math
import time

import numpy as np
import pytest
from helpers import ACCEPTANCE, random_boundary_point, random_frequency, random_law, random_side

from vsheet.background import ConstantBackground, PressureLaw, classify_regime, exclusion_values, make_constant_background
from vsheet.modal import (
    FrequencyKind,
    classify_frequency,
    curve_separation,
    find_roots,
    lopatinskii_direct,
    lopatinskii_factored,
    lopatinskii_normalized,
    sigma_weight,
)
from vsheet.oracle import angle_scan, oracle_check
from vsheet.scans import region_map
from vsheet.symbols import I2, Frequency, assemble_A2tilde, assemble_T_A0, boundary_symbols
from vsheet.triangular import case1_lower_bound, triangular_sweep

LAW = PressureLaw()
SUPER = ConstantBackground(1.0, 3.0, 1.0, 0.0)
SUB = ConstantBackground(1.0, 0.3, 1.0, 0.0)


def report(k, ok, detail, elapsed, limit=None):
    gate = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.2f} s{gate}]"
    ACCEPTANCE[k] = line
    print(line)
    assert ok, line


def test_criterion_1_diagonalization():
    rng = np.random.default_rng(1)
    cases = [(random_law(rng), random_side(rng, "r" if rng.random() < 0.5 else "l")) for _ in range(1000)]
    t0 = time.perf_counter()
    worst = 0.0
    for law, s in cases:
        T, Ti, A0 = (np.asarray(m) for m in assemble_T_A0(s, law))
        D = A0 @ Ti @ np.asarray(assemble_A2tilde(s, law)) @ T
        worst = max(worst, float(np.max(np.abs(D - I2))))
    dt = time.perf_counter() - t0
    report(1, worst < 1e-12 and dt < 1.0, f"max entry error {worst:.2e} over 1000 states", dt, 1.0)


def test_criterion_2_projector_annihilates_b():
    rng = np.random.default_rng(2)
    cases = [(random_boundary_point(rng), random_frequency(rng)) for _ in range(1000)]
    t0 = time.perf_counter()
    worst = 0.0
    for bp, f in cases:
        bs = boundary_symbols(bp, f)
        worst = max(worst, float(np.max(np.abs(bs.Pi @ bs.b))))
    dt = time.perf_counter() - t0
    report(2, worst < 1e-14 and dt < 1.0, f"max |Pi b| {worst:.2e} over 1000 pairs", dt, 1.0)


BACKGROUNDS_3 = [
    ConstantBackground(1.0, 3.0, 1.0, 0.0),
    ConstantBackground(1.0, 2.5, 0.4, 0.3),
    ConstantBackground(1.2, 4.0, -0.8, 0.6, PressureLaw(kappa=0.8, gamma_ad=1.4)),
    ConstantBackground(1.0, 0.3, 1.0, 0.0),
    ConstantBackground(0.8, 0.2, 0.6, -0.5, PressureLaw(kappa=1.5, gamma_ad=1.7)),
]


def test_criterion_3_factorization_ratio():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    spreads = []
    for cb in BACKGROUNDS_3:
        assert classify_regime(cb).stable
        bp = make_constant_background(cb)
        ratios = []
        while len(ratios) < 200:
            f = random_frequency(rng, 0.01)
            if classify_frequency(bp, cb.pressure, f).kind is not FrequencyKind.REGULAR:
                continue
            ratios.append(lopatinskii_factored(bp, cb.pressure, f)[0] / lopatinskii_direct(bp, cb.pressure, f))
        r = np.array(ratios)
        spreads.append(float(np.max(np.abs(r - np.median(r.real) - 1j * np.median(r.imag))) / abs(np.median(r.real))))
    dt = time.perf_counter() - t0
    worst = max(spreads)
    report(3, worst < 1e-6 and dt < 5.0, f"max relative spread {worst:.2e} over 5 backgrounds", dt, 5.0)


def test_criterion_4_root_census():
    t0 = time.perf_counter()
    ok, notes = True, []
    for cb, n_el in ((SUPER, 3), (SUB, 2)):
        bp = make_constant_background(cb)
        rs = find_roots(bp, LAW)
        ok &= len(rs.elastic) == n_el and len(rs.velocity) == 2
        worst = max(lopatinskii_normalized(bp, LAW, Frequency.from_speed(V)) for V in rs.elastic_speeds)
        ok &= worst < 1e-7
        notes.append(f"v={cb.v_bar:g}: {len(rs.elastic)} elastic + {len(rs.velocity)} velocity, max |det| {worst:.1e}")
    dt = time.perf_counter() - t0
    report(4, bool(ok), "; ".join(notes), dt)


def test_criterion_5_oracle_equivalence():
    t0 = time.perf_counter()
    dist, angle, skipped = 0.0, 0.0, 0
    for cb in (SUPER, SUB):
        res = oracle_check(cb, LAW, gamma=0.05, n=2048)
        assert res.zero_match_report
        dist = max(dist, res.max_zero_distance)
    a, sk = angle_scan(SUPER, LAW, n=250, seed=5)
    b, sk2 = angle_scan(SUB, LAW, n=250, seed=6)
    angle, skipped = max(a, b), sk + sk2
    dt = time.perf_counter() - t0
    report(5, dist < 1e-5 and angle < 1e-7 and dt < 30.0,
           f"zero distance {dist:.2e}, max angle {angle:.2e} ({skipped} abstentions)", dt, 30.0)


def test_criterion_6_triangularization():
    t0 = time.perf_counter()
    samples, worst, c_lb = 0, 0.0, math.inf
    for cb in (SUPER, SUB):
        bp = make_constant_background(cb)
        res = triangular_sweep(bp, LAW, n=2600, seed=11)
        samples += res.samples
        worst = max(worst, res.max_pattern_residual)
        for s in (bp.right, bp.left):
            c_lb = min(c_lb, case1_lower_bound(s, LAW, 0.05))
    dt = time.perf_counter() - t0
    ok = samples >= 10_000 and worst <= 1e-9 and c_lb > 0 and dt < 60.0
    report(6, ok, f"{samples} samples, max residual {worst:.2e}, case-1 bound c = {c_lb:.3f}", dt, 60.0)


EXPECTED_PAIRS = {
    1: {"PoleVelocity", "PoleElastic"},
    2: {"PoleElastic", "OmegaZero"},
    3: {"PoleVelocity", "OmegaZero"},
    4: {"PoleVelocity", "RootElastic"},
}


def test_criterion_7_curve_separation():
    t0 = time.perf_counter()
    sep = curve_separation(SUPER, LAW)
    ok = not sep.collisions and all(d == "Identical" or d > 0 for d in sep.distances.values())
    got = {}
    for k, pair in EXPECTED_PAIRS.items():
        v = math.sqrt(exclusion_values(1.0, 1.0)[k - 1])
        got[k] = curve_separation(ConstantBackground(1.0, v, 1.0, 0.0), LAW).collision_pairs
        ok &= got[k] == {frozenset(pair)}
    dt = time.perf_counter() - t0
    detail = "supersonic separated; exclusions " + ", ".join(
        f"{k}:{'-'.join(sorted(next(iter(p))))}" if len(p) == 1 else f"{k}:{len(p)} pairs" for k, p in got.items())
    report(7, bool(ok) and dt < 10.0, detail, dt, 10.0)


def test_criterion_8_regime_classifier():
    t0 = time.perf_counter()
    labels = [classify_regime(ConstantBackground(1.0, v, 1.0, 0.0)).label for v in (3.0, 0.3, 0.5, 1.5)]
    ok = labels == ["SupersonicStable", "SubsonicStable", "Excluded(1)", "OutsideTheorem"]
    rm = region_map(resolution=(161, 81))
    lab = rm.labels()
    ok &= "SubsonicStable" not in lab[:, 0]
    ok &= all("SubsonicStable" in lab[:, j] for j in range(1, len(rm.F)))
    dt = time.perf_counter() - t0
    report(8, bool(ok) and dt < 10.0, f"examples {labels}; F=0 column without subsonic stability", dt, 10.0)


def test_criterion_9_homogeneity():
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    worst_sigma, worst_zero = 0.0, 0.0
    for cb in (SUPER, SUB):
        bp = make_constant_background(cb)
        for _ in range(100):
            f = random_frequency(rng)
            w = sigma_weight(bp, LAW, f).value
            for lam in (0.5, 2.0, 10.0):
                worst_sigma = max(worst_sigma, abs(sigma_weight(bp, LAW, f.scaled(lam)).value - lam * w)
                                  / max(1.0, abs(lam * w)))
        for V in find_roots(bp, LAW).all_speeds:
            for lam in (0.5, 2.0, 10.0):
                worst_zero = max(worst_zero, lopatinskii_normalized(bp, LAW, Frequency.from_speed(V).scaled(lam)))
    dt = time.perf_counter() - t0
    ok = worst_sigma < 1e-12 and worst_zero < 1e-7 and dt < 2.0
    report(9, ok, f"sigma scaling error {worst_sigma:.1e}; max |det| on scaled roots {worst_zero:.1e}", dt, 2.0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
