"""Scan drivers: determinant scans, regime maps and separation reports."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .background import (
    BackgroundPoint,
    ConstantBackground,
    PerturbationSpec,
    PressureLaw,
    RegimeClass,
    classify_regime,
    classify_speeds,
    exclusion_values,
    make_constant_background,
    sound_speed,
)
from .errors import AdmissibilityViolation, GlancingDegeneracy
from .modal import (
    _classify_with,
    _refine,
    _regime_of,
    _roots_for_pair,
    _scan_bound,
    curve_distance,
    curve_separation,
    curves_for_pair,
    lopatinskii_direct,
    lopatinskii_factored,
    lopatinskii_normalized,
    trace_curves,
)
from .symbols import Frequency

SCAN_COLUMNS = (
    "delta", "eta", "gamma", "re_det", "im_det", "abs_det_normalized",
    "class", "dist_pole_v", "dist_pole_e", "dist_root", "dist_omega",
)


def _bp(bg) -> BackgroundPoint:
    return make_constant_background(bg) if isinstance(bg, ConstantBackground) else bg


# ---------------------------------------------------------------------------
# Determinant scan


def scan_speeds(bp: BackgroundPoint, law: PressureLaw, n: int) -> np.ndarray:
    S = _scan_bound(bp.right, bp.left, law)
    return np.linspace(-S, S, n)


def det_scan(bg, law: PressureLaw | None = None, n: int = 4096, gamma: float = 0.0,
             speeds=None, workers: int = 1, tol: float = 1e-6) -> list[dict]:
    """One row per hemisphere point ``delta / eta = s`` at fixed ``gamma``.

    At exact glancing points the eigenvector is undefined; the row then
    reports the product form of the determinant and ``nan`` for the
    normalized modulus.
    """
    bp = _bp(bg)
    law = law or bp.pressure
    if speeds is None:
        speeds = scan_speeds(bp, law, n) if n > 0 else np.array([])
    roots = _roots_for_pair(bp.right, bp.left, law, _regime_of(bp))
    curves = curves_for_pair(bp.right, bp.left, law, roots)

    def row(s: float) -> dict:
        f = Frequency.from_speed(float(s), gamma)
        try:
            det = lopatinskii_direct(bp, law, f)
            nrm = lopatinskii_normalized(bp, law, f)
        except GlancingDegeneracy:
            det = lopatinskii_factored(bp, law, f)[0]
            nrm = math.nan
        fc = _classify_with(curves, f, tol)
        d = fc.distances
        return {
            "delta": f.delta, "eta": f.eta, "gamma": f.gamma,
            "re_det": det.real, "im_det": det.imag, "abs_det_normalized": nrm,
            "class": fc.name,
            "dist_pole_v": d["PoleVelocity"], "dist_pole_e": d["PoleElastic"],
            "dist_root": d["RootElastic"], "dist_omega": d["OmegaZero"],
        }

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(row, speeds))
    else:
        rows = [row(s) for s in speeds]
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def count_scan_zeros(bg, rows: list[dict], law: PressureLaw | None = None, tol: float = 1e-7) -> list[float]:
    """Refine every local minimum of the normalized modulus; keep true zeros.

    Returns the zero speeds ``delta / eta``.
    """
    bp = _bp(bg)
    law = law or bp.pressure
    if len(rows) < 3:
        return []
    gamma = rows[0]["gamma"]
    ss = np.array([r["delta"] / r["eta"] for r in rows])
    vals = np.array([r["abs_det_normalized"] for r in rows])
    vals = np.where(np.isnan(vals), np.inf, vals)

    def nrm(s):
        try:
            return lopatinskii_normalized(bp, law, Frequency.from_speed(s, gamma))
        except GlancingDegeneracy:
            return math.inf

    def det(s):
        f = Frequency.from_speed(s, gamma)
        try:
            return lopatinskii_direct(bp, law, f)
        except GlancingDegeneracy:
            return lopatinskii_factored(bp, law, f)[0]

    zeros: list[float] = []
    for i in range(1, len(ss) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            z = _refine(det, ss[i - 1], ss[i + 1])
            if nrm(z) < tol and not any(abs(z - w) < 1e-6 for w in zeros):
                zeros.append(float(z))
    return zeros


# ---------------------------------------------------------------------------
# Region map


@dataclass(frozen=True)
class RegionMap:
    v: np.ndarray
    F: np.ndarray
    classes: list  # classes[i][j] is the RegimeClass at (v[i], F[j])
    curves: dict   # name -> list of (F, v) points
    c: float
    rho_bar: float

    def labels(self) -> np.ndarray:
        return np.array([[rc.label for rc in row] for row in self.classes])

    def column(self, j: int) -> list[RegimeClass]:
        return [row[j] for row in self.classes]


def region_map(v_range=(0.0, 4.0), F_range=(0.0, 2.0), resolution=(161, 81),
               law: PressureLaw | None = None, rho_bar: float = 1.0, tol: float = 1e-8) -> RegionMap:
    """Classify every grid node of the ``(v_bar, |F_bar|)`` rectangle."""
    law = law or PressureLaw()
    nv, nF = resolution
    if nv < 1 or nF < 1:
        raise ValueError("resolution must be positive")
    c = sound_speed(law, rho_bar)
    v = np.linspace(*v_range, nv)
    F = np.linspace(*F_range, nF)
    classes = [[classify_speeds(float(vi), float(Fj), c, tol) for Fj in F] for vi in v]
    Fd = np.linspace(F_range[0], F_range[1], 400)
    curves = {"supersonic": [(float(x), math.sqrt(2 * c * c + x * x)) for x in Fd]}
    for k in range(4):
        curves[f"exclusion_{k + 1}"] = [
            (float(x), math.sqrt(exclusion_values(x * x, c)[k])) for x in Fd
        ]
    curves["sonic_F"] = [(float(x), float(x)) for x in Fd]
    return RegionMap(v, F, classes, curves, c, rho_bar)


def region_csv(rm: RegionMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["v_bar", "F_bar", "regime", "surface"])
    for i, vi in enumerate(rm.v):
        for j, Fj in enumerate(rm.F):
            rc = rm.classes[i][j]
            w.writerow([repr(float(vi)), repr(float(Fj)), rc.regime.value, rc.surface or ""])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Separation report


def _default_trace_points(cb: ConstantBackground, pert: PerturbationSpec | None):
    if pert is None or pert.phi is None:
        return [(0.0, 0.0)]
    t0, x10, _ = pert.phi.center
    wt, w1, _ = pert.phi.width
    return [(t0, x10), (t0 + 0.5 * wt, x10), (t0, x10 + 0.5 * w1)]


def separation_report(cb: ConstantBackground, pert: PerturbationSpec | None = None,
                      law: PressureLaw | None = None, x2_samples=None, points=None,
                      tol: float = 1e-6) -> dict:
    """Minimum separations at the constant state and along perturbed traces.

    Radii are half the smallest distance from each curve to any other
    non-identical curve, over every sampled point.
    """
    law = law or cb.pressure
    sep = curve_separation(cb, law, tol)
    if sep.collisions:
        fa, fb, la, lb, d = sep.collisions[0]
        raise AdmissibilityViolation(
            f"{fa} curve {la} meets {fb} curve {lb} (distance {d:.3e})", (fa, fb)
        )
    const = {"|".join(sorted((a, b))): v for (a, b), v in sep.distances.items()}
    labels = [c.label for c in sep.curves]
    per_curve = {lab: sep.min_separation(lab) for lab in labels}
    traced = {}
    if pert is not None and not pert.is_zero:
        x2 = np.linspace(0.0, 2.0, 9) if x2_samples is None else np.asarray(x2_samples, dtype=float)
        pts = points or _default_trace_points(cb, pert)
        fam_min: dict[str, float] = {}
        for at in pts:
            bundle = trace_curves(cb, pert, law, x2, at)
            names = [k for k in bundle.speeds if bundle.families[k] != "RootVelocity"]
            for j in range(len(x2)):
                sp = {k: bundle.speeds[k][j] for k in names if not math.isnan(bundle.speeds[k][j])}
                for a in sp:
                    for b in sp:
                        if a >= b:
                            continue
                        d = curve_distance(sp[a], sp[b])
                        fa, fb = sorted((bundle.families[a], bundle.families[b]))
                        key = f"{fa}|{fb}"
                        fam_min[key] = min(fam_min.get(key, math.inf), d)
                        if d <= tol:
                            raise AdmissibilityViolation(
                                f"{bundle.families[a]} curve {a} meets {bundle.families[b]} "
                                f"curve {b} at x2 = {x2[j]:.4g}, (t, x1) = {at}", (fa, fb)
                            )
                        per_curve[a] = min(per_curve.get(a, math.inf), d)
                        per_curve[b] = min(per_curve.get(b, math.inf), d)
        traced = fam_min
    return {
        "regime": classify_regime(cb).label,
        "constant_state": const,
        "perturbed_min": traced,
        "radii": {k: 0.5 * v for k, v in per_curve.items()},
        "min_radius": 0.5 * min(per_curve.values()),
    }
