"""Independent check of the decaying modes and the determinant.

The oracle never touches the closed-form ``mu``, ``m`` or ``omega``. It
eliminates the algebraic components from the full 7x7 symbol numerically,
solves the characteristic quadratic of the resulting 2x2 generator, keeps the
root with negative real part and back-substitutes for the eigenvector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .background import BackgroundPoint, ConstantBackground, PressureLaw, SideState, make_constant_background
from .errors import DomainError, OracleAbstention
from .modal import _scan_bound, lopatinskii_normalized, mode_data
from .symbols import ALG, DIFF, Frequency, beta_matrix, symbol_matrix

ORACLE_MIN_GAMMA = 0.05
GAP_TOL = 2e-6


def reduced_generator(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5) -> np.ndarray:
    """``G`` in ``dW_d/dx2 = G W_d`` by numeric elimination of the algebraic block."""
    A = symbol_matrix(s, law, f.tau, f.eta, kappa0)
    a, d = list(ALG), list(DIFF)
    Aaa = A[np.ix_(a, a)]
    S = A[np.ix_(d, d)] - A[np.ix_(d, a)] @ np.linalg.solve(Aaa, A[np.ix_(a, d)])
    return -S


def oracle_stable_subspace(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5,
                           min_gamma: float = ORACLE_MIN_GAMMA) -> np.ndarray:
    """Unit vector spanning the decaying solutions of the reduced ODE."""
    if f.gamma < min_gamma:
        raise DomainError(f"oracle needs Re tau >= {min_gamma}, got {f.gamma}")
    G = reduced_generator(s, law, f, kappa0)
    tr = G[0, 0] + G[1, 1]
    det = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
    disc = cmath.sqrt(tr * tr - 4 * det)
    lams = ((tr + disc) / 2, (tr - disc) / 2)
    if abs(disc) < GAP_TOL * f.norm:
        raise OracleAbstention(f"spectral gap {abs(disc):.3e} too small")
    neg = [lam for lam in lams if lam.real < 0]
    if len(neg) != 1:
        raise OracleAbstention(f"no unique decaying root: {lams}")
    lam = neg[0]
    v1 = np.array([G[0, 1], lam - G[0, 0]])
    v2 = np.array([lam - G[1, 1], G[1, 0]])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    return v / np.linalg.norm(v)


def subspace_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Angle between the complex lines spanned by two 2-vectors."""
    cross = abs(a[0] * b[1] - a[1] * b[0])
    return math.asin(min(1.0, cross / (np.linalg.norm(a) * np.linalg.norm(b))))


def _bp(bg) -> BackgroundPoint:
    return make_constant_background(bg) if isinstance(bg, ConstantBackground) else bg


def oracle_boundary_det(bg, law: PressureLaw, f: Frequency, min_gamma: float = ORACLE_MIN_GAMMA) -> complex:
    """Determinant of ``beta`` against the oracle's unit decaying vectors."""
    bp = _bp(bg)
    er = oracle_stable_subspace(bp.right, law, f, bp.kappa0, min_gamma)
    el = oracle_stable_subspace(bp.left, law, f, bp.kappa0, min_gamma)
    beta = beta_matrix(bp, f.tau, f.eta)
    return complex(np.linalg.det(np.column_stack([beta[:, :2] @ er, beta[:, 2:] @ el])))


# ---------------------------------------------------------------------------
# Paired scans


def _minima(fn, ss: np.ndarray, vals: np.ndarray, xatol: float = 1e-11) -> list[float]:
    out = []
    for i in range(1, len(ss) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            res = minimize_scalar(fn, bounds=(ss[i - 1], ss[i + 1]), method="bounded",
                                  options={"xatol": xatol})
            out.append(float(res.x))
    return out


@dataclass(frozen=True)
class OracleResult:
    gamma: float
    speeds: np.ndarray
    oracle_det: np.ndarray
    algebraic_det: np.ndarray
    zero_match_report: list  # (algebraic minimum, nearest oracle minimum, distance)
    max_angle: float | None = None

    @property
    def max_zero_distance(self) -> float:
        return max((d for *_, d in self.zero_match_report), default=0.0)


def oracle_check(bg, law: PressureLaw | None = None, gamma: float = ORACLE_MIN_GAMMA,
                 n: int = 2048, eta_sign: float = 1.0) -> OracleResult:
    """Compare minima of the two normalized determinants along a ``gamma`` slice."""
    bp = _bp(bg)
    law = law or bp.pressure
    S = _scan_bound(bp.right, bp.left, law)
    ss = np.linspace(-S, S, n)

    def alg(s):
        return lopatinskii_normalized(bp, law, Frequency.from_speed(s, gamma, eta_sign))

    def orc(s):
        return abs(oracle_boundary_det(bp, law, Frequency.from_speed(s, gamma, eta_sign), min(gamma, ORACLE_MIN_GAMMA)))

    a = np.array([alg(s) for s in ss])
    o = np.array([orc(s) for s in ss])
    amin = _minima(alg, ss, a)
    omin = _minima(orc, ss, o)
    report = []
    for z in amin:
        near = min(omin, key=lambda w: abs(w - z)) if omin else math.nan
        report.append((z, near, abs(near - z) if omin else math.inf))
    return OracleResult(gamma, ss, o, a, report)


def angle_scan(bg, law: PressureLaw | None = None, n: int = 500, min_gamma: float = 0.1,
               seed: int = 0) -> tuple[float, int]:
    """Largest oracle/modal angle over random hemisphere points; returns (angle, abstentions)."""
    bp = _bp(bg)
    law = law or bp.pressure
    rng = np.random.default_rng(seed)
    worst, skipped = 0.0, 0
    for _ in range(n):
        g = rng.uniform(min_gamma, 1.0)
        th = rng.uniform(0.0, 2 * math.pi)
        r = math.sqrt(1.0 - g * g)
        f = Frequency(g, r * math.cos(th), r * math.sin(th))
        for st in (bp.right, bp.left):
            try:
                e = oracle_stable_subspace(st, law, f, bp.kappa0, min_gamma)
            except OracleAbstention:
                skipped += 1
                continue
            worst = max(worst, subspace_angle(e, mode_data(st, law, f).E))
    return worst, skipped
