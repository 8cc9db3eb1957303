"""Pointwise upper triangularization of the interior symbol.

``Q0`` replaces the second unit column by the decaying eigenvector lifted to
all seven components; ``R0`` adds a third row that annihilates the algebraic
columns. The lifted components (hat and bar) are written in closed form
after cancelling the pole factors, using two pole-free combinations of the
eigenvector ``E = (E1, E2)``::

    sp = (E1 + E2) / (X**2 + G eta**2)      sm = (E1 - E2) / X

both of which are polynomials in ``(tau, eta, omega)`` for either family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .background import PressureLaw, SideState
from .errors import ConstructionFailure, NearGlancing, StructureMismatch
from .modal import ModeData, mode_data
from .symbols import ALG, Frequency, MatrixSymbol7, symbol_matrix

XI_TOL = 1e-12
CONSTRUCTION_TOL = 1e-8
PATTERN_TOL = 1e-9

# 0-based Theta_1 slots of the triangularized symbol
THETA_SLOTS = ((0, 2), (1, 0), (1, 4), (1, 6), (4, 2), (6, 2))


def _family_sums(md: ModeData):
    t = md.terms
    aw_x = t.X * md.omega
    aw_h = t.H * md.omega
    if md.side == "r":
        return -(t.Q1 + aw_x), -(t.Pdiff + aw_h)
    return t.Q1 - aw_x, -(t.Pdiff - aw_h)


def _hat(s: SideState, md: ModeData, eta: float):
    t = md.terms
    sp, sm = _family_sums(md)
    c, rho, br = t.c, s.rho, t.br
    ie = 1j * eta
    w1 = -ie * c * c * t.X * sp / (br * rho)
    k = eta * eta * c * c * sp / (br * rho)
    return {1: w1, 4: s.F11 * k, 5: ie * c * s.F11 * sm / rho, 6: s.F12 * k, 7: ie * c * s.F12 * sm / rho}


def _bar(s: SideState, md: ModeData, eta: float, xi: complex):
    t = md.terms
    sp, sm = _family_sums(md)
    ie = 1j * eta
    k1 = ie * t.p2 * s.rho / (2 * t.c * t.br**2)
    k2 = ie * t.p2 * s.rho / (2 * t.c**2 * t.br)
    return {
        1: k1 * t.X * sp / xi,
        4: ie * s.F11 * k1 * sp / xi,
        5: k2 * s.F11 * sm / xi,
        6: ie * s.F12 * k1 * sp / xi,
        7: k2 * s.F12 * sm / xi,
    }


def _symbol(s, law, f, kappa0):
    return symbol_matrix(s, law, f.tau, f.eta, kappa0)


def build_Q0(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5, md: ModeData | None = None):
    """Return ``(Q0, hat_components)``; free column is ``(U2, U3) = (1, 0)``."""
    md = md or mode_data(s, law, f)
    E = md.side_family
    hat = _hat(s, md, f.eta)
    Q = np.eye(7, dtype=complex)
    Q[:, 1] = [hat[1], E[0], E[1], hat[4], hat[5], hat[6], hat[7]]
    Q[1, 2], Q[2, 2] = 1.0, 0.0
    A = _symbol(s, law, f, kappa0)
    col = A @ Q[:, 1]
    scale = np.linalg.norm(A) * np.linalg.norm(Q[:, 1])
    for i in ALG:
        if abs(col[i]) > CONSTRUCTION_TOL * scale:
            raise ConstructionFailure(
                f"row {i + 1} of the lifted column leaves residual {abs(col[i]) / scale:.3e}", row=i + 1
            )
    return Q, hat


def build_R0(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5, md: ModeData | None = None):
    """Return ``(R0, bar_components, xi)`` with ``xi = det Q0``."""
    md = md or mode_data(s, law, f)
    E = md.side_family
    xi = -E[1]
    if abs(xi) <= XI_TOL:
        raise NearGlancing(f"|det Q0| = {abs(xi):.3e} on side {md.side}")
    bar = _bar(s, md, f.eta, xi)
    R = np.eye(7, dtype=complex)
    R[1, 1], R[1, 2] = 0.0, -1.0 / xi
    R[2, :] = [bar[1], -E[1] / xi, E[0] / xi, bar[4], bar[5], bar[6], bar[7]]
    return R, bar, xi


# ---------------------------------------------------------------------------
# Triangularized symbol and its structure


def expected_pattern(s: SideState, md: ModeData, f: Frequency, swap: bool = False) -> np.ndarray:
    """Specified entries of the triangularized symbol; ``nan`` marks Theta slots."""
    X = md.terms.X
    ie = 1j * f.eta
    P = np.zeros((7, 7), dtype=complex)
    for i in ALG:
        P[i, i] = X
    P[0, 3] = P[3, 0] = -ie * s.F11
    P[0, 5] = P[5, 0] = -ie * s.F12
    lam_in = -md.omega - 1j * md.varpi
    lam_out = md.omega - 1j * md.varpi
    P[1, 1], P[2, 2] = (lam_out, lam_in) if swap else (lam_in, lam_out)
    for ij in THETA_SLOTS:
        P[ij] = np.nan
    return P


@dataclass(frozen=True)
class StructureReport:
    max_residual: float
    worst_entry: tuple[int, int]
    residuals: np.ndarray = field(repr=False)
    theta: dict = field(repr=False)
    diagonal_assignment: str = "(2,2)=-omega-i*varpi"

    @property
    def passed(self) -> bool:
        return self.max_residual <= PATTERN_TOL


def structure_report(At: np.ndarray, R: np.ndarray, A: np.ndarray, Q: np.ndarray,
                     s: SideState, md: ModeData, f: Frequency) -> StructureReport:
    """Entrywise residuals scaled by ``|R0 row i| |A| |Q0 col j|``."""
    scale = np.outer(np.linalg.norm(R, axis=1), np.linalg.norm(Q, axis=0)) * np.linalg.norm(A)
    best = None
    for swap in (False, True):
        P = expected_pattern(s, md, f, swap)
        mask = ~np.isnan(P)
        res = np.zeros((7, 7))
        res[mask] = np.abs(At[mask] - P[mask]) / scale[mask]
        if best is None or res.max() < best[0].max():
            best = (res, swap)
    res, swap = best
    worst = np.unravel_index(int(np.argmax(res)), res.shape)
    theta = {(i + 1, j + 1): complex(At[i, j]) for i, j in THETA_SLOTS}
    label = "(2,2)=omega-i*varpi" if swap else "(2,2)=-omega-i*varpi"
    return StructureReport(float(res.max()), (int(worst[0]) + 1, int(worst[1]) + 1), res, theta, label)


@dataclass(frozen=True)
class TriangularizationData:
    side: str
    Q0: np.ndarray
    R0: np.ndarray
    Atilde: np.ndarray
    hat: dict
    bar: dict
    xi: complex
    mode: ModeData = field(repr=False)
    report: StructureReport = field(repr=False)


def triangularize(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5) -> TriangularizationData:
    md = mode_data(s, law, f)
    Q, hat = build_Q0(s, law, f, kappa0, md)
    R, bar, xi = build_R0(s, law, f, kappa0, md)
    A = _symbol(s, law, f, kappa0)
    At = R @ A @ Q
    rep = structure_report(At, R, A, Q, s, md, f)
    return TriangularizationData(md.side, Q, R, At, hat, bar, xi, md, rep)


def build_Atilde(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5) -> MatrixSymbol7:
    """``R0 A Q0``; raises :class:`StructureMismatch` if the pattern fails."""
    data = triangularize(s, law, f, kappa0)
    rep = data.report
    if not rep.passed:
        i, j = rep.worst_entry
        raise StructureMismatch(
            f"entry ({i},{j}) misses its expected value by {rep.max_residual:.3e} (relative)", rep
        )
    return MatrixSymbol7(data.Atilde, data.side, 1)


# ---------------------------------------------------------------------------
# Case-1 bound and Poisson bracket


def case1_lower_bound(s: SideState, law: PressureLaw, radius: float, n: int = 64) -> float:
    """``min(-Re omega / Lambda)`` over a neighbourhood of the velocity pole.

    The neighbourhood is ``|delta / eta + v| <= radius``, ``0 <= gamma <= radius``
    on the hemisphere, both signs of ``eta``. ``Lambda = 1`` there.
    """
    from .modal import omega_of

    ds = np.linspace(-radius, radius, n)
    gs = np.linspace(0.0, radius, n)
    S, Gm = np.meshgrid(-s.v + ds, gs)
    out = np.inf
    for sign in (1.0, -1.0):
        eta = sign * np.sqrt((1.0 - Gm**2) / (1.0 + S**2))
        tau = Gm + 1j * S * eta
        w = omega_of(s, law, tau, eta)
        lam = np.sqrt(Gm**2 + (S * eta) ** 2 + eta**2)
        out = min(out, float(np.min(-np.real(w) / lam)))
    return out


LinearSymbolField = Callable[[float, float], tuple[np.ndarray, np.ndarray]]


def poisson_bracket(a: LinearSymbolField, b: LinearSymbolField, t: float, x1: float,
                    tau: complex, eta: float, h: float = 1e-5) -> np.ndarray:
    """``(1/i)(dA/d delta . dB/dt + dA/d eta . dB/dx1)`` for symbols ``tau C0 + i eta C1``.

    ``a`` and ``b`` map ``(t, x1)`` to their coefficient pair ``(C0, C1)``. The
    frequency derivatives are exact; the space-time ones are central
    differences with step ``h``. Exploratory helper only.
    """
    A0, A1 = a(t, x1)
    dA_ddelta = 1j * A0
    dA_deta = 1j * A1

    def B(tt, xx):
        C0, C1 = b(tt, xx)
        return tau * C0 + 1j * eta * C1

    dB_dt = (B(t + h, x1) - B(t - h, x1)) / (2 * h)
    dB_dx = (B(t, x1 + h) - B(t, x1 - h)) / (2 * h)
    return (dA_ddelta @ dB_dt + dA_deta @ dB_dx) / 1j


# ---------------------------------------------------------------------------
# Sampled pattern sweep

NEIGHBOURHOODS = ("velocity_pole", "elastic_pole", "elastic_root", "regular")


@dataclass(frozen=True)
class SweepResult:
    samples: int
    skipped: int
    max_pattern_residual: float
    worst_point: dict | None
    per_kind: dict

    @property
    def passed(self) -> bool:
        return self.samples > 0 and self.max_pattern_residual <= PATTERN_TOL


def _centres(s: SideState, law, roots) -> dict:
    g = np.sqrt(s.G)
    return {
        "velocity_pole": [-s.v],
        "elastic_pole": [-s.v - g, -s.v + g],
        "elastic_root": list(roots),
        "regular": [],
    }


def triangular_sweep(bp, law: PressureLaw | None = None, n: int = 1000, radius: float = 0.05,
                     seed: int = 0, sides=("r", "l")) -> SweepResult:
    """Check the pattern at ``n`` random hemisphere points per side.

    Points are split evenly over the four neighbourhood kinds. Neighbourhood
    points have speed within ``radius`` of a pole or root and ``gamma`` in
    ``[0, radius]``; regular points are uniform on the hemisphere. Exactly
    degenerate draws (glancing, vanishing ``xi``) are counted as skipped.
    """
    from .errors import GlancingDegeneracy
    from .modal import find_roots

    law = law or bp.pressure
    rng = np.random.default_rng(seed)
    roots = find_roots(bp, law).elastic_speeds
    worst, worst_pt, skipped, count = 0.0, None, 0, 0
    per_kind = {k: 0.0 for k in NEIGHBOURHOODS}
    for side in sides:
        st = bp.side(side)
        centres = _centres(st, law, roots)
        for k in range(n):
            kind = NEIGHBOURHOODS[k % 4]
            if kind == "regular" or not centres[kind]:
                g = rng.uniform(0.0, 1.0)
                th = rng.uniform(0.0, 2 * np.pi)
                r = np.sqrt(1.0 - g * g)
                f = Frequency(g, r * np.cos(th), r * np.sin(th))
            else:
                s0 = centres[kind][rng.integers(len(centres[kind]))]
                f = Frequency.from_speed(s0 + rng.uniform(-radius, radius), rng.uniform(0.0, radius),
                                         1.0 if rng.random() < 0.5 else -1.0)
            try:
                rep = triangularize(st, law, f, bp.kappa0).report
            except (GlancingDegeneracy, NearGlancing):
                skipped += 1
                continue
            count += 1
            per_kind[kind] = max(per_kind[kind], rep.max_residual)
            if rep.max_residual >= worst:
                worst = rep.max_residual
                worst_pt = {"side": side, "kind": kind, "gamma": float(f.gamma), "delta": float(f.delta),
                            "eta": float(f.eta), "entry": list(rep.worst_entry)}
    return SweepResult(count, skipped, worst, worst_pt, per_kind)
