"""Background states on both sides of the sheet.

A background is described pointwise by a pair of :class:`SideState` objects
(``right`` lives above the front, ``left`` is the mirrored lower state) plus
the pressure law. The constant states are the flat-front pair built from
``(rho_bar, v_bar, F11_bar, F12_bar)``; the perturbed family adds compactly
supported bumps and derives the constrained fields so that the eikonal and
jump relations hold by construction.

Unknowns are ordered ``(rho, v, u, F11, F21, F12, F22)`` everywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, NondegeneracyError, ResolutionError

DEFAULT_KAPPA0 = 0.5
EXCLUSION_RTOL = 1e-8


# ---------------------------------------------------------------------------
# Pressure law


@dataclass(frozen=True)
class PressureLaw:
    """Polytropic law ``p = kappa * rho**gamma_ad``."""

    kind: str = "polytropic"
    kappa: float = 0.5
    gamma_ad: float = 2.0

    def __post_init__(self):
        if self.kind != "polytropic":
            raise DomainError(f"unsupported pressure law kind {self.kind!r}")
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        if not self.gamma_ad > 1:
            raise DomainError("gamma_ad must exceed 1")

    def pressure(self, rho: float) -> float:
        return self.kappa * rho**self.gamma_ad

    def dp(self, rho: float) -> float:
        """p'(rho)."""
        if not rho > 0:
            raise DomainError(f"density must be positive, got {rho}")
        return self.kappa * self.gamma_ad * rho ** (self.gamma_ad - 1.0)


def sound_speed(law: PressureLaw, rho: float) -> float:
    """Return ``c(rho) = sqrt(p'(rho))``."""
    return math.sqrt(law.dp(rho))


# ---------------------------------------------------------------------------
# Pointwise states


@dataclass(frozen=True)
class SideState:
    """Physical fields and front-map gradient on one side at one point."""

    rho: float
    v: float
    u: float
    F11: float
    F21: float
    F12: float
    F22: float
    dtPhi: float = 0.0
    d1Phi: float = 0.0
    d2Phi: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError(f"density must be positive, got {self.rho}")

    @property
    def side(self) -> str:
        return "r" if self.d2Phi > 0 else "l"

    @property
    def U(self) -> np.ndarray:
        return np.array([self.rho, self.v, self.u, self.F11, self.F21, self.F12, self.F22])

    @property
    def G(self) -> float:
        """Squared norm ``F11**2 + F12**2`` of the first deformation column."""
        return self.F11**2 + self.F12**2

    @property
    def bracket(self) -> float:
        """``sqrt(1 + d1Phi**2)``."""
        return math.sqrt(1.0 + self.d1Phi**2)

    def eikonal_residuals(self) -> tuple[float, float, float]:
        return (
            self.dtPhi + self.v * self.d1Phi - self.u,
            self.F11 * self.d1Phi - self.F21,
            self.F12 * self.d1Phi - self.F22,
        )

    def check_nondegenerate(self, kappa0: float = DEFAULT_KAPPA0) -> None:
        if abs(self.d2Phi) < kappa0:
            raise NondegeneracyError(
                f"|d2Phi| = {abs(self.d2Phi):.6g} is below kappa0 = {kappa0}"
            )

    def replace(self, **changes) -> "SideState":
        return replace(self, **changes)


@dataclass(frozen=True)
class ConstantBackground:
    rho_bar: float
    v_bar: float
    F11_bar: float
    F12_bar: float = 0.0
    pressure: PressureLaw = field(default_factory=PressureLaw)
    kappa0: float = DEFAULT_KAPPA0

    def __post_init__(self):
        if not self.rho_bar > 0:
            raise DomainError(f"rho_bar must be positive, got {self.rho_bar}")

    @property
    def c(self) -> float:
        return sound_speed(self.pressure, self.rho_bar)

    @property
    def F(self) -> float:
        return math.hypot(self.F11_bar, self.F12_bar)


@dataclass(frozen=True)
class BackgroundPoint:
    right: SideState
    left: SideState
    pressure: PressureLaw = field(default_factory=PressureLaw)
    location: tuple[float, float, float] = (0.0, 0.0, 0.0)
    base: ConstantBackground | None = None
    kappa0: float = DEFAULT_KAPPA0

    @property
    def on_boundary(self) -> bool:
        return self.location[2] == 0.0

    def side(self, which: str) -> SideState:
        if which == "r":
            return self.right
        if which == "l":
            return self.left
        raise DomainError(f"side must be 'r' or 'l', got {which!r}")

    def rh_residuals(self) -> tuple[float, ...]:
        """The seven jump residuals, with ``d1phi`` taken from the r trace."""
        r, l = self.right, self.left
        p1 = r.d1Phi
        return (
            (r.v - l.v) * p1 - (r.u - l.u),
            r.dtPhi + r.v * p1 - r.u,
            (r.F11 - l.F11) * p1 - (r.F21 - l.F21),
            r.F11 * p1 - r.F21,
            (r.F12 - l.F12) * p1 - (r.F22 - l.F22),
            r.F12 * p1 - r.F22,
            r.rho - l.rho,
        )


def make_constant_background(cb: ConstantBackground) -> BackgroundPoint:
    right = SideState(cb.rho_bar, cb.v_bar, 0.0, cb.F11_bar, 0.0, cb.F12_bar, 0.0, 0.0, 0.0, 1.0)
    left = SideState(cb.rho_bar, -cb.v_bar, 0.0, -cb.F11_bar, 0.0, -cb.F12_bar, 0.0, 0.0, 0.0, -1.0)
    return BackgroundPoint(right, left, cb.pressure, (0.0, 0.0, 0.0), cb, cb.kappa0)


# ---------------------------------------------------------------------------
# Constraint diagnostics


@dataclass(frozen=True)
class ConstraintReport:
    rh: tuple[float, ...] | None
    eikonal_r: tuple[float, float, float]
    eikonal_l: tuple[float, float, float]
    tol: float

    @property
    def max_rh(self) -> float:
        return max(map(abs, self.rh)) if self.rh else 0.0

    @property
    def max_eikonal(self) -> float:
        return max(abs(x) for x in self.eikonal_r + self.eikonal_l)

    @property
    def max_residual(self) -> float:
        return max(self.max_rh, self.max_eikonal)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def check_constraints(bp: BackgroundPoint, tol: float = 1e-10) -> ConstraintReport:
    rh = bp.rh_residuals() if bp.on_boundary else None
    return ConstraintReport(rh, bp.right.eikonal_residuals(), bp.left.eikonal_residuals(), tol)


# ---------------------------------------------------------------------------
# Regime classification


class Regime(str, enum.Enum):
    SUPERSONIC_STABLE = "SupersonicStable"
    SUBSONIC_STABLE = "SubsonicStable"
    EXCLUDED = "Excluded"
    OUTSIDE_THEOREM = "OutsideTheorem"


@dataclass(frozen=True)
class RegimeClass:
    regime: Regime
    surface: int | None = None
    exclusion_values: tuple[float, float, float, float] = ()

    @property
    def label(self) -> str:
        if self.regime is Regime.EXCLUDED:
            return f"Excluded({self.surface})"
        return self.regime.value

    @property
    def stable(self) -> bool:
        return self.regime in (Regime.SUPERSONIC_STABLE, Regime.SUBSONIC_STABLE)

    @property
    def supersonic(self) -> bool:
        return self.regime is Regime.SUPERSONIC_STABLE


def exclusion_values(F2: float, c: float) -> tuple[float, float, float, float]:
    """The four forbidden values of ``v_bar**2`` in the subsonic regime."""
    c2 = c * c
    return (
        F2 / 4.0,
        (math.sqrt(F2 + c2) - math.sqrt(F2)) ** 2 / 4.0,
        (F2 + c2) / 4.0,
        F2 * (2.0 * c2 + F2) / (4.0 * (F2 + c2)),
    )


def classify_speeds(v: float, F: float, c: float, tol: float = EXCLUSION_RTOL) -> RegimeClass:
    """Classify from ``(v_bar, |F_bar|, c)`` directly."""
    v2, F2 = v * v, F * F
    ex = exclusion_values(F2, c)
    if v2 > 2.0 * c * c + F2:
        return RegimeClass(Regime.SUPERSONIC_STABLE, None, ex)
    if v2 < F2:
        for k, e in enumerate(ex, start=1):
            if abs(v2 - e) <= tol * abs(e):
                return RegimeClass(Regime.EXCLUDED, k, ex)
        return RegimeClass(Regime.SUBSONIC_STABLE, None, ex)
    return RegimeClass(Regime.OUTSIDE_THEOREM, None, ex)


def classify_regime(cb: ConstantBackground, tol: float = EXCLUSION_RTOL) -> RegimeClass:
    return classify_speeds(cb.v_bar, cb.F, cb.c, tol)


# ---------------------------------------------------------------------------
# Perturbations


def _psi(x):
    """exp(-1/x) for x > 0, else 0 (vectorized)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _profile(kind: str, q):
    """Radial profile g and dg/dq as functions of q = r**2."""
    q = np.asarray(q, dtype=float)
    g = np.zeros_like(q)
    gq = np.zeros_like(q)
    inside = q < 1.0
    qi = q[inside]
    if kind == "smooth":
        val = np.exp(1.0 - 1.0 / (1.0 - qi))
        g[inside] = val
        gq[inside] = -val / (1.0 - qi) ** 2
    elif kind == "gaussian":
        # exp(-4.5 q) glued to zero by a C-infinity cutoff on 0.25 <= q <= 1
        a = _psi(1.0 - qi)
        b = _psi(qi - 0.25)
        with np.errstate(divide="ignore", invalid="ignore"):
            da = np.where(a > 0, -a / (1.0 - qi) ** 2, 0.0)
            db = np.where(b > 0, b / (qi - 0.25) ** 2, 0.0)
        h = a / (a + b)
        dh = (da * b - a * db) / (a + b) ** 2
        e = np.exp(-4.5 * qi)
        g[inside] = e * h
        gq[inside] = e * (dh - 4.5 * h)
    else:
        raise DomainError(f"unknown bump kind {kind!r}")
    return g, gq


@lru_cache(maxsize=None)
def _max_radial_slope(kind: str) -> float:
    r = np.linspace(0.0, 1.0, 200001)
    _, gq = _profile(kind, r * r)
    return float(np.max(np.abs(2.0 * r * gq)))


@dataclass(frozen=True)
class Bump:
    """Compactly supported bump ``amplitude * g(|(x - center) / width|)``.

    Coordinates are ``(t, x1, x2)``; ``width`` may be a scalar or a triple.
    """

    amplitude: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    width: tuple[float, float, float] = (1.0, 1.0, 1.0)
    kind: str = "smooth"

    def __post_init__(self):
        w = self.width
        if np.isscalar(w):
            w = (float(w),) * 3
        w = tuple(float(x) for x in w)
        if len(w) != 3 or min(w) <= 0:
            raise DomainError("bump width must be positive (scalar or triple)")
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "center", tuple(float(x) for x in self.center))
        _profile(self.kind, np.zeros(1))

    def evaluate(self, t, x1, x2):
        """Return value and gradient ``(f, f_t, f_1, f_2)``; broadcasts."""
        t, x1, x2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x1, x2)))
        z = [(a - c) / w for a, c, w in zip((t, x1, x2), self.center, self.width)]
        q = z[0] ** 2 + z[1] ** 2 + z[2] ** 2
        g, gq = _profile(self.kind, q)
        A = self.amplitude
        grads = [A * gq * 2.0 * zk / w for zk, w in zip(z, self.width)]
        return (A * g, *grads)

    def max_abs_d2(self) -> float:
        """Exact supremum of ``|d f / d x2|``."""
        return abs(self.amplitude) * _max_radial_slope(self.kind) / self.width[2]


_PERT_FIELDS = ("phi", "rho", "v_r", "v_l", "F11_r", "F11_l", "F12_r", "F12_l")


@dataclass(frozen=True)
class PerturbationSpec:
    """Bumps for the free perturbation fields; ``None`` means zero."""

    phi: Bump | None = None
    rho: Bump | None = None
    v_r: Bump | None = None
    v_l: Bump | None = None
    F11_r: Bump | None = None
    F11_l: Bump | None = None
    F12_r: Bump | None = None
    F12_l: Bump | None = None

    def bumps(self) -> Iterable[tuple[str, Bump]]:
        for name in _PERT_FIELDS:
            b = getattr(self, name)
            if b is not None:
                yield name, b

    @property
    def is_zero(self) -> bool:
        return all(b.amplitude == 0 for _, b in self.bumps())

    @classmethod
    def from_dict(cls, data: dict) -> "PerturbationSpec":
        unknown = set(data) - set(_PERT_FIELDS)
        if unknown:
            raise DomainError(f"unknown perturbation fields: {sorted(unknown)}")
        return cls(**{k: Bump(**v) for k, v in data.items() if v is not None})


def _eval(b: Bump | None, t, x1, x2):
    if b is None:
        z = np.zeros(np.broadcast(np.asarray(t), np.asarray(x1), np.asarray(x2)).shape)
        return z, z, z, z
    return b.evaluate(t, x1, x2)


def check_perturbation(cb: ConstantBackground, pert: PerturbationSpec) -> None:
    """Reject bumps that can push ``|d2Phi|`` below ``kappa0`` anywhere."""
    if pert.phi is not None:
        worst = 1.0 - pert.phi.max_abs_d2()
        if worst < cb.kappa0:
            raise NondegeneracyError(
                f"phi bump allows |d2Phi| down to {worst:.6g} < kappa0 = {cb.kappa0}"
            )


def perturbed_fields(cb: ConstantBackground, pert: PerturbationSpec, t, x1, x2) -> dict:
    """Vectorized evaluation of every field on both sides.

    Returns a dict with keys ``"r"`` and ``"l"``, each mapping field names
    (``rho, v, u, F11, F21, F12, F22, dtPhi, d1Phi, d2Phi, Phi_dot``) to arrays.
    The l side sees the mirrored profiles ``f(t, x1, -x2)`` for ``phi`` and
    ``rho`` so the traces agree at ``x2 = 0``.
    """
    P = _eval(pert.phi, t, x1, x2)
    Pm = _eval(pert.phi, t, x1, -np.asarray(x2, dtype=float))
    R = _eval(pert.rho, t, x1, x2)[0]
    Rm = _eval(pert.rho, t, x1, -np.asarray(x2, dtype=float))[0]
    out = {}
    for side, sgn, phi, rho in (("r", 1.0, P, R), ("l", -1.0, Pm, Rm)):
        v = sgn * cb.v_bar + _eval(getattr(pert, f"v_{side}"), t, x1, x2)[0]
        F11 = sgn * cb.F11_bar + _eval(getattr(pert, f"F11_{side}"), t, x1, x2)[0]
        F12 = sgn * cb.F12_bar + _eval(getattr(pert, f"F12_{side}"), t, x1, x2)[0]
        dt, d1 = phi[1], phi[2]
        # x2 -> -x2 flips the normal derivative of the mirrored profile
        d2 = sgn * (1.0 + phi[3])
        out[side] = dict(
            rho=cb.rho_bar + rho, v=v, u=dt + v * d1,
            F11=F11, F21=F11 * d1, F12=F12, F22=F12 * d1,
            dtPhi=dt, d1Phi=d1, d2Phi=d2, Phi_dot=phi[0],
        )
    return out


def make_perturbed_background(
    cb: ConstantBackground, pert: PerturbationSpec, at: tuple[float, float, float]
) -> BackgroundPoint:
    check_perturbation(cb, pert)
    t, x1, x2 = (float(a) for a in at)
    if x2 < 0:
        raise DomainError("evaluation points must satisfy x2 >= 0")
    f = perturbed_fields(cb, pert, t, x1, x2)
    sides = []
    for s in ("r", "l"):
        d = {k: float(np.asarray(v)) for k, v in f[s].items() if k != "Phi_dot"}
        st = SideState(**d)
        st.check_nondegenerate(cb.kappa0)
        sides.append(st)
    return BackgroundPoint(sides[0], sides[1], cb.pressure, (t, x1, x2), cb, cb.kappa0)


# ---------------------------------------------------------------------------
# Norm estimate


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid over ``(t, x1, x2)``; each axis is ``(lo, hi, n)``."""

    t: tuple[float, float, int]
    x1: tuple[float, float, int]
    x2: tuple[float, float, int]

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, int(n)) for lo, hi, n in (self.t, self.x1, self.x2)]

    def steps(self) -> list[float | None]:
        return [(hi - lo) / (n - 1) if n > 1 else None for lo, hi, n in (self.t, self.x1, self.x2)]


def _multi_indices(order: int):
    for a in range(order + 1):
        for b in range(order + 1 - a):
            for c in range(order + 1 - a - b):
                yield (a, b, c)


def _w_inf(f: np.ndarray, steps, order: int) -> float:
    best = 0.0
    for alpha in _multi_indices(order):
        g = f
        ok = True
        for axis, (k, h) in enumerate(zip(alpha, steps)):
            if k == 0:
                continue
            if h is None or g.shape[axis] <= k:
                ok = False
                break
            g = np.diff(g, n=k, axis=axis) / h**k
        if ok and g.size:
            best = max(best, float(np.max(np.abs(g))))
    return best


def perturbation_norm_estimate(cb: ConstantBackground, pert: PerturbationSpec, grid: GridSpec) -> float:
    """Grid estimate of ``||U_dot||_{W^{2,inf}} + ||Phi_dot||_{W^{3,inf}}``.

    Each norm is the maximum over components and multi-indices of the sup of
    divided differences; axes sampled at a single point contribute no
    derivatives in that direction.
    """
    steps = grid.steps()
    for name, b in pert.bumps():
        if b.amplitude == 0:
            continue
        for axis, h in enumerate(steps):
            if h is not None and b.width[axis] / h < 4.0:
                raise ResolutionError(
                    f"grid step {h:.4g} on axis {axis} gives fewer than 4 points "
                    f"per width of bump {name!r}"
                )
    if pert.is_zero:
        return 0.0
    T, X1, X2 = np.meshgrid(*grid.axes(), indexing="ij")
    f = perturbed_fields(cb, pert, T, X1, X2)
    base = {"r": (cb.rho_bar, cb.v_bar, 0.0, cb.F11_bar, 0.0, cb.F12_bar, 0.0)}
    base["l"] = (cb.rho_bar, -cb.v_bar, 0.0, -cb.F11_bar, 0.0, -cb.F12_bar, 0.0)
    names = ("rho", "v", "u", "F11", "F21", "F12", "F22")
    u_norm = 0.0
    phi_norm = 0.0
    for s in ("r", "l"):
        for name, b0 in zip(names, base[s]):
            u_norm = max(u_norm, _w_inf(f[s][name] - b0, steps, 2))
        phi_norm = max(phi_norm, _w_inf(f[s]["Phi_dot"], steps, 3))
    return u_norm + phi_norm
