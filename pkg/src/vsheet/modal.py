"""Normal modes, the Lopatinskii determinant and the frequency-curve census.

Sign convention. Eliminating the five algebraic components from
``tau A0 + i eta A1_hat`` leaves the reduced system ``d/dx2 W_d = A W_d`` with
``A = [[mu, -m], [m, -mu]] + i varpi I`` (the elimination produces exactly this
matrix, with a plus sign in front). The decaying mode therefore has eigenvalue
``omega + i varpi`` with ``Re omega < 0``, and ``decay_rate`` stores
``Re omega``. On ``Re tau = 0`` the branch is the limit ``gamma -> 0+``.

Pole-safe forms. With ``X = tau + i v eta``, ``H = X**2 + G eta**2`` and
``alpha = X H`` the products ``alpha mu`` and ``alpha m`` are polynomials;
eigenvectors and the triangularization data are built from them so nothing
blows up on the pole set.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .background import (
    BackgroundPoint,
    ConstantBackground,
    PerturbationSpec,
    PressureLaw,
    Regime,
    RegimeClass,
    SideState,
    classify_regime,
    classify_speeds,
    make_constant_background,
    make_perturbed_background,
    sound_speed,
)
from .errors import DomainError, GlancingDegeneracy, PoleSingularity, UnsupportedRegime
from .symbols import Frequency, beta_matrix

POLE_TOL = 1e-12
FAMILY_TOL = 1e-12
GLANCING_TOL = 1e-12
ROOT_SCAN_POINTS = 4096
COLLISION_TOL = 1e-6


class RootCountAnomaly(UserWarning):
    """Root count differs from the count expected for the regime."""


# ---------------------------------------------------------------------------
# Per-side scalar terms


@dataclass(frozen=True)
class SideTerms:
    """Pole-free building blocks for one side at one frequency."""

    side: str
    X: complex
    H: complex
    G: float
    c: float
    br: float
    p2: float
    varpi: float
    alpha: complex
    alpha_mu: complex
    alpha_m: complex
    omega2: complex
    Q1: complex     # X (mu + m)
    Pdiff: complex  # H (mu - m)


def side_terms(s: SideState, law: PressureLaw, tau: complex, eta: float) -> SideTerms:
    c = sound_speed(law, s.rho)
    br = s.bracket
    p2 = s.d2Phi
    G = s.G
    X = tau + 1j * s.v * eta
    H = X * X + G * eta * eta
    e2 = eta * eta
    cb = c * br
    alpha_mu = -p2 * X * X * H / cb - p2 * G * e2 * H / (2 * cb) - p2 * c * X * X * e2 / (2 * br**3)
    alpha_m = -p2 * G * e2 * H / (2 * cb) + p2 * c * X * X * e2 / (2 * br**3)
    omega2 = p2 * p2 / (c * c * br**4) * (br * br * H + c * c * e2)
    return SideTerms(
        side=s.side, X=X, H=H, G=G, c=c, br=br, p2=p2,
        varpi=p2 * s.d1Phi * eta / (br * br),
        alpha=X * H, alpha_mu=alpha_mu, alpha_m=alpha_m, omega2=omega2,
        Q1=-p2 * H / cb, Pdiff=-p2 * X * H / cb - p2 * c * X * e2 / br**3,
    )


def select_omega(omega2, tau, v, eta):
    """Decaying root of ``omega**2``: ``Re omega < 0``, limit rule on ``Re tau = 0``.

    Works elementwise on arrays. When the principal root is (numerically)
    imaginary the value is the ``gamma -> 0+`` limit, which has the sign of
    ``-(delta + v eta)`` on the imaginary axis.
    """
    w2 = np.asarray(omega2, dtype=complex)
    r = np.sqrt(w2)
    good = r.real > 1e-13 * np.abs(r)
    sgn = np.sign(np.imag(tau) + v * eta)
    sgn = np.where(sgn == 0, 1.0, sgn)
    out = np.where(good, -r, -1j * sgn * np.abs(r))
    return complex(out) if out.ndim == 0 else out


def omega_of(s: SideState, law: PressureLaw, tau, eta):
    """Vectorized omega for one side (arrays of ``tau`` and ``eta`` allowed)."""
    c = sound_speed(law, s.rho)
    br = s.bracket
    X = tau + 1j * s.v * eta
    w2 = s.d2Phi**2 / (c * c * br**4) * (br * br * (X * X + s.G * eta * eta) + c * c * eta * eta)
    return select_omega(w2, tau, s.v, eta)


# ---------------------------------------------------------------------------
# Reduced symbol and modes


@dataclass(frozen=True)
class ReducedSymbol:
    side: str
    mu: complex
    m: complex
    varpi: float
    A2x2: np.ndarray

    @property
    def generator(self) -> np.ndarray:
        """Matrix ``G`` with ``dW/dx2 = G W`` for the reduced unknowns."""
        return self.A2x2


def _pole_check(t: SideTerms, scale: float) -> None:
    if abs(t.X) <= POLE_TOL * scale:
        raise PoleSingularity("velocity", t.side, t.X)
    if abs(t.H) <= POLE_TOL * scale * scale:
        raise PoleSingularity("elastic", t.side, t.H)


def reduced_symbol(s: SideState, law: PressureLaw, f: Frequency) -> ReducedSymbol:
    t = side_terms(s, law, f.tau, f.eta)
    _pole_check(t, f.norm)
    e2 = f.eta**2
    cb = t.c * t.br
    mu = -t.p2 * t.X / cb - t.p2 * t.G * e2 / (2 * cb * t.X) - t.p2 * t.c * t.X * e2 / (2 * t.br**3 * t.H)
    m = -t.p2 * t.G * e2 / (2 * cb * t.X) + t.p2 * t.c * t.X * e2 / (2 * t.br**3 * t.H)
    A = np.array([[mu, -m], [m, -mu]], dtype=complex) + 1j * t.varpi * np.eye(2)
    return ReducedSymbol(t.side, complex(mu), complex(m), float(t.varpi), A)


@dataclass(frozen=True)
class ModeData:
    side: str
    omega: complex
    varpi: float
    alpha: complex
    alpha_mu: complex
    alpha_m: complex
    E: np.ndarray
    E_r_family: np.ndarray
    E_l_family: np.ndarray
    decay_rate: float
    terms: SideTerms = field(repr=False)

    @property
    def eigenvalue(self) -> complex:
        return self.omega + 1j * self.varpi

    @property
    def side_family(self) -> np.ndarray:
        """The family the determinant formula pairs with this side."""
        return self.E_r_family if self.side == "r" else self.E_l_family

    @property
    def mu(self) -> complex:
        return self.alpha_mu / self.alpha

    @property
    def m(self) -> complex:
        return self.alpha_m / self.alpha

    def scaled_residual(self) -> float:
        """``|alpha (A - lambda) E| / |alpha| |E|``, finite at poles."""
        aw = self.alpha * self.omega
        B = np.array([[self.alpha_mu - aw, -self.alpha_m], [self.alpha_m, -self.alpha_mu - aw]])
        nE = np.linalg.norm(self.E)
        return float(np.linalg.norm(B @ self.E) / (abs(self.alpha) * nE))


def _omega2_scale(t: SideTerms, eta: float) -> float:
    """Size of the summands of ``omega**2``; roundoff in it is relative to this."""
    k = t.p2 * t.p2 / (t.c * t.c * t.br**4)
    return k * (t.br * t.br * (abs(t.X) ** 2 + t.G * eta * eta) + t.c * t.c * eta * eta)


def mode_from_terms(t: SideTerms, omega: complex, scale: float = 1.0) -> ModeData:
    """``scale`` is the size of ``omega**2`` summands (see ``_omega2_scale``)."""
    if abs(omega) ** 2 <= GLANCING_TOL * scale:
        raise GlancingDegeneracy(f"omega vanishes on side {t.side} (|omega| = {abs(omega):.3e})")
    aw = t.alpha * omega
    Er = -np.array([t.alpha_mu + aw, t.alpha_m])
    El = np.array([t.alpha_m, t.alpha_mu - aw])
    nr, nl = np.linalg.norm(Er), np.linalg.norm(El)
    if max(nr, nl) < FAMILY_TOL:
        raise GlancingDegeneracy(
            f"both eigenvector families vanish on side {t.side} (omega = {omega:.3e})"
        )
    E = Er if nr >= nl else El
    return ModeData(
        side=t.side, omega=complex(omega), varpi=float(t.varpi), alpha=t.alpha,
        alpha_mu=t.alpha_mu, alpha_m=t.alpha_m, E=E, E_r_family=Er, E_l_family=El,
        decay_rate=float(np.real(omega)), terms=t,
    )


def mode_data(s: SideState, law: PressureLaw, f: Frequency) -> ModeData:
    t = side_terms(s, law, f.tau, f.eta)
    omega = select_omega(t.omega2, f.tau, s.v, f.eta)
    return mode_from_terms(t, omega, _omega2_scale(t, f.eta))


# ---------------------------------------------------------------------------
# Lopatinskii determinant


def _require_boundary(bp: BackgroundPoint) -> None:
    if bp.location[2] != 0.0:
        raise DomainError(f"determinant needs a boundary point, got x2 = {bp.location[2]}")


def _modes(bp: BackgroundPoint, law: PressureLaw, f: Frequency):
    return mode_data(bp.right, law, f), mode_data(bp.left, law, f)


def lopatinskii_direct(bp: BackgroundPoint, law: PressureLaw, f: Frequency) -> complex:
    """``det(beta . blockdiag(E^r, E^l))`` with each side's own eigenvector family."""
    _require_boundary(bp)
    mr, ml = _modes(bp, law, f)
    beta = beta_matrix(bp, f.tau, f.eta)
    cols = np.column_stack([beta[:, :2] @ mr.E_r_family, beta[:, 2:] @ ml.E_l_family])
    return complex(np.linalg.det(cols))


def lopatinskii_normalized(bp: BackgroundPoint, law: PressureLaw, f: Frequency) -> float:
    """``|det|`` computed with unit eigenvectors; scale- and phase-free."""
    _require_boundary(bp)
    mr, ml = _modes(bp, law, f)
    beta = beta_matrix(bp, f.tau, f.eta)
    er = mr.E / np.linalg.norm(mr.E)
    el = ml.E / np.linalg.norm(ml.E)
    return float(abs(np.linalg.det(np.column_stack([beta[:, :2] @ er, beta[:, 2:] @ el]))))


def _factors(right: SideState, left: SideState, law: PressureLaw, tau, eta, wr, wl):
    a1 = math.sqrt(right.bracket * left.bracket)
    a2r, a2l = right.d2Phi, left.d2Phi
    c = sound_speed(law, right.rho)
    cl = sound_speed(law, left.rho)
    Xr = tau + 1j * right.v * eta
    Xl = tau + 1j * left.v * eta
    e2 = eta * eta
    return (
        c**4 * a1 * a1 / right.rho,
        Xr * Xl,
        a1**4 / (a2r * a2l) * wr * wl + e2,
        wr / a2r - wl / a2l,
        a2r / (a1 * c) * (Xr * Xr + right.G * e2) - Xr * wr,
        a2l / (a1 * cl) * (Xl * Xl + left.G * e2) + Xl * wl,
    )


def lopatinskii_factored(bp: BackgroundPoint, law: PressureLaw, f: Frequency):
    """Product form; returns ``(value, (f1, ..., f6))``."""
    _require_boundary(bp)
    wr = omega_of(bp.right, law, f.tau, f.eta)
    wl = omega_of(bp.left, law, f.tau, f.eta)
    fs = tuple(complex(x) for x in _factors(bp.right, bp.left, law, f.tau, f.eta, wr, wl))
    return complex(np.prod(fs)), fs


# ---------------------------------------------------------------------------
# Roots


@dataclass(frozen=True)
class RootSpeed:
    speed: float
    factor: int  # 3 or 4
    index: int   # k in V_k
    residual: float
    coincides_with: tuple[str, ...] = ()


@dataclass(frozen=True)
class RootSet:
    velocity: tuple[float, float]
    elastic: tuple[RootSpeed, ...]
    expected_elastic: int | None
    anomaly: str | None = None

    @property
    def elastic_speeds(self) -> tuple[float, ...]:
        return tuple(r.speed for r in self.elastic)

    @property
    def all_speeds(self) -> tuple[float, ...]:
        return self.velocity + self.elastic_speeds


def _scan_bound(right: SideState, left: SideState, law: PressureLaw) -> float:
    v = max(abs(right.v), abs(left.v))
    F = max(math.sqrt(right.G), math.sqrt(left.G))
    c = max(sound_speed(law, right.rho), sound_speed(law, left.rho))
    return 2.0 * (v + F + c) + 1.0


def _factor_fn(right, left, law, which):
    def fn(s):
        tau = 1j * np.asarray(s, dtype=float)
        wr = omega_of(right, law, tau, 1.0)
        wl = omega_of(left, law, tau, 1.0)
        return _factors(right, left, law, tau, 1.0, wr, wl)[which - 1]
    return fn


def _refine(fn, a: float, b: float, tol: float = 1e-12) -> float:
    fa, fb = complex(fn(a)), complex(fn(b))
    d = fb - fa
    g = lambda s: (complex(fn(s)) * d.conjugate()).real  # noqa: E731
    ga, gb = g(a), g(b)
    if ga == 0:
        return a
    if gb == 0:
        return b
    if ga * gb < 0:
        while b - a > tol:
            mid = 0.5 * (a + b)
            gm = g(mid)
            if gm == 0:
                return mid
            if (gm < 0) == (ga < 0):
                a, ga = mid, gm
            else:
                b = mid
        return 0.5 * (a + b)
    # no sign change of the projection: golden-section on |f|
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(lambda s: abs(complex(fn(s))), bounds=(a, b), method="bounded",
                          options={"xatol": tol})
    return float(res.x)


def factor_zeros(fn, S: float, n: int = ROOT_SCAN_POINTS) -> list[tuple[float, float]]:
    """Zeros of ``fn`` on ``[-S, S]``: scan, bracket local minima, refine.

    Returns ``(s, |fn(s)|)`` pairs.
    """
    ss = np.linspace(-S, S, n)
    a = np.abs(fn(ss))
    out: list[tuple[float, float]] = []
    for i in range(1, n - 1):
        if a[i] <= a[i - 1] and a[i] <= a[i + 1]:
            lo, hi = ss[i - 1], ss[i + 1]
            s = _refine(fn, lo, hi)
            val = abs(complex(fn(s)))
            ref = max(a[i - 1], a[i + 1])
            if val <= 1e-6 * ref or val == 0.0:
                if not any(abs(s - t) < 1e-8 for t, _ in out):
                    out.append((s, val))
    return out


@lru_cache(maxsize=256)
def _elastic_roots(right: SideState, left: SideState, law: PressureLaw):
    S = _scan_bound(right, left, law)
    f3 = sorted(factor_zeros(_factor_fn(right, left, law, 3), S))
    f4 = sorted(factor_zeros(_factor_fn(right, left, law, 4), S))
    return tuple(f3), tuple(f4)


def _regime_of(bp: BackgroundPoint) -> RegimeClass:
    if bp.base is not None:
        return classify_regime(bp.base)
    r, l = bp.right, bp.left
    v = 0.5 * (r.v - l.v)
    F = math.hypot(0.5 * (r.F11 - l.F11), 0.5 * (r.F12 - l.F12))
    return classify_speeds(v, F, sound_speed(bp.pressure, r.rho))


def _roots_for_pair(right: SideState, left: SideState, law: PressureLaw, regime: RegimeClass) -> RootSet:
    f3, f4 = _elastic_roots(right, left, law)
    vel = (-right.v, -left.v)
    roots = []
    k = 1
    for factor, zs in ((3, f3), (4, f4)):
        for s, res in zs:
            hits = tuple(
                name for name, w in (("velocity_r", vel[0]), ("velocity_l", vel[1]))
                if abs(s - w) < COLLISION_TOL
            )
            roots.append(RootSpeed(float(s), factor, k, float(res), hits))
            k += 1
    expected = None
    anomaly = None
    if regime.regime is Regime.SUPERSONIC_STABLE:
        expected = 3
    elif regime.regime in (Regime.SUBSONIC_STABLE, Regime.EXCLUDED):
        expected = 2
    if expected is not None and len(roots) != expected:
        anomaly = (
            f"found {len(f3)} zeros of factor 3 and {len(f4)} of factor 4; "
            f"{regime.label} expects {expected} elastic roots"
        )
        warnings.warn(anomaly, RootCountAnomaly, stacklevel=3)
    return RootSet(vel, tuple(roots), expected, anomaly)


def find_roots(bp: BackgroundPoint, law: PressureLaw | None = None) -> RootSet:
    """Velocity roots and elastic speeds ``V_k`` on ``Re tau = 0``.

    Speeds are ``s = delta / eta``. ``V1, V2`` come from factor 3 (ascending)
    and ``V3`` from factor 4 when present.
    """
    _require_boundary(bp)
    law = law or bp.pressure
    return _roots_for_pair(bp.right, bp.left, law, _regime_of(bp))


# ---------------------------------------------------------------------------
# Weight function


@dataclass(frozen=True)
class WeightSigma:
    value: complex
    factors: tuple[complex, ...]
    speeds: tuple[float, ...]
    degree: int = 1


def sigma_weight(bp: BackgroundPoint, law: PressureLaw, f: Frequency) -> WeightSigma:
    """Product of ``(delta - s_k eta)`` over the pole and root speeds.

    Speeds come from the local state at ``bp`` (interior points allowed); the
    value is extended off the hemisphere with degree one.
    """
    regime = _regime_of(bp)
    if regime.regime is Regime.OUTSIDE_THEOREM:
        raise UnsupportedRegime("no weight function in the band F^2 <= v^2 <= 2c^2 + F^2")
    rs = _roots_for_pair(bp.right, bp.left, law, regime)
    speeds = rs.velocity + tuple(r.speed for r in rs.elastic)
    lam = f.norm
    d, e = f.delta / lam, f.eta / lam
    fac = tuple(complex(d - s * e) for s in speeds)
    return WeightSigma(lam * complex(np.prod(fac)), fac, speeds)


# ---------------------------------------------------------------------------
# Frequency classes and curve geometry


class FrequencyKind(str, enum.Enum):
    POLE_VELOCITY = "PoleVelocity"
    POLE_ELASTIC = "PoleElastic"
    ROOT_ELASTIC = "RootElastic"
    OMEGA_ZERO = "OmegaZero"
    REGULAR = "Regular"


@dataclass(frozen=True)
class Curve:
    family: str
    label: str
    speed: float
    side: str | None = None


def curve_point(s: float) -> np.ndarray:
    return np.array([0.0, s, 1.0]) / math.sqrt(1.0 + s * s)


def chordal_distance_to_curve(p: np.ndarray, s: float) -> float:
    q = curve_point(s)
    return float(min(np.linalg.norm(p - q), np.linalg.norm(p + q)))


def curve_distance(s1: float, s2: float) -> float:
    return chordal_distance_to_curve(curve_point(s1), s2)


def curves_for_pair(right: SideState, left: SideState, law: PressureLaw, roots: RootSet) -> list[Curve]:
    out = []
    for st, side in ((right, "r"), (left, "l")):
        out.append(Curve(FrequencyKind.POLE_VELOCITY.value, f"v_{side}", -st.v, side))
    for st, side in ((right, "r"), (left, "l")):
        g = math.sqrt(st.G)
        out.append(Curve(FrequencyKind.POLE_ELASTIC.value, f"e_{side}+", -(st.v + g), side))
        out.append(Curve(FrequencyKind.POLE_ELASTIC.value, f"e_{side}-", -(st.v - g), side))
    for r in roots.elastic:
        out.append(Curve(FrequencyKind.ROOT_ELASTIC.value, f"V{r.index}", r.speed))
    for st, side in ((right, "r"), (left, "l")):
        q = math.sqrt(st.G + sound_speed(law, st.rho) ** 2 / st.bracket**2)
        out.append(Curve(FrequencyKind.OMEGA_ZERO.value, f"w_{side}+", -st.v + q, side))
        out.append(Curve(FrequencyKind.OMEGA_ZERO.value, f"w_{side}-", -st.v - q, side))
    return out


@dataclass(frozen=True)
class FrequencyClass:
    kind: FrequencyKind
    side: str | None
    label: str | None
    distance: float
    distances: dict

    @property
    def name(self) -> str:
        if self.kind is FrequencyKind.REGULAR:
            return self.kind.value
        tag = self.side if self.side else self.label
        return f"{self.kind.value}({tag})"


_CLASS_ORDER = [k.value for k in FrequencyKind if k is not FrequencyKind.REGULAR]


def classify_frequency(bp: BackgroundPoint, law: PressureLaw, f: Frequency, tol: float = COLLISION_TOL) -> FrequencyClass:
    if not f.on_hemisphere:
        raise DomainError("classify_frequency expects a point of the unit hemisphere")
    roots = _roots_for_pair(bp.right, bp.left, law, _regime_of(bp))
    return _classify_with(curves_for_pair(bp.right, bp.left, law, roots), f, tol)


def _classify_with(curves: list[Curve], f: Frequency, tol: float) -> FrequencyClass:
    p = np.array([f.gamma, f.delta, f.eta])
    best: dict[str, tuple[float, Curve]] = {}
    for cv in curves:
        d = chordal_distance_to_curve(p, cv.speed)
        if cv.family not in best or d < best[cv.family][0]:
            best[cv.family] = (d, cv)
    distances = {k: best[k][0] if k in best else math.inf for k in _CLASS_ORDER}
    winner = min(_CLASS_ORDER, key=lambda k: (distances[k], _CLASS_ORDER.index(k)))
    if distances[winner] <= tol:
        d, cv = best[winner]
        return FrequencyClass(FrequencyKind(winner), cv.side, cv.label, d, distances)
    return FrequencyClass(FrequencyKind.REGULAR, None, None, distances[winner], distances)


@dataclass(frozen=True)
class SeparationMatrix:
    families: tuple[str, ...]
    distances: dict  # (famA, famB) -> float or "Identical"
    closest: dict    # (famA, famB) -> (labelA, labelB)
    collisions: tuple[tuple[str, str, str, str, float], ...]
    curves: tuple[Curve, ...]

    @property
    def collision_pairs(self) -> set[frozenset]:
        return {frozenset((a, b)) for a, b, *_ in self.collisions}

    def min_separation(self, label: str) -> float:
        """Smallest distance from the named curve to any non-identical other curve."""
        mine = next(c for c in self.curves if c.label == label)
        return min(
            (curve_distance(mine.speed, o.speed) for o in self.curves if o.label != mine.label),
            default=math.inf,
        )


_SEP_FAMILIES = ("PoleVelocity", "RootVelocity", "PoleElastic", "RootElastic", "OmegaZero")


def separation_from_curves(curves: list[Curve], tol: float = COLLISION_TOL) -> SeparationMatrix:
    dist: dict = {}
    closest: dict = {}
    collisions = []
    fams = {f: [c for c in curves if c.family == f] for f in _SEP_FAMILIES}
    fams["RootVelocity"] = [Curve("RootVelocity", c.label, c.speed, c.side) for c in fams["PoleVelocity"]]
    for i, fa in enumerate(_SEP_FAMILIES):
        for fb in _SEP_FAMILIES[i:]:
            if {fa, fb} == {"PoleVelocity", "RootVelocity"}:
                dist[(fa, fb)] = "Identical"
                continue
            if "RootVelocity" in (fa, fb):
                # mirrors PoleVelocity; reported once under that name
                continue
            best = (math.inf, None, None)
            for ca in fams[fa]:
                for cb in fams[fb]:
                    if fa == fb and ca.label >= cb.label:
                        continue
                    d = curve_distance(ca.speed, cb.speed)
                    if d < best[0]:
                        best = (d, ca.label, cb.label)
                    if d <= tol:
                        collisions.append((fa, fb, ca.label, cb.label, d))
            dist[(fa, fb)] = best[0]
            closest[(fa, fb)] = (best[1], best[2])
    return SeparationMatrix(_SEP_FAMILIES, dist, closest, tuple(collisions), tuple(curves))


def curve_separation(bg, law: PressureLaw | None = None, tol: float = COLLISION_TOL) -> SeparationMatrix:
    """Pairwise distances on the hemisphere between all curve families."""
    bp = make_constant_background(bg) if isinstance(bg, ConstantBackground) else bg
    law = law or bp.pressure
    roots = _roots_for_pair(bp.right, bp.left, law, _regime_of(bp))
    return separation_from_curves(curves_for_pair(bp.right, bp.left, law, roots), tol)


# ---------------------------------------------------------------------------
# Curves along x2


@dataclass(frozen=True)
class CurveBundle:
    x2: np.ndarray
    at: tuple[float, float]
    speeds: dict          # curve label -> array over x2 (nan where absent)
    families: dict        # curve label -> family name
    anomalies: tuple[str, ...]


def trace_curves(cb: ConstantBackground, pert: PerturbationSpec, law: PressureLaw | None,
                 x2_samples, at: tuple[float, float] = (0.0, 0.0)) -> CurveBundle:
    """Speeds ``delta / eta`` of every curve family from local states along x2.

    The velocity-root family mirrors the velocity-pole family exactly and is
    stored under ``RootVelocity`` labels to make that explicit.
    """
    law = law or cb.pressure
    x2 = np.asarray(x2_samples, dtype=float)
    regime = classify_regime(cb)
    speeds: dict[str, list[float]] = {}
    families: dict[str, str] = {}
    anomalies = []
    base_count = None
    for j, h in enumerate(x2):
        bp = make_perturbed_background(cb, pert, (at[0], at[1], float(h)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RootCountAnomaly)
            roots = _roots_for_pair(bp.right, bp.left, law, regime)
        n = len(roots.elastic)
        if base_count is None:
            base_count = n
        elif n != base_count:
            anomalies.append(f"elastic root count changes from {base_count} to {n} at x2 = {h:.6g}")
        curves = curves_for_pair(bp.right, bp.left, law, roots)
        curves += [Curve("RootVelocity", "r" + c.label, c.speed, c.side)
                   for c in curves if c.family == FrequencyKind.POLE_VELOCITY.value]
        for cv in curves:
            speeds.setdefault(cv.label, [math.nan] * len(x2))[j] = cv.speed
            families[cv.label] = cv.family
    arrays = {k: np.array(v) for k, v in speeds.items()}
    return CurveBundle(x2, tuple(at), arrays, families, tuple(anomalies))
