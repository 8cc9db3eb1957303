"""Coefficient matrices and boundary symbols at a background point.

Everything here is pointwise: a :class:`~vsheet.background.SideState` (or a
:class:`~vsheet.background.BackgroundPoint` for boundary objects) plus a
:class:`Frequency`. Matrices follow the unknown ordering
``(rho, v, u, F11, F21, F12, F22)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .background import BackgroundPoint, PressureLaw, SideState, sound_speed
from .errors import DomainError

HEMISPHERE_TOL = 1e-12

# W^n positions (0-based, 14 components) and the W^nc columns inside W^n
WN_INDEX = (1, 2, 4, 6, 8, 9, 11, 13)
WNC_IN_WN = (0, 1, 4, 5)
ALG = (0, 3, 4, 5, 6)
DIFF = (1, 2)

I2 = np.diag([0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0])


@dataclass(frozen=True)
class Frequency:
    """A point of the frequency space; ``tau = gamma + i delta``."""

    gamma: float
    delta: float
    eta: float

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")
        if self.gamma == 0 and self.delta == 0 and self.eta == 0:
            raise DomainError("|tau|^2 + eta^2 must be nonzero")

    @property
    def tau(self) -> complex:
        return complex(self.gamma, self.delta)

    @property
    def norm(self) -> float:
        return math.sqrt(self.gamma**2 + self.delta**2 + self.eta**2)

    @property
    def on_hemisphere(self) -> bool:
        return abs(self.norm - 1.0) <= HEMISPHERE_TOL

    def scaled(self, lam: float) -> "Frequency":
        return Frequency(lam * self.gamma, lam * self.delta, lam * self.eta)

    def normalized(self) -> "Frequency":
        return self.scaled(1.0 / self.norm)

    @classmethod
    def from_tau(cls, tau: complex, eta: float) -> "Frequency":
        return cls(float(tau.real), float(tau.imag), float(eta))

    @classmethod
    def from_speed(cls, s: float, gamma: float = 0.0, sign: float = 1.0) -> "Frequency":
        """Point of the hemisphere with ``delta / eta = s`` at the given ``gamma``.

        ``sign`` picks the ``eta > 0`` or ``eta < 0`` half.
        """
        if not 0 <= gamma < 1:
            raise DomainError("gamma must lie in [0, 1) on the hemisphere")
        eta = math.copysign(math.sqrt((1.0 - gamma * gamma) / (1.0 + s * s)), sign)
        return cls(gamma, s * eta, eta)


@dataclass(frozen=True)
class MatrixSymbol7:
    """A 7x7 complex symbol tagged with its side and homogeneity degree."""

    data: np.ndarray
    side: str
    degree: int

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __getitem__(self, idx):
        return self.data[idx]

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True)
class BoundarySymbols:
    b: np.ndarray
    Mmat: np.ndarray
    Pi: np.ndarray
    beta: np.ndarray
    PiM: np.ndarray


# ---------------------------------------------------------------------------
# Interior matrices


def _check_rho(s: SideState) -> None:
    if not s.rho > 0:
        raise DomainError(f"density must be positive, got {s.rho}")


def A1_matrix(s: SideState, law: PressureLaw) -> np.ndarray:
    _check_rho(s)
    v, F11, F12 = s.v, s.F11, s.F12
    A = v * np.eye(7)
    A[0, 1] = s.rho
    A[1, 0] = law.dp(s.rho) / s.rho
    A[1, 3], A[1, 5] = -F11, -F12
    A[2, 4], A[2, 6] = -F11, -F12
    A[3, 1], A[4, 2] = -F11, -F11
    A[5, 1], A[6, 2] = -F12, -F12
    return A


def A2_matrix(s: SideState, law: PressureLaw) -> np.ndarray:
    _check_rho(s)
    F21, F22 = s.F21, s.F22
    A = s.u * np.eye(7)
    A[0, 2] = s.rho
    A[2, 0] = law.dp(s.rho) / s.rho
    A[1, 3], A[1, 5] = -F21, -F22
    A[2, 4], A[2, 6] = -F21, -F22
    A[3, 1], A[4, 2] = -F21, -F21
    A[5, 1], A[6, 2] = -F22, -F22
    return A


def symmetrizer(s: SideState, law: PressureLaw, printed: bool = False) -> np.ndarray:
    """Diagonal symmetrizer of ``A1`` and ``A2``.

    The deformation block needs weight ``rho`` to balance the ``-F`` couplings
    of the velocity rows. ``printed=True`` returns the variant with unit
    weights there, which symmetrizes only at ``rho = 1``.
    """
    _check_rho(s)
    w = 1.0 if printed else s.rho
    return np.diag([law.dp(s.rho) / s.rho, s.rho, s.rho, w, w, w, w])


def A2tilde_matrix(s: SideState, law: PressureLaw, kappa0: float) -> np.ndarray:
    s.check_nondegenerate(kappa0)
    return (A2_matrix(s, law) - s.dtPhi * np.eye(7) - s.d1Phi * A1_matrix(s, law)) / s.d2Phi


def T_matrices(s: SideState, law: PressureLaw, kappa0: float):
    """Return ``(T, T^{-1}, A0)`` as plain arrays; the inverse is closed-form."""
    _check_rho(s)
    s.check_nondegenerate(kappa0)
    p = s.d1Phi
    b = s.bracket
    b2 = b * b
    k = sound_speed(law, s.rho) / s.rho
    T = np.zeros((7, 7))
    T[0, 1] = T[0, 2] = b
    T[1, 0], T[1, 1], T[1, 2] = 1.0, -k * p, k * p
    T[2, 0], T[2, 1], T[2, 2] = p, k, -k
    Ti = np.zeros((7, 7))
    Ti[0, 1], Ti[0, 2] = 1.0 / b2, p / b2
    Ti[1, 0], Ti[1, 1], Ti[1, 2] = 0.5 / b, -p / (2 * k * b2), 1.0 / (2 * k * b2)
    Ti[2, 0], Ti[2, 1], Ti[2, 2] = 0.5 / b, p / (2 * k * b2), -1.0 / (2 * k * b2)
    for i in (3, 5):
        T[i, i], T[i, i + 1], T[i + 1, i], T[i + 1, i + 1] = 1.0, -p, p, 1.0
        Ti[i, i], Ti[i, i + 1], Ti[i + 1, i], Ti[i + 1, i + 1] = 1 / b2, p / b2, -p / b2, 1 / b2
    scale = s.d2Phi / (sound_speed(law, s.rho) * b)
    A0 = np.diag([1.0, scale, -scale, 1.0, 1.0, 1.0, 1.0])
    return T, Ti, A0


def A1_hat(s: SideState, law: PressureLaw, kappa0: float) -> np.ndarray:
    """``A0 T^{-1} A1 T``, the tangential coefficient in the W unknowns."""
    T, Ti, A0 = T_matrices(s, law, kappa0)
    return A0 @ Ti @ A1_matrix(s, law) @ T


def symbol_matrix(s: SideState, law: PressureLaw, tau: complex, eta: float, kappa0: float) -> np.ndarray:
    _, _, A0 = T_matrices(s, law, kappa0)
    return tau * A0 + 1j * eta * A1_hat(s, law, kappa0)


# Public wrappers returning tagged symbols


def assemble_A1(s: SideState, law: PressureLaw) -> MatrixSymbol7:
    return MatrixSymbol7(A1_matrix(s, law), s.side, 0)


def assemble_A2(s: SideState, law: PressureLaw) -> MatrixSymbol7:
    return MatrixSymbol7(A2_matrix(s, law), s.side, 0)


def assemble_A2tilde(s: SideState, law: PressureLaw, kappa0: float = 0.5) -> MatrixSymbol7:
    return MatrixSymbol7(A2tilde_matrix(s, law, kappa0), s.side, 0)


def assemble_T_A0(s: SideState, law: PressureLaw, kappa0: float = 0.5):
    T, Ti, A0 = T_matrices(s, law, kappa0)
    return MatrixSymbol7(T, s.side, 0), MatrixSymbol7(Ti, s.side, 0), MatrixSymbol7(A0, s.side, 0)


def principal_symbol(s: SideState, law: PressureLaw, f: Frequency, kappa0: float = 0.5) -> MatrixSymbol7:
    return MatrixSymbol7(symbol_matrix(s, law, f.tau, f.eta, kappa0), s.side, 1)


def algebraic_block_printed(s: SideState, law: PressureLaw, tau: complex, eta: float) -> np.ndarray:
    """Closed-form rows of the symbol that lie in the kernel of I2 (5x7)."""
    c = sound_speed(law, s.rho)
    rho, F11, F12 = s.rho, s.F11, s.F12
    X = tau + 1j * s.v * eta
    br = s.bracket
    ie = 1j * eta
    k = ie * c * c / (br * rho)
    return np.array([
        [X, k, k, -ie * F11, 0, -ie * F12, 0],
        [-ie * F11, 0, 0, X, 0, 0, 0],
        [0, -ie * c * F11 / rho, ie * c * F11 / rho, 0, X, 0, 0],
        [-ie * F12, 0, 0, 0, 0, X, 0],
        [0, -ie * c * F12 / rho, ie * c * F12 / rho, 0, 0, 0, X],
    ], dtype=complex)


# ---------------------------------------------------------------------------
# Boundary symbols


def _boundary_sides(bp: BackgroundPoint):
    if bp.location[2] != 0.0:
        raise DomainError(f"boundary symbols need x2 = 0, got x2 = {bp.location[2]}")
    return bp.right, bp.left


def M_underline(bp: BackgroundPoint) -> np.ndarray:
    r, _ = _boundary_sides(bp)
    p = r.d1Phi
    M = np.zeros((7, 14))
    M[0, 1], M[0, 2], M[0, 8], M[0, 9] = p, -1.0, -p, 1.0
    M[1, 1], M[1, 2] = p, -1.0
    M[2, 0], M[2, 7] = 1.0, -1.0
    M[3, 3], M[3, 4], M[3, 10], M[3, 11] = p, -1.0, -p, 1.0
    M[4, 3], M[4, 4] = p, -1.0
    M[5, 5], M[5, 6], M[5, 12], M[5, 13] = p, -1.0, -p, 1.0
    M[6, 5], M[6, 6] = p, -1.0
    return M


def boundary_symbols(bp: BackgroundPoint, f: Frequency) -> BoundarySymbols:
    r, l = _boundary_sides(bp)
    law = bp.pressure
    tau, eta = f.tau, f.eta
    ie = 1j * eta
    dv = r.v - l.v
    b1 = np.array([dv, r.v, 0.0, r.F11 - l.F11, r.F11, r.F12 - l.F12, r.F12])
    b0 = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    b = tau * b0 + ie * b1
    # keep tau + i v^r eta bitwise equal to b[1] so that Pi b cancels exactly
    Pi = np.zeros((6, 7), dtype=complex)
    Pi[0, 2] = 1.0
    Pi[1, 0], Pi[1, 1] = b[1], -ie * dv
    Pi[2, 0], Pi[2, 3] = -(r.F11 - l.F11), dv
    Pi[3, 0], Pi[3, 4] = -r.F11, dv
    Pi[4, 0], Pi[4, 5] = -(r.F12 - l.F12), dv
    Pi[5, 0], Pi[5, 6] = -r.F12, dv
    Tr, _, _ = T_matrices(r, law, bp.kappa0)
    Tl, _, _ = T_matrices(l, law, bp.kappa0)
    blk = np.zeros((14, 14))
    blk[:7, :7], blk[7:, 7:] = Tr, Tl
    Mmat = (M_underline(bp) @ blk)[:, WN_INDEX]
    PiM = Pi @ Mmat
    beta = PiM[:2][:, WNC_IN_WN]
    return BoundarySymbols(b, Mmat.astype(complex), Pi, beta, PiM)


def beta_matrix(bp: BackgroundPoint, tau: complex, eta: float) -> np.ndarray:
    """The 2x4 boundary matrix, written out directly (fast path for scans)."""
    r, l = bp.right, bp.left
    a1 = r.bracket
    kr = sound_speed(bp.pressure, r.rho) * a1 * a1 / r.rho
    kl = sound_speed(bp.pressure, l.rho) * a1 * a1 / l.rho
    Xl = tau + 1j * l.v * eta
    Xr = tau + 1j * r.v * eta
    return np.array([
        [a1, a1, -a1, -a1],
        [-kr * Xl, kr * Xl, kl * Xr, -kl * Xr],
    ], dtype=complex)


# ---------------------------------------------------------------------------
# Serialization


def matrix_to_json(mat, **metadata) -> dict:
    a = np.asarray(mat, dtype=complex)
    return {
        "data": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in a],
        **metadata,
    }
