"""Random admissible states for property tests."""

import numpy as np

from vsheet.background import BackgroundPoint, PressureLaw, SideState
from vsheet.symbols import Frequency


def random_side(rng, side="r", rho=None, d1=None, dt=None):
    rho = rng.uniform(0.3, 3.0) if rho is None else rho
    v, F11, F12 = rng.uniform(-3, 3), rng.uniform(-2, 2), rng.uniform(-2, 2)
    d1 = rng.uniform(-1, 1) if d1 is None else d1
    dt = rng.uniform(-1, 1) if dt is None else dt
    d2 = rng.uniform(0.5, 2.0) * (1 if side == "r" else -1)
    return SideState(rho, v, dt + v * d1, F11, F11 * d1, F12, F12 * d1, dt, d1, d2)


def random_law(rng):
    return PressureLaw(kappa=rng.uniform(0.2, 2.0), gamma_ad=rng.uniform(1.1, 3.0))


def random_boundary_point(rng, law=None):
    law = law or random_law(rng)
    rho, d1, dt = rng.uniform(0.3, 3.0), rng.uniform(-1, 1), rng.uniform(-1, 1)
    r = random_side(rng, "r", rho, d1, dt)
    l = random_side(rng, "l", rho, d1, dt)
    return BackgroundPoint(r, l, law)


def random_frequency(rng, min_gamma=0.0):
    g = rng.uniform(min_gamma, 1.0)
    th = rng.uniform(0, 2 * np.pi)
    r = np.sqrt(1 - g * g)
    return Frequency(g, r * np.cos(th), r * np.sin(th))


# acceptance outcomes, printed in the terminal summary
ACCEPTANCE: dict[int, str] = {}
