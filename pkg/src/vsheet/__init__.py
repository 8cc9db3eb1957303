"""Linear stability toolkit for two-dimensional compressible elastic vortex sheets.

Submodules: ``background`` (states, regimes, perturbations), ``symbols``
(interior and boundary matrices), ``modal`` (normal modes, Lopatinskii
determinant, roots and curves), ``triangular`` (upper triangularization of
the symbol), ``oracle`` and ``scans`` (independent checks and scan drivers).
"""

__version__ = "0.1.0"

from .background import (  # noqa: E402
    BackgroundPoint,
    Bump,
    ConstantBackground,
    PerturbationSpec,
    PressureLaw,
    Regime,
    RegimeClass,
    SideState,
    classify_regime,
    make_constant_background,
    make_perturbed_background,
)
from .errors import *  # noqa: E402,F401,F403
from .modal import find_roots, lopatinskii_direct, lopatinskii_factored, mode_data  # noqa: E402
from .symbols import Frequency  # noqa: E402

__all__ = [
    "BackgroundPoint", "Bump", "ConstantBackground", "Frequency", "PerturbationSpec", "PressureLaw",
    "Regime", "RegimeClass", "SideState", "classify_regime", "find_roots", "lopatinskii_direct",
    "lopatinskii_factored", "make_constant_background", "make_perturbed_background", "mode_data",
]
