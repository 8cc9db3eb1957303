"""Background configuration files."""

from __future__ import annotations

import json
from pathlib import Path

from .background import ConstantBackground, PerturbationSpec, PressureLaw, check_perturbation
from .errors import DomainError

_KEYS = {"rho_bar", "v_bar", "F11_bar", "F12_bar", "pressure", "perturbation", "kappa0"}


def background_from_dict(data: dict) -> tuple[ConstantBackground, PerturbationSpec | None]:
    unknown = set(data) - _KEYS
    if unknown:
        raise DomainError(f"unknown configuration keys: {sorted(unknown)}")
    try:
        law = PressureLaw(**data.get("pressure", {}))
        kw = {k: float(data[k]) for k in ("rho_bar", "v_bar", "F11_bar", "F12_bar", "kappa0") if k in data}
        cb = ConstantBackground(pressure=law, **kw)
    except TypeError as exc:
        raise DomainError(f"malformed background configuration: {exc}") from None
    pert = None
    if data.get("perturbation"):
        pert = PerturbationSpec.from_dict(data["perturbation"])
        check_perturbation(cb, pert)
    return cb, pert


def load_background(path: str | Path) -> tuple[ConstantBackground, PerturbationSpec | None]:
    """Read a JSON background file; ``OSError`` and ``JSONDecodeError`` propagate."""
    with open(path, encoding="utf-8") as fh:
        return background_from_dict(json.load(fh))
