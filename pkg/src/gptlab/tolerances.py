"""Numerical tolerances shared across the package."""
from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Tolerances:
    # hermiticity / normalization / open-interval / probability checks
    herm: float = 1e-9
    norm: float = 1e-9
    interval: float = 1e-9
    prob: float = 1e-9
    # convex-hull and LP feasibility slack
    hull: float = 1e-7
    # 3x3 systems with |det| below this are skipped during vertex enumeration
    singular: float = 1e-10
    # radius for collapsing duplicate vertices / effect vectors
    dedupe: float = 1e-7


def default_tolerances() -> Tolerances:
    """Tolerances with the GPTLAB_TOLERANCE environment override applied.

    The variable overrides the 1e-9 family (herm/norm/interval/prob); the
    hull, singularity and dedupe scales keep their own defaults. Read at call
    time, not import time, so a bad value surfaces as a normal input error.
    """
    raw = os.environ.get("GPTLAB_TOLERANCE")
    if raw is None:
        return DEFAULT
    try:
        base = float(raw)
    except ValueError:
        raise InputError(f"GPTLAB_TOLERANCE is not a number: {raw!r}") from None
    if not base > 0:
        raise InputError(f"GPTLAB_TOLERANCE must be positive, got {raw!r}")
    return Tolerances(herm=base, norm=base, interval=base, prob=base)


DEFAULT = Tolerances()
