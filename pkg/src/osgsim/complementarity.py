"""Wave-particle duality bookkeeping for the two branch paths.

The translational state acts as a which-path detector for the two dressed
branches.  Since the detector starts pure, Englert's general quantities
collapse to functions of the branch overlap c = ⟨φ⁻|φ⁺⟩:

    visibility          V = |c|
    distinguishability  D = sqrt(1 - |c|²)

and D² + V² = 1 holds identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: moduli exceeding 1 by more than this are treated as upstream bugs,
#: anything less is clamped as rounding noise
MODULUS_SLACK = 1e-12


@dataclass(frozen=True)
class DualityPair:
    visibility: float
    distinguishability: float


def _checked_modulus(overlap: complex) -> float:
    v = abs(overlap)
    if v > 1.0 + MODULUS_SLACK:
        raise ValueError(
            f"|overlap| = {v!r} exceeds 1 beyond rounding tolerance; "
            "the overlap producer is broken"
        )
    return min(v, 1.0)


def visibility(overlap: complex) -> float:
    """Fringe contrast of the population oscillation: |overlap|, clamped to [0, 1]."""
    return _checked_modulus(overlap)


def distinguishability(overlap: complex) -> float:
    """Which-path knowledge sqrt(1 - |overlap|²): 0 = indistinguishable, 1 = fully tagged."""
    v = _checked_modulus(overlap)
    return math.sqrt(1.0 - v * v)


def duality_pair(overlap: complex) -> DualityPair:
    return DualityPair(visibility(overlap), distinguishability(overlap))


def duality_identity_residual(overlap: complex) -> float:
    """D² + V² - 1; identically zero up to rounding, used as a self-check."""
    v = visibility(overlap)
    d = distinguishability(overlap)
    return d * d + v * v - 1.0
