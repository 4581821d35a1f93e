"""Closed-form dynamics of the two dressed branches.

In the one-excitation sector the atom-field state splits into two
translational components tied to the dressed states χ± (the ±1/2
eigenstates of the interaction), which feel opposite linear potentials
±ξ once the mode function is linearized about the node.  Everything
observable follows from the two branch wavefunctions and their overlap
c(τ) = ⟨φ⁻(τ)|φ⁺(τ)⟩:

    momentum amplitudes   φ±(q,τ) = φ₀(q ± τ) exp[-i η (qτ/2)(q ± τ) - i η τ³/6]
    momentum distribution ρ(q,τ)  = (|φ⁺|² + |φ⁻|²)/2
    overlap (q₀ = 0)      c(τ)    = exp(-2i ξ₀ τ) exp[-τ²/(2Δq₀²) - η²τ⁴/(8Δξ₀²)]
    excited population    P_e(τ)  = (1 + Re c)/2

Times are in 1/ε units, momenta in ħk, positions in 1/k.  The common
photon-number phase is dropped in both branches; the branch amplitudes keep
the full one-branch propagator phase (including the branch-independent
cubic term) so they can be compared component-wise against the grid
propagator.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .params import ModelParams


class BranchLabel(enum.Enum):
    """Dressed-branch tag: PLUS for χ⁺ (interaction +1/2), MINUS for χ⁻."""

    PLUS = +1
    MINUS = -1


def rabi_frequency(params: ModelParams) -> float:
    """Oscillation frequency of the excited population, in ε units (= 2ξ₀)."""
    return 2.0 * params.xi0


def branch_centroid(params: ModelParams, tau, branch: BranchLabel):
    """Phase-space centroid (ξ, q) of one branch at time tau.

    Exact for the linear potential (Ehrenfest):
        q±(τ) = q₀ ∓ τ
        ξ±(τ) = ξ₀ + η q₀ τ ∓ η τ²/2
    The PLUS branch accelerates toward negative ξ.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    sgn = branch.value
    xi = params.xi0 + params.eta * params.q0 * tau - sgn * params.eta * tau**2 / 2
    q = params.q0 - sgn * tau
    return xi, q


def _initial_momentum_amplitude(params: ModelParams, q):
    """φ₀(q): momentum-space minimum-uncertainty Gaussian.

    Centered at q₀ with width Δq₀; the exp[-i(q-q₀)ξ₀] factor centers the
    position-space packet at ξ₀.
    """
    dq0 = params.delta_q0
    norm = (2 * math.pi * dq0**2) ** (-0.25)
    u = np.asarray(q, dtype=float) - params.q0
    return norm * np.exp(-(u**2) / (4 * dq0**2) - 1j * u * params.xi0)


def branch_momentum_amplitude(params: ModelParams, q, tau, branch: BranchLabel):
    """Momentum-space amplitude φ±(q, τ) of one branch.

    The modulus is a rigid shift of the initial packet, |φ±(q,τ)| = |φ₀(q±τ)|;
    the phase is the full linear-potential propagator phase, so the complex
    value matches exact (grid) propagation, not only the modulus.
    """
    sgn = branch.value
    q = np.asarray(q, dtype=float)
    tau = np.asarray(tau, dtype=float)
    eta = params.eta
    phase = eta * (q * tau / 2) * (q + sgn * tau) + eta * tau**3 / 6
    return _initial_momentum_amplitude(params, q + sgn * tau) * np.exp(-1j * phase)


def momentum_distribution(params: ModelParams, q_grid, tau) -> np.ndarray:
    """Atomic momentum probability density (|φ⁺|² + |φ⁻|²)/2 on q_grid."""
    q_grid = np.asarray(q_grid, dtype=float)
    if q_grid.ndim != 1 or q_grid.size < 2 or np.any(np.diff(q_grid) <= 0):
        raise ValueError("q_grid must be a strictly increasing 1-d array")
    rho = 0.5 * (
        np.abs(branch_momentum_amplitude(params, q_grid, tau, BranchLabel.PLUS)) ** 2
        + np.abs(branch_momentum_amplitude(params, q_grid, tau, BranchLabel.MINUS)) ** 2
    )
    return rho


def overlap_envelope(params: ModelParams, tau):
    """|c(τ)| = exp[-τ²/(2Δq₀²) - η²τ⁴/(8Δξ₀²)]; monotone decreasing."""
    tau = np.asarray(tau, dtype=float)
    return np.exp(
        -(tau**2) / (2 * params.delta_q0**2)
        - params.eta**2 * tau**4 / (8 * params.delta_xi0**2)
    )


def branch_overlap(params: ModelParams, tau):
    """c(τ) = ⟨φ⁻|φ⁺⟩ = exp(-2i ξ₀ τ) · envelope(τ).

    Only derived for packets with zero mean velocity along the cavity axis;
    drifting packets (q₀ ≠ 0) must go through the grid propagator instead.
    """
    if params.q0 != 0.0:
        raise ValueError(
            "closed-form overlap requires q0 = 0 (zero mean velocity along the "
            "cavity axis); use the grid propagator for drifting packets"
        )
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    result = np.exp(-2j * params.xi0 * tau) * overlap_envelope(params, tau)
    if result.ndim == 0:
        return complex(result)
    return result


def excited_population(params: ModelParams, tau):
    """P(e, τ) = [1 + Re c(τ)]/2; starts at 1 and damps to 1/2."""
    c = branch_overlap(params, tau)
    return (1.0 + np.real(c)) / 2.0


def separation_time(params: ModelParams, delta: float) -> float:
    """First τ at which the overlap envelope drops below delta.

    Past this time |Im c| < delta holds permanently (the envelope is
    monotone decreasing; the pointwise |Im c| also dips to zero twice per
    Rabi period, so the envelope crossing is the meaningful threshold).
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta!r}")
    lo, hi = 0.0, 1.0
    while overlap_envelope(params, hi) >= delta:
        hi *= 2
        if hi > 1e9:
            raise RuntimeError("envelope never crossed delta (should be impossible)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if overlap_envelope(params, mid) >= delta:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)
