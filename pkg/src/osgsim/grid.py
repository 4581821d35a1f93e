"""Split-operator propagation of the two dressed branches on a position grid.

Independent numerical oracle for the closed-form results.  The interaction
commutes with the excitation number, so the two branches never couple and
each obeys a scalar Schrödinger equation in dimensionless units,

    i ∂ψ±/∂τ = [ -(η/2) ∂²/∂ξ² ± v(ξ) ] ψ±,
    v(ξ) = ξ        (linearized mode function, node at ξ = 0)
    v(ξ) = sin ξ    (full standing-wave mode function)
    v(ξ) = 0        (free flight, for dispersion checks)

advanced with symmetric Strang steps: half potential phase, full kinetic
phase in momentum space, half potential phase.  Each step is unitary up to
rounding, so norms are conserved to ~1e-13 over 1e4 steps.

The grid is uniform with the right endpoint excluded (periodic transform
convention).  Wavepackets must stay far from the edges; snapshots check the
boundary density and refuse to report observables from a leaking state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import fourier
from .params import ModelParams

EDGE_DENSITY_INIT = 1e-14   # max |ψ|² allowed at the grid edges at τ = 0
EDGE_DENSITY_RUN = 1e-12    # max |ψ|² allowed at the edges in any snapshot


class PotentialKind(enum.Enum):
    LINEAR = "linear"
    SINUSOIDAL = "sinusoidal"
    FREE = "free"


@dataclass(frozen=True)
class GridSpec:
    """Uniform position grid and time step for one propagation."""

    n_points: int
    xi_min: float
    xi_max: float
    d_tau: float

    def __post_init__(self):
        n = self.n_points
        if n < 256 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 256, got {n}")
        if not self.xi_max > self.xi_min:
            raise ValueError("xi_max must exceed xi_min")
        if not self.d_tau > 0:
            raise ValueError(f"d_tau must be positive, got {self.d_tau!r}")

    @property
    def dxi(self) -> float:
        return (self.xi_max - self.xi_min) / self.n_points

    def xi(self) -> np.ndarray:
        return self.xi_min + self.dxi * np.arange(self.n_points)

    def q(self) -> np.ndarray:
        """Conjugate momenta in DFT order, range [-π/dxi, π/dxi)."""
        return fourier.momentum_grid(self.n_points, self.dxi)


def default_grid_spec(params: ModelParams, n_points: int = 4096, d_tau: float = 1e-3) -> GridSpec:
    """Default grid: ξ ∈ [ξ₀-60, ξ₀+60).

    The packet barely moves in position (η ~ 4e-5) but its momentum support
    reaches |q| ≈ τ + 4Δq₀, so the grid length mainly buys momentum-space
    headroom: 120/4096 gives dξ ≈ 0.03 and |q| < 107.
    """
    return GridSpec(
        n_points=n_points,
        xi_min=params.xi0 - 60.0,
        xi_max=params.xi0 + 60.0,
        d_tau=d_tau,
    )


@dataclass(frozen=True)
class BranchGridState:
    """Both branch wavefunctions on a grid at one instant.

    ``psi`` is the (2, n) stack [ψ⁺, ψ⁻]; ``eta`` rides along because it is
    the one dynamics constant the stepper needs.
    """

    psi: np.ndarray
    spec: GridSpec
    tau: float
    eta: float

    @property
    def psi_plus(self) -> np.ndarray:
        return self.psi[0]

    @property
    def psi_minus(self) -> np.ndarray:
        return self.psi[1]


@dataclass(frozen=True)
class GridObservables:
    excited_population: float
    visibility: float
    overlap: complex
    q: np.ndarray                # ascending momentum grid
    momentum_density: np.ndarray  # (|ψ̃⁺|² + |ψ̃⁻|²)/2 on q
    centroid_xi: tuple[float, float]   # (plus, minus)
    centroid_q: tuple[float, float]
    norms: tuple[float, float]
    boundary_density: float


def init_gaussian(params: ModelParams, spec: GridSpec) -> BranchGridState:
    """Both branches set to the shared initial packet (the |e,0> decomposition).

    ψ(ξ) ∝ exp[-(ξ-ξ₀)²/(4Δξ₀²) + i q₀ ξ], discretely normalized to 1.
    """
    xi = spec.xi()
    u = xi - params.xi0
    psi = np.exp(-(u**2) / (4 * params.delta_xi0**2) + 1j * params.q0 * xi)
    psi /= math.sqrt(float(np.sum(np.abs(psi) ** 2)) * spec.dxi)
    edge = max(abs(psi[0]) ** 2, abs(psi[-1]) ** 2)
    if edge > EDGE_DENSITY_INIT:
        raise ValueError(
            f"initial packet touches the grid edge (density {edge:.3e}); enlarge the grid"
        )
    return BranchGridState(psi=np.array([psi, psi]), spec=spec, tau=0.0, eta=params.eta)


_PHASES: dict[tuple, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _phases(spec: GridSpec, eta: float, potential: PotentialKind):
    """(half-step, full-step) branch potential phases and the kinetic phase."""
    key = (spec.n_points, spec.xi_min, spec.xi_max, spec.d_tau, eta, potential)
    try:
        return _PHASES[key]
    except KeyError:
        pass
    if potential is PotentialKind.LINEAR:
        v = spec.xi()
    elif potential is PotentialKind.SINUSOIDAL:
        v = np.sin(spec.xi())
    else:
        v = np.zeros(spec.n_points)
    # branch ± feels ±v; stack order matches BranchGridState.psi
    half = np.array([np.exp(-0.5j * v * spec.d_tau), np.exp(+0.5j * v * spec.d_tau)])
    full = np.array([np.exp(-1j * v * spec.d_tau), np.exp(+1j * v * spec.d_tau)])
    kin = np.exp(-0.5j * eta * spec.q() ** 2 * spec.d_tau)
    _PHASES[key] = (half, full, kin)
    return half, full, kin


def _kick(psi: np.ndarray, kin: np.ndarray) -> np.ndarray:
    return fourier.ifft(fourier.fft(psi) * kin)


def step(state: BranchGridState, potential: PotentialKind) -> BranchGridState:
    """Advance both branches by one Strang step."""
    half, _, kin = _phases(state.spec, state.eta, potential)
    psi = _kick(state.psi * half, kin) * half
    return replace(state, psi=psi, tau=state.tau + state.spec.d_tau)


def evolve(state: BranchGridState, potential: PotentialKind, n_steps: int) -> BranchGridState:
    """Advance by n_steps, fusing adjacent potential half-steps."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if n_steps == 0:
        return state
    half, full, kin = _phases(state.spec, state.eta, potential)
    psi = state.psi * half
    for _ in range(n_steps - 1):
        psi = _kick(psi, kin)
        psi *= full
    psi = _kick(psi, kin)
    psi *= half
    return replace(state, psi=psi, tau=state.tau + n_steps * state.spec.d_tau)


def propagate_snapshots(
    state: BranchGridState, potential: PotentialKind, taus
) -> list[BranchGridState]:
    """States at the requested times, which must be whole numbers of steps away."""
    taus = sorted(float(t) for t in taus)
    snaps = []
    current = state
    for t in taus:
        if t < current.tau - 1e-12:
            raise ValueError(f"requested tau {t} lies before the current state")
        n = round((t - current.tau) / current.spec.d_tau)
        if abs(n * current.spec.d_tau - (t - current.tau)) > 1e-9:
            raise ValueError(
                f"tau {t} is not a whole number of steps (d_tau = {current.spec.d_tau}) "
                f"from tau = {current.tau}"
            )
        current = evolve(current, potential, n)
        current = replace(current, tau=t)
        snaps.append(current)
    return snaps


def norms(state: BranchGridState) -> tuple[float, float]:
    """Discrete ∫|ψ±|² dξ for both branches."""
    n = np.sum(np.abs(state.psi) ** 2, axis=1) * state.spec.dxi
    return float(n[0]), float(n[1])


def overlap(state: BranchGridState) -> complex:
    """Discrete inner product ⟨ψ⁻|ψ⁺⟩ (conjugate-linear in the first slot)."""
    return complex(np.sum(np.conj(state.psi[1]) * state.psi[0]) * state.spec.dxi)


def momentum_amplitudes(state: BranchGridState):
    """Continuum-normalized momentum wavefunctions on the ascending q grid.

    Returns (q, psi_tilde) with psi_tilde of shape (2, n); conventions match
    φ(q) = (2π)^(-1/2) ∫ ψ(ξ) e^(-iqξ) dξ, so Σ|φ|² dq = 1.
    """
    spec = state.spec
    q = spec.q()
    tilde = fourier.fft(state.psi) * (spec.dxi / math.sqrt(2 * math.pi))
    tilde = tilde * np.exp(-1j * q * spec.xi_min)
    order = np.argsort(q, kind="stable")
    return q[order], tilde[:, order]


def observables(state: BranchGridState) -> GridObservables:
    """All figure-level quantities from the discrete wavefunctions."""
    spec = state.spec
    edge = float(np.max(np.abs(state.psi[:, [0, -1]]) ** 2))
    if edge > EDGE_DENSITY_RUN:
        raise RuntimeError(
            f"wavepacket reached the grid boundary (density {edge:.3e}); "
            "results would be corrupted by wraparound"
        )
    xi = spec.xi()
    dens_xi = np.abs(state.psi) ** 2
    ns = np.sum(dens_xi, axis=1) * spec.dxi
    cxi = (dens_xi @ xi) * spec.dxi / ns

    q, tilde = momentum_amplitudes(state)
    dq = q[1] - q[0]
    dens_q = np.abs(tilde) ** 2
    nq = np.sum(dens_q, axis=1) * dq
    cq = (dens_q @ q) * dq / nq

    ov = overlap(state)
    return GridObservables(
        excited_population=(1.0 + ov.real) / 2.0,
        visibility=abs(ov),
        overlap=ov,
        q=q,
        momentum_density=0.5 * (dens_q[0] + dens_q[1]),
        centroid_xi=(float(cxi[0]), float(cxi[1])),
        centroid_q=(float(cq[0]), float(cq[1])),
        norms=(float(ns[0]), float(ns[1])),
        boundary_density=edge,
    )


def dump_snapshot(state: BranchGridState, stream) -> None:
    """CSV snapshot: xi, re/im of ψ⁺, re/im of ψ⁻, with # key=value metadata."""
    own = isinstance(stream, (str, bytes))
    fh = open(stream, "w", encoding="utf-8") if own else stream
    try:
        spec = state.spec
        for key, val in (
            ("tau", state.tau),
            ("eta", state.eta),
            ("n_points", spec.n_points),
            ("xi_min", spec.xi_min),
            ("xi_max", spec.xi_max),
            ("d_tau", spec.d_tau),
        ):
            fh.write(f"# {key}={val:.17g}\n" if isinstance(val, float) else f"# {key}={val}\n")
        fh.write("xi,re_psi_plus,im_psi_plus,re_psi_minus,im_psi_minus\n")
        xi = spec.xi()
        for i in range(spec.n_points):
            fh.write(
                f"{xi[i]:.17g},{state.psi[0, i].real:.17g},{state.psi[0, i].imag:.17g},"
                f"{state.psi[1, i].real:.17g},{state.psi[1, i].imag:.17g}\n"
            )
    finally:
        if own:
            fh.close()
