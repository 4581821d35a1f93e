"""Experiment description in SI units and its dimensionless reduction.

A two-level atom crosses an optical cavity and interacts with one k-mode of
the standing wave.  The transverse packet is a minimum-uncertainty Gaussian
(Δx₀Δp₀ = ħ/2) of width Δx₀, centered at x₀ near a field node, with mean
momentum p₀ along the cavity axis.

All downstream computation runs in dimensionless units to avoid mixing
ħ ~ 1e-34 with laboratory magnitudes:

    length   in 1/k      (ξ  = k x)
    momentum in ħk       (q  = p / ħk)
    time     in 1/ε      (τ  = ε t)

The single dynamics constant that survives is the recoil-to-coupling ratio

    η = ħk² / (m ε),

about 4.2e-5 for the default configuration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

HBAR = 1.0545718e-34  # J*s, fixed; not an experiment knob

#: Default configuration: m = 1e-26 kg, λ = 1e-5 m, ε = 1e8 /s,
#: Δx₀ = λ/50, x₀ = λ/10, p₀ = 0, εT = 30.
DEFAULTS = {
    "mass_kg": 1e-26,
    "wavelength_m": 1e-5,
    "epsilon_per_s": 1e8,
    "delta_x0_over_lambda": 1.0 / 50.0,
    "x0_over_lambda": 1.0 / 10.0,
    "p0_over_hbar_k": 0.0,
    "t_max_epsilon_units": 30.0,
}


@dataclass(frozen=True)
class PhysicalConfig:
    """SI-unit description of one cavity-crossing experiment."""

    mass: float               # kg
    wavelength: float         # m
    coupling_epsilon: float   # 1/s
    delta_x0: float           # m, initial packet width
    x0: float                 # m, initial packet center
    p0: float = 0.0           # kg*m/s, initial mean momentum
    interaction_time: float = 0.0   # s, cavity flight time
    hbar: float = field(default=HBAR, init=False)

    def __post_init__(self):
        for name in ("mass", "wavelength", "coupling_epsilon", "delta_x0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.interaction_time < 0:
            raise ValueError(f"interaction_time must be >= 0, got {self.interaction_time!r}")
        ratio = self.delta_x0 / self.wavelength
        if ratio >= 0.25:
            raise ValueError(
                f"delta_x0/wavelength = {ratio:g} >= 0.25: packet too wide for the "
                "linear-mode approximation to mean anything"
            )
        if ratio > 0.1:
            warnings.warn(
                f"delta_x0/wavelength = {ratio:g} > 0.1: linear-mode approximation "
                "is getting rough",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters consumed by every computation."""

    eta: float        # ħk²/(mε), recoil-to-coupling ratio
    xi0: float        # k*x0
    q0: float         # p0/ħk
    delta_xi0: float  # k*Δx0
    delta_q0: float   # Δp0/ħk = 1/(2 k Δx0)
    k: float          # 2π/λ, 1/m
    accel: float      # ħkε/m, m/s², branch mean acceleration

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        prod = self.delta_xi0 * self.delta_q0
        if abs(prod - 0.5) > 1e-12:
            raise ValueError(
                f"delta_xi0*delta_q0 = {prod!r}, not 1/2: packet is not minimum-uncertainty"
            )


def derive_params(cfg: PhysicalConfig) -> ModelParams:
    """Nondimensionalize a physical configuration.

    Δp₀ is always taken as ħ/(2Δx₀) (minimum-uncertainty packet); only such
    packets are supported on the closed-form path.
    """
    k = 2 * math.pi / cfg.wavelength
    delta_p0 = cfg.hbar / (2 * cfg.delta_x0)
    return ModelParams(
        eta=cfg.hbar * k**2 / (cfg.mass * cfg.coupling_epsilon),
        xi0=k * cfg.x0,
        q0=cfg.p0 / (cfg.hbar * k),
        delta_xi0=k * cfg.delta_x0,
        delta_q0=delta_p0 / (cfg.hbar * k),
        k=k,
        accel=cfg.hbar * k * cfg.coupling_epsilon / cfg.mass,
    )


def to_physical(params: ModelParams, interaction_time: float = 0.0) -> PhysicalConfig:
    """Invert :func:`derive_params`.

    The dimensionless parameters do not encode the flight time, so it is
    passed through unchanged.
    """
    k = params.k
    wavelength = 2 * math.pi / k
    # eta = ħk²/(mε) and accel = ħkε/m  =>  m = ħ k^(3/2) / sqrt(eta*accel)
    mass = math.sqrt(HBAR**2 * k**3 / (params.eta * params.accel))
    epsilon = HBAR * k**2 / (params.eta * mass)
    return PhysicalConfig(
        mass=mass,
        wavelength=wavelength,
        coupling_epsilon=epsilon,
        delta_x0=params.delta_xi0 / k,
        x0=params.xi0 / k,
        p0=params.q0 * HBAR * k,
        interaction_time=interaction_time,
    )


def config_from_mapping(values: dict) -> tuple[PhysicalConfig, float]:
    """Build a PhysicalConfig from flat config keys; missing keys take DEFAULTS.

    Returns (config, tau_max) with tau_max in 1/ε units.
    """
    unknown = set(values) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    merged = {**DEFAULTS, **values}
    lam = float(merged["wavelength_m"])
    eps = float(merged["epsilon_per_s"])
    tau_max = float(merged["t_max_epsilon_units"])
    k = 2 * math.pi / lam
    cfg = PhysicalConfig(
        mass=float(merged["mass_kg"]),
        wavelength=lam,
        coupling_epsilon=eps,
        delta_x0=float(merged["delta_x0_over_lambda"]) * lam,
        x0=float(merged["x0_over_lambda"]) * lam,
        p0=float(merged["p0_over_hbar_k"]) * HBAR * k,
        interaction_time=tau_max / eps,
    )
    return cfg, tau_max


def load_config(path) -> tuple[PhysicalConfig, float]:
    """Read a flat TOML-style `key = value` file (``#`` comments allowed)."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            try:
                values[key] = float(val.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad numeric value for {key!r}: {val.strip()!r}") from exc
    return config_from_mapping(values)


def default_config() -> tuple[PhysicalConfig, float]:
    """The figure-reproduction defaults."""
    return config_from_mapping({})
