"""Command-line front end: figure data, sweeps, and cross-validation.

Each subcommand emits one CSV table (to stdout or --out) whose `#` header
lines echo every physical parameter plus the derived dimensionless ones, so
any output file is self-describing and reproducible byte-for-byte.  Times
are always in 1/ε units, momenta in ħk.

Subcommands:
    momentum-dist     atomic momentum distribution at selected times
    rabi              excited-state population with duality columns
    complementarity   visibility / distinguishability sweep
    bell              Bell criterion M along the sweep, both pipelines
    separability      partial-transpose spectrum and threshold time
    validate          grid-oracle vs closed-form residuals and convergence

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, analytic, complementarity, entanglement, grid
from .analytic import BranchLabel
from .entanglement import VIOLATION_MARGIN
from .grid import PotentialKind
from .params import DEFAULTS, ModelParams, PhysicalConfig, config_from_mapping, derive_params, load_config

_trapz = getattr(np, "trapezoid", None) or np.trapz

#: |overlap_sinusoidal - overlap_linear| at tau = 10, default configuration,
#: measured once with the converged grid (n=4096, d_tau=1e-3) and frozen as a
#: regression bound.  The linearized mode function is only accurate for
#: packets much closer to the node than the default x0 = lambda/10.
FROZEN_LINEARIZATION_DIFF_TAU10 = 0.098914
LINEARIZATION_REGRESSION_WINDOW = 5e-4

#: validation bounds
OVERLAP_EQUIV_BOUND = 1e-6          # per-component grid vs closed form, linear
MOMENTUM_DENSITY_BOUND = 1e-6
NORM_DRIFT_BOUND = 1e-10
TRUNCATION_BOUND = 1e-8             # state change when d_tau -> d_tau/8
STRANG_RATIO_RANGE = (3.5, 4.5)
SPATIAL_CONV_BOUND = 1e-8
DUALITY_BOUND = 1e-12
PIPELINE_BOUND = 1e-10
_VALIDATE_SEED = 20240810


class Engine(enum.Enum):
    ANALYTIC = "analytic"
    GRID = "grid"
    BOTH = "both"


@dataclass
class Scenario:
    config: PhysicalConfig
    params: ModelParams
    tau_max: float
    tau_step: float
    engine: Engine
    potential: PotentialKind
    n_points: int
    d_tau: float
    sep_threshold: float
    taus: list[float]            # momentum-dist snapshot times
    q_min: float | None
    q_max: float | None
    q_step: float

    def __post_init__(self):
        if self.tau_step <= 0:
            raise ValueError(f"tau_step must be positive, got {self.tau_step}")
        if self.tau_max < 0:
            raise ValueError(f"tau_max must be >= 0, got {self.tau_max}")
        if not 0 < self.sep_threshold < 1:
            raise ValueError(f"sep-threshold must be in (0, 1), got {self.sep_threshold}")

    def grid_spec(self, d_tau=None, n_points=None) -> grid.GridSpec:
        return grid.GridSpec(
            n_points=n_points or self.n_points,
            xi_min=self.params.xi0 - 60.0,
            xi_max=self.params.xi0 + 60.0,
            d_tau=d_tau or self.d_tau,
        )

    def sweep(self) -> np.ndarray:
        n = int(np.floor(self.tau_max / self.tau_step + 1e-9))
        return np.arange(n + 1) * self.tau_step


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _meta_lines(sc: Scenario, command: str, extra=()) -> list[str]:
    cfg, p = sc.config, sc.params
    pairs = [
        ("version", __version__),
        ("command", command),
        ("engine", sc.engine.value),
        ("potential", sc.potential.value),
        ("mass_kg", _fmt(cfg.mass)),
        ("wavelength_m", _fmt(cfg.wavelength)),
        ("epsilon_per_s", _fmt(cfg.coupling_epsilon)),
        ("delta_x0_m", _fmt(cfg.delta_x0)),
        ("x0_m", _fmt(cfg.x0)),
        ("p0_kg_m_per_s", _fmt(cfg.p0)),
        ("interaction_time_s", _fmt(cfg.interaction_time)),
        ("hbar_J_s", _fmt(cfg.hbar)),
        ("eta", _fmt(p.eta)),
        ("xi0", _fmt(p.xi0)),
        ("q0", _fmt(p.q0)),
        ("delta_xi0", _fmt(p.delta_xi0)),
        ("delta_q0", _fmt(p.delta_q0)),
        ("k_per_m", _fmt(p.k)),
        ("accel_m_per_s2", _fmt(p.accel)),
        ("rabi_freq_over_epsilon", _fmt(analytic.rabi_frequency(p))),
        ("tau_max", _fmt(sc.tau_max)),
        ("tau_step", _fmt(sc.tau_step)),
    ]
    if sc.engine is not Engine.ANALYTIC or command == "validate":
        pairs += [
            ("n_points", str(sc.n_points)),
            ("d_tau", _fmt(sc.d_tau)),
        ]
    pairs += list(extra)
    return [f"# {k}={v}" for k, v in pairs]


def _render_csv(meta: list[str], header: list[str], rows) -> str:
    out = list(meta)
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(_fmt(x) for x in row))
    return "\n".join(out) + "\n"


def _deliver(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _deliver_json(args, summary: dict) -> None:
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _grid_snapshots(sc: Scenario, taus, potential=None, d_tau=None, n_points=None):
    spec = sc.grid_spec(d_tau=d_tau, n_points=n_points)
    state = grid.init_gaussian(sc.params, spec)
    return grid.propagate_snapshots(state, potential or sc.potential, taus)


# ----------------------------------------------------------------- commands

def cmd_momentum_dist(sc: Scenario, args) -> int:
    taus = sorted(sc.taus)
    if sc.q_min is None or sc.q_max is None:
        # cover both branch peaks plus 8 packet widths so column integrals
        # reach their asymptotes
        span = abs(sc.params.q0) + max(taus) + 8.0 * sc.params.delta_q0
        q_lo, q_hi = -span, span
    else:
        q_lo, q_hi = sc.q_min, sc.q_max

    grid_cols = {}
    if sc.engine in (Engine.GRID, Engine.BOTH):
        snaps = _grid_snapshots(sc, taus)
        obs = [grid.observables(s) for s in snaps]
        qg = obs[0].q
        mask = (qg >= q_lo) & (qg <= q_hi)
        q = qg[mask]
        for t, o in zip(taus, obs):
            grid_cols[t] = o.momentum_density[mask]
    else:
        q = np.arange(q_lo, q_hi + sc.q_step / 2, sc.q_step)

    ana_cols = {}
    if sc.engine in (Engine.ANALYTIC, Engine.BOTH):
        for t in taus:
            ana_cols[t] = analytic.momentum_distribution(sc.params, q, t)

    header = ["q"]
    cols = [q]
    extra = []
    for t in taus:
        if t in ana_cols:
            header.append(f"rho_tau{t:g}")
            cols.append(ana_cols[t])
            extra.append((f"normalization_rho_tau{t:g}", _fmt(_trapz(ana_cols[t], q))))
    for t in taus:
        if t in grid_cols:
            header.append(f"rho_grid_tau{t:g}")
            cols.append(grid_cols[t])
            extra.append((f"normalization_rho_grid_tau{t:g}", _fmt(_trapz(grid_cols[t], q))))
    max_diff = None
    if sc.engine is Engine.BOTH:
        max_diff = max(float(np.abs(ana_cols[t] - grid_cols[t]).max()) for t in taus)
        extra.append(("max_abs_diff_analytic_grid", _fmt(max_diff)))

    meta = _meta_lines(sc, "momentum-dist", [("taus", ";".join(_fmt(t) for t in taus))] + extra)
    _deliver(args, _render_csv(meta, header, zip(*cols)))
    _deliver_json(args, {
        "command": "momentum-dist",
        "taus": taus,
        "normalizations": {f"{t:g}": float(_trapz(c, q)) for t, c in {**ana_cols, **grid_cols}.items()},
        "max_abs_diff_analytic_grid": max_diff,
    })
    return 0


def _duality_columns(c: np.ndarray):
    vis = np.array([complementarity.visibility(z) for z in c])
    dis = np.array([complementarity.distinguishability(z) for z in c])
    res = np.array([complementarity.duality_identity_residual(z) for z in c])
    return vis, dis, res


def _sweep_overlaps(sc: Scenario, taus) -> np.ndarray:
    if sc.engine is Engine.GRID:
        snaps = _grid_snapshots(sc, taus)
        return np.array([grid.overlap(s) for s in snaps])
    return np.asarray(analytic.branch_overlap(sc.params, taus))


def cmd_rabi(sc: Scenario, args) -> int:
    taus = sc.sweep()
    c = _sweep_overlaps(sc, taus)
    pe = (1.0 + c.real) / 2.0
    vis, dis, res = _duality_columns(c)
    extra = []
    if sc.engine is Engine.BOTH:
        snaps = _grid_snapshots(sc, taus)
        cg = np.array([grid.overlap(s) for s in snaps])
        extra.append(("max_abs_diff_overlap_analytic_grid", _fmt(np.abs(cg - c).max())))
    meta = _meta_lines(sc, "rabi", extra)
    rows = zip(taus, pe, vis, dis, res)
    _deliver(args, _render_csv(meta, ["tau", "P_e", "visibility", "distinguishability", "duality_residual"], rows))
    _deliver_json(args, {
        "command": "rabi",
        "P_e_final": float(pe[-1]),
        "max_duality_residual": float(np.abs(res).max()),
    })
    return 0


def cmd_complementarity(sc: Scenario, args) -> int:
    taus = sc.sweep()
    c = _sweep_overlaps(sc, taus)
    vis, dis, res = _duality_columns(c)
    meta = _meta_lines(sc, "complementarity", [("max_abs_duality_residual", _fmt(np.abs(res).max()))])
    rows = zip(taus, vis, dis, res)
    _deliver(args, _render_csv(meta, ["tau", "visibility", "distinguishability", "duality_residual"], rows))
    _deliver_json(args, {
        "command": "complementarity",
        "max_duality_residual": float(np.abs(res).max()),
    })
    return 0


def cmd_bell(sc: Scenario, args) -> int:
    taus = sc.sweep()
    c = _sweep_overlaps(sc, taus)
    m_closed = 1.0 + c.imag**2
    m_brute = entanglement.horodecki_m_values(entanglement.density_family(c))
    violates = m_brute > 1.0 + VIOLATION_MARGIN
    peak = int(np.argmax(m_brute))
    extra = [
        ("max_abs_diff_m_pipelines", _fmt(np.abs(m_brute - m_closed).max())),
        ("peak_m", _fmt(m_brute[peak])),
        ("peak_m_tau", _fmt(taus[peak])),
    ]
    if sc.engine is Engine.BOTH:
        snaps = _grid_snapshots(sc, taus)
        cg = np.array([grid.overlap(s) for s in snaps])
        extra.append(("max_abs_diff_im_overlap_analytic_grid", _fmt(np.abs(cg.imag - c.imag).max())))
    meta = _meta_lines(sc, "bell", extra)
    rows = zip(taus, c.imag, m_closed, m_brute, violates)
    _deliver(args, _render_csv(meta, ["tau", "im_overlap", "m_closed_form", "m_brute_force", "violates"], rows))
    _deliver_json(args, {
        "command": "bell",
        "peak_m": float(m_brute[peak]),
        "peak_m_tau": float(taus[peak]),
        "max_abs_diff_m_pipelines": float(np.abs(m_brute - m_closed).max()),
    })
    return 0


def cmd_separability(sc: Scenario, args) -> int:
    taus = sc.sweep()
    c = _sweep_overlaps(sc, taus)
    min_eig = entanglement.min_pt_eigenvalues(entanglement.density_family(c))
    sep_at = np.abs(c.imag) < sc.sep_threshold
    extra = [("sep_threshold", _fmt(sc.sep_threshold))]
    t_sep = None
    if sc.params.q0 == 0.0:
        # first tau past which |Im c| < threshold permanently: the envelope
        # crossing (pointwise |Im c| also dips to zero twice per Rabi period)
        t_sep = analytic.separation_time(sc.params, sc.sep_threshold)
        extra.append(("t_sep", _fmt(t_sep)))
    else:
        extra.append(("t_sep", "unavailable_for_drifting_packet"))
    meta = _meta_lines(sc, "separability", extra)
    rows = zip(taus, min_eig, sep_at)
    _deliver(args, _render_csv(meta, ["tau", "min_pt_eigenvalue", "separable_at_threshold"], rows))
    _deliver_json(args, {
        "command": "separability",
        "t_sep": t_sep,
        "sep_threshold": sc.sep_threshold,
        "min_pt_eigenvalue_overall": float(min_eig.min()),
    })
    return 0


# ----------------------------------------------------------------- validate

@dataclass
class Check:
    name: str
    value: float
    bound: str
    passed: bool


def _run_validation(sc: Scenario) -> list[Check]:
    checks: list[Check] = []

    def add(name, value, passed, bound):
        checks.append(Check(name, float(value), bound, bool(passed)))

    tau_val = min(10.0, sc.tau_max) if sc.tau_max > 0 else 10.0
    tau_eq = [t for t in (1.0, 2.5, 5.0, 10.0) if t <= tau_val] or [tau_val]

    # grid vs closed form, linear potential
    lin = _grid_snapshots(sc, tau_eq, potential=PotentialKind.LINEAR)
    worst = 0.0
    for s in lin:
        cg = grid.overlap(s)
        ca = analytic.branch_overlap(sc.params, s.tau)
        worst = max(worst, abs(cg.real - ca.real), abs(cg.imag - ca.imag))
    add("overlap_equivalence_linear", worst, worst < OVERLAP_EQUIV_BOUND, f"< {OVERLAP_EQUIV_BOUND:g}")

    obs = grid.observables(lin[-1])
    pe_res = abs(obs.excited_population - analytic.excited_population(sc.params, lin[-1].tau))
    add("excited_population_residual", pe_res, pe_res < OVERLAP_EQUIV_BOUND, f"< {OVERLAP_EQUIV_BOUND:g}")

    rho_ana = analytic.momentum_distribution(sc.params, obs.q, lin[-1].tau)
    dens_res = float(np.abs(rho_ana - obs.momentum_density).max())
    add("momentum_density_residual", dens_res, dens_res < MOMENTUM_DENSITY_BOUND, f"< {MOMENTUM_DENSITY_BOUND:g}")

    drift = max(abs(obs.norms[0] - 1.0), abs(obs.norms[1] - 1.0))
    add("norm_drift", drift, drift < NORM_DRIFT_BOUND, f"< {NORM_DRIFT_BOUND:g}")

    # time-step truncation: state change against a d_tau/8 reference
    tau_probe = min(2.5, tau_val)
    trunc = 0.0
    for kind in (PotentialKind.LINEAR, PotentialKind.SINUSOIDAL):
        s_base = _grid_snapshots(sc, [tau_probe], potential=kind)[0]
        s_ref = _grid_snapshots(sc, [tau_probe], potential=kind, d_tau=sc.d_tau / 8)[0]
        trunc = max(trunc, float(np.abs(s_base.psi - s_ref.psi).max()))
    add("time_step_truncation", trunc, trunc < TRUNCATION_BOUND, f"< {TRUNCATION_BOUND:g}")

    # second-order convergence of the Strang splitting (fixed coarse probe so
    # the measured errors sit far above rounding noise)
    base = 0.1
    o = {}
    for f in (1, 2, 8):
        o[f] = grid.overlap(_grid_snapshots(sc, [tau_val], potential=PotentialKind.SINUSOIDAL,
                                            d_tau=base / f)[0])
    ratio = abs(o[1] - o[8]) / abs(o[2] - o[8])
    lo, hi = STRANG_RATIO_RANGE
    add("strang_error_ratio", ratio, lo <= ratio <= hi, f"in [{lo}, {hi}]")

    # linearization error, frozen regression value (measured at tau = 10)
    if tau_val >= 10.0:
        s_sin = _grid_snapshots(sc, [10.0], potential=PotentialKind.SINUSOIDAL)[0]
        diff = abs(grid.overlap(s_sin) - grid.overlap(lin[-1]))
        add("linearization_diff_regression", diff,
            abs(diff - FROZEN_LINEARIZATION_DIFF_TAU10) < LINEARIZATION_REGRESSION_WINDOW,
            f"= {FROZEN_LINEARIZATION_DIFF_TAU10:g} +- {LINEARIZATION_REGRESSION_WINDOW:g}")

        s2n = _grid_snapshots(sc, [tau_val], potential=PotentialKind.LINEAR,
                              n_points=2 * sc.n_points)[0]
        sp_conv = abs(grid.overlap(s2n) - grid.overlap(lin[-1]))
        add("spatial_convergence", sp_conv, sp_conv < SPATIAL_CONV_BOUND, f"< {SPATIAL_CONV_BOUND:g}")

    # duality identity along the sweep
    if sc.params.q0 == 0.0:
        taus = np.arange(int(np.floor(sc.tau_max / 0.01 + 1e-9)) + 1) * 0.01
        c = np.asarray(analytic.branch_overlap(sc.params, taus))
        res = max(abs(complementarity.duality_identity_residual(z)) for z in c)
        add("duality_identity", res, res < DUALITY_BOUND, f"< {DUALITY_BOUND:g}")

    # two-qubit criterion pipelines on random overlaps
    rng = np.random.default_rng(_VALIDATE_SEED)
    c = np.sqrt(rng.uniform(0, 1, 2000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 2000))
    rho = entanglement.density_family(c)
    m_err = float(np.abs(entanglement.horodecki_m_values(rho) - (1 + c.imag**2)).max())
    add("bell_pipeline_identity", m_err, m_err < PIPELINE_BOUND, f"< {PIPELINE_BOUND:g}")
    pt_err = float(np.abs(entanglement.min_pt_eigenvalues(rho) + np.abs(c.imag) / 2).max())
    add("ppt_spectrum_identity", pt_err, pt_err < PIPELINE_BOUND, f"< {PIPELINE_BOUND:g}")

    return checks


def cmd_validate(sc: Scenario, args) -> int:
    sc.engine = Engine.BOTH
    checks = _run_validation(sc)
    lines = _meta_lines(sc, "validate")
    for ch in checks:
        status = "PASS" if ch.passed else "FAIL"
        lines.append(f"{status} {ch.name}: value={_fmt(ch.value)} bound {ch.bound}")
    ok = all(ch.passed for ch in checks)
    lines.append(f"{'PASS' if ok else 'FAIL'} overall: {sum(ch.passed for ch in checks)}/{len(checks)} checks passed")
    _deliver(args, "\n".join(lines) + "\n")
    _deliver_json(args, {
        "command": "validate",
        "all_passed": ok,
        "checks": [
            {"name": c.name, "value": c.value, "bound": c.bound, "passed": c.passed}
            for c in checks
        ],
    })
    return 0 if ok else 1


# ----------------------------------------------------------------- plumbing

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--mass-kg", type=float)
    p.add_argument("--wavelength-m", type=float)
    p.add_argument("--epsilon-per-s", type=float)
    p.add_argument("--delta-x0-over-lambda", type=float)
    p.add_argument("--x0-over-lambda", type=float)
    p.add_argument("--p0-over-hbar-k", type=float)
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-step", type=float, default=0.05)
    p.add_argument("--engine", choices=[e.value for e in Engine], default="analytic")
    p.add_argument("--potential", choices=["linear", "sinusoidal"], default="linear")
    p.add_argument("--n-points", type=int, default=4096)
    p.add_argument("--d-tau", type=float, default=1e-3)
    p.add_argument("--sep-threshold", type=float, default=1e-3)
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--json", help="also write a JSON summary to this path")


def build_scenario(args) -> Scenario:
    if args.config:
        cfg, tau_max = load_config(args.config)
    else:
        cfg, tau_max = config_from_mapping({})
    overrides = {
        "mass_kg": args.mass_kg,
        "wavelength_m": args.wavelength_m,
        "epsilon_per_s": args.epsilon_per_s,
        "delta_x0_over_lambda": args.delta_x0_over_lambda,
        "x0_over_lambda": args.x0_over_lambda,
        "p0_over_hbar_k": args.p0_over_hbar_k,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides or args.config:
        base = {} if not args.config else _mapping_from_config(cfg, tau_max)
        cfg, tau_max = config_from_mapping({**base, **overrides})
    if args.tau_max is not None:
        tau_max = args.tau_max
    taus = [0.0, 5.0, 10.0, 15.0]
    if getattr(args, "taus", None):
        taus = [float(t) for t in args.taus.split(",")]
    engine = Engine(args.engine)
    params = derive_params(cfg)
    if engine is Engine.ANALYTIC and params.q0 != 0.0 and args.command != "momentum-dist":
        raise ValueError(
            "the closed-form engine requires p0 = 0; use --engine grid for drifting packets"
        )
    return Scenario(
        config=cfg,
        params=params,
        tau_max=tau_max,
        tau_step=args.tau_step,
        engine=engine,
        potential=PotentialKind(args.potential),
        n_points=args.n_points,
        d_tau=args.d_tau,
        sep_threshold=args.sep_threshold,
        taus=taus,
        q_min=getattr(args, "q_min", None),
        q_max=getattr(args, "q_max", None),
        q_step=getattr(args, "q_step", None) or 0.05,
    )


def _mapping_from_config(cfg: PhysicalConfig, tau_max: float) -> dict:
    k = 2 * np.pi / cfg.wavelength
    return {
        "mass_kg": cfg.mass,
        "wavelength_m": cfg.wavelength,
        "epsilon_per_s": cfg.coupling_epsilon,
        "delta_x0_over_lambda": cfg.delta_x0 / cfg.wavelength,
        "x0_over_lambda": cfg.x0 / cfg.wavelength,
        "p0_over_hbar_k": cfg.p0 / (cfg.hbar * k),
        "t_max_epsilon_units": tau_max,
    }


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osgsim",
        description="Rabi-oscillation damping in the optical Stern-Gerlach model",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("momentum-dist", help="momentum distribution at selected times")
    p.add_argument("--taus", help="comma-separated times in 1/epsilon units (default 0,5,10,15)")
    p.add_argument("--q-min", type=float)
    p.add_argument("--q-max", type=float)
    p.add_argument("--q-step", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_momentum_dist)

    for name, func, blurb in (
        ("rabi", cmd_rabi, "excited-state population time series"),
        ("complementarity", cmd_complementarity, "visibility/distinguishability sweep"),
        ("bell", cmd_bell, "Bell criterion M along the sweep"),
        ("separability", cmd_separability, "partial-transpose spectrum along the sweep"),
        ("validate", cmd_validate, "cross-validate the grid oracle against closed forms"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_common(p)
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        scenario = build_scenario(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(scenario, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
