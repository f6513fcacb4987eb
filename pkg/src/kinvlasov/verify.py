"""Built-in verification suite: fixed hermetic oracle cases, no config files.

Every case checks the solver against an independent reference: an exact
translated solution, a closed-form wave or electrostatic solution, Gaussian
moment identities, manufactured residual fields, or textbook warm-plasma
oscillation frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import Config, InitConfig, SpeciesConfig
from .diagnostics import oscillation_frequency
from .fields import WaveLevels, d2_periodic, gauge_residual, poisson_init, wave_step
from .grid import build_grid
from .moments import (
    charge_density,
    continuity_residual,
    current_density,
    number_density,
    particle_flux,
)
from .runner import compare_simulations, run_simulation
from .state import momentum_gaussian


@dataclass
class CaseResult:
    name: str
    passed: bool
    details: str


# --- free streaming against the exact translated solution -------------------

def _free_stream_config(nx: int, n_p: int) -> Config:
    # cfl_fraction chosen so dt = t_end / 100 at nx = 64 and halves with dx.
    return Config(
        nx=nx, x_max=8.0, np=n_p, p_max=6.0,
        c=2.0, relativistic=False, force_mode="modified",
        cfl_fraction=0.96, t_end=2.0, output_every=1000,
        init=InitConfig(preset="free_stream", n0=1.0, amplitude=0.5,
                        k_mode=1, temperature=0.49, drift=0.0),
    )


def free_streaming_error(nx: int, n_p: int) -> tuple[float, int]:
    config = _free_stream_config(nx, n_p)
    result = run_simulation(config)
    grid = result.grid
    state = result.final_state

    gaussian = momentum_gaussian(grid.p_nodes, config.minus.m,
                                 config.init.temperature, 0.0, grid.dp)
    v = grid.p_nodes / config.minus.m
    phase = 2.0 * np.pi * config.init.k_mode / config.x_max
    x_shifted = grid.x_nodes[:, None] - v[None, :] * state.time
    exact = config.init.n0 * gaussian[None, :] * (
        1.0 + config.init.amplitude * np.cos(phase * x_shifted)
    )
    err = float(np.sqrt(np.sum((state.minus.f - exact) ** 2) * grid.dx * grid.dp))
    return err, result.n_steps


def free_streaming_convergence():
    err_coarse, steps_coarse = free_streaming_error(64, 64)
    err_fine, steps_fine = free_streaming_error(128, 128)
    order = math.log2(err_coarse / err_fine)
    return err_coarse, err_fine, order, (steps_coarse, steps_fine)


def case_free_streaming() -> CaseResult:
    err_coarse, err_fine, order, steps = free_streaming_convergence()
    passed = order >= 1.8
    return CaseResult(
        "free_streaming", passed,
        f"L2 errors {err_coarse:.3e} -> {err_fine:.3e} over {steps} steps, "
        f"observed order {order:.2f} (need >= 1.8)",
    )


# --- homogeneous wave equation against cos(kx) cos(ckt) ----------------------

def wave_mms_error(nx: int, courant: float = 0.5) -> float:
    """Largest Linf deviation from cos(kx) cos(ckt) while tracking one period."""
    config = Config(nx=nx, x_max=2.0 * math.pi, np=8, p_max=8.0, c=1.0)
    grid = build_grid(config)
    c = config.c
    k = 1.0
    dt = courant * grid.dx / c
    u0 = np.cos(k * grid.x_nodes)
    source = np.zeros(grid.nx)
    # Second-order start for u_t(0) = 0.
    u_prev = u0
    u_curr = u0 + 0.5 * (c * dt) ** 2 * d2_periodic(u0, grid.dx)
    t = dt
    period = 2.0 * math.pi / (c * k)
    n_steps = round(period / dt) - 1
    worst = 0.0
    for _ in range(n_steps):
        u_next = wave_step(WaveLevels(u_prev, u_curr), source, grid, dt, c)
        u_prev, u_curr = u_curr, u_next
        t += dt
        exact = np.cos(k * grid.x_nodes) * math.cos(c * k * t)
        worst = max(worst, float(np.max(np.abs(u_curr - exact))))
    return worst


def wave_convergence():
    errors = [wave_mms_error(nx) for nx in (64, 128, 256)]
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    return errors, orders


def case_wave_mms() -> CaseResult:
    errors, orders = wave_convergence()
    passed = all(abs(o - 2.0) <= 0.3 for o in orders)
    return CaseResult(
        "wave_mms", passed,
        f"Linf errors {', '.join(f'{e:.3e}' for e in errors)} at nx=64,128,256; "
        f"orders {', '.join(f'{o:.2f}' for o in orders)} (need 2.0 +- 0.3)",
    )


# --- periodic electrostatic solve on an exactly resolved mode ----------------

def case_poisson_mode() -> CaseResult:
    config = Config(nx=64, x_max=2.0 * math.pi, np=8, p_max=8.0)
    grid = build_grid(config)
    k = 3.0
    rho = np.cos(k * grid.x_nodes)
    phi = poisson_init(rho, grid)
    k_discrete_sq = (2.0 - 2.0 * math.cos(k * grid.dx)) / grid.dx**2
    expected = 4.0 * math.pi * rho / k_discrete_sq
    rel = float(np.max(np.abs(phi - expected)) / np.max(np.abs(expected)))
    mean_abs = abs(float(phi.mean()))
    identity = float(
        np.max(np.abs(-d2_periodic(phi, grid.dx) - 4.0 * np.pi * rho))
        / (4.0 * np.pi * np.max(np.abs(rho)))
    )
    passed = rel <= 1e-12 and mean_abs <= 1e-12 and identity <= 1e-10
    return CaseResult(
        "poisson_mode", passed,
        f"mode error {rel:.2e} (<= 1e-12), mean {mean_abs:.2e}, "
        f"-D2 phi vs 4 pi rho {identity:.2e} (<= 1e-10)",
    )


# --- moment quadratures against Gaussian identities --------------------------

def case_moment_oracles() -> CaseResult:
    config = Config(nx=16, x_max=4.0, np=128, p_max=8.0, c=4.0, relativistic=False)
    grid = build_grid(config)
    q, m, n0 = -0.5, 1.0, 1.3
    checks = []

    # Parity: even f gives vanishing current and flux.
    g_even = momentum_gaussian(grid.p_nodes, m, 1.0, 0.0, grid.dp)
    f_even = n0 * np.ones((grid.nx, 1)) * g_even[None, :]
    zero_f = np.zeros_like(f_even)
    j_even = current_density(f_even, zero_f, q, -q, m, m, config.c, False, grid)
    flux_even = particle_flux(f_even, m, config.c, False, grid)
    scale = abs(q) * n0
    checks.append(("parity", float(np.max(np.abs(j_even))) <= 1e-12 * scale
                   and float(np.max(np.abs(flux_even))) <= 1e-12 * scale))

    # First moment of a drifting Maxwellian: j = q n0 drift / m.
    drift = 0.75
    g_drift = momentum_gaussian(grid.p_nodes, m, 1.0, drift, grid.dp)
    f_drift = n0 * np.ones((grid.nx, 1)) * g_drift[None, :]
    j_drift = current_density(f_drift, zero_f, q, -q, m, m, config.c, False, grid)
    rel_j = float(np.max(np.abs(j_drift - q * n0 * drift / m))
                  / abs(q * n0 * drift / m))
    checks.append(("drift_current", rel_j <= 1e-6))

    # Narrow relativistic beam approaches q n0 v(p0).
    beam_cfg = Config(nx=8, x_max=1.0, np=1600, p_max=4.0, c=1.0, relativistic=True)
    beam_grid = build_grid(beam_cfg)
    p0, width = 2.0, 0.02
    g_beam = momentum_gaussian(beam_grid.p_nodes, 1.0, width**2, p0, beam_grid.dp)
    f_beam = n0 * np.ones((beam_grid.nx, 1)) * g_beam[None, :]
    j_beam = current_density(f_beam, np.zeros_like(f_beam), q, -q, 1.0, 1.0,
                             1.0, True, beam_grid)
    v0 = p0 / math.sqrt(1.0 + p0 * p0)
    rel_beam = float(np.max(np.abs(j_beam - q * n0 * v0)) / abs(q * n0 * v0))
    checks.append(("cold_beam", rel_beam <= 1e-4))

    # Densities agree with a ten-times-finer quadrature of the same preset.
    base = Config(np=128)
    fine = replace(base, np=1280)
    for cfg in (base, fine):
        g = build_grid(cfg)
        gauss = momentum_gaussian(g.p_nodes, cfg.minus.m, cfg.init.temperature,
                                  cfg.init.drift, g.dp)
        wave = 1.0 + cfg.init.amplitude * np.cos(
            2.0 * np.pi * cfg.init.k_mode * g.x_nodes / cfg.x_max)
        f = cfg.init.n0 * wave[:, None] * gauss[None, :]
        if cfg is base:
            n_coarse = number_density(f, g)
        else:
            n_fine = number_density(f, g)
    rel_n = float(np.max(np.abs(n_coarse - n_fine)) / np.max(np.abs(n_fine)))
    checks.append(("fine_quadrature", rel_n <= 1e-6))

    failed = [name for name, ok in checks if not ok]
    return CaseResult(
        "moment_oracles", not failed,
        "all Gaussian moment identities hold" if not failed
        else f"failed: {', '.join(failed)}",
    )


# --- manufactured gauge and continuity residuals -----------------------------

def _gauge_manufactured_l2(nx: int) -> float:
    config = Config(nx=nx, x_max=2.0 * math.pi, np=8, p_max=8.0, c=2.0)
    grid = build_grid(config)
    c, k, dt = config.c, 1.0, 0.01
    # phi = c t sin(kx) with A = cos(kx)/k satisfies phi_t / c + A_x = 0.
    phi = WaveLevels(c * 0.0 * np.sin(k * grid.x_nodes),
                     c * dt * np.sin(k * grid.x_nodes))
    a_static = np.cos(k * grid.x_nodes) / k
    a = WaveLevels(a_static, a_static.copy())
    return gauge_residual(phi, a, grid, dt, c).l2


def _continuity_manufactured_l2(nx: int) -> float:
    config = Config(nx=nx, x_max=2.0 * math.pi, np=8, p_max=8.0)
    grid = build_grid(config)
    eps, k, omega = 0.01, 1.0, 1.3
    dt = 0.4 * grid.dx
    t = 0.7

    def n_of(tt):
        return 1.0 + eps * np.cos(k * grid.x_nodes - omega * tt)

    flux = (omega / k) * eps * np.cos(k * grid.x_nodes - omega * t)
    return continuity_residual(n_of(t - dt), n_of(t + dt), flux, grid, dt).l2


def manufactured_residual_orders():
    gauge_order = math.log2(_gauge_manufactured_l2(32) / _gauge_manufactured_l2(64))
    cont_order = math.log2(_continuity_manufactured_l2(32) / _continuity_manufactured_l2(64))
    return gauge_order, cont_order


def case_manufactured_residuals() -> CaseResult:
    gauge_order, cont_order = manufactured_residual_orders()
    passed = gauge_order >= 1.8 and cont_order >= 1.8
    return CaseResult(
        "manufactured_residuals", passed,
        f"gauge residual order {gauge_order:.2f}, continuity residual order "
        f"{cont_order:.2f} (need >= 1.8)",
    )


# --- warm Langmuir oscillation in the comparator force mode ------------------

def langmuir_config() -> Config:
    # Equal-mass pair plasma normalized to total plasma frequency 1; thermal
    # momentum spread 1, so k lambda_D = k = 0.3 with x_max = 2 pi / 0.3.
    # c is large enough that the free wave transients launched by the
    # electrostatic start (amplitude ~ (omega/ck)^2) stay below the noise.
    q = 1.0 / math.sqrt(8.0 * math.pi)
    return Config(
        nx=64, x_max=2.0 * math.pi / 0.3, np=256, p_max=8.0,
        c=30.0, relativistic=False, force_mode="standard",
        cfl_fraction=0.9, t_end=25.0, output_every=1000,
        species=(SpeciesConfig("plus", +q, 1.0), SpeciesConfig("minus", -q, 1.0)),
        init=InitConfig(preset="landau", n0=1.0, amplitude=1e-3, k_mode=1,
                        temperature=1.0, drift=0.0),
    )


def langmuir_frequency():
    config = langmuir_config()
    result = run_simulation(config)
    series = [(r.time, r.field_energy_proxy) for r in result.records]
    estimate = oscillation_frequency(series)
    measured = estimate.omega / 2.0  # energy oscillates at twice the mode frequency
    k_debye = 0.3
    expected = math.sqrt(1.0 + 3.0 * k_debye**2)
    return measured, expected, estimate.uncertainty / 2.0


def case_langmuir_comparator() -> CaseResult:
    measured, expected, unc = langmuir_frequency()
    rel = abs(measured - expected) / expected
    passed = rel < 0.05
    return CaseResult(
        "langmuir_comparator", passed,
        f"omega {measured:.4f} +- {unc:.4f} vs warm-plasma value {expected:.4f} "
        f"({100 * rel:.1f}% off, need < 5%)",
    )


CASES = {
    "free_streaming": case_free_streaming,
    "wave_mms": case_wave_mms,
    "poisson_mode": case_poisson_mode,
    "moment_oracles": case_moment_oracles,
    "manufactured_residuals": case_manufactured_residuals,
    "langmuir_comparator": case_langmuir_comparator,
}


def verify_command(case: str | None = None) -> int:
    if case is not None and case not in CASES:
        print(f"error: unknown case {case!r}; available: {', '.join(CASES)}")
        return 2
    names = [case] if case else list(CASES)
    all_passed = True
    for name in names:
        result = CASES[name]()
        all_passed &= result.passed
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.details}")
    return 0 if all_passed else 1
