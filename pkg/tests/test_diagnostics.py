import math
from dataclasses import replace

import numpy as np
import pytest

from kinvlasov.config import Config, InitConfig, validate_config
from kinvlasov.diagnostics import (
    FrequencyError,
    InsufficientHistoryError,
    StateHistory,
    compare_runs,
    conserved_totals,
    oscillation_frequency,
    residual_report,
    snapshot_state,
    vlasov_residual,
)
from kinvlasov.grid import build_grid
from kinvlasov.runner import run_simulation
from kinvlasov.state import FieldState, initialize_state, momentum_gaussian
from kinvlasov.vlasov import time_step

from conftest import landau_config, pair_species


def zero_fields(grid):
    z = np.zeros(grid.nx)
    return FieldState(z.copy(), z.copy(), z.copy(), z.copy())


def free_stream_config(nx, n_p):
    return validate_config(Config(
        nx=nx, x_max=8.0, np=n_p, p_max=4.0, c=2.0, relativistic=False,
        species=pair_species(),
        init=InitConfig(preset="free_stream", n0=1.0, amplitude=0.5, k_mode=1,
                        temperature=0.25, drift=0.0),
    ))


def translated_profiles(config, grid, dt, speed_factor=1.0):
    """Analytic free-streaming snapshots f(x - v p t, p) at three times."""
    g = momentum_gaussian(grid.p_nodes, 1.0, config.init.temperature, 0.0, grid.dp)
    v = speed_factor * grid.p_nodes / config.minus.m
    k = 2.0 * np.pi / config.x_max
    t0 = 0.3

    def sample(t):
        x_shift = grid.x_nodes[:, None] - v[None, :] * t
        return g[None, :] * (1.0 + config.init.amplitude * np.cos(k * x_shift))

    return sample(t0 - dt), sample(t0), sample(t0 + dt)


def test_vlasov_residual_static_uniform():
    config = validate_config(landau_config(nx=32, n_p=32, amplitude=0.0))
    grid = build_grid(config)
    g = momentum_gaussian(grid.p_nodes, 1.0, 1.0, 0.0, grid.dp)
    f = np.ones((grid.nx, 1)) * g[None, :]
    r = vlasov_residual(f, f, f, zero_fields(grid), config.minus.q, 1.0,
                        config, grid, 0.05)
    assert r <= 1e-14 * np.max(f)


def test_vlasov_residual_converges_on_analytic_snapshots():
    norms = []
    for nx, n_p, dt in ((32, 32, 0.02), (64, 64, 0.01)):
        config = free_stream_config(nx, n_p)
        grid = build_grid(config)
        f0, f1, f2 = translated_profiles(config, grid, dt)
        norms.append(vlasov_residual(f0, f1, f2, zero_fields(grid),
                                     config.minus.q, 1.0, config, grid, dt))
    order = math.log2(norms[0] / norms[1])
    assert order >= 1.8


def test_vlasov_residual_flags_wrong_transport_speed():
    config = free_stream_config(128, 64)
    grid = build_grid(config)
    dt = 0.01
    correct = translated_profiles(config, grid, dt, speed_factor=1.0)
    wrong = translated_profiles(config, grid, dt, speed_factor=2.0)
    r_ok = vlasov_residual(*correct, zero_fields(grid), config.minus.q, 1.0,
                           config, grid, dt)
    r_bad = vlasov_residual(*wrong, zero_fields(grid), config.minus.q, 1.0,
                            config, grid, dt)
    assert r_bad >= 10.0 * r_ok


def run_history(config, steps):
    result = run_simulation(config, n_steps=steps)
    return result


def test_residual_report_structure(small_landau):
    result = run_history(validate_config(small_landau), 3)
    ledger = residual_report(result.history, result.config, result.grid)
    assert len(ledger.entries) == 9
    assert ledger.full_equation_total == 12
    assert ledger.full_unknown_total == 10
    assert ledger.reduced_equation_total == 8
    assert ledger.reduced_unknown_total == 6
    statuses = {e.equation: e.status for e in ledger.entries}
    assert statuses == {
        "c+": "evolved", "c-": "evolved", "d1": "evolved", "d2": "evolved",
        "e": "monitored", "f": "definition", "g": "definition",
        "h": "monitored", "h/c": "monitored",
    }


def test_definition_residuals_are_roundoff(small_landau):
    result = run_history(validate_config(small_landau), 4)
    ledger = residual_report(result.history, result.config, result.grid)
    by_eq = {e.equation: e.residual_l2 for e in ledger.entries}
    scale = float(np.max(np.abs(result.final_state.rho))) or 1.0
    assert by_eq["f"] <= 1e-12 * scale
    assert by_eq["g"] <= 1e-12 * scale


def test_residual_report_needs_three_steps(small_landau):
    config = validate_config(small_landau)
    grid = build_grid(config)
    history = StateHistory()
    history.push(snapshot_state(initialize_state(config, grid), config, grid))
    with pytest.raises(InsufficientHistoryError):
        residual_report(history, config, grid)


def test_evolved_residuals_converge_second_order():
    from kinvlasov.vlasov import time_step

    def ledger_at(nx, n_p, t_end):
        config = validate_config(landau_config(nx=nx, n_p=n_p,
                                               force_mode="standard", t_end=t_end))
        result = run_simulation(config)
        ledger = residual_report(result.history, result.config, result.grid)
        return {e.equation: e.residual_l2 for e in ledger.entries}

    coarse_cfg = validate_config(landau_config(nx=32, n_p=64))
    t_end = 20 * time_step(coarse_cfg, build_grid(coarse_cfg))
    coarse = ledger_at(32, 64, t_end)
    fine = ledger_at(64, 128, t_end)
    for eq in ("c+", "c-", "d1"):
        assert math.log2(coarse[eq] / fine[eq]) >= 1.8


def test_oscillation_frequency_pure_cosine():
    t = np.arange(0.0, 20.0, 0.01)
    est = oscillation_frequency(np.column_stack([t, np.cos(2.0 * t)]))
    assert est.omega == pytest.approx(2.0, abs=0.01)
    assert est.uncertainty <= 0.01


def test_oscillation_frequency_growing_envelope():
    t = np.arange(0.0, 15.0, 0.005)
    values = np.exp(0.1 * t) * np.cos(3.0 * t)
    est = oscillation_frequency(np.column_stack([t, values]))
    assert est.omega == pytest.approx(3.0, abs=0.05)


def test_oscillation_frequency_constant_series_errors():
    t = np.arange(0.0, 5.0, 0.01)
    with pytest.raises(FrequencyError, match="too few extrema"):
        oscillation_frequency(np.column_stack([t, np.ones_like(t)]))


def test_conserved_totals_two_stream_symmetric():
    config = validate_config(Config(
        species=pair_species(),
        init=InitConfig(preset="two_stream", n0=1.0, amplitude=0.0, k_mode=1,
                        temperature=0.5, drift=2.0),
    ))
    grid = build_grid(config)
    state = initialize_state(config, grid)
    totals = conserved_totals(state, grid, config, time_step(config, grid))
    bound = 1e-10 * config.init.n0 * config.x_max
    assert abs(totals.charge_total) <= bound
    assert abs(totals.current_total) <= bound
    assert totals.max_abs_v_over_c < 1.0


def test_forces_off_number_conservation():
    config = validate_config(Config(
        nx=32, x_max=8.0, np=32, p_max=4.0, c=2.0, relativistic=False,
        cfl_fraction=0.9, t_end=1.0, output_every=10**9,
        species=pair_species(),
        init=InitConfig(preset="free_stream", n0=1.0, amplitude=0.3, k_mode=1,
                        temperature=0.25, drift=0.0),
    ))
    result = run_simulation(config, n_steps=200)
    n_plus = np.array([r.n_total_plus for r in result.records])
    n_minus = np.array([r.n_total_minus for r in result.records])
    assert np.max(np.abs(n_plus - n_plus[0])) <= 1e-8 * n_plus[0]
    assert np.max(np.abs(n_minus - n_minus[0])) <= 1e-8 * n_minus[0]


def test_relativistic_velocity_ratio_below_one():
    config = validate_config(landau_config(nx=32, n_p=32))
    result = run_simulation(config, n_steps=10)
    assert all(r.max_abs_v_over_c < 1.0 for r in result.records)


def test_compare_runs_identical_modes_all_zero(small_landau):
    config = validate_config(small_landau)
    a = run_simulation(config, collect_snapshots=True, n_steps=8)
    b = run_simulation(config, collect_snapshots=True, n_steps=8)
    for row in compare_runs(a, b):
        assert row.f_plus_dist == 0.0 and row.f_minus_dist == 0.0
        assert row.phi_dist == 0.0 and row.a_dist == 0.0 and row.force_dist == 0.0


def test_compare_runs_symmetric(small_landau):
    config = validate_config(small_landau)
    a = run_simulation(replace(config, force_mode="modified"),
                       collect_snapshots=True, n_steps=8)
    b = run_simulation(replace(config, force_mode="standard"),
                       collect_snapshots=True, n_steps=8)
    ab, ba = compare_runs(a, b), compare_runs(b, a)
    for ra, rb in zip(ab, ba):
        assert ra.f_minus_dist == rb.f_minus_dist
        assert ra.force_dist == rb.force_dist


def test_compare_runs_uniform_plasma_stays_coincident():
    config = validate_config(landau_config(nx=32, n_p=32, amplitude=0.0,
                                           output_every=5))
    a = run_simulation(replace(config, force_mode="modified"),
                       collect_snapshots=True, n_steps=20)
    b = run_simulation(replace(config, force_mode="standard"),
                       collect_snapshots=True, n_steps=20)
    for row in compare_runs(a, b):
        assert row.f_minus_dist <= 1e-10
        assert row.phi_dist <= 1e-10
        assert row.force_dist <= 1e-10
