"""Run diagnostics: conserved totals, per-equation residuals of the
overdetermined system, oscillation-frequency extraction, and run comparison.

The evolved system integrates the two kinetic equations and the two potential
wave equations; the charge and current moments are definitions, and the gauge
condition plus the minus-species continuity equation are monitored residuals.
In the full three-dimensional form that bookkeeping is 12 coupled equations
for 10 unknowns; reduced to this 1D geometry it is 8 equations for 6 unknowns.
The surplus equations never feed back into the evolution, so their residuals
act as a built-in consistency dashboard.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .config import Config
from .fields import WaveLevels, d1_periodic, d2_periodic, field_energy_proxy, gauge_residual
from .forces import force_field, velocity_from_momentum
from .grid import PhaseSpaceGrid
from .moments import (
    charge_density,
    continuity_residual,
    current_density,
    number_density,
    particle_flux,
)
from .state import FieldState, SimulationState


class InsufficientHistoryError(RuntimeError):
    """Residual evaluation needs three consecutive stored steps."""


class GridMismatchError(ValueError):
    """Run comparison requires identical grids."""


class FrequencyError(RuntimeError):
    """Oscillation-frequency extraction failed (too few extrema)."""


DIAGNOSTICS_FIELDS = (
    "step",
    "time",
    "n_total_plus",
    "n_total_minus",
    "charge_total",
    "current_total",
    "gauge_residual_l2",
    "continuity_residual_l2",
    "vlasov_residual_plus_l2",
    "vlasov_residual_minus_l2",
    "max_abs_v_over_c",
    "field_energy_proxy",
)


@dataclass
class DiagnosticsRecord:
    step: int
    time: float
    n_total_plus: float
    n_total_minus: float
    charge_total: float
    current_total: float
    gauge_residual_l2: float
    continuity_residual_l2: float
    vlasov_residual_plus_l2: float
    vlasov_residual_minus_l2: float
    max_abs_v_over_c: float
    field_energy_proxy: float


@dataclass
class LedgerEntry:
    equation: str            # c+, c-, d1, d2, e, f, g, h, h/c
    status: str              # evolved | definition | monitored
    residual_l2: float
    reduced_multiplicity: int  # count in this 1D geometry
    full_multiplicity: int     # count in the full 3D vector system


@dataclass
class EquationLedger:
    entries: list
    unknowns_full: dict
    unknowns_reduced: dict

    @property
    def full_equation_total(self) -> int:
        return sum(e.full_multiplicity for e in self.entries)

    @property
    def reduced_equation_total(self) -> int:
        return sum(e.reduced_multiplicity for e in self.entries)

    @property
    def full_unknown_total(self) -> int:
        return sum(self.unknowns_full.values())

    @property
    def reduced_unknown_total(self) -> int:
        return sum(self.unknowns_reduced.values())


# (equation, status, full multiplicity, reduced multiplicity).  The h/c row
# repeats the continuity residual with its time term scaled by 1/c; it is
# informational and carries no multiplicity of its own.
LEDGER_LAYOUT = (
    ("c+", "evolved", 1, 1),
    ("c-", "evolved", 1, 1),
    ("d1", "evolved", 1, 1),
    ("d2", "evolved", 3, 1),
    ("e", "monitored", 1, 1),
    ("f", "definition", 1, 1),
    ("g", "definition", 3, 1),
    ("h", "monitored", 1, 1),
    ("h/c", "monitored", 0, 0),
)

UNKNOWNS_FULL = {"f+-": 2, "phi,A": 4, "rho,j": 4}
UNKNOWNS_REDUCED = {"f+-": 2, "phi,A": 2, "rho,j": 2}


@dataclass
class StepSnapshot:
    """Everything the residual evaluators need from one stored step."""

    step: int
    time: float
    f_plus: np.ndarray
    f_minus: np.ndarray
    fields: FieldState
    rho: np.ndarray
    j: np.ndarray
    n_minus: np.ndarray
    flux_minus: np.ndarray


def snapshot_state(state: SimulationState, config: Config,
                   grid: PhaseSpaceGrid) -> StepSnapshot:
    return StepSnapshot(
        step=state.step,
        time=state.time,
        f_plus=state.plus.f,
        f_minus=state.minus.f,
        fields=state.fields,
        rho=state.rho,
        j=state.j,
        n_minus=number_density(state.minus.f, grid),
        flux_minus=particle_flux(state.minus.f, state.minus.m, config.c,
                                 config.relativistic, grid),
    )


class StateHistory:
    """Ring buffer of the three most recent step snapshots."""

    def __init__(self):
        self._snaps = deque(maxlen=3)

    def push(self, snap: StepSnapshot) -> None:
        self._snaps.append(snap)

    @property
    def full(self) -> bool:
        return len(self._snaps) == 3

    @property
    def snapshots(self):
        return tuple(self._snaps)


def _l2_phase(field: np.ndarray, grid: PhaseSpaceGrid) -> float:
    return float(np.sqrt(np.sum(field * field) * grid.dx * grid.dp))


def _l2_x(field: np.ndarray, grid: PhaseSpaceGrid) -> float:
    return float(np.sqrt(np.sum(field * field) * grid.dx))


def vlasov_residual(f_prev: np.ndarray, f_mid: np.ndarray, f_next: np.ndarray,
                    fields_mid: FieldState, q: float, m: float, config: Config,
                    grid: PhaseSpaceGrid, dt: float) -> float:
    """L2 norm of df/dt + v df/dx + F df/dp over interior phase-space nodes.

    All derivatives are centered at f_mid's time; the scheme does not
    collocate the equation, so the expected size is O(dt^2 + dx^2 + dp^2).
    The stored field levels of the middle snapshot straddle its time, which is
    exactly what the force builders expect.
    """
    ft = (f_next - f_prev) / (2.0 * dt)
    fx = (np.roll(f_mid, -1, axis=0) - np.roll(f_mid, 1, axis=0)) / (2.0 * grid.dx)
    fp = (f_mid[:, 2:] - f_mid[:, :-2]) / (2.0 * grid.dp)
    v = velocity_from_momentum(grid.p_nodes, m, config.c, config.relativistic)
    residual = ft[:, 1:-1] + v[None, 1:-1] * fx[:, 1:-1]
    if config.forces_enabled:
        force = force_field(fields_mid, grid, dt, q, m, config.c,
                            config.relativistic, config.force_mode)
        residual = residual + force[:, 1:-1] * fp
    return _l2_phase(residual, grid)


def residual_report(history: StateHistory, config: Config,
                    grid: PhaseSpaceGrid) -> EquationLedger:
    """Fill the equation ledger from three consecutive steps.

    Kinetic, gauge, and continuity residuals are centered at the middle step;
    the wave-equation residuals are centered between the last two steps (where
    three consecutive field levels are available) with the source interpolated
    to the level time from the adjacent cached moments.
    """
    if not history.full:
        raise InsufficientHistoryError("residual_report needs three stored steps")
    s0, s1, s2 = history.snapshots
    dt = s1.time - s0.time
    c = config.c

    res_plus = vlasov_residual(s0.f_plus, s1.f_plus, s2.f_plus, s1.fields,
                               config.plus.q, config.plus.m, config, grid, dt)
    res_minus = vlasov_residual(s0.f_minus, s1.f_minus, s2.f_minus, s1.fields,
                                config.minus.q, config.minus.m, config, grid, dt)

    # Wave-equation residuals from the three levels (prev, curr of step 1 plus
    # curr of step 2); sources averaged onto the middle level time.
    def wave_residual(u0, u1, u2, source):
        r = (u2 - 2.0 * u1 + u0) / (c * dt) ** 2 - d2_periodic(u1, grid.dx) - source
        return _l2_x(r, grid)

    res_d1 = wave_residual(s1.fields.phi_prev, s1.fields.phi_curr,
                           s2.fields.phi_curr,
                           4.0 * np.pi * 0.5 * (s1.rho + s2.rho))
    res_d2 = wave_residual(s1.fields.a_prev, s1.fields.a_curr,
                           s2.fields.a_curr,
                           (4.0 * np.pi / c) * 0.5 * (s1.j + s2.j))

    res_e = gauge_residual(
        WaveLevels(s1.fields.phi_prev, s1.fields.phi_curr),
        WaveLevels(s1.fields.a_prev, s1.fields.a_curr),
        grid, dt, c,
    ).l2

    # Definition checks: moments recomputed from the stored f against the cache.
    rho_again = charge_density(s1.f_plus, s1.f_minus, config.plus.q,
                               config.minus.q, grid)
    j_again = current_density(s1.f_plus, s1.f_minus, config.plus.q, config.minus.q,
                              config.plus.m, config.minus.m, c,
                              config.relativistic, grid)
    res_f = _l2_x(rho_again - s1.rho, grid)
    res_g = _l2_x(j_again - s1.j, grid)

    res_h = continuity_residual(s0.n_minus, s2.n_minus, s1.flux_minus, grid, dt).l2
    res_h_c = continuity_residual(s0.n_minus, s2.n_minus, s1.flux_minus, grid, dt,
                                  time_factor=1.0 / c).l2

    measured = {"c+": res_plus, "c-": res_minus, "d1": res_d1, "d2": res_d2,
                "e": res_e, "f": res_f, "g": res_g, "h": res_h, "h/c": res_h_c}
    entries = [
        LedgerEntry(equation=eq, status=status, residual_l2=measured[eq],
                    reduced_multiplicity=reduced, full_multiplicity=full)
        for eq, status, full, reduced in LEDGER_LAYOUT
    ]
    return EquationLedger(entries=entries, unknowns_full=dict(UNKNOWNS_FULL),
                          unknowns_reduced=dict(UNKNOWNS_REDUCED))


@dataclass
class ConservedTotals:
    n_total_plus: float
    n_total_minus: float
    charge_total: float
    current_total: float
    field_energy_proxy: float
    max_abs_v_over_c: float


def conserved_totals(state: SimulationState, grid: PhaseSpaceGrid,
                     config: Config, dt: float) -> ConservedTotals:
    cell = grid.dx * grid.dp
    p_edge = np.max(np.abs(grid.p_nodes))
    vmax = max(
        abs(velocity_from_momentum(p_edge, s.m, config.c, config.relativistic))
        for s in state.species
    )
    proxy = field_energy_proxy(
        WaveLevels(state.fields.phi_prev, state.fields.phi_curr),
        WaveLevels(state.fields.a_prev, state.fields.a_curr),
        grid, dt, config.c,
    )
    return ConservedTotals(
        n_total_plus=float(np.sum(state.plus.f) * cell),
        n_total_minus=float(np.sum(state.minus.f) * cell),
        charge_total=float(np.sum(state.rho) * grid.dx),
        current_total=float(np.sum(state.j) * grid.dx),
        field_energy_proxy=proxy,
        max_abs_v_over_c=vmax / config.c,
    )


@dataclass
class FrequencyEstimate:
    omega: float
    uncertainty: float


def oscillation_frequency(series) -> FrequencyEstimate:
    """Angular frequency from the mean spacing of same-sign extrema.

    The series is detrended by a linear least-squares fit first; maxima
    spacings and minima spacings each estimate one period.  Growth or decay
    does not bias the spacing to first order.
    """
    data = np.asarray(series, dtype=float)
    times = data[:, 0]
    values = data[:, 1]
    trend = np.polynomial.Polynomial.fit(times, values, 1)
    detrended = values - trend(times)

    # A flat series detrends to pure roundoff; do not mistake that for a signal.
    if np.max(np.abs(detrended)) <= 1e-12 * max(1.0, float(np.max(np.abs(values)))):
        raise FrequencyError("too few extrema: series has no oscillation")

    interior = detrended[1:-1]
    is_max = (interior > detrended[:-2]) & (interior >= detrended[2:])
    is_min = (interior < detrended[:-2]) & (interior <= detrended[2:])
    t_max = times[1:-1][is_max]
    t_min = times[1:-1][is_min]
    if t_max.size + t_min.size < 4:
        raise FrequencyError(
            f"too few extrema ({t_max.size + t_min.size}) to estimate a period"
        )
    periods = np.concatenate([np.diff(t_max), np.diff(t_min)])
    if periods.size < 2:
        raise FrequencyError("too few extrema spacings to estimate a period")
    mean_period = float(np.mean(periods))
    omega = 2.0 * np.pi / mean_period
    spread = float(np.std(periods, ddof=1))
    return FrequencyEstimate(omega=omega, uncertainty=omega * spread / mean_period)


@dataclass
class DivergenceRow:
    step: int
    time: float
    f_plus_dist: float
    f_minus_dist: float
    phi_dist: float
    a_dist: float
    force_dist: float


def _centered_level(prev: np.ndarray, curr: np.ndarray) -> np.ndarray:
    return 0.5 * (prev + curr)


def snapshot_force(snap: StepSnapshot, config: Config, grid: PhaseSpaceGrid,
                   dt: float, species) -> np.ndarray:
    if not config.forces_enabled:
        return np.zeros((grid.nx, grid.np))
    return force_field(snap.fields, grid, dt, species.q, species.m, config.c,
                       config.relativistic, config.force_mode)


def _force_distance(fa: np.ndarray, fb: np.ndarray, grid: PhaseSpaceGrid) -> float:
    # Momentum-averaged x-space L2, so a p-independent force reads as its
    # plain x-space norm.
    diff_sq = np.mean((fa - fb) ** 2, axis=1)
    return float(np.sqrt(np.sum(diff_sq) * grid.dx))


def compare_runs(run_a, run_b) -> list:
    """Per-snapshot distances between two runs of identical configuration
    except force_mode.  Symmetric in its arguments."""
    ga, gb = run_a.grid, run_b.grid
    if (ga.nx, ga.np) != (gb.nx, gb.np) or (ga.x_max, ga.p_max) != (gb.x_max, gb.p_max):
        raise GridMismatchError("runs use different grids")
    if [s.step for s in run_a.snapshots] != [s.step for s in run_b.snapshots]:
        raise GridMismatchError("runs recorded different snapshot steps")

    grid = ga
    rows = []
    for sa, sb in zip(run_a.snapshots, run_b.snapshots):
        phi_a = _centered_level(sa.fields.phi_prev, sa.fields.phi_curr)
        phi_b = _centered_level(sb.fields.phi_prev, sb.fields.phi_curr)
        a_a = _centered_level(sa.fields.a_prev, sa.fields.a_curr)
        a_b = _centered_level(sb.fields.a_prev, sb.fields.a_curr)
        force_sq = 0.0
        for label in ("plus", "minus"):
            spec_a = getattr(run_a.config, label)
            spec_b = getattr(run_b.config, label)
            fa = snapshot_force(sa, run_a.config, grid, run_a.dt, spec_a)
            fb = snapshot_force(sb, run_b.config, grid, run_b.dt, spec_b)
            force_sq += _force_distance(fa, fb, grid) ** 2
        rows.append(DivergenceRow(
            step=sa.step,
            time=sa.time,
            f_plus_dist=_l2_phase(sa.f_plus - sb.f_plus, grid),
            f_minus_dist=_l2_phase(sa.f_minus - sb.f_minus, grid),
            phi_dist=_l2_x(phi_a - phi_b, grid),
            a_dist=_l2_x(a_a - a_b, grid),
            force_dist=float(np.sqrt(0.5 * force_sq)),
        ))
    return rows


def make_record(state: SimulationState, history: StateHistory, config: Config,
                grid: PhaseSpaceGrid, dt: float) -> DiagnosticsRecord:
    """Per-step diagnostics row.

    The gauge residual is centered at this state's time.  The kinetic and
    continuity residuals need three snapshots, so they are centered one step
    back and report 0 until enough history exists.
    """
    totals = conserved_totals(state, grid, config, dt)
    gauge = gauge_residual(
        WaveLevels(state.fields.phi_prev, state.fields.phi_curr),
        WaveLevels(state.fields.a_prev, state.fields.a_curr),
        grid, dt, config.c,
    ).l2
    cont = 0.0
    vlas_plus = 0.0
    vlas_minus = 0.0
    if history.full:
        s0, s1, s2 = history.snapshots
        cont = continuity_residual(s0.n_minus, s2.n_minus, s1.flux_minus,
                                   grid, dt).l2
        vlas_plus = vlasov_residual(s0.f_plus, s1.f_plus, s2.f_plus, s1.fields,
                                    config.plus.q, config.plus.m, config, grid, dt)
        vlas_minus = vlasov_residual(s0.f_minus, s1.f_minus, s2.f_minus, s1.fields,
                                     config.minus.q, config.minus.m, config, grid, dt)
    return DiagnosticsRecord(
        step=state.step,
        time=state.time,
        n_total_plus=totals.n_total_plus,
        n_total_minus=totals.n_total_minus,
        charge_total=totals.charge_total,
        current_total=totals.current_total,
        gauge_residual_l2=gauge,
        continuity_residual_l2=cont,
        vlasov_residual_plus_l2=vlas_plus,
        vlasov_residual_minus_l2=vlas_minus,
        max_abs_v_over_c=totals.max_abs_v_over_c,
        field_energy_proxy=totals.field_energy_proxy,
    )
