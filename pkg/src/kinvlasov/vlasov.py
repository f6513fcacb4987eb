"""Strang-split semi-Lagrangian evolution of both distribution functions.

Each step executes the fixed stage sequence

    half advection in x  ->  field update  ->  momentum kick  ->  half advection in x

with the charge and current recomputed after the first half advection, so the
leapfrog source sits exactly at the current field level's time (levels are
staggered half a step ahead of f).  The kick force is built from the two field
levels that straddle the kick time, a centered difference spanning 2 dt.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .config import Config
from .fields import WaveLevels, wave_step
from .forces import force_field, velocity_from_momentum
from .grid import PhaseSpaceGrid
from .interpolate import (
    eval_natural_spline,
    natural_spline_moments,
    periodic_shift_columns,
)
from .moments import charge_density, current_density
from .state import FieldState, SimulationState, SpeciesState, refresh_moments


class SplittingStage(Enum):
    half_advect_x = "half_advect_x"
    field_update = "field_update"
    kick_p = "kick_p"
    half_advect_x_2 = "half_advect_x_2"


STAGE_ORDER = (
    SplittingStage.half_advect_x,
    SplittingStage.field_update,
    SplittingStage.kick_p,
    SplittingStage.half_advect_x_2,
)


class KickDisplacementError(RuntimeError):
    """Momentum displacement exceeded the sanity bound (CFL or physics blow-up)."""


def time_step(config: Config, grid: PhaseSpaceGrid) -> float:
    """dt = cfl_fraction * dx / max(c, v_char), v_char the fastest grid velocity."""
    v_char = max(
        abs(velocity_from_momentum(config.p_max, s.m, config.c, config.relativistic))
        for s in config.species
    )
    return config.cfl_fraction * grid.dx / max(config.c, v_char)


def max_velocity(config: Config, grid: PhaseSpaceGrid) -> float:
    """Fastest |v| reachable on the momentum grid across both species."""
    p_edge = np.max(np.abs(grid.p_nodes))
    return max(
        abs(velocity_from_momentum(p_edge, s.m, config.c, config.relativistic))
        for s in config.species
    )


def advect_x(f: np.ndarray, grid: PhaseSpaceGrid, dt: float, m: float,
             c: float, relativistic: bool) -> np.ndarray:
    """f(x, p) <- f(x - v(p) dt, p), periodic cubic-spline interpolation in x."""
    if dt == 0.0:
        return f.copy()
    v = velocity_from_momentum(grid.p_nodes, m, c, relativistic)
    alpha = v * dt / grid.dx
    return periodic_shift_columns(f, alpha)


def kick_p(f: np.ndarray, force: np.ndarray, grid: PhaseSpaceGrid, dt: float,
           refine: int = 0) -> np.ndarray:
    """f(x, p) <- f(x, p - F(x, p) dt), natural cubic splines in p, zero outside.

    The characteristic is frozen at the pre-kick p; with refine = 1 the foot
    point gets one fixed-point update using the force re-sampled there.
    """
    if dt == 0.0 or not np.any(force):
        return f.copy()
    displacement = force * dt
    limit = 0.25 * grid.np * grid.dp
    worst = float(np.max(np.abs(displacement)))
    if worst >= limit:
        raise KickDisplacementError(
            f"momentum displacement {worst:.3e} exceeds sanity bound {limit:.3e} "
            f"({grid.np}/4 cells); reduce dt or check the fields"
        )
    p = grid.p_nodes[None, :]
    if refine:
        foot_guess = p - displacement
        k = np.clip(np.floor((foot_guess - grid.p_nodes[0]) / grid.dp).astype(int),
                    0, grid.np - 2)
        t = np.clip((foot_guess - (grid.p_nodes[0] + k * grid.dp)) / grid.dp, 0.0, 1.0)
        f_lo = np.take_along_axis(force, k, axis=1)
        f_hi = np.take_along_axis(force, k + 1, axis=1)
        displacement = (f_lo * (1.0 - t) + f_hi * t) * dt
    queries = p - displacement
    moments = natural_spline_moments(f, grid.dp)
    return eval_natural_spline(grid.p_nodes, f, moments, queries)


def step(state: SimulationState, config: Config, grid: PhaseSpaceGrid) -> SimulationState:
    """Advance the coupled system by one dt; returns a new state, input untouched."""
    dt = time_step(config, grid)
    half = 0.5 * dt
    c = config.c
    rel = config.relativistic
    plus, minus = state.plus, state.minus

    # Stage 1: half advection in x.
    f_plus = advect_x(plus.f, grid, half, plus.m, c, rel)
    f_minus = advect_x(minus.f, grid, half, minus.m, c, rel)

    # Stage 2: field update, sourced by the mid-step moments.
    rho_mid = charge_density(f_plus, f_minus, plus.q, minus.q, grid)
    j_mid = current_density(f_plus, f_minus, plus.q, minus.q, plus.m, minus.m,
                            c, rel, grid)
    old = state.fields
    phi_new = wave_step(WaveLevels(old.phi_prev, old.phi_curr),
                        4.0 * np.pi * rho_mid, grid, dt, c)
    a_new = wave_step(WaveLevels(old.a_prev, old.a_curr),
                      (4.0 * np.pi / c) * j_mid, grid, dt, c)

    # Stage 3: momentum kick with the force centered at the kick time.  The
    # pre-update prev level and the post-update level straddle it by dt each.
    if config.forces_enabled:
        straddle = FieldState(phi_prev=old.phi_prev, phi_curr=phi_new,
                              a_prev=old.a_prev, a_curr=a_new)
        for_plus = force_field(straddle, grid, 2.0 * dt, plus.q, plus.m, c, rel,
                               config.force_mode)
        for_minus = force_field(straddle, grid, 2.0 * dt, minus.q, minus.m, c, rel,
                                config.force_mode)
        f_plus = kick_p(f_plus, for_plus, grid, dt, config.kick_refine)
        f_minus = kick_p(f_minus, for_minus, grid, dt, config.kick_refine)

    # Stage 4: half advection in x.
    f_plus = advect_x(f_plus, grid, half, plus.m, c, rel)
    f_minus = advect_x(f_minus, grid, half, minus.m, c, rel)

    new_state = SimulationState(
        time=state.time + dt,
        step=state.step + 1,
        plus=SpeciesState(plus.q, plus.m, f_plus),
        minus=SpeciesState(minus.q, minus.m, f_minus),
        fields=FieldState(phi_prev=old.phi_curr, phi_curr=phi_new,
                          a_prev=old.a_curr, a_curr=a_new),
        rho=state.rho,
        j=state.j,
    )
    return refresh_moments(new_state, config, grid)
