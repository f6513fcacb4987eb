"""Lorenz-gauge wave-equation field solver: explicit leapfrog, periodic Poisson
initialization, CFL validation, and the gauge-condition monitor.

Both potentials obey u_tt / c^2 - u_xx = s with s = 4 pi rho for phi and
s = (4 pi / c) j for A.  The gauge condition phi_t / c + A_x = 0 is never
enforced; it is evaluated as a residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PhaseSpaceGrid


class FieldBlowupError(RuntimeError):
    """Non-finite field values produced by a wave update."""


class NonNeutralError(ValueError):
    """Charge density with nonzero mean; the periodic Poisson problem is unsolvable."""


@dataclass
class WaveLevels:
    """Two retained time levels of one field component (u_prev earlier, u_curr later)."""

    u_prev: np.ndarray
    u_curr: np.ndarray


@dataclass
class ResidualField:
    field: np.ndarray
    l2: float


@dataclass
class CflResult:
    ok: bool
    light_ratio: float      # c * dt / dx
    transport_ratio: float  # max |v| * dt / dx

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        return (
            f"c*dt/dx = {self.light_ratio:.6g}, max|v|*dt/dx = {self.transport_ratio:.6g}"
        )


class CflViolationError(RuntimeError):
    def __init__(self, result: CflResult):
        self.result = result
        super().__init__(f"CFL violation: {result.describe()} (limit 1)")


# Centered periodic differences used throughout the solver.

def d1_periodic(u: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(u, -1) - np.roll(u, 1)) / (2.0 * dx)


def d2_periodic(u: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / (dx * dx)


# Admit the exact stability boundary, with a small allowance for the roundoff
# incurred when dt is derived from the ratio itself.
_CFL_SLACK = 1e-9


def cfl_check(grid: PhaseSpaceGrid, dt: float, c: float, v_max: float = 0.0) -> CflResult:
    """Stability bounds of the explicit schemes: light signal and kinetic transport."""
    light = c * dt / grid.dx
    transport = v_max * dt / grid.dx
    ok = light <= 1.0 + _CFL_SLACK and transport <= 1.0 + _CFL_SLACK
    return CflResult(ok=ok, light_ratio=light, transport_ratio=transport)


def ensure_cfl(grid: PhaseSpaceGrid, dt: float, c: float, v_max: float = 0.0) -> CflResult:
    result = cfl_check(grid, dt, c, v_max)
    if not result.ok:
        raise CflViolationError(result)
    return result


def wave_step(levels: WaveLevels, source: np.ndarray, grid: PhaseSpaceGrid,
              dt: float, c: float) -> np.ndarray:
    """One leapfrog update; the source must be sampled at u_curr's time.  The
    caller rotates levels."""
    u_next = (
        2.0 * levels.u_curr
        - levels.u_prev
        + (c * dt) ** 2 * (d2_periodic(levels.u_curr, grid.dx) + source)
    )
    if not np.all(np.isfinite(u_next)):
        raise FieldBlowupError("wave update produced non-finite values")
    return u_next


def poisson_init(rho: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """Solve -D2 phi = 4 pi rho exactly in the discrete sense, zero-mean.

    D2 is diagonal in the discrete Fourier basis with symbol
    (2 - 2 cos(2 pi k / nx)) / dx^2, so the solve is exact for every resolved mode.
    """
    rho = np.asarray(rho, dtype=float)
    scale = np.max(np.abs(rho))
    if scale == 0.0:
        return np.zeros_like(rho)
    if abs(np.mean(rho)) > 1e-12 * scale:
        raise NonNeutralError(
            f"non-neutral charge density (mean {np.mean(rho):.3e}, max |rho| {scale:.3e}); "
            "periodic Poisson problem unsolvable"
        )
    nx = grid.nx
    rho_hat = np.fft.rfft(rho)
    theta = 2.0 * np.pi * np.arange(rho_hat.size) / nx
    symbol = (2.0 - 2.0 * np.cos(theta)) / grid.dx**2
    phi_hat = np.zeros_like(rho_hat)
    phi_hat[1:] = 4.0 * np.pi * rho_hat[1:] / symbol[1:]
    phi = np.fft.irfft(phi_hat, n=nx)
    return phi - phi.mean()


def gauge_residual(phi: WaveLevels, a: WaveLevels, grid: PhaseSpaceGrid,
                   dt: float, c: float) -> ResidualField:
    """Residual of phi_t / c + A_x, centered at the midpoint of the two levels.

    The A term uses the level average so both terms sit at the same time.
    """
    r = (phi.u_curr - phi.u_prev) / (c * dt) + d1_periodic(
        0.5 * (a.u_prev + a.u_curr), grid.dx
    )
    return ResidualField(field=r, l2=float(np.sqrt(np.sum(r * r) * grid.dx)))


def field_energy_proxy(phi: WaveLevels, a: WaveLevels, grid: PhaseSpaceGrid,
                       dt: float, c: float) -> float:
    """Quadratic field-energy proxy from the stored levels, time-centered.

    Sum of squared time derivatives (per c) and squared space derivatives of
    both potentials, integrated over x.
    """
    total = 0.0
    for levels in (phi, a):
        du_dt = (levels.u_curr - levels.u_prev) / (c * dt)
        du_dx = d1_periodic(0.5 * (levels.u_prev + levels.u_curr), grid.dx)
        total += float(np.sum(du_dt * du_dt + du_dx * du_dx) * grid.dx)
    return total
