"""Uniform cell-centered phase-space grid, periodic in x and truncated in p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    nx: int
    np: int
    x_max: float
    p_max: float
    dx: float
    dp: float
    x_nodes: np.ndarray  # (nx,) cell centers in [0, x_max)
    p_nodes: np.ndarray  # (np,) cell centers in [-p_max, p_max], symmetric about 0


def build_grid(config: Config) -> PhaseSpaceGrid:
    dx = config.x_max / config.nx
    dp = 2.0 * config.p_max / config.np
    x_nodes = (np.arange(config.nx) + 0.5) * dx
    p_nodes = -config.p_max + (np.arange(config.np) + 0.5) * dp
    return PhaseSpaceGrid(
        nx=config.nx,
        np=config.np,
        x_max=config.x_max,
        p_max=config.p_max,
        dx=dx,
        dp=dp,
        x_nodes=x_nodes,
        p_nodes=p_nodes,
    )
