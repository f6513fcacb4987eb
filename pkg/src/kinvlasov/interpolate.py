"""Cubic-spline interpolation kernels for the semi-Lagrangian sweeps.

Two variants are needed:

* periodic splines on the uniform x grid, evaluated at a constant per-column
  shift.  On a uniform periodic grid the cubic-spline interpolant equals the
  cardinal cubic B-spline series whose coefficients solve a circulant
  tridiagonal system, so the coefficient solve is one FFT division and the
  evaluation is a four-tap gather;

* natural splines (zero second derivative at both ends) along p, evaluated at
  arbitrary per-point foot locations, with zero extension outside the node
  range.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def periodic_shift_columns(f: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Spline-interpolated periodic shift of each column of f along axis 0.

    Column j is resampled at x_i - alpha[j] * dx, i.e. values move forward by
    alpha[j] cells.  Exact at nodes (up to FFT roundoff) for integer alpha.
    """
    nx, ncol = f.shape
    fhat = np.fft.rfft(f, axis=0)
    theta = 2.0 * np.pi * np.arange(fhat.shape[0]) / nx
    bspline_symbol = (4.0 + 2.0 * np.cos(theta)) / 6.0
    coef = np.fft.irfft(fhat / bspline_symbol[:, None], n=nx, axis=0)

    g = -np.asarray(alpha, dtype=float)      # foot point x_i + g * dx
    s = np.floor(g).astype(int)
    u = g - s                                # fractional offset in [0, 1)

    one_m = 1.0 - u
    w0 = one_m**3 / 6.0
    w1 = (4.0 - 6.0 * u**2 + 3.0 * u**3) / 6.0
    w2 = (1.0 + 3.0 * u + 3.0 * u**2 - 3.0 * u**3) / 6.0
    w3 = u**3 / 6.0

    rows = np.arange(nx)[:, None]
    cols = np.arange(ncol)[None, :]
    base = rows + s[None, :] - 1
    out = np.zeros_like(f)
    for d, w in enumerate((w0, w1, w2, w3)):
        out += w[None, :] * coef[(base + d) % nx, cols]
    return out


def natural_spline_moments(f: np.ndarray, h: float) -> np.ndarray:
    """Second derivatives of the natural cubic spline through each row of f.

    Rows of f sample uniformly spaced nodes (spacing h) along axis 1; the
    returned array has the same shape, with zero end values.
    """
    n = f.shape[1]
    rhs = 6.0 * (f[:, 2:] - 2.0 * f[:, 1:-1] + f[:, :-2]) / (h * h)
    ab = np.ones((3, n - 2))
    ab[1] = 4.0
    ab[0, 0] = 0.0
    ab[2, -1] = 0.0
    moments = np.zeros_like(f)
    moments[:, 1:-1] = solve_banded((1, 1), ab, rhs.T).T
    return moments


def eval_natural_spline(nodes: np.ndarray, f: np.ndarray, moments: np.ndarray,
                        queries: np.ndarray) -> np.ndarray:
    """Evaluate each row's natural spline at that row's query points.

    Queries outside [nodes[0], nodes[-1]] return 0 (zero extension beyond the
    resolved momentum range).
    """
    h = nodes[1] - nodes[0]
    n = nodes.size
    k = np.clip(np.floor((queries - nodes[0]) / h).astype(int), 0, n - 2)
    t = (queries - (nodes[0] + k * h)) / h

    lo = np.take_along_axis(f, k, axis=1)
    hi = np.take_along_axis(f, k + 1, axis=1)
    mlo = np.take_along_axis(moments, k, axis=1)
    mhi = np.take_along_axis(moments, k + 1, axis=1)

    one_m = 1.0 - t
    values = (
        lo * one_m
        + hi * t
        + (h * h / 6.0) * ((one_m**3 - one_m) * mlo + (t**3 - t) * mhi)
    )
    inside = (queries >= nodes[0]) & (queries <= nodes[-1])
    return np.where(inside, values, 0.0)
