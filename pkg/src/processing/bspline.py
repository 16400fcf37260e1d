"""B-spline bases over a boundary grid with linear extrapolation."""

from typing import Tuple

import numpy as np

from ..exceptions import SplineGridError
from ..models.kan import validate_grid


def extended_knots(grid: np.ndarray, degree: int) -> np.ndarray:
    """Boundary grid padded with `degree` knots per side at the end-interval spacing."""
    grid = np.asarray(grid, dtype=float)
    validate_grid(grid)
    if degree < 1:
        raise SplineGridError(f"Spline degree must be >= 1, got {degree}")
    steps = np.arange(degree, 0, -1)
    left = grid[0] - steps * (grid[1] - grid[0])
    right = grid[-1] + steps[::-1] * (grid[-1] - grid[-2])
    return np.concatenate([left, grid, right])


def _cox_de_boor(x: np.ndarray, knots: np.ndarray, degree: int, right_closed: np.ndarray) -> np.ndarray:
    """
    All basis functions of the given degree at each x: (n, len(knots) - 1 - degree).

    Degree-0 intervals are [t_i, t_i+1) except where right_closed, which uses
    (t_i, t_i+1] so the upper grid end belongs to the last real interval.
    """
    xs = x[:, None]
    lower, upper = knots[:-1][None, :], knots[1:][None, :]
    closed = right_closed[:, None]
    basis = np.where(closed, (xs > lower) & (xs <= upper), (xs >= lower) & (xs < upper)).astype(float)
    for d in range(1, degree + 1):
        t_i, t_id = knots[:-(d + 1)], knots[d:-1]
        t_i1, t_id1 = knots[1:-d], knots[d + 1:]
        basis = (xs - t_i) / (t_id - t_i) * basis[:, :-1] + (t_id1 - xs) / (t_id1 - t_i1) * basis[:, 1:]
    return basis


def _basis_derivative(x: np.ndarray, knots: np.ndarray, degree: int, right_closed: np.ndarray) -> np.ndarray:
    lower = _cox_de_boor(x, knots, degree - 1, right_closed)
    t_i, t_ik = knots[:-(degree + 1)], knots[degree:-1]
    t_i1, t_ik1 = knots[1:-degree], knots[degree + 1:]
    return degree * (lower[:, :-1] / (t_ik - t_i) - lower[:, 1:] / (t_ik1 - t_i1))


def basis_matrix(x: np.ndarray, grid: np.ndarray, degree: int) -> np.ndarray:
    """
    Dense basis values (n, grid_intervals + degree) at each x.

    Inside [grid[0], grid[-1]] rows sum to 1. Outside, every basis function
    continues linearly from the nearest boundary (value plus slope), so the
    spline itself extrapolates linearly.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise SplineGridError("Spline inputs must be finite")
    knots = extended_knots(grid, degree)
    lo, hi = float(grid[0]), float(grid[-1])
    clamped = np.clip(x, lo, hi)
    right_closed = clamped >= hi
    values = _cox_de_boor(clamped, knots, degree, right_closed)
    outside = clamped != x
    if np.any(outside):
        slopes = _basis_derivative(clamped[outside], knots, degree, right_closed[outside])
        values[outside] += slopes * (x[outside] - clamped[outside])[:, None]
    return values


def bspline_basis(x: float, grid: np.ndarray, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Indices and weights of the degree + 1 basis functions supported at x.

    Indices refer to coefficient positions (0..grid_intervals + degree - 1).
    Outside the grid the boundary span is used with extrapolated weights.
    """
    grid = np.asarray(grid, dtype=float)
    knots = extended_knots(grid, degree)
    row = basis_matrix(np.array([x], dtype=float), grid, degree)[0]
    clamped = min(max(float(x), float(grid[0])), float(grid[-1]))
    if clamped >= grid[-1]:
        span = int(np.searchsorted(knots, clamped, side="left")) - 1
    else:
        span = int(np.searchsorted(knots, clamped, side="right")) - 1
    indices = np.arange(span - degree, span + 1)
    return indices, row[indices]
