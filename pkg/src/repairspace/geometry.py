"""2D embedding of a distance matrix by stress majorization.

The stress of a configuration is the square root of the summed squared
differences between target distances and embedded Euclidean distances,
over all ordered pairs. Initialization is classical scaling; iteration is
the standard majorization update, which never increases stress.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .eigen import jacobi_eigh
from .metric import DistanceMatrix

DEFAULT_MAX_ITERS = 500
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Embedding:
    """Planar point per repair, aligned with the distance matrix labels."""

    labels: Tuple[str, ...]
    points: np.ndarray  # (n, 2)
    achieved_stress: float
    iterations_used: int
    stress_history: Tuple[float, ...]

    def to_records(self):
        return [
            {"label": lab, "x": float(x), "y": float(y)}
            for lab, (x, y) in zip(self.labels, self.points)
        ]


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def stress(points: Sequence[Sequence[float]], m: DistanceMatrix) -> float:
    """sqrt of the squared mismatch between target and embedded distances.

    Sums over all ordered pairs (the diagonal contributes nothing), so
    each unordered pair counts twice.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    if pts.shape[0] != len(m):
        raise ValueError(f"got {pts.shape[0]} points for a {len(m)}x{len(m)} matrix")
    embedded = _pairwise_distances(pts)
    return float(np.sqrt(((m.values - embedded) ** 2).sum()))


def validate_matrix(m: DistanceMatrix, tol: float = 1e-9) -> None:
    v = m.values
    if np.any(np.abs(v.diagonal()) > tol):
        raise ValueError("distance matrix must have a zero diagonal")
    if np.any(np.abs(v - v.T) > tol):
        raise ValueError("distance matrix must be symmetric")
    if np.any(v < -tol):
        raise ValueError("distance matrix must be nonnegative")


def _classical_scaling_init(m: DistanceMatrix, seed: int) -> np.ndarray:
    n = len(m)
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (m.values**2) @ j
    values, vectors = jacobi_eigh(b)
    top = np.clip(values[:2], 0.0, None)
    if top.max(initial=0.0) <= 1e-12:
        # centered matrix is numerically rank-0: seeded random restart
        rng = np.random.default_rng(seed)
        return rng.uniform(-1.0, 1.0, size=(n, 2))
    pts = np.zeros((n, 2))
    for d in range(min(2, len(values))):
        if values[d] > 0:
            pts[:, d] = vectors[:, d] * np.sqrt(values[d])
    return pts


def _majorize_step(points: np.ndarray, d: np.ndarray) -> np.ndarray:
    """One Guttman-transform update of the configuration."""
    n = points.shape[0]
    e = _pairwise_distances(points)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(e > 0, d / e, 0.0)
    np.fill_diagonal(ratio, 0.0)
    b = -ratio
    np.fill_diagonal(b, ratio.sum(axis=1))
    return (b @ points) / n


def _canonicalize(points: np.ndarray) -> np.ndarray:
    """Centroid to the origin; first point rotated onto the positive x-axis."""
    pts = points - points.mean(axis=0)
    x0, y0 = pts[0]
    r = np.hypot(x0, y0)
    if r > 1e-12:
        c, s = x0 / r, y0 / r
        rot = np.array([[c, s], [-s, c]])
        pts = pts @ rot.T
    return pts


def mds_embed(
    m: DistanceMatrix,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> Embedding:
    """Embed the matrix in the plane, minimizing stress by majorization.

    Deterministic given (matrix, seed, tol, max_iters). Iterates until the
    relative stress improvement falls below ``tol`` or the iteration cap;
    a step that fails to improve (floating-point noise near convergence)
    is discarded, so the recorded stress history never increases.
    """
    validate_matrix(m)
    n = len(m)
    if n == 1:
        return Embedding(
            labels=m.labels,
            points=np.zeros((1, 2)),
            achieved_stress=0.0,
            iterations_used=0,
            stress_history=(0.0,),
        )

    points = _classical_scaling_init(m, seed)
    current = stress(points, m)
    history = [current]
    iterations = 0
    for _ in range(max_iters):
        candidate = _majorize_step(points, m.values)
        value = stress(candidate, m)
        if value >= current:
            break
        points = candidate
        iterations += 1
        history.append(value)
        improvement = (current - value) / current if current > 0 else 0.0
        current = value
        if current == 0.0 or improvement < tol:
            break

    points = _canonicalize(points)
    return Embedding(
        labels=m.labels,
        points=points,
        achieved_stress=stress(points, m),
        iterations_used=iterations,
        stress_history=tuple(history),
    )
