"""Deterministic symmetric eigendecomposition by cyclic Jacobi rotations.

Kept dependency-light on purpose: the clustering pipeline needs results
that are bit-identical across runs and platforms, which rules out ceding
eigenvector sign and ordering conventions to a LAPACK build.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np


def jacobi_eigh(
    matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns.

    Cyclic-by-row sweeps with a fixed (p, q) order; stops when the
    off-diagonal Frobenius norm drops below ``tol``. Eigenvector signs are
    canonicalized so the entry of largest magnitude is positive.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-9):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v

    def off_norm() -> float:
        return float(np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0))

    for _ in range(max_sweeps):
        if off_norm() < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / (n * n):
                    continue
                # classic Jacobi rotation annihilating a[p, q]
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    else:
        if off_norm() >= tol:
            raise RuntimeError(f"jacobi sweep cap ({max_sweeps}) hit before convergence")

    values = a.diagonal().copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(n):
        col = vectors[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            vectors[:, j] = -col
    return values, vectors
