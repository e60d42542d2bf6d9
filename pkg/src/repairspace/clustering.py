"""Partitioning the repair set from its distance matrix.

Two clustering-function instances: normalized spectral clustering (with a
Gaussian similarity kernel) and a deterministic threshold clustering on
the distance graph. The spectral path is fully hand-specified (cyclic
Jacobi eigensolver, seeded farthest-first k-means) so identical inputs
give identical partitions on any platform.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .eigen import jacobi_eigh
from .geometry import validate_matrix
from .metric import DistanceMatrix

KMEANS_MAX_ITERS = 100


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks of repair indices covering the repair set.

    Canonical form: members sorted within a block, blocks sorted by their
    smallest member.
    """

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set = set()
        for block in self.blocks:
            if not block:
                raise ValueError("partition blocks must be nonempty")
            overlap = seen & set(block)
            if overlap:
                raise ValueError(f"indices {sorted(overlap)} appear in more than one block")
            seen |= set(block)
        if seen != set(range(len(seen))):
            raise ValueError("blocks must cover indices 0..n-1 exactly")

    @staticmethod
    def from_blocks(blocks) -> "Partition":
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return Partition(blocks=canon)

    @staticmethod
    def from_labels(labels: Sequence[int]) -> "Partition":
        groups: dict = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return Partition.from_blocks(groups.values())

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, index: int) -> int:
        for b, block in enumerate(self.blocks):
            if index in block:
                return b
        raise KeyError(index)


def default_sigma(m: DistanceMatrix) -> float:
    """Half the median off-diagonal distance (1.0 for trivial matrices)."""
    n = len(m)
    off = [m.values[i, j] for i in range(n) for j in range(i + 1, n)]
    if not off:
        return 1.0
    med = float(np.median(off))
    return med / 2.0 if med > 0 else 1.0


def similarity_from_distance(m: DistanceMatrix, sigma: float) -> np.ndarray:
    """Gaussian kernel of the distances, with self-affinity zeroed out."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    validate_matrix(m)
    s = np.exp(-(m.values**2) / (2.0 * sigma * sigma))
    np.fill_diagonal(s, 0.0)
    return s


def eigenvalue_report(m: DistanceMatrix, sigma: float | None = None) -> List[float]:
    """Descending eigenvalues of the normalized similarity operator.

    The gaps between consecutive values help choose k; no automatic
    selection is performed.
    """
    if sigma is None:
        sigma = default_sigma(m)
    if len(m) == 1:
        return [0.0]
    laplacian, _ = _normalized_operator(m, sigma)
    values, _ = jacobi_eigh(laplacian)
    return [float(v) for v in values]


def _normalized_operator(m: DistanceMatrix, sigma: float) -> Tuple[np.ndarray, np.ndarray]:
    affinity = similarity_from_distance(m, sigma)
    degrees = affinity.sum(axis=1)
    for i, d in enumerate(degrees):
        if d <= 0:
            raise ValueError(
                f"repair {m.labels[i]!r} has zero similarity to every other repair "
                "(zero degree); increase sigma"
            )
    inv_sqrt = 1.0 / np.sqrt(degrees)
    return affinity * np.outer(inv_sqrt, inv_sqrt), affinity


def _farthest_first_centers(rows: np.ndarray, k: int, seed: int) -> List[int]:
    """Seeded farthest-first center selection.

    Points are handled by coordinate order, not input position, so
    relabeling the inputs relabels the chosen centers the same way.
    """
    n = rows.shape[0]
    order = sorted(range(n), key=lambda i: tuple(rows[i]))
    rng = random.Random(seed)
    centers = [order[rng.randrange(n)]]
    while len(centers) < k:
        best_idx, best_key = -1, None
        for i in order:
            if i in centers:
                continue
            nearest = min(float(((rows[i] - rows[c]) ** 2).sum()) for c in centers)
            key = (-nearest, tuple(rows[i]))
            if best_key is None or key < best_key:
                best_idx, best_key = i, key
        centers.append(best_idx)
    return centers


def _kmeans_labels(rows: np.ndarray, k: int, seed: int) -> List[int]:
    """Seeded farthest-first k-means, run to assignment fixpoint.

    A point equidistant to several centroids joins the lowest-indexed one;
    an emptied cluster recentres on the point farthest from its assigned
    centroid (ties broken by coordinate order).
    """
    n = rows.shape[0]
    centroids = rows[_farthest_first_centers(rows, k, seed)].copy()
    labels = [-1] * n
    for _ in range(KMEANS_MAX_ITERS):
        distances = ((rows[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = [int(np.argmin(distances[i])) for i in range(n)]

        for c in range(k):
            if c not in new_labels:
                farthest = min(
                    range(n),
                    key=lambda i: (-distances[i, new_labels[i]], tuple(rows[i])),
                )
                centroids[c] = rows[farthest]
                new_labels[farthest] = c

        if new_labels == labels:
            break
        labels = new_labels
        for c in range(k):
            members = [i for i in range(n) if labels[i] == c]
            if members:
                centroids[c] = rows[members].mean(axis=0)
    return labels


def spectral_partition(
    m: DistanceMatrix, k: int, sigma: float | None = None, seed: int = 0
) -> Partition:
    """Normalized spectral clustering of the repair set into k blocks.

    Pipeline: Gaussian similarity, symmetric normalization by degrees,
    Jacobi eigendecomposition, rows of the top-k eigenvector matrix
    normalized to unit length (zero rows left as zero), seeded k-means.
    Deterministic given (matrix, k, sigma, seed).
    """
    n = len(m)
    if not 1 <= k <= n:
        raise ValueError(f"k must be between 1 and {n}, got {k}")
    if k == 1:
        return Partition.from_blocks([range(n)])
    if sigma is None:
        sigma = default_sigma(m)
    laplacian, _ = _normalized_operator(m, sigma)
    _, vectors = jacobi_eigh(laplacian)
    rows = vectors[:, :k].copy()
    norms = np.sqrt((rows**2).sum(axis=1))
    for i in range(n):
        if norms[i] > 0:
            rows[i] /= norms[i]
    return Partition.from_labels(_kmeans_labels(rows, k, seed))


def threshold_partition(m: DistanceMatrix, tau: float) -> Partition:
    """Connected components of the graph with edges where distance < tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    validate_matrix(m)
    n = len(m)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if m.values[i, j] < tau:
                parent[find(i)] = find(j)

    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return Partition.from_blocks(groups.values())
