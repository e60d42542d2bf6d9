import math
import random

import numpy as np
import pytest

from repairspace import (
    DistanceMatrix,
    compute_repairs,
    distance_matrix,
    mds_embed,
    stress,
    validate_matrix,
)

from conftest import (
    published_label_map,
    random_distance_matrix,
    random_three_point_metric,
    non_planar_matrix,
)


# --- stress -----------------------------------------------------------------------


def test_stress_at_origin():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, 3.0], [3.0, 0.0]]))
    assert stress([[0.0, 0.0], [0.0, 0.0]], m) == pytest.approx(math.sqrt(18.0))


def test_stress_zero_for_exact_configuration():
    m = DistanceMatrix(
        labels=("a", "b", "c"),
        values=np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]),
    )
    pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]
    assert stress(pts, m) == pytest.approx(0.0)


def test_stress_rejects_bad_shapes():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match=r"\(n, 2\)"):
        stress([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], m)
    with pytest.raises(ValueError, match="points for a"):
        stress([[0.0, 0.0]], m)


def test_stress_invariant_under_rigid_motion():
    rng = random.Random(17)
    m = random_distance_matrix(rng, 5)
    pts = np.array([[rng.uniform(-3, 3), rng.uniform(-3, 3)] for _ in range(5)])
    theta = 0.73
    rot = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    )
    moved = pts @ rot.T + np.array([4.2, -1.1])
    assert stress(moved, m) == pytest.approx(stress(pts, m))


# --- matrix validation --------------------------------------------------------------


def test_validate_matrix_rejects_nonzero_diagonal():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[1.0, 2.0], [2.0, 0.0]]))
    with pytest.raises(ValueError, match="diagonal"):
        validate_matrix(m)


def test_validate_matrix_rejects_asymmetry():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, 2.0], [3.0, 0.0]]))
    with pytest.raises(ValueError, match="symmetric"):
        validate_matrix(m)


def test_validate_matrix_rejects_negative_entries():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, -2.0], [-2.0, 0.0]]))
    with pytest.raises(ValueError, match="nonnegative"):
        validate_matrix(m)


# --- embedding behaviour --------------------------------------------------------------


def test_three_point_metrics_embed_exactly():
    rng = random.Random(23)
    for _ in range(25):
        m = random_three_point_metric(rng)
        emb = mds_embed(m)
        assert emb.achieved_stress < 1e-6


def test_non_planar_matrix_keeps_high_stress():
    m = non_planar_matrix()
    for seed in range(20):
        emb = mds_embed(m, seed=seed)
        assert emb.achieved_stress > 0.1


def test_stress_history_is_monotone():
    rng = random.Random(29)
    for _ in range(10):
        m = random_distance_matrix(rng, rng.randint(3, 7))
        emb = mds_embed(m)
        h = emb.stress_history
        assert all(h[i + 1] < h[i] for i in range(len(h) - 1))
        assert emb.iterations_used == len(h) - 1
        assert emb.achieved_stress == pytest.approx(h[-1])


def test_embedding_is_canonicalized():
    rng = random.Random(31)
    for _ in range(10):
        m = random_distance_matrix(rng, rng.randint(2, 6))
        pts = mds_embed(m).points
        assert np.allclose(pts.mean(axis=0), 0.0, atol=1e-9)
        assert pts[0, 1] == pytest.approx(0.0, abs=1e-9)
        assert pts[0, 0] >= -1e-9


def test_embedding_is_deterministic():
    rng = random.Random(37)
    m = random_distance_matrix(rng, 6)
    a = mds_embed(m, seed=3)
    b = mds_embed(m, seed=3)
    assert np.array_equal(a.points, b.points)
    assert a.stress_history == b.stress_history


def test_single_point_embedding():
    m = DistanceMatrix(labels=("a",), values=np.zeros((1, 1)))
    emb = mds_embed(m)
    assert emb.points.shape == (1, 2)
    assert emb.achieved_stress == 0.0
    assert emb.iterations_used == 0
    assert emb.stress_history == (0.0,)


def test_two_point_embedding_recovers_distance():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, 7.0], [7.0, 0.0]]))
    emb = mds_embed(m)
    gap = np.linalg.norm(emb.points[0] - emb.points[1])
    assert gap == pytest.approx(7.0, abs=1e-6)


def test_embedding_records():
    m = DistanceMatrix(labels=("a", "b"), values=np.array([[0.0, 2.0], [2.0, 0.0]]))
    records = mds_embed(m).to_records()
    assert [r["label"] for r in records] == ["a", "b"]
    assert all(set(r) == {"label", "x", "y"} for r in records)


def test_example_embedding_keeps_close_pairs_close(example_kb):
    repairs = compute_repairs(example_kb)
    ix = published_label_map(repairs)
    emb = mds_embed(distance_matrix(repairs))
    p = emb.points
    near = np.linalg.norm(p[ix["r3"]] - p[ix["r4"]])
    far = np.linalg.norm(p[ix["r3"]] - p[ix["r0"]])
    assert near < far
