import numpy as np
import pytest

from armpilot.transforms import (
    axis_angle_matrices,
    matrix_to_quat,
    quat_angle_between,
    quat_conjugate,
    quat_from_axis_angle,
    quat_multiply,
    quat_normalize,
    quat_rotate,
    quat_to_matrix,
    quat_yaw,
)


def random_quats(rng, n):
    q = rng.normal(size=(n, 4))
    return np.array([quat_normalize(x) for x in q])


def test_normalize_unit_and_sign():
    q = quat_normalize([-2.0, 0.0, 0.0, 0.0])
    assert np.allclose(q, [1.0, 0.0, 0.0, 0.0])
    q = quat_normalize([3.0, 4.0, 0.0, 0.0])
    assert abs(np.linalg.norm(q) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        quat_normalize([0.0, 0.0, 0.0, 0.0])


def test_multiply_matches_matrix_product(rng):
    for a, b in zip(random_quats(rng, 50), random_quats(rng, 50)):
        ab = quat_multiply(a, b)
        assert np.allclose(quat_to_matrix(ab), quat_to_matrix(a) @ quat_to_matrix(b), atol=1e-12)


def test_rotate_matches_matrix(rng):
    for q in random_quats(rng, 50):
        v = rng.normal(size=3)
        assert np.allclose(quat_rotate(q, v), quat_to_matrix(q) @ v, atol=1e-12)


def test_conjugate_inverts(rng):
    for q in random_quats(rng, 20):
        ident = quat_multiply(q, quat_conjugate(q))
        assert quat_angle_between(ident, [1, 0, 0, 0]) < 1e-9


def test_axis_angle_quarter_turn():
    q = quat_from_axis_angle([0, 0, 1], np.pi / 2)
    assert np.allclose(quat_rotate(q, [1, 0, 0]), [0, 1, 0], atol=1e-12)
    assert abs(quat_yaw(q) - np.pi / 2) < 1e-12


def test_matrix_quat_roundtrip(rng):
    for q in random_quats(rng, 100):
        q2 = matrix_to_quat(quat_to_matrix(q))
        assert quat_angle_between(q, q2) < 1e-9


def test_angle_between_symmetry_and_range(rng):
    qs = random_quats(rng, 30)
    for a, b in zip(qs, qs[::-1]):
        ang = quat_angle_between(a, b)
        assert 0.0 <= ang <= np.pi + 1e-12
        assert abs(ang - quat_angle_between(b, a)) < 1e-12


def test_angle_between_known():
    a = np.array([1.0, 0.0, 0.0, 0.0])
    b = quat_from_axis_angle([0, 0, 1], np.pi / 2)
    assert abs(quat_angle_between(a, b) - np.pi / 2) < 1e-12


def test_axis_angle_matrices_batch(rng):
    axis = np.array([0.0, 1.0, 0.0])
    angles = rng.uniform(-np.pi, np.pi, 17)
    Rs = axis_angle_matrices(axis, angles)
    for R, th in zip(Rs, angles):
        assert np.allclose(R, quat_to_matrix(quat_from_axis_angle(axis, th)), atol=1e-12)
