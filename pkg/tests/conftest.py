"""Shared fixtures and reference configurations for the test suite."""

import numpy as np
import pytest

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

# regular tetrahedron with edge length 2*sqrt(2)
REGULAR_TET = np.array(
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
)

# regular tetrahedron with unit edge
UNIT_TET = np.array(
    [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, SQRT3 / 2.0, 0.0],
        [0.5, SQRT3 / 6.0, np.sqrt(6.0) / 3.0],
    ]
)

UNIT_SQUARE = np.array(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]
)

EQUILATERAL = np.array(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, SQRT3 / 2.0, 0.0]]
)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


def random_points(gen, n, planar=False):
    """n points in the unit ball, resampled until well separated."""
    while True:
        u = gen.standard_normal((n, 3))
        if planar:
            u[:, 2] = 0.0
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        pts = u * gen.random((n, 1)) ** (0.5 if planar else 1.0 / 3.0)
        d = np.linalg.norm(pts[None] - pts[:, None], axis=-1)
        iu = np.triu_indices(n, 1)
        if d[iu].min() >= 1e-3:
            return pts


def random_triangle_sides(gen):
    """Side lengths of a nondegenerate triangle, by construction from points."""
    while True:
        pts = random_points(gen, 3)
        a = np.linalg.norm(pts[1] - pts[2])
        b = np.linalg.norm(pts[0] - pts[2])
        c = np.linalg.norm(pts[0] - pts[1])
        if (a + b - c) * (a + c - b) * (b + c - a) > 1e-6:
            return float(a), float(b), float(c)


def random_rotation(gen):
    """Haar-ish random proper rotation from a QR factorization."""
    q, r = np.linalg.qr(gen.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def cyclic_quad(gen, radius=1.0):
    """Four concyclic points in convex position on a circle in the z=0 plane."""
    while True:
        t = np.sort(gen.random(4) * 2.0 * np.pi)
        gaps = np.diff(np.concatenate([t, [t[0] + 2.0 * np.pi]]))
        if gaps.min() >= 2e-3:
            break
    return radius * np.stack([np.cos(t), np.sin(t), np.zeros(4)], axis=-1)
