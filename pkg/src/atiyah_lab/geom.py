"""Euclidean primitives shared by all modules.

Points are plain float64 arrays of shape (3,) (configurations: (n, 3)).
All quantities here are homogeneous in the configuration scale, so
tolerances are expressed relative to a natural scale (max pairwise
distance) raised to the degree of the quantity being tested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfigurationError,
    GeometryError,
    NonRealizableMetricsError,
)

# |q| <= REL_TOL * scale**degree counts as zero.
REL_TOL = 1e-9


def as_points(pts) -> np.ndarray:
    """Coerce to an (n, 3) float array, rejecting non-finite coordinates."""
    a = np.asarray(pts, dtype=float)
    if a.ndim == 1 and a.size == 3:
        a = a[None, :]
    if a.ndim != 2 or a.shape[1] != 3:
        raise GeometryError(f"expected an (n, 3) array of points, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GeometryError("points contain non-finite coordinates")
    return a


def distance(p, q) -> float:
    """Euclidean distance |p - q|."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.linalg.norm(q - p))


def pairwise_distances(pts) -> np.ndarray:
    """Full symmetric (n, n) distance matrix."""
    a = as_points(pts)
    diff = a[None, :, :] - a[:, None, :]
    return np.linalg.norm(diff, axis=-1)


def config_scale(pts) -> float:
    """Natural scale of a configuration: the maximum pairwise distance."""
    return float(pairwise_distances(pts).max())


def d3(a, b, c):
    """(a+b-c)(a+c-b)(b+c-a), symmetric in its arguments. Vectorized."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    out = (a + b - c) * (a + c - b) * (b + c - a)
    return out if out.ndim else float(out)


def delta(a: float, b: float, c: float) -> float:
    """d3(a,b,c) / (2abc): inradius over circumradius; in [0, 1/2]."""
    if min(a, b, c) <= 0:
        raise GeometryError("triangle sides must be positive")
    return d3(a, b, c) / (2.0 * a * b * c)


def delta_many(a, b, c):
    """Unchecked vectorized form of delta(); callers guarantee positive sides."""
    return d3(a, b, c) / (2.0 * np.asarray(a) * np.asarray(b) * np.asarray(c))


def triangle_angles(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Angles (radians) opposite the sides a, b, c, via the law of cosines.

    Cosines are clamped to [-1, 1] so that nearly degenerate but realizable
    triangles do not trip domain errors; genuinely unrealizable side triples
    are rejected.
    """
    if min(a, b, c) <= 0:
        raise GeometryError("triangle sides must be positive")
    scale = max(a, b, c)
    if d3(a, b, c) < -REL_TOL * scale**3:
        raise GeometryError(f"sides ({a}, {b}, {c}) do not form a triangle")
    ca = np.clip((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0)
    cb = np.clip((a * a + c * c - b * b) / (2.0 * a * c), -1.0, 1.0)
    cc = np.clip((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0)
    return float(np.arccos(ca)), float(np.arccos(cb)), float(np.arccos(cc))


def heron_area(a: float, b: float, c: float) -> float:
    """Triangle area from 16 S^2 = d3(a,b,c) (a+b+c)."""
    s2 = d3(a, b, c) * (a + b + c) / 16.0
    return float(np.sqrt(max(s2, 0.0)))


def circum_in_radii(a: float, b: float, c: float) -> tuple[float, float]:
    """(circumradius, inradius) of a nondegenerate triangle."""
    if min(a, b, c) <= 0:
        raise GeometryError("triangle sides must be positive")
    scale = max(a, b, c)
    if d3(a, b, c) <= REL_TOL * scale**3:
        raise DegenerateConfigurationError(
            f"degenerate triangle ({a}, {b}, {c}) has no circumradius"
        )
    s = heron_area(a, b, c)
    return float(a * b * c / (4.0 * s)), float(2.0 * s / (a + b + c))


# Order of the six pairwise distances of a 4-point configuration:
# (r12, r13, r14, r23, r24, r34); PAIRS[m] gives the 0-based vertex pair.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_PAIR_INDEX = np.full((4, 4), -1, dtype=int)
for _m, (_i, _j) in enumerate(PAIRS):
    _PAIR_INDEX[_i, _j] = _PAIR_INDEX[_j, _i] = _m


def pair_index(i: int, j: int) -> int:
    """Index into an r6 vector for the unordered pair (i, j)."""
    return int(_PAIR_INDEX[i, j])


def r6_from_points(pts) -> np.ndarray:
    """Six pairwise distances of 4 points, in PAIRS order."""
    a = as_points(pts)
    if a.shape[0] != 4:
        raise GeometryError("expected exactly 4 points")
    d = pairwise_distances(a)
    return np.array([d[i, j] for i, j in PAIRS])


def cayley_menger_vsq(r6, *, check: bool = True):
    """Squared tetrahedron volume from the six distances (PAIRS order).

    Vectorized over leading axes. Negative values (rounding noise on coplanar
    inputs) are clamped to 0; values below -REL_TOL * scale^6 raise
    NonRealizableMetricsError (only when ``check`` is set; batch callers with
    realizable inputs skip it).
    """
    r = np.asarray(r6, dtype=float)
    sq = r * r
    m = np.zeros(r.shape[:-1] + (5, 5))
    m[..., 0, 1:] = 1.0
    m[..., 1:, 0] = 1.0
    for k, (i, j) in enumerate(PAIRS):
        m[..., 1 + i, 1 + j] = sq[..., k]
        m[..., 1 + j, 1 + i] = sq[..., k]
    vsq = np.linalg.det(m) / 288.0
    scale6 = np.max(r, axis=-1) ** 6
    if check and np.any(vsq < -REL_TOL * scale6):
        raise NonRealizableMetricsError("distances are not realizable in R^3")
    # coplanar samplers produce tiny negatives (~ -1e-17); only those are clamped
    vsq = np.maximum(vsq, 0.0)
    return vsq if vsq.ndim else float(vsq)


def circumsphere(pts) -> tuple[np.ndarray, np.ndarray]:
    """Circumsphere (center, radius) of stacked tetrahedra of shape (..., 4, 3).

    Raises for (near-)coplanar quadruples, where no finite circumsphere exists.
    """
    a = np.asarray(pts, dtype=float)
    rows = a[..., 1:, :] - a[..., :1, :]
    rhs = np.sum(a[..., 1:, :] ** 2, axis=-1) - np.sum(a[..., :1, :] ** 2, axis=-1)
    try:
        center = np.linalg.solve(2.0 * rows, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfigurationError("coplanar points have no circumsphere") from exc
    radius = np.linalg.norm(center - a[..., 0, :], axis=-1)
    return center, radius


@dataclass(frozen=True)
class Similitude:
    """p -> scale * rotation @ p + translation.

    The rotation block may be a reflection; ``orientation`` reports the sign
    of its determinant.
    """

    scale: float
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        if self.scale <= 0:
            raise GeometryError("similitude scale must be positive")
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (3, 3) or np.abs(r @ r.T - np.eye(3)).max() > 1e-12:
            raise GeometryError("rotation block is not orthogonal to 1e-12")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float))

    @property
    def orientation(self) -> int:
        return 1 if np.linalg.det(self.rotation) > 0 else -1

    @classmethod
    def identity(cls) -> "Similitude":
        return cls(1.0, np.eye(3), np.zeros(3))


def apply_similitude(s: Similitude, pts) -> np.ndarray:
    """Apply a similitude to every point of a configuration."""
    a = as_points(pts)
    return s.scale * a @ s.rotation.T + s.translation


@dataclass(frozen=True)
class QuadClassification:
    """Outcome of classify_quadrilateral.

    kind is one of 'convex', 'reflex', 'non-coplanar', 'crossed', 'degenerate';
    reflex_index (1-based) names the point interior to the others' triangle
    when kind == 'reflex'.
    """

    kind: str
    reflex_index: int | None = None


def _barycentric(p, a, b, c) -> np.ndarray | None:
    """Barycentric coordinates of p in triangle abc (None if degenerate)."""
    u, v, w = b - a, c - a, p - a
    d00, d01, d11 = u @ u, u @ v, v @ v
    d20, d21 = w @ u, w @ v
    den = d00 * d11 - d01 * d01
    if den <= 0:
        return None
    beta = (d11 * d20 - d01 * d21) / den
    gamma = (d00 * d21 - d01 * d20) / den
    return np.array([1.0 - beta - gamma, beta, gamma])


def classify_quadrilateral(pts) -> QuadClassification:
    """Classify 4 distinct points in the cyclic order x1 x2 x3 x4."""
    a = as_points(pts)
    if a.shape[0] != 4:
        raise GeometryError("expected exactly 4 points")
    d = pairwise_distances(a)
    scale = d.max()
    if np.min(d[np.triu_indices(4, 1)]) <= REL_TOL * scale:
        raise GeometryError("repeated points")

    vsq = cayley_menger_vsq(r6_from_points(a), check=False)
    if vsq > REL_TOL * scale**6:
        return QuadClassification("non-coplanar")

    # Plane basis from the two longest independent edge directions.
    u = a[1] - a[0]
    u /= np.linalg.norm(u)
    best, bestn = None, 0.0
    for p in a[2:]:
        v = p - a[0] - ((p - a[0]) @ u) * u
        nv = np.linalg.norm(v)
        if nv > bestn:
            best, bestn = v, nv
    if best is None or bestn <= REL_TOL * scale:
        return QuadClassification("degenerate")  # collinear
    v = best / bestn
    xy = np.stack([(a - a[0]) @ u, (a - a[0]) @ v], axis=-1)

    cross = []
    for i in range(4):
        e1 = xy[(i + 1) % 4] - xy[i]
        e2 = xy[(i + 2) % 4] - xy[(i + 1) % 4]
        cross.append(e1[0] * e2[1] - e1[1] * e2[0])
    cross = np.asarray(cross)
    tol2 = REL_TOL * scale**2
    if np.all(cross > tol2) or np.all(cross < -tol2):
        return QuadClassification("convex")

    for idx in range(4):
        others = [k for k in range(4) if k != idx]
        bc = _barycentric(a[idx], *(a[k] for k in others))
        if bc is not None and np.all(bc > REL_TOL):
            return QuadClassification("reflex", reflex_index=idx + 1)

    if np.any(np.abs(cross) <= tol2):
        return QuadClassification("degenerate")
    return QuadClassification("crossed")
