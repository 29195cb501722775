"""Four-point toolkit: the determinant real-part polynomial, the Crelle
triangle, angle tables, and the inequality margins for the verification
suites.

Distance vectors follow the geom.PAIRS order (r12, r13, r14, r23, r24, r34);
all margin functions are vectorized over leading axes of such vectors. Margins
are returned signed and unclamped: pass/fail is the harness's business.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import pi

import numpy as np

from .determinant import atiyah_determinant, atiyah_determinant_batch
from .errors import (
    DegenerateConfigurationError,
    GeometryError,
    NonRealizableMetricsError,
)
from .geom import (
    PAIRS,
    REL_TOL,
    as_points,
    cayley_menger_vsq,
    classify_quadrilateral,
    d3,
    pair_index,
    r6_from_points,
    triangle_angles,
)

# FACE_EDGES[l]: indices into an r6 vector of the three sides of the face
# opposite vertex l (the triangle on the other three vertices).
FACE_VERTICES = tuple(tuple(v for v in range(4) if v != l) for l in range(4))
FACE_EDGES = tuple(
    (pair_index(i, j), pair_index(i, k), pair_index(j, k))
    for (i, j, k) in FACE_VERTICES
)

# For each permutation sigma of {0,1,2,3}: the index array taking r6 to
# r6^sigma (entry for pair (i,j) becomes r_{sigma(i), sigma(j)}).
_PERM_R6 = np.array(
    [[pair_index(s[i], s[j]) for (i, j) in PAIRS] for s in permutations(range(4))],
    dtype=int,
)

# Indices of the opposite-edge products (r12*r34, r13*r24, r14*r23).
_OPP = ((0, 5), (1, 4), (2, 3))


@dataclass(frozen=True)
class FourPointMetrics:
    """The six pairwise distances of a 4-point configuration."""

    r6: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r6, dtype=float)
        if r.shape != (6,):
            raise GeometryError("expected 6 pairwise distances")
        if not np.all(r > 0):
            raise GeometryError("distances must be positive")
        object.__setattr__(self, "r6", r)

    @classmethod
    def from_points(cls, pts) -> "FourPointMetrics":
        return cls(r6_from_points(pts))

    @classmethod
    def from_distances(cls, r12, r13, r14, r23, r24, r34) -> "FourPointMetrics":
        m = cls(np.array([r12, r13, r14, r23, r24, r34], dtype=float))
        cayley_menger_vsq(m.r6)  # raises NonRealizableMetricsError if needed
        return m

    def r(self, i: int, j: int) -> float:
        """Symmetric access with 1-based vertex labels."""
        if i == j or not (1 <= i <= 4 and 1 <= j <= 4):
            raise GeometryError("need distinct labels in 1..4")
        return float(self.r6[pair_index(i - 1, j - 1)])

    @property
    def scale(self) -> float:
        return float(self.r6.max())

    def vsq(self) -> float:
        return cayley_menger_vsq(self.r6)


def _r6(m) -> np.ndarray:
    return m.r6 if isinstance(m, FourPointMetrics) else np.asarray(m, dtype=float)


def cos_alpha_table(r6) -> np.ndarray:
    """cos(alpha[i][j]) for i != j: the angle at vertex i within the face
    opposite vertex j. Vectorized; diagonal entries are 0 and unused.
    """
    r = _r6(r6)
    out = np.zeros(r.shape[:-1] + (4, 4))
    for j in range(4):
        face = FACE_VERTICES[j]
        for i in face:
            mth, pth = (v for v in face if v != i)
            a = r[..., pair_index(i, mth)]
            b = r[..., pair_index(i, pth)]
            c = r[..., pair_index(mth, pth)]
            out[..., i, j] = (a * a + b * b - c * c) / (2.0 * a * b)
    return out


def face_deltas(r6) -> np.ndarray:
    """delta of the four face triangles, [..., l] = face opposite vertex l."""
    r = _r6(r6)
    out = np.empty(r.shape[:-1] + (4,))
    for l, (e1, e2, e3) in enumerate(FACE_EDGES):
        a, b, c = r[..., e1], r[..., e2], r[..., e3]
        out[..., l] = d3(a, b, c) / (2.0 * a * b * c)
    return out


def crelle_sides(r6) -> np.ndarray:
    """The three opposite-edge products, [..., (r12 r34, r13 r24, r14 r23)]."""
    r = _r6(r6)
    return np.stack([r[..., i] * r[..., j] for i, j in _OPP], axis=-1)


def crelle_delta_raw(r6):
    """Signed d3(products) / (2 prod): delta of the Crelle triangle.

    Exactly zero for concyclic or collinear quadruples; kept signed so that
    margins never hide near-violations.
    """
    p = crelle_sides(r6)
    val = d3(p[..., 0], p[..., 1], p[..., 2]) / (2.0 * np.prod(p, axis=-1))
    return val if np.ndim(val) else float(val)


def ptolemy_defect(r6):
    """d3 of the opposite-edge products; zero iff concyclic or collinear."""
    p = crelle_sides(r6)
    val = d3(p[..., 0], p[..., 1], p[..., 2])
    return val if np.ndim(val) else float(val)


def averaged_term(r6) -> np.ndarray:
    """av(r14 ((r24 + r34)^2 - r23^2) d3(r12, r13, r23)): the mean over all
    24 relabelings, by literal enumeration.
    """
    r = _r6(r6)
    rp = r[..., _PERM_R6]  # (..., 24, 6)
    f = (
        rp[..., 2]
        * ((rp[..., 4] + rp[..., 5]) ** 2 - rp[..., 3] ** 2)
        * d3(rp[..., 0], rp[..., 1], rp[..., 3])
    )
    return f.mean(axis=-1)


def en_real_part(r6, vsq):
    """Re(D * prod(2 r_ij)) as the degree-6 distance polynomial:

        64 prod(r) - 4 d3(opposite products) + 12 av(...) + 288 V^2.
    """
    r = _r6(r6)
    prod_r = np.prod(r, axis=-1)
    p = crelle_sides(r)
    val = (
        64.0 * prod_r
        - 4.0 * d3(p[..., 0], p[..., 1], p[..., 2])
        + 12.0 * averaged_term(r)
        + 288.0 * np.asarray(vsq)
    )
    return val if np.ndim(val) else float(val)


def _row_col_sums(cos_table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    row = cos_table.sum(axis=-1)  # diagonal entries are 0
    col = cos_table.sum(axis=-2)
    return row, col


def en_real_part_angles(r6):
    """The 12 av(...) term in its angle form:

        4 prod(r) sum_l (3 + cos-row_l)(cos-col_l - 1),

    where row l collects cos(alpha[l][m]) and column l collects
    cos(alpha[m][l]) over m != l.
    """
    r = _r6(r6)
    row, col = _row_col_sums(cos_alpha_table(r))
    s = ((3.0 + row) * (col - 1.0)).sum(axis=-1)
    val = 4.0 * np.prod(r, axis=-1) * s
    return val if np.ndim(val) else float(val)


def conj2_margin_formula(r6):
    """LHS - RHS of the angle inequality equivalent (for coplanar quadruples)
    to |D| >= 1:

        sum_l (3 + row_l) delta(face l)  -  2 delta(Crelle).
    """
    r = _r6(r6)
    row, col = _row_col_sums(cos_alpha_table(r))
    lhs = ((3.0 + row) * (col - 1.0)).sum(axis=-1)
    val = lhs - 2.0 * crelle_delta_raw(r)
    return val if np.ndim(val) else float(val)


def conj4_margin(r6):
    """Sum of the four face deltas minus the Crelle delta."""
    val = face_deltas(r6).sum(axis=-1) - crelle_delta_raw(r6)
    return val if np.ndim(val) else float(val)


def conj5_margin(r6):
    """Angle-inequality LHS minus twice the sum of face deltas."""
    r = _r6(r6)
    row, col = _row_col_sums(cos_alpha_table(r))
    lhs = ((3.0 + row) * (col - 1.0)).sum(axis=-1)
    val = lhs - 2.0 * face_deltas(r).sum(axis=-1)
    return val if np.ndim(val) else float(val)


def conj6_parts(r6) -> tuple[np.ndarray, np.ndarray]:
    """(LHS, RHS) of the squared inequality

        (16 + sum_l (3 + row_l) delta_l - 2 delta(Crelle))^2
            >= prod_l (delta_l + 4).
    """
    r = _r6(r6)
    row, col = _row_col_sums(cos_alpha_table(r))
    deltas = col - 1.0
    inner = 16.0 + ((3.0 + row) * deltas).sum(axis=-1) - 2.0 * crelle_delta_raw(r)
    lhs = inner * inner
    rhs = np.prod(deltas + 4.0, axis=-1)
    return lhs, rhs


def conj6_margin(r6):
    lhs, rhs = conj6_parts(r6)
    val = lhs - rhs
    return val if np.ndim(val) else float(val)


def technical_f(u, w, x, y, z):
    """The 15-cosine expression of the five-angle lemma; >= 3 on its domain."""
    u, w, x, y, z = (np.asarray(v, dtype=float) for v in (u, w, x, y, z))
    val = (
        np.cos(u)
        + np.cos(w)
        + np.cos(x)
        + np.cos(y)
        + np.cos(z)
        - np.cos(u + y + z)
        - np.cos(x + y + z)
        + np.cos(-w + y + z)
        + np.cos(u + w)
        + np.cos(x + y)
        - np.cos(u + y)
        - np.cos(w + x)
        + np.cos(u + x + y + z)
        - np.cos(-w + z)
        - np.cos(u + w + x + y)
    )
    return val if np.ndim(val) else float(val)


def technical_domain(u, w, x, y, z) -> np.ndarray:
    """Membership test for the lemma's constraint region."""
    u, w, x, y, z = (np.asarray(v, dtype=float) for v in (u, w, x, y, z))
    return (
        (u >= 0) & (w >= 0) & (x >= 0) & (y >= 0) & (z >= 0)
        & (w <= z)
        & (x + w <= pi)
        & (u + w + x + y + z <= 2 * pi)
        & (u + x + y + z <= pi)
        & (u + y + z <= pi)
    )


def ineq_two_margin(alpha: float, beta: float) -> float:
    """(3 + cos a + cos b + cos(a+b)) - 2 for 0 <= a, b with a + b <= pi.

    Also cross-checks the half-angle product identity to 1e-12.
    """
    if alpha < 0 or beta < 0 or alpha + beta > pi:
        raise GeometryError("need alpha, beta >= 0 and alpha + beta <= pi")
    s = 1.0 + np.cos(alpha) + np.cos(beta) + np.cos(alpha + beta)
    prod = 4.0 * np.cos(alpha / 2) * np.cos(beta / 2) * np.cos((alpha + beta) / 2)
    if abs(s - prod) > 1e-12:
        raise GeometryError("half-angle product identity violated beyond 1e-12")
    return float((3.0 + np.cos(alpha) + np.cos(beta) + np.cos(alpha + beta)) - 2.0)


def conj3_n4_parts_batch(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(LHS, RHS) of |D prod(2 r)|^2 >= prod_l (d3(face) + 8 prod(face sides))
    for stacked 4-point configurations (..., 4, 3).
    """
    pts = np.asarray(pts, dtype=float)
    dvals = atiyah_determinant_batch(pts)
    diff = pts[..., None, :, :] - pts[..., :, None, :]
    dist = np.linalg.norm(diff, axis=-1)
    r = np.stack([dist[..., i, j] for i, j in PAIRS], axis=-1)
    prod2r = np.prod(2.0 * r, axis=-1)
    lhs = np.abs(dvals * prod2r) ** 2
    rhs = np.ones(pts.shape[:-2])
    for e1, e2, e3 in FACE_EDGES:
        a, b, c = r[..., e1], r[..., e2], r[..., e3]
        rhs = rhs * (d3(a, b, c) + 8.0 * a * b * c)
    return lhs, rhs


def conj3_n4_margin(pts) -> float:
    """LHS - RHS of the n=4 power-product inequality, with a per-face check
    of 8 abc D(face) = d3(a,b,c) + 8 abc against the full determinant.
    """
    a = as_points(pts)
    if a.shape[0] != 4:
        raise GeometryError("expected exactly 4 points")
    lhs, rhs = conj3_n4_parts_batch(a)
    r = r6_from_points(a)
    for l, (e1, e2, e3) in enumerate(FACE_EDGES):
        sa, sb, sc = r[e1], r[e2], r[e3]
        face_pts = a[list(FACE_VERTICES[l])]
        dface = abs(atiyah_determinant(face_pts).value)
        identity_lhs = 8.0 * sa * sb * sc * dface
        identity_rhs = d3(sa, sb, sc) + 8.0 * sa * sb * sc
        if abs(identity_lhs - identity_rhs) > 1e-10 * abs(identity_rhs):
            raise GeometryError("three-point determinant identity violated")
    return float(lhs - rhs)


@dataclass(frozen=True)
class CrelleTriangle:
    sides: tuple[float, float, float]
    angles: tuple[float, float, float] | None  # None when degenerate
    delta: float
    degenerate: bool


def crelle_triangle(m) -> CrelleTriangle:
    """The triangle on the opposite-edge products; degenerate exactly for
    concyclic or collinear quadruples (Ptolemy).
    """
    p = crelle_sides(_r6(m))
    p1, p2, p3 = (float(v) for v in p)
    scale = max(p1, p2, p3)
    if d3(p1, p2, p3) <= REL_TOL * scale**3:
        return CrelleTriangle(sides=(p1, p2, p3), angles=None, delta=0.0, degenerate=True)
    angles = triangle_angles(p1, p2, p3)
    return CrelleTriangle(
        sides=(p1, p2, p3),
        angles=angles,
        delta=float(d3(p1, p2, p3) / (2.0 * p1 * p2 * p3)),
        degenerate=False,
    )


@dataclass(frozen=True)
class AngleTable:
    """alpha[i][j] (0-based, radians): angle at vertex i of the face opposite
    vertex j; diagonal entries are 0 and meaningless.
    """

    alpha: np.ndarray
    cos: np.ndarray

    def at(self, i: int, j: int) -> float:
        """1-based access matching the r(i, j) convention."""
        return float(self.alpha[i - 1, j - 1])


def angle_table(m) -> AngleTable:
    r = _r6(m)
    scale = float(np.max(r))
    for e1, e2, e3 in FACE_EDGES:
        if d3(r[e1], r[e2], r[e3]) <= REL_TOL * scale**3:
            raise DegenerateConfigurationError("a face triangle is degenerate")
    cos = cos_alpha_table(r)
    alpha = np.arccos(np.clip(cos, -1.0, 1.0))
    np.fill_diagonal(alpha, 0.0)
    return AngleTable(alpha=alpha, cos=cos)


def assoc_identity_check(m) -> float:
    """Difference between d3(opposite products) and
    2 (cos A + cos B + cos C - 1) prod(r), cosines from the law of cosines
    on the Crelle sides.

    Normalized by 2 prod(r) = 2 p1 p2 p3: both sides are bounded by that
    scale, and near-degenerate Crelle triangles (where both sides nearly
    cancel) then stay well conditioned.
    """
    r = _r6(m)
    p = crelle_sides(r)
    p1, p2, p3 = (float(v) for v in p)
    lhs = d3(p1, p2, p3)
    ca = (p2 * p2 + p3 * p3 - p1 * p1) / (2.0 * p2 * p3)
    cb = (p1 * p1 + p3 * p3 - p2 * p2) / (2.0 * p1 * p3)
    cc = (p1 * p1 + p2 * p2 - p3 * p3) / (2.0 * p1 * p2)
    prod_r = float(np.prod(r))
    rhs = 2.0 * (ca + cb + cc - 1.0) * prod_r
    return abs(lhs - rhs) / (2.0 * prod_r)


def crelle_angles_coplanar(pts) -> tuple[float, float, float]:
    """Crelle-triangle angles of a coplanar quadruple from the angle-table
    combinations (convex and interior-point cases).
    """
    a = as_points(pts)
    if a.shape[0] != 4:
        raise GeometryError("expected exactly 4 points")
    cls = classify_quadrilateral(a)
    if cls.kind == "non-coplanar":
        raise GeometryError("points are not coplanar")
    if cls.kind in ("crossed", "degenerate"):
        raise GeometryError(f"unsupported coplanar configuration: {cls.kind}")

    if cls.kind == "reflex":
        # relabel so the interior point is x4
        order = [k for k in range(4) if k != cls.reflex_index - 1] + [cls.reflex_index - 1]
        t = angle_table(FourPointMetrics.from_points(a[order])).alpha
        return (
            float(t[0, 1] + t[1, 0]),
            float(t[0, 2] + t[2, 0]),
            float(t[1, 2] + t[2, 1]),
        )

    t = angle_table(FourPointMetrics.from_points(a)).alpha
    if t[0, 2] + t[2, 0] > pi:
        # rotate labels by one so the other diagonal's angle sum is <= pi
        a = a[[1, 2, 3, 0]]
        t = angle_table(FourPointMetrics.from_points(a)).alpha
    return (
        float(abs(t[1, 2] - t[2, 1])),
        float(abs(t[1, 0] - t[0, 1])),
        float(t[0, 2] + t[2, 0]),
    )


@dataclass(frozen=True)
class InscribedAB:
    """A_l = 1 + row_l and B_l = delta(face opposite l) for a cyclic
    quadrilateral; satisfies A1+A3 = A2+A4 = B1+B3+4 = B2+B4+4 and
    A_l - B_l = 2 + 2 cos(angle at vertex l between its neighbors).
    """

    a: np.ndarray
    b: np.ndarray


def inscribed_ab(m) -> InscribedAB:
    r = _r6(m)
    p = crelle_sides(r)
    if abs(d3(p[0], p[1], p[2])) > REL_TOL * float(np.max(p)) ** 3:
        raise GeometryError("points are not concyclic (Ptolemy defect too large)")
    row, col = _row_col_sums(cos_alpha_table(r))
    return InscribedAB(a=1.0 + row, b=col - 1.0)


def isosceles_volume_bound(m) -> tuple[float, bool]:
    """(4 d3(opposite products) - 288 V^2, is_isosceles).

    The margin is nonnegative for every tetrahedron, zero exactly for
    isosceles ones (opposite edges pairwise equal).
    """
    r = _r6(m)
    margin = 4.0 * ptolemy_defect(r) - 288.0 * cayley_menger_vsq(r)
    scale = float(np.max(r))
    iso = all(abs(r[i] - r[j]) <= REL_TOL * scale for i, j in _OPP)
    return float(margin), iso
