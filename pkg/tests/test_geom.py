"""Euclidean primitives: distances, triangle quantities, volumes, predicates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atiyah_lab import geom
from atiyah_lab.errors import (
    DegenerateConfigurationError,
    GeometryError,
    NonRealizableMetricsError,
)
from conftest import (
    REGULAR_TET,
    UNIT_SQUARE,
    UNIT_TET,
    random_points,
    random_rotation,
    random_triangle_sides,
)


class TestDistance:
    def test_zero_for_identical_points(self):
        assert geom.distance((0, 0, 0), (0, 0, 0)) == 0.0

    def test_unit_axis(self):
        assert geom.distance((0, 0, 0), (1, 0, 0)) == 1.0

    def test_three_four_five(self):
        assert geom.distance((1, 2, 3), (4, 6, 3)) == 5.0


class TestD3:
    def test_equilateral(self):
        assert geom.d3(1, 1, 1) == 1.0

    def test_degenerate(self):
        assert geom.d3(2, 1, 1) == 0.0

    @given(
        st.tuples(
            st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0)
        )
    )
    @settings(max_examples=200)
    def test_symmetric_after_canonicalization(self, sides):
        # all 6 evaluation orders agree with the sorted order to 1e-12 relative
        a, b, c = sides
        ref = geom.d3(*sorted(sides))
        scale = max(sides) ** 3
        for perm in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]:
            assert abs(geom.d3(*perm) - ref) <= 1e-12 * max(abs(ref), scale)

    def test_law_of_cosines_identity(self, rng):
        # d3(a,b,c) = 2abc (cos A + cos B + cos C - 1)
        for _ in range(100):
            a, b, c = random_triangle_sides(rng)
            angles = geom.triangle_angles(a, b, c)
            rhs = 2.0 * a * b * c * (sum(np.cos(angles)) - 1.0)
            assert abs(geom.d3(a, b, c) - rhs) <= 1e-10 * (a * b * c)


class TestDelta:
    def test_equilateral_is_half(self):
        assert geom.delta(1, 1, 1) == pytest.approx(0.5, abs=1e-15)

    def test_degenerate_is_zero(self):
        assert geom.delta(2, 1, 1) == 0.0

    def test_rejects_nonpositive_side(self):
        with pytest.raises(GeometryError):
            geom.delta(0.0, 1, 1)

    def test_matches_inradius_over_circumradius(self, rng):
        for _ in range(10_000):
            a, b, c = random_triangle_sides(rng)
            big_r, small_r = geom.circum_in_radii(a, b, c)
            assert abs(geom.delta(a, b, c) - small_r / big_r) <= 1e-10 * (small_r / big_r)

    def test_range_and_equilateral_maximum(self, rng):
        for _ in range(500):
            a, b, c = random_triangle_sides(rng)
            assert 0.0 <= geom.delta(a, b, c) <= 0.5 + 1e-12
        s = 1.0
        assert geom.delta(s, s + 5e-7, s - 5e-7) > 0.5 - 1e-5


class TestTriangleAngles:
    def test_equilateral(self):
        angles = geom.triangle_angles(1, 1, 1)
        assert np.allclose(angles, np.pi / 3.0, atol=1e-14)

    def test_right_angle_opposite_hypotenuse(self):
        a, _, _ = geom.triangle_angles(5, 4, 3)
        assert a == pytest.approx(np.pi / 2.0, abs=1e-12)

    def test_angle_sum(self, rng):
        for _ in range(200):
            sides = random_triangle_sides(rng)
            assert sum(geom.triangle_angles(*sides)) == pytest.approx(np.pi, abs=1e-10)

    def test_rejects_unrealizable_sides(self):
        with pytest.raises(GeometryError):
            geom.triangle_angles(10, 1, 1)


class TestCayleyMengerVsq:
    def test_regular_tetrahedron_edge_one(self):
        r6 = geom.r6_from_points(UNIT_TET)
        assert geom.cayley_menger_vsq(r6) == pytest.approx(1.0 / 72.0, rel=1e-12)

    def test_coplanar_is_zero(self, rng):
        for _ in range(50):
            pts = random_points(rng, 4, planar=True)
            assert geom.cayley_menger_vsq(geom.r6_from_points(pts)) <= 1e-12

    def test_corner_tetrahedron(self):
        pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
        r6 = geom.r6_from_points(pts)
        assert geom.cayley_menger_vsq(r6) == pytest.approx(1.0 / 36.0, rel=1e-12)

    def test_matches_triple_product(self, rng):
        # relative agreement, with an absolute floor in scale^6 because the
        # bordered determinant cancels catastrophically for thin tetrahedra
        for _ in range(10_000):
            pts = random_points(rng, 4)
            r6 = geom.r6_from_points(pts)
            vsq = geom.cayley_menger_vsq(r6)
            tp = np.linalg.det(pts[1:] - pts[0]) ** 2 / 36.0
            assert abs(vsq - tp) <= 1e-10 * tp + 1e-12 * r6.max() ** 6

    def test_rejects_unrealizable_metrics(self):
        with pytest.raises(NonRealizableMetricsError):
            geom.cayley_menger_vsq([10.0, 1.0, 1.0, 1.0, 1.0, 1.0])


class TestCircumInRadii:
    def test_equilateral(self):
        big_r, small_r = geom.circum_in_radii(1, 1, 1)
        assert big_r == pytest.approx(1.0 / np.sqrt(3.0), rel=1e-14)
        assert small_r == pytest.approx(1.0 / (2.0 * np.sqrt(3.0)), rel=1e-14)

    def test_right_triangle_circumradius(self):
        big_r, _ = geom.circum_in_radii(5, 4, 3)
        assert big_r == pytest.approx(2.5, rel=1e-14)

    def test_rejects_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            geom.circum_in_radii(2, 1, 1)


class TestCircumsphere:
    def test_regular_tetrahedron_centered(self):
        center, radius = geom.circumsphere(REGULAR_TET)
        assert np.allclose(center, 0.0, atol=1e-12)
        assert radius == pytest.approx(np.sqrt(3.0), rel=1e-12)

    def test_coplanar_raises(self):
        with pytest.raises(DegenerateConfigurationError):
            geom.circumsphere(UNIT_SQUARE)


class TestSimilitude:
    def test_identity_preserves_points(self, rng):
        pts = random_points(rng, 5)
        out = geom.apply_similitude(geom.Similitude.identity(), pts)
        assert np.array_equal(out, pts)

    def test_pure_scaling(self):
        s = geom.Similitude(2.0, np.eye(3), np.zeros(3))
        out = geom.apply_similitude(s, [[0, 0, 0], [1, 0, 0]])
        assert np.allclose(out, [[0, 0, 0], [2, 0, 0]])

    def test_orientation_sign(self, rng):
        rot = random_rotation(rng)
        assert geom.Similitude(1.0, rot, np.zeros(3)).orientation == 1
        refl = rot @ np.diag([1.0, 1.0, -1.0])
        assert geom.Similitude(1.0, refl, np.zeros(3)).orientation == -1

    def test_rejects_non_orthogonal(self):
        with pytest.raises(GeometryError):
            geom.Similitude(1.0, np.eye(3) + 1e-6, np.zeros(3))

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(GeometryError):
            geom.Similitude(0.0, np.eye(3), np.zeros(3))


class TestClassifyQuadrilateral:
    def test_square_is_convex(self):
        assert geom.classify_quadrilateral(UNIT_SQUARE).kind == "convex"

    def test_interior_point_is_reflex(self):
        pts = [[0, 0, 0], [4, 0, 0], [0, 4, 0], [1, 1, 0]]
        cls = geom.classify_quadrilateral(pts)
        assert cls.kind == "reflex"
        assert cls.reflex_index == 4

    def test_tetrahedron_is_non_coplanar(self):
        assert geom.classify_quadrilateral(REGULAR_TET).kind == "non-coplanar"

    def test_collinear_is_degenerate(self):
        pts = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]]
        assert geom.classify_quadrilateral(pts).kind == "degenerate"

    def test_crossed_order(self):
        # square vertices visited in a bowtie order
        pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]
        assert geom.classify_quadrilateral(pts).kind == "crossed"

    def test_repeated_points_rejected(self):
        with pytest.raises(GeometryError):
            geom.classify_quadrilateral([[0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0]])


class TestAsPoints:
    def test_rejects_bad_shape(self):
        with pytest.raises(GeometryError):
            geom.as_points([[1.0, 2.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(GeometryError):
            geom.as_points([[0.0, 0.0, np.nan], [1.0, 0.0, 0.0]])
