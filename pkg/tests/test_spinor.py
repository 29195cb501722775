"""Spinor pairs: the unit pair of an ordered point pair and its reversal rule."""

import numpy as np
import pytest

from atiyah_lab.errors import CoincidentPointsError
from atiyah_lab.spinor import SpinorPair, hopf_pair, pair_tables, reverse_pair

ORIGIN = np.zeros(3)


def _pair_for_direction(d):
    return hopf_pair(ORIGIN, np.asarray(d, dtype=float))


class TestHopfPair:
    def test_straight_up_uses_convention(self):
        p = _pair_for_direction([0, 0, 1])
        assert p.z == 1.0 and p.w == 0.0

    def test_straight_down(self):
        p = _pair_for_direction([0, 0, -1])
        assert abs(p.z) <= 1e-15
        assert p.w == pytest.approx(1.0, abs=1e-15)

    def test_horizontal_direction(self):
        p = _pair_for_direction([1, 0, 0])
        assert p.z == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-15)
        assert p.w == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-15)

    def test_unit_norm_many_directions(self, rng):
        dirs = rng.standard_normal((100_000, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        worst = 0.0
        for d in dirs:
            p = hopf_pair(ORIGIN, d)
            worst = max(worst, abs(p.norm_sq() - 1.0))
        assert worst <= 1e-12

    def test_ratio_consistency(self, rng):
        # z conj(w) must reproduce ratio * |w|^2 whenever w is not tiny
        for _ in range(2000):
            d = rng.standard_normal(3)
            r = np.linalg.norm(d)
            den = r - d[2]
            if den <= 1e-6 * r:
                continue
            ratio = (d[0] + 1j * d[1]) / den
            p = hopf_pair(ORIGIN, d)
            assert abs(p.z * np.conj(p.w) - ratio * abs(p.w) ** 2) <= 1e-10

    def test_gauge_w_real_nonnegative(self, rng):
        for _ in range(500):
            p = hopf_pair(ORIGIN, rng.standard_normal(3))
            assert p.w.imag == 0.0
            assert p.w.real >= 0.0

    def test_coincident_points_rejected(self):
        with pytest.raises(CoincidentPointsError):
            hopf_pair(ORIGIN, ORIGIN)

    def test_near_vertical_approaches_convention(self):
        p = hopf_pair(ORIGIN, np.array([1e-9, 0.0, 1.0]))
        assert abs(p.z - 1.0) <= 1e-8
        assert abs(p.w) <= 1e-8


class TestReversePair:
    def test_basis_pairs(self):
        assert reverse_pair(SpinorPair(1.0, 0.0)) == SpinorPair(0.0, 1.0)
        assert reverse_pair(SpinorPair(0.0, 1.0)) == SpinorPair(-1.0, 0.0)

    def test_complex_example(self):
        s = 1.0 / np.sqrt(2.0)
        p = reverse_pair(SpinorPair(s, 1j * s))
        assert p.z == pytest.approx(1j * s, abs=1e-15)
        assert p.w == pytest.approx(s, abs=1e-15)

    def test_double_reverse_is_negation(self, rng):
        for _ in range(200):
            p = hopf_pair(ORIGIN, rng.standard_normal(3))
            q = reverse_pair(reverse_pair(p))
            assert abs(q.z + p.z) <= 1e-15
            assert abs(q.w + p.w) <= 1e-15

    def test_preserves_norm_exactly(self, rng):
        for _ in range(200):
            p = hopf_pair(ORIGIN, rng.standard_normal(3))
            assert reverse_pair(p).norm_sq() == p.norm_sq()


class TestPairTables:
    def test_reversal_rule_and_diagonal(self, rng):
        pts = rng.standard_normal((5, 3))
        z, w = pair_tables(pts)
        for i in range(5):
            assert z[i, i] == 1.0 and w[i, i] == 0.0
            for j in range(i + 1, 5):
                assert z[j, i] == -np.conj(w[i, j])
                assert w[j, i] == np.conj(z[i, j])

    def test_entries_match_scalar_pairs(self, rng):
        pts = rng.standard_normal((4, 3))
        z, w = pair_tables(pts)
        for i in range(4):
            for j in range(4):
                if i < j:
                    p = hopf_pair(pts[i], pts[j])
                    assert abs(z[i, j] - p.z) <= 1e-15
                    assert abs(w[i, j] - p.w) <= 1e-15
