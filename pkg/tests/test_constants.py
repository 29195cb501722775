"""Self-computed constants and the quadrature identities."""

import numpy as np
import pytest

from atiyah_lab import constants


def test_zeta3_matches_reference_digits():
    assert constants.zeta3() == pytest.approx(1.2020569031595943, abs=1e-14)


def test_catalan_matches_reference_digits():
    assert constants.catalan() == pytest.approx(0.9159655941772190, abs=1e-14)


def test_growth_constant_to_eight_decimals():
    # true value 0.4262783988...; 0.42627839 is a truncated print, so the
    # match is to 1e-8 rather than 5e-9
    assert abs(constants.growth_constant() - 0.42627839) <= 1e-8


def test_limit_constant_to_eight_decimals():
    # true value 0.0797048085...; the 8-decimal print 0.07970479 is a
    # truncation, so the match is to 2e-8 rather than 5e-9
    assert abs(constants.limit_constant() - 0.07970479) <= 2e-8


def test_integral_identities():
    out = constants.verify_integral_identities(tol=1e-8)
    assert set(out) == {"wedge_log_cot", "x_csc", "x2_csc"}
    for rec in out.values():
        assert rec["error"] <= 1e-8

    wedge = out["wedge_log_cot"]
    assert abs(wedge["value"] - 0.5258998951) <= 1e-9
    assert wedge["target"] == pytest.approx(7.0 / 16.0 * constants.zeta3(), abs=1e-15)

    assert out["x_csc"]["value"] == pytest.approx(2.0 * constants.catalan(), abs=1e-10)
    assert out["x2_csc"]["value"] == pytest.approx(
        2.0 * np.pi * constants.catalan() - 3.5 * constants.zeta3(), abs=1e-10
    )
