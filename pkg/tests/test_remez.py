import math

import numpy as np
import pytest

from conftest import disk_points
from remezkit.polytools import ComplexPolynomial
from remezkit.remez import (
    complex_remez_bound,
    distortion_bounds,
    leading_coeff_bound,
    real_remez_bound,
    sigma,
    sp_remez_bound,
    summarize,
    verify_cartan,
    verify_leading_coeff,
    verify_polynomial_remez,
)

E = math.e
P = ComplexPolynomial


def test_closed_forms():
    assert real_remez_bound(1, 2) == pytest.approx(1)
    assert real_remez_bound(2, 1) == pytest.approx(17)
    assert real_remez_bound(7, 2) == pytest.approx(1)
    with pytest.raises(ValueError, match="invariant must be positive"):
        real_remez_bound(2, 0)
    assert complex_remez_bound(1, 6 * E) == pytest.approx(1)
    assert complex_remez_bound(2, 1) == pytest.approx(266.006, rel=1e-5)
    assert complex_remez_bound(3, 6 * E) == pytest.approx(1)
    assert leading_coeff_bound(1, 2 * E) == pytest.approx(1)
    assert leading_coeff_bound(2, 1) == pytest.approx(29.556, rel=1e-4)
    assert leading_coeff_bound(0, 0.3) == 1
    assert sigma(0, 0) == 1
    assert sigma(0.5, 0) == pytest.approx(9)
    assert sigma(0.3, 0.8) == pytest.approx(sigma(0.8, 0.3))
    with pytest.raises(ValueError, match="radii must be < 1"):
        sigma(1, 0)
    assert sp_remez_bound(0, 3, 0.2, 0.4, 0.1) == pytest.approx(sigma(0.2, 0.4) ** 3)
    assert sp_remez_bound(1, 0, 0.2, 0.4, 6 * E) == pytest.approx(1)
    assert sp_remez_bound(1, 2, 0.5, 0.5, 1) == pytest.approx(1.0701e5, rel=1e-4)
    assert distortion_bounds(1, 0) == (1, 1)
    lo, hi = distortion_bounds(1, 0.5)
    assert lo == pytest.approx(1 / 9) and hi == pytest.approx(9)
    assert distortion_bounds(0, 0.7) == (1, 1)


def test_remez_examples():
    Z = [-0.5, 0, 0.5]
    cert = verify_polynomial_remez(Z, 2, 0, polys=[P([3]), P([0, 0, 1])])
    assert cert[0].observed_ratio == pytest.approx(1) and cert[0].holds
    assert cert[1].observed_ratio == pytest.approx(4)
    assert cert[1].bound == pytest.approx((6 * E / 0.25) ** 2)
    assert verify_polynomial_remez(Z, 2, 0) == []
    with pytest.raises(ValueError, match="vanishes"):
        verify_polynomial_remez(Z, 3, 5)
    with pytest.raises(ValueError, match="unit disk"):
        verify_polynomial_remez([0, 2, 0.5], 1, 5)


def test_remez_random_no_violations(rng):
    Z = disk_points(rng, 6)
    certs = verify_polynomial_remez(Z, 3, 40, seed=7)
    s = summarize(certs)
    assert s["violations"] == 0 and s["min_slack"] > 1
    again = verify_polynomial_remez(Z, 3, 40, seed=7)
    assert [c.observed_ratio for c in certs] == [c.observed_ratio for c in again]


def test_leading_coeff():
    rec = verify_leading_coeff([0, 1], 1, 0, polys=[P([-0.5, 1])])[0]
    assert rec.leading == pytest.approx(2)
    assert rec.bound == pytest.approx(2 * E / 0.5)
    assert rec.holds
    rec = verify_leading_coeff([0, 1], 1, 0, polys=[P([0, 1])])[0]
    assert rec.poly.coeffs[1] == 1
    with pytest.raises(ValueError):
        verify_leading_coeff([0, 1], 2, 3)


def test_cartan_examples():
    r = verify_cartan(P([0, 1]), 0.1, 500, seed=0)
    assert r.holds and r.cd_of_sample <= 0.1 + 1e-12
    r = verify_cartan(P([0, 0, 0, 1]), 0.2, 500, seed=0)
    assert r.holds and r.cd_of_sample <= 0.2 + 1e-12
    assert np.all(np.abs(r.sublevel_sample.points) <= 0.2 * (1 + 1e-12))
    r = verify_cartan(P([-0.25, 0, 1]), 0.05, 1000, seed=0)
    assert r.holds
    assert len(r.sublevel_sample) == 1000
    with pytest.raises(ValueError, match="monic"):
        verify_cartan(P([0, 2]), 0.1)


def test_cartan_sample_lies_in_sublevel(rng):
    p = P(np.concatenate([rng.standard_normal(3) + 1j * rng.standard_normal(3), [1]]))
    r = verify_cartan(p, 0.1, 800, seed=3)
    vals = np.abs(np.polyval(p.coeffs[::-1], r.sublevel_sample.points))
    assert np.all(vals <= r.level * (1 + 1e-12))
    assert r.holds


def test_distortion_bounds_product():
    for p in range(5):
        for rho in (0, 0.1, 0.5, 0.9):
            lo, hi = distortion_bounds(p, rho)
            assert lo * hi == pytest.approx(1, rel=1e-12)
