import numpy as np
import pytest

from oracles import omega_brute
from remezkit.asymptotics import check_study, loglog_slope, predicted_constants, zr_count, zr_min_radii, zr_omega, zr_study
from remezkit.covering import covering_number, omega_cd, omega_d


def _zr_count_brute(r, eps, K=20000):
    # truncate at K and cover the tail [0, K^-r] by ceil(K^-r / (2 eps)) intervals
    pts = np.sort(np.arange(1, K + 1, dtype=float) ** -r)
    count, i = 0, pts.size - 1
    while i >= 0:
        right = pts[i]
        count += 1
        while i >= 0 and pts[i] >= right - 2 * eps:
            i -= 1
    cut = (K + 1.0) ** -r
    return count + int(np.ceil(cut / (2 * eps))) if cut > 0 else count


@pytest.mark.parametrize("r", [1, 2])
def test_zr_count_vs_truncated(r):
    # the tail sweep must agree with a truncated brute sweep plus the tail formula to within one interval
    for eps in (0.2, 0.05, 0.01, 0.003):
        a = zr_count(r, eps)
        b = _zr_count_brute(r, eps)
        assert abs(a - b) <= 1


def test_zr_count_examples():
    assert zr_count(1, 0.5) == 1
    # a long finite prefix with the same eps needs the same count
    assert zr_count(1, 0.1) == covering_number(np.r_[1.0 / np.arange(1, 5000)], 0.1)


def test_min_radii_definition():
    ks = np.arange(1, 30)
    e = zr_min_radii(1, ks)
    for k, eps in zip(ks, e):
        assert zr_count(1, eps * (1 + 1e-9)) <= k
        assert zr_count(1, eps * (1 - 1e-6)) > k


def test_zr_omega_vs_finite_truncation():
    # a long finite prefix of Z_r has the same omegas once the tail is negligible
    pts = 1.0 / np.arange(1, 3001) ** 2
    for d in (4, 6):
        assert zr_omega(2, d, 1.0) == pytest.approx(omega_d(pts, d), rel=1e-3)
        assert zr_omega(2, d, 0.5) == pytest.approx(omega_cd(pts, d), rel=1e-3)


def test_small_prefix_brute():
    # tiny check against the brute oracle on a 6-point prefix
    pts = 1.0 / np.arange(1, 7)
    assert omega_d(pts, 2) == pytest.approx(omega_brute(pts, 2, 1.0), rel=1e-8)


def test_study_slopes():
    res = zr_study([1], [8, 16, 32, 64])
    s = res.slopes[1]
    assert s["omega_d"] == pytest.approx(-1, abs=0.15)
    assert s["omega_cd"] == pytest.approx(-1.5, abs=0.2)
    assert len(res.rows) == 4
    c = predicted_constants(1)
    assert c["omega_d"] == pytest.approx(0.25) and c["omega_cd"] == pytest.approx(3 / 16)


def test_validation():
    with pytest.raises(ValueError):
        check_study([1], [8])
    with pytest.raises(ValueError):
        check_study([0], [8, 16])
    with pytest.raises(ValueError):
        check_study([1.5], [8, 16])
    with pytest.raises(ValueError):
        check_study([1], [2, 8])
    with pytest.raises(ValueError):
        check_study([1], [8, 1024])
    with pytest.raises(ValueError):
        loglog_slope([3], [1.0])
