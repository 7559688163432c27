import math

import numpy as np
from hypothesis import given, settings, strategies as st

from oracles import cd_brute
from remezkit.covering import c_d, covering_number, min_enclosing_disk, rho_d
from remezkit.polytools import ComplexPolynomial, chebyshev_recurrence, chebyshev_value, evaluate
from remezkit.remez import sigma

coord = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
point = st.builds(complex, coord, coord)
pointsets = st.lists(point, min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(pointsets, st.integers(1, 4))
def test_cd_matches_brute(pts, d):
    assert abs(c_d(pts, d, "exact").value - cd_brute(pts, d)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(pointsets, st.integers(1, 3))
def test_cd_monotone_in_d(pts, d):
    assert c_d(pts, d + 1).value <= c_d(pts, d).value + 1e-12


@settings(max_examples=50, deadline=None)
@given(pointsets, st.floats(0.1, 3), point)
def test_cd_equivariant(pts, t, shift):
    a = c_d(pts, 2).value
    b = c_d([t * z + shift for z in pts], 2).value
    assert math.isclose(b, t * a, rel_tol=1e-8, abs_tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(pointsets, st.integers(1, 4))
def test_cd_vanishes_iff_few_points(pts, d):
    n = np.unique(np.asarray(pts, dtype=complex)).size
    assert (c_d(pts, d).value == 0) == (n <= d)


@settings(max_examples=50, deadline=None)
@given(pointsets, st.integers(1, 4))
def test_rho_upper_bounds_cd(pts, d):
    assert c_d(pts, d).value <= rho_d(pts, d)[0] + 1e-12


@settings(max_examples=50, deadline=None)
@given(pointsets, st.floats(0.01, 1.5))
def test_covering_number_monotone(pts, eps):
    assert covering_number(pts, eps) >= covering_number(pts, 2 * eps)


@settings(max_examples=60, deadline=None)
@given(pointsets)
def test_meb_contains(pts):
    D = min_enclosing_disk(pts)
    assert all(abs(z - D.center) <= D.radius * (1 + 1e-10) + 1e-12 for z in pts)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 25), st.floats(-3, 3))
def test_chebyshev_forms_agree(d, x):
    a, b = chebyshev_value(d, x), chebyshev_recurrence(d, x)
    assert math.isclose(a, b, rel_tol=1e-8, abs_tol=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 0.99), st.floats(0, 0.99))
def test_sigma_symmetric_and_at_least_one(a, b):
    assert sigma(a, b) == sigma(b, a) >= 1


@settings(max_examples=40, deadline=None)
@given(st.lists(point, min_size=1, max_size=6), st.lists(point, min_size=1, max_size=6), point)
def test_poly_product_evaluates(p, q, x):
    P, Q = ComplexPolynomial(p), ComplexPolynomial(q)
    assert abs(evaluate(P * Q, x) - evaluate(P, x) * evaluate(Q, x)) <= 1e-9 * (1 + abs(evaluate(P, x) * evaluate(Q, x)))
