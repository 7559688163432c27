import numpy as np
import pytest

from remezkit.curves import (
    BivariatePolynomial,
    BranchGerm,
    DiscriminantError,
    SingularityError,
    branch_restriction,
    circle_path,
    continue_branch,
    discriminant_x,
    fiber,
    make_germ,
    monodromy,
    random_bivariate,
    safe_radius,
    singular_points,
    track_path,
)
from remezkit.covering import Disk

T = BivariatePolynomial.from_terms
SQRT = T([(2, 0, 1), (0, 1, -1)])            # y^2 - x
HYP = T([(2, 0, 1), (0, 2, -1), (0, 0, 1)])  # y^2 - (x^2 - 1)


def test_discriminant():
    D = discriminant_x(SQRT)
    assert D.degree == 1 and abs(D.coeffs[0]) < 1e-12
    r = np.sort(np.roots(discriminant_x(HYP).coeffs[::-1]).real)
    assert np.allclose(r, [-1, 1])
    D = discriminant_x(T([(1, 0, 1), (0, 1, -1)]))
    assert D.degree == 0 and abs(D.coeffs[0]) > 0


def test_non_squarefree_rejected():
    Q = T([(2, 0, 1), (1, 1, -2), (0, 2, 1)])  # (y - x)^2
    with pytest.raises(DiscriminantError):
        singular_points(Q)


def test_singular_points():
    s = singular_points(SQRT)
    assert len(s) == 1 and abs(s.points[0]) < 1e-10
    s = singular_points(T([(1, 1, 1), (0, 0, -1)]))  # xy - 1
    assert len(s) == 1 and abs(s.points[0]) < 1e-10 and s.sources[0] in ("leading", "both")
    assert np.allclose(np.sort(singular_points(HYP).points.real), [-1, 1])
    assert safe_radius(singular_points(HYP), 0) == pytest.approx(1)
    assert safe_radius(singular_points(T([(1, 0, 1), (0, 1, -1)])), 0) == np.inf


def test_fiber():
    assert np.allclose(fiber(SQRT, 1), [-1, 1])
    assert np.allclose(fiber(SQRT, 4), [-2, 2])
    F = fiber(T([(3, 0, 1), (0, 1, -1)]), 1)
    assert np.allclose(np.sort_complex(F), np.sort_complex(np.exp(2j * np.pi * np.arange(3) / 3)))
    with pytest.raises(SingularityError):
        fiber(SQRT, 0)


def test_continuation():
    g = make_germ(SQRT, 1, 1)
    assert continue_branch(SQRT, g, np.linspace(1, 4, 20)).y_value == pytest.approx(2, abs=1e-10)
    back = continue_branch(SQRT, g, circle_path(0, 1, 0, 1))
    assert back.y_value == pytest.approx(-1, abs=1e-10)
    same = continue_branch(SQRT, g, circle_path(2, 1, np.pi, 1))
    assert same.y_value == pytest.approx(1, abs=1e-10)


def test_roundtrip_and_tracking(rng):
    g = make_germ(SQRT, 1, 1)
    path = [1, 2 + 1j, 3 - 0.5j, 1]
    y = track_path(SQRT, path, [1.0])[0]
    assert abs(y - 1) < 1e-8
    for _ in range(10):
        x = complex(*rng.uniform(0.5, 3, 2))
        there = continue_branch(SQRT, g, [1, x])
        home = continue_branch(SQRT, there, [x, 1])
        assert abs(home.y_value - 1) < 1e-8
        assert abs(there.y_value ** 2 - x) < 1e-10


def test_monodromy():
    act = monodromy(SQRT, 1)
    assert len(act.generators) == 1
    assert act.generators[0][1] == (1, 0)
    assert act.group_order_estimate == 2
    act = monodromy(HYP, 2j)
    assert [p for _, p in act.generators] == [(1, 0), (1, 0)]
    assert act.group_order_estimate == 2
    act = monodromy(T([(1, 0, 1), (0, 1, -1)]), 0.5)
    assert act.generators == [] and act.group_order_estimate == 1


def test_branch_restriction():
    g = make_germ(SQRT, 1, 1)
    f = branch_restriction(SQRT, g, T([(1, 0, 1)]), Disk(1, 0.9))
    assert f(np.array([1.69]))[0] == pytest.approx(1.3)
    f = branch_restriction(SQRT, g, T([(0, 1, 1)]), Disk(1, 0.9))
    assert f.deriv(np.array([1.2]))[0] == pytest.approx(1)
    f = branch_restriction(SQRT, g, T([(2, 0, 1)]), Disk(1, 0.9))
    x = 1 + 0.5 * (rng_pts := np.random.default_rng(0).uniform(-1, 1, 20))
    assert np.allclose(f(x), x, atol=1e-9)
    with pytest.raises(SingularityError):
        branch_restriction(SQRT, g, T([(1, 0, 1)]), Disk(1, 1.2))


def test_implicit_derivative_vs_fd(rng):
    g = make_germ(SQRT, 1, 1)
    P = random_bivariate(rng, 2)
    f = branch_restriction(SQRT, g, P, Disk(1, 0.9))
    assert f.check_derivative(n=30, rtol=1e-4) < 1e-4


def test_json_roundtrip():
    Q = BivariatePolynomial.from_dict(HYP.to_dict())
    assert np.array_equal(Q.C, HYP.C)
    with pytest.raises(ValueError):
        T([(2, 0, 1)], deg_y=3)


def test_fiber_permuted_along_paths(rng):
    for _ in range(5):
        path = [2j, complex(*rng.uniform(-2, 2, 2)), complex(*rng.uniform(-2, 2, 2))]
        if min(abs(p - s) for p in path for s in (1, -1)) < 0.2:
            continue
        end = track_path(HYP, path, fiber(HYP, 2j))
        ref = fiber(HYP, path[-1])
        assert np.allclose(np.sort_complex(end), np.sort_complex(ref), atol=1e-8)


@pytest.mark.parametrize("Q", [HYP, T([(3, 0, 1), (0, 2, -1), (0, 0, 1)])])
def test_loop_at_infinity_is_product(Q):
    from remezkit.curves import compose, loop_permutation

    act = monodromy(Q, 2j)
    perms = [p for _, p in act.generators]
    big = loop_permutation(Q, 2j, 0, 1.5)
    # the generators are ordered by position, so either composition order may match the big loop
    prods = []
    for order in (perms, perms[::-1]):
        prod = tuple(range(Q.deg_y))
        for p in order:
            prod = compose(prod, p)
        prods.append(prod)
    assert big in prods
