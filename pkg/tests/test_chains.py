import math

import numpy as np
import pytest

from conftest import disk_points
from remezkit.chains import (
    Chain,
    ChainLink,
    NoChainFound,
    chain_constant,
    lens_c_invariant,
    make_configuration,
    search_chain,
    validate_chain,
    verify_global_remez,
    verify_local_remez,
)
from remezkit.covering import Disk, PointSet
from remezkit.curves import BivariatePolynomial, make_germ, random_bivariate

T = BivariatePolynomial.from_terms
SQRT = T([(2, 0, 1), (0, 1, -1)])


@pytest.fixture(scope="module")
def Z():
    return disk_points(np.random.default_rng(3), 20, 0.3, 1.0)


@pytest.fixture(scope="module")
def flip(Z):
    cfg = make_configuration(SQRT, 2, Z, 1.0, 1.0, 1.0, -1.0)
    chain, K = search_chain(cfg, 0)
    return cfg, chain, K


def test_validate_examples():
    g = make_germ(SQRT, 1, 1)
    one = Chain([ChainLink(Disk(1, 0.8), g, 0.4, 0.6)], PointSet([1.0]), 1.0)
    assert validate_chain(SQRT, one).valid
    far = make_germ(SQRT, 3, np.sqrt(3))
    gap = Chain([ChainLink(Disk(1, 0.5), g, 0.3, 0.4), ChainLink(Disk(3, 0.5), far, 0.3, 0.4)],
                PointSet([1.0]), 3.0)
    assert not validate_chain(SQRT, gap).valid
    neg = make_germ(SQRT, 1.5, -np.sqrt(1.5))
    bad = Chain([ChainLink(Disk(1, 0.8), g, 0.5, 0.7), ChainLink(Disk(1.5, 0.8), neg, 0.5, 0.7)],
                PointSet([1.0]), 1.5)
    rep = validate_chain(SQRT, bad)
    assert not rep.valid


def test_lens_c():
    a = Disk(0, 1)
    v = lens_c_invariant(a, a, 1, n_samples=400, seed=0)
    assert 0.9 < v <= 1
    with pytest.raises(ValueError):
        lens_c_invariant(Disk(0, 1), Disk(2, 1), 1)


def test_trivial_chain(Z):
    cfg = make_configuration(SQRT, 2, Z, 1.05, 1.0, 1.0, 1.0)
    chain, K = search_chain(cfg, 0)
    assert len(chain.links) == 1
    assert len(K.per_link_factors) == 1


def test_flip_chain(flip):
    cfg, chain, K = flip
    assert len(chain.links) > 1
    assert validate_chain(SQRT, chain, cfg.branch_hat, cfg.branch_bar).valid
    assert math.isfinite(K.log_K)
    # the chain winds once around the branch point
    c = np.array([l.center for l in chain.links])
    winding = np.sum(np.angle(np.roll(c, -1)[:-1] / c[:-1])) / (2 * np.pi)
    assert abs(abs(winding) - 1) < 0.5


def test_optimize_not_worse(flip):
    cfg, chain, K = flip
    opt = chain_constant(chain, 2, 2, optimize=True)
    assert opt.log_K <= K.log_K + 1e-12


def test_scale_invariance(flip):
    cfg, chain, K = flip
    t = 2.5
    Q2 = T([(2, 0, 1), (0, 1, -t)])  # y^2 = t x has the same square-root structure after scaling x
    links = [ChainLink(Disk(l.center * t, l.disk.radius * t), make_germ(Q2, l.center * t, l.germ.y_value * t),
                       l.inner_radius_R1 * t, l.inner_radius_Rp * t) for l in chain.links]
    scaled = Chain(links, chain.Z_anchor.scaled(t), chain.target_x0 * t)
    K2 = chain_constant(scaled, 2, 2)
    assert K2.log_K == pytest.approx(K.log_K, rel=1e-6)


def test_orbit_mismatch(Z):
    Q = T([(2, 0, 1), (0, 2, -1)])  # y = +-x, no monodromy
    cfg = make_configuration(Q, 2, Z, 1.0, 1.0, 1.0, -1.0)
    with pytest.raises(NoChainFound, match="no chain found"):
        search_chain(cfg, 0)


def test_local_remez():
    rng = np.random.default_rng(5)
    Z5 = disk_points(rng, 5, 0.3, 1.0)
    cert = verify_local_remez(SQRT, T([(1, 0, 1)]), 1.0, Z5, 0.3, 0.5)
    assert cert.holds
    cert = verify_local_remez(SQRT, T([(0, 0, 2)]), 1.0, Z5, 0.3, 0.5)
    assert cert.observed_ratio == pytest.approx(1)
    with pytest.raises(ValueError, match="vanishes"):
        verify_local_remez(SQRT, random_bivariate(rng, 2), 1.0, Z5[:2], 0.3, 0.5)


def test_global_certificate(flip):
    cfg, chain, K = flip
    P = random_bivariate(np.random.default_rng(9), 2)
    cert = verify_global_remez(cfg, P, chain)
    assert cert.holds
    assert cert.composition_error <= 1e-9 * abs(cert.log_bound)
    assert all(c["holds"] for c in cert.link_checks)
    const = verify_global_remez(cfg, T([(0, 0, 1)]), chain, check_links=False)
    assert const.observed_ratio == pytest.approx(1)


def test_lens_c_nested_monotone():
    a, b = Disk(0, 1), Disk(0.8, 0.7)
    for d1 in (1, 2):
        small = lens_c_invariant(a, b, d1, n_samples=200, seed=3)
        big = lens_c_invariant(a, b, d1, n_samples=400, seed=3)
        assert big >= small - 1e-9
