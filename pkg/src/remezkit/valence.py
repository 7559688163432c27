"""Argument-principle solution counts, (s,p)-valence probes, distortion checks."""
from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .covering import Disk
from .polytools import ComplexPolynomial, derivative, evaluate
from .remez import distortion_bounds

CONTOUR_REL_MIN = 1e-12
START_POINTS = 256
MAX_POINTS = 1 << 16


class IntegrationError(RuntimeError):
    pass


@dataclass
class AnalyticMap:
    """A function regular on ``domain`` with its derivative, both vectorized."""

    value: Callable
    derivative: Callable
    domain: Disk
    description: str = ""
    known_zeros: Optional[Sequence[complex]] = None
    metadata: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=complex))

    def deriv(self, x):
        return self.derivative(np.asarray(x, dtype=complex))

    def check_derivative(self, n: int = 8, seed: int = 0, rtol: float = 1e-6) -> float:
        """Worst relative gap between f' and a central difference quotient."""
        rng = np.random.default_rng(seed)
        rho = self.domain.radius * 0.8 * np.sqrt(rng.uniform(size=n))
        x = self.domain.center + rho * np.exp(2j * np.pi * rng.uniform(size=n))
        h = 1e-5 * max(self.domain.radius, 1e-300)
        fd = (self(x + h) - self(x - h)) / (2 * h)
        d = self.deriv(x)
        scale = np.maximum(np.abs(d), np.max(np.abs(self(x))) / max(self.domain.radius, 1e-300))
        worst = float(np.max(np.abs(fd - d) / np.maximum(scale, 1e-300)))
        if worst > rtol:
            raise ValueError(f"derivative inconsistent with value (relative gap {worst:.3g})")
        return worst


def polynomial_map(P: ComplexPolynomial, domain: Disk = Disk(0, 1)) -> AnalyticMap:
    dP = derivative(P)
    return AnalyticMap(lambda x: evaluate(P, x), lambda x: evaluate(dP, x), domain,
                       f"polynomial of degree {P.degree}", None, {"coeffs": P.to_dict()["coeffs"]})


def power_sum_example(p: int, N: int) -> AnalyticMap:
    """x^p + x^N on the disk of radius 1/3."""
    if not N > p >= 1:
        raise ValueError("need N > p >= 1")
    if N < 10 * p + 1:
        warnings.warn(f"N={N} is below 10p+1={10 * p + 1}; the valence gap may not appear", stacklevel=2)

    def val(x):
        return x ** p + x ** N

    def der(x):
        return p * x ** (p - 1) + N * x ** (N - 1)

    return AnalyticMap(val, der, Disk(0, 1 / 3), f"x^{p} + x^{N}", [0j] * p, {"p": p, "N": N})


def count_solutions(f: AnalyticMap, P: ComplexPolynomial, disk: Disk, retries: int = 5) -> int:
    """Number of solutions of f = P in the disk, by the argument principle."""
    if P is None:
        P = ComplexPolynomial([0])
    dP = derivative(P)
    radius = disk.radius
    for attempt in range(retries + 1):
        try:
            return _winding(f, P, dP, disk.center, radius)
        except _NearZero:
            if attempt == retries:
                raise IntegrationError("zero on contour")
            radius *= 0.99
    raise IntegrationError("zero on contour")


class _NearZero(Exception):
    pass


def _winding(f, P, dP, center, radius) -> int:
    n = START_POINTS
    prev = None
    while n <= MAX_POINTS:
        w = np.exp(2j * np.pi * np.arange(n) / n)
        x = center + radius * w
        fx = f(x)
        px = evaluate(P, x)
        g = fx - px
        scale = float(np.max(np.abs(fx)) + np.max(np.abs(px)))
        if not np.all(np.isfinite(g)):
            raise IntegrationError("integration failed: non-finite values on contour")
        if np.min(np.abs(g)) <= CONTOUR_REL_MIN * max(scale, 1e-300):
            raise _NearZero
        gp = f.deriv(x) - evaluate(dP, x)
        val = complex(np.mean(gp / g * radius * w))
        k = round(val.real)
        if abs(val.real - k) < 0.05 and abs(val.imag) < 0.05 and prev is not None and abs(val - prev) < 0.05:
            return int(k)
        prev = val
        n *= 2
    k = round(prev.real)
    if abs(prev - k) > 0.1:
        raise IntegrationError(f"integration failed: winding integral {prev:.4g} not near an integer")
    return int(k)


@dataclass
class ValenceReport:
    s: int
    domain: Disk
    trials: int
    max_count: int
    witness_poly: Optional[ComplexPolynomial]
    counts_histogram: dict
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "domain": self.domain.to_dict(),
            "trials": self.trials,
            "max_count": self.max_count,
            "witness_poly": None if self.witness_poly is None else self.witness_poly.to_dict(),
            "counts_histogram": {str(k): v for k, v in sorted(self.counts_histogram.items())},
            "failures": self.failures,
        }


def _local_poly(coeffs: Sequence[complex], disk: Disk) -> ComplexPolynomial:
    """sum_k a_k ((x - c)/r)^k as an ordinary polynomial in x."""
    u = ComplexPolynomial([-disk.center / disk.radius, 1 / disk.radius])
    out = ComplexPolynomial([0])
    power = ComplexPolynomial([1])
    for a in coeffs:
        out = out + power * a
        power = power * u
    return out


def boundary_max(f: AnalyticMap, disk: Disk, n: int = 1024) -> float:
    return float(np.max(np.abs(f(disk.boundary(n)))))


def probe_valence(f: AnalyticMap, disk: Disk, s: int, trials: int, seed: int = 0,
                  witnesses: Iterable[ComplexPolynomial] = ()) -> ValenceReport:
    """Largest observed number of solutions of f = P over random P of degree <= s.

    Trial t draws coefficients a_0, a_1, ... from its own stream; the trial
    set at level s is every truncation of degree <= s, so the reported
    maximum is nondecreasing in s for a fixed seed.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    scale = boundary_max(f, disk)
    hist = Counter()
    failures = []
    best, best_poly = -1, None

    def record(P, tag):
        nonlocal best, best_poly
        try:
            k = count_solutions(f, P, disk)
        except IntegrationError as exc:
            failures.append({"trial": tag, "error": str(exc), "poly": P.to_dict()})
            return
        hist[k] += 1
        if k > best:
            best, best_poly = k, P

    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        coeffs = []
        for k in range(s + 1):
            z = rng.standard_normal(2)
            coeffs.append(scale * complex(z[0], z[1]) / math.sqrt(2))
            record(_local_poly(coeffs, disk), f"{t}:{k}")
    for i, P in enumerate(witnesses):
        record(P, f"witness:{i}")
    return ValenceReport(s, disk, trials, max(best, 0), best_poly, dict(hist), failures)


@dataclass
class DistortionReport:
    p: int
    n_samples: int
    normalizer: complex
    upper_margin: float
    lower_margin: float
    min_abs_g: float
    max_abs_g: float

    @property
    def holds(self) -> bool:
        return self.upper_margin >= -1e-9 and self.lower_margin >= -1e-9

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n_samples": self.n_samples,
            "normalizer": [self.normalizer.real, self.normalizer.imag],
            "upper_margin": self.upper_margin,
            "lower_margin": self.lower_margin,
            "min_abs_g": self.min_abs_g,
            "max_abs_g": self.max_abs_g,
            "holds": self.holds,
        }


def verify_distortion(f: AnalyticMap, s_zeros: Sequence[complex], p: int, n_samples: int = 1000,
                      seed: int = 0, rho_max: float = 0.98) -> DistortionReport:
    """Check the two-sided bound on |f / (a * prod(x - x_j))| at random points.

    The domain disk of ``f`` plays the role of the unit disk: rho is the
    distance to its center divided by its radius.  ``a`` is the value of
    f / prod(x - x_j) at the center, from a Cauchy mean on a small circle.
    """
    dom = f.domain
    zeros = np.asarray(list(s_zeros), dtype=complex)
    c0, r = dom.center, dom.radius

    def q(x):
        out = np.ones_like(x)
        for z in zeros:
            out = out * (x - z)
        return out

    inner = 0.98 * r
    listed = int(np.sum(np.abs(zeros - c0) < inner))
    found = count_solutions(f, ComplexPolynomial([0]), Disk(c0, inner))
    if found > listed:
        raise ValueError(f"unlisted zero: found {found} zeros, {listed} listed")
    circle = c0 + 0.1 * r * np.exp(2j * np.pi * np.arange(256) / 256)
    a = complex(np.mean(f(circle) / q(circle)))
    if a == 0:
        raise ValueError("normalizing constant vanishes")
    rng = np.random.default_rng([int(seed), 0xD157])
    rho = rho_max * np.sqrt(rng.uniform(size=n_samples))
    x = c0 + r * rho * np.exp(2j * np.pi * rng.uniform(size=n_samples))
    g = np.abs(f(x) / (a * q(x)))
    if np.min(g) < 1e-12:
        raise ValueError("unlisted zero")
    bounds = np.array([distortion_bounds(p, float(t)) for t in rho])
    upper = float(np.min(bounds[:, 1] - g))
    lower = float(np.min(g - bounds[:, 0]))
    return DistortionReport(p, n_samples, a, upper, lower, float(g.min()), float(g.max()))
