"""Brute-force reference implementations, independent of the package code.

Everything here enumerates: subsets, partitions, pairs and triples.  Only
usable at tiny sizes, which is the point.
"""
import itertools
import math

import numpy as np


def meb_brute(pts):
    """Smallest enclosing circle by trying every pair and triple."""
    pts = [complex(p) for p in pts]
    if len(pts) == 1:
        return pts[0], 0.0
    best = (None, math.inf)

    def ok(c, r):
        return all(abs(p - c) <= r * (1 + 1e-12) + 1e-14 for p in pts)

    for a, b in itertools.combinations(pts, 2):
        c, r = (a + b) / 2, abs(a - b) / 2
        if r < best[1] and ok(c, r):
            best = (c, r)
    for a, b, q in itertools.combinations(pts, 3):
        d = 2 * (a.real * (b.imag - q.imag) + b.real * (q.imag - a.imag) + q.real * (a.imag - b.imag))
        if abs(d) < 1e-15:
            continue
        ux = (abs(a) ** 2 * (b.imag - q.imag) + abs(b) ** 2 * (q.imag - a.imag) + abs(q) ** 2 * (a.imag - b.imag)) / d
        uy = (abs(a) ** 2 * (q.real - b.real) + abs(b) ** 2 * (a.real - q.real) + abs(q) ** 2 * (b.real - a.real)) / d
        c = complex(ux, uy)
        r = abs(a - c)
        if r < best[1] and ok(c, r):
            best = (c, r)
    return best


def set_partitions(items):
    """All set partitions of a list (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def cd_brute(pts, d):
    """min over partitions into <= d blocks of the summed block radii."""
    pts = list(np.unique(np.asarray(pts, dtype=complex)))
    if len(pts) <= d:
        return 0.0
    best = math.inf
    for part in set_partitions(pts):
        if len(part) <= d:
            best = min(best, sum(meb_brute(b)[1] for b in part))
    return best


def covering_number_brute(pts, eps):
    """Fewest blocks in a partition whose blocks each fit in a radius-eps disk."""
    pts = list(np.unique(np.asarray(pts, dtype=complex)))
    best = len(pts)
    for part in set_partitions(pts):
        if len(part) < best and all(meb_brute(b)[1] <= eps * (1 + 1e-12) for b in part):
            best = len(part)
    return best


def critical_radii_brute(pts):
    pts = list(np.unique(np.asarray(pts, dtype=complex)))
    vals = set()
    for k in (2, 3):
        for sub in itertools.combinations(pts, k):
            vals.add(meb_brute(sub)[1])
    return sorted(v for v in vals if v > 0)


def omega_brute(pts, d, power):
    """sup over eps of eps*(M(eps)-d)^power, scanned just below each breakpoint."""
    best = 0.0
    for c in critical_radii_brute(pts):
        eps = c * (1 - 1e-10)
        m = covering_number_brute(pts, eps)
        if m > d:
            best = max(best, eps * (m - d) ** power)
    return best


def chebyshev_cosh(d, x):
    if abs(x) <= 1:
        return math.cos(d * math.acos(x))
    return math.copysign(1, x) ** d * math.cosh(d * math.acosh(abs(x)))


def roots_inside(coeffs_ascending, center, radius):
    """Number of polynomial roots in the open disk, via numpy's companion matrix."""
    c = np.trim_zeros(np.asarray(coeffs_ascending, dtype=complex), "b")
    if c.size <= 1:
        return 0
    r = np.roots(c[::-1])
    return int(np.sum(np.abs(r - center) < radius))
