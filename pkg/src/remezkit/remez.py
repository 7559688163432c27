"""Remez-type bounds and randomized certification harnesses."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .covering import Disk, PointSet, _as_points, c_d
from .polytools import (
    ComplexPolynomial,
    chebyshev_value,
    derivative,
    evaluate,
    find_roots,
    max_modulus_on_disk,
    max_on_points,
)

E = math.e
UNIT_DISK = Disk(0.0, 1.0)
REL_HOLD = 1e-9


# --------------------------------------------------------------------------
# closed-form bounds
# --------------------------------------------------------------------------

def real_remez_bound(d: int, omega: float) -> float:
    """T_d((4 - omega)/omega) for the real-interval inequality."""
    if not omega > 0:
        raise ValueError("invariant must be positive")
    if omega > 2:
        raise ValueError(f"omega must be <= 2, got {omega}")
    return chebyshev_value(d, (4.0 - omega) / omega)


def _check_c(c):
    if not c > 0:
        raise ValueError(f"covering invariant must be positive, got {c}")


def complex_remez_bound(d: int, c: float) -> float:
    _check_c(c)
    return (6 * E / c) ** d


def leading_coeff_bound(d: int, c: float) -> float:
    _check_c(c)
    return (2 * E / c) ** d


def sigma(R: float, Rp: float) -> float:
    if not (0 <= R < 1 and 0 <= Rp < 1):
        raise ValueError("radii must be < 1")
    return (((1 + R) * (1 + Rp)) / ((1 - R) * (1 - Rp))) ** 2


def sp_remez_bound(s: int, p: int, R: float, Rp: float, c: float) -> float:
    _check_c(c)
    return sigma(R, Rp) ** p * (6 * E / c) ** s


def distortion_bounds(p: int, rho: float) -> tuple:
    if not 0 <= rho < 1:
        raise ValueError("rho must lie in [0, 1)")
    if p < 0:
        raise ValueError("p must be nonnegative")
    upper = ((1 + rho) / (1 - rho)) ** (2 * p)
    return 1.0 / upper, upper


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------

@dataclass
class RemezCertificate:
    d: int
    c: float
    bound: float
    observed_ratio: float
    witness_poly: ComplexPolynomial
    holds: bool = field(init=False)
    slack: float = field(init=False)

    def __post_init__(self):
        self.holds = bool(self.observed_ratio <= self.bound * (1 + REL_HOLD))
        self.slack = self.bound / self.observed_ratio if self.observed_ratio > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "c": self.c,
            "bound": self.bound,
            "observed_ratio": self.observed_ratio,
            "holds": self.holds,
            "slack": self.slack,
            "witness_poly": self.witness_poly.to_dict(),
        }


@dataclass
class LeadingCoeffRecord:
    d: int
    c: float
    bound: float
    leading: float
    poly: ComplexPolynomial

    @property
    def holds(self) -> bool:
        return self.leading <= self.bound * (1 + REL_HOLD)

    @property
    def slack(self) -> float:
        return self.bound / self.leading

    def to_dict(self) -> dict:
        return {"d": self.d, "c": self.c, "bound": self.bound, "leading": self.leading,
                "holds": self.holds, "slack": self.slack, "poly": self.poly.to_dict()}


def summarize(records: Sequence) -> dict:
    """Violation count, slack statistics and the tightest witness."""
    if not records:
        return {"count": 0, "violations": 0, "min_slack": None, "mean_slack": None, "tightest": None}
    slacks = np.array([r.slack for r in records])
    k = int(np.argmin(slacks))
    finite = slacks[np.isfinite(slacks)]
    return {
        "count": len(records),
        "violations": int(sum(not r.holds for r in records)),
        "min_slack": float(slacks[k]),
        "mean_slack": float(finite.mean()) if finite.size else math.inf,
        "tightest": records[k].to_dict(),
    }


def trial_rng(seed: int, t: int) -> np.random.Generator:
    """Independent per-trial stream, stable under any trial schedule."""
    return np.random.default_rng([int(seed), int(t)])


def random_polynomial(rng: np.random.Generator, d: int, monic: bool = False) -> ComplexPolynomial:
    c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / math.sqrt(2)
    if monic:
        c[d] = 1.0
    else:
        while abs(c[d]) < 1e-6:
            c[d] = (rng.standard_normal() + 1j * rng.standard_normal()) / math.sqrt(2)
    return ComplexPolynomial(c)


def _prepare(Z, d: int):
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    pts = _as_points(Z)
    if pts.size <= d:
        raise ValueError("c_d vanishes: need more than d distinct points")
    if np.any(np.abs(pts) > 1 + 1e-12):
        raise ValueError("Z must lie in the closed unit disk")
    return pts, c_d(pts, int(d)).value


def verify_polynomial_remez(Z, d: int, trials: int, seed: int = 0,
                            polys: Optional[Iterable[ComplexPolynomial]] = None) -> list:
    """Check max over the unit disk against (6e/c_d)^d times max over Z."""
    pts, c = _prepare(Z, d)
    bound = complex_remez_bound(d, c)
    if polys is None:
        polys = (random_polynomial(trial_rng(seed, t), d) for t in range(trials))
    certs = []
    for P in polys:
        top = max_modulus_on_disk(P, UNIT_DISK).max_value
        low = max_on_points(P, pts)[0]
        ratio = top / low if low > 0 else math.inf
        certs.append(RemezCertificate(d, c, bound, ratio, P))
    return certs


def verify_leading_coeff(Z, d: int, trials: int, seed: int = 0,
                         polys: Optional[Iterable[ComplexPolynomial]] = None) -> list:
    """Monic polynomials rescaled to max_Z |P| = 1 against (2e/c_d)^d."""
    pts, c = _prepare(Z, d)
    bound = leading_coeff_bound(d, c)
    if polys is None:
        polys = (random_polynomial(trial_rng(seed, t), d, monic=True) for t in range(trials))
    out = []
    for P in polys:
        if P.degree != d:
            raise ValueError("polynomial degree must equal d")
        m = max_on_points(P, pts)[0]
        Q = P * (1.0 / m) if m != 1 else P
        out.append(LeadingCoeffRecord(d, c, bound, abs(Q.leading_coeff), Q))
    return out


# --------------------------------------------------------------------------
# Cartan lemma
# --------------------------------------------------------------------------

@dataclass
class CartanReport:
    eps: float
    level: float
    sublevel_sample: PointSet
    cd_of_sample: float
    cartan_bound: float
    holds: bool
    cells: int = 0
    acceptance: float = 0.0

    def to_dict(self, include_sample: bool = False) -> dict:
        out = {
            "eps": self.eps,
            "level": self.level,
            "n_sample": len(self.sublevel_sample),
            "cd_of_sample": self.cd_of_sample,
            "cartan_bound": self.cartan_bound,
            "holds": self.holds,
            "cells": self.cells,
            "acceptance": self.acceptance,
        }
        if include_sample:
            out["sublevel_sample"] = self.sublevel_sample.to_dict()
        return out


def _taylor_polys(P: ComplexPolynomial) -> list:
    """P^(k)/k! for k = 0..deg."""
    out = [P]
    cur = P
    for k in range(1, P.degree + 1):
        cur = derivative(cur)
        out.append(cur * (1.0 / math.factorial(k)))
    return out


def _cell_bounds(taylor, centers, rad):
    """Lower/upper bounds of |P| on disks of radius rad about centers."""
    b0 = np.abs(evaluate(taylor[0], centers))
    tail = np.zeros_like(b0)
    for k in range(1, len(taylor)):
        tail += np.abs(evaluate(taylor[k], centers)) * rad ** k
    return b0 - tail, b0 + tail


def sublevel_cells(P: ComplexPolynomial, level: float, box: tuple, rng: np.random.Generator,
                   target: float = 0.25, max_depth: int = 60, max_cells: int = 200_000):
    """Quadtree cells (centers, half-widths) whose union contains {|P| <= level}.

    Cells where a Taylor lower bound exceeds ``level`` are discarded;
    refinement stops when a trial draw is accepted with rate >= ``target``.
    """
    (x0, x1), (y0, y1) = box
    g = 8
    hx = (x1 - x0) / (2 * g)
    hy = (y1 - y0) / (2 * g)
    h0 = max(hx, hy)
    gx = x0 + h0 * (2 * np.arange(g) + 1)
    gy = y0 + h0 * (2 * np.arange(g) + 1)
    centers = (gx[:, None] + 1j * gy[None, :]).ravel()
    half = np.full(centers.size, h0)
    full = np.zeros(centers.size, dtype=bool)
    taylor = _taylor_polys(P)
    acc = 0.0
    for _ in range(max_depth):
        lower, upper = _cell_bounds(taylor, centers, half * math.sqrt(2))
        keep = lower <= level
        centers, half = centers[keep], half[keep]
        full = (upper <= level)[keep]
        if centers.size == 0:
            return centers, half, 1.0
        pts = _draw(centers, half, 512, rng)
        acc = float(np.mean(np.abs(evaluate(P, pts)) <= level))
        if acc >= target or 4 * centers.size > max_cells:
            break
        split = ~full
        q = half[split] / 2
        c = centers[split]
        kids = np.concatenate([c + q * (sx + 1j * sy) for sx in (-1, 1) for sy in (-1, 1)])
        centers = np.concatenate([centers[~split], kids])
        half = np.concatenate([half[~split], np.tile(q, 4)])
    return centers, half, acc


def _draw(centers, half, n, rng):
    w = half ** 2
    idx = rng.choice(centers.size, size=n, p=w / w.sum())
    u = rng.uniform(-1, 1, size=(2, n))
    return centers[idx] + half[idx] * (u[0] + 1j * u[1])


def sample_sublevel(P: ComplexPolynomial, level: float, box: tuple, n: int, rng: np.random.Generator):
    """Uniform sample of {|P| <= level} within box, plus (cells, acceptance)."""
    centers, half, acc = sublevel_cells(P, level, box, rng)
    if centers.size == 0:
        return np.zeros(0, dtype=complex), 0, 0.0
    got = []
    have = 0
    tries = 0
    while have < n and tries < 200:
        m = int(min(2_000_000, max(1024, 1.5 * (n - have) / max(acc, 1e-3))))
        pts = _draw(centers, half, m, rng)
        pts = pts[np.abs(evaluate(P, pts)) <= level]
        got.append(pts)
        have += pts.size
        tries += 1
    out = np.concatenate(got)[:n] if got else np.zeros(0, dtype=complex)
    return out, centers.size, acc


def verify_cartan(P: ComplexPolynomial, eps: float, n_samples: int = 2000, seed: int = 0) -> CartanReport:
    """Sample {|P| <= eps^d} and compare c_d of the sample with 2e*eps."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    d = P.degree
    if d < 1:
        raise ValueError("polynomial must have degree >= 1")
    if abs(P.leading_coeff - 1) > 1e-12:
        raise ValueError("polynomial must be monic")
    level = eps ** d
    roots = find_roots(P)
    box = ((roots.real.min() - 2 * eps, roots.real.max() + 2 * eps),
           (roots.imag.min() - 2 * eps, roots.imag.max() + 2 * eps))
    rng = np.random.default_rng([int(seed), 0xCA27])
    pts, cells, acc = sample_sublevel(P, level, box, n_samples, rng)
    bound = 2 * E * eps
    sample = PointSet(pts, "sublevel")
    if pts.size == 0:
        return CartanReport(eps, level, sample, 0.0, bound, True, cells, acc)
    labels = np.argmin(np.abs(pts[:, None] - roots[None, :]), axis=1)
    cd = c_d(pts, d, "heuristic", seed=seed, init_labels=[labels]).value
    return CartanReport(eps, level, sample, cd, bound, bool(cd <= bound * (1 + REL_HOLD)), cells, acc)
