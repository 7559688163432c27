"""Complex univariate polynomials: evaluation, roots, maxima over disks and sets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .covering import Disk, PointSet


class RootFindingError(RuntimeError):
    """Aberth iteration did not reach the residual target.

    ``best`` holds the best iterate found.
    """

    def __init__(self, msg, best):
        super().__init__(msg)
        self.best = best


class ComplexPolynomial:
    """Polynomial with complex coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial has non-finite coefficients")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        self.coeffs = c

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports 0."""
        return self.coeffs.size - 1

    @property
    def leading_coeff(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.coeffs.size == other.coeffs.size and bool(np.all(self.coeffs == other.coeffs))

    def _pad(self, other):
        other = other if isinstance(other, ComplexPolynomial) else ComplexPolynomial(other)
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return a, b

    def __add__(self, other):
        a, b = self._pad(other)
        return ComplexPolynomial(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pad(other)
        return ComplexPolynomial(a - b)

    def __rsub__(self, other):
        a, b = self._pad(other)
        return ComplexPolynomial(b - a)

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs))
        return ComplexPolynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"coeffs": [[z.real, z.imag] for z in self.coeffs]}

    @classmethod
    def from_dict(cls, obj) -> "ComplexPolynomial":
        if "coeffs" not in obj:
            raise ValueError("polynomial JSON needs a 'coeffs' field")
        vals = []
        for c in obj["coeffs"]:
            if isinstance(c, (int, float)):
                vals.append(complex(c))
            elif len(c) == 2:
                vals.append(complex(float(c[0]), float(c[1])))
            else:
                raise ValueError(f"coefficient must be [re, im], got {c!r}")
        if not vals:
            raise ValueError("polynomial needs at least one coefficient")
        return cls(vals)


@dataclass
class DiskMaxResult:
    max_value: float
    argmax: complex
    grid_size: int
    refined: bool


def evaluate(P: ComplexPolynomial, x):
    """Horner evaluation at a scalar or array."""
    x = np.asarray(x, dtype=complex)
    acc = np.full(x.shape, P.coeffs[-1], dtype=complex)
    for c in P.coeffs[-2::-1]:
        acc = acc * x + c
    return acc if acc.ndim else complex(acc)


def derivative(P: ComplexPolynomial) -> ComplexPolynomial:
    if P.degree == 0:
        return ComplexPolynomial([0])
    return ComplexPolynomial(P.coeffs[1:] * np.arange(1, P.coeffs.size))


def from_roots(roots: Sequence, leading: complex = 1.0) -> ComplexPolynomial:
    if leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    c = np.array([complex(leading)])
    for r in np.asarray(roots, dtype=complex).ravel():
        c = np.convolve(c, [-r, 1.0])
    return ComplexPolynomial(c)


def _initial_guesses(mon: np.ndarray, m: int, offset: float) -> np.ndarray:
    """Points on a perturbed circle; mon is monic, ascending."""
    c0 = abs(mon[0])
    if c0 > 0:
        rad = c0 ** (1.0 / m)
    else:
        # Fujiwara bound
        rad = 2.0 * max(abs(mon[m - k]) ** (1.0 / k) for k in range(1, m + 1))
    rad = max(rad, 1e-300)
    k = np.arange(m)
    theta = 2 * np.pi * k / m + offset
    return rad * (1 + 0.03 * np.cos(3.1 * k)) * np.exp(1j * theta)


def _residual_ok(coeffs: np.ndarray, z: np.ndarray, rtol=1e-10):
    val = np.abs(np.polyval(coeffs[::-1], z))
    scale = np.polyval(np.abs(coeffs[::-1]), np.abs(z))
    return val <= rtol * scale, val / np.maximum(scale, 1e-300)


def _newton_polish(coeffs: np.ndarray, z: np.ndarray, steps=3) -> np.ndarray:
    dc = coeffs[1:] * np.arange(1, coeffs.size)
    pr = coeffs[::-1]
    dr = dc[::-1]
    for _ in range(steps):
        f = np.polyval(pr, z)
        fp = np.polyval(dr, z)
        safe = fp != 0
        cand = np.where(safe, z - f / np.where(safe, fp, 1), z)
        better = np.abs(np.polyval(pr, cand)) < np.abs(f)
        z = np.where(better, cand, z)
    return z


def find_roots(P: ComplexPolynomial, maxiter: int = 500, tries: int = 4) -> np.ndarray:
    """All roots with multiplicity (Aberth-Ehrlich plus Newton polishing)."""
    if P.degree < 1:
        raise ValueError("find_roots needs degree >= 1")
    c = P.coeffs
    nz = int(np.flatnonzero(c)[0])
    zeros = np.zeros(nz, dtype=complex)
    c = c[nz:]
    m = c.size - 1
    if m == 0:
        return zeros
    if m == 1:
        return np.concatenate([zeros, [-c[0] / c[1]]])
    mon = c / c[-1]
    best, best_res = None, math.inf
    for t in range(tries):
        z0 = _initial_guesses(mon, m, 0.4 + 0.7 * t)
        z, _ = kernels.aberth_batch(mon[None, :], z0[None, :], maxiter, 1e-15)
        z = _newton_polish(mon, z[0])
        ok, rel = _residual_ok(c, z)
        if ok.all():
            return np.concatenate([zeros, z])
        if rel.max() < best_res:
            best, best_res = z, rel.max()
    raise RootFindingError(f"root finder did not converge (relative residual {best_res:.3g})",
                           np.concatenate([zeros, best]))


def _refine(f, lo, hi):
    res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    return res.x, -res.fun


def max_modulus_on_disk(P: ComplexPolynomial, disk: Disk, grid: int = 0) -> DiskMaxResult:
    """max |P| over a closed disk, attained on its boundary."""
    if P.degree == 0:
        return DiskMaxResult(abs(P.coeffs[0]), disk.center + disk.radius, 1, False)
    return max_modulus_boundary(lambda x: evaluate(P, x), disk, max(grid, 1024, 256 * P.degree))


def max_modulus_boundary(func, disk: Disk, n: int) -> DiskMaxResult:
    """Boundary-grid maximum of |func| with bounded scalar refinement."""
    if disk.radius == 0:
        return DiskMaxResult(float(abs(func(np.array([disk.center]))[0])), disk.center, 1, False)
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.abs(func(disk.center + disk.radius * np.exp(1j * theta)))
    k = int(np.argmax(vals))
    h = 2 * np.pi / n

    def g(t):
        return float(np.abs(func(np.array([disk.center + disk.radius * np.exp(1j * t)]))[0]))

    t, v = _refine(g, theta[k] - h, theta[k] + h)
    if v >= vals[k]:
        return DiskMaxResult(float(v), disk.center + disk.radius * np.exp(1j * t), n, True)
    return DiskMaxResult(float(vals[k]), disk.center + disk.radius * np.exp(1j * theta[k]), n, False)


def max_on_points(P: ComplexPolynomial, Z) -> tuple:
    pts = Z.points if isinstance(Z, PointSet) else np.asarray(Z, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("empty set")
    vals = np.abs(evaluate(P, pts))
    k = int(np.argmax(vals))
    return float(vals[k]), complex(pts[k])


def chebyshev_value(d: int, x: float) -> float:
    """T_d(x): cosine form on [-1, 1], hyperbolic form outside."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    x = float(x)
    if abs(x) <= 1:
        return math.cos(d * math.acos(x))
    try:
        v = math.cosh(d * math.acosh(abs(x)))
    except OverflowError:
        v = math.inf
    return -v if (x < 0 and d % 2) else v


def chebyshev_recurrence(d: int, x: float) -> float:
    """T_d(x) from the three-term recurrence (cross-check)."""
    if d == 0:
        return 1.0
    a, b = 1.0, float(x)
    for _ in range(d - 1):
        a, b = b, 2 * x * b - a
    return b
