"""Algebraic functions y = h(x) defined by Q(x, y) = sum_i s_i(x) y^i = 0.

Singular locus, fibers, batched path tracking, monodromy, and restriction
of g(x) = P(x, h(x)) to a singularity-free disk as an :class:`AnalyticMap`.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .covering import Disk
from .polytools import ComplexPolynomial, RootFindingError, find_roots
from .valence import AnalyticMap

CLUSTER_TOL = 1e-6
FIBER_MIN_DIST = 1e-6
PATH_MARGIN = 1e-3
NEWTON_TOL = 1e-12
NEWTON_ITERS = 8
SEPARATION_FRACTION = 0.3
MIN_STEP = 1e-12
LOOP_STEP_DEG = 5.0


class TrackingError(RuntimeError):
    pass


class DiscriminantError(RuntimeError):
    pass


class SingularityError(ValueError):
    pass


# --------------------------------------------------------------------------
# bivariate polynomials
# --------------------------------------------------------------------------

class BivariatePolynomial:
    """sum C[i, j] y^i x^j; row i holds the coefficients of s_i(x)."""

    def __init__(self, coeffs):
        C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if not np.all(np.isfinite(C)):
            raise ValueError("non-finite coefficient")
        rows = np.flatnonzero(np.any(C != 0, axis=1))
        cols = np.flatnonzero(np.any(C != 0, axis=0))
        if rows.size == 0:
            C = np.zeros((1, 1), dtype=complex)
        else:
            C = C[: rows[-1] + 1, : cols[-1] + 1]
        self.C = C
        self._lock = threading.RLock()
        self._cache = {}

    @classmethod
    def from_terms(cls, terms, deg_y: Optional[int] = None) -> "BivariatePolynomial":
        """terms: iterable of (ypow, xpow, coeff)."""
        terms = list(terms)
        if not terms:
            return cls(np.zeros((1, 1)))
        dy = max(t[0] for t in terms)
        dx = max(t[1] for t in terms)
        if deg_y is not None:
            if dy > deg_y:
                raise ValueError(f"term of y-degree {dy} exceeds deg_y={deg_y}")
            dy = deg_y
        C = np.zeros((dy + 1, dx + 1), dtype=complex)
        for i, j, c in terms:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            C[i, j] += c
        Q = cls(C)
        if deg_y is not None and Q.deg_y != deg_y:
            raise ValueError(f"declared deg_y={deg_y} but the y^{deg_y} coefficient vanishes")
        return Q

    @property
    def deg_y(self) -> int:
        return self.C.shape[0] - 1

    @property
    def deg_x(self) -> int:
        return self.C.shape[1] - 1

    @property
    def total_degree(self) -> int:
        i, j = np.nonzero(self.C)
        return int((i + j).max()) if i.size else 0

    def s_poly(self, i: int) -> ComplexPolynomial:
        return ComplexPolynomial(self.C[i])

    def s_values(self, x) -> np.ndarray:
        """Array (..., deg_y + 1) of s_i(x)."""
        x = np.asarray(x, dtype=complex)
        acc = np.broadcast_to(self.C[:, -1], x.shape + (self.C.shape[0],)).copy()
        for j in range(self.C.shape[1] - 2, -1, -1):
            acc = acc * x[..., None] + self.C[:, j]
        return acc

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
        s = self.s_values(x)
        acc = s[..., -1]
        for i in range(s.shape[-1] - 2, -1, -1):
            acc = acc * y + s[..., i]
        return acc

    def _derived(self, key):
        with self._lock:
            if key not in self._cache:
                C = self.C
                if key == "y":
                    D = C[1:] * np.arange(1, C.shape[0])[:, None] if C.shape[0] > 1 else np.zeros((1, 1))
                else:
                    D = C[:, 1:] * np.arange(1, C.shape[1])[None, :] if C.shape[1] > 1 else np.zeros((1, 1))
                self._cache[key] = BivariatePolynomial(D)
            return self._cache[key]

    def dy(self, x, y):
        return self._derived("y")(x, y)

    def dx(self, x, y):
        return self._derived("x")(x, y)

    def to_dict(self) -> dict:
        i, j = np.nonzero(self.C)
        terms = [{"ypow": int(a), "xpow": int(b), "re": self.C[a, b].real, "im": self.C[a, b].imag}
                 for a, b in zip(i, j)]
        return {"deg_y": self.deg_y, "terms": terms}

    @classmethod
    def from_dict(cls, obj) -> "BivariatePolynomial":
        if "terms" not in obj:
            raise ValueError("bivariate JSON needs a 'terms' field")
        terms = []
        for t in obj["terms"]:
            try:
                terms.append((int(t["ypow"]), int(t["xpow"]), complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))))
            except (KeyError, TypeError) as exc:
                raise ValueError(f"bad term {t!r}") from exc
        return cls.from_terms(terms, obj.get("deg_y"))

    def __repr__(self):
        return f"BivariatePolynomial(deg_y={self.deg_y}, deg_x={self.deg_x})"


def random_bivariate(rng: np.random.Generator, total_degree: int) -> BivariatePolynomial:
    """Standard complex normal coefficients on every monomial y^i x^j, i + j <= total_degree."""
    C = np.zeros((total_degree + 1, total_degree + 1), dtype=complex)
    for i in range(total_degree + 1):
        n = total_degree + 1 - i
        C[i, :n] = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return BivariatePolynomial(C)


def _check_curve(Q: BivariatePolynomial):
    if Q.deg_y < 1:
        raise ValueError("curve must have y-degree >= 1")
    if Q.deg_x > Q.deg_y:
        raise ValueError(f"each s_i must have degree <= d={Q.deg_y}, found x-degree {Q.deg_x}")


# --------------------------------------------------------------------------
# discriminant and singular locus
# --------------------------------------------------------------------------

def _sylvester_det(Q: BivariatePolynomial, x: np.ndarray) -> np.ndarray:
    """Res_y(Q, Q_y) at each x, via batched Sylvester determinants."""
    d = Q.deg_y
    s = Q.s_values(x)                       # (N, d+1) ascending in y
    a = s[:, ::-1]                          # descending, length d+1
    b = (s[:, 1:] * np.arange(1, d + 1))[:, ::-1]   # descending, length d
    n = 2 * d - 1
    M = np.zeros((x.size, n, n), dtype=complex)
    for r in range(d - 1):
        M[:, r, r:r + d + 1] = a
    for r in range(d):
        M[:, d - 1 + r, r:r + d] = b
    return np.linalg.det(M)


def discriminant_x(Q: BivariatePolynomial) -> ComplexPolynomial:
    """Resultant in y of Q and dQ/dy, by evaluation at roots of unity and FFT."""
    _check_curve(Q)
    d = Q.deg_y
    if d == 1:
        return Q.s_poly(1)
    bound = (2 * d - 1) * Q.deg_x
    N = max(bound + 1, 4)
    w = np.exp(2j * np.pi * np.arange(N) / N)
    vals = _sylvester_det(Q, w)
    coeffs = np.fft.fft(vals) / N
    coeffs = coeffs[: bound + 1]
    top = np.max(np.abs(coeffs))
    entry = float(np.max(np.abs(Q.C))) * max(d, 1)
    if top <= 1e-11 * entry ** (2 * d - 1):
        raise DiscriminantError("discriminant vanishes identically (curve is not squarefree in y)")
    coeffs = np.where(np.abs(coeffs) <= 1e-13 * top, 0, coeffs)
    disc = ComplexPolynomial(coeffs)
    probe = np.array([0.31 + 0.17j, -0.62 + 0.44j, 0.23 - 0.81j])
    direct = _sylvester_det(Q, probe)
    approx = disc(probe)
    scale = np.polyval(np.abs(disc.coeffs[::-1]), np.abs(probe))
    rel = float(np.max(np.abs(direct - approx) / np.maximum(scale, 1e-300)))
    if rel > 1e-6:
        raise DiscriminantError(f"interpolated discriminant fails cross-check (relative residual {rel:.3g})")
    return disc


@dataclass
class SingularLocus:
    points: np.ndarray
    sources: list

    def distance(self, x) -> float:
        if self.points.size == 0:
            return math.inf
        return float(np.min(np.abs(np.asarray(x) - self.points)))

    def __len__(self):
        return self.points.size

    def to_dict(self) -> dict:
        return {"points": [[z.real, z.imag] for z in self.points], "sources": list(self.sources)}


def _cluster(roots: np.ndarray, tol: float) -> np.ndarray:
    out = []
    used = np.zeros(roots.size, dtype=bool)
    for k in range(roots.size):
        if used[k]:
            continue
        near = ~used & (np.abs(roots - roots[k]) <= tol * max(1.0, abs(roots[k])))
        used |= near
        out.append(roots[near].mean())
    return np.array(out, dtype=complex)


def _poly_roots(P: ComplexPolynomial) -> np.ndarray:
    if P.degree < 1:
        return np.zeros(0, dtype=complex)
    try:
        return find_roots(P)
    except RootFindingError as exc:
        return exc.best


def singular_points(Q: BivariatePolynomial) -> SingularLocus:
    """Zeros of the leading coefficient s_d and of the discriminant."""
    with Q._lock:
        cached = Q._cache.get("sigma")
    if cached is not None:
        return cached
    _check_curve(Q)
    d = Q.deg_y
    lead = _cluster(_poly_roots(Q.s_poly(d)), CLUSTER_TOL)
    disc = _cluster(_poly_roots(discriminant_x(Q)), CLUSTER_TOL)
    pts, src = [], []
    for z in lead:
        pts.append(z)
        src.append("leading")
    for z in disc:
        hit = [k for k, p in enumerate(pts) if abs(p - z) <= CLUSTER_TOL * max(1.0, abs(z))]
        if hit:
            src[hit[0]] = "both"
        else:
            pts.append(z)
            src.append("discriminant")
    order = np.lexsort((np.imag(pts), np.real(pts))) if pts else np.zeros(0, dtype=int)
    locus = SingularLocus(np.array(pts, dtype=complex)[order], [src[k] for k in order])
    if len(locus) > 2 * d * d:
        raise DiscriminantError(f"{len(locus)} singular points exceed the bound 2d^2={2 * d * d}")
    with Q._lock:
        Q._cache["sigma"] = locus
    return locus


def safe_radius(sigma: SingularLocus, x0: complex) -> float:
    """Distance from x0 to the nearest singular point (inf if none)."""
    return sigma.distance(x0)


def _scale(sigma: SingularLocus, *xs) -> float:
    vals = [1.0] + [abs(x) for x in xs]
    if sigma.points.size:
        vals.append(float(np.max(np.abs(sigma.points))))
    return max(vals)


# --------------------------------------------------------------------------
# fibers, germs, tracking
# --------------------------------------------------------------------------

def _fiber_roots(Q: BivariatePolynomial, x0: complex) -> np.ndarray:
    s = Q.s_values(np.array([x0]))[0]
    roots = find_roots(ComplexPolynomial(s))
    return _polish(Q, np.full(roots.size, x0), roots)


def fiber(Q: BivariatePolynomial, x0: complex) -> np.ndarray:
    """The d values y with Q(x0, y) = 0, sorted by (real, imag)."""
    _check_curve(Q)
    sigma = singular_points(Q)
    if sigma.distance(x0) < FIBER_MIN_DIST:
        raise SingularityError(f"too close to singularity: x0={x0}")
    roots = _fiber_roots(Q, complex(x0))
    return roots[np.lexsort((roots.imag, roots.real))]


@dataclass
class BranchGerm:
    base_x: complex
    y_value: complex
    curve: BivariatePolynomial = field(repr=False)
    branch_id: int = -1

    def residual(self) -> float:
        return float(abs(self.curve(self.base_x, self.y_value)))

    def to_dict(self) -> dict:
        return {"base_x": [self.base_x.real, self.base_x.imag],
                "y_value": [self.y_value.real, self.y_value.imag],
                "branch_id": self.branch_id}


def make_germ(Q: BivariatePolynomial, x0: complex, near_y: complex) -> BranchGerm:
    """Germ at x0 on the fiber point nearest to near_y."""
    F = fiber(Q, x0)
    k = int(np.argmin(np.abs(F - near_y)))
    return BranchGerm(complex(x0), complex(F[k]), Q, k)


def _polish(Q, x, y, iters=4):
    for _ in range(iters):
        qy = Q.dy(x, y)
        step = np.where(qy != 0, Q(x, y) / np.where(qy == 0, 1, qy), 0)
        y = y - step
    return y


def _segment_distance(sigma: np.ndarray, a: complex, b: complex) -> float:
    if sigma.size == 0:
        return math.inf
    ab = b - a
    L2 = abs(ab) ** 2
    if L2 == 0:
        return float(np.min(np.abs(sigma - a)))
    t = np.clip(((sigma - a) * np.conj(ab)).real / L2, 0, 1)
    return float(np.min(np.abs(sigma - (a + t * ab))))


def validate_path(Q: BivariatePolynomial, path: Sequence[complex], margin: Optional[float] = None):
    sigma = singular_points(Q)
    path = np.asarray(path, dtype=complex)
    if margin is None:
        margin = PATH_MARGIN * _scale(sigma, *path)
    for a, b in zip(path[:-1], path[1:]):
        dist = _segment_distance(sigma.points, a, b)
        if dist < margin:
            raise SingularityError(f"path segment {a}->{b} passes within {dist:.3g} of a singular point")


def _track_batch(Q: BivariatePolynomial, xa: np.ndarray, xb: np.ndarray, y0: np.ndarray,
                 fib: Optional[np.ndarray] = None) -> tuple:
    """Track y along straight segments xa -> xb (all sharing t in [0, 1]).

    Returns (y_end, fiber_end).  Steps are halved when Newton fails, when
    the correction exceeds a fraction of the local fiber separation, or
    when two fiber points would be confused.
    """
    d = Q.deg_y
    xa = np.asarray(xa, dtype=complex)
    xb = np.asarray(xb, dtype=complex)
    y = np.asarray(y0, dtype=complex).copy()
    diff = xb - xa
    length = float(np.max(np.abs(diff))) if diff.size else 0.0
    if length == 0:
        return y, fib
    if d >= 2 and fib is None:
        fib = _fibers_at(Q, xa)
    sigma = singular_points(Q)
    near = max(min(sigma.distance(x) for x in (xa[0], xb[0])), 1e-9) if sigma.points.size else 1.0
    dt = min(1.0, 0.2 * near / length)
    t = 0.0
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        x0 = xa + t * diff
        x1 = xa + (t + dt) * diff if t + dt < 1.0 else xb
        dx = x1 - x0
        with np.errstate(all="ignore"):
            slope = -Q.dx(x0, y) / Q.dy(x0, y)
            yp = y + slope * dx
            yc = yp.copy()
            conv = False
            for _ in range(NEWTON_ITERS):
                step = Q(x1, yc) / Q.dy(x1, yc)
                yc = yc - step
                if np.all(np.abs(step) <= NEWTON_TOL * (1 + np.abs(yc))):
                    conv = True
                    break
        ok = conv and bool(np.all(np.isfinite(yc)))
        F = None
        if ok and d >= 2:
            F, _ = kernels.aberth_batch(Q.s_values(x1), fib, 60, 1e-14)
            dist = np.abs(F - yc[:, None])
            j = np.argmin(dist, axis=1)
            other = np.abs(F - F[np.arange(F.shape[0]), j][:, None])
            other[np.arange(F.shape[0]), j] = np.inf
            sep = other.min(axis=1)
            moved = np.abs(slope * dx)
            ok = bool(np.all(np.abs(yc - yp) < SEPARATION_FRACTION * sep)
                      and np.all(moved < 0.5 * sep)
                      and np.all(dist[np.arange(F.shape[0]), j] < SEPARATION_FRACTION * sep))
        if ok:
            t = 1.0 if x1 is xb else t + dt
            y = yc
            if F is not None:
                fib = F
            dt *= 1.6
        else:
            dt *= 0.5
            if dt * length < MIN_STEP:
                bad = complex(x0[0])
                raise TrackingError(f"tracking failed near x={bad:.6g}")
    return _polish(Q, xb, y), fib


def _fibers_at(Q, xs: np.ndarray) -> np.ndarray:
    uniq, inv = np.unique(xs, return_inverse=True)
    rows = np.array([_fiber_roots(Q, complex(u)) for u in uniq])
    return rows[inv.ravel()]


def track_path(Q: BivariatePolynomial, path: Sequence[complex], y0, validate: bool = True) -> np.ndarray:
    """Continue the values y0 (all over path[0]) along a polyline."""
    path = np.asarray(path, dtype=complex)
    if validate:
        validate_path(Q, path)
    y = np.atleast_1d(np.asarray(y0, dtype=complex)).copy()
    fib = None
    for a, b in zip(path[:-1], path[1:]):
        if a == b:
            continue
        y, fib = _track_batch(Q, np.full(y.size, a), np.full(y.size, b), y, fib)
    return y


def continue_branch(Q: BivariatePolynomial, germ: BranchGerm, path: Sequence[complex]) -> BranchGerm:
    """The germ obtained by analytic continuation along a polyline."""
    path = np.asarray(path, dtype=complex)
    if abs(path[0] - germ.base_x) > 1e-12 * (1 + abs(germ.base_x)):
        raise ValueError("path must start at the germ's base point")
    y = track_path(Q, path, [germ.y_value])[0]
    return BranchGerm(complex(path[-1]), complex(y), Q, germ.branch_id)


def circle_path(center: complex, radius: float, start_angle: float, turns: float = 1.0) -> np.ndarray:
    """Counterclockwise polyline on a circle with <= 5 degree steps."""
    n = max(8, int(math.ceil(360.0 * abs(turns) / LOOP_STEP_DEG)))
    ang = start_angle + 2 * math.pi * turns * np.arange(n + 1) / n
    return center + radius * np.exp(1j * ang)


# --------------------------------------------------------------------------
# monodromy
# --------------------------------------------------------------------------

@dataclass
class MonodromyAction:
    basepoint: complex
    fiber: np.ndarray
    generators: list            # (singular point, permutation tuple, 0-based)
    group_order_estimate: int

    def to_dict(self) -> dict:
        return {
            "basepoint": [self.basepoint.real, self.basepoint.imag],
            "fiber": [[z.real, z.imag] for z in self.fiber],
            "generators": [{"point": [p.real, p.imag], "permutation": [k + 1 for k in perm]}
                           for p, perm in self.generators],
            "group_order_estimate": self.group_order_estimate,
        }


def _match(values: np.ndarray, reference: np.ndarray) -> tuple:
    perm = []
    for v in values:
        perm.append(int(np.argmin(np.abs(reference - v))))
    if len(set(perm)) != len(perm):
        raise TrackingError("continued fiber does not match the base fiber")
    return tuple(perm)


def loop_path(Q: BivariatePolynomial, basepoint: complex, center: complex, radius: float) -> np.ndarray:
    """Basepoint -> circle about center (ccw, once) -> basepoint."""
    sigma = singular_points(Q)
    off = basepoint - center
    if abs(off) <= radius:
        raise ValueError("basepoint must lie outside the loop circle")
    u = off / abs(off)
    p = center + radius * u
    approach = _route(sigma.points, basepoint, p, exclude=center)
    circ = circle_path(center, radius, math.atan2(u.imag, u.real))
    return np.concatenate([approach, circ[1:], approach[::-1][1:]])


def _route(sigma: np.ndarray, a: complex, b: complex, exclude: complex) -> np.ndarray:
    """Polyline a -> b bending around singular points close to the segment."""
    others = sigma[np.abs(sigma - exclude) > 1e-12] if sigma.size else sigma
    pts = [a]
    cur = a
    for _ in range(8):
        if others.size == 0:
            break
        ab = b - cur
        L2 = abs(ab) ** 2
        t = np.clip(((others - cur) * np.conj(ab)).real / L2, 0, 1)
        dist = np.abs(others - (cur + t * ab))
        lim = 0.05 * abs(ab)
        bad = np.flatnonzero((dist < lim) & (t > 0) & (t < 1))
        if bad.size == 0:
            break
        k = bad[np.argmin(t[bad])]
        s = others[k]
        normal = 1j * ab / abs(ab)
        side = 1.0 if ((s - cur) * np.conj(normal)).real <= 0 else -1.0
        w = s + side * normal * max(0.25 * np.min(np.abs(others[np.arange(others.size) != k] - s))
                                    if others.size > 1 else 0.25 * abs(ab), 2 * lim)
        pts.append(w)
        cur = w
    pts.append(b)
    return np.array(pts, dtype=complex)


def _group_order(perms: list, d: int, cap: int = 10 ** 6) -> int:
    ident = tuple(range(d))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = tuple(p[g[k]] for k in range(d))
                if h not in seen:
                    seen.add(h)
                    if len(seen) >= cap:
                        return cap
                    nxt.append(h)
        frontier = nxt
    return len(seen)


def monodromy(Q: BivariatePolynomial, basepoint: complex) -> MonodromyAction:
    """Permutations of the sorted base fiber from standard loops about each singular point."""
    _check_curve(Q)
    basepoint = complex(basepoint)
    sigma = singular_points(Q)
    F = fiber(Q, basepoint)
    scale = _scale(sigma, basepoint)
    gens = []
    for k, s in enumerate(sigma.points):
        others = np.delete(sigma.points, k)
        rho = 0.1 * scale
        if others.size:
            rho = min(rho, 0.5 * float(np.min(np.abs(others - s))))
        rho = min(rho, 0.5 * abs(basepoint - s))
        try:
            path = loop_path(Q, basepoint, s, rho)
            end = track_path(Q, path, F)
            perm = _match(end, F)
        except (TrackingError, SingularityError) as exc:
            raise TrackingError(f"monodromy loop around singular point {s:.6g} failed: {exc}") from exc
        gens.append((complex(s), perm))
    order = _group_order([p for _, p in gens], Q.deg_y)
    return MonodromyAction(basepoint, F, gens, order)


def loop_permutation(Q: BivariatePolynomial, basepoint: complex, center: complex, radius: float) -> tuple:
    """Permutation of the sorted fiber induced by one ccw circle about center."""
    F = fiber(Q, basepoint)
    return _match(track_path(Q, loop_path(Q, basepoint, center, radius), F), F)


def compose(p: tuple, q: tuple) -> tuple:
    """Apply p first, then q."""
    return tuple(q[p[k]] for k in range(len(p)))


def permutation_orbit(perms: Sequence[tuple], start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        k = stack.pop()
        for p in perms:
            j = p[k]
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


# --------------------------------------------------------------------------
# branch restriction g(x) = P(x, h(x))
# --------------------------------------------------------------------------

class _BranchValues:
    """Memo of continued values of one germ, filled by batched radial tracking."""

    def __init__(self, Q, germ, cap=400_000):
        self.Q = Q
        self.germ = germ
        self.cap = cap
        self.lock = threading.Lock()
        self.memo = {}
        self.fib0 = _fiber_roots(Q, germ.base_x)[None, :] if Q.deg_y >= 2 else None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        flat = np.asarray(x, dtype=complex).ravel()
        out = np.empty(flat.size, dtype=complex)
        with self.lock:
            missing = [k for k, v in enumerate(flat) if v not in self.memo]
            for k, v in enumerate(flat):
                if v in self.memo:
                    out[k] = self.memo[v]
        if missing:
            targets = np.unique(flat[missing])
            base = self.germ.base_x
            fib = None if self.fib0 is None else np.repeat(self.fib0, targets.size, axis=0)
            vals, _ = _track_batch(self.Q, np.full(targets.size, base), targets,
                                   np.full(targets.size, self.germ.y_value), fib)
            with self.lock:
                if len(self.memo) + targets.size > self.cap:
                    self.memo.clear()
                self.memo.update(zip(targets.tolist(), vals.tolist()))
                for k in missing:
                    out[k] = self.memo[flat[k]]
        return out.reshape(np.shape(x))


def branch_restriction(Q: BivariatePolynomial, germ: BranchGerm, P: BivariatePolynomial,
                       domain: Disk) -> AnalyticMap:
    """g(x) = P(x, h(x)) on a disk where the germ's branch h is single valued."""
    _check_curve(Q)
    sigma = singular_points(Q)
    R = safe_radius(sigma, germ.base_x)
    margin = PATH_MARGIN * _scale(sigma, germ.base_x)
    if abs(domain.center - germ.base_x) + domain.radius > R - margin:
        raise SingularityError("domain not singularity-free")
    if germ.residual() > 1e-8 * (1 + abs(germ.y_value)) ** Q.deg_y:
        raise ValueError("germ does not lie on the curve")
    key = ("branch", germ.base_x, germ.y_value)
    with Q._lock:
        h = Q._cache.get(key)
        if h is None:
            h = Q._cache[key] = _BranchValues(Q, germ)
    d, d1 = Q.deg_y, P.total_degree

    def value(x):
        return P(x, h(x))

    def deriv(x):
        y = h(x)
        hp = -Q.dx(x, y) / Q.dy(x, y)
        return P.dx(x, y) + P.dy(x, y) * hp

    def budget(s: int) -> int:
        return d * max(s, d1)

    meta = {"d": d, "d1": d1, "germ": germ.to_dict(), "valence_budget": budget, "branch": h,
            "budget_table": {s: budget(s) for s in range(0, max(d1, 3) + 1)}}
    dom = Disk(domain.center, domain.radius)
    return AnalyticMap(value, deriv, dom, f"branch restriction of degree-{d1} polynomial", None, meta)

