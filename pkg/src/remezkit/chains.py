"""Chains of singularity-free disks carrying compatible branches.

A chain is a sequence of disks D_j (radius R_j) with inner disks
D1_j (radius R1_j) and D'_j (radius R'_j) about the same centers.  Each
link carries a germ of the algebraic function.  Bounds propagate from the
anchor set Z in D1_0 through the lenses D1_j ∩ D'_{j-1} to the target x0
in D'_m.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .covering import Disk, PointSet, _meb, cd_lower_bound
from .curves import (
    PATH_MARGIN,
    BivariatePolynomial,
    BranchGerm,
    MonodromyAction,
    SingularLocus,
    SingularityError,
    TrackingError,
    branch_restriction,
    circle_path,
    fiber,
    make_germ,
    monodromy,
    permutation_orbit,
    singular_points,
    track_path,
    _route,
    _scale,
)
from .polytools import max_modulus_boundary
from .remez import E, REL_HOLD, RemezCertificate, sigma

DEFAULT_R1 = 0.5
DEFAULT_RP = 0.7
GRID = np.round(np.arange(0.50, 0.951, 0.05), 2)
LENS_SAMPLES = 200
LENS_BLOCK = 40
GERM_TOL = 1e-8


class NoChainFound(RuntimeError):
    pass


@dataclass
class ChainLink:
    disk: Disk
    germ: BranchGerm
    inner_radius_R1: float
    inner_radius_Rp: float

    def __post_init__(self):
        R = self.disk.radius
        if not (0 < self.inner_radius_R1 < R and 0 < self.inner_radius_Rp < R):
            raise ValueError("inner radii must lie strictly between 0 and the disk radius")

    @property
    def center(self) -> complex:
        return self.disk.center

    @property
    def D1(self) -> Disk:
        return Disk(self.disk.center, self.inner_radius_R1)

    @property
    def Dp(self) -> Disk:
        return Disk(self.disk.center, self.inner_radius_Rp)

    def to_dict(self) -> dict:
        return {"disk": self.disk.to_dict(), "germ": self.germ.to_dict(),
                "R1": self.inner_radius_R1, "Rp": self.inner_radius_Rp}


@dataclass
class Chain:
    links: list
    Z_anchor: PointSet
    target_x0: complex

    def with_radii(self, radii: Sequence[tuple]) -> "Chain":
        links = [ChainLink(l.disk, l.germ, r1, rp) for l, (r1, rp) in zip(self.links, radii)]
        return Chain(links, self.Z_anchor, self.target_x0)

    def to_dict(self) -> dict:
        return {"links": [l.to_dict() for l in self.links],
                "Z": self.Z_anchor.to_dict(),
                "x0": [complex(self.target_x0).real, complex(self.target_x0).imag]}


@dataclass
class GlobalConfiguration:
    curve: BivariatePolynomial
    poly_degree_d1: int
    sigma: SingularLocus
    Z: PointSet
    x0: complex
    monodromy: MonodromyAction
    branch_hat: BranchGerm
    branch_bar: BranchGerm

    @property
    def d(self) -> int:
        return self.curve.deg_y

    def to_dict(self) -> dict:
        return {
            "curve": self.curve.to_dict(),
            "d1": self.poly_degree_d1,
            "sigma": self.sigma.to_dict(),
            "Z": self.Z.to_dict(),
            "x0": [self.x0.real, self.x0.imag],
            "monodromy": self.monodromy.to_dict(),
            "branch_hat": self.branch_hat.to_dict(),
            "branch_bar": self.branch_bar.to_dict(),
        }


def make_configuration(Q: BivariatePolynomial, d1: int, Z, x0: complex, hat_base: complex,
                       hat_y: complex, bar_y: complex) -> GlobalConfiguration:
    """Configuration with germs snapped to the nearest fiber points."""
    Z = Z if isinstance(Z, PointSet) else PointSet(Z)
    sig = singular_points(Q)
    x0 = complex(x0)
    if sig.distance(x0) < 1e-6:
        raise SingularityError("x0 lies on the singular locus")
    c, r = _meb(Z.unique())
    if r >= sig.distance(c):
        raise SingularityError("Z is not contained in a singularity-free disk")
    hat = make_germ(Q, complex(hat_base), complex(hat_y))
    bar = make_germ(Q, x0, complex(bar_y))
    return GlobalConfiguration(Q, int(d1), sig, Z, x0, monodromy(Q, x0), hat, bar)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass
class ValidationReport:
    valid: bool
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "failures": self.failures}


def _lens_interval(a: Disk, b: Disk) -> tuple:
    """(lo, hi, u) along the axis from a to b of the intersection segment."""
    off = b.center - a.center
    L = abs(off)
    u = off / L if L > 0 else 1.0
    lo = max(-a.radius, L - b.radius)
    hi = min(a.radius, L + b.radius)
    return lo, hi, u


def lens_point(a: Disk, b: Disk) -> complex:
    lo, hi, u = _lens_interval(a, b)
    if not lo < hi:
        raise ValueError("empty lens")
    return a.center + u * 0.5 * (lo + hi)


def transport(Q, germ: BranchGerm, x: complex) -> complex:
    """Value of the germ's branch at x via the straight segment."""
    if x == germ.base_x:
        return germ.y_value
    return complex(track_path(Q, [germ.base_x, x], [germ.y_value])[0])


def germs_match(Q, a: BranchGerm, b: BranchGerm) -> bool:
    y = transport(Q, a, b.base_x)
    return abs(y - b.y_value) <= GERM_TOL * (1 + abs(b.y_value))


def validate_chain(Q: BivariatePolynomial, chain: Chain, branch_hat: Optional[BranchGerm] = None,
                   branch_bar: Optional[BranchGerm] = None) -> ValidationReport:
    fails = []
    sig = singular_points(Q)
    links = chain.links
    if not links:
        return ValidationReport(False, [{"condition": 0, "index": None, "reason": "chain has no links"}])
    margin = PATH_MARGIN * _scale(sig, *[l.center for l in links])

    def fail(cond, idx, reason):
        fails.append({"condition": cond, "index": idx, "reason": reason})

    for j, l in enumerate(links):
        if sig.distance(l.center) < l.disk.radius + margin:
            fail(0, j, "disk closure meets the singular locus")
        res = abs(Q(l.germ.base_x, l.germ.y_value))
        if res > 1e-10 * (1 + abs(l.germ.y_value)) ** Q.deg_y:
            fail(0, j, f"germ residual {res:.3g} too large")
        if abs(l.germ.base_x - l.center) >= l.disk.radius:
            fail(0, j, "germ base point outside its disk")
    if fails:
        return ValidationReport(False, fails)

    pts = chain.Z_anchor.unique()
    if np.any(np.abs(pts - links[0].center) >= links[0].inner_radius_R1):
        fail(1, 0, "Z not contained in D1_0")
    if branch_hat is not None:
        if abs(branch_hat.base_x - links[0].center) >= links[0].disk.radius:
            fail(1, 0, "the anchor branch base point lies outside D_0")
        elif not _safe_match(Q, links[0].germ, branch_hat):
            fail(1, 0, "link-0 germ does not match the anchor branch")
    last = links[-1]
    x0 = complex(chain.target_x0)
    if abs(x0 - last.center) >= last.inner_radius_Rp:
        fail(2, len(links) - 1, "x0 not contained in D'_m")
    if branch_bar is not None and not _safe_match(Q, last.germ, branch_bar):
        fail(2, len(links) - 1, "last germ does not match the target branch")
    for j in range(len(links) - 1):
        a, b = links[j], links[j + 1]
        lo, hi, _ = _lens_interval(a.Dp, b.D1)
        if not lo < hi:
            fail(3, j, "lens D'_j with D1_{j+1} is empty")
            continue
        p = lens_point(a.Dp, b.D1)
        try:
            ya = transport(Q, a.germ, p)
            yb = transport(Q, b.germ, p)
        except (TrackingError, SingularityError) as exc:
            fail(3, j, f"continuation failed: {exc}")
            continue
        if abs(ya - yb) > GERM_TOL * (1 + abs(ya)):
            fail(3, j, "branch mismatch on the overlap")
    return ValidationReport(not fails, fails)


def _safe_match(Q, a, b) -> bool:
    try:
        return germs_match(Q, a, b)
    except (TrackingError, SingularityError):
        return False


# --------------------------------------------------------------------------
# lens invariants and the chain constant
# --------------------------------------------------------------------------

def lens_sample(a: Disk, b: Disk, n: int, seed: int) -> np.ndarray:
    """n uniform points of the lens; a prefix of any larger sample."""
    lo, hi, _ = _lens_interval(a, b)
    if not hi - lo > 1e-12 * max(a.radius, b.radius):
        raise ValueError("empty lens")
    x0 = max(a.center.real - a.radius, b.center.real - b.radius)
    x1 = min(a.center.real + a.radius, b.center.real + b.radius)
    y0 = max(a.center.imag - a.radius, b.center.imag - b.radius)
    y1 = min(a.center.imag + a.radius, b.center.imag + b.radius)
    rng = np.random.default_rng([int(seed), 0x1E45])
    out = []
    have = 0
    for _ in range(10_000):
        u = rng.uniform(size=(2, 1024))
        z = x0 + (x1 - x0) * u[0] + 1j * (y0 + (y1 - y0) * u[1])
        z = z[(np.abs(z - a.center) < a.radius) & (np.abs(z - b.center) < b.radius)]
        out.append(z)
        have += z.size
        if have >= n:
            break
    return np.concatenate(out)[:n]


def lens_c_invariant(diskA: Disk, diskB: Disk, d1: int, n_samples: int = LENS_SAMPLES, seed: int = 0) -> float:
    """Lower bound on c_{d1} of the lens, from a uniform sample of it."""
    if d1 < 1:
        raise ValueError("d1 must be >= 1")
    pts = lens_sample(diskA, diskB, n_samples, seed)
    if np.unique(pts).size <= d1:
        return 0.0
    return cd_lower_bound(pts, d1, block=LENS_BLOCK)[0]


@dataclass
class ChainConstantReport:
    K_value: float
    log_K: float
    per_link_factors: list
    log_factors: list
    chosen_radii: list
    lens_c_values: list
    upper_estimate: bool = True

    def to_dict(self) -> dict:
        return {
            "K_value": self.K_value,
            "log10_K": self.log_K / math.log(10),
            "per_link_factors": self.per_link_factors,
            "chosen_radii": [list(r) for r in self.chosen_radii],
            "lens_c_values": self.lens_c_values,
            "label": "upper estimate" if self.upper_estimate else "chain value",
        }


class _LensCache:
    def __init__(self, d1, n, seed):
        self.d1, self.n, self.seed = d1, n, seed
        self.memo = {}

    def __call__(self, a: Disk, b: Disk) -> float:
        key = (a.center, round(a.radius, 14), b.center, round(b.radius, 14))
        if key not in self.memo:
            try:
                self.memo[key] = lens_c_invariant(a, b, self.d1, self.n, self.seed)
            except ValueError:
                self.memo[key] = 0.0
        return self.memo[key]


def _log_factors(links, radii, d, d1, lens) -> tuple:
    """log of each link factor and the lens c_j (None for j = 0)."""
    logs, cs = [], []
    for j, (l, (r1, rp)) in enumerate(zip(links, radii)):
        R = l.disk.radius
        ls = d * d1 * math.log(sigma(r1 / R, rp / R))
        if j == 0:
            logs.append(ls)
            cs.append(None)
            continue
        prev = links[j - 1]
        c = lens(Disk(l.center, r1), Disk(prev.center, radii[j - 1][1]))
        cs.append(c)
        if c <= 0:
            logs.append(math.inf)
        else:
            logs.append(ls + d1 * math.log(6 * E * R / c))
    return logs, cs


def _feasible(chain: Chain, radii) -> bool:
    links = chain.links
    pts = chain.Z_anchor.unique()
    if np.any(np.abs(pts - links[0].center) >= radii[0][0]):
        return False
    x0 = complex(chain.target_x0)
    if abs(x0 - links[-1].center) >= radii[-1][1]:
        return False
    for j in range(1, len(links)):
        dist = abs(links[j].center - links[j - 1].center)
        lo_gap = radii[j][0] + radii[j - 1][1] - dist
        if lo_gap <= 1e-9 * links[j].disk.radius:
            return False
    for l, (r1, rp) in zip(links, radii):
        if not (0 < r1 < l.disk.radius and 0 < rp < l.disk.radius):
            return False
    return True


def chain_constant(chain: Chain, d: int, d1: int, optimize: bool = False, seed: int = 0,
                   n_samples: int = LENS_SAMPLES) -> ChainConstantReport:
    """Product over links of sigma^(d d1) and, for j >= 1, (6e R_j / c_j)^d1."""
    if d1 < 1:
        raise ValueError("d1 must be >= 1")
    lens = _LensCache(d1, n_samples, seed)
    links = chain.links
    radii = [(l.inner_radius_R1, l.inner_radius_Rp) for l in links]
    if not _feasible(chain, radii):
        raise ValueError("chain radii violate the containment or overlap constraints")
    logs, cs = _log_factors(links, radii, d, d1, lens)
    if optimize:
        radii, logs, cs = _optimize(chain, radii, logs, d, d1, lens)
    total = float(sum(logs))
    factors = [math.exp(v) if v < 709 else math.inf for v in logs]
    return ChainConstantReport(math.exp(total) if total < 709 else math.inf, total, factors,
                               logs, radii, cs)


def _optimize(chain, radii, logs, d, d1, lens):
    """Coordinate descent over the fraction grid, one inner radius at a time."""
    links = chain.links
    best = list(radii)
    best_total = sum(logs)
    for _ in range(6):
        improved = False
        for j in range(len(links)):
            R = links[j].disk.radius
            for slot in (0, 1):
                for frac in GRID:
                    cand = list(best)
                    pair = list(cand[j])
                    pair[slot] = float(frac) * R
                    cand[j] = tuple(pair)
                    if not _feasible(chain, cand):
                        continue
                    lg, _ = _log_factors(links, cand, d, d1, lens)
                    tot = sum(lg)
                    if tot < best_total - 1e-12:
                        best, best_total = cand, tot
                        improved = True
        if not improved:
            break
    logs, cs = _log_factors(links, best, d, d1, lens)
    return best, logs, cs


# --------------------------------------------------------------------------
# chain search
# --------------------------------------------------------------------------

def _arc_points(path: np.ndarray):
    seg = np.abs(np.diff(path))
    return np.concatenate([[0.0], np.cumsum(seg)])


def _point_at(path, cum, s):
    k = int(np.searchsorted(cum, s, side="right") - 1)
    k = min(max(k, 0), len(path) - 2)
    L = cum[k + 1] - cum[k]
    t = 0.0 if L == 0 else (s - cum[k]) / L
    return path[k] + t * (path[k + 1] - path[k])


def _place_disks(path: np.ndarray, sig: np.ndarray, step_frac: float, fit=0.9) -> list:
    """Centers along the polyline; consecutive spacing <= step_frac * min radius."""
    cum = _arc_points(path)
    total = cum[-1]

    def radius(p):
        return fit * float(np.min(np.abs(sig - p))) if sig.size else 1.0

    centers = [path[0]]
    s = 0.0
    while True:
        cur = _point_at(path, cum, s)
        rc = radius(cur)
        if total - s <= 1e-12:
            break
        step = step_frac * rc
        while True:
            s_new = min(total, s + step)
            q = _point_at(path, cum, s_new)
            if abs(q - cur) <= step_frac * min(rc, radius(q)) or step < 1e-9:
                break
            step *= 0.7
        s = s_new
        centers.append(q)
        if s >= total:
            break
    centers[-1] = path[-1]
    return centers


def _planner_loop(sig: np.ndarray, base: complex, s: complex, ccw: bool, shrink: float) -> np.ndarray:
    others = sig[np.abs(sig - s) > 1e-12]
    dist = abs(base - s)
    rho = shrink * dist
    if others.size:
        rho = min(rho, 0.45 * float(np.min(np.abs(others - s))))
    u = (base - s) / dist
    p = s + rho * u
    approach = _route(sig, base, p, exclude=s)
    circ = circle_path(s, rho, math.atan2(u.imag, u.real), 1.0 if ccw else -1.0)
    return np.concatenate([approach, circ[1:], approach[::-1][1:]])


def _word(action: MonodromyAction, start: int, goal: int) -> Optional[list]:
    """Shortest word of (generator index, ccw?) moving branch start to goal."""
    moves = []
    for g, (_, perm) in enumerate(action.generators):
        inv = [0] * len(perm)
        for k, v in enumerate(perm):
            inv[v] = k
        moves.append((g, True, perm))
        moves.append((g, False, tuple(inv)))
    prev = {start: None}
    q = deque([start])
    while q:
        k = q.popleft()
        if k == goal:
            break
        for g, ccw, perm in moves:
            j = perm[k]
            if j not in prev:
                prev[j] = (k, g, ccw)
                q.append(j)
    if goal not in prev:
        return None
    word = []
    k = goal
    while prev[k] is not None:
        k0, g, ccw = prev[k]
        word.append((g, ccw))
        k = k0
    return word[::-1]


def _build_chain(Q, config, c0, R0, route, step_frac) -> Chain:
    sig = config.sigma.points
    centers = _place_disks(route, sig, step_frac)
    links = []
    germ_y = transport(Q, config.branch_hat, c0)
    prev_c = c0
    pts = config.Z.unique()
    zr = float(np.max(np.abs(pts - c0)))
    for j, c in enumerate(centers):
        R = R0 if j == 0 else 0.9 * float(np.min(np.abs(sig - c))) if sig.size else R0
        if j > 0:
            germ_y = complex(track_path(Q, [prev_c, c], [germ_y])[0])
        germ = BranchGerm(complex(c), complex(germ_y), Q, -1)
        r1, rp = DEFAULT_R1 * R, DEFAULT_RP * R
        if j == 0:
            r1 = max(r1, min(zr * (1 + 1e-6) + 1e-12 * R, 0.999 * R))
        if j == len(centers) - 1:
            need = abs(complex(config.x0) - c)
            rp = max(rp, min(need * (1 + 1e-6) + 1e-12 * R, 0.999 * R))
        links.append(ChainLink(Disk(c, R), germ, r1, rp))
        prev_c = c
    return Chain(links, config.Z, config.x0)


def search_chain(config: GlobalConfiguration, seed: int = 0, optimize: bool = False,
                 n_samples: int = LENS_SAMPLES) -> tuple:
    """Heuristic chain (an upper estimate of K(S)) from Z to the target branch at x0."""
    Q = config.curve
    sig = config.sigma.points
    d, d1 = Q.deg_y, config.poly_degree_d1
    x0 = complex(config.x0)
    pts = config.Z.unique()
    c0, zr = _meb(pts)
    dist0 = config.sigma.distance(c0)
    R0 = 0.9 * dist0 if math.isfinite(dist0) else max(2 * zr, abs(x0 - c0), 1.0) * 2
    if zr >= 0.999 * R0:
        raise NoChainFound("no chain found (K(S) not bounded by this search): Z does not fit in a singularity-free disk")
    # arrival branch along the direct route, then a word in the loop generators
    direct = _route(sig, c0, x0, exclude=np.inf) if sig.size else np.array([c0, x0])
    try:
        y_start = transport(Q, config.branch_hat, c0)
        y_arr = complex(track_path(Q, direct, [y_start])[0])
    except (TrackingError, SingularityError) as exc:
        raise NoChainFound(f"no chain found (K(S) not bounded by this search): {exc}") from exc
    F = fiber(Q, x0)
    action = config.monodromy
    if abs(action.basepoint - x0) > 1e-12 * (1 + abs(x0)):
        action = monodromy(Q, x0)
    start = int(np.argmin(np.abs(F - y_arr)))
    goal = int(np.argmin(np.abs(F - config.branch_bar.y_value)))
    if goal not in permutation_orbit([p for _, p in action.generators], start):
        raise NoChainFound("no chain found (K(S) not bounded by this search): "
                           "target branch lies in a different monodromy orbit")
    word = _word(action, start, goal)
    rng = np.random.default_rng([int(seed), 0xC4A1])
    variants = [(0.6, 0.9)] + [(float(rng.uniform(0.5, 1.0)), float(rng.uniform(0.6, 0.95))) for _ in range(3)]
    routes = []
    if not word and abs(x0 - c0) < 0.999 * R0:
        routes.append((np.array([c0]), 0.6))
    for step_frac, shrink in variants:
        route = [direct]
        for g, ccw in word:
            route.append(_planner_loop(sig, x0, action.generators[g][0], ccw, shrink)[1:])
        routes.append((np.concatenate(route), step_frac))
    best = None
    for route, step_frac in routes:
        try:
            chain = _build_chain(Q, config, c0, R0, route, step_frac)
            report = validate_chain(Q, chain, config.branch_hat, config.branch_bar)
            if not report.valid:
                continue
            K = chain_constant(chain, d, d1, optimize, seed, n_samples)
        except (TrackingError, SingularityError, ValueError):
            continue
        if best is None or K.log_K < best[1].log_K:
            best = (chain, K)
    if best is None:
        raise NoChainFound("no chain found (K(S) not bounded by this search)")
    return best


# --------------------------------------------------------------------------
# Remez certificates along the curve
# --------------------------------------------------------------------------

def _branch_max(g, disk: Disk) -> float:
    return max_modulus_boundary(g, disk, 1024).max_value


def local_bound(d: int, d1: int, R: float, R1: float, Rp: float, c: float) -> float:
    return sigma(R1 / R, Rp / R) ** (d * d1) * (6 * E * R / c) ** d1


def verify_local_remez(Q: BivariatePolynomial, P: BivariatePolynomial, x0: complex, Z, R1: float,
                       Rp: float, germ: Optional[BranchGerm] = None, d1: Optional[int] = None) -> RemezCertificate:
    """max over D_{R'}(x0) of |g| against the local bound times max over Z."""
    x0 = complex(x0)
    sig = singular_points(Q)
    R = sig.distance(x0)
    if not math.isfinite(R):
        raise ValueError("curve has no singular points; the local radius is unbounded")
    if not (0 < R1 < R and 0 < Rp < R):
        raise ValueError(f"need 0 < R1, R' < R = {R:.6g}")
    pts = _points(Z)
    if np.any(np.abs(pts - x0) >= R1):
        raise ValueError("Z must lie in D_{R1}(x0)")
    d1 = P.total_degree if d1 is None else int(d1)
    d = Q.deg_y
    if d1 >= 1 and pts.size <= d1:
        raise ValueError("c_{d1}(Z) vanishes: need more than d1 points")
    if germ is None:
        F = fiber(Q, x0)
        germ = BranchGerm(x0, complex(F[-1]), Q, F.size - 1)
    g = branch_restriction(Q, germ, P, Disk(x0, max(R1, Rp)))
    low = float(np.max(np.abs(g(pts))))
    top = _branch_max(g, Disk(x0, Rp))
    if d1 == 0:
        c, bound = math.nan, 1.0
    else:
        c = cd_lower_bound(pts, d1)[0]
        bound = local_bound(d, d1, R, R1, Rp, c)
    ratio = top / low if low > 0 else math.inf
    return RemezCertificate(d1, c, bound, ratio, P)


def _points(Z) -> np.ndarray:
    return Z.unique() if isinstance(Z, PointSet) else np.unique(np.asarray(Z, dtype=complex).ravel())


@dataclass
class GlobalCertificate:
    bound: float
    log_bound: float
    observed_ratio: float
    holds: bool
    K: ChainConstantReport
    c: float
    R0: float
    g_bar_x0: complex
    max_Z: float
    link_checks: list
    composition_error: float

    @property
    def slack(self) -> float:
        return self.bound / self.observed_ratio if self.observed_ratio > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "log10_bound": self.log_bound / math.log(10),
            "observed_ratio": self.observed_ratio,
            "holds": self.holds,
            "slack": self.slack,
            "c": self.c,
            "R0": self.R0,
            "g_bar_x0": [self.g_bar_x0.real, self.g_bar_x0.imag],
            "max_Z": self.max_Z,
            "link_checks": self.link_checks,
            "composition_error": self.composition_error,
            "K": self.K.to_dict(),
        }


def verify_global_remez(config: GlobalConfiguration, P: BivariatePolynomial, chain: Chain,
                        d1: Optional[int] = None, seed: int = 0, check_links: bool = True,
                        n_samples: int = LENS_SAMPLES) -> GlobalCertificate:
    """|g_bar(x0)| against K (6e R0 / c)^d1 max over Z of |g_hat|."""
    Q = config.curve
    d = Q.deg_y
    d1 = config.poly_degree_d1 if d1 is None else int(d1)
    rep = validate_chain(Q, chain, config.branch_hat, config.branch_bar)
    if not rep.valid:
        raise ValueError(f"chain is not valid: {rep.failures}")
    pts = config.Z.unique()
    if pts.size <= d1:
        raise ValueError("c_{d1}(Z) vanishes: need more than d1 points")
    links = chain.links
    K = chain_constant(chain, d, d1, False, seed, n_samples)
    c = cd_lower_bound(pts, d1)[0]
    R0 = links[0].disk.radius
    first = math.log(6 * E * R0 / c) * d1
    log_bound = K.log_K + first
    maps = [branch_restriction(Q, l.germ, P, Disk(l.center, l.disk.radius * 0.999)) for l in links]
    max_Z = float(np.max(np.abs(maps[0](pts))))
    y_bar = transport(Q, links[-1].germ, complex(config.x0))
    g_bar = complex(P(complex(config.x0), y_bar))
    ratio = abs(g_bar) / max_Z if max_Z > 0 else math.inf
    holds = bool(math.log(max(ratio, 1e-300)) <= log_bound + math.log1p(REL_HOLD)) if ratio > 0 else True
    checks = []
    link_logs = []
    if check_links:
        lens = _LensCache(d1, n_samples, seed)
        for j, l in enumerate(links):
            top = _branch_max(maps[j], l.Dp)
            if j == 0:
                low = max_Z
                lf = K.log_factors[0] + first
            else:
                prev = links[j - 1]
                sample = lens_sample(l.D1, prev.Dp, n_samples, seed)
                low = float(np.max(np.abs(maps[j](sample))))
                lf = K.log_factors[j]
            link_logs.append(lf)
            r = top / low if low > 0 else math.inf
            checks.append({"index": j, "observed_ratio": r, "log10_factor": lf / math.log(10),
                           "holds": bool(math.log(max(r, 1e-300)) <= lf + math.log1p(REL_HOLD))})
        err = abs(sum(link_logs) - log_bound)
    else:
        err = 0.0
    return GlobalCertificate(math.exp(log_bound) if log_bound < 709 else math.inf, log_bound, ratio,
                             holds, K, c, R0, g_bar, max_Z, checks, err)
