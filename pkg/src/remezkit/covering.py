"""Covering invariants of finite planar point sets.

Points are complex numbers.  Disks are closed.  All invariants are computed
on the exactly-deduplicated point set.

Exact computations:

* ``c_d`` (minimal sum of radii of d covering disks) for up to
  ``EXACT_CD_LIMIT`` points, through a table of minimal enclosing radii of
  every subset followed by a partition dynamic program;
* covering numbers ``M(eps, Z)`` for up to ``EXACT_COVER_LIMIT`` points by
  branch and bound over normalized candidate disks, and for collinear input
  of any size by the 1-D interval sweep.

Beyond those sizes the results are upper bounds and are flagged as such.
"""
from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import kernels

log = logging.getLogger(__name__)

EXACT_CD_LIMIT = 12
EXACT_COVER_LIMIT = 20
COLLINEAR_CANDIDATE_LIMIT = 2000
CONTAIN_SLACK = 1e-12
GROUPS = 12


# --------------------------------------------------------------------------
# domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"disk radius must be nonnegative, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, z, slack: float = CONTAIN_SLACK):
        z = np.asarray(z)
        return np.abs(z - self.center) <= self.radius + slack * max(1.0, self.radius)

    def boundary(self, n: int) -> np.ndarray:
        theta = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)

    def to_dict(self) -> dict:
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}

    @classmethod
    def from_dict(cls, obj) -> "Disk":
        re, im = obj["center"]
        return cls(complex(re, im), float(obj["radius"]))


@dataclass
class PointSet:
    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if not np.all(np.isfinite(pts)):
            raise ValueError("point set contains non-finite coordinates")
        self.points = pts

    def __len__(self) -> int:
        return self.points.size

    def unique(self) -> np.ndarray:
        return np.unique(self.points)

    def scaled(self, t: float) -> "PointSet":
        return PointSet(self.points * t, self.label)

    def to_dict(self) -> dict:
        return {"points": [[z.real, z.imag] for z in self.points], "label": self.label}

    @classmethod
    def from_dict(cls, obj) -> "PointSet":
        if "points" not in obj:
            raise ValueError("point set JSON needs a 'points' field")
        pts = []
        for p in obj["points"]:
            if len(p) != 2:
                raise ValueError(f"point must be [re, im], got {p!r}")
            pts.append(complex(float(p[0]), float(p[1])))
        return cls(np.array(pts, dtype=complex), str(obj.get("label", "")))


@dataclass
class Covering:
    disks: list
    total_radius: float = field(default=float("nan"))

    def __post_init__(self):
        self.total_radius = float(sum(d.radius for d in self.disks))

    def covers(self, points, slack: float = CONTAIN_SLACK) -> bool:
        pts = np.asarray(points, dtype=complex).ravel()
        if pts.size == 0:
            return True
        if not self.disks:
            return False
        ok = np.zeros(pts.size, dtype=bool)
        for dk in self.disks:
            ok |= dk.contains(pts, slack)
        return bool(ok.all())

    def to_dict(self) -> dict:
        return {"disks": [d.to_dict() for d in self.disks], "total_radius": self.total_radius}


class CdResult(NamedTuple):
    value: float
    covering: Covering
    exact: bool


class CoverCount(NamedTuple):
    count: int
    exact: bool


@dataclass
class InvariantReport:
    d: int
    c_d: float
    c_d_is_exact: bool
    rho_d: float
    omega_cd: float
    omega_d: float
    epsilon0: float
    witness_covering: Covering
    mu2: Optional[float] = None
    covering_numbers_exact: bool = True

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "c_d": self.c_d,
            "c_d_is_exact": self.c_d_is_exact,
            "rho_d": self.rho_d,
            "omega_cd": self.omega_cd,
            "omega_d": self.omega_d,
            "epsilon0": self.epsilon0,
            "witness_covering": self.witness_covering.to_dict(),
            "mu2": self.mu2,
            "mu2_lower_bound": None if self.mu2 is None else measure_lower_bound(self.mu2),
            "covering_numbers_exact": self.covering_numbers_exact,
        }


def _as_points(Z) -> np.ndarray:
    """Deduplicated complex array from a PointSet or any iterable of numbers."""
    if isinstance(Z, PointSet):
        return Z.unique()
    return np.unique(np.asarray(Z, dtype=complex).ravel())


def _scale(pts: np.ndarray) -> float:
    if pts.size < 2:
        return 1.0
    s = float(np.max(np.abs(pts - pts.mean())))
    return s if s > 0 else 1.0


# --------------------------------------------------------------------------
# minimal enclosing disks
# --------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _shuffle(n: int) -> np.ndarray:
    return np.random.default_rng(n).permutation(n)


def _meb(pts: np.ndarray) -> tuple:
    """(center, radius) of the smallest closed disk containing ``pts``."""
    n = pts.size
    if n == 1:
        return complex(pts[0]), 0.0
    if n > 64:
        pts = _hull(pts)
        n = pts.size
    origin = pts.mean()
    q = pts - origin
    if n > 3:
        q = q[_shuffle(n)]
    cx, cy, r = kernels.welzl(np.ascontiguousarray(q.real), np.ascontiguousarray(q.imag))
    c = complex(cx, cy)
    # close the tiny gap left by the relative inside-test
    r = max(r, float(np.max(np.abs(q - c))))
    return c + origin, r


def min_enclosing_disk(points) -> Disk:
    pts = np.asarray(points.points if isinstance(points, PointSet) else points, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("empty set")
    c, r = _meb(np.unique(pts))
    return Disk(c, r)


def _triangle_meb(a, b, c):
    """Vectorized minimal enclosing circles of triangles (a, b, c)."""
    ab, bc, ca = np.abs(a - b), np.abs(b - c), np.abs(c - a)
    # default: diameter circle on the longest side
    longest = np.argmax(np.stack([ab, bc, ca]), axis=0)
    p = np.choose(longest, [a, b, c])
    q = np.choose(longest, [b, c, a])
    center = (p + q) / 2
    radius = np.abs(p - q) / 2
    cc, cr, ok = _circumcircles(a, b, c)
    ab2, bc2, ca2 = ab ** 2, bc ** 2, ca ** 2
    acute = ok & (ab2 + bc2 > ca2) & (bc2 + ca2 > ab2) & (ca2 + ab2 > bc2)
    center = np.where(acute, cc, center)
    radius = np.where(acute, cr, radius)
    return center, radius


def _circumcircles(a, b, c):
    bx, by = (b - a).real, (b - a).imag
    cx, cy = (c - a).real, (c - a).imag
    dd = 2.0 * (bx * cy - by * cx)
    safe = np.where(dd == 0, 1.0, dd)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    # near-collinear triples overflow here; ok masks them out below
    with np.errstate(over="ignore", invalid="ignore"):
        ux = (cy * b2 - by * c2) / safe
        uy = (bx * c2 - cx * b2) / safe
        center = a + ux + 1j * uy
        radius = np.maximum.reduce([np.abs(center - a), np.abs(center - b), np.abs(center - c)])
    scale = np.maximum(np.abs(b - a), np.abs(c - a))
    ok = np.abs(dd) > 1e-14 * np.maximum(scale, 1e-300) ** 2
    return center, radius, ok


def _candidate_disks(pts: np.ndarray):
    """Centers/radii of minimal enclosing disks of all 1-, 2- and 3-subsets."""
    n = pts.size
    centers = [pts]
    radii = [np.zeros(n)]
    if n >= 2:
        i, j = np.triu_indices(n, 1)
        centers.append((pts[i] + pts[j]) / 2)
        radii.append(np.abs(pts[i] - pts[j]) / 2)
    if n >= 3:
        tri = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
        c, r = _triangle_meb(pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]])
        centers.append(c)
        radii.append(r)
    return np.concatenate(centers), np.concatenate(radii)


def _masks(pts: np.ndarray, centers: np.ndarray, radius, scale: float) -> np.ndarray:
    radius = np.broadcast_to(np.asarray(radius, dtype=float), centers.shape)
    dist = np.abs(pts[None, :] - centers[:, None])
    inside = dist <= radius[:, None] + CONTAIN_SLACK * (radius[:, None] + scale)
    weights = (np.int64(1) << np.arange(pts.size, dtype=np.int64))
    return (inside.astype(np.int64) * weights[None, :]).sum(axis=1)


def subset_radius_table(pts: np.ndarray) -> np.ndarray:
    """table[mask] = minimal enclosing radius of the subset with that bitmask."""
    n = pts.size
    if n > 20:
        raise ValueError("subset table limited to 20 points")
    centers, radii = _candidate_disks(pts)
    masks = _masks(pts, centers, radii, _scale(pts))
    return kernels.subset_radius_table(masks, radii, n)


# --------------------------------------------------------------------------
# c_d
# --------------------------------------------------------------------------

def _bits(mask: int, n: int) -> list:
    return [i for i in range(n) if mask >> i & 1]


def _backtrack(table, f, n, k) -> list:
    """Blocks (bitmasks) of an optimal partition from the DP tables."""
    blocks = []
    mask = (1 << n) - 1
    while mask:
        if k > 1 and f[k - 1, mask] <= f[k, mask]:
            k -= 1
            continue
        low = mask & -mask
        rest = mask ^ low
        best_sub, best_gap = None, math.inf
        s = rest
        while True:
            sub = s | low
            gap = abs(table[sub] + f[k - 1, mask ^ sub] - f[k, mask])
            if gap < best_gap:
                best_sub, best_gap = sub, gap
            if s == 0:
                break
            s = (s - 1) & rest
        blocks.append(best_sub)
        mask ^= best_sub
        k -= 1
    return blocks


def _cd_exact(pts: np.ndarray, d: int) -> CdResult:
    n = pts.size
    table = subset_radius_table(pts)
    k = min(d, n)
    f = kernels.partition_dp(table, n, k, False)
    value = float(f[k, (1 << n) - 1])
    disks = []
    for b in _backtrack(table, f, n, k):
        c, r = _meb(pts[_bits(b, n)])
        disks.append(Disk(c, r))
    return CdResult(value, Covering(disks), True)


def _hull(pts: np.ndarray) -> np.ndarray:
    if pts.size <= 4:
        return pts
    try:
        hull = ConvexHull(np.column_stack([pts.real, pts.imag]))
    except QhullError:
        # degenerate (collinear) group: its two extreme points suffice
        i = int(np.argmax(np.abs(pts - pts[0])))
        j = int(np.argmax(np.abs(pts - pts[i])))
        return pts[[i, j]]
    return pts[hull.vertices]


def _grouped_labels(pts: np.ndarray, d: int, labels: np.ndarray) -> np.ndarray:
    """Optimal merge of the given groups into at most d blocks."""
    g = int(labels.max()) + 1
    origin = pts.mean()
    q = pts - origin
    chunks, offsets = [], [0]
    rng = np.random.default_rng(g)
    for k in range(g):
        h = _hull(q[labels == k])
        h = h[rng.permutation(h.size)]
        chunks.append(h)
        offsets.append(offsets[-1] + h.size)
    allp = np.concatenate(chunks)
    table = kernels.group_radius_table(np.ascontiguousarray(allp.real), np.ascontiguousarray(allp.imag),
                                       np.array(offsets, dtype=np.int64), g)
    k = min(d, g)
    f = kernels.partition_dp(table, g, k, False)
    out = np.empty_like(labels)
    for b_index, block in enumerate(_backtrack(table, f, g, k)):
        for grp in _bits(block, g):
            out[labels == grp] = b_index
    return out


def _labels_cost(pts, labels, memo=None):
    disks = []
    for lab in np.unique(labels):
        idx = np.flatnonzero(labels == lab)
        key = idx.tobytes()
        if memo is not None and key in memo:
            disks.append(memo[key])
            continue
        c, r = _meb(pts[idx])
        disks.append(Disk(c, r))
        if memo is not None:
            memo[key] = disks[-1]
    return disks, sum(dk.radius for dk in disks)


def _relabel(labels):
    _, inv = np.unique(labels, return_inverse=True)
    return inv.astype(np.int64)


def _gonzalez(pts, k):
    centers = [int(np.argmax(np.abs(pts - pts.mean())))]
    dist = np.abs(pts - pts[centers[0]])
    for _ in range(1, k):
        nxt = int(np.argmax(dist))
        centers.append(nxt)
        dist = np.minimum(dist, np.abs(pts - pts[nxt]))
    return np.argmin(np.abs(pts[:, None] - pts[centers][None, :]), axis=1)


def _kmeans(pts, k, rng, iters=15):
    n = pts.size
    idx = [int(rng.integers(n))]
    d2 = np.abs(pts - pts[idx[0]]) ** 2
    for _ in range(1, k):
        tot = d2.sum()
        nxt = int(rng.choice(n, p=d2 / tot)) if tot > 0 else int(rng.integers(n))
        idx.append(nxt)
        d2 = np.minimum(d2, np.abs(pts - pts[nxt]) ** 2)
    cen = pts[idx].copy()
    lab = np.zeros(n, dtype=np.int64)
    for _ in range(iters):
        lab = np.argmin(np.abs(pts[:, None] - cen[None, :]), axis=1)
        for j in range(k):
            sel = lab == j
            if sel.any():
                cen[j] = pts[sel].mean()
    return lab


def _two_split(pts):
    """Split a cluster in two along its farthest pair (2-means)."""
    i = int(np.argmax(np.abs(pts - pts[0])))
    j = int(np.argmax(np.abs(pts - pts[i])))
    cen = np.array([pts[i], pts[j]])
    lab = np.zeros(pts.size, dtype=np.int64)
    for _ in range(10):
        lab = (np.abs(pts - cen[1]) < np.abs(pts - cen[0])).astype(np.int64)
        if lab.all() or not lab.any():
            break
        cen = np.array([pts[lab == 0].mean(), pts[lab == 1].mean()])
    return lab


def _improve(pts, labels, d, max_rounds=40):
    labels = _relabel(labels)
    memo = {}
    disks, total = _labels_cost(pts, labels, memo)
    scale = _scale(pts)
    for _ in range(max_rounds):
        improved = False
        centers = np.array([dk.center for dk in disks])
        radii = np.array([dk.radius for dk in disks])
        # points inside a larger disk move there; radii can only shrink
        inside = np.abs(pts[:, None] - centers[None, :]) <= radii[None, :] + CONTAIN_SLACK * scale
        score = np.where(inside, radii[None, :], -1.0)
        target = np.argmax(score, axis=1)
        moved = np.where(score.max(axis=1) >= 0, target, labels)
        if np.any(moved != labels):
            cand = _relabel(moved)
            cdisks, ctotal = _labels_cost(pts, cand, memo)
            if ctotal < total - 1e-15 * scale or len(cdisks) < len(disks) and ctotal <= total:
                labels, disks, total = cand, cdisks, ctotal
                improved = True
                continue
        # send each point to the disk needing the least growth
        grow = np.abs(pts[:, None] - centers[None, :]) - radii[None, :]
        moved = np.argmin(grow, axis=1)
        if np.any(moved != labels):
            cand = _relabel(moved)
            cdisks, ctotal = _labels_cost(pts, cand, memo)
            if ctotal < total - 1e-15 * scale:
                labels, disks, total = cand, cdisks, ctotal
                improved = True
                continue
        # merge two clusters when one disk is cheaper than both
        k = len(disks)
        best = None
        for a in range(k):
            for b in range(a + 1, k):
                c, r = _meb(pts[(labels == a) | (labels == b)])
                gain = radii[a] + radii[b] - r
                if gain > 1e-15 * scale and (best is None or gain > best[0]):
                    best = (gain, a, b)
        if best is not None:
            _, a, b = best
            cand = _relabel(np.where(labels == b, a, labels))
            labels = cand
            disks, total = _labels_cost(pts, labels, memo)
            improved = True
            continue
        # spend an unused disk on splitting the largest cluster
        if k < d:
            big = int(np.argmax(radii))
            sel = np.flatnonzero(labels == big)
            if sel.size >= 2:
                part = _two_split(pts[sel])
                cand = labels.copy()
                cand[sel[part == 1]] = k
                cdisks, ctotal = _labels_cost(pts, cand, memo)
                if ctotal < total - 1e-15 * scale:
                    labels, disks, total = _relabel(cand), cdisks, ctotal
                    improved = True
                    continue
        # move boundary support points to the cheapest other cluster
        if k >= 2:
            for a in range(k):
                sel = np.flatnonzero(labels == a)
                if sel.size < 2:
                    continue
                dist = np.abs(pts[sel] - centers[a])
                support = sel[dist >= radii[a] * (1 - 1e-9)]
                for p in support[:3]:
                    best_move = None
                    for b in range(k):
                        if b == a:
                            continue
                        cand = labels.copy()
                        cand[p] = b
                        cdisks, ctotal = _labels_cost(pts, cand, memo)
                        if ctotal < total - 1e-15 * scale and (best_move is None or ctotal < best_move[1]):
                            best_move = (cand, ctotal, cdisks)
                    if best_move is not None:
                        labels, total, disks = _relabel(best_move[0]), best_move[1], best_move[2]
                        improved = True
                        break
                if improved:
                    break
        if not improved:
            break
    return labels, disks, total


def _cd_heuristic(pts: np.ndarray, d: int, seed: int = 0, init_labels: Sequence = (), restarts: int = 4) -> CdResult:
    n = pts.size
    kmax = min(d, n)
    rng = np.random.default_rng(seed)
    starts = [np.asarray(lab, dtype=np.int64) for lab in init_labels]
    starts.append(np.zeros(n, dtype=np.int64))
    if n > 100:
        restarts = 0
    for k in range(2, kmax + 1):
        starts.append(_gonzalez(pts, k))
        for _ in range(restarts):
            starts.append(_kmeans(pts, k, rng))
    groups = min(n, GROUPS if n <= 100 else GROUPS - 2)
    base = _kmeans(pts, groups, np.random.default_rng(seed)) if groups < n else np.arange(n)
    starts.append(_grouped_labels(pts, d, _relabel(base)))
    for lab in list(init_labels):
        lab = _relabel(np.asarray(lab, dtype=np.int64))
        if lab.max() + 1 <= groups:
            starts.append(_grouped_labels(pts, d, lab))
    starts = [lab for lab in starts if np.unique(lab).size <= d]
    if n > 100 and len(starts) > 3:
        # large samples: polish only the most promising starts
        costs = [_labels_cost(pts, lab)[1] for lab in starts]
        starts = [starts[i] for i in np.argsort(costs)[:3]]
    best = None
    for lab in starts:
        _, disks, total = _improve(pts, lab, d)
        if best is None or total < best[1]:
            best = (disks, total)
    disks, total = best
    return CdResult(float(total), Covering(disks), False)


def c_d(Z, d: int, mode: str = "auto", *, seed: int = 0, init_labels: Sequence = ()) -> CdResult:
    """Minimal sum of radii of ``d`` closed disks covering ``Z``.

    ``mode``: ``"exact"`` / ``"auto"`` use the partition dynamic program when
    the deduplicated set has at most ``EXACT_CD_LIMIT`` points (beyond that
    they fall back to the heuristic, flagged inexact); ``"heuristic"`` always
    runs seeded assignment plus local moves and returns an upper bound.
    ``init_labels`` optionally seeds the heuristic with extra assignments.
    """
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    d = int(d)
    if mode not in ("exact", "heuristic", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    raw = np.asarray(Z.points if isinstance(Z, PointSet) else Z, dtype=complex).ravel()
    pts, first = np.unique(raw, return_index=True)
    n = pts.size
    if n == 0:
        return CdResult(0.0, Covering([]), True)
    if n <= d:
        return CdResult(0.0, Covering([Disk(z, 0.0) for z in pts]), True)
    if mode != "heuristic" and n <= EXACT_CD_LIMIT:
        return _cd_exact(pts, d)
    if mode == "exact":
        log.warning("c_d: %d points exceeds the exact limit %d; using heuristic", n, EXACT_CD_LIMIT)
    labels = []
    for lab in init_labels:
        lab = np.asarray(lab, dtype=np.int64).ravel()
        if lab.size != raw.size:
            raise ValueError("init_labels must have one entry per input point")
        labels.append(lab[first])
    return _cd_heuristic(pts, d, seed, labels)


def _farthest_subset(pts: np.ndarray, m: int) -> np.ndarray:
    idx = [0]
    dist = np.abs(pts - pts[0])
    for _ in range(1, m):
        nxt = int(np.argmax(dist))
        idx.append(nxt)
        dist = np.minimum(dist, np.abs(pts - pts[nxt]))
    return pts[idx]


def cd_lower_bound(points, d: int, block: int = 40) -> tuple:
    """Certified lower bound on ``c_d`` of a possibly large finite set.

    Exact when the set is small.  Otherwise the points (in the given order)
    are cut into consecutive blocks of ``block`` points; each block
    contributes the exact ``c_d`` of a farthest-point subsample of
    ``EXACT_CD_LIMIT`` points, and the maximum is returned.  Every subsample
    is a subset of the input, so the value never exceeds the true ``c_d``;
    extending the input by appending points never lowers it.

    Returns ``(value, exact)``.
    """
    raw = np.asarray(points.points if isinstance(points, PointSet) else points, dtype=complex).ravel()
    uniq = np.unique(raw)
    if uniq.size <= EXACT_CD_LIMIT:
        return c_d(uniq, d, "exact").value, True
    best = 0.0
    for start in range(0, raw.size, block):
        chunk = np.unique(raw[start:start + block])
        if chunk.size <= d:
            continue
        sub = _farthest_subset(chunk, min(EXACT_CD_LIMIT, chunk.size))
        best = max(best, c_d(sub, d, "exact").value)
    return best, False


# --------------------------------------------------------------------------
# covering numbers
# --------------------------------------------------------------------------

def _collinear_params(pts: np.ndarray):
    """Sorted line parameters if the points are collinear, else None."""
    if pts.size <= 2:
        if pts.size == 2:
            return np.sort(np.array([0.0, abs(pts[1] - pts[0])]))
        return np.zeros(pts.size)
    a = pts[0]
    far = pts[int(np.argmax(np.abs(pts - a)))]
    b = pts[int(np.argmax(np.abs(pts - far)))]
    u = (b - far) / abs(b - far)
    rel = (pts - far) * np.conj(u)
    if np.max(np.abs(rel.imag)) > 1e-12 * _scale(pts):
        return None
    return np.sort(rel.real)


def _greedy_cover(pts: np.ndarray, eps: float, scale: float) -> int:
    uncovered = np.ones(pts.size, dtype=bool)
    count = 0
    slack = CONTAIN_SLACK * (eps + scale)
    while uncovered.any():
        idx = np.flatnonzero(uncovered)
        p = pts[idx[np.argmin(pts[idx].real)]]
        q = pts[idx]
        near = q[np.abs(q - p) <= 2 * eps + slack]
        centers = np.concatenate([[p], (p + near) / 2])
        hits = np.abs(q[None, :] - centers[:, None]) <= eps + slack
        best = int(np.argmax(hits.sum(axis=1)))
        uncovered[idx[hits[best]]] = False
        count += 1
    return count


def _cover_count(pts: np.ndarray, eps: float, line=None) -> CoverCount:
    n = pts.size
    if n <= 1:
        return CoverCount(n, True)
    if line is None:
        line = _collinear_params(pts)
    if line is not None:
        return CoverCount(int(kernels.sweep_1d(line, float(eps))), True)
    scale = _scale(pts)
    if n > EXACT_COVER_LIMIT:
        return CoverCount(_greedy_cover(pts, eps, scale), False)
    centers, radii = _candidate_disks(pts)
    keep = radii <= eps * (1 + CONTAIN_SLACK) + CONTAIN_SLACK * scale
    masks = np.unique(_masks(pts, centers[keep], eps, scale))
    # drop candidates dominated by a superset
    masks = masks[np.argsort(-np.array([bin(int(m)).count("1") for m in masks]))]
    kept = []
    for m in masks:
        if not any((int(m) & ~k) == 0 for k in kept):
            kept.append(int(m))
    masks = np.array(kept, dtype=np.int64)
    upper = _greedy_cover(pts, eps, scale)
    return CoverCount(int(kernels.min_set_cover(masks, n, upper)), True)


def covering_number_certified(Z, eps: float) -> CoverCount:
    """Covering number with an exactness flag (greedy upper bound if False)."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return _cover_count(_as_points(Z), float(eps))


def covering_number(Z, eps: float) -> int:
    """Minimal number of closed radius-``eps`` disks covering ``Z``."""
    return covering_number_certified(Z, eps).count


def _dedup_sorted(vals: np.ndarray) -> np.ndarray:
    vals = np.sort(vals[vals > 0])
    if vals.size == 0:
        return vals
    keep = np.concatenate([[True], np.diff(vals) > 1e-12 * np.maximum(vals[1:], 1e-300)])
    return vals[keep]


def critical_radii(Z) -> np.ndarray:
    """Radii where ``eps -> M(eps, Z)`` can change value, ascending."""
    pts = _as_points(Z)
    if pts.size < 2:
        return np.zeros(0)
    line = _collinear_params(pts)
    if line is not None:
        i, j = np.triu_indices(line.size, 1)
        return _dedup_sorted((line[j] - line[i]) / 2)
    _, radii = _candidate_disks(pts)
    return _dedup_sorted(radii)


# --------------------------------------------------------------------------
# rho_d, omega_cd, omega_d
# --------------------------------------------------------------------------

class _Coverer:
    """Caches geometry for repeated covering-number queries on one set."""

    def __init__(self, pts: np.ndarray):
        self.pts = pts
        self.n = pts.size
        self.line = _collinear_params(pts) if self.n >= 2 else None
        self.exact = self.line is not None or self.n <= EXACT_COVER_LIMIT
        self._cands = None
        self._memo = {}

    def count(self, eps: float) -> int:
        if eps not in self._memo:
            self._memo[eps] = _cover_count(self.pts, eps, self.line).count
        return self._memo[eps]

    def candidates(self):
        if self._cands is None:
            if self.line is not None and self.n > COLLINEAR_CANDIDATE_LIMIT:
                self._cands = None
                return None
            self._cands = critical_radii(self.pts) if self.exact else None
        return self._cands

    def min_radius(self, k: int) -> float:
        """Least eps with M(eps) <= k."""
        if k >= self.n:
            return 0.0
        cands = self.candidates()
        if cands is not None and cands.size:
            lo, hi = 0, cands.size - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if self.count(float(cands[mid])) <= k:
                    hi = mid
                else:
                    lo = mid + 1
            return float(cands[lo])
        hi = _meb(self.pts)[1] * (1 + 1e-12)
        lo = 0.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.count(mid) <= k:
                hi = mid
            else:
                lo = mid
        return hi


def rho_d(Z, d: int) -> tuple:
    """(rho, epsilon0): epsilon0 = least eps admitting a d-disk eps-cover."""
    if d < 1:
        raise ValueError("d must be >= 1")
    pts = _as_points(Z)
    if pts.size <= d:
        return 0.0, 0.0
    eps0 = _Coverer(pts).min_radius(d)
    return d * eps0, eps0


def _omega(cov: _Coverer, d: int, power: float) -> float:
    # sup over eps of eps*(M-d)^power equals max over m > d of
    # (m-d)^power * inf{eps : M(eps) <= m-1}
    best = 0.0
    for m in range(d + 1, cov.n + 1):
        best = max(best, (m - d) ** power * cov.min_radius(m - 1))
    return best


def omega_cd(Z, d: int) -> float:
    """sup over eps of eps * (M(eps, Z) - d)^(1/2), restricted to M > d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    pts = _as_points(Z)
    if pts.size <= d:
        return 0.0
    return _omega(_Coverer(pts), d, 0.5)


def omega_d(Z, d: int) -> float:
    """sup over eps of eps * (M(eps, Z) - d), restricted to M > d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    pts = _as_points(Z)
    if pts.size <= d:
        return 0.0
    return _omega(_Coverer(pts), d, 1.0)


def measure_lower_bound(mu2: float) -> float:
    """Lower bound (mu2/pi)^(1/2) on c_d of a measurable set of area mu2."""
    if mu2 < 0:
        raise ValueError("area must be nonnegative")
    return math.sqrt(mu2 / math.pi)


def invariant_report(Z, d: int, mode: str = "auto", mu2: Optional[float] = None, seed: int = 0) -> InvariantReport:
    pts = _as_points(Z)
    cd = c_d(pts, d, mode, seed=seed)
    if pts.size <= d:
        return InvariantReport(d, 0.0, True, 0.0, 0.0, 0.0, 0.0, cd.covering, mu2)
    cov = _Coverer(pts)
    eps0 = cov.min_radius(d)
    if cov.exact or pts.size <= 60:
        w_cd = _omega(cov, d, 0.5)
        w_d = _omega(cov, d, 1.0)
    else:
        w_cd, w_d = _omega_grid(cov, d, eps0)
    return InvariantReport(
        d=d,
        c_d=cd.value,
        c_d_is_exact=cd.exact,
        rho_d=d * eps0,
        omega_cd=w_cd,
        omega_d=w_d,
        epsilon0=eps0,
        witness_covering=cd.covering,
        mu2=mu2,
        covering_numbers_exact=cov.exact,
    )


def _omega_grid(cov: _Coverer, d: int, eps0: float):
    """Grid estimate of both omegas for large non-collinear sets (greedy M)."""
    diffs = np.abs(cov.pts[:, None] - cov.pts[None, :])
    tiny = diffs[diffs > 0].min() / 2
    grid = np.geomspace(tiny, max(eps0, tiny) * 1.0000001, 120)
    w_cd = w_d = 0.0
    for e in grid:
        m = cov.count(float(e))
        if m > d:
            w_cd = max(w_cd, e * math.sqrt(m - d))
            w_d = max(w_d, e * (m - d))
    return w_cd, w_d
