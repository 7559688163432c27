"""Hot numeric kernels.

Every kernel exists in up to two forms:

* ``<name>_nb`` -- explicit loops, compiled with numba when available;
* ``<name>_np`` -- vectorized numpy, for the kernels whose structure allows it.

The unsuffixed public name is bound to the compiled loop when numba is
enabled and to the numpy twin otherwise (``REMEZKIT_DISABLE_NUMBA=1``).
Branching kernels (set-cover search, Welzl, greedy sweeps) have no
vectorized form; with numba disabled they run the same loop body under the
interpreter.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ._accel import HAVE_NUMBA, jit

REL_TOL = 1e-12


# --------------------------------------------------------------------------
# minimal-enclosing-radius table over subsets
# --------------------------------------------------------------------------

@jit
def subset_radius_table_nb(cover_masks, radii, n):
    size = 1 << n
    table = np.full(size, np.inf)
    table[0] = 0.0
    for c in range(cover_masks.shape[0]):
        m = cover_masks[c]
        if radii[c] < table[m]:
            table[m] = radii[c]
    for i in range(n):
        bit = 1 << i
        for mask in range(size):
            if mask & bit == 0:
                v = table[mask | bit]
                if v < table[mask]:
                    table[mask] = v
    return table


def subset_radius_table_np(cover_masks, radii, n):
    size = 1 << n
    table = np.full(size, np.inf)
    np.minimum.at(table, cover_masks, radii)
    table[0] = 0.0
    allm = np.arange(size, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        idx = allm[(allm & bit) == 0]
        table[idx] = np.minimum(table[idx], table[idx | bit])
    return table


# --------------------------------------------------------------------------
# partition dynamic program: min over partitions into <= d blocks of
# (sum | max) of block values
# --------------------------------------------------------------------------

@jit
def partition_dp_nb(table, n, d, minimax):
    size = 1 << n
    f = np.full((d + 1, size), np.inf)
    f[0, 0] = 0.0
    for k in range(1, d + 1):
        f[k, 0] = 0.0
        for mask in range(1, size):
            best = f[k - 1, mask]
            low = mask & (-mask)
            rest = mask ^ low
            s = rest
            while True:
                sub = s | low
                prev = f[k - 1, mask ^ sub]
                if prev < np.inf:
                    if minimax:
                        v = table[sub] if table[sub] > prev else prev
                    else:
                        v = table[sub] + prev
                    if v < best:
                        best = v
                if s == 0:
                    break
                s = (s - 1) & rest
            f[k, mask] = best
    return f


@lru_cache(maxsize=32)
def _anchored_submask_pairs(n):
    """All (mask, sub) with sub a submask of mask containing its lowest bit."""
    trits = np.arange(3 ** n, dtype=np.int64)
    mask = np.zeros_like(trits)
    sub = np.zeros_like(trits)
    t = trits.copy()
    for i in range(n):
        digit = t % 3
        t //= 3
        mask |= np.where(digit > 0, 1 << i, 0)
        sub |= np.where(digit == 2, 1 << i, 0)
    low = mask & (-mask)
    keep = (mask != 0) & ((sub & low) != 0)
    return mask[keep], sub[keep]


def partition_dp_np(table, n, d, minimax):
    size = 1 << n
    masks, subs = _anchored_submask_pairs(n)
    f = np.full((d + 1, size), np.inf)
    f[0, 0] = 0.0
    tsub = table[subs]
    rest = masks ^ subs
    for k in range(1, d + 1):
        prev = f[k - 1]
        cand = np.maximum(tsub, prev[rest]) if minimax else tsub + prev[rest]
        cur = prev.copy()
        np.minimum.at(cur, masks, cand)
        cur[0] = 0.0
        f[k] = cur
    return f


# --------------------------------------------------------------------------
# exact minimum set cover by branch and bound (bitmask universe, n <= 62)
# --------------------------------------------------------------------------

@jit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@jit
def _pick_point(remaining, ptr):
    # branch on the uncovered point with the fewest candidate disks
    pick = -1
    pick_count = 1 << 30
    r = remaining
    while r:
        low = r & (-r)
        p = 0
        while (1 << p) != low:
            p += 1
        cnt = ptr[p + 1] - ptr[p]
        if cnt < pick_count:
            pick_count = cnt
            pick = p
        r ^= low
    return pick


@jit
def min_set_cover_nb(masks, n, upper):
    """Smallest number of ``masks`` whose union is the full n-bit set.

    ``upper`` is any feasible count (e.g. greedy); returns it if not beaten.
    Depth-first branch and bound with an explicit stack.
    """
    full = (1 << n) - 1
    if n == 0:
        return 0
    C = masks.shape[0]
    sizes = np.zeros(C, dtype=np.int64)
    counts = np.zeros(n + 1, dtype=np.int64)
    maxsize = 1
    for c in range(C):
        sizes[c] = _popcount(masks[c])
        if sizes[c] > maxsize:
            maxsize = sizes[c]
        for p in range(n):
            if masks[c] & (1 << p):
                counts[p + 1] += 1
    ptr = np.cumsum(counts)
    cands = np.empty(ptr[n], dtype=np.int64)
    fill = ptr[:-1].copy()
    # larger disks first so good incumbents appear early
    order = np.argsort(-sizes)
    for oc in range(C):
        c = order[oc]
        for p in range(n):
            if masks[c] & (1 << p):
                cands[fill[p]] = c
                fill[p] += 1

    best = upper
    cov = np.zeros(n + 2, dtype=np.int64)
    pos = np.zeros(n + 2, dtype=np.int64)
    stop = np.zeros(n + 2, dtype=np.int64)
    depth = 0
    pk = _pick_point(full, ptr)
    pos[0] = ptr[pk]
    stop[0] = ptr[pk + 1]
    while depth >= 0:
        if pos[depth] >= stop[depth]:
            depth -= 1
            continue
        c = cands[pos[depth]]
        pos[depth] += 1
        newcov = cov[depth] | masks[c]
        used = depth + 1
        if newcov == full:
            if used < best:
                best = used
            continue
        remaining = full & ~newcov
        lb = (_popcount(remaining) + maxsize - 1) // maxsize
        if used + lb >= best:
            continue
        depth += 1
        cov[depth] = newcov
        pk = _pick_point(remaining, ptr)
        pos[depth] = ptr[pk]
        stop[depth] = ptr[pk + 1]
    return best


min_set_cover = min_set_cover_nb


# --------------------------------------------------------------------------
# Welzl minimal enclosing circle (iterative, move-free Nayuki variant)
# --------------------------------------------------------------------------

@jit
def _inside(cx, cy, r, px, py):
    return math.hypot(px - cx, py - cy) <= r * (1.0 + REL_TOL) + 1e-300


@jit
def _circumcircle(ax, ay, bx, by, qx, qy):
    ox = (min(ax, bx, qx) + max(ax, bx, qx)) / 2.0
    oy = (min(ay, by, qy) + max(ay, by, qy)) / 2.0
    ax -= ox
    ay -= oy
    bx -= ox
    by -= oy
    qx -= ox
    qy -= oy
    dd = (ax * (by - qy) + bx * (qy - ay) + qx * (ay - by)) * 2.0
    if dd == 0.0:
        return 0.0, 0.0, -1.0
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    q2 = qx * qx + qy * qy
    x = (a2 * (by - qy) + b2 * (qy - ay) + q2 * (ay - by)) / dd
    y = (a2 * (qx - bx) + b2 * (ax - qx) + q2 * (bx - ax)) / dd
    r = max(math.hypot(x - ax, y - ay), math.hypot(x - bx, y - by), math.hypot(x - qx, y - qy))
    return ox + x, oy + y, r


@jit
def _cross(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


@jit
def _circle_two(xs, ys, end, px, py, qx, qy):
    cx = (px + qx) / 2.0
    cy = (py + qy) / 2.0
    cr = max(math.hypot(cx - px, cy - py), math.hypot(cx - qx, cy - qy))
    lx = ly = 0.0
    lr = -1.0
    rx = ry = 0.0
    rr = -1.0
    for i in range(end):
        sx = xs[i]
        sy = ys[i]
        if _inside(cx, cy, cr, sx, sy):
            continue
        cr_ = _cross(px, py, qx, qy, sx, sy)
        ux, uy, ur = _circumcircle(px, py, qx, qy, sx, sy)
        if ur < 0.0:
            continue
        if cr_ > 0.0 and (lr < 0.0 or _cross(px, py, qx, qy, ux, uy) > _cross(px, py, qx, qy, lx, ly)):
            lx, ly, lr = ux, uy, ur
        elif cr_ < 0.0 and (rr < 0.0 or _cross(px, py, qx, qy, ux, uy) < _cross(px, py, qx, qy, rx, ry)):
            rx, ry, rr = ux, uy, ur
    if lr < 0.0 and rr < 0.0:
        return cx, cy, cr
    if lr < 0.0:
        return rx, ry, rr
    if rr < 0.0:
        return lx, ly, lr
    if lr <= rr:
        return lx, ly, lr
    return rx, ry, rr


@jit
def _circle_one(xs, ys, end, px, py):
    cx, cy, cr = px, py, 0.0
    for i in range(end):
        qx = xs[i]
        qy = ys[i]
        if not _inside(cx, cy, cr, qx, qy):
            if cr == 0.0:
                cx = (px + qx) / 2.0
                cy = (py + qy) / 2.0
                cr = max(math.hypot(cx - px, cy - py), math.hypot(cx - qx, cy - qy))
            else:
                cx, cy, cr = _circle_two(xs, ys, i + 1, px, py, qx, qy)
    return cx, cy, cr


@jit
def welzl_nb(xs, ys):
    """Smallest enclosing circle of points in the given (pre-shuffled) order."""
    cx = cy = 0.0
    cr = -1.0
    for i in range(xs.shape[0]):
        if cr < 0.0 or not _inside(cx, cy, cr, xs[i], ys[i]):
            cx, cy, cr = _circle_one(xs, ys, i + 1, xs[i], ys[i])
    return cx, cy, cr


welzl = welzl_nb


@jit
def group_radius_table_nb(xs, ys, offsets, g):
    """Enclosing radius of every union of point groups.

    Group k owns ``xs[offsets[k]:offsets[k + 1]]``.
    """
    size = 1 << g
    table = np.zeros(size)
    bx = np.empty(xs.shape[0])
    by = np.empty(xs.shape[0])
    for mask in range(1, size):
        m = 0
        for k in range(g):
            if mask >> k & 1:
                for i in range(offsets[k], offsets[k + 1]):
                    bx[m] = xs[i]
                    by[m] = ys[i]
                    m += 1
        table[mask] = welzl_nb(bx[:m], by[:m])[2]
    return table


def group_radius_table_np(xs, ys, offsets, g):
    size = 1 << g
    table = np.zeros(size)
    groups = [np.arange(offsets[k], offsets[k + 1]) for k in range(g)]
    f = welzl_nb.py_func
    for mask in range(1, size):
        idx = np.concatenate([groups[k] for k in range(g) if mask >> k & 1])
        table[mask] = f(xs[idx], ys[idx])[2]
    return table


# --------------------------------------------------------------------------
# 1-D greedy interval sweeps
# --------------------------------------------------------------------------

@jit
def sweep_1d_nb(t_sorted, eps):
    """Minimal number of closed radius-eps intervals covering sorted reals."""
    n = t_sorted.shape[0]
    if n == 0:
        return 0
    width = 2.0 * eps
    count = 0
    i = 0
    while i < n:
        count += 1
        right = t_sorted[i] + width
        right += REL_TOL * (abs(right) + width)
        while i < n and t_sorted[i] <= right:
            i += 1
    return count


sweep_1d = sweep_1d_nb


@jit
def zr_count_nb(r, eps, cap):
    """Covering number of {k^-r : k >= 1} by closed radius-eps disks.

    Greedy from the right end; stops once the count exceeds ``cap``.
    """
    a = 1.0
    count = 0
    width = 2.0 * eps
    inv_r = -1.0 / r
    while True:
        count += 1
        if count > cap:
            return count
        left = a - width
        if left <= 0.0:
            return count
        if left <= width:
            # every remaining point lies in (0, left): one more interval
            count += 1
            return count
        kn = math.floor(left ** inv_r) + 1.0
        while kn > 1.0 and (kn - 1.0) ** (-r) < left:
            kn -= 1.0
        while kn ** (-r) >= left:
            kn += 1.0
        a = kn ** (-r)


@jit
def zr_min_radii_nb(r, ks):
    """For each k, the least eps with covering number <= k (bisection)."""
    out = np.empty(ks.shape[0])
    for j in range(ks.shape[0]):
        k = ks[j]
        hi = 0.5
        lo = hi
        while zr_count_nb(r, lo, k) <= k:
            lo *= 0.5
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if zr_count_nb(r, mid, k) <= k:
                hi = mid
            else:
                lo = mid
        out[j] = hi
    return out


def zr_count_np(r, eps, cap):
    """Vectorized :func:`zr_count_nb` over an array of radii."""
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    a = np.ones_like(eps)
    count = np.zeros(eps.shape, dtype=np.int64)
    active = np.ones(eps.shape, dtype=bool)
    cap = np.broadcast_to(np.asarray(cap, dtype=np.int64), eps.shape)
    while active.any():
        count[active] += 1
        left = a - 2.0 * eps
        last = active & (left > 0.0) & (left <= 2.0 * eps) & (count <= cap)
        count[last] += 1
        done = active & ((left <= 2.0 * eps) | (count > cap))
        active &= ~done
        if not active.any():
            break
        la = left[active]
        kn = np.floor(la ** (-1.0 / r)) + 1.0
        for _ in range(3):
            back = (kn > 1.0) & ((kn - 1.0) ** (-r) < la)
            kn = np.where(back, kn - 1.0, kn)
        for _ in range(3):
            fwd = kn ** (-r) >= la
            kn = np.where(fwd, kn + 1.0, kn)
        a[active] = kn ** (-r)
    return count


def zr_min_radii_np(r, ks):
    ks = np.asarray(ks, dtype=np.int64)
    hi = np.full(ks.shape, 0.5)
    lo = hi.copy()
    need = zr_count_np(r, lo, ks) <= ks
    while need.any():
        lo[need] *= 0.5
        need = zr_count_np(r, lo, ks) <= ks
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        ok = zr_count_np(r, mid, ks) <= ks
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    return hi


# --------------------------------------------------------------------------
# batched Aberth-Ehrlich iteration
# --------------------------------------------------------------------------

@jit
def aberth_batch_nb(coeffs, z0, maxiter, tol):
    """Refine initial root guesses for a batch of polynomials.

    ``coeffs[b]`` holds ascending coefficients with nonzero last entry.
    Gauss-Seidel sweep order.  Returns (roots, converged-flags).
    """
    B, m = z0.shape
    z = z0.copy()
    ok = np.zeros(B, dtype=np.bool_)
    for b in range(B):
        lead = coeffs[b, m]
        for it in range(maxiter):
            worst = 0.0
            for k in range(m):
                zk = z[b, k]
                p = coeffs[b, m] / lead
                dp = 0.0 + 0.0j
                for i in range(m - 1, -1, -1):
                    dp = dp * zk + p
                    p = p * zk + coeffs[b, i] / lead
                if p == 0:
                    continue
                if dp == 0:
                    w = 1e-3 * (1.0 + abs(zk))
                else:
                    ratio = p / dp
                    s = 0.0 + 0.0j
                    for j in range(m):
                        if j != k:
                            diff = zk - z[b, j]
                            if diff != 0:
                                s += 1.0 / diff
                    w = ratio / (1.0 - ratio * s)
                z[b, k] = zk - w
                step = abs(w) / (1.0 + abs(zk))
                if step > worst:
                    worst = step
            if worst <= tol:
                ok[b] = True
                break
    return z, ok


def aberth_batch_np(coeffs, z0, maxiter, tol):
    """Jacobi-order twin of :func:`aberth_batch_nb`, vectorized over the batch."""
    coeffs = np.asarray(coeffs, dtype=complex)
    z = np.array(z0, dtype=complex, copy=True)
    B, m = z.shape
    mon = coeffs / coeffs[:, m:m + 1]
    ok = np.zeros(B, dtype=bool)
    active = np.ones(B, dtype=bool)
    eye = np.eye(m, dtype=bool)
    for _ in range(maxiter):
        if not active.any():
            break
        za = z[active]
        ca = mon[active]
        p = np.ones_like(za)
        dp = np.zeros_like(za)
        for i in range(m - 1, -1, -1):
            dp = dp * za + p
            p = p * za + ca[:, i:i + 1]
        diff = za[:, :, None] - za[:, None, :]
        diff[:, eye] = 1.0
        inv = np.where(diff == 0, 0.0, 1.0 / np.where(diff == 0, 1.0, diff))
        inv[:, eye] = 0.0
        s = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        w = np.where(p == 0, 0.0, w)
        w = np.where((dp == 0) & (p != 0), 1e-3 * (1.0 + np.abs(za)), w)
        z[active] = za - w
        worst = np.max(np.abs(w) / (1.0 + np.abs(za)), axis=1)
        conv = worst <= tol
        idx = np.flatnonzero(active)
        ok[idx[conv]] = True
        active[idx[conv]] = False
    return z, ok


if HAVE_NUMBA:
    subset_radius_table = subset_radius_table_nb
    partition_dp = partition_dp_nb
    zr_min_radii = zr_min_radii_nb
    aberth_batch = aberth_batch_nb
    group_radius_table = group_radius_table_nb
else:
    subset_radius_table = subset_radius_table_np
    partition_dp = partition_dp_np
    zr_min_radii = zr_min_radii_np
    aberth_batch = aberth_batch_np
    group_radius_table = group_radius_table_np
