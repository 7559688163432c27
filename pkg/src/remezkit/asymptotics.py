"""Covering invariants of Z_r = {k^-r : k >= 1} as d grows.

Z_r is infinite but its covering numbers are finite for every eps > 0; the
greedy right-to-left interval sweep computes them exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels


def zr_count(r: float, eps: float, cap: int = 10 ** 9) -> int:
    """M(eps, Z_r), or a value > cap if it exceeds cap."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return int(kernels.zr_count_nb(float(r), float(eps), int(cap)))


def zr_min_radii(r: float, ks: Sequence[int]) -> np.ndarray:
    """Least eps with M(eps, Z_r) <= k for each k."""
    return kernels.zr_min_radii(float(r), np.asarray(ks, dtype=np.int64))


def zr_omega(r: float, d: int, power: float) -> float:
    """max over m > d of (m - d)^power * eps0(m - 1) for Z_r."""
    hi = 3 * d
    while True:
        ms = np.arange(d + 1, hi + 1)
        vals = (ms - d) ** power * zr_min_radii(r, ms - 1)
        k = int(np.argmax(vals))
        if k < ms.size - max(2, ms.size // 10):
            return float(vals[k])
        hi *= 2


def predicted_constants(r: float) -> dict:
    return {
        "omega_d": r ** r / (r + 1) ** (r + 1),
        "omega_cd": (2 * r + 1) ** r / (2 * r + 2) ** (r + 1),
    }


@dataclass
class AsymptoticsResult:
    rows: list        # (r, d, omega_d, omega_cd)
    slopes: dict      # r -> {"omega_d": slope, "omega_cd": slope, ...}

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "slopes": {str(k): v for k, v in self.slopes.items()}}


def loglog_slope(ds, vals) -> float:
    ds = np.asarray(ds, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if ds.size < 2 or np.unique(ds).size < 2:
        raise ValueError("need at least two distinct d values to fit a slope")
    return float(np.polyfit(np.log(ds), np.log(vals), 1)[0])


D_MIN, D_MAX = 4, 512


def check_study(rs: Sequence, ds: Sequence) -> None:
    for r in rs:
        if int(r) != r or r < 1:
            raise ValueError(f"r must be an integer >= 1, got {r}")
    for d in ds:
        if int(d) != d or not D_MIN <= d <= D_MAX:
            raise ValueError(f"d must be an integer in [{D_MIN}, {D_MAX}], got {d}")
    if len(set(ds)) < 2:
        raise ValueError("need at least two distinct d values to fit a slope")


def zr_study(rs: Sequence[int], ds: Sequence[int]) -> AsymptoticsResult:
    check_study(rs, ds)
    rs = [int(r) for r in rs]
    ds = sorted(set(int(d) for d in ds))
    rows, slopes = [], {}
    for r in rs:
        wd = [zr_omega(r, d, 1.0) for d in ds]
        wc = [zr_omega(r, d, 0.5) for d in ds]
        rows.extend((r, d, a, b) for d, a, b in zip(ds, wd, wc))
        pred = predicted_constants(r)
        slopes[r] = {
            "omega_d": loglog_slope(ds, wd),
            "omega_cd": loglog_slope(ds, wc),
            "expected_omega_d": -float(r),
            "expected_omega_cd": -(r + 0.5),
            "predicted_constant_omega_d": pred["omega_d"],
            "predicted_constant_omega_cd": pred["omega_cd"],
            "fitted_constant_omega_d": float(np.exp(np.mean(np.log(wd) + r * np.log(ds)))),
            "fitted_constant_omega_cd": float(np.exp(np.mean(np.log(wc) + (r + 0.5) * np.log(ds)))),
        }
    return AsymptoticsResult(rows, slopes)
