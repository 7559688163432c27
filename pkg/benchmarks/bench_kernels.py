"""Time each hot kernel on its numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both paths run in one process: the numba versions are the compiled
``*_nb`` functions, the numpy versions are the ``*_np`` twins, and kernels
without a vectorized twin run as interpreted Python through ``.py_func``.
Compilation happens in a warm-up call that is not timed.  Outputs of the
two paths are compared so a speedup never hides a disagreement.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from remezkit import kernels
from remezkit._accel import HAVE_NUMBA
from remezkit.covering import _candidate_disks, _masks, _scale, subset_radius_table


def _time(fn, repeat):
    fn()
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _sorted_roots(fn):
    # the two paths may converge to the same roots in a different order
    def run(*args):
        roots, ok = fn(*args)
        return np.sort_complex(roots), ok
    return run


def _cases(rng):
    pts = rng.uniform(-1, 1, 11) + 1j * rng.uniform(-1, 1, 11)
    centers, radii = _candidate_disks(pts)
    masks = _masks(pts, centers, radii, _scale(pts))
    n = pts.size
    table = subset_radius_table(pts)
    big = rng.standard_normal(400) + 1j * rng.standard_normal(400)
    offs = np.linspace(0, 400, 11).astype(np.int64)
    B, m = 64, 6
    coeffs = rng.standard_normal((B, m + 1)) + 1j * rng.standard_normal((B, m + 1))
    z0 = np.tile(0.4 + 0.9j ** np.arange(m), (B, 1)).astype(complex)
    ks = np.arange(8, 400, dtype=np.int64)
    line = np.sort(rng.uniform(0, 1, 5000))

    def pair(nb, alt, *args):
        return (lambda: nb(*args)), (lambda: alt(*args))

    K = kernels
    return {
        "subset_radius_table n=11": pair(K.subset_radius_table_nb, K.subset_radius_table_np, masks, radii, n),
        "partition_dp n=11 d=4": pair(K.partition_dp_nb, K.partition_dp_np, table, n, 4, False),
        "group_radius_table g=10": pair(K.group_radius_table_nb, K.group_radius_table_np,
                                        big.real.copy(), big.imag.copy(), offs, 10),
        "zr_min_radii r=1 k<400": pair(K.zr_min_radii_nb, K.zr_min_radii_np, 1.0, ks),
        "aberth_batch 64 x deg 6": pair(_sorted_roots(K.aberth_batch_nb), _sorted_roots(K.aberth_batch_np),
                                        coeffs, z0, 200, 1e-14),
        "welzl n=400": pair(K.welzl_nb, K.welzl_nb.py_func, big.real.copy(), big.imag.copy()),
        "sweep_1d n=5000": pair(K.sweep_1d_nb, K.sweep_1d_nb.py_func, line, 0.001),
        "min_set_cover n=11": pair(K.min_set_cover_nb, K.min_set_cover_nb.py_func,
                                   _masks(pts, pts, 0.45, _scale(pts)), n, n + 1),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind in "fc":
        return bool(np.allclose(a, b, rtol=1e-9, atol=1e-12, equal_nan=True))
    return bool(np.array_equal(a, b))


def _end_to_end(repeat):
    """c_d and the Z_r study in a fresh interpreter per backend."""
    code = ("import time, numpy as np; from remezkit import c_d; from remezkit.asymptotics import zr_omega;"
            "rng=np.random.default_rng(1); Z=rng.uniform(-1,1,10)+1j*rng.uniform(-1,1,10);"
            "c_d(Z,3); t=time.perf_counter();"
            f"[c_d(Z,3) for _ in range({repeat})]; [zr_omega(1,64,0.5) for _ in range({repeat})];"
            f"print((time.perf_counter()-t)/{repeat})")
    out = {}
    for name, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, REMEZKIT_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[name] = float(res.stdout.strip())
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        sys.exit("numba is disabled; unset REMEZKIT_DISABLE_NUMBA to compare both paths")
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'kernel':28s} {'numba s':>11s} {'numpy s':>11s} {'speedup':>9s}  agree")
    for name, (nb, alt) in _cases(rng).items():
        agree = _same(nb(), alt())
        t_nb, t_alt = _time(nb, args.repeat), _time(alt, args.repeat)
        rows.append({"kernel": name, "numba": t_nb, "numpy": t_alt, "speedup": t_alt / t_nb, "agree": agree})
        print(f"{name:28s} {t_nb:11.3e} {t_alt:11.3e} {t_alt / t_nb:9.1f}  {agree}")
    result = {"kernels": rows}
    if not args.skip_end_to_end:
        e2e = _end_to_end(args.repeat)
        result["end_to_end"] = e2e
        print(f"{'end-to-end c_d + Z_r':28s} {e2e['numba']:11.3e} {e2e['numpy']:11.3e} "
              f"{e2e['numpy'] / e2e['numba']:9.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
