"""The numba kernels and their numpy twins must agree."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import disk_points
from remezkit import kernels as K
from remezkit.covering import _candidate_disks, _masks, _scale, subset_radius_table


@pytest.fixture(scope="module")
def pts():
    return disk_points(np.random.default_rng(8), 9)


def test_subset_table_twins(pts):
    centers, radii = _candidate_disks(pts)
    masks = _masks(pts, centers, radii, _scale(pts))
    a = K.subset_radius_table_nb(masks, radii, pts.size)
    b = K.subset_radius_table_np(masks, radii, pts.size)
    assert np.allclose(a, b, rtol=0, atol=1e-15)


@pytest.mark.parametrize("minimax", [False, True])
def test_partition_dp_twins(pts, minimax):
    table = subset_radius_table(pts)
    for d in (1, 2, 4):
        assert np.allclose(K.partition_dp_nb(table, pts.size, d, minimax),
                           K.partition_dp_np(table, pts.size, d, minimax))


def test_group_table_twins():
    z = disk_points(np.random.default_rng(1), 90)
    offs = np.array([0, 10, 25, 40, 41, 60, 90], dtype=np.int64)
    a = K.group_radius_table_nb(z.real.copy(), z.imag.copy(), offs, 6)
    b = K.group_radius_table_np(z.real.copy(), z.imag.copy(), offs, 6)
    assert np.allclose(a, b, rtol=1e-12)


@pytest.mark.parametrize("r", [1.0, 2.0, 3.0])
def test_zr_twins(r):
    ks = np.arange(1, 200, dtype=np.int64)
    assert np.allclose(K.zr_min_radii_nb(r, ks), K.zr_min_radii_np(r, ks), rtol=1e-12)
    for eps in (0.3, 0.01, 1e-4):
        assert int(K.zr_count_nb(r, eps, 10 ** 9)) == int(K.zr_count_np(r, eps, 10 ** 9)[0])


def test_aberth_twins():
    rng = np.random.default_rng(2)
    B, m = 20, 7
    c = rng.standard_normal((B, m + 1)) + 1j * rng.standard_normal((B, m + 1))
    z0 = np.tile(0.4 + 0.9j ** np.arange(m), (B, 1)).astype(complex)
    a, oa = K.aberth_batch_nb(c, z0, 300, 1e-14)
    b, ob = K.aberth_batch_np(c, z0, 300, 1e-14)
    assert oa.all() and ob.all()
    assert np.allclose(np.sort_complex(a), np.sort_complex(b), atol=1e-9)


def test_interpreted_kernels(pts):
    a = K.welzl_nb(pts.real.copy(), pts.imag.copy())
    b = K.welzl_nb.py_func(pts.real.copy(), pts.imag.copy())
    assert np.allclose(a, b)
    line = np.sort(np.random.default_rng(0).uniform(size=300))
    assert K.sweep_1d_nb(line, 0.01) == K.sweep_1d_nb.py_func(line, 0.01)
    masks = _masks(pts, pts, 0.5, _scale(pts))
    assert K.min_set_cover_nb(masks, pts.size, pts.size + 1) == K.min_set_cover_nb.py_func(masks, pts.size, pts.size + 1)


SCRIPT = """
import json, numpy as np
from remezkit import c_d, omega_cd, rho_d, find_roots, ComplexPolynomial
from remezkit._accel import backend_name
from remezkit.asymptotics import zr_omega
rng = np.random.default_rng(4)
Z = rng.uniform(-1, 1, 8) + 1j * rng.uniform(-1, 1, 8)
r = np.sort_complex(find_roots(ComplexPolynomial([1, 2, 0, 1j, 1])))
print(json.dumps({"backend": backend_name(), "cd": c_d(Z, 3).value, "cdh": c_d(Z, 2, "heuristic").value,
                  "rho": rho_d(Z, 2)[0], "wcd": omega_cd(Z, 2), "zr": zr_omega(1, 16, 0.5),
                  "roots": [[z.real, z.imag] for z in r]}))
"""


def _run(flag):
    env = dict(os.environ, REMEZKIT_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_env_flag_selects_backend():
    a, b = _run("0"), _run("1")
    assert a["backend"] == "numba" and b["backend"] == "numpy"
    for key in ("cd", "cdh", "rho", "wcd", "zr"):
        assert a[key] == pytest.approx(b[key], rel=1e-12)
    assert np.allclose(a["roots"], b["roots"], atol=1e-10)
