import json
import subprocess
import sys

import numpy as np
import pytest

from remezkit.cli import main

SQRT = {"deg_y": 2, "terms": [{"ypow": 2, "xpow": 0, "re": 1}, {"ypow": 0, "xpow": 1, "re": -1}]}


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(3)
    Z = 1 + 0.3 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    zl = [[z.real, z.imag] for z in Z]
    return {
        "pts": _write(tmp_path / "pts.json", {"points": [[-0.5, 0], [0, 0], [0.5, 0]], "label": "three"}),
        "z": _write(tmp_path / "z.json", {"coeffs": [[0, 0], [1, 0]]}),
        "nonmonic": _write(tmp_path / "nm.json", {"coeffs": [[0, 0], [2, 0]]}),
        "sqrt": _write(tmp_path / "sqrt.json", SQRT),
        "flip": _write(tmp_path / "flip.json", {"curve": SQRT, "d1": 2, "Z": zl, "x0": 1,
                                                "hat_base": 1, "hat_y": 1, "bar_y": -1}),
        "triv": _write(tmp_path / "triv.json", {"curve": SQRT, "d1": 2, "Z": zl, "x0": 1.05,
                                                "hat_y": 1, "bar_y": 1}),
        "orbit": _write(tmp_path / "orbit.json", {"curve": {"deg_y": 2, "terms": [
            {"ypow": 2, "xpow": 0, "re": 1}, {"ypow": 0, "xpow": 2, "re": -1}]},
            "d1": 2, "Z": zl, "x0": 1, "hat_y": 1, "bar_y": -1}),
        "bad": str((tmp_path / "bad.json").write_text("{oops") and tmp_path / "bad.json"),
        "dir": tmp_path,
    }


def run(args, tmp_path):
    out = tmp_path / "out.json"
    code = main(list(args) + ["-o", str(out)])
    data = json.loads(out.read_text()) if code == 0 else None
    return code, data


def test_invariants(files):
    code, data = run(["invariants", files["pts"], "--d", "2"], files["dir"])
    assert code == 0 and data["c_d"] == 0.25
    man = json.loads((files["dir"] / "out.json.manifest.json").read_text())
    assert man["command"] == "invariants" and files["pts"] in man["inputs"]
    code, data = run(["invariants", files["pts"], "--d", "3"], files["dir"])
    assert data["c_d"] == 0
    assert run(["invariants", files["bad"], "--d", "2"], files["dir"])[0] == 2
    assert run(["invariants", files["pts"], "--d", "0"], files["dir"])[0] == 2
    assert run(["invariants", str(files["dir"] / "missing.json"), "--d", "2"], files["dir"])[0] == 2


def test_remez_verify(files):
    code, data = run(["remez-verify", files["pts"], "--d", "2", "--trials", "20"], files["dir"])
    assert code == 0 and data["summary"]["violations"] == 0 and len(data["certificates"]) == 20
    code, data = run(["remez-verify", files["pts"], "--d", "2", "--trials", "0"], files["dir"])
    assert data["certificates"] == []
    assert run(["remez-verify", files["pts"], "--d", "3"], files["dir"])[0] == 2


def test_reproducible(files):
    a = files["dir"] / "a.json"
    b = files["dir"] / "b.json"
    for p in (a, b):
        assert main(["remez-verify", files["pts"], "--d", "1", "--trials", "7", "--seed", "11", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_env_seed(files, monkeypatch):
    monkeypatch.setenv("REMEZKIT_SEED", "5")
    code = main(["remez-verify", files["pts"], "--d", "1", "--trials", "2", "-o", str(files["dir"] / "s.json")])
    assert code == 0
    assert json.loads((files["dir"] / "s.json.manifest.json").read_text())["seed"] == 5


def test_cartan(files):
    csv_path = files["dir"] / "c.csv"
    code, data = run(["cartan", files["z"], "--eps", "0.1,0.2", "--samples", "300", "--csv", str(csv_path)],
                     files["dir"])
    assert code == 0 and data["all_hold"]
    assert csv_path.read_text().splitlines()[0] == "eps,c_d_sample,bound_2e_eps"
    assert run(["cartan", files["nonmonic"]], files["dir"])[0] == 2


def test_valence(files):
    code, data = run(["valence", "power-sum:p=2,N=21", "--s", "1", "--trials", "30"], files["dir"])
    assert code == 0 and data["max_count"] <= 2
    code, data = run(["valence", "power-sum:p=2,N=21", "--s", "2", "--trials", "3",
                      "--witness", "1e-12,0,1"], files["dir"])
    assert data["max_count"] == 21
    assert run(["valence", "bessel"], files["dir"])[0] == 2


def test_curve(files):
    code, data = run(["curve", files["sqrt"], "analyze"], files["dir"])
    assert code == 0 and data["n_singular"] == 1 and data["r_bound"] == 8
    code, data = run(["curve", files["sqrt"], "monodromy", "--basepoint", "1"], files["dir"])
    assert data["generators"][0]["permutation"] == [2, 1]
    code, data = run(["curve", files["sqrt"], "fiber", "--basepoint", "4"], files["dir"])
    assert sorted(v[0] for v in data["fiber"]) == [-2.0, 2.0]
    assert run(["curve", files["sqrt"], "fiber", "--basepoint", "0"], files["dir"])[0] == 2
    assert run(["curve", files["sqrt"], "monodromy", "--basepoint", "0"], files["dir"])[0] == 2


def test_chain(files):
    code, data = run(["chain", files["triv"], "estimate"], files["dir"])
    assert code == 0 and len(data["K"]["per_link_factors"]) == 1
    code, data = run(["chain", files["flip"], "verify", "--trials", "3"], files["dir"])
    assert code == 0 and data["summary"]["violations"] == 0
    assert run(["chain", files["orbit"], "estimate"], files["dir"])[0] == 3


def test_asymptotics(files):
    csv_path = files["dir"] / "a.csv"
    code, data = run(["asymptotics", "--r", "1", "--d-range", "8..32", "--csv", str(csv_path)], files["dir"])
    assert code == 0 and "1" in data["slopes"]
    assert len(csv_path.read_text().splitlines()) == 4
    assert run(["asymptotics", "--d-range", "8..8"], files["dir"])[0] == 2
    assert run(["asymptotics", "--d-range", "2..16"], files["dir"])[0] == 2
    assert run(["asymptotics", "--r", "0"], files["dir"])[0] == 2


def test_stdout_and_manifest_on_stderr(files):
    res = subprocess.run([sys.executable, "-m", "remezkit.cli", "invariants", files["pts"], "--d", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["c_d"] == 0.5
    assert "manifest" in json.loads(res.stderr)


def test_argparse_errors():
    assert main(["invariants"]) == 2
    assert main(["nope"]) == 2
