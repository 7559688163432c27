"""JSON loading and deterministic serialization."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .covering import PointSet, min_enclosing_disk
from .curves import BivariatePolynomial
from .polytools import ComplexPolynomial


def to_plain(obj):
    """Recursively convert numpy scalars/arrays and complex numbers to JSON types.

    Complex values become [re, im]; non-finite floats become the strings
    "inf", "-inf" and "nan" so the output stays strict JSON.
    """
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [to_plain(z.real), to_plain(z.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    # floats use repr, the shortest string that round-trips exactly
    return json.dumps(to_plain(obj), indent=2, allow_nan=False) + "\n"


def read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return obj


def parse_complex(v) -> complex:
    """[re, im], a bare number, or a string such as '1+2j'."""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise ValueError(f"cannot parse complex number {v!r}") from exc
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"cannot parse complex number {v!r}")


def _wrap(fn, obj, what):
    try:
        return fn(obj)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad {what} JSON: {exc}") from exc


def load_pointset(path) -> PointSet:
    return _wrap(PointSet.from_dict, read_json(path), "point set")


def load_polynomial(path) -> ComplexPolynomial:
    return _wrap(ComplexPolynomial.from_dict, read_json(path), "polynomial")


def load_curve(path) -> BivariatePolynomial:
    return _wrap(BivariatePolynomial.from_dict, read_json(path), "curve")


def parse_config(obj: dict):
    """Configuration JSON: curve, d1, Z, x0, hat_base, hat_y, bar_y."""
    from .chains import make_configuration

    for key in ("curve", "d1", "Z", "x0", "hat_y", "bar_y"):
        if key not in obj:
            raise ValueError(f"configuration JSON needs a {key!r} field")
    Q = _wrap(BivariatePolynomial.from_dict, obj["curve"], "curve")
    Z = obj["Z"]
    Z = _wrap(PointSet.from_dict, Z if isinstance(Z, dict) else {"points": Z}, "point set")
    d1 = obj["d1"]
    if not isinstance(d1, int) or d1 < 1:
        raise ValueError("d1 must be a positive integer")
    x0 = parse_complex(obj["x0"])
    if "hat_base" in obj:
        hat_base = parse_complex(obj["hat_base"])
    else:
        hat_base = min_enclosing_disk(Z).center
    return make_configuration(Q, d1, Z, x0, hat_base, parse_complex(obj["hat_y"]), parse_complex(obj["bar_y"]))


def load_config(path):
    return parse_config(read_json(path))
