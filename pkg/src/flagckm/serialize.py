"""JSON and CSV encodings for matrices, coordinates and spectra.

Complex numbers are ``[re, im]`` pairs, matrices are row-major lists of
rows, and every float is written with 17 significant digits so that a
parse/dump cycle is exact.
"""

import io
import json
import math

import numpy as np

from .errors import ValidationError
from .flag import NAMES, FlagCoordinates, lower_indices
from .jarlskog_det import MassSpectrum


def _format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x}")
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON text with 17-significant-digit floats."""
    return _encode(obj, indent, 0) + "\n"


def loads(text):
    def reject_constant(name):
        raise ValidationError(f"non-finite constant {name} is not allowed")

    try:
        return json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc


def check_keys(doc, required, optional=(), where="document"):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where} must be a JSON object")
    unknown = sorted(set(doc) - set(required) - set(optional))
    if unknown:
        raise ValidationError(f"{where}: unknown field {unknown[0]!r}")
    missing = [k for k in required if k not in doc]
    if missing:
        raise ValidationError(f"{where}: missing field {missing[0]!r}")


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(value, where="value"):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ValidationError(f"{where} must be a number or an [re, im] pair")


def matrix_to_json(a):
    a = np.asarray(a)
    return [[complex_to_json(z) for z in row] for row in a]


def matrix_from_json(rows, where="matrix"):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{where} must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError(f"{where} rows have unequal lengths")
    return np.array(
        [[complex_from_json(z, f"{where}[{i}][{j}]") for j, z in enumerate(r)] for i, r in enumerate(rows)],
        dtype=np.complex128,
    )


def coords_to_json(c):
    """``{"n": n, "coords": {...}}`` with names for n = 3, 4 and "i,j" keys otherwise."""
    if c.n in NAMES:
        body = {k: complex_to_json(v) for k, v in c.named().items()}
    else:
        body = {f"{i},{j}": complex_to_json(v) for (i, j), v in c.coords.items()}
    return {"n": c.n, "coords": body}


def coords_from_json(doc, where="coordinates"):
    check_keys(doc, ("n", "coords"), where=where)
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValidationError(f"{where}.n must be an integer >= 2")
    body = doc["coords"]
    if not isinstance(body, dict):
        raise ValidationError(f"{where}.coords must be an object")
    if n in NAMES and set(body) <= set(NAMES[n]):
        check_keys(body, NAMES[n], where=f"{where}.coords")
        return FlagCoordinates.from_named(
            n, {k: complex_from_json(v, f"{where}.coords.{k}") for k, v in body.items()}
        )
    keys = {f"{i},{j}": (i, j) for i, j in lower_indices(n)}
    check_keys(body, list(keys), where=f"{where}.coords")
    return FlagCoordinates(
        n, {keys[k]: complex_from_json(v, f"{where}.coords.{k}") for k, v in body.items()}
    )


def spectrum_from_json(values, where="masses"):
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise ValidationError(f"{where} must be a list of numbers")
    try:
        return MassSpectrum(values)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def matrix_to_csv(a):
    """Flatten a matrix to ``i,j,re,im`` rows with 1-based indices."""
    a = np.asarray(a)
    buf = io.StringIO()
    buf.write("i,j,re,im\n")
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            z = complex(a[i, j])
            buf.write(f"{i + 1},{j + 1},{_format_float(z.real)},{_format_float(z.imag)}\n")
    return buf.getvalue()
