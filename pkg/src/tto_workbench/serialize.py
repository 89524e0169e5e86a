"""JSON codecs.  A complex scalar is ``[re, im]``; matrices are row-major.

Floats are written with Python's shortest round-trip repr, so parsing an
emitted document recovers every value bit for bit.
"""

from __future__ import annotations

import json
import math
from typing import Any, Dict

import numpy as np

from .disk import BlaschkeProduct, Certificate, MobiusTransform
from .exceptions import InvalidInput
from .model_space import ClarkSystem, FunctionVec
from .realize import JordanSpec, Realization
from .tto import Operator, Symbol


def _real(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput("non-finite value")
    return x


def complex_to_json(z) -> list:
    z = complex(z)
    return [_real(z.real), _real(z.imag)]


def complex_from_json(obj) -> complex:
    if isinstance(obj, bool):
        raise InvalidInput("expected a complex number")
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
        return complex(obj[0], obj[1])
    raise InvalidInput(f"expected [re, im], got {obj!r}")


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list):
        raise InvalidInput("expected a list of complex numbers")
    return np.array([complex_from_json(z) for z in obj], dtype=complex)


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.asarray(m)]


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InvalidInput("expected a nested list matrix")
    rows = [vector_from_json(r) for r in obj]
    if len({r.size for r in rows}) != 1:
        raise InvalidInput("ragged matrix")
    return np.array(rows)


def _field(obj: Dict[str, Any], key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInput(f"missing field {key!r}")
    return obj[key]


def blaschke_to_json(B: BlaschkeProduct) -> dict:
    return {"constant": complex_to_json(B.constant), "zeros": vector_to_json(B.zeros)}


def blaschke_from_json(obj) -> BlaschkeProduct:
    const = complex_from_json(obj.get("constant", 1.0)) if isinstance(obj, dict) else None
    return BlaschkeProduct(const, tuple(vector_from_json(_field(obj, "zeros"))))


def mobius_to_json(psi: MobiusTransform) -> dict:
    return {"eta": complex_to_json(psi.eta), "a": complex_to_json(psi.a)}


def mobius_from_json(obj) -> MobiusTransform:
    return MobiusTransform(complex_from_json(_field(obj, "eta")),
                           complex_from_json(_field(obj, "a")))


def certificate_to_json(c: Certificate) -> dict:
    return {"post": mobius_to_json(c.post), "pre": mobius_to_json(c.pre), "sharp": bool(c.sharp)}


def certificate_from_json(obj) -> Certificate:
    sharp = _field(obj, "sharp")
    if not isinstance(sharp, bool):
        raise InvalidInput("sharp must be a boolean")
    return Certificate(mobius_from_json(_field(obj, "post")),
                       mobius_from_json(_field(obj, "pre")), sharp)


def functionvec_to_json(f: FunctionVec) -> dict:
    return {"coeffs": vector_to_json(f.coeffs)}


def functionvec_from_json(obj) -> FunctionVec:
    if isinstance(obj, list):
        return FunctionVec(vector_from_json(obj))
    return FunctionVec(vector_from_json(_field(obj, "coeffs")))


def clark_to_json(c: ClarkSystem) -> dict:
    return {"alpha": complex_to_json(c.alpha), "points": vector_to_json(c.points),
            "weights": [_real(w) for w in c.weights]}


def symbol_to_json(s: Symbol) -> dict:
    return {"laurent": {str(m): complex_to_json(c) for m, c in sorted(s.laurent.items())}}


def symbol_from_json(obj) -> Symbol:
    raw = _field(obj, "laurent")
    if not isinstance(raw, dict):
        raise InvalidInput("laurent must be an object")
    try:
        return Symbol({int(k): complex_from_json(v) for k, v in raw.items()})
    except ValueError as exc:
        raise InvalidInput(f"bad Laurent exponent: {exc}") from None


def operator_to_json(op: Operator) -> dict:
    out = {"matrix": matrix_to_json(op.matrix)}
    if op.symbol is not None:
        out["symbol"] = symbol_to_json(op.symbol)
    return out


def jordan_from_json(obj) -> JordanSpec:
    blocks = obj.get("blocks") if isinstance(obj, dict) else obj
    if not isinstance(blocks, list):
        raise InvalidInput("expected a list of [eigenvalue, size] blocks")
    out = []
    for b in blocks:
        if isinstance(b, dict):
            mu, d = _field(b, "eigenvalue"), _field(b, "size")
        elif isinstance(b, list) and len(b) == 2:
            mu, d = b
        else:
            raise InvalidInput(f"bad Jordan block {b!r}")
        if not isinstance(d, int) or isinstance(d, bool):
            raise InvalidInput("block size must be an integer")
        out.append((complex_from_json(mu), d))
    return JordanSpec(tuple(out))


def _extra(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _real(v)
    if isinstance(v, (complex, np.complexfloating)):
        return complex_to_json(v)
    arr = np.asarray(v)
    if arr.ndim == 1:
        return vector_to_json(arr)
    if arr.ndim == 2:
        return matrix_to_json(arr)
    return str(v)


def realization_to_json(r: Realization) -> dict:
    return {
        "theta": blaschke_to_json(r.theta),
        "operator": operator_to_json(r.operator),
        "witness": matrix_to_json(r.witness),
        "witness_kind": r.witness_kind,
        "residual": _real(r.residual),
        "details": {k: _extra(v) for k, v in sorted(r.extras.items())},
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)
