"""Deterministic JSON emission: sorted keys, exact integers, rationals as ``"p/q"``."""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (tuple, set, frozenset)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    if isinstance(obj, bytes):
        return obj.decode("ascii")
    if isinstance(obj, float):
        raise TypeError("floating-point values are not allowed in reports")
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _reject_floats(obj):
    if isinstance(obj, float):
        raise TypeError("floating-point values are not allowed in reports")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


def dumps(report: dict) -> str:
    _reject_floats(report)
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"
