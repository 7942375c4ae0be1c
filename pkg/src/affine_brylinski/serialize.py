"""Exact JSON encoding: rationals travel as ``"p/q"`` strings in lowest terms."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = "affine-brylinski/1"
# bumped whenever a sign or normalization convention changes
CONVENTION_VERSION = "bourbaki-eps-le/sugawara-half/delta-li/1"


def qstr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qparse(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "),
                      default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return qstr(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")
