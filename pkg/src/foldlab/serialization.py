"""
Lossless JSON rendering of exact values.

Rationals travel as strings "p/q" (integers as "p"); tuples become lists and
mapping keys that are tuples become comma-joined strings so that output is
stable under json.dumps(sort_keys=True).
"""

import json
from typing import Any, Iterable, List

from sympy import Rational, sympify
from sympy.core.numbers import Rational as _SympyRational


def rational_str(value: Any) -> str:
    """Render an exact rational as "p/q" (or "p" when integral)"""
    q = Rational(value) if not isinstance(value, _SympyRational) else value
    if q.q == 1:
        return str(q.p)
    return f"{q.p}/{q.q}"


def parse_rational(text: Any) -> Rational:
    """Parse "p/q", "p" or a plain int into a sympy Rational"""
    if isinstance(text, int):
        return Rational(text)
    value = sympify(str(text).strip(), rational=True)
    if not value.is_Rational:
        raise ValueError(f"not a rational number: {text!r}")
    return Rational(value)


def parse_int_list(text: str) -> List[int]:
    """Parse a comma separated list such as "3,2,1" """
    if text is None or not str(text).strip():
        return []
    return [int(part) for part in str(text).replace(" ", "").split(",") if part != ""]


def parse_rational_list(text: str) -> List[Rational]:
    if text is None or not str(text).strip():
        return []
    return [parse_rational(part) for part in str(text).replace(" ", "").split(",") if part != ""]


def key_str(key: Iterable[Any]) -> str:
    return ",".join(str(k) for k in key)


def to_jsonable(value: Any) -> Any:
    """Recursively convert exact values into JSON-friendly structures"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, _SympyRational):
        return rational_str(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            out[key_str(k) if isinstance(k, tuple) else str(k)] = to_jsonable(v)
        return out
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    try:
        return rational_str(sympify(value))
    except Exception:
        return str(value)


def dumps(payload: Any, pretty: bool = False) -> str:
    """Canonical JSON text: sorted keys, fixed separators"""
    data = to_jsonable(payload)
    if pretty:
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


__all__ = [
    "rational_str",
    "parse_rational",
    "parse_int_list",
    "parse_rational_list",
    "key_str",
    "to_jsonable",
    "dumps",
]
