"""JSON wire formats: rationals as "p/q" strings, points, curves, varieties."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .curves import CurvePoint, EllipticCurve, PowerPoint, power_point
from .endo import MorphismMatrix
from .errors import ConfigError


def fraction_to_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


def curve_to_json(E: EllipticCurve) -> dict:
    return {
        "a1": fraction_to_str(E.a1),
        "a2": fraction_to_str(E.a2),
        "a3": fraction_to_str(E.a3),
        "a4": fraction_to_str(E.a4),
        "a6": fraction_to_str(E.a6),
    }


def curve_from_json(d: dict) -> EllipticCurve:
    try:
        return EllipticCurve(*(Fraction(d.get(k, 0)) for k in ("a1", "a2", "a3", "a4", "a6")))
    except (ValueError, TypeError) as e:
        raise ConfigError(f"bad curve JSON: {e}") from e


def point_to_json(P: CurvePoint) -> Any:
    if P.infinity:
        return "infinity"
    from .curves import QF

    if isinstance(P.x, QF) or isinstance(P.y, QF):
        raise ConfigError("quadratic-coordinate points have no JSON form")
    return {"x": fraction_to_str(P.x), "y": fraction_to_str(P.y)}


def point_from_json(d: Any, E: EllipticCurve) -> CurvePoint:
    if d == "infinity":
        return E.infinity()
    try:
        return E.point(Fraction(d["x"]), Fraction(d["y"]))
    except KeyError as e:
        raise ConfigError(f"bad point JSON: missing {e}") from e


def power_point_to_json(x: PowerPoint) -> list:
    return [point_to_json(p) for p in x.points]


def power_point_from_json(lst: list, E: EllipticCurve) -> PowerPoint:
    return power_point([point_from_json(d, E) for d in lst])


def matrix_to_json(M: MorphismMatrix) -> dict:
    return M.to_json()


def matrix_from_json(d: dict) -> MorphismMatrix:
    return MorphismMatrix.from_json(d)


def dump_deterministic(obj: Any) -> str:
    """Canonical JSON text: sorted keys, no whitespace jitter."""
    return json.dumps(obj, sort_keys=True, indent=2)
