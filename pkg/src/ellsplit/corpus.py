"""Built-in worked examples: curves, varieties, fibrations, point supplies.

Every entry is validated on first load (dimension, saturation, generator
membership, parameterization rank) and memoized.  Entries are data, not
configuration: the CLI addresses them as ``corpus:<name>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .curves import (
    CurvePoint,
    EllipticCurve,
    PowerPoint,
    curve_37a1,
    curve_j0,
    power_point,
    torsion_points,
)
from .errors import ConfigError
from .ideals import (
    Parameterization,
    RationalMap,
    VarietySpec,
    make_elliptic_variety,
    make_torus_variety,
    validate_variety,
)
from .poly import parse_poly
from .unbounded import FibrationData


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    variety: Optional[VarietySpec]
    fibration: Optional[FibrationData]
    curve: Optional[EllipticCurve]
    generators_mw: tuple[CurvePoint, ...]  # known infinite-order generators
    note: str


def _rp(text: str, names) -> RationalMap:
    return RationalMap.poly(parse_poly(text, names))


def _envelope_variety() -> VarietySpec:
    names = ["u", "v"]
    par = Parameterization(
        2,
        (
            _rp("u", names),
            _rp("u^5 + 1", names),
            _rp("5*u^4*v + u", names),
            _rp("v + u^5 + 1", names),
        ),
    )
    return make_torus_variety(
        4,
        ["z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1", "z2 - z1^5 - 1"],
        2,
        parameterization=par,
        name="envelope",
    )


def _envelope_curve() -> VarietySpec:
    par = Parameterization(1, (_rp("u", ["u"]), _rp("u^5 + 1", ["u"])))
    return make_torus_variety(
        2, ["z2 - z1^5 - 1"], 1, parameterization=par, name="envelope-curve"
    )


def _parabola_product() -> VarietySpec:
    names = ["u", "v"]
    par = Parameterization(
        2,
        (_rp("u", names), _rp("u^2 + 1", names), _rp("v", names), _rp("v^2 + 1", names)),
    )
    return make_torus_variety(
        4,
        ["z2 - z1^2 - 1", "z4 - z3^2 - 1"],
        2,
        parameterization=par,
        name="parabola-product",
    )


def _transverse_hypersurface() -> VarietySpec:
    names = ["u", "v"]
    par = Parameterization(
        2,
        (
            _rp("u", names),
            _rp("v", names),
            RationalMap(parse_poly("u + v + 1", names), parse_poly("u*v", names)),
        ),
    )
    return make_torus_variety(
        3, ["z1*z2*z3 - z1 - z2 - 1"], 2, parameterization=par, name="transverse-hypersurface"
    )


def _point_times_curve() -> VarietySpec:
    par = Parameterization(
        1, (_rp("2", ["u"]), _rp("u", ["u"]), _rp("u^5 + 1", ["u"]))
    )
    return make_torus_variety(
        3, ["z1 - 2", "z3 - z2^5 - 1"], 1, parameterization=par, name="point-times-curve"
    )


def _point_times_plane() -> VarietySpec:
    names = ["u", "v"]
    par = Parameterization(
        2, (_rp("2", names), _rp("3", names), _rp("u", names), _rp("v", names))
    )
    return make_torus_variety(
        4, ["z1 - 2", "z2 - 3"], 2, parameterization=par, name="point-times-plane"
    )


def _c_in_e2() -> VarietySpec:
    return make_elliptic_variety(
        2, curve_37a1(), ["x2 - x1 - 1"], 1, name="C"
    )


def _cxe() -> VarietySpec:
    return make_elliptic_variety(
        3, curve_37a1(), ["x2 - x1 - 1"], 2, name="CxE"
    )


def _diag_xe_j0() -> VarietySpec:
    return make_elliptic_variety(
        3, curve_j0(), ["x2 - x1", "y2 - y1"], 2, name="diag-x-E"
    )


def _e_times_torsion_j0() -> VarietySpec:
    # E x {p} with p = (2, 3), a torsion translate
    return make_elliptic_variety(
        2, curve_j0(), ["x2 - 2", "y2 - 3"], 1, name="E-x-torsion"
    )


def c_supply(limit: int = 8) -> tuple[PowerPoint, ...]:
    """Points of the curve x2 = x1 + 1 among multiples of the generator.

    Pairs (n*P, m*P) with matching x-coordinates, ordered by total size so
    the smallest witnesses come first.
    """
    E = curve_37a1()
    P = E.point(0, 0)
    order = sorted(
        (n for n in range(-limit, limit + 1) if n != 0), key=lambda n: (abs(n), n < 0)
    )
    mults = {n: E.mul_int(n, P) for n in order}
    out = []
    for total in range(2, 2 * limit + 1):
        for n in order:
            for m in order:
                if abs(n) + abs(m) != total:
                    continue
                A, B = mults[n], mults[m]
                if A.infinity or B.infinity:
                    continue
                if B.x == A.x + 1:
                    out.append(power_point([A, B]))
    return tuple(out)


def _cxe_fibration() -> FibrationData:
    return FibrationData(
        variety=_cxe(),
        base_variety=_c_in_e2(),
        d1=1,
        supply=c_supply(),
    )


_BUILDERS: dict[str, Callable[[], CorpusEntry]] = {}


def _register(name: str):
    def deco(fn):
        _BUILDERS[name] = fn
        return fn

    return deco


@_register("37a1")
def _e37() -> CorpusEntry:
    E = curve_37a1()
    return CorpusEntry(
        "37a1", None, None, E, (E.point(0, 0),),
        "rank-one curve y^2 + y = x^3 - x with generator (0, 0)",
    )


@_register("j0")
def _ej0() -> CorpusEntry:
    return CorpusEntry(
        "j0", None, None, curve_j0(), (),
        "y^2 = x^3 + 1: j = 0, six rational torsion points",
    )


@_register("envelope")
def _env_entry() -> CorpusEntry:
    return CorpusEntry(
        "envelope", _envelope_variety(), None, None, (),
        "tangent-line envelope surface of the plane quintic (u, u^5+1) in the 4-torus",
    )


@_register("envelope-curve")
def _envc_entry() -> CorpusEntry:
    return CorpusEntry(
        "envelope-curve", _envelope_curve(), None, None, (),
        "the plane quintic curve z2 = z1^5 + 1 in the 2-torus",
    )


@_register("parabola-product")
def _prod_entry() -> CorpusEntry:
    return CorpusEntry(
        "parabola-product", _parabola_product(), None, None, (),
        "split product of two parabola curves in the 4-torus",
    )


@_register("transverse-hypersurface")
def _hyp_entry() -> CorpusEntry:
    return CorpusEntry(
        "transverse-hypersurface", _transverse_hypersurface(), None, None, (),
        "hypersurface z1 z2 z3 = z1 + z2 + 1 with no small splitting morphism",
    )


@_register("point-times-curve")
def _pc_entry() -> CorpusEntry:
    return CorpusEntry(
        "point-times-curve", _point_times_curve(), None, None, (),
        "translate {2} x quintic curve in the 3-torus (zero-dimensional image witness)",
    )


@_register("point-times-plane")
def _pp_entry() -> CorpusEntry:
    return CorpusEntry(
        "point-times-plane", _point_times_plane(), None, None, (),
        "coset {(2, 3)} x T^2 in the 4-torus (rank-2 zero-dimensional witness)",
    )


@_register("C")
def _c_entry() -> CorpusEntry:
    E = curve_37a1()
    return CorpusEntry(
        "C", _c_in_e2(), None, E, (E.point(0, 0),),
        "curve x(Q) = x(P) + 1 inside E^2 over 37a1",
    )


@_register("CxE")
def _cxe_entry() -> CorpusEntry:
    E = curve_37a1()
    return CorpusEntry(
        "CxE", _cxe(), _cxe_fibration(), E, (E.point(0, 0),),
        "C x E inside E^3 over 37a1, the certified unbounded-height family",
    )


@_register("diag-x-E")
def _diag_entry() -> CorpusEntry:
    return CorpusEntry(
        "diag-x-E", _diag_xe_j0(), None, curve_j0(), (),
        "diagonal x E inside E^3 over the j=0 curve (free-fiber graph family)",
    )


@_register("E-x-torsion")
def _ext_entry() -> CorpusEntry:
    return CorpusEntry(
        "E-x-torsion", _e_times_torsion_j0(), None, curve_j0(), (),
        "E x {(2,3)} inside E^2 over the j=0 curve (torsion translate)",
    )


_CACHE: dict[str, CorpusEntry] = {}


def corpus_names() -> list[str]:
    return sorted(_BUILDERS)


def load_entry(name: str) -> CorpusEntry:
    """Build, validate and memoize a corpus entry."""
    if name not in _BUILDERS:
        raise ConfigError(f"unknown corpus entry {name!r}; try: {', '.join(corpus_names())}")
    if name not in _CACHE:
        entry = _BUILDERS[name]()
        if entry.variety is not None:
            validate_variety(entry.variety)
        if entry.fibration is not None:
            entry.fibration.validate()
            from .subgroups import verify_samples_on_variety

            verify_samples_on_variety(
                entry.fibration.supply, entry.fibration.base_variety
            )
        for gen in entry.generators_mw:
            from .curves import is_torsion

            if is_torsion(gen).torsion:
                raise ConfigError(f"corpus {name}: listed generator is torsion")
        _CACHE[name] = entry
    return _CACHE[name]


def torsion_pool(E: EllipticCurve) -> list[CurvePoint]:
    return torsion_points(E)
