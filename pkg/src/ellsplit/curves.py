"""Exact group arithmetic on a long Weierstrass curve over the rationals.

Points carry exact coordinates: plain Fractions, or pairs of rationals in
the quadratic field attached to a CM action (j = 1728 uses Q(i), j = 0 uses
Q(omega)).  The chord-tangent formulas below are the generic ones for

    y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6

and work verbatim over either coordinate field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .endo import Endo, EndRing, MorphismMatrix, RING_EISENSTEIN, RING_GAUSS, RING_Z
from .errors import (
    DimensionMismatch,
    PointNotOnCurve,
    UnsupportedCMAction,
)


# --------------------------------------------------------------------------
# quadratic field coordinates for CM curves
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QF:
    """a + b*omega with rational a, b; same multiplication table as the ring."""

    ring: EndRing
    a: Fraction
    b: Fraction

    @staticmethod
    def of(ring: EndRing, value) -> "QF":
        if isinstance(value, QF):
            return value
        return QF(ring, Fraction(value), Fraction(0))

    def _coerce(self, other):
        if isinstance(other, QF):
            return other
        return QF(self.ring, Fraction(other), Fraction(0))

    def __add__(self, o):
        o = self._coerce(o)
        return QF(self.ring, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return QF(self.ring, self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __neg__(self):
        return QF(self.ring, -self.a, -self.b)

    def __mul__(self, o):
        o = self._coerce(o)
        c0, c1 = self.ring.omega_sq
        bb = self.b * o.b
        return QF(
            self.ring,
            self.a * o.a + c0 * bb,
            self.a * o.b + self.b * o.a + c1 * bb,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        n = o.norm_sq()
        if n == 0:
            raise ZeroDivisionError
        conj = o.conjugate()
        num = self * conj
        return QF(self.ring, num.a / n, num.b / n)

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __pow__(self, k: int):
        out = QF(self.ring, Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        if self.ring is RING_GAUSS:
            return QF(self.ring, self.a, -self.b)
        return QF(self.ring, self.a - self.b, -self.b)

    def norm_sq(self) -> Fraction:
        if self.ring is RING_GAUSS:
            return self.a * self.a + self.b * self.b
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return self.a != 0 or self.b != 0


Coord = Union[Fraction, QF]


def _coords_equal(u: Coord, v: Coord) -> bool:
    if isinstance(u, QF) or isinstance(v, QF):
        ring = u.ring if isinstance(u, QF) else v.ring
        return QF.of(ring, u) == QF.of(ring, v)
    return u == v


# --------------------------------------------------------------------------
# curves and points
# --------------------------------------------------------------------------

class EllipticCurve:
    """Nonsingular long Weierstrass curve with rational coefficients."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "b2", "b4", "b6", "b8", "discriminant")

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0):
        self.a1 = Fraction(a1)
        self.a2 = Fraction(a2)
        self.a3 = Fraction(a3)
        self.a4 = Fraction(a4)
        self.a6 = Fraction(a6)
        a1_, a2_, a3_, a4_, a6_ = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1_ * a1_ + 4 * a2_
        self.b4 = 2 * a4_ + a1_ * a3_
        self.b6 = a3_ * a3_ + 4 * a6_
        self.b8 = (
            a1_ * a1_ * a6_
            + 4 * a2_ * a6_
            - a1_ * a3_ * a4_
            + a2_ * a3_ * a3_
            - a4_ * a4_
        )
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.discriminant = (
            -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        )
        if self.discriminant == 0:
            raise ValueError("singular Weierstrass equation")

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and (
            (self.a1, self.a2, self.a3, self.a4, self.a6)
            == (other.a1, other.a2, other.a3, other.a4, other.a6)
        )

    def __hash__(self):
        return hash((self.a1, self.a2, self.a3, self.a4, self.a6))

    def __repr__(self):
        return f"EllipticCurve(a1={self.a1}, a2={self.a2}, a3={self.a3}, a4={self.a4}, a6={self.a6})"

    # -- point construction --------------------------------------------------

    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None, True)

    def point(self, x, y) -> "CurvePoint":
        x = x if isinstance(x, QF) else Fraction(x)
        y = y if isinstance(y, QF) else Fraction(y)
        P = CurvePoint(self, x, y, False)
        if not self.contains(P):
            raise PointNotOnCurve(f"({x}, {y}) is not on {self!r}")
        return P

    def contains(self, P: "CurvePoint") -> bool:
        if P.infinity:
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return _coords_equal(lhs, rhs)

    # -- group law ------------------------------------------------------------

    def neg(self, P: "CurvePoint") -> "CurvePoint":
        if P.infinity:
            return P
        return CurvePoint(self, P.x, -P.y - self.a1 * P.x - self.a3, False)

    def add(self, P: "CurvePoint", Q: "CurvePoint") -> "CurvePoint":
        if P.curve != self or Q.curve != self:
            raise PointNotOnCurve("points on different curves")
        if P.infinity:
            return Q
        if Q.infinity:
            return P
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if _coords_equal(x1, x2):
            # either opposite points or a doubling
            if _coords_equal(y2, -y1 - self.a1 * x1 - self.a3):
                return self.infinity()
            lam = (3 * x1 * x1 + 2 * self.a2 * x1 + self.a4 - self.a1 * y1) / (
                2 * y1 + self.a1 * x1 + self.a3
            )
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam + self.a1 * lam - self.a2 - x1 - x2
        y3 = lam * (x1 - x3) - y1 - self.a1 * x3 - self.a3
        return CurvePoint(self, x3, y3, False)

    def mul_int(self, n: int, P: "CurvePoint") -> "CurvePoint":
        if n < 0:
            return self.mul_int(-n, self.neg(P))
        R = self.infinity()
        Q = P
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    # -- CM action -------------------------------------------------------------

    def cm_ring(self) -> EndRing | None:
        """The CM order acting through the special models, if any."""
        if self.a1 == self.a2 == self.a3 == self.a6 == 0 and self.a4 != 0:
            return RING_GAUSS
        if self.a1 == self.a2 == self.a3 == self.a4 == 0 and self.a6 != 0:
            return RING_EISENSTEIN
        return None

    def cm_generator_action(self, P: "CurvePoint") -> "CurvePoint":
        ring = self.cm_ring()
        if ring is None:
            raise UnsupportedCMAction(
                "curve is not in a CM special form (y^2=x^3+a4*x or y^2=x^3+a6)"
            )
        if P.infinity:
            return P
        if ring is RING_GAUSS:
            # (x, y) -> (-x, i*y)
            x = QF.of(ring, P.x)
            y = QF.of(ring, P.y)
            i = QF(ring, Fraction(0), Fraction(1))
            return CurvePoint(self, -x, i * y, False)
        # (x, y) -> (omega*x, y)
        x = QF.of(ring, P.x)
        y = QF.of(ring, P.y)
        w = QF(ring, Fraction(0), Fraction(1))
        return CurvePoint(self, w * x, y, False)


@dataclass(frozen=True)
class CurvePoint:
    curve: EllipticCurve
    x: Coord | None
    y: Coord | None
    infinity: bool = False

    def __repr__(self):
        if self.infinity:
            return "O"
        return f"({self.x}, {self.y})"

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return self.curve.add(self, other)

    def __neg__(self) -> "CurvePoint":
        return self.curve.neg(self)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return self.curve.add(self, self.curve.neg(other))

    def __rmul__(self, n: int) -> "CurvePoint":
        return self.curve.mul_int(n, self)

    def is_rational(self) -> bool:
        if self.infinity:
            return True
        ok_x = not isinstance(self.x, QF) or self.x.is_rational()
        ok_y = not isinstance(self.y, QF) or self.y.is_rational()
        return ok_x and ok_y


# --------------------------------------------------------------------------
# module operations
# --------------------------------------------------------------------------

def add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return P.curve.add(P, Q)


def scalar_mul(e: Union[int, Endo], P: CurvePoint) -> CurvePoint:
    """n*P, or (a + b*omega)*P on a curve carrying the matching CM model."""
    E = P.curve
    if isinstance(e, int):
        return E.mul_int(e, P)
    if e.ring is RING_Z:
        return E.mul_int(e.a, P)
    if E.cm_ring() is not e.ring:
        raise UnsupportedCMAction(
            f"scalar in {e.ring.name} cannot act on this curve model"
        )
    base = E.mul_int(e.a, P)
    if e.b == 0:
        return base
    return E.add(base, E.mul_int(e.b, E.cm_generator_action(P)))


@dataclass(frozen=True)
class TorsionEvidence:
    torsion: bool
    order: int | None
    reason: str


def is_torsion(P: CurvePoint, sweep_bound: int = 16) -> TorsionEvidence:
    """Decide torsion for a rational point by sweeping orders up to 16.

    The uniform bound on rational torsion orders makes the sweep exhaustive
    over Q.  A cheap integrality screen runs first: on an integral model a
    rational torsion point has v_p(x) >= 0 for odd p and v_2(x) >= -2, so a
    deep denominator settles the question without any group law.  For
    quadratic-coordinate points the sweep is only a sufficient check and the
    evidence says so.
    """
    if P.infinity:
        return TorsionEvidence(True, 1, "identity")
    if P.is_rational():
        u = _integralizing_scale(P.curve)
        x = _as_fraction(P.x) * u * u
        den = x.denominator
        d2 = den
        v2 = 0
        while d2 % 2 == 0:
            d2 //= 2
            v2 += 1
        if d2 > 1:
            return TorsionEvidence(False, None, f"screen:odd-denominator {d2}")
        if v2 > 2:
            return TorsionEvidence(False, None, "screen:2-adic denominator too deep")
    Q = P
    for n in range(1, sweep_bound + 1):
        # here Q = n*P exactly
        if Q.infinity:
            return TorsionEvidence(True, n, f"order={n}")
        Q = add(Q, P)
    suffix = "" if P.is_rational() else " (quadratic point: sweep only)"
    return TorsionEvidence(False, None, f"no-order<={sweep_bound}{suffix}")


def _as_fraction(c: Coord) -> Fraction:
    if isinstance(c, QF):
        if not c.is_rational():
            raise ValueError("coordinate is not rational")
        return c.a
    return c


def _integralizing_scale(E: EllipticCurve) -> int:
    from math import lcm

    return lcm(
        E.a1.denominator,
        E.a2.denominator,
        E.a3.denominator,
        E.a4.denominator,
        E.a6.denominator,
    )


# --------------------------------------------------------------------------
# tuples in E^g
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerPoint:
    points: tuple[CurvePoint, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty tuple")
        curve = self.points[0].curve
        for Q in self.points[1:]:
            if Q.curve != curve:
                raise PointNotOnCurve("components lie on different curves")

    @property
    def g(self) -> int:
        return len(self.points)

    @property
    def curve(self) -> EllipticCurve:
        return self.points[0].curve

    def __repr__(self):
        return "(" + ", ".join(repr(p) for p in self.points) + ")"

    def __getitem__(self, i):
        return self.points[i]

    def is_torsion_tuple(self, sweep_bound: int = 16) -> bool:
        return all(is_torsion(p, sweep_bound).torsion for p in self.points)


def power_point(points: Iterable[CurvePoint]) -> PowerPoint:
    return PowerPoint(tuple(points))


def apply_morphism(M: MorphismMatrix, x: PowerPoint) -> PowerPoint:
    """Componentwise sum_j m_ij * x_j, exactly."""
    if M.cols != x.g:
        raise DimensionMismatch(f"matrix has {M.cols} columns, point has {x.g}")
    E = x.curve
    out = []
    for i in range(M.rows):
        acc = E.infinity()
        for j in range(M.cols):
            e = M.entries[i][j]
            if e.is_zero():
                continue
            acc = E.add(acc, scalar_mul(e, x[j]))
        out.append(acc)
    return PowerPoint(tuple(out))


# frequently used curves in tests and the corpus
def curve_37a1() -> EllipticCurve:
    """y^2 + y = x^3 - x: rank one, trivial torsion, generator (0, 0)."""
    return EllipticCurve(0, 0, 1, -1, 0)


def curve_j0() -> EllipticCurve:
    """y^2 = x^3 + 1: j = 0, CM by the Eisenstein order, torsion Z/6."""
    return EllipticCurve(0, 0, 0, 0, 1)


def torsion_points(E: EllipticCurve, coordinate_bound: int = 40) -> list[CurvePoint]:
    """All rational torsion points found by a small integral-coordinate scan.

    Torsion points on an integral model are integral (up to the bounded
    2-adic exception handled by the sweep), so scanning |x| <= bound catches
    every torsion point of the small corpus curves.  The identity is
    included; the list is deterministic.
    """
    u = _integralizing_scale(E)
    Ei = EllipticCurve(
        E.a1 * u, E.a2 * u * u, E.a3 * u ** 3, E.a4 * u ** 4, E.a6 * u ** 6
    )
    found = [E.infinity()]
    for xi in range(-coordinate_bound, coordinate_bound + 1):
        x = Fraction(xi)
        # y^2 + (a1 x + a3) y - rhs = 0
        bq = Ei.a1 * x + Ei.a3
        cq = -(x ** 3 + Ei.a2 * x * x + Ei.a4 * x + Ei.a6)
        disc = bq * bq - 4 * cq
        if disc < 0:
            continue
        r = _fraction_sqrt(disc)
        if r is None:
            continue
        for y in {(-bq + r) / 2, (-bq - r) / 2}:
            Pi = Ei.point(x, y)
            if is_torsion(Pi).torsion:
                found.append(E.point(Pi.x / (u * u), Pi.y / (u ** 3)))
    uniq = []
    for p in found:
        if p not in uniq:
            uniq.append(p)
    return uniq


def _fraction_sqrt(f: Fraction):
    from math import isqrt

    if f < 0:
        return None
    pn, pd = f.numerator, f.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn == pn and rd * rd == pd:
        return Fraction(rn, rd)
    return None
