"""Certified naive and canonical heights, and the induced semi-norm on E^g.

Normalization: the canonical height here is the x-coordinate limit

    hhat(P) = lim_n 4^(-n) * h(x(2^n P)),      h(p/q) = log max(|p|, |q|),

which vanishes exactly on torsion and satisfies hhat(m*P) = m^2 * hhat(P).
(Some references carry an extra factor 1/2; this package does not.)

Write x(2^n P) = U_n / W_n in lowest terms and let (phi, psi) be the
integral duplication forms, so (U_{n+1}, W_{n+1}) = (phi, psi)(U_n, W_n)
divided by their gcd g_n.  Telescoping yields the exact identity

    hhat(P) = h(w_0) + sum_n 4^(-(n+1)) * (delta_n - log g_n)

where delta_n is the archimedean scaling log max(|phi|,|psi|) at the
sup-normalized real vector w_n / |w_n|.  Two independent evaluation routes
are implemented:

* ``series`` (the local decomposition): delta_n via directed-rounding
  interval arithmetic on the normalized real orbit, log g_n via p-adic
  tracking modulo p^K for the finitely many primes dividing the duplication
  resultant (g_n always divides that resultant, which both bounds the tail
  and confines the p-adic bookkeeping).  Cost is independent of the height
  of the input point.

* ``doubling`` (the limit oracle): the exact integer orbit (U_n, W_n),
  whose coordinates square in size each step; a coordinate-size budget
  guards the blow-up and PrecisionUnreachable reports when the requested
  radius cannot be certified within it.

Both routes carry the same rigorous tail constant, derived from integer
Bezout cofactors of the duplication forms; no literature constants are
assumed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
from mpmath.ctx_iv import MPIntervalContext

from .curves import CurvePoint, EllipticCurve, PowerPoint, is_torsion
from .errors import PrecisionUnreachable

_MPZ = gmpy2.mpz


# --------------------------------------------------------------------------
# certified interval values
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HeightValue:
    """A non-negative real with a certified error radius (float carrier).

    Construction pads outward by one ulp so [lo, hi] always encloses the
    exact value even after binary-float conversion.
    """

    value: float
    radius: float

    @property
    def lo(self) -> float:
        return self.value - self.radius

    @property
    def hi(self) -> float:
        return self.value + self.radius

    @staticmethod
    def exact_zero() -> "HeightValue":
        return HeightValue(0.0, 0.0)

    @staticmethod
    def from_bounds(lo: float, hi: float) -> "HeightValue":
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
        return HeightValue((lo + hi) / 2, max((hi - lo) / 2, 0.0))

    def certified_gt(self, other: "HeightValue") -> bool:
        """True only when the two intervals are strictly separated."""
        return self.lo > other.hi

    def certified_lt(self, other: "HeightValue") -> bool:
        return self.hi < other.lo

    def scale(self, c: float) -> "HeightValue":
        assert c >= 0
        if self.value == 0.0 and self.radius == 0.0:
            return self
        return HeightValue.from_bounds(self.lo * c, self.hi * c)

    def sqrt(self) -> "HeightValue":
        if self.value == 0.0 and self.radius == 0.0:
            return self  # exact zero stays exact (torsion)
        lo = max(self.lo, 0.0)
        hi = max(self.hi, 0.0)
        return HeightValue.from_bounds(math.sqrt(lo), math.sqrt(hi))

    def __add__(self, other: "HeightValue") -> "HeightValue":
        return HeightValue.from_bounds(self.lo + other.lo, self.hi + other.hi)


@dataclass(frozen=True)
class EpsilonBall:
    epsilon: float


# --------------------------------------------------------------------------
# naive height
# --------------------------------------------------------------------------

def naive_height(P: CurvePoint) -> HeightValue:
    """log max(|p|, |q|) for x(P) = p/q in lowest terms; infinity maps to 0."""
    if P.infinity:
        return HeightValue.exact_zero()
    x = _rational_x(P)
    m = max(abs(x.numerator), abs(x.denominator))
    if m <= 1:
        return HeightValue.exact_zero()
    ctx = MPIntervalContext()
    ctx.prec = 80
    v = ctx.log(ctx.mpf(int(m)))
    return HeightValue.from_bounds(float(v.a), float(v.b))


def _rational_x(P: CurvePoint) -> Fraction:
    x = P.x
    if not P.is_rational():
        raise ValueError("heights are only computed for rational points")
    from .curves import QF

    return x.a if isinstance(x, QF) else x


# --------------------------------------------------------------------------
# per-curve context: duplication forms, resultant, tail constants
# --------------------------------------------------------------------------

class _HeightContext:
    """Everything about a curve the height engines need, computed once."""

    def __init__(self, E: EllipticCurve):
        self.curve = E
        u = _integral_scale(E)
        self.scale = u
        Ei = EllipticCurve(E.a1 * u, E.a2 * u * u, E.a3 * u ** 3, E.a4 * u ** 4, E.a6 * u ** 6)
        self.integral_curve = Ei
        b2 = int(Ei.b2)
        b4 = int(Ei.b4)
        b6 = int(Ei.b6)
        b8 = int(Ei.b8)
        # duplication x(2P) = phi(x)/psi(x), as binary quartic coefficient
        # lists in (U, W) from degree-4 down to degree-0 in U
        self.phi = [1, 0, -b4, -2 * b6, -b8]
        self.psi = [0, 4, b2, 2 * b4, b6]
        self.resultant = _binary_form_resultant(self.phi, self.psi)
        assert self.resultant != 0
        self.res_abs = abs(self.resultant)
        self.res_factors = _factorize(self.res_abs)
        # integer Bezout cofactors: A*phi + B*psi = R*U^7 and = R*W^7
        k1 = _cofactor_weight(self.phi, self.psi, self.resultant, front=True)
        k2 = _cofactor_weight(self.phi, self.psi, self.resultant, front=False)
        self.rho = Fraction(self.res_abs, max(k1, k2))  # lower bound for max(|phi|,|psi|) on the unit sphere
        l1_phi = sum(abs(c) for c in self.phi)
        l1_psi = sum(abs(c) for c in self.psi)
        up = math.log(max(l1_phi, l1_psi))
        down = abs(math.log(float(self.rho))) if self.rho < 1 else 0.0
        self.c_delta = max(up, down) * (1 + 1e-9) + 1e-12
        self.c_tail = self.c_delta + math.log(float(self.res_abs)) * (1 + 1e-9)

    def steps_for(self, precision: float) -> int:
        # tail after N terms is at most 4^-N / 3 * c_tail
        target = precision / 2
        n = max(1, math.ceil(math.log(self.c_tail / (3 * target)) / math.log(4)) + 1)
        return n

    def integral_uv(self, P: CurvePoint) -> tuple[int, int]:
        x = _rational_x(P) * self.scale * self.scale
        return int(x.numerator), int(x.denominator)


_CTX_CACHE: dict[EllipticCurve, _HeightContext] = {}


def _height_context(E: EllipticCurve) -> _HeightContext:
    if E not in _CTX_CACHE:
        _CTX_CACHE[E] = _HeightContext(E)
    return _CTX_CACHE[E]


def _integral_scale(E: EllipticCurve) -> int:
    return math.lcm(
        E.a1.denominator,
        E.a2.denominator,
        E.a3.denominator,
        E.a4.denominator,
        E.a6.denominator,
    )


def _binary_form_resultant(f: list[int], g: list[int]) -> int:
    """Resultant of two binary quartics via the 8x8 Sylvester determinant."""
    n = 8
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(4):
        for j in range(5):
            M[i][i + j] = Fraction(f[j])
            M[4 + i][i + j] = Fraction(g[j])
    det = _fraction_det(M)
    assert det.denominator == 1
    return int(det)


def _fraction_det(M: list[list[Fraction]]) -> Fraction:
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if M[r][c] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c] != 0:
                fct = M[r][c] * inv
                M[r] = [M[r][j] - fct * M[c][j] for j in range(n)]
    return det


def _cofactor_weight(f: list[int], g: list[int], res: int, front: bool) -> int:
    """Solve A*f + B*g = res * U^7 (front) or res * W^7, A,B cubic forms.

    The solution is integral because the system matrix is the Sylvester
    transpose with determinant +-res.  Returns the l1 weight |A|_1 + |B|_1
    used in the lower bound for max(|phi|, |psi|) on the unit sphere.
    """
    n = 8
    M = [[Fraction(0)] * n for _ in range(n)]
    # unknowns a0..a3, b0..b3; equation k: coeff of U^(7-k) W^k
    for k in range(8):
        for i in range(4):
            j = k - i
            if 0 <= j <= 4:
                M[k][i] = Fraction(f[j])
                M[k][4 + i] = Fraction(g[j])
    rhs = [Fraction(0)] * n
    rhs[0 if front else 7] = Fraction(res)
    sol = _fraction_solve(M, rhs)
    assert all(s.denominator == 1 for s in sol), "cofactors must be integral"
    return sum(abs(int(s)) for s in sol)


def _fraction_solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(M)
    A = [M[i][:] + [rhs[i]] for i in range(n)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if A[r][c] != 0:
                piv = r
                break
        assert piv is not None, "singular cofactor system"
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                fct = A[r][c]
                A[r] = [A[r][j] - fct * A[c][j] for j in range(n + 1)]
    return [A[i][n] for i in range(n)]


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division plus Pollard rho."""
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 17
    while d * d <= n and d < 100_000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if gmpy2.is_prime(m):
            out[int(m)] = out.get(int(m), 0) + 1
            continue
        f = _pollard_rho(m)
        stack += [f, m // f]
    return out


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    x = _MPZ(2)
    c = 1
    while True:
        x, y, d = _MPZ(2 + c), _MPZ(2 + c), _MPZ(1)
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gmpy2.gcd(abs(x - y), n)
        if d != n:
            return int(d)
        c += 1


# --------------------------------------------------------------------------
# series route: archimedean intervals + p-adic gcd tracking
# --------------------------------------------------------------------------

class _PadicTrack:
    """(U, W) modulo p^K along the reduced duplication orbit."""

    def __init__(self, p: int, e: int, steps: int, U: int, W: int):
        self.p = p
        self.e = e  # v_p of the resultant: a uniform cap on v_p(g_n)
        self.K = (steps + 2) * e + 4
        self.mod = p ** self.K
        self.U = U % self.mod
        self.W = W % self.mod

    def _val(self, z: int) -> int:
        """v_p(z) as seen modulo p^K (= K when z is 0 mod p^K)."""
        if z % self.mod == 0:
            return self.K
        v = 0
        while z % self.p == 0:
            z //= self.p
            v += 1
        return v

    def gcd_exponent(self, phi_val: int, psi_val: int) -> int:
        m = min(self._val(phi_val % self.mod), self._val(psi_val % self.mod))
        assert m <= self.e, "gcd valuation exceeded the resultant bound"
        return m

    def advance(self, phi_val: int, psi_val: int, g: int):
        vp = 0
        gg = g
        while gg % self.p == 0:
            gg //= self.p
            vp += 1
        self.K -= vp
        assert self.K > self.e + 1, "p-adic precision budget exhausted"
        self.mod = self.p ** self.K
        inv_unit = pow(gg % self.mod, -1, self.mod) if gg % self.mod != 1 else 1
        self.U = ((phi_val // self.p ** vp) % self.mod) * inv_unit % self.mod
        self.W = ((psi_val // self.p ** vp) % self.mod) * inv_unit % self.mod


def _eval_forms_mod(ctx: _HeightContext, U: int, W: int, mod: int) -> tuple[int, int]:
    U %= mod
    W %= mod
    u2, w2 = U * U % mod, W * W % mod
    u3, w3 = u2 * U % mod, w2 * W % mod
    u4, w4 = u2 * u2 % mod, w2 * w2 % mod
    p = ctx.phi
    q = ctx.psi
    phi_val = (p[0] * u4 + p[1] * u3 * W + p[2] * u2 * w2 + p[3] * U * w3 + p[4] * w4) % mod
    psi_val = (q[1] * u3 * W + q[2] * u2 * w2 + q[3] * U * w3 + q[4] * w4) % mod
    return phi_val, psi_val


def _iv_max(ctx_iv, a, b):
    # max(a, b) = (a + b + |a - b|) / 2, interval-arithmetic sound
    return (a + b + abs(a - b)) / 2


def canonical_height_series(P: CurvePoint, precision: float = 1e-8) -> HeightValue:
    """Local-decomposition route; cost independent of the input height."""
    ev = is_torsion(P)
    if ev.torsion:
        return HeightValue.exact_zero()
    hc = _height_context(P.curve)
    U0, W0 = hc.integral_uv(P)
    steps = hc.steps_for(precision)
    prec_bits = 140
    for _attempt in range(4):
        out = _series_attempt(hc, U0, W0, steps, prec_bits)
        if out is not None and out.radius <= precision:
            return out
        prec_bits *= 2
        steps += 2
    raise PrecisionUnreachable(
        f"series route failed to certify radius {precision} for {P!r}"
    )


def _series_attempt(
    hc: _HeightContext, U0: int, W0: int, steps: int, prec_bits: int
) -> Optional[HeightValue]:
    iv = MPIntervalContext()
    iv.prec = prec_bits
    # leading term h(w_0)
    m0 = max(abs(U0), abs(W0))
    total = iv.log(iv.mpf(int(m0))) if m0 > 1 else iv.mpf(0)
    # real orbit, sup-normalized
    u = iv.mpf(U0) / iv.mpf(int(m0))
    w = iv.mpf(W0) / iv.mpf(int(m0))
    tracks = [
        _PadicTrack(p, e, steps, U0, W0) for p, e in sorted(hc.res_factors.items())
    ]
    quarter = iv.mpf(1) / iv.mpf(4)
    scale = quarter
    p0, p1, p2, p3, p4 = [iv.mpf(c) for c in hc.phi]
    q1, q2, q3, q4 = [iv.mpf(c) for c in hc.psi[1:]]
    for n in range(steps):
        u2, w2 = u * u, w * w
        u3, w3 = u2 * u, w2 * w
        u4, w4 = u2 * u2, w2 * w2
        phi_iv = p0 * u4 + p1 * u3 * w + p2 * u2 * w2 + p3 * u * w3 + p4 * w4
        psi_iv = q1 * u3 * w + q2 * u2 * w2 + q3 * u * w3 + q4 * w4
        m_iv = _iv_max(iv, abs(phi_iv), abs(psi_iv))
        if not m_iv.a > 0:
            return None  # interval hit zero: retry at higher precision
        # p-adic gcd of this step
        g = 1
        if tracks:
            evals = [
                _eval_forms_mod(hc, t.U, t.W, t.mod) for t in tracks
            ]
            for t, (pv, qv) in zip(tracks, evals):
                g *= t.p ** t.gcd_exponent(pv, qv)
            for t, (pv, qv) in zip(tracks, evals):
                t.advance(pv, qv, g)
        delta = iv.log(m_iv)
        if g > 1:
            delta = delta - iv.log(iv.mpf(g))
        total = total + scale * delta
        scale = scale * quarter
        u = phi_iv / m_iv
        w = psi_iv / m_iv
    tail = hc.c_tail / (3.0 * 4.0 ** steps) * (1 + 1e-12)
    # endpoints of a computed interval are exact, so float() is safe; the
    # one-ulp outward pad in from_bounds absorbs the float rounding here
    lo = float(total.a) - tail
    hi = float(total.b) + tail
    if not (lo <= hi) or math.isnan(lo) or math.isnan(hi):
        return None
    return HeightValue.from_bounds(lo, hi)


# --------------------------------------------------------------------------
# doubling route: exact integer orbit
# --------------------------------------------------------------------------

DEFAULT_DOUBLING_BUDGET_BITS = 4_000_000


def canonical_height_doubling(
    P: CurvePoint,
    precision: float = 1e-6,
    budget_bits: int = DEFAULT_DOUBLING_BUDGET_BITS,
    best_effort: bool = False,
) -> HeightValue:
    """Limit oracle with exact point doubling on the x-line.

    Certifies |result - hhat(P)| <= max(precision, reached) where the
    reached radius shrinks like 4^-n; raises PrecisionUnreachable when the
    coordinate budget stops the orbit first (unless ``best_effort``, which
    then returns the best certified enclosure).
    """
    ev = is_torsion(P)
    if ev.torsion:
        return HeightValue.exact_zero()
    hc = _height_context(P.curve)
    U, W = hc.integral_uv(P)
    U, W = _MPZ(U), _MPZ(W)
    phi = [_MPZ(c) for c in hc.phi]
    psi = [_MPZ(c) for c in hc.psi]
    iv = MPIntervalContext()
    iv.prec = 80
    n = 0
    while True:
        tail = hc.c_tail / (3.0 * 4.0 ** n)
        if tail <= precision:
            break
        if max(abs(U), abs(W)).bit_length() * 4 > budget_bits:
            if best_effort:
                break
            raise PrecisionUnreachable(
                f"doubling budget {budget_bits} bits reached at step {n}, "
                f"certified radius {tail:.3e} > requested {precision:.3e}"
            )
        u2, w2 = U * U, W * W
        u3, w3 = u2 * U, w2 * W
        u4, w4 = u2 * u2, w2 * w2
        Unew = phi[0] * u4 + phi[1] * u3 * W + phi[2] * u2 * w2 + phi[3] * U * w3 + phi[4] * w4
        Wnew = psi[1] * u3 * W + psi[2] * u2 * w2 + psi[3] * U * w3 + psi[4] * w4
        g = gmpy2.gcd(Unew, Wnew)
        U, W = Unew // g, Wnew // g
        n += 1
    m = max(abs(U), abs(W))
    est = iv.log(iv.mpf(int(m))) / iv.mpf(4) ** n if m > 1 else iv.mpf(0)
    tail = hc.c_tail / (3.0 * 4.0 ** n)
    return HeightValue.from_bounds(float(est.a) - tail, float(est.b) + tail)


# --------------------------------------------------------------------------
# public canonical height and semi-norm
# --------------------------------------------------------------------------

def canonical_height(
    P: CurvePoint,
    precision: float = 1e-8,
    method: str = "series",
    budget_bits: int = DEFAULT_DOUBLING_BUDGET_BITS,
) -> HeightValue:
    """Canonical height with certified radius <= precision.

    method: 'series' (default), 'doubling', or 'both' (cross-checked
    intersection of the two enclosures).
    """
    if method == "series":
        return canonical_height_series(P, precision)
    if method == "doubling":
        return canonical_height_doubling(P, precision, budget_bits=budget_bits)
    if method == "both":
        a = canonical_height_series(P, precision)
        # the doubling route contributes its best certified enclosure; the
        # intersection is still within the requested radius via the series
        b = canonical_height_doubling(
            P, precision, budget_bits=budget_bits, best_effort=True
        )
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo > hi:
            from .errors import VerificationError

            raise VerificationError(
                f"height routes disagree: [{a.lo}, {a.hi}] vs [{b.lo}, {b.hi}]"
            )
        return HeightValue.from_bounds(lo, hi)
    raise ValueError(f"unknown method {method!r}")


def seminorm(x: PowerPoint, precision: float = 1e-8, method: str = "series") -> HeightValue:
    """||x|| = max_i sqrt(hhat(x_i)), each height at the requested precision."""
    best = HeightValue.exact_zero()
    for p in x.points:
        h = canonical_height(p, precision, method=method)
        if h.hi > best.hi or (h.lo > best.lo):
            lo, hi = max(h.lo, best.lo), max(h.hi, best.hi)
            best = HeightValue.from_bounds(lo, hi)
    return best.sqrt()


def in_epsilon_ball(
    x: PowerPoint, ball: EpsilonBall, precision: float = 1e-8
) -> Optional[bool]:
    """Definite membership when the certified interval separates from eps;
    None means undecidable at this precision."""
    sn = seminorm(x, precision)
    if sn.hi <= ball.epsilon:
        return True
    if sn.lo > ball.epsilon:
        return False
    return None


def set_height(points: list[PowerPoint], precision: float = 1e-8) -> HeightValue:
    """Supremum seminorm over a finite set of tuples."""
    if not points:
        raise ValueError("empty set has no height")
    best = seminorm(points[0], precision)
    for x in points[1:]:
        s = seminorm(x, precision)
        best = HeightValue.from_bounds(max(best.lo, s.lo), max(best.hi, s.hi))
    return best
