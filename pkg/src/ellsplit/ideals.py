"""Variety specifications and dimension machinery for the two ambient models.

A variety lives either in the torus T^g (coordinates z1..zg, ideal saturated
with respect to the coordinate product) or in a power E^g of an elliptic
curve (coordinates x1,y1..xg,yg with the curve equations implicitly joined).

Dimensions of images under monomial maps are computed two ways:

* an exact Groebner elimination route (``image_dimension``), which also
  reports generators of the image ideal; and
* an exact Jacobian route over the function field, available when the
  variety carries a dominant parameterization.  In characteristic zero the
  generic rank of the Jacobian equals the dimension of the image closure,
  and rank at any sample point is a lower bound for the generic rank, so a
  full-rank sample certifies the image dimension without any elimination.

The checker modules use the Jacobian route to screen thousands of candidate
morphisms and fall back to elimination for witnesses and for varieties
without a parameterization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .curves import EllipticCurve
from .endo import MorphismMatrix
from .errors import ConfigError, UnsupportedMap
from .poly import (
    DEFAULT_SPAIR_BUDGET,
    Poly,
    eliminate,
    grevlex,
    groebner,
    ideal_equal,
    krull_dimension,
    parse_poly,
    saturate,
)


def torus_var_names(g: int) -> list[str]:
    return [f"z{i+1}" for i in range(g)]


def elliptic_var_names(g: int) -> list[str]:
    out = []
    for i in range(g):
        out += [f"x{i+1}", f"y{i+1}"]
    return out


@dataclass(frozen=True)
class RationalMap:
    """A coordinate function num/den in the parameterization variables."""

    num: Poly
    den: Poly

    @staticmethod
    def poly(p: Poly) -> "RationalMap":
        return RationalMap(p, Poly.const(p.n, 1))

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("parameterization denominator vanished")
        return self.num.evaluate(point) / d


@dataclass(frozen=True)
class Parameterization:
    """Dominant rational map from affine param space onto the variety.

    ``coords`` has one entry per torus coordinate.  Validation checks that
    the variety generators vanish on it identically and that its Jacobian
    has generic rank equal to the claimed dimension, which together with
    irreducibility makes the image dense.
    """

    params: int
    coords: tuple[RationalMap, ...]

    def sample_point(self, seed: int = 0) -> tuple[Fraction, ...]:
        # small deterministic points, avoiding low-height denominators zeros
        base = [Fraction(2 + seed), Fraction(3 + 2 * seed), Fraction(5 + 3 * seed),
                Fraction(7 + 5 * seed), Fraction(11 + 7 * seed)]
        return tuple(base[:self.params]) if self.params <= 5 else tuple(
            Fraction(2 + i + seed) for i in range(self.params)
        )


@dataclass(frozen=True)
class VarietySpec:
    ambient: str  # "torus" | "elliptic"
    g: int
    generators: tuple[Poly, ...]
    dimension: int
    irreducible: bool = True
    curve: Optional[EllipticCurve] = None
    parameterization: Optional[Parameterization] = None
    name: str = ""

    @property
    def nvars(self) -> int:
        return self.g if self.ambient == "torus" else 2 * self.g

    def var_names(self) -> list[str]:
        return torus_var_names(self.g) if self.ambient == "torus" else elliptic_var_names(self.g)

    def full_generators(self) -> tuple[Poly, ...]:
        """Generators with the curve equations joined (elliptic model)."""
        if self.ambient == "torus":
            return self.generators
        assert self.curve is not None
        gens = list(self.generators)
        n = self.nvars
        names = self.var_names()
        E = self.curve
        for i in range(self.g):
            x = Poly.var(2 * i, n)
            y = Poly.var(2 * i + 1, n)
            a1, a2, a3, a4, a6 = (Poly.const(n, c) for c in (E.a1, E.a2, E.a3, E.a4, E.a6))
            gens.append(
                y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)
            )
        return tuple(gens)


def make_torus_variety(
    g: int,
    generator_texts: Sequence[str],
    dimension: int,
    parameterization: Optional[Parameterization] = None,
    name: str = "",
    irreducible: bool = True,
) -> VarietySpec:
    names = torus_var_names(g)
    gens = tuple(parse_poly(t, names) for t in generator_texts)
    return VarietySpec(
        "torus", g, gens, dimension,
        irreducible=irreducible, parameterization=parameterization, name=name,
    )


def make_elliptic_variety(
    g: int,
    curve: EllipticCurve,
    generator_texts: Sequence[str],
    dimension: int,
    name: str = "",
    irreducible: bool = True,
) -> VarietySpec:
    names = elliptic_var_names(g)
    gens = tuple(parse_poly(t, names) for t in generator_texts)
    return VarietySpec(
        "elliptic", g, gens, dimension, irreducible=irreducible, curve=curve, name=name
    )


# --------------------------------------------------------------------------
# load-time validation
# --------------------------------------------------------------------------

def validate_variety(V: VarietySpec, s_budget: int = DEFAULT_SPAIR_BUDGET) -> None:
    """Check claimed dimension, torus saturation and the parameterization.

    Raises ConfigError on any mismatch.
    """
    d = dimension(V, s_budget=s_budget)
    if d != V.dimension:
        raise ConfigError(f"variety {V.name!r}: computed dimension {d} != claimed {V.dimension}")
    if V.ambient == "torus" and not _is_saturated(V, s_budget=s_budget):
        raise ConfigError(f"variety {V.name!r}: ideal is not coordinate-saturated")
    if V.parameterization is not None:
        _validate_parameterization(V)


def _is_saturated(V: VarietySpec, s_budget: int) -> bool:
    gens = list(V.generators)
    n = V.g
    if not gens:
        return True
    # principal ideals: saturated iff no variable divides every monomial
    if len(gens) == 1:
        p = gens[0]
        for i in range(n):
            if all(e[i] > 0 for e in p.terms):
                return False
        return True
    # graph-shaped ideals (each generator solves one variable polynomially):
    # the quotient is a polynomial ring, hence a domain, so the ideal is
    # saturated as soon as no coordinate lies in it.
    if _is_graph_ideal(gens, n):
        basis = groebner(gens, grevlex(n), s_budget=s_budget)
        from .poly import normal_form

        return all(
            not normal_form(Poly.var(i, n), basis, grevlex(n)).is_zero() for i in range(n)
        )
    prod = Poly.const(n, 1)
    for i in range(n):
        prod = prod * Poly.var(i, n)
    sat = saturate(gens, prod, s_budget=s_budget)
    return ideal_equal(sat, gens, grevlex(n))


def _is_graph_ideal(gens: Sequence[Poly], n: int) -> bool:
    solved: set[int] = set()
    for p in gens:
        hit = None
        for e, c in p.terms.items():
            if sum(e) == 1:
                i = next(k for k, v in enumerate(e) if v)
                if abs(c) == 1 and all(ee[i] == 0 for ee in p.terms if ee != e):
                    hit = i
                    break
        if hit is None or hit in solved:
            return False
        solved.add(hit)
    return True


def _validate_parameterization(V: VarietySpec) -> None:
    assert V.parameterization is not None
    par = V.parameterization
    if V.ambient != "torus":
        raise ConfigError("parameterizations are only supported for the torus model")
    if len(par.coords) != V.g:
        raise ConfigError("parameterization arity mismatch")
    # generators vanish identically on the parameterization
    for gpoly in V.generators:
        if not _pullback_is_zero(gpoly, par):
            raise ConfigError(f"variety {V.name!r}: parameterization misses a generator")
    # dominant onto an irreducible d-dimensional V: rank of Jacobian = d
    G = _dlog_rows(par)
    if _poly_matrix_rank(G) != V.dimension:
        raise ConfigError(f"variety {V.name!r}: parameterization rank != dimension")


def _pullback_is_zero(gpoly: Poly, par: Parameterization) -> bool:
    """Substitute coords into g and clear denominators; exact zero test."""
    m = par.params
    total = Poly.zero(m)
    # common denominator: product of dens^max exponent needed per coordinate
    max_exp = [0] * len(par.coords)
    for e in gpoly.terms:
        for i, k in enumerate(e):
            max_exp[i] = max(max_exp[i], k)
    for e, c in gpoly.terms.items():
        term = Poly.const(m, c)
        for i, k in enumerate(e):
            term = term * par.coords[i].num ** k
            term = term * par.coords[i].den ** (max_exp[i] - k)
        total = total + term
    return total.is_zero()


# --------------------------------------------------------------------------
# Jacobian machinery over the function field
# --------------------------------------------------------------------------

def _dlog_rows(par: Parameterization) -> list[list[Poly]]:
    """Rows proportional to dlog of each coordinate function.

    Row i equals (d num_i * den_i - num_i * d den_i) over the params, which
    is num_i*den_i times dlog f_i; per-row scaling by a nonzero function
    preserves the rank of the matrix itself (but not of products, which is
    why ``_mg_rows`` below uses a genuinely common denominator).
    """
    rows = []
    for rm in par.coords:
        row = []
        for p in range(par.params):
            row.append(rm.num.derivative(p) * rm.den - rm.num * rm.den.derivative(p))
        rows.append(row)
    return rows


def _mg_rows(par: Parameterization) -> list[list[Poly]]:
    """Common-denominator dlog rows: row i = h * dlog f_i with one h for all.

    h = prod_k num_k * den_k, so integer row combinations of these rows are
    still h times the corresponding dlog combination; that is what makes
    rank(M @ G) equal to the image dimension of the monomial map M.
    """
    m = par.params
    prods_before: list[Poly] = []
    acc = Poly.const(m, 1)
    for rm in par.coords:
        prods_before.append(acc)
        acc = acc * (rm.num * rm.den)
    prods_after = [Poly.const(m, 1)] * len(par.coords)
    acc = Poly.const(m, 1)
    for i in range(len(par.coords) - 1, -1, -1):
        prods_after[i] = acc
        acc = acc * (par.coords[i].num * par.coords[i].den)
    rows = []
    for i, rm in enumerate(par.coords):
        other = prods_before[i] * prods_after[i]
        row = []
        for p in range(m):
            core = rm.num.derivative(p) * rm.den - rm.num * rm.den.derivative(p)
            row.append(core * other)
        rows.append(row)
    return rows


def _poly_matrix_rank(rows: list[list[Poly]]) -> int:
    """Rank over the rational function field, by Gaussian elimination with
    exact zero tests (entries stay polynomials via cross-multiplication)."""
    if not rows:
        return 0
    work = [row[:] for row in rows]
    m, n = len(work), len(work[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if not work[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, m):
            if not work[i][c].is_zero():
                a, b = work[r][c], work[i][c]
                work[i] = [work[i][j] * a - work[r][j] * b for j in range(n)]
        r += 1
        if r == m:
            break
    return r


class JacobianScreen:
    """Per-variety cache for fast exact image-dimension decisions."""

    def __init__(self, V: VarietySpec):
        if V.parameterization is None:
            raise ValueError("variety has no parameterization")
        self.V = V
        self.par = V.parameterization
        self.G = _mg_rows(self.par)
        self._sample_cache: Optional[list[list[Fraction]]] = None

    def _sample_rows(self) -> Optional[list[list[Fraction]]]:
        if self._sample_cache is None:
            for seed in range(6):
                pt = self.par.sample_point(seed)
                try:
                    self._sample_cache = [
                        [entry.evaluate(pt) for entry in row] for row in self.G
                    ]
                    break
                except ZeroDivisionError:
                    continue
        return self._sample_cache

    def image_dim_certified(self, M: MorphismMatrix) -> Optional[int]:
        """Return dim of the image closure of the monomial map M on V, or
        None when the cheap sample-point rank is not conclusive.

        A full-rank sample certifies dimension d exactly (rank at a point
        lower-bounds the generic rank, which is at most d)."""
        d = self.V.dimension
        sample = self._sample_rows()
        if sample is not None:
            rk = _rank_fraction_matrix(_int_combo(M, sample))
            if rk == min(d, M.rows):
                return rk
        return None

    def image_dim_exact(self, M: MorphismMatrix) -> int:
        """Exact image dimension: generic rank of M @ G over the function field."""
        return _poly_matrix_rank(_int_combo(M, self.G))


def _int_combo(M: MorphismMatrix, rows):
    """M @ rows with integer coefficients from an integral matrix."""
    out = []
    for i in range(M.rows):
        coeffs = [e.a for e in M.entries[i]]
        if any(e.b for e in M.entries[i]):
            raise UnsupportedMap("CM matrices are not monomial maps on the torus")
        row = None
        for c, grow in zip(coeffs, rows):
            if c == 0:
                continue
            term = [g * c for g in grow]
            row = term if row is None else [a + b for a, b in zip(row, term)]
        if row is None:
            row = [type(rows[0][0]).zero(rows[0][0].n) if isinstance(rows[0][0], Poly) else Fraction(0) for _ in rows[0]]
        out.append(row)
    return out


def _rank_fraction_matrix(rows: list[list[Fraction]]) -> int:
    work = [row[:] for row in rows]
    if not work:
        return 0
    m, n = len(work), len(work[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(m):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [work[i][j] - f * work[r][j] for j in range(n)]
        r += 1
        if r == m:
            break
    return r


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def dimension(V: VarietySpec, s_budget: int = DEFAULT_SPAIR_BUDGET) -> int:
    """Krull dimension of V as a subvariety of its ambient group."""
    return krull_dimension(V.full_generators(), V.nvars, s_budget=s_budget)


@dataclass(frozen=True)
class EliminationReport:
    kept_variables: tuple[int, ...]  # 1-based coordinate indices (or w-indices)
    generators: tuple[Poly, ...]
    image_dimension: int
    variable_names: tuple[str, ...]

    def render_generators(self) -> list[str]:
        return [p.render(self.variable_names) for p in self.generators]


def image_dimension(
    V: VarietySpec,
    m: MorphismMatrix | Sequence[int],
    s_budget: int = DEFAULT_SPAIR_BUDGET,
) -> EliminationReport:
    """Dimension of the Zariski closure of the image, via elimination.

    ``m`` is either a coordinate subset (1-based indices; both ambients) or
    an integral matrix defining a monomial map (torus ambient only).
    Negative exponents are handled with auxiliary inverse variables.
    """
    if not isinstance(m, MorphismMatrix):
        return _image_dim_subset(V, tuple(m), s_budget)
    if V.ambient != "torus":
        raise UnsupportedMap(
            "general matrix images are only computed on the torus model; "
            "elliptic-power ambients support coordinate-subset projections"
        )
    if _is_coordinate_subset(m):
        subset = tuple(next(j for j, e in enumerate(row) if e.a) + 1 for row in m.entries)
        return _image_dim_subset(V, subset, s_budget)
    return _image_dim_monomial(V, m, s_budget)


def _is_coordinate_subset(m: MorphismMatrix) -> bool:
    cols_seen = []
    for row in m.entries:
        nz = [(j, e) for j, e in enumerate(row) if not e.is_zero()]
        if len(nz) != 1 or nz[0][1].a != 1 or nz[0][1].b != 0:
            return False
        cols_seen.append(nz[0][0])
    return len(set(cols_seen)) == len(cols_seen)


def _image_dim_subset(V: VarietySpec, subset: tuple[int, ...], s_budget: int):
    g = V.g
    if any(not (1 <= s <= g) for s in subset):
        raise ValueError("coordinate index out of range")
    names = V.var_names()
    if V.ambient == "torus":
        drop = [i for i in range(g) if (i + 1) not in subset]
        gens = eliminate(V.generators, drop, g, s_budget=s_budget)
        # dimension measured in the kept variables only
        keep_idx = sorted(i for i in range(g) if (i + 1) in subset)
        remap = {old: new for new, old in enumerate(keep_idx)}
        small = [p.map_vars([remap.get(i, -1) for i in range(g)], len(keep_idx)) for p in gens]
        dim = krull_dimension(small, len(keep_idx), s_budget=s_budget)
        return EliminationReport(tuple(sorted(subset)), tuple(gens), dim, tuple(names))
    # elliptic: keep the (x_i, y_i) pairs of the subset
    n = V.nvars
    keep_vars = []
    for s in sorted(subset):
        keep_vars += [2 * (s - 1), 2 * (s - 1) + 1]
    drop = [i for i in range(n) if i not in keep_vars]
    gens = eliminate(V.full_generators(), drop, n, s_budget=s_budget)
    remap = {old: new for new, old in enumerate(keep_vars)}
    small = [p.map_vars([remap.get(i, -1) for i in range(n)], len(keep_vars)) for p in gens]
    dim = krull_dimension(small, len(keep_vars), s_budget=s_budget)
    return EliminationReport(tuple(sorted(subset)), tuple(gens), dim, tuple(names))


def _image_dim_monomial(V: VarietySpec, m: MorphismMatrix, s_budget: int):
    """w_j = monomial(M_j); eliminate source variables and their inverses."""
    g, r = V.g, m.rows
    if m.cols != g:
        raise ValueError("matrix column count must match the ambient power")
    rows = [[e.a for e in row] for row in m.entries]
    if any(e.b for row in m.entries for e in row):
        raise UnsupportedMap("CM matrices are not monomial maps on the torus")
    need_inv = sorted({j for row in rows for j, a in enumerate(row) if a < 0})
    inv_pos = {j: g + k for k, j in enumerate(need_inv)}
    n = g + len(need_inv) + r
    w0 = g + len(need_inv)

    def lift(p: Poly) -> Poly:
        return p.map_vars(list(range(g)), n)

    gens = [lift(p) for p in V.generators]
    for j in need_inv:
        gens.append(Poly.var(j, n) * Poly.var(inv_pos[j], n) - Poly.const(n, 1))
    for jrow, row in enumerate(rows):
        mono = [0] * n
        for j, a in enumerate(row):
            if a > 0:
                mono[j] += a
            elif a < 0:
                mono[inv_pos[j]] += -a
        gens.append(Poly.var(w0 + jrow, n) - Poly.monomial(tuple(mono)))
    drop = list(range(w0))
    out = eliminate(gens, drop, n, s_budget=s_budget)
    remap = [-1] * n
    for k in range(r):
        remap[w0 + k] = k
    small = [p.map_vars(remap, r) for p in out]
    dim = krull_dimension(small, r, s_budget=s_budget)
    wnames = [f"w{k+1}" for k in range(r)]
    return EliminationReport(
        tuple(range(1, r + 1)), tuple(small), dim, tuple(wnames)
    )


def saturation_idempotent(V: VarietySpec, s_budget: int = DEFAULT_SPAIR_BUDGET) -> bool:
    """Property check helper: saturating twice equals saturating once."""
    if V.ambient != "torus":
        return True
    n = V.g
    prod = Poly.const(n, 1)
    for i in range(n):
        prod = prod * Poly.var(i, n)
    s1 = saturate(V.generators, prod, s_budget=s_budget)
    s2 = saturate(s1, prod, s_budget=s_budget)
    return ideal_equal(s1, s2, grevlex(n))
