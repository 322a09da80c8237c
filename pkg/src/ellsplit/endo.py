"""Exact arithmetic of endomorphism-ring scalars and matrices.

Scalars are either plain integers (a curve without extra endomorphisms) or
elements a + b*omega of one of the two classical imaginary quadratic orders:
the Gaussian integers (discriminant -4, omega = i) and the Eisenstein
integers (discriminant -3, omega a primitive cube root of unity).  Both are
Euclidean, which is what the canonical Hermite form below relies on.

Matrices over these rings model morphisms E^g -> E^r.  Everything here is
exact: ranks and eliminations run over the fraction field represented as
pairs of rationals, never floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import NotSurjective, RankDeficient


# --------------------------------------------------------------------------
# rings
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EndRing:
    """One of Z, Z[i] (disc -4) or Z[omega] (disc -3).

    ``omega_sq`` gives omega^2 = c0 + c1*omega, fixing the multiplication
    table used by both scalars and fraction-field elements.
    """

    name: str
    discriminant: int | None
    omega_sq: tuple[int, int]

    @property
    def is_cm(self) -> bool:
        return self.discriminant is not None

    def __repr__(self):
        return f"EndRing({self.name})"


RING_Z = EndRing("Z", None, (0, 0))
RING_GAUSS = EndRing("Z[i]", -4, (-1, 0))
RING_EISENSTEIN = EndRing("Z[w]", -3, (-1, -1))

_RINGS_BY_NAME = {r.name: r for r in (RING_Z, RING_GAUSS, RING_EISENSTEIN)}
_RINGS_BY_DISC = {-4: RING_GAUSS, -3: RING_EISENSTEIN}


def ring_from_json(kind: str, discriminant: int | None = None) -> EndRing:
    if kind == "Z":
        return RING_Z
    if kind == "CM":
        if discriminant not in _RINGS_BY_DISC:
            raise ValueError(f"unsupported CM discriminant {discriminant}")
        return _RINGS_BY_DISC[discriminant]
    raise ValueError(f"unknown ring kind {kind!r}")


# --------------------------------------------------------------------------
# scalars
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Endo:
    """A scalar a + b*omega of the endomorphism ring (b = 0 over Z)."""

    ring: EndRing
    a: int
    b: int = 0

    def __post_init__(self):
        if self.ring is RING_Z and self.b != 0:
            raise ValueError("integer endomorphisms have no omega part")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Endo") -> "Endo":
        return Endo(self.ring, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Endo") -> "Endo":
        return Endo(self.ring, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Endo":
        return Endo(self.ring, -self.a, -self.b)

    def __mul__(self, other: "Endo") -> "Endo":
        c0, c1 = self.ring.omega_sq
        bb = self.b * other.b
        return Endo(
            self.ring,
            self.a * other.a + c0 * bb,
            self.a * other.b + self.b * other.a + c1 * bb,
        )

    def norm_sq(self) -> int:
        """Squared complex absolute value; exact and non-negative."""
        if self.ring is RING_GAUSS:
            return self.a * self.a + self.b * self.b
        if self.ring is RING_EISENSTEIN:
            return self.a * self.a - self.a * self.b + self.b * self.b
        return self.a * self.a

    def conjugate(self) -> "Endo":
        if self.ring is RING_GAUSS:
            return Endo(self.ring, self.a, -self.b)
        if self.ring is RING_EISENSTEIN:
            # conj(a + b*w) = a - b - b*w  since conj(w) = -1 - w
            return Endo(self.ring, self.a - self.b, -self.b)
        return self

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm_sq() == 1

    def sort_key(self) -> tuple:
        """Deterministic entry ordering: small norm first, positives first."""
        return (self.norm_sq(), abs(self.a), self.a < 0, abs(self.b), self.b < 0)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}

    def __repr__(self):
        if self.ring is RING_Z:
            return str(self.a)
        return f"({self.a}{self.b:+d}w)"


def units(ring: EndRing) -> tuple[Endo, ...]:
    if ring is RING_GAUSS:
        return (Endo(ring, 1), Endo(ring, -1), Endo(ring, 0, 1), Endo(ring, 0, -1))
    if ring is RING_EISENSTEIN:
        return tuple(
            Endo(ring, a, b)
            for a, b in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
        )
    return (Endo(ring, 1), Endo(ring, -1))


def canonical_associate(e: Endo) -> tuple[Endo, Endo]:
    """Return (u, u*e) where u*e is the canonical associate of e.

    The canonical associate maximises (a, b) lexicographically over all unit
    multiples; over Z this is just the absolute value.
    """
    if e.is_zero():
        return Endo(e.ring, 1), e
    best_u, best = None, None
    for u in units(e.ring):
        cand = u * e
        key = (cand.a, cand.b)
        if best is None or key > best:
            best, best_u = key, u
    return best_u, best_u * e


def euclid_div(a: Endo, b: Endo) -> tuple[Endo, Endo]:
    """Division with canonical remainder: a = q*b + r, norm(r) < norm(b).

    The quotient rounds each coordinate of a/b (in the 1, omega basis) to the
    nearest integer with floor(t + 1/2); this is translation invariant, so
    the remainder is a canonical representative of a mod b.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero endomorphism")
    if a.ring is RING_Z:
        # canonical residue in [0, |b|) regardless of the sign of b
        r = a.a % abs(b.a)
        q = (a.a - r) // b.a
        return Endo(a.ring, q), Endo(a.ring, r)
    # CM orders: rational coordinates of a/b, rounded coordinatewise
    nb = b.norm_sq()
    prod = a * b.conjugate()
    qa = Fraction(prod.a, nb)
    qb = Fraction(prod.b, nb)
    ra = (2 * qa + 1) // 2  # floor(t + 1/2)
    rb = (2 * qb + 1) // 2
    q = Endo(a.ring, int(ra), int(rb))
    r = a - q * b
    assert r.norm_sq() < nb, "Euclidean property violated"
    return q, r


def elements_of_norm_up_to(ring: EndRing, bound_sq: int) -> list[Endo]:
    """All ring elements with norm_sq <= bound_sq, in deterministic order."""
    out = []
    if ring is RING_Z:
        m = _isqrt(bound_sq)
        out = [Endo(ring, a) for a in range(-m, m + 1)]
    else:
        m = _isqrt(4 * bound_sq) + 1
        for a in range(-m, m + 1):
            for b in range(-m, m + 1):
                e = Endo(ring, a, b)
                if e.norm_sq() <= bound_sq:
                    out.append(e)
    out.sort(key=Endo.sort_key)
    return out


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


# --------------------------------------------------------------------------
# fraction-field elements (internal)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    """Element a + b*omega with rational coordinates; the fraction field."""

    ring: EndRing
    a: Fraction
    b: Fraction

    @staticmethod
    def from_endo(e: Endo) -> "FieldElem":
        return FieldElem(e.ring, Fraction(e.a), Fraction(e.b))

    def __add__(self, o):
        return FieldElem(self.ring, self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return FieldElem(self.ring, self.a - o.a, self.b - o.b)

    def __neg__(self):
        return FieldElem(self.ring, -self.a, -self.b)

    def __mul__(self, o):
        c0, c1 = self.ring.omega_sq
        bb = self.b * o.b
        return FieldElem(
            self.ring,
            self.a * o.a + c0 * bb,
            self.a * o.b + self.b * o.a + c1 * bb,
        )

    def norm_sq(self) -> Fraction:
        if self.ring is RING_GAUSS:
            return self.a * self.a + self.b * self.b
        if self.ring is RING_EISENSTEIN:
            return self.a * self.a - self.a * self.b + self.b * self.b
        return self.a * self.a

    def conjugate(self):
        if self.ring is RING_GAUSS:
            return FieldElem(self.ring, self.a, -self.b)
        if self.ring is RING_EISENSTEIN:
            return FieldElem(self.ring, self.a - self.b, -self.b)
        return self

    def inverse(self):
        n = self.norm_sq()
        if n == 0:
            raise ZeroDivisionError
        c = self.conjugate()
        return FieldElem(self.ring, c.a / n, c.b / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_endo(self) -> Endo:
        if self.a.denominator != 1 or self.b.denominator != 1:
            raise ValueError("field element is not integral")
        return Endo(self.ring, int(self.a), int(self.b))


def _field_zero(ring):
    return FieldElem(ring, Fraction(0), Fraction(0))


def _field_one(ring):
    return FieldElem(ring, Fraction(1), Fraction(0))


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------

class MorphismMatrix:
    """An r x g matrix over End(E), identifying a morphism E^g -> E^r."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: EndRing, entries: Sequence[Sequence[Endo]]):
        self.ring = ring
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.ring is not ring:
                    raise ValueError("mixed rings in matrix")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_int_rows(rows: Sequence[Sequence[int]], ring: EndRing = RING_Z) -> "MorphismMatrix":
        return MorphismMatrix(ring, [[Endo(ring, int(v)) for v in row] for row in rows])

    @staticmethod
    def identity(n: int, ring: EndRing = RING_Z) -> "MorphismMatrix":
        return MorphismMatrix(
            ring, [[Endo(ring, 1 if i == j else 0) for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(r: int, g: int, ring: EndRing = RING_Z) -> "MorphismMatrix":
        return MorphismMatrix(ring, [[Endo(ring, 0)] * g for _ in range(r)])

    # -- basics --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, MorphismMatrix)
            and self.ring is other.ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring.name, tuple((e.a, e.b) for row in self.entries for e in row)))

    def __repr__(self):
        return f"MorphismMatrix({[[repr(e) for e in row] for row in self.entries]})"

    def entry_ints(self) -> tuple:
        return tuple((e.a, e.b) for row in self.entries for e in row)

    def norm_sq(self) -> int:
        """max_ij |f_ij|^2, the square of the matrix norm |F|."""
        return max((e.norm_sq() for row in self.entries for e in row), default=0)

    def row(self, i: int) -> tuple[Endo, ...]:
        return self.entries[i]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MorphismMatrix":
        return MorphismMatrix(
            self.ring, [[self.entries[i][j] for j in col_idx] for i in row_idx]
        )

    def hstack(self, other: "MorphismMatrix") -> "MorphismMatrix":
        assert self.rows == other.rows
        return MorphismMatrix(
            self.ring, [self.entries[i] + other.entries[i] for i in range(self.rows)]
        )

    def vstack(self, other: "MorphismMatrix") -> "MorphismMatrix":
        assert self.cols == other.cols
        return MorphismMatrix(self.ring, self.entries + other.entries)

    def transpose(self) -> "MorphismMatrix":
        return MorphismMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __neg__(self):
        return MorphismMatrix(self.ring, [[-e for e in row] for row in self.entries])

    def __matmul__(self, other: "MorphismMatrix") -> "MorphismMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix dimension mismatch")
        zero = Endo(self.ring, 0)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return MorphismMatrix(self.ring, out)

    def to_field(self) -> list[list[FieldElem]]:
        return [[FieldElem.from_endo(e) for e in row] for row in self.entries]

    def to_json(self) -> dict:
        d = {
            "kind": "CM" if self.ring.is_cm else "Z",
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }
        if self.ring.is_cm:
            d["discriminant"] = self.ring.discriminant
        return d

    @staticmethod
    def from_json(d: dict) -> "MorphismMatrix":
        ring = ring_from_json(d["kind"], d.get("discriminant"))
        entries = [
            [Endo(ring, int(e["a"]), int(e.get("b", 0))) for e in row]
            for row in d["entries"]
        ]
        return MorphismMatrix(ring, entries)


# --------------------------------------------------------------------------
# exact linear algebra over the fraction field
# --------------------------------------------------------------------------

def _field_rref(rows: list[list[FieldElem]]) -> tuple[list[list[FieldElem]], list[int]]:
    """Reduced row echelon form over the fraction field; returns pivots."""
    if not rows:
        return rows, []
    m, n = len(rows), len(rows[0])
    rows = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [rows[i][j] - f * rows[r][j] for j in range(n)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def rank(M: MorphismMatrix) -> int:
    """Rank over the fraction field of End(E)."""
    if M.ring is RING_Z:
        return _int_rank([[e.a for e in row] for row in M.entries])
    _, pivots = _field_rref(M.to_field())
    return len(pivots)


def _int_rank(rows: list[list[int]]) -> int:
    """Fraction-free integer Gaussian elimination (hot path of enumeration)."""
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    rows = [row[:] for row in rows]
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, m):
            q = rows[i][c]
            if q:
                rows[i] = [p * rows[i][j] - q * rows[r][j] for j in range(n)]
        r += 1
        if r == m:
            break
    return r


def det(M: MorphismMatrix) -> FieldElem:
    """Determinant over the fraction field (exact)."""
    if M.rows != M.cols:
        raise ValueError("determinant of non-square matrix")
    n = M.rows
    rows = M.to_field()
    acc = _field_one(M.ring)
    sign = 1
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            return _field_zero(M.ring)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        acc = acc * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [
                    rows[i][j] - f * rows[c][j] if j >= c else rows[i][j]
                    for j in range(n)
                ]
    if sign < 0:
        acc = -acc
    return acc


def adjugate(M: MorphismMatrix) -> MorphismMatrix:
    """Adjugate matrix: adj(M) @ M = det(M) * I, entries stay in the ring."""
    n = M.rows
    if n != M.cols:
        raise ValueError("adjugate of non-square matrix")
    if n == 1:
        return MorphismMatrix(M.ring, [[Endo(M.ring, 1)]])
    out = [[None] * n for _ in range(n)]
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            minor = M.submatrix(
                [r for r in idx if r != j], [c for c in idx if c != i]
            )
            d = det(minor).to_endo()
            if (i + j) % 2 == 1:
                d = -d
            out[i][j] = d
    return MorphismMatrix(M.ring, out)


def kernel_lattice(M: MorphismMatrix) -> MorphismMatrix:
    """Integral basis (rows) of the kernel of M, cleared of denominators.

    The basis comes from the free columns of the reduced echelon form with a
    fixed pivot order, so it is deterministic.
    """
    rref, pivots = _field_rref(M.to_field())
    n = M.cols
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_field_zero(M.ring) for _ in range(n)]
        vec[fc] = _field_one(M.ring)
        for r_i, pc in enumerate(pivots):
            vec[pc] = -rref[r_i][fc]
        # clear denominators
        from math import lcm

        denom = 1
        for x in vec:
            denom = lcm(denom, x.a.denominator, x.b.denominator)
        basis.append([Endo(M.ring, int(x.a * denom), int(x.b * denom)) for x in vec])
    if not basis:
        return MorphismMatrix(M.ring, [[]]) if n == 0 else MorphismMatrix.zero(0, n, M.ring)
    return MorphismMatrix(M.ring, basis)


# --------------------------------------------------------------------------
# canonical Hermite form and enumeration
# --------------------------------------------------------------------------

def hermite_normal_form(M: MorphismMatrix) -> tuple[MorphismMatrix, MorphismMatrix]:
    """Canonical representative of M under left multiplication by GL(ring).

    Returns (H, U) with U @ M = H and det(U) a unit.  Columns are pivoted
    left to right (ties broken by lowest column index), pivots are canonical
    associates (positive over Z) and entries above each pivot are canonical
    residues.  Zero rows sink to the bottom.
    """
    work = [list(row) for row in M.entries]
    m = len(work)
    n = M.cols
    U = [list(row) for row in MorphismMatrix.identity(m, M.ring).entries]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        work[i] = [work[i][k] - q * work[j][k] for k in range(n)]
        U[i] = [U[i][k] - q * U[j][k] for k in range(m)]

    def row_swap(i, j):
        work[i], work[j] = work[j], work[i]
        U[i], U[j] = U[j], U[i]

    def row_scale(i, u):
        work[i] = [u * x for x in work[i]]
        U[i] = [u * x for x in U[i]]

    r = 0
    for c in range(n):
        # gcd loop on column c among rows >= r
        while True:
            nz = [i for i in range(r, m) if not work[i][c].is_zero()]
            if not nz:
                break
            piv = min(nz, key=lambda i: (work[i][c].norm_sq(), i))
            done = True
            for i in nz:
                if i == piv:
                    continue
                q, _ = euclid_div(work[i][c], work[piv][c])
                row_sub(i, piv, q)
                if not work[i][c].is_zero():
                    done = False
            if done:
                nz2 = [i for i in range(r, m) if not work[i][c].is_zero()]
                if len(nz2) == 1:
                    break
        nz = [i for i in range(r, m) if not work[i][c].is_zero()]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            row_swap(r, piv)
        u, _ = canonical_associate(work[r][c])
        if not (u.a == 1 and u.b == 0):
            row_scale(r, u)
        # reduce entries above the pivot to canonical residues
        for i in range(r):
            if not work[i][c].is_zero():
                q, _ = euclid_div(work[i][c], work[r][c])
                if not q.is_zero():
                    row_sub(i, r, q)
        r += 1
        if r == m:
            break
    return MorphismMatrix(M.ring, work), MorphismMatrix(M.ring, U)


_ENUM_CACHE: dict = {}


def _disk_cache_path(key) -> "object | None":
    """Optional persistent cache, rooted at $ELLSPLIT_CACHE_DIR."""
    import os
    from pathlib import Path

    base = os.environ.get("ELLSPLIT_CACHE_DIR")
    if not base:
        return None
    name = "hermite_" + "_".join(str(k) for k in key)
    name = name.replace("[", "").replace("]", "")
    return Path(base) / f"{name}.json"


def _disk_cache_load(key, ring):
    path = _disk_cache_path(key)
    if path is None or not path.exists():
        return None
    import json

    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    out = []
    for flat in data:
        rows = [
            [Endo(ring, a, b) for a, b in row]
            for row in flat
        ]
        out.append(MorphismMatrix(ring, rows))
    return out


def _disk_cache_store(key, mats) -> None:
    path = _disk_cache_path(key)
    if path is None:
        return
    import json

    path.parent.mkdir(parents=True, exist_ok=True)
    data = [[[[e.a, e.b] for e in row] for row in m.entries] for m in mats]
    path.write_text(json.dumps(data))


def hermite_enumerate(
    r: int, g: int, bound: float, ring: EndRing = RING_Z
) -> Iterator[MorphismMatrix]:
    """Yield one canonical representative per left-equivalence class of
    full-rank r x g matrices with |F| <= bound.

    Classes are produced shell by shell in increasing max entry norm, so the
    stream for a smaller bound is a prefix-closed subset of the stream for a
    larger one.  The representative is the canonical Hermite form, which can
    have entries larger than the bound; the class always contains a member
    inside the bound box.  Streams restart from the top on each call; results
    are memoized in memory and, when ELLSPLIT_CACHE_DIR is set, on disk.
    """
    if not (1 <= r <= g):
        raise ValueError("need 1 <= r <= g")
    bound_sq = int(Fraction(bound) ** 2)
    key = (ring.name, r, g, bound_sq)
    if key in _ENUM_CACHE:
        yield from _ENUM_CACHE[key]
        return
    disk = _disk_cache_load(key, ring)
    if disk is not None:
        _ENUM_CACHE[key] = disk
        yield from disk
        return
    collected = []
    seen: set = set()
    pool = elements_of_norm_up_to(ring, bound_sq)
    levels = sorted({e.norm_sq() for e in pool if e.norm_sq() > 0})
    for level in levels:
        sub = [e for e in pool if e.norm_sq() <= level]
        batch = []
        for flat in itertools.product(sub, repeat=r * g):
            if max(e.norm_sq() for e in flat) != level:
                continue
            M = MorphismMatrix(ring, [flat[i * g : (i + 1) * g] for i in range(r)])
            if rank(M) < r:
                continue
            H, _ = hermite_normal_form(M)
            hkey = H.entry_ints()
            if hkey in seen:
                continue
            seen.add(hkey)
            batch.append(H)
        batch.sort(
            key=lambda H: (
                sum(e.norm_sq() for row in H.entries for e in row),
                tuple(e.sort_key() for row in H.entries for e in row),
            )
        )
        for H in batch:
            collected.append(H)
            yield H
    _ENUM_CACHE[key] = collected
    _disk_cache_store(key, collected)


# --------------------------------------------------------------------------
# Gauss block decompositions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussCertificate:
    """One invertible transform delta with delta @ phi in a declared shape.

    Shapes:
      block-lower          [[phi1, 0], [star, phi2]] with phi1 square rank d1+1
      block-upper          [[phi1, star], [0, phi2]] with phi2 square rank d2+1
      left-scaled-identity  (a*I | l) with a != 0, l a single column
      right-scaled-identity (l' | b*I) with b != 0
      pivot-scaled-identity scaled identity on an explicit pivot column set
    """

    delta: MorphismMatrix
    shape: str
    blocks: dict

    def product(self, phi: MorphismMatrix) -> MorphismMatrix:
        return self.delta @ phi


@dataclass(frozen=True)
class GaussDecomposition:
    case: int  # 1 or 2, the exhaustive rank dichotomy
    rank_a: int
    rank_b: int
    certificates: tuple[GaussCertificate, ...]


def _echelon_transform(B: MorphismMatrix) -> tuple[MorphismMatrix, int]:
    """Ring transform U (det a unit) with U @ B echelon, zero rows at bottom."""
    H, U = hermite_normal_form(B)
    nonzero = sum(1 for row in H.entries if any(not e.is_zero() for e in row))
    return U, nonzero


def gauss_block_decompose(phi: MorphismMatrix, d1: int, d2: int) -> GaussDecomposition:
    """Split phi = (A|B), A the first d1+1 columns, and certify the rank case.

    Case 1 (rank B = d2, resp. rank A = d1) produces a block triangular form.
    Case 2 (rank A = d1+1 and rank B = d2+1) produces scaled-identity forms
    for each invertible window of d1+d2+1 consecutive-from-either-end
    columns; when both windows are singular a pivoted variant is emitted.
    """
    d = d1 + d2
    if phi.rows != d + 1 or phi.cols != d + 2:
        raise ValueError("phi must be (d1+d2+1) x (d1+d2+2)")
    if rank(phi) < d + 1:
        raise RankDeficient("phi must have full row rank d1+d2+1")
    ring = phi.ring
    A = phi.submatrix(range(phi.rows), range(d1 + 1))
    B = phi.submatrix(range(phi.rows), range(d1 + 1, d + 2))
    ra, rb = rank(A), rank(B)
    assert ra in (d1, d1 + 1) and rb in (d2, d2 + 1), "rank dichotomy violated"

    certs = []
    if rb == d2 or ra == d1:
        case = 1
        if rb == d2:
            # push the B-row-space into the last d2 rows: zero block on top right
            U, nonzero = _echelon_transform(B)
            assert nonzero == d2
            perm = list(range(d2, d + 1)) + list(range(d2))  # zero rows first
            P = MorphismMatrix(
                ring,
                [[Endo(ring, 1 if j == perm[i] else 0) for j in range(d + 1)] for i in range(d + 1)],
            )
            delta = P @ U
            prod = delta @ phi
            phi1 = prod.submatrix(range(d1 + 1), range(d1 + 1))
            assert rank(phi1) == d1 + 1
            certs.append(
                GaussCertificate(
                    delta,
                    "block-lower",
                    {
                        "phi1": phi1,
                        "star": prod.submatrix(range(d1 + 1, d + 1), range(d1 + 1)),
                        "phi2": prod.submatrix(range(d1 + 1, d + 1), range(d1 + 1, d + 2)),
                    },
                )
            )
        if ra == d1:
            # zero block bottom left: A-row-space into the first d1 rows
            U, nonzero = _echelon_transform(A)
            assert nonzero == d1
            delta = U
            prod = delta @ phi
            phi2 = prod.submatrix(range(d1, d + 1), range(d1 + 1, d + 2))
            assert rank(phi2) == d2 + 1
            certs.append(
                GaussCertificate(
                    delta,
                    "block-upper",
                    {
                        "phi1": prod.submatrix(range(d1), range(d1 + 1)),
                        "star": prod.submatrix(range(d1), range(d1 + 1, d + 2)),
                        "phi2": phi2,
                    },
                )
            )
    else:
        case = 2
        M1 = phi.submatrix(range(d + 1), range(d + 1))
        M2 = phi.submatrix(range(d + 1), range(1, d + 2))
        got = False
        if not det(M1).is_zero():
            delta = adjugate(M1)
            prod = delta @ phi
            a = prod.entries[0][0]
            certs.append(
                GaussCertificate(
                    delta,
                    "left-scaled-identity",
                    {"a": a, "l": prod.submatrix(range(d + 1), [d + 1])},
                )
            )
            got = True
        if not det(M2).is_zero():
            delta = adjugate(M2)
            prod = delta @ phi
            b = prod.entries[0][1]
            certs.append(
                GaussCertificate(
                    delta,
                    "right-scaled-identity",
                    {"b": b, "l_prime": prod.submatrix(range(d + 1), [0])},
                )
            )
            got = True
        if not got:
            # both end windows singular: fall back to an explicit pivot set
            _, pivots = _field_rref(phi.to_field())
            Mp = phi.submatrix(range(d + 1), pivots)
            delta = adjugate(Mp)
            prod = delta @ phi
            certs.append(
                GaussCertificate(
                    delta,
                    "pivot-scaled-identity",
                    {"a": prod.entries[0][pivots[0]], "pivots": tuple(pivots)},
                )
            )
    return GaussDecomposition(case, ra, rb, tuple(certs))


def verify_gauss_certificate(phi: MorphismMatrix, cert: GaussCertificate, d1: int, d2: int) -> bool:
    """Re-multiply delta @ phi and check the declared shape entry by entry."""
    d = d1 + d2
    prod = cert.product(phi)
    if det(cert.delta).is_zero():
        return False
    if cert.shape == "block-lower":
        for i in range(d1 + 1):
            for j in range(d1 + 1, d + 2):
                if not prod.entries[i][j].is_zero():
                    return False
        return rank(prod.submatrix(range(d1 + 1), range(d1 + 1))) == d1 + 1
    if cert.shape == "block-upper":
        for i in range(d1, d + 1):
            for j in range(d1 + 1):
                if not prod.entries[i][j].is_zero():
                    return False
        return rank(prod.submatrix(range(d1, d + 1), range(d1 + 1, d + 2))) == d2 + 1
    if cert.shape == "left-scaled-identity":
        a = cert.blocks["a"]
        if a.is_zero():
            return False
        for i in range(d + 1):
            for j in range(d + 1):
                want = a if i == j else Endo(phi.ring, 0)
                if prod.entries[i][j] != want:
                    return False
        return True
    if cert.shape == "right-scaled-identity":
        b = cert.blocks["b"]
        if b.is_zero():
            return False
        for i in range(d + 1):
            for j in range(1, d + 2):
                want = b if j == i + 1 else Endo(phi.ring, 0)
                if prod.entries[i][j] != want:
                    return False
        return True
    if cert.shape == "pivot-scaled-identity":
        a = cert.blocks["a"]
        pivots = cert.blocks["pivots"]
        if a.is_zero():
            return False
        for i in range(d + 1):
            for k, j in enumerate(pivots):
                want = a if k == i else Endo(phi.ring, 0)
                if prod.entries[i][j] != want:
                    return False
        return True
    return False


# --------------------------------------------------------------------------
# complement to an isogeny
# --------------------------------------------------------------------------

def complement_to_isogeny(phi: MorphismMatrix) -> MorphismMatrix:
    """Extend a surjection phi: E^g -> E^g' to an isogeny f: E^g -> E^g.

    The first g' rows of f are phi; the remaining rows are the conjugated
    kernel-lattice basis, so f maps ker(phi) into 0 x E^(g-g') and has
    nonzero determinant.  Any finite-index choice of complement works; this
    one is deterministic.
    """
    gp, g = phi.rows, phi.cols
    if rank(phi) < gp:
        raise NotSurjective("phi must have full row rank")
    if gp == g:
        return phi
    ker = kernel_lattice(phi)
    conj_rows = [[e.conjugate() for e in row] for row in ker.entries]
    f = MorphismMatrix(phi.ring, list(phi.entries) + conj_rows)
    assert not det(f).is_zero()
    return f
