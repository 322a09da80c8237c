"""Algebraic subgroups, torsion cosets, and membership search over samples.

An algebraic subgroup of codimension r is represented as the kernel of a
full-rank r x g matrix phi; a point lies in subgroup-plus-torsion exactly
when phi maps it to a torsion tuple.  The search over all subgroups up to a
norm bound walks the canonical left-equivalence representatives (the kernel
only depends on the class).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .curves import CurvePoint, PowerPoint, apply_morphism, is_torsion, power_point, scalar_mul
from .endo import MorphismMatrix, RING_Z, hermite_enumerate, rank
from .errors import DimensionMismatch, TorsionBase, VerificationError
from .heights import EpsilonBall, seminorm
from .ideals import VarietySpec


@dataclass(frozen=True)
class SubgroupSpec:
    """B_phi, the kernel of a surjective morphism phi: E^g -> E^r."""

    phi: MorphismMatrix

    def __post_init__(self):
        if rank(self.phi) < self.phi.rows:
            raise ValueError("subgroup matrix must have full row rank")

    @property
    def codim(self) -> int:
        return self.phi.rows

    @property
    def g(self) -> int:
        return self.phi.cols

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "codim": self.codim}


@dataclass(frozen=True)
class GeneratedSubgroup:
    """A finite-rank subgroup given by generators, fattened when sampling."""

    generators: tuple[PowerPoint, ...]
    rank_bound: int

    def sample_combinations(self, box: int) -> Iterable[PowerPoint]:
        """All integer combinations with coefficients in [-box, box]."""
        if not self.generators:
            return
        g = self.generators[0].g
        E = self.generators[0].curve
        for coeffs in itertools.product(range(-box, box + 1), repeat=len(self.generators)):
            pts = [E.infinity()] * g
            cur = None
            for c, gen in zip(coeffs, self.generators):
                term = power_point([scalar_mul(c, q) for q in gen.points])
                cur = term if cur is None else power_point(
                    [a + b for a, b in zip(cur.points, term.points)]
                )
            yield cur


TranslateSet = Union[str, Sequence[PowerPoint], EpsilonBall, GeneratedSubgroup]
TORSION = "torsion"


@dataclass(frozen=True)
class CosetSpec:
    """B + F for a finite translate list, a fattening, or plain torsion."""

    subgroup: SubgroupSpec
    translates: TranslateSet = TORSION

    def contains(self, x: "PowerPoint", precision: float = 1e-8) -> "MembershipResult":
        return membership(x, self.subgroup, self.translates, precision)


@dataclass(frozen=True)
class MembershipRecord:
    point: PowerPoint
    certificate: SubgroupSpec
    translate: Optional[PowerPoint]  # None for the torsion translate
    r_achieved: int
    evidence: str

    def reverify(self, precision: float = 1e-8) -> bool:
        """Exact from-scratch recheck, independent of how it was found."""
        if rank(self.certificate.phi) < self.r_achieved:
            return False
        x = self.point
        if self.translate is not None:
            x = power_point(
                [a - b for a, b in zip(x.points, self.translate.points)]
            )
        img = apply_morphism(self.certificate.phi, x)
        return img.is_torsion_tuple()


@dataclass(frozen=True)
class MembershipResult:
    member: Optional[bool]  # None = undecidable at precision (fattened sets)
    record: Optional[MembershipRecord]
    detail: str


def membership(
    x: PowerPoint,
    B: SubgroupSpec,
    translates: TranslateSet = TORSION,
    precision: float = 1e-8,
) -> MembershipResult:
    """Is x in B + F?

    Torsion translate: the image under phi must be a torsion tuple (exact).
    Finite translates: tested one by one (exact).  Epsilon fattening: the
    computable surrogate ||phi(x)|| <= eps with interval comparison, which
    can report None at the working precision.
    """
    if B.g != x.g:
        raise DimensionMismatch("point and subgroup live in different powers")
    if translates == TORSION:
        img = apply_morphism(B.phi, x)
        if img.is_torsion_tuple():
            rec = MembershipRecord(x, B, None, B.codim, "torsion image")
            return MembershipResult(True, rec, "image is torsion")
        return MembershipResult(False, None, "image has a non-torsion component")
    if isinstance(translates, EpsilonBall):
        img = apply_morphism(B.phi, x)
        if img.is_torsion_tuple():
            rec = MembershipRecord(x, B, None, B.codim, "torsion image (eps=any)")
            return MembershipResult(True, rec, "image is torsion")
        sn = seminorm(img, precision)
        if sn.hi <= translates.epsilon:
            rec = MembershipRecord(x, B, None, B.codim, f"||phi(x)|| <= {translates.epsilon}")
            return MembershipResult(True, rec, "image inside the fattening")
        if sn.lo > translates.epsilon:
            return MembershipResult(False, None, "image seminorm exceeds eps")
        return MembershipResult(None, None, "undecidable-at-precision")
    if isinstance(translates, GeneratedSubgroup):
        for f in translates.sample_combinations(box=translates.rank_bound):
            res = membership(x, B, [f], precision)
            if res.member:
                return res
        return MembershipResult(
            None, None, "no sampled translate certified membership"
        )
    # finite list of explicit translates
    for f in translates:
        shifted = power_point([a - b for a, b in zip(x.points, f.points)])
        img = apply_morphism(B.phi, shifted)
        if img.is_torsion_tuple():
            rec = MembershipRecord(x, B, f, B.codim, "torsion image after translate")
            return MembershipResult(True, rec, "matched a translate")
    return MembershipResult(False, None, "no translate matched")


# --------------------------------------------------------------------------
# the bounded S_r search
# --------------------------------------------------------------------------

def verify_samples_on_variety(points: Sequence[PowerPoint], V: VarietySpec) -> None:
    """Exact substitution of every sample into the variety generators."""
    for x in points:
        if not point_on_variety(x, V):
            raise VerificationError(f"sample {x!r} is not on the variety")


def point_on_variety(x: PowerPoint, V: VarietySpec) -> bool:
    if V.ambient != "elliptic":
        raise ValueError("samples are elliptic-model tuples")
    if x.g != V.g:
        return False
    if any(p.infinity for p in x.points):
        # affine generators cannot see points at infinity
        return False
    coords = []
    for p in x.points:
        coords += [p.x, p.y]
    for gen in V.generators:
        if gen.evaluate(coords) != 0:
            return False
    return all(p.curve == V.curve for p in x.points)


def search_sr(
    points: Sequence[PowerPoint],
    r: int,
    bound: float,
    translates: TranslateSet = TORSION,
    variety: Optional[VarietySpec] = None,
    precision: float = 1e-8,
) -> list[MembershipRecord]:
    """Scan all subgroup classes of codimension r up to the norm bound.

    Results are complete relative to (samples, bound) and ordered by
    (point index, enumeration index); every returned record re-verifies.
    """
    if variety is not None:
        verify_samples_on_variety(points, variety)
    records: list[MembershipRecord] = []
    if bound <= 0 or not points:
        return records
    g = points[0].g
    if r > g:
        raise ValueError("codimension exceeds the power")
    for x in points:
        for M in hermite_enumerate(r, g, bound, RING_Z):
            res = membership(x, SubgroupSpec(M), translates, precision)
            if res.member:
                assert res.record is not None
                if not res.record.reverify(precision):
                    raise VerificationError("record failed immediate re-verification")
                records.append(res.record)
    return records


def drop_to_lower_rank(record: MembershipRecord) -> MembershipRecord:
    """A record at codimension r+1 yields one at r by dropping a row.

    The first row subset of size r-1... more precisely: the first row whose
    removal keeps full rank is dropped, and the smaller record re-verified.
    """
    phi = record.certificate.phi
    r = phi.rows
    if r < 2:
        raise ValueError("cannot drop below codimension 1")
    for skip in range(r):
        rows = [phi.entries[i] for i in range(r) if i != skip]
        smaller = MorphismMatrix(phi.ring, rows)
        if rank(smaller) == r - 1:
            rec = MembershipRecord(
                record.point,
                SubgroupSpec(smaller),
                record.translate,
                r - 1,
                f"row {skip} dropped from a codim-{r} record",
            )
            if not rec.reverify():
                raise VerificationError("lower-rank record failed to verify")
            return rec
    raise VerificationError("no row subset of full rank found")


def product_record(
    rec1: MembershipRecord, rec2: MembershipRecord
) -> MembershipRecord:
    """Block-diagonal certificate for a product point from factor records."""
    phi1, phi2 = rec1.certificate.phi, rec2.certificate.phi
    top = phi1.hstack(MorphismMatrix.zero(phi1.rows, phi2.cols, phi1.ring))
    bot = MorphismMatrix.zero(phi2.rows, phi1.cols, phi2.ring).hstack(phi2)
    block = top.vstack(bot)
    pt = power_point(tuple(rec1.point.points) + tuple(rec2.point.points))
    translate = None
    if rec1.translate is not None or rec2.translate is not None:
        E = pt.curve
        t1 = rec1.translate.points if rec1.translate else (E.infinity(),) * rec1.point.g
        t2 = rec2.translate.points if rec2.translate else (E.infinity(),) * rec2.point.g
        translate = power_point(tuple(t1) + tuple(t2))
    rec = MembershipRecord(
        pt,
        SubgroupSpec(block),
        translate,
        phi1.rows + phi2.rows,
        "block-diagonal product certificate",
    )
    if not rec.reverify():
        raise VerificationError("product record failed to verify")
    return rec


# --------------------------------------------------------------------------
# dense unbounded submodule points
# --------------------------------------------------------------------------

def generate_module_points(
    z0: CurvePoint,
    n: int,
    N: float,
    count: int,
    precision: float = 1e-8,
) -> list[tuple[tuple[int, ...], PowerPoint]]:
    """Tuples (a_1 z0, ..., a_n z0) with pairwise distinct coefficient
    vectors and max |a_i| > N.

    By homogeneity each tuple has seminorm max|a_i| * ||z0|| > N * ||z0||;
    the caller can re-check that numerically.  Enumeration walks sup-norm
    shells in a fixed order, so output is deterministic.
    """
    if is_torsion(z0).torsion:
        raise TorsionBase("the base point must be non-torsion")
    out: list[tuple[tuple[int, ...], PowerPoint]] = []
    shell = int(N) + 1 if N == int(N) else int(N) + 1
    M = max(shell, 1)
    while len(out) < count:
        for vec in itertools.product(range(0, M + 1), repeat=n):
            if max(vec) != M:
                continue
            pts = power_point([scalar_mul(a, z0) for a in vec])
            out.append((vec, pts))
            if len(out) >= count:
                break
        M += 1
    return out
