"""Constructive unbounded-height points inside the codimension-d locus.

Given a fibered variety V in E^g (dimension d) whose base projection V1 has
dimension d1 < d, the engine finds a non-torsion base point x1 killed
exactly by some rank-d1 morphism phi1, takes the largest-seminorm
coordinate z_k of x1, and for each requested level N builds fiber points
y = (a_1 z_k, ..., a_{d2} z_k) with max |a_i| > N.  The block morphism

    phi = [ phi1      0   ]
          [ -phi2   pi    ]

then has rank d = d1 + d2 and kills (x1, y), so the point lies in the
codimension-d membership locus while its seminorm exceeds N * ||z_k||.
Every certificate re-verifies from scratch: exact zero image, rank, variety
membership by substitution, and an interval-certified height comparison.

Fiber solving is restricted to families whose fiber is a full coordinate
sub-power (y is the target directly); richer fibers would need symbolic
group-law elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .curves import (
    CurvePoint,
    PowerPoint,
    apply_morphism,
    is_torsion,
    power_point,
)
from .endo import MorphismMatrix, RING_Z, hermite_enumerate, rank
from .errors import (
    FiberSolveUnsupported,
    NoBasePointFound,
    VerificationError,
)
from .heights import HeightValue, canonical_height, seminorm
from .ideals import VarietySpec
from .subgroups import (
    MembershipRecord,
    SubgroupSpec,
    point_on_variety,
    generate_module_points,
)


@dataclass(frozen=True)
class FibrationData:
    """A corpus variety with its base/fiber splitting.

    base_coords are the first d coordinates (the projection psi); V1 is the
    image variety with dim V1 = d1 < d; fiber_coords are the remaining
    coordinates, required here to form a full free sub-power of dimension
    d2 = d - d1, with pi the identity selection on them.
    """

    variety: VarietySpec
    base_variety: VarietySpec
    d1: int
    supply: tuple[PowerPoint, ...]

    @property
    def d(self) -> int:
        return self.variety.dimension

    @property
    def g(self) -> int:
        return self.variety.g

    @property
    def d2(self) -> int:
        return self.d - self.d1

    @property
    def base_coords(self) -> tuple[int, ...]:
        return tuple(range(1, self.d + 1))

    @property
    def fiber_coords(self) -> tuple[int, ...]:
        return tuple(range(self.d + 1, self.g + 1))

    def validate(self) -> None:
        if not (0 < self.d1 < self.d):
            raise ValueError("need 0 < d1 < d for a base/fiber splitting")
        if self.g - self.d != self.d2:
            raise FiberSolveUnsupported(
                "fiber must be the full residual sub-power E^(d-d1)"
            )
        if self.base_variety.dimension != self.d1:
            raise ValueError("base variety dimension mismatch")


@dataclass(frozen=True)
class BasePointData:
    x1: PowerPoint
    phi1: MorphismMatrix
    k: int  # 1-based index of the max-seminorm coordinate of x1
    zk: CurvePoint
    zk_norm: HeightValue
    record: MembershipRecord


def find_base_point(
    fib: FibrationData, bound: float = 2, precision: float = 1e-8
) -> BasePointData:
    """First non-torsion supply point with an exact rank-d1 annihilator.

    The supply is scanned in order; for each point the subgroup classes up
    to |phi| <= bound are scanned in enumeration order, and the first
    morphism with phi1(x1) exactly zero wins.  The coordinate index k
    maximizing the component seminorm is certified by interval separation
    (non-torsion guarantees ||z_k|| > 0).
    """
    fib.validate()
    d1 = fib.d1
    for x1 in fib.supply:
        if x1.is_torsion_tuple():
            continue
        for M in hermite_enumerate(d1, fib.d, bound, RING_Z):
            img = apply_morphism(M, x1)
            if all(p.infinity for p in img.points):
                k, zk_norm = _argmax_component(x1, precision)
                zk = x1[k - 1]
                if is_torsion(zk).torsion:
                    continue
                rec = MembershipRecord(x1, SubgroupSpec(M), None, d1, "exact zero image")
                if not rec.reverify(precision):
                    raise VerificationError("base point record failed verification")
                return BasePointData(x1, M, k, zk, zk_norm, rec)
    raise NoBasePointFound(
        f"no supply point annihilated exactly at bound {bound}"
    )


def _argmax_component(x: PowerPoint, precision: float) -> tuple[int, HeightValue]:
    norms = [
        canonical_height(p, precision).sqrt() for p in x.points
    ]
    best = max(range(len(norms)), key=lambda i: norms[i].value)
    for i, nv in enumerate(norms):
        if i != best and not (norms[best].lo >= nv.hi):
            # ties are fine as long as the chosen one is maximal within radii
            if nv.lo > norms[best].hi:
                best = i
    return best + 1, norms[best]


@dataclass(frozen=True)
class UnboundedCertificate:
    point: PowerPoint
    phi1: MorphismMatrix
    phi2: MorphismMatrix
    pi: MorphismMatrix
    assembled: MorphismMatrix
    rank_assembled: int
    level: float  # the N this certificate was generated for
    k: int
    zk_norm: HeightValue
    measured: HeightValue
    coefficients: tuple[int, ...]

    @property
    def bound_value(self) -> HeightValue:
        return self.zk_norm.scale(self.level)

    def to_json(self) -> dict:
        from .serialize import power_point_to_json

        return {
            "point": power_point_to_json(self.point),
            "phi1": self.phi1.to_json(),
            "phi2": self.phi2.to_json(),
            "pi": self.pi.to_json(),
            "assembled": self.assembled.to_json(),
            "rank": self.rank_assembled,
            "N": self.level,
            "k": self.k,
            "zk_norm": {"value": self.zk_norm.value, "radius": self.zk_norm.radius},
            "seminorm": {"value": self.measured.value, "radius": self.measured.radius},
            "coefficients": list(self.coefficients),
        }


def assemble_block_morphism(
    phi1: MorphismMatrix, phi2: MorphismMatrix, d: int, g: int
) -> tuple[MorphismMatrix, MorphismMatrix]:
    """[[phi1, 0], [-phi2, pi]] with pi the selection of the fiber block."""
    ring = phi1.ring
    d1 = phi1.rows
    d2 = phi2.rows
    pi = MorphismMatrix.from_int_rows(
        [[1 if j == i else 0 for j in range(g - d)] for i in range(d2)], ring
    )
    top = phi1.hstack(MorphismMatrix.zero(d1, g - d, ring))
    bottom = (-phi2).hstack(pi)
    return top.vstack(bottom), pi


def generate_unbounded(
    fib: FibrationData,
    base: BasePointData,
    levels: Sequence[float],
    count: int = 1,
    precision: float = 1e-8,
) -> list[UnboundedCertificate]:
    """Certificates at each level N, smallest admissible coefficients first."""
    fib.validate()
    d, g, d2 = fib.d, fib.g, fib.d2
    out = []
    for N in levels:
        tuples = generate_module_points(base.zk, d2, N, count, precision)
        for coeffs, fiber_point in tuples:
            phi2 = _one_column_matrix(coeffs, base.k, d)
            target = apply_morphism(phi2, base.x1)
            # fiber is the full sub-power: y = target directly
            if not all(a == b for a, b in zip(target.points, fiber_point.points)):
                raise VerificationError("module point does not match phi2(x1)")
            point = power_point(tuple(base.x1.points) + tuple(target.points))
            assembled, pi = assemble_block_morphism(base.phi1, phi2, d, g)
            cert = UnboundedCertificate(
                point=point,
                phi1=base.phi1,
                phi2=phi2,
                pi=pi,
                assembled=assembled,
                rank_assembled=rank(assembled),
                level=float(N),
                k=base.k,
                zk_norm=base.zk_norm,
                measured=seminorm(point, precision),
                coefficients=tuple(coeffs),
            )
            problems = verify_certificate(cert, fib.variety, precision)
            if problems:
                raise VerificationError("; ".join(problems))
            out.append(cert)
    return out


def _one_column_matrix(coeffs: Sequence[int], k: int, d: int) -> MorphismMatrix:
    rows = []
    for a in coeffs:
        rows.append([a if j == k - 1 else 0 for j in range(d)])
    return MorphismMatrix.from_int_rows(rows)


def verify_certificate(
    cert: UnboundedCertificate,
    V: VarietySpec,
    precision: float = 1e-8,
) -> list[str]:
    """Re-check everything from scratch; returns a list of failures (empty = ok)."""
    problems = []
    d = V.dimension
    # block assembly honest
    expect, _ = assemble_block_morphism(cert.phi1, cert.phi2, d, V.g)
    if expect != cert.assembled:
        problems.append("assembled matrix does not match its blocks")
    if rank(cert.assembled) != d or cert.rank_assembled != d:
        problems.append("assembled morphism does not have rank d")
    img = apply_morphism(cert.assembled, cert.point)
    if not all(p.infinity for p in img.points):
        problems.append("image of the point is not exactly zero")
    if not point_on_variety(cert.point, V):
        problems.append("point fails the variety equations")
    # interval-certified unboundedness
    measured = seminorm(cert.point, precision)
    if not measured.certified_gt(cert.zk_norm.scale(cert.level)):
        problems.append("measured seminorm does not certifiably exceed N * ||z_k||")
    if abs(measured.value - cert.measured.value) > measured.radius + cert.measured.radius:
        problems.append("recorded seminorm drifted from recomputation")
    return problems


# --------------------------------------------------------------------------
# dense preimages of torsion under a dominant projection
# --------------------------------------------------------------------------

FiberSolver = Callable[[tuple[CurvePoint, ...]], list[PowerPoint]]


def dense_torsion_preimage(
    V: VarietySpec,
    projection: Sequence[int],
    solver: FiberSolver,
    torsion_pool: Sequence[CurvePoint],
) -> Iterable[tuple[PowerPoint, MembershipRecord]]:
    """Points of V over torsion tuples of a dominant coordinate projection.

    ``solver`` fills the remaining coordinates for one assignment of the
    projected ones (explicit fiber solving, corpus families only) and may
    return no points.  Every emitted point carries a codimension-d record
    whose certificate is the projection itself.
    """
    import itertools as _it

    proj = tuple(projection)
    d = V.dimension
    if len(proj) != d:
        raise ValueError("projection size must equal dim V")
    rows = [[1 if j == s - 1 else 0 for j in range(V.g)] for s in proj]
    phi = MorphismMatrix.from_int_rows(rows)
    affine_torsion = [t for t in torsion_pool if not t.infinity]
    for assign in _it.product(affine_torsion, repeat=d):
        for point in solver(assign):
            if not point_on_variety(point, V):
                raise VerificationError("fiber solver left the variety")
            rec = MembershipRecord(
                point, SubgroupSpec(phi), None, d, "projection hits a torsion tuple"
            )
            if not rec.reverify():
                raise VerificationError("torsion-preimage record failed verification")
            yield point, rec
