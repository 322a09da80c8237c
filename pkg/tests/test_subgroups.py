"""Subgroup membership, bounded search, nesting and products."""

import pytest

from ellsplit.corpus import load_entry
from ellsplit.curves import power_point, scalar_mul
from ellsplit.endo import MorphismMatrix
from ellsplit.errors import TorsionBase
from ellsplit.heights import EpsilonBall, canonical_height
from ellsplit.subgroups import (
    GeneratedSubgroup,
    SubgroupSpec,
    TORSION,
    drop_to_lower_rank,
    generate_module_points,
    membership,
    product_record,
    search_sr,
)


def test_membership_forced_by_linearity(gen_p):
    x = power_point([gen_p, 2 * gen_p])
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]]))
    res = membership(x, B, TORSION)
    assert res.member and res.record.reverify()


def test_membership_group_law_case(e37):
    x = power_point([e37.point(0, 0), e37.point(1, 0)])
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]]))
    assert membership(x, B, TORSION).member


def test_membership_generic_negative(gen_p):
    x = power_point([gen_p, 3 * gen_p])
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]]))
    res = membership(x, B, TORSION)
    assert res.member is False
    # certified positive height of the image component
    img = scalar_mul(2, gen_p) - scalar_mul(3, gen_p)
    h = canonical_height(img)
    assert h.lo > 0


def test_membership_epsilon_ball(gen_p, ej0):
    x = power_point([gen_p, 2 * gen_p])
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]]))
    assert membership(x, B, EpsilonBall(0.0)).member
    y = power_point([gen_p, 3 * gen_p])
    res = membership(y, B, EpsilonBall(0.01))
    assert res.member is False


def test_membership_finite_translates(e37, gen_p):
    # x - f lands in the subgroup for the second translate
    x = power_point([3 * gen_p, 6 * gen_p + gen_p])
    f = power_point([e37.infinity(), gen_p])
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]]))
    res = membership(x, B, [f])
    assert res.member and res.record.translate == f
    assert res.record.reverify()


def test_search_sr_finds_the_expected_certificate(e37):
    C = load_entry("C").variety
    pts = [power_point([e37.point(0, 0), e37.point(1, 0)])]
    records = search_sr(pts, 1, 2, TORSION, variety=C)
    assert len(records) == 1
    assert [[e.a for e in row] for row in records[0].certificate.phi.entries] == [[2, -1]]
    assert records[0].reverify()


def test_search_sr_full_rank_empty(gen_p):
    pts = [power_point([gen_p, 2 * gen_p])]
    assert search_sr(pts, 2, 2, TORSION) == []


def test_search_sr_zero_bound(gen_p):
    assert search_sr([power_point([gen_p, 2 * gen_p])], 1, 0, TORSION) == []


def test_search_sr_monotone_in_bound(e37, gen_p):
    pts = [power_point([gen_p, 2 * gen_p]), power_point([3 * gen_p, 6 * gen_p])]
    small = search_sr(pts, 1, 1, TORSION)
    big = search_sr(pts, 1, 2, TORSION)
    # every record found at the smaller bound appears at the larger bound
    small_set = {(r.point.points, r.certificate.phi.entry_ints()) for r in small}
    big_set = {(r.point.points, r.certificate.phi.entry_ints()) for r in big}
    assert small_set <= big_set and len(big) >= len(small)


def test_nesting_drop_rank(e37, gen_p):
    # a rank-2 record on a fully torsion-related triple
    x = power_point([gen_p, 2 * gen_p, 3 * gen_p])
    phi = MorphismMatrix.from_int_rows([[2, -1, 0], [1, 1, -1]])
    from ellsplit.subgroups import MembershipRecord

    rec = MembershipRecord(x, SubgroupSpec(phi), None, 2, "constructed")
    assert rec.reverify()
    lower = drop_to_lower_rank(rec)
    assert lower.r_achieved == 1 and lower.reverify()


def test_product_inclusion_constructive(e37):
    C = load_entry("C").variety
    x1 = power_point([e37.point(0, 0), e37.point(1, 0)])
    recs = search_sr([x1], 1, 2, TORSION, variety=C)
    rec = recs[0]
    prod = product_record(rec, rec)
    assert prod.r_achieved == 2
    assert prod.point.g == 4
    assert prod.reverify()


def test_generate_module_points_examples(gen_p):
    out = generate_module_points(gen_p, 1, 0, 1)
    assert out[0][0] == (1,)
    out = generate_module_points(gen_p, 2, 3, 4)
    vecs = [v for v, _ in out]
    assert len(set(vecs)) == 4
    assert all(max(v) > 3 for v in vecs)
    # at least one point off the diagonal y1 = y2
    off = [pt for v, pt in out if pt[0] != pt[1]]
    assert off
    base = canonical_height(gen_p, 1e-9)
    from ellsplit.heights import seminorm

    for v, pt in out:
        sn = seminorm(pt, 1e-9)
        import math

        expect = max(abs(a) for a in v) * math.sqrt(base.value)
        assert abs(sn.value - expect) <= sn.radius + 1e-4
        assert sn.lo > 3 * math.sqrt(base.hi)


def test_generate_module_points_rejects_torsion(ej0):
    with pytest.raises(TorsionBase):
        generate_module_points(ej0.point(2, 3), 2, 1, 1)


def test_generated_subgroup_sampling(e37, gen_p):
    gamma = GeneratedSubgroup((power_point([gen_p, e37.infinity()]),), 1)
    B = SubgroupSpec(MorphismMatrix.from_int_rows([[0, 1]]))
    # x = (q, 0) + gamma combination
    x = power_point([gen_p, e37.infinity()])
    res = membership(x, B, gamma)
    assert res.member


def test_coset_spec_wrapper(gen_p):
    from ellsplit.subgroups import CosetSpec

    coset = CosetSpec(SubgroupSpec(MorphismMatrix.from_int_rows([[2, -1]])))
    assert coset.contains(power_point([gen_p, 2 * gen_p])).member
    assert coset.contains(power_point([gen_p, 3 * gen_p])).member is False
