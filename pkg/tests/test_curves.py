"""Group law, scalar action, torsion detection, morphism application."""

import random

import pytest

from ellsplit.curves import (
    EllipticCurve,
    add,
    apply_morphism,
    curve_j0,
    is_torsion,
    power_point,
    scalar_mul,
    torsion_points,
)
from ellsplit.endo import Endo, MorphismMatrix, RING_EISENSTEIN, RING_GAUSS
from ellsplit.errors import DimensionMismatch, PointNotOnCurve, UnsupportedCMAction


def test_identity_and_negation(e37, gen_p):
    O = e37.infinity()
    assert add(gen_p, O) == gen_p
    assert add(O, gen_p) == gen_p
    assert add(gen_p, -gen_p).infinity


def test_doubling_example(e37, gen_p):
    # tangent at (0,0) has slope -1; reflect the third intersection
    assert 2 * gen_p == e37.point(1, 0)


def test_chord_example(ej0):
    assert ej0.point(2, 3) + ej0.point(0, 1) == ej0.point(-1, 0)


def test_point_validation(e37):
    with pytest.raises(PointNotOnCurve):
        e37.point(5, 5)


def test_associativity_on_lattice_combinations(e37, gen_p):
    rng = random.Random(99)
    pts = [e37.mul_int(n, gen_p) for n in range(-6, 7)]
    for _ in range(40):
        a, b, c = (rng.choice(pts) for _ in range(3))
        assert add(add(a, b), c) == add(a, add(b, c))


def test_scalar_mul_ladder(e37, gen_p):
    assert scalar_mul(0, gen_p).infinity
    assert scalar_mul(2, gen_p) == e37.point(1, 0)
    acc = e37.infinity()
    for n in range(1, 12):
        acc = add(acc, gen_p)
        assert scalar_mul(n, gen_p) == acc
    assert scalar_mul(-3, gen_p) == -scalar_mul(3, gen_p)


def test_scalar_mul_composition(e37, gen_p):
    for m, n in [(2, 3), (4, 5), (-3, 7)]:
        assert scalar_mul(m, scalar_mul(n, gen_p)) == scalar_mul(m * n, gen_p)


def test_torsion_order_six(ej0):
    Q = ej0.point(2, 3)
    ev = is_torsion(Q)
    assert ev.torsion and ev.order == 6
    assert scalar_mul(6, Q).infinity


def test_torsion_negative_cases(e37, gen_p):
    ev = is_torsion(gen_p)
    assert not ev.torsion
    assert is_torsion(e37.infinity()).order == 1
    # integrality screen: a point with a deep odd denominator
    p5 = 5 * gen_p  # (1/4, -5/8) lies at 2-adic depth 2: screened only by the sweep
    assert not is_torsion(p5).torsion
    p7 = 7 * gen_p
    ev7 = is_torsion(p7)
    assert not ev7.torsion and ev7.reason.startswith("screen:")


def test_cm_actions():
    Ei = EllipticCurve(0, 0, 0, -1, 0)  # y^2 = x^3 - x, j = 1728
    P = Ei.point(0, 0)
    iP = scalar_mul(Endo(RING_GAUSS, 0, 1), P)
    assert Ei.contains(iP)
    Ej = curve_j0()
    Q = Ej.point(2, 3)
    wQ = scalar_mul(Endo(RING_EISENSTEIN, 0, 1), Q)
    assert Ej.contains(wQ)
    # multiplicativity through the ring relation w^2 = -1 - w
    w = Endo(RING_EISENSTEIN, 0, 1)
    assert scalar_mul(w * w, Q) == scalar_mul(w, scalar_mul(w, Q))
    u6 = Endo(RING_EISENSTEIN, 1, 1)
    acc = Q
    for _ in range(6):
        acc = scalar_mul(u6, Q) if False else acc
    prod = u6
    for _ in range(5):
        prod = prod * u6
    assert scalar_mul(prod, Q) == Q  # (1+w)^6 = 1


def test_cm_rejected_off_model(e37, gen_p):
    with pytest.raises(UnsupportedCMAction):
        scalar_mul(Endo(RING_GAUSS, 0, 1), gen_p)


def test_apply_morphism_examples(e37, gen_p):
    x = power_point([gen_p, 2 * gen_p])
    assert apply_morphism(MorphismMatrix.identity(2), x).points == x.points
    img = apply_morphism(MorphismMatrix.from_int_rows([[2, -1]]), x)
    assert img[0].infinity
    x3 = power_point([gen_p, 2 * gen_p, 22 * gen_p])
    img = apply_morphism(MorphismMatrix.from_int_rows([[2, -1, 0], [0, -11, 1]]), x3)
    assert all(p.infinity for p in img.points)
    with pytest.raises(DimensionMismatch):
        apply_morphism(MorphismMatrix.identity(3), x)


def test_apply_morphism_composition(e37, gen_p):
    x = power_point([gen_p, 3 * gen_p])
    M = MorphismMatrix.from_int_rows([[1, 2], [0, 1]])
    D = MorphismMatrix.from_int_rows([[2, -1], [1, 1]])
    lhs = apply_morphism(D @ M, x)
    rhs = apply_morphism(D, apply_morphism(M, x))
    assert lhs.points == rhs.points


def test_torsion_points_inventory(ej0, e37):
    pts = torsion_points(ej0)
    assert len(pts) == 6  # O and five affine points
    orders = sorted(is_torsion(p).order for p in pts)
    assert orders == [1, 2, 3, 3, 6, 6]
    assert torsion_points(e37) == [e37.infinity()]


def test_power_point_mixed_curves_rejected(e37, ej0):
    with pytest.raises(PointNotOnCurve):
        power_point([e37.point(0, 0), ej0.point(2, 3)])
