"""Polynomial engine: parser, Buchberger, elimination, saturation, dimension."""

import random
from fractions import Fraction

import pytest
import sympy

from ellsplit.errors import BudgetExceeded
from ellsplit.poly import (
    Poly,
    eliminate,
    grevlex,
    groebner,
    ideal_equal,
    krull_dimension,
    lex,
    normal_form,
    parse_poly,
    saturate,
)

NAMES4 = ["z1", "z2", "z3", "z4"]


def P4(text):
    return parse_poly(text, NAMES4)


def test_parser_roundtrip():
    p = P4("5*z1^4*z2 - 5*z1^4*z4 - z1 + z3")
    assert parse_poly(p.render(NAMES4), NAMES4) == p
    q = parse_poly("2/3*z1^2 - (z2 - 1)*(z2 + 1)", ["z1", "z2"])
    expected = parse_poly("2/3*z1^2 - z2^2 + 1", ["z1", "z2"])
    assert q == expected


def test_parser_rejects_garbage():
    with pytest.raises(ValueError):
        parse_poly("z1 + q7", NAMES4)
    with pytest.raises(ValueError):
        parse_poly("z1^-2", NAMES4)


def test_groebner_trivial_cases():
    assert groebner([Poly.zero(2)], grevlex(2)) == ()
    x = Poly.var(0, 1)
    one = Poly.const(1, 1)
    # hand S-polynomial reduction: gcd-like collapse
    gb = groebner([x * x - one, x - one], lex(1))
    assert gb == (x - one,)


def test_groebner_idempotent_and_canonical():
    g1 = P4("z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1")
    g2 = P4("z2 - z1^5 - 1")
    gb = groebner([g1, g2], grevlex(4))
    assert groebner(gb, grevlex(4)) == gb
    # generator order does not matter
    assert groebner([g2, g1], grevlex(4)) == gb


def test_groebner_budget():
    gens = [P4("z1^3*z2 - z3*z4 + z2"), P4("z2^3*z3 - z1 - z4"), P4("z3^3 - z1*z2*z4")]
    with pytest.raises(BudgetExceeded):
        groebner(gens, grevlex(4), s_budget=3)


def _sympy_reduced(exprs, symbols, order, my_order):
    gb = sympy.groebner(exprs, *symbols, order=order)
    out = set()
    for e in gb.exprs:
        pd = sympy.Poly(e, *symbols)
        terms = {}
        for mono, coeff in pd.terms():
            terms[tuple(int(v) for v in mono)] = Fraction(str(coeff))
        # sympy returns primitive integer polynomials; make them monic
        out.add(frozenset(Poly(3, terms).monic(my_order).terms.items()))
    return out


def test_groebner_matches_sympy_on_random_ideals():
    rng = random.Random(12345)
    xs = sympy.symbols("x0 x1 x2")
    done = 0
    for _ in range(30):
        mine, theirs = [], []
        for _n in range(rng.randint(2, 3)):
            terms = {}
            expr = 0
            for _t in range(rng.randint(2, 4)):
                e = tuple(rng.randint(0, 2) for _ in range(3))
                c = rng.randint(-3, 3)
                if c == 0:
                    continue
                terms[e] = terms.get(e, Fraction(0)) + c
                expr += c * xs[0] ** e[0] * xs[1] ** e[1] * xs[2] ** e[2]
            terms = {e: c for e, c in terms.items() if c}
            if terms:
                mine.append(Poly(3, terms))
                theirs.append(expr)
        if not mine:
            continue
        for order_name, order in (("grevlex", grevlex(3)), ("lex", lex(3))):
            got = {frozenset(p.terms.items()) for p in groebner(mine, order)}
            want = _sympy_reduced(theirs, xs, order_name, order)
            assert got == want
        done += 1
    assert done >= 20


def test_normal_form_membership():
    g1 = P4("z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1")
    g2 = P4("z2 - z1^5 - 1")
    gb = groebner([g1, g2], grevlex(4))
    # an element of the ideal reduces to zero
    member = g1 * P4("z2 + z4") - g2 * P4("z1^2")
    assert normal_form(member, gb, grevlex(4)).is_zero()
    assert not normal_form(P4("z1"), gb, grevlex(4)).is_zero()


def test_eliminate_hand_case():
    names = ["z1", "z2", "w"]
    p1 = parse_poly("z1*z2 - 1", names)
    p2 = parse_poly("w - z1*z2", names)
    got = eliminate([p1, p2], [0, 1], 3)
    assert got == [parse_poly("w - 1", names)]


def test_eliminate_envelope_projection():
    gens = [P4("z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1"), P4("z2 - z1^5 - 1")]
    got = eliminate(gens, [2, 3], 4)
    assert ideal_equal(got, [P4("z2 - z1^5 - 1")], grevlex(4))


def test_saturation_idempotent_and_prime_fixed():
    gens = [P4("z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1"), P4("z2 - z1^5 - 1")]
    zprod = P4("z1*z2*z3*z4")
    s1 = saturate(gens, zprod)
    assert ideal_equal(s1, gens, grevlex(4))  # prime ideal not meeting coordinates
    s2 = saturate(s1, zprod)
    assert ideal_equal(s1, s2, grevlex(4))


def test_saturation_strips_components():
    names = ["z1", "z2"]
    # z1 * (z2 - 1): saturating by z1 leaves the z2 - 1 branch
    gens = [parse_poly("z1*z2 - z1", names)]
    sat = saturate(gens, parse_poly("z1", names))
    assert ideal_equal(sat, [parse_poly("z2 - 1", names)], grevlex(2))


def test_dimension_examples():
    assert krull_dimension([parse_poly("z2 - z1^5 - 1", ["z1", "z2"])], 2) == 1
    assert krull_dimension([], 3) == 3
    assert krull_dimension([Poly.const(2, 1)], 2) == -1
    gens = [P4("z3 - 5*z1^4*z4 + 5*z1^4*z2 - z1"), P4("z2 - z1^5 - 1")]
    assert krull_dimension(gens, 4) == 2


def test_dimension_matches_sympy_heuristic_cases():
    # a zero-dimensional system
    names = ["z1", "z2"]
    gens = [parse_poly("z1^2 - 1", names), parse_poly("z2^3 - z1", names)]
    assert krull_dimension(gens, 2) == 0
