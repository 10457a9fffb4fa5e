"""Change of variables to the separating coordinates: exact push-forward
of the radial operator, the separated template, and the transformed
potential."""
import random
from fractions import Fraction

import pytest

from oscchain import sepvar
from oscchain.exact import MultiPoly, RationalFn
from oscchain.model import Case, Params, nu_coefficients

from conftest import draw_fraction, draw_params


def test_w_coordinate_product_identity(rng):
    """w1 w2 = (m2+m3) root^2 w3 exactly, making the square root rational."""
    for _ in range(3):
        p = draw_params(rng)
        wm = sepvar.build_wmap(p)
        s = p.m2 + p.m3
        lhs = RationalFn(wm.w1 * wm.w2)
        rhs = RationalFn(s * wm.denominator_root ** 2) * wm.w3
        assert lhs.equals(rhs)


def test_separated_template_coefficients():
    p = Params(m1=1, m2=1, m3=1)
    form = sepvar.match_separated_template(sepvar.build_opham(p), p)
    assert form.A == 2 and form.B == 6


def test_separated_template_general_masses(rng):
    p = draw_params(rng)
    form = sepvar.match_separated_template(sepvar.build_opham(p), p)
    m1, m2, m3 = p.masses
    assert form.A == (m2 + m3) / (m2 * m3)
    assert form.B == (m2 + m3) * (m1 + m2 + m3) / m1


def test_template_mismatch_detected():
    p = Params(m1=1, m2=1, m3=1)
    op = sepvar.build_opham(p)
    # perturb one coefficient
    broken = type(op)(op.variables, dict(op.terms))
    key = next(iter(broken.terms))
    broken.terms[key] = broken.terms[key] + RationalFn(
        MultiPoly.const(op.variables, Fraction(1)))
    with pytest.raises(sepvar.TemplateMismatch):
        sepvar.match_separated_template(broken, p)


def test_pushforward_exact(rng):
    assert sepvar.verify_pushforward(Params(m1=1, m2=1, m3=1, d=3), seed=1)
    assert sepvar.verify_pushforward(
        Params(m1=2, m2=3, m3=5, d=4), seed=2)


def test_pushforward_negative_control():
    """Operators built for different masses must not push forward alike."""
    p = Params(m1=1, m2=1, m3=1, d=3)
    q = Params(m1=1, m2=1, m3=2, d=3)
    for derivs in set(sepvar.build_opham(p).terms):
        same = sepvar.build_opham(p).terms[derivs].equals(
            sepvar.build_opham(q).terms.get(derivs, RationalFn(
                MultiPoly.zero(sepvar.W3))))
        if not same:
            return
    pytest.fail("operators for different masses coincide")


def test_jet2_matches_exact_derivatives(rng):
    vs = ("x", "y")
    f = MultiPoly(vs, {(0, 0): Fraction(2), (1, 0): Fraction(3),
                       (1, 1): Fraction(-1), (2, 0): Fraction(5),
                       (0, 2): Fraction(7), (2, 1): Fraction(1, 3)})
    pt = {"x": Fraction(2, 3), "y": Fraction(-1, 2)}
    jets = {v: sepvar.Jet2.variable(2, i, pt[v]) for i, v in enumerate(vs)}
    jet = sepvar._poly_jet(f, jets, 2)
    assert jet.value() == f.eval(pt)
    assert jet.derivative((1, 0)) == f.diff("x").eval(pt)
    assert jet.derivative((0, 1)) == f.diff("y").eval(pt)
    assert jet.derivative((2, 0)) == f.diff("x").diff("x").eval(pt)
    assert jet.derivative((1, 1)) == f.diff("x").diff("y").eval(pt)


def test_jet2_inverse():
    j = sepvar.Jet2.variable(1, 0, Fraction(3))
    inv = j.inverse()
    assert inv.value() == Fraction(1, 3)
    assert inv.derivative((1,)) == Fraction(-1, 9)
    assert inv.derivative((2,)) == Fraction(2, 27)


def test_potential_w3_independence_iff_first_relation():
    # equal masses, nu12 = nu13: independent of w3
    p = Params(m1=1, m2=1, m3=1)
    pot = sepvar.potential_in_w(p, (Fraction(1), Fraction(1), Fraction(2)))
    assert pot.w3_independent and pot.resolved_sign is None
    # break the relation: sqrt term appears, sign resolved
    pot2 = sepvar.potential_in_w(p, (Fraction(1), Fraction(2), Fraction(2)))
    assert not pot2.w3_independent
    assert pot2.resolved_sign in (1, -1)


def test_potential_coefficients_closed_form(rng):
    p = draw_params(rng)
    nus = nu_coefficients(p)
    pot = sepvar.potential_in_w(p, nus)
    m1, m2, m3 = p.masses
    s = m2 + m3
    assert pot.c1 == (m3 ** 2 * nus[0] + m2 ** 2 * nus[1]
                      + s ** 2 * nus[2]) / s ** 2
    assert pot.c2 == (nus[0] + nus[1]) / s ** 2
    assert pot.w3_independent == (m2 * nus[1] == m3 * nus[0])


def test_one_variable_operator_action():
    op = sepvar.one_variable_operator(Fraction(6), 3)
    w = MultiPoly.var(("w",), "w")
    got = op.apply(w * w)
    # (2w d^2 + 3 d + 6/w) w^2 = 4w + 6w + 6w = 16w
    assert got.equals(RationalFn(16 * w))
