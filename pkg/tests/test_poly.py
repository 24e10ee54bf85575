"""Polynomial, parser, and jet behaviour.

Expected values for the derived cases were produced by independent hand
computation (termwise power rule, direct expansion) and frozen here.
"""

from fractions import Fraction

import pytest

from logvf.errors import (
    OrderMismatch,
    ParseError,
    PreconditionViolated,
    UnknownVariable,
    VariableMismatch,
)
from logvf.poly import (
    Jet,
    Polynomial,
    WeightSystem,
    graded_parts,
    multihomog_decompose_poly,
    poly_parse,
    poly_to_str,
)

XY = ("x", "y")


def P(text, varnames=XY):
    return poly_parse(text, varnames)


class TestParse:
    def test_cusp(self):
        f = P("x^2 + y^3")
        assert f.terms == {(2, 0): Fraction(1), (0, 3): Fraction(1)}

    def test_rational_coefficients(self):
        f = P("1/2*x - 3/4*y^2")
        assert f.coeff((1, 0)) == Fraction(1, 2)
        assert f.coeff((0, 2)) == Fraction(-3, 4)

    def test_parentheses_and_products(self):
        f = P("x*y*(x+y)*(x*z+y)", ("x", "y", "z"))
        g = P("x^3*y*z + x^2*y^2 + x^2*y^2*z + x*y^3", ("x", "y", "z"))
        assert f == g

    def test_leading_minus(self):
        assert P("-x") == -P("x")

    def test_double_star_power(self):
        assert P("x**3") == P("x^3")

    def test_power_of_sum(self):
        assert P("(x+y)^2") == P("x^2 + 2*x*y + y^2")

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            P("x + t")

    def test_malformed(self):
        for bad in ("x +", "* x", "x ^ y", "(x", "3/0"):
            with pytest.raises(ParseError):
                P(bad)

    def test_example41_polynomial(self):
        vs = ("x1", "x2", "x3", "x4")
        f = poly_parse(
            "3*x2^2*x3^2 - 6*x1*x3^3 - 8*x2^3*x4 + 18*x1*x2*x3*x4 - 9*x1^2*x4^2", vs)
        assert len(f.terms) == 5
        assert f.coeff((1, 1, 1, 1)) == 18

    def test_roundtrip_through_str(self):
        for text in ("x^2 + y^3", "-x + 1/2*y", "x*y - 7", "3*x^2*y - y + 2"):
            f = P(text)
            assert P(poly_to_str(f)) == f


class TestArithmetic:
    def test_product_expansion(self):
        # (x + 2y)(x - 2y) = x^2 - 4y^2, by hand
        assert P("x + 2*y") * P("x - 2*y") == P("x^2 - 4*y^2")

    def test_cancellation_drops_terms(self):
        f = P("x^2 + y") - P("y")
        assert f.terms == {(2, 0): Fraction(1)}

    def test_scalar_ops(self):
        assert P("x") * Fraction(1, 3) == P("1/3*x")
        assert P("x") + 1 == P("x + 1")

    def test_pow(self):
        assert P("x + y") ** 3 == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")
        assert P("x") ** 0 == P("1")

    def test_variable_mismatch(self):
        with pytest.raises(VariableMismatch):
            P("x") + poly_parse("z", ("z",))

    def test_degrees(self):
        f = P("x^2*y + x")
        assert f.total_degree() == 3
        assert f.low_degree() == 1
        assert Polynomial.zero(XY).total_degree() == -1


class TestCalculus:
    def test_partial_derivative(self):
        # d/dx (x^2 y + y^3) = 2xy, by power rule
        f = P("x^2*y + y^3")
        assert f.diff(0) == P("2*x*y")
        assert f.diff(1) == P("x^2 + 3*y^2")

    def test_derivative_of_constant(self):
        assert P("5").diff(0).is_zero()

    def test_laurent_power_rule(self):
        f = Polynomial.monomial(XY, (-2, 0), 1)
        assert f.diff(0) == Polynomial.monomial(XY, (-3, 0), -2)

    def test_substitute_shift(self):
        # (x+y^2)^2 + y^3 expanded by hand
        f = P("x^2 + y^3")
        g = f.substitute([P("x + y^2"), P("y")])
        assert g == P("x^2 + 2*x*y^2 + y^4 + y^3")

    def test_shift_point(self):
        f = P("x^2 + y")
        assert f.shift([1, 0]) == P("x^2 + 2*x + 1 + y")


class TestJet:
    def test_truncate_keeps_low_terms(self):
        j = P("1 + x + x^2 + x^3").truncate(3)
        assert j.poly == P("1 + x + x^2")
        assert j.order == 3

    def test_jet_product_order_gain_in_m(self):
        # two jets vanishing to order 2, both known mod m^5: product known mod m^7
        a = P("x^2").truncate(5)
        b = P("y^2").truncate(5)
        assert (a * b).order == 7

    def test_jet_product_retruncates(self):
        a = P("1 + x^2").truncate(3)
        b = P("1 + x^2").truncate(3)
        c = a * b
        assert c.order == 3
        assert c.poly == P("1 + 2*x^2")

    def test_diff_costs_one_order(self):
        j = P("x^3").truncate(5)
        assert j.diff(0).order == 4

    def test_inverse_geometric(self):
        u = P("1 - x").truncate(5)
        inv = u.inverse()
        assert inv.poly == P("1 + x + x^2 + x^3 + x^4")
        assert (u * inv).truncate(5).poly == P("1")

    def test_inverse_with_constant(self):
        u = P("2 + x").truncate(4)
        assert (u * u.inverse()).truncate(4).poly == P("1")

    def test_inverse_requires_unit(self):
        with pytest.raises(PreconditionViolated):
            P("x").truncate(4).inverse()

    def test_mixed_orders_take_min(self):
        a = P("1 + x").truncate(5)
        b = P("1 + y").truncate(3)
        assert (a + b).order == 3

    def test_substitute_into_jet_images(self):
        f = P("x^2")
        img = P("x + x^2").truncate(4)
        out = f.substitute([img, Jet(P("y"), 4)])
        assert out.poly == P("x^2 + 2*x^3")


class TestWeights:
    def test_monomial_degree(self):
        W = WeightSystem.make([[3, 2]])
        assert W.monomial_degree((2, 0)) == (Fraction(6),)
        assert W.monomial_degree((0, 3)) == (Fraction(6),)

    def test_multihomog_poly_components_sum(self):
        W = WeightSystem.make([[1, 1], [1, -1]])
        f = P("x^2 + x*y + y^3")
        comps = multihomog_decompose_poly(f, W)
        assert sum(comps.values(), Polynomial.zero(XY)) == f
        assert comps[(Fraction(2), Fraction(0))] == P("x*y")

    def test_graded_parts(self):
        f = P("x + x*y + y^3")
        parts = graded_parts(f)
        assert parts[1] == P("x")
        assert parts[2] == P("x*y")
        assert parts[3] == P("y^3")
