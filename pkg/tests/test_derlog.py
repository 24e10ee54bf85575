import random
from fractions import Fraction

import pytest

from logvf.derlog import (EulerCheck, LogDerModule, coefficient_matrix,
                          derlog_generators, diagonal_symmetry_space, euler_check,
                          is_product, koszul_free_check, minimalize, poly_det,
                          saito_free_check, squarefree_check, strong_euler_check)
from logvf.errors import (NotAtOrigin, NotFree, NotLogarithmic,
                          PrecisionRequired, PreconditionViolated, WrongCount)
from logvf.orderings import OrderingSpec
from logvf.poly import Polynomial, poly_parse
from logvf.standard_bases import membership, standard_basis
from logvf.vfield import VectorField

XY = ("x", "y")
XYZ = ("x", "y", "z")
LOCAL = OrderingSpec.make("local-anti-graded")

CUSP = poly_parse("x^2 + y^3", XY)


def fields_span_contains(fields, probe_coeffs, varnames):
    vecs = [tuple(f.coeffs) for f in fields]
    sb = standard_basis(vecs, LOCAL)
    probe = tuple(poly_parse(t, varnames) for t in probe_coeffs)
    try:
        return membership(probe, sb).member
    except PrecisionRequired:
        return True


def test_cusp_generators_satisfy_cofactor_identity():
    mod = derlog_generators(CUSP)
    assert mod.fields
    for field, cof in zip(mod.fields, mod.cofactors):
        assert field.apply(CUSP) == cof * CUSP


def test_cusp_module_contains_known_fields():
    mod = derlog_generators(CUSP)
    # the weighted Euler field and the Hamiltonian field of f
    assert fields_span_contains(mod.fields, ("3*x", "2*y"), XY)
    assert fields_span_contains(mod.fields, ("3*y^2", "-2*x"), XY)


def test_cusp_minimal_generators():
    mod = minimalize(derlog_generators(CUSP))
    assert mod.minimal
    assert len(mod.fields) == 2
    for field, cof in zip(mod.fields, mod.cofactors):
        assert field.apply(CUSP) == cof * CUSP
    # minimal generators still span the Euler field
    assert fields_span_contains(mod.fields, ("3*x", "2*y"), XY)


def test_normal_crossing_two_vars():
    f = poly_parse("x*y", XY)
    mod = minimalize(derlog_generators(f))
    assert len(mod.fields) == 2
    assert fields_span_contains(mod.fields, ("x", "0"), XY)
    assert fields_span_contains(mod.fields, ("0", "y"), XY)
    check = saito_free_check(mod.fields, f)
    assert check.free
    assert check.unit_value_at_0 != 0


def test_cusp_is_free_by_determinant():
    f = CUSP
    mod = minimalize(derlog_generators(f))
    check = saito_free_check(mod.fields, f)
    assert check.free
    # the determinant is a constant times f here
    cert = membership(check.determinant, standard_basis([f]))
    assert cert.member
    q = cert.quotients[0]
    assert q.total_degree() == 0
    assert q.constant_term() == check.unit_value_at_0


def test_saito_wrong_count():
    mod = minimalize(derlog_generators(CUSP))
    with pytest.raises(WrongCount):
        saito_free_check(mod.fields[:1], CUSP)


def test_saito_not_logarithmic():
    dx = VectorField.partial(XY, 0)
    dy = VectorField.partial(XY, 1)
    with pytest.raises(NotLogarithmic):
        saito_free_check([dx, dy], CUSP)


def test_quadric_cone_is_not_free():
    f = poly_parse("x^2 + y^2 + z^2", XYZ)
    mod = minimalize(derlog_generators(f))
    # Euler plus the three rotations: four minimal generators in three
    # variables, so no basis of three can exist
    assert len(mod.fields) == 4
    check = saito_free_check(mod.fields[:3], f)
    assert not check.free
    with pytest.raises(NotFree):
        koszul_free_check(mod.fields[:3], f)


def test_koszul_for_normal_crossings():
    for names, text in ((XY, "x*y"), (XYZ, "x*y*z")):
        f = poly_parse(text, names)
        mod = minimalize(derlog_generators(f))
        assert koszul_free_check(mod.fields, f)


def test_cusp_is_koszul_free():
    mod = minimalize(derlog_generators(CUSP))
    assert koszul_free_check(mod.fields, CUSP)


def test_poly_det():
    x, y = poly_parse("x", XY), poly_parse("y", XY)
    assert poly_det([[x, y], [y, x]]) == poly_parse("x^2 - y^2", XY)
    rows = [[x, Polynomial.zero(XY)], [Polynomial.zero(XY), y]]
    assert poly_det(rows) == poly_parse("x*y", XY)


def test_diagonal_symmetry_space_cusp():
    assert diagonal_symmetry_space(CUSP) == [(6, (3, 2))]


def test_diagonal_symmetry_space_shifted_weight():
    f = poly_parse("z*(x^4 + x*y^4 + y^5)", XYZ)
    assert diagonal_symmetry_space(f) == [(1, (0, 0, 1))]


def test_diagonal_symmetry_space_torus():
    # x*y*z admits a two-parameter family on top of the Euler direction
    f = poly_parse("x*y*z", XYZ)
    space = diagonal_symmetry_space(f)
    assert len(space) == 3
    for lam, w in space:
        assert sum(w) == lam


def test_euler_check_cusp():
    res = euler_check(CUSP)
    assert res.homogeneous
    assert res.exact
    assert res.field.apply(CUSP) == CUSP


def test_strong_euler_cusp():
    res = strong_euler_check(CUSP)
    assert res.homogeneous
    assert res.field.vanishes_at_origin()


def test_euler_fails_for_known_inhomogeneous_germ():
    f = poly_parse("x^4 + x*y^4 + y^5", XY)
    assert not euler_check(f).homogeneous
    assert not strong_euler_check(f).homogeneous


def test_shifted_product_is_strong_euler():
    f = poly_parse("z*(x^4 + x*y^4 + y^5)", XYZ)
    res = strong_euler_check(f)
    assert res.homogeneous
    assert res.exact
    assert res.field == VectorField.diagonal((0, 0, 1), XYZ)
    assert res.field.apply(f) == f


def test_euler_rejects_units_and_zero():
    with pytest.raises(NotAtOrigin):
        euler_check(poly_parse("1 + x", XY))
    with pytest.raises(PreconditionViolated):
        euler_check(Polynomial.zero(XY))


def test_product_detection():
    f3 = poly_parse("x^2 + y^3", XYZ)
    mod = derlog_generators(f3)
    flag, witness = is_product(mod)
    assert flag
    assert witness is not None
    assert not witness.vanishes_at_origin()
    assert not is_product(derlog_generators(CUSP))[0]


def test_squarefree_check():
    assert squarefree_check(CUSP) == (True, 0)
    ok, dim = squarefree_check(poly_parse("x^2*y", XY))
    assert not ok
    assert dim == 1
    assert squarefree_check(poly_parse("x*y*z", XYZ))[0]
    assert not squarefree_check(Polynomial.zero(XY))[0]


def test_quasihomogeneous_curves_random():
    rng = random.Random(4142)
    for _ in range(30):
        a = rng.randrange(2, 6)
        b = rng.randrange(2, 6)
        f = poly_parse(f"x^{a} + y^{b}", XY)
        mod = minimalize(derlog_generators(f))
        assert len(mod.fields) == 2
        for field, cof in zip(mod.fields, mod.cofactors):
            assert field.apply(f) == cof * f
        res = euler_check(f)
        assert res.homogeneous and res.exact
        assert saito_free_check(mod.fields, f).free


def test_minimalize_drops_multiples():
    # hand the module a redundant generator and expect it to go away
    mod = derlog_generators(CUSP)
    x = poly_parse("x", XY)
    extra = mod.fields[0].mul_function(x)
    padded = LogDerModule(CUSP, mod.fields + (extra,),
                          mod.cofactors + (mod.cofactors[0] * x,))
    assert len(minimalize(padded).fields) == 2
