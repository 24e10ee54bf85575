import random
from fractions import Fraction

import pytest

from logvf.errors import (CertificateFailure, NonRationalEigenvalues,
                          NotAtOrigin, NotFree, PreconditionViolated,
                          ProductInput, TruncationTooSmall, VanishesAtOrigin)
from logvf.poly import Jet, Polynomial, WeightSystem, as_poly
from logvf.vfield import VectorField, lie_bracket, vf_to_str
from logvf.derlog import derlog_generators, minimalize
from logvf.normalform import (CoordChange, constant_field_split,
                              default_truncation, diagonal_symmetries,
                              factor_structure, formal_structure,
                              homological_solve, pd_normalize,
                              straighten_unit_field, unit_adjust,
                              verify_cor16)

V2 = ("x", "y")
V3 = ("x", "y", "z")
X = Polynomial.variable(V2, 0)
Y = Polynomial.variable(V2, 1)
CUSP = X**2 + Y**3


def poly2(terms):
    return Polynomial({e: Fraction(c) for e, c in terms.items()}, V2)


def chop(p, order):
    base = as_poly(p)
    return Polynomial({e: c for e, c in base.terms.items() if sum(e) < order},
                      base.vars)


# -- coordinate changes ---------------------------------------------------


def test_coordchange_roundtrip_quadratic():
    ch = CoordChange.make([X + Y * Y, Y], 6)
    assert ch.inverse_images[0] == X - Y * Y
    pert = ch.apply(CUSP)
    assert pert == chop((X + Y**2) ** 2 + Y**3, 6)
    back = ch.unapply(pert)
    assert back == chop(CUSP, 6)


def test_coordchange_rejects_singular_linear_part():
    with pytest.raises(PreconditionViolated):
        CoordChange.make([X + Y, X + Y], 5)


def test_coordchange_requires_vanishing_at_origin():
    with pytest.raises(PreconditionViolated):
        CoordChange.make([X + Polynomial.const(V2, 1), Y], 5)


def test_coordchange_composition_matches_substitution():
    a = CoordChange.make([X + Y**2, Y], 7)
    b = CoordChange.make([X, Y + X**2], 7)
    both = a.then(b)
    f = X * Y + X**3
    assert both.apply(f) == chop(b.apply(a.apply(f)), 7)


def test_coordchange_roundtrip_random():
    rng = random.Random(2026)
    for _ in range(40):
        hx = poly2({(2, 0): rng.randint(-2, 2), (0, 2): rng.randint(-2, 2),
                    (1, 1): rng.randint(-2, 2)})
        hy = poly2({(2, 0): rng.randint(-2, 2), (1, 2): rng.randint(-2, 2)})
        ch = CoordChange.make([X + hx, Y + hy], 7)
        probe = poly2({(1, 0): rng.randint(-3, 3), (0, 1): rng.randint(-3, 3),
                       (2, 1): rng.randint(-3, 3)})
        assert ch.unapply(ch.apply(probe)) == chop(probe, 7)


def test_push_field_transports_application():
    # (push delta)(push g) must equal push(delta(g)) below the order
    ch = CoordChange.make([X + Y**2, Y], 8)
    delta = VectorField([Y**2, X])
    g = X * Y + Y**3
    lhs = ch.push_field(delta).apply(ch.apply(g))
    rhs = ch.apply(as_poly(delta.apply(g)))
    assert chop(as_poly(lhs), 7) == chop(rhs, 7)


# -- diagonal symmetry spaces ----------------------------------------------


def test_diagonal_symmetries_cusp():
    space = diagonal_symmetries(CUSP)
    assert space.dim == 1
    (w, lam), = space.basis
    assert w == (3, 2) and lam == 6


def test_diagonal_symmetries_normal_crossing():
    assert diagonal_symmetries(X * Y).dim == 2


# -- the degreewise solver --------------------------------------------------


def test_homological_solve_shifts_off_resonant_term():
    delta = VectorField([X, Y * 2])
    q = homological_solve(delta, X, 2)
    assert q == X
    # and the defect is then supported on weight 2 only
    r = as_poly(delta.apply(q)) - q * 2 + X
    assert r.is_zero()


def test_homological_solve_keeps_resonant_input():
    delta = VectorField([X, Y * 2])
    assert homological_solve(delta, X, 1).is_zero()


def test_homological_solve_triangular_leakage():
    # the off-diagonal x d_y may push terms onto the resonance; they stay
    delta = VectorField([X, Y * 2 + X])
    q = homological_solve(delta, Y, 1)
    assert q == Y * (-1)
    result = as_poly(delta.apply(q)) - q + Y
    assert result == X * (-1)


def test_homological_solve_requires_linear_field():
    with pytest.raises(PreconditionViolated):
        homological_solve(VectorField([X * X, Y]), X, 2)


# -- normalizing a single field ---------------------------------------------


def test_pd_normalize_one_variable_unit_flow():
    V1 = ("x",)
    x = Polynomial.variable(V1, 0)
    change, out = pd_normalize(VectorField([x + x * x]), WeightSystem.make([]), 5)
    assert change.images[0] == x + x**2 + x**3 + x**4
    assert change.inverse_images[0] == x - x**2 + x**3 - x**4
    assert as_poly(out.coeffs[0]) == x


def test_pd_normalize_homogeneous_input_is_fixed():
    delta = VectorField([X * 2, Y + Y**2 * 0])
    change, out = pd_normalize(delta, WeightSystem.make([]), 6)
    assert change.is_identity()
    assert out.as_polynomial_field() == delta


def test_pd_normalize_keeps_resonant_terms():
    delta = VectorField([X * 2 + Y**2, Y])
    change, out = pd_normalize(delta, WeightSystem.make([]), 6)
    assert change.is_identity()
    assert out.as_polynomial_field() == delta


def test_pd_normalize_kills_off_resonant_term():
    delta = VectorField([X * 2 + Y**3, Y])
    change, out = pd_normalize(delta, WeightSystem.make([]), 6)
    assert out.as_polynomial_field() == VectorField([X * 2, Y])
    assert change.images[0] == X + Y**3
    assert change.images[1] == Y


def test_pd_normalize_diagonalizes_first():
    # semisimple part [[1,1],[0,2]] has distinct eigenvalues: a linear
    # change must make it diagonal before the degreewise sweep
    delta = VectorField([X, X + Y * 2])
    change, out = pd_normalize(delta, WeightSystem.make([]), 5)
    A = out.linear_part()
    assert A[0][1] == 0 and A[1][0] == 0
    assert sorted((A[0][0], A[1][1])) == [1, 2]


def test_pd_normalize_random_resonance_certificate():
    rng = random.Random(777)
    W0 = WeightSystem.make([])
    for _ in range(30):
        w1 = rng.randint(1, 3)
        w2 = rng.randint(1, 3)
        terms_x = {(2, 0): rng.randint(-2, 2), (0, 2): rng.randint(-2, 2)}
        terms_y = {(1, 1): rng.randint(-2, 2), (0, 3): rng.randint(-2, 2)}
        delta = VectorField([X * w1 + poly2(terms_x), Y * w2 + poly2(terms_y)])
        change, out = pd_normalize(delta, W0, 6)
        w = [Fraction(w1), Fraction(w2)]
        for i, c in enumerate(out.coeffs):
            for e in as_poly(c).terms:
                assert w[0] * e[0] + w[1] * e[1] - w[i] == 0
        moved = change.push_field(delta.as_polynomial_field())
        assert VectorField([chop(c, 5) for c in moved.coeffs]) == \
            VectorField([chop(c, 5) for c in out.coeffs])


def test_weighted_changes_fix_their_diagonal_field():
    # tangent shifts built from weight-matching monomials leave the
    # diagonal field of those same weights untouched
    rng = random.Random(4242)
    catalog = [
        ((2, 1), [{(0, 2): 1}, {}]),
        ((3, 1), [{(0, 3): 1}, {}]),
        ((3, 2), [{(0, 0): 0}, {}]),
    ]
    for _ in range(50):
        weights, shapes = catalog[rng.randrange(len(catalog))]
        sigma = VectorField.diagonal(weights, V2)
        shifts = []
        for shape in shapes:
            c = rng.randint(-3, 3)
            shifts.append(poly2({e: c * v for e, v in shape.items()}))
        ch = CoordChange.make([X + shifts[0], Y + shifts[1]], 7)
        pushed = ch.push_field(sigma)
        assert VectorField([chop(c, 7) for c in pushed.coeffs]) == sigma


# -- unit adjustment ---------------------------------------------------------


def test_unit_adjust_geometric_series():
    V1 = ("x",)
    x = Polynomial.variable(V1, 0)
    W = WeightSystem.make([(1,)])
    u, fp = unit_adjust(x + x**2, VectorField([x]), W, 6)
    # u agrees with 1/(1+x) on every fully determined degree
    expected = Polynomial({(0,): Fraction(1), (1,): Fraction(-1),
                           (2,): Fraction(1), (3,): Fraction(-1),
                           (4,): Fraction(1)}, V1)
    assert chop(u, 5) == expected
    assert as_poly(fp) == x


def test_unit_adjust_constant_cofactor_is_trivial():
    euler = VectorField([X * 3, Y * 2])
    W = WeightSystem.make([(3, 2)])
    u, fp = unit_adjust(CUSP, euler, W, 8)
    assert as_poly(u) == Polynomial.const(V2, 1)
    assert as_poly(fp) == CUSP


def test_unit_adjust_rejects_non_logarithmic_field():
    # delta(x) = x + y is not a multiple of x, so no cofactor exists
    delta = VectorField([X + Y, Y])
    with pytest.raises(PreconditionViolated):
        unit_adjust(X, delta, WeightSystem.make([(1, 1)]), 5)


# -- straightening ------------------------------------------------------------


def test_straighten_partial_is_identity():
    Z = Polynomial.variable(V3, 2)
    zero3 = Polynomial.zero(V3)
    one3 = Polynomial.const(V3, 1)
    ch = straighten_unit_field(VectorField([zero3, zero3, one3]), 5)
    assert ch.is_identity()


def test_straighten_logarithm_series():
    V1 = ("x",)
    x = Polynomial.variable(V1, 0)
    ch = straighten_unit_field(VectorField([Polynomial.const(V1, 1) + x]), 5)
    log_series = Polynomial({(1,): Fraction(1), (2,): Fraction(-1, 2),
                             (3,): Fraction(1, 3), (4,): Fraction(-1, 4)}, V1)
    exp_series = Polynomial({(1,): Fraction(1), (2,): Fraction(1, 2),
                             (3,): Fraction(1, 6), (4,): Fraction(1, 24)}, V1)
    assert ch.inverse_images[0] == log_series
    assert ch.images[0] == exp_series


def test_straighten_shear():
    one = Polynomial.const(V2, 1)
    delta = VectorField([one, X])
    ch = straighten_unit_field(delta, 6)
    assert ch.inverse_images[1] == Y - X**2 * Fraction(1, 2)
    pushed = ch.push_field(delta)
    assert VectorField([chop(c, 5) for c in pushed.coeffs]) == \
        VectorField([one, Polynomial.zero(V2)])


def test_straighten_rejects_vanishing_field():
    with pytest.raises(VanishesAtOrigin):
        straighten_unit_field(VectorField([X, Y]), 5)


def test_constant_field_split_drops_dummy_variable():
    cusp3 = Polynomial({(2, 0, 0): Fraction(1), (0, 3, 0): Fraction(1)}, V3)
    module = minimalize(derlog_generators(cusp3))
    reduced, idx, change = constant_field_split(cusp3, module.fields)
    assert idx == 2
    assert reduced == CUSP
    assert constant_field_split(CUSP, minimalize(
        derlog_generators(CUSP)).fields) is None


# -- the full pipeline ---------------------------------------------------------


def test_default_truncation_degree_rule():
    assert default_truncation(CUSP) == 8


def test_formal_structure_cusp():
    fs = formal_structure(CUSP, 8)
    assert (fs.s, fs.r) == (1, 1)
    assert fs.weights == ((Fraction(1, 2), Fraction(1, 3)),)
    assert fs.degrees == (Fraction(1),)
    assert fs.eigentable == ((Fraction(1, 6),),)
    assert fs.euler_index == 0
    assert fs.stabilized
    assert fs.change.is_identity()
    assert as_poly(fs.unit) == Polynomial.const(V2, 1)
    # scaling sigma back to cofactor 6 turns the bracket eigenvalue into 1
    assert fs.eigentable[0][0] * 6 == 1
    nu = fs.nus[0].as_polynomial_field()
    sigma = fs.sigmas[0]
    assert lie_bracket(sigma, nu) == nu.scale(Fraction(1, 6))
    assert verify_cor16(fs, CUSP) == [True]


def test_formal_structure_perturbed_cusp_matches_plain():
    pert = (X + Y**2) ** 2 + Y**3
    fs = formal_structure(pert, 8)
    base = formal_structure(CUSP, 8)
    assert (fs.s, fs.r) == (base.s, base.r)
    assert fs.weights == base.weights
    assert fs.degrees == base.degrees
    assert fs.eigentable == base.eigentable
    assert fs.change.images[0] == X - Y**2
    assert as_poly(fs.transformed) == CUSP
    assert verify_cor16(fs, pert) == [True]


def test_formal_structure_normal_crossing_three_vars():
    f = Polynomial({(1, 1, 1): Fraction(1)}, V3)
    fs = formal_structure(f, 4)
    assert (fs.s, fs.r) == (3, 0)
    names = sorted(vf_to_str(s) for s in fs.sigmas)
    assert names == ["x*d_x", "y*d_y", "z*d_z"]
    assert verify_cor16(fs, f) == [True, True, True]


def test_formal_structure_homogeneous_quartic_with_sl2():
    V4 = ("x1", "x2", "x3", "x4")

    def mono(e, c):
        return Polynomial({e: Fraction(c)}, V4)

    f = (mono((0, 2, 2, 0), 3) + mono((1, 0, 3, 0), -6) +
         mono((0, 3, 0, 1), -8) + mono((1, 1, 1, 1), 18) +
         mono((2, 0, 0, 2), -9))
    fs = formal_structure(f, 6)
    assert (fs.s, fs.r) == (2, 2)
    assert fs.stabilized
    # the two complement fields carry opposite bracket eigenvalues
    for i in range(2):
        assert fs.eigentable[i][0] == -fs.eigentable[i][1]
    assert verify_cor16(fs, f) == [True, True]


def test_formal_structure_transform_identity():
    pert = (X + Y**2) ** 2 + Y**3
    fs = formal_structure(pert, 8)
    moved = chop(as_poly(fs.unit) * pert.substitute(list(fs.change.images)), 8)
    assert moved == as_poly(fs.transformed)


def test_formal_structure_idempotent_on_its_output():
    pert = (X + Y**2) ** 2 + Y**3
    fs = formal_structure(pert, 8)
    again = formal_structure(as_poly(fs.transformed), 8)
    assert (again.s, again.r) == (fs.s, fs.r)
    assert again.weights == fs.weights
    assert again.eigentable == fs.eigentable
    assert again.change.is_identity()


def test_formal_structure_guards():
    with pytest.raises(TruncationTooSmall):
        formal_structure(CUSP, 1)
    with pytest.raises(NotAtOrigin):
        formal_structure(Polynomial.const(V2, 1) + X)
    with pytest.raises(PreconditionViolated):
        formal_structure(Polynomial.zero(V2))
    cusp3 = Polynomial({(2, 0, 0): Fraction(1), (0, 3, 0): Fraction(1)}, V3)
    with pytest.raises(ProductInput):
        formal_structure(cusp3, 4)


def test_formal_structure_refuses_irrational_spectrum():
    x, y, z = (Polynomial.variable(V3, i) for i in range(3))
    with pytest.raises(NonRationalEigenvalues):
        formal_structure(x * x + y * y + z * z, 4)


def test_verify_cor16_rejects_non_free():
    x, y, z = (Polynomial.variable(V3, i) for i in range(3))
    arrangement = x * y * z * (x + y + z)
    fs = formal_structure(arrangement, 6)
    assert fs.s + fs.r > 3
    with pytest.raises(NotFree):
        verify_cor16(fs, arrangement)


# -- factorizations ------------------------------------------------------------


def test_factor_structure_normal_crossing():
    f = X * Y
    fs = formal_structure(f, 6)
    fc = factor_structure(fs, f, [X, Y])
    assert fc.multiplicities == (1, 1)
    lams = {frozenset(row) for row in fc.lambdas}
    assert lams == {frozenset({Fraction(1), Fraction(0)})}
    for row in fc.units:
        for u in row:
            assert as_poly(u) == Polynomial.const(V2, 1)


def test_factor_structure_counts_multiplicities():
    f = X * X * Y
    fs = formal_structure(f, 6)
    fc = factor_structure(fs, f, [X, Y])
    assert fc.multiplicities == (2, 1)
    assert as_poly(fc.residual) == Polynomial.const(V2, 1)


def test_factor_structure_single_factor_cusp():
    fs = formal_structure(CUSP, 8)
    fc = factor_structure(fs, CUSP, [CUSP])
    assert fc.multiplicities == (1,)
    assert fc.lambdas == ((Fraction(1),),)


def test_factor_structure_rejects_non_divisor():
    fs = formal_structure(X * Y, 6)
    with pytest.raises(PreconditionViolated):
        factor_structure(fs, X * Y, [X + Y])
