"""Lie-algebra structure carried by the logarithmic fields.

Two computations live here.  sn_decompose splits a rational square matrix
into commuting semisimple and nilpotent parts; it works entirely over the
rationals and refuses (with NonRationalEigenvalues) when the eigenvalues do
not all lie there.  truncated_lie_algebra presents the finite dimensional
quotient D_d = Der_f / m^d Der_f as a basis with structure constants, which
is then probed for solvability, nilpotent adjoints, and the center.

D_d is built through the presentation O^s -> Der_f sending e_i to the i-th
minimal generator: the quotient equals O^s / (Syz + m^d O^s), a plain
finite dimensional linear-algebra object.  Brackets of representatives are
pushed back into coordinates through local membership certificates, whose
quotients are exact modulo m^d.  The bracket only descends to this quotient
when every logarithmic field vanishes at the origin, so product germs are
rejected up front.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .derlog import LogDerModule, is_product, minimalize
from .errors import (CertificateFailure, NonRationalEigenvalues, ProductInput,
                     PrecisionRequired, PreconditionViolated)
from .linalg import charpoly, identity, mat_add, mat_mul, mat_scale, mat_sub, rank, rref
from .orderings import OrderingSpec
from .poly import Jet, Polynomial
from .standard_bases import membership, standard_basis, syzygies
from .vfield import VectorField

LOCAL = OrderingSpec.make("local-anti-graded")


# -- rational semisimple/nilpotent splitting -----------------------------------

def _rational_roots(coeffs: List[Fraction]) -> Dict[Fraction, int]:
    """All roots with multiplicity of the monic polynomial given by
    descending coefficients, provided every root is rational; raises
    NonRationalEigenvalues otherwise."""
    work = [Fraction(c) for c in coeffs]
    roots: Dict[Fraction, int] = {}
    while len(work) > 1:
        if work[-1] == 0:
            roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
            work = work[:-1]
            continue
        root = _find_rational_root(work)
        if root is None:
            raise NonRationalEigenvalues(
                "matrix has eigenvalues outside the rationals")
        roots[root] = roots.get(root, 0) + 1
        out = [work[0]]
        for c in work[1:-1]:
            out.append(c + out[-1] * root)
        rem = work[-1] + out[-1] * root
        if rem != 0:
            raise CertificateFailure("deflation left a nonzero remainder")
        work = out
    return roots


def _find_rational_root(coeffs: List[Fraction]) -> Optional[Fraction]:
    # candidates are p/q with p dividing the constant, q the lead, after
    # clearing denominators
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    lead, const = ints[0], ints[-1]
    for p in _divisors(abs(const)):
        for q in _divisors(abs(lead)):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if _poly_eval(coeffs, cand) == 0:
                    return cand
    return None


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(m: int) -> List[int]:
    if m == 0:
        return [1]
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class SNDecomposition:
    """A = semisimple + nilpotent with the two parts commuting; the
    semisimple part is a polynomial in A, so it preserves every A-invariant
    subspace."""

    semisimple: List[List[Fraction]]
    nilpotent: List[List[Fraction]]
    eigenvalues: Dict[Fraction, int]


def sn_decompose(A: Sequence[Sequence]) -> SNDecomposition:
    n = len(A)
    A = [[Fraction(x) for x in row] for row in A]
    coeffs = charpoly(A)
    roots = _rational_roots(coeffs)
    if sum(roots.values()) != n:
        raise CertificateFailure("eigenvalue multiplicities do not add up")
    if len(roots) == 1:
        lam = next(iter(roots))
        S = mat_scale(identity(n), lam)
    else:
        p = _chinese_interpolant(roots)
        S = _apply_poly(p, A)
    N = mat_sub(A, S)
    _check_sn(S, N, roots)
    return SNDecomposition(S, N, roots)


def _chinese_interpolant(roots: Dict[Fraction, int]) -> List[Fraction]:
    """Descending coefficients of p with p = lam mod (t-lam)^mult for every
    eigenvalue, built one congruence at a time."""
    p = [Fraction(0)]
    for lam, mult in sorted(roots.items()):
        q = [Fraction(1)]
        for mu, mm in sorted(roots.items()):
            if mu == lam:
                continue
            for _ in range(mm):
                q = _poly_mul(q, [Fraction(1), -mu])
        # fix (p + q*c) = lam mod (t-lam)^mult by power series division
        target = _taylor_at(_poly_sub([lam], p), lam, mult)
        qt = _taylor_at(q, lam, mult)
        if qt[0] == 0:
            raise CertificateFailure("interpolation modulus vanished at a root")
        c_taylor = [Fraction(0)] * mult
        for k in range(mult):
            acc = target[k]
            for i in range(k):
                acc -= c_taylor[i] * qt[k - i]
            c_taylor[k] = acc / qt[0]
        c = [Fraction(0)]
        shift = [Fraction(1)]
        for k in range(mult):
            c = _poly_add(c, _poly_scale(shift, c_taylor[k]))
            shift = _poly_mul(shift, [Fraction(1), -lam])
        p = _poly_add(p, _poly_mul(q, c))
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_add(a, b):
    la, lb = len(a), len(b)
    size = max(la, lb)
    out = [Fraction(0)] * size
    for i, x in enumerate(a):
        out[size - la + i] += x
    for i, x in enumerate(b):
        out[size - lb + i] += x
    while len(out) > 1 and out[0] == 0:
        out = out[1:]
    return out


def _poly_sub(a, b):
    return _poly_add(a, [-x for x in b])


def _poly_scale(a, c):
    return [x * c for x in a]


def _taylor_at(p: List[Fraction], lam: Fraction, count: int) -> List[Fraction]:
    """First count Taylor coefficients of p at lam (derivatives over k!)."""
    out = []
    work = list(p)
    for _ in range(count):
        out.append(_poly_eval(work, lam))
        if len(work) == 1:
            work = [Fraction(0)]
            continue
        div = [work[0]]
        for c in work[1:-1]:
            div.append(c + div[-1] * lam)
        work = div
    return out


def _apply_poly(p: List[Fraction], A) -> List[List[Fraction]]:
    n = len(A)
    out = mat_scale(identity(n), p[0])
    for c in p[1:]:
        out = mat_add(mat_mul(out, A), mat_scale(identity(n), c))
    return out


def _check_sn(S, N, roots) -> None:
    n = len(S)
    if mat_mul(S, N) != mat_mul(N, S):
        raise CertificateFailure("semisimple and nilpotent parts do not commute")
    power = identity(n)
    for _ in range(n + 1):
        power = mat_mul(power, N)
    if any(any(x != 0 for x in row) for row in power):
        raise CertificateFailure("nilpotent part is not nilpotent")
    acc = identity(n)
    for lam in roots:
        acc = mat_mul(acc, mat_sub(S, mat_scale(identity(n), lam)))
    if any(any(x != 0 for x in row) for row in acc):
        raise CertificateFailure("semisimple part failed the product test")


# -- the truncated algebra ------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebraPresentation:
    """Basis and structure constants of D_d = Der_f / m^d Der_f.

    basis_fields holds representative fields (monomial multiples of the
    minimal generators); brackets[i][j] is the coordinate vector of
    [b_i, b_j].  linear_part_faithful says, for truncation 1, whether the
    linear parts of the representatives are linearly independent, i.e.
    whether the matrix picture of D_1 is faithful; None for deeper
    truncations.
    """

    truncation: int
    basis_fields: Tuple[VectorField, ...]
    brackets: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    dimension: int
    linear_part_faithful: Optional[bool]


class _QuotientCoordinates:
    """Exact coordinates on O^s / (span(rels) + m^d O^s).

    The ambient monomial basis is all (component, exponent) with
    |exponent| < d; the relation image is spanned by monomial multiples of
    the rels, reduced to row echelon form once.
    """

    def __init__(self, rels: List[Tuple[Polynomial, ...]], s: int,
                 varnames: Tuple[str, ...], d: int):
        self.s = s
        self.d = d
        self.varnames = varnames
        n = len(varnames)
        self.monos = sorted(
            ((comp, exp) for exp in itertools.product(range(d), repeat=n)
             if sum(exp) < d for comp in range(s)),
            key=lambda m: (sum(m[1]), m[1], m[0]))
        self.index = {m: i for i, m in enumerate(self.monos)}
        rows = []
        shifts = [e for e in itertools.product(range(d), repeat=n) if sum(e) < d]
        for rel in rels:
            for shift in shifts:
                row = [Fraction(0)] * len(self.monos)
                hit = False
                for comp, p in enumerate(rel):
                    for exp, c in p.terms.items():
                        moved = tuple(a + b for a, b in zip(exp, shift))
                        if sum(moved) < d:
                            row[self.index[(comp, moved)]] += c
                            hit = True
                if hit:
                    rows.append(row)
        if rows:
            self.red, self.pivots = rref(rows)
            self.red = self.red[:len(self.pivots)]
        else:
            self.red, self.pivots = [], []
        self.free_cols = [i for i in range(len(self.monos))
                          if i not in set(self.pivots)]

    @property
    def dimension(self) -> int:
        return len(self.free_cols)

    def coords_of_vector(self, h: Sequence) -> List[Fraction]:
        """Class coordinates of (h_1, .., h_s); jets must carry order >= d."""
        w = [Fraction(0)] * len(self.monos)
        for comp, q in enumerate(h):
            if isinstance(q, Jet):
                if q.order < self.d:
                    raise PrecisionRequired(
                        "coefficient known to lower order than the truncation")
                terms = q.poly.terms
            else:
                terms = q.terms
            for exp, c in terms.items():
                if sum(exp) < self.d:
                    w[self.index[(comp, exp)]] += c
        for row, piv in zip(self.red, self.pivots):
            c = w[piv]
            if c:
                for i in range(len(w)):
                    if row[i]:
                        w[i] -= c * row[i]
        if any(w[piv] != 0 for piv in self.pivots):
            raise CertificateFailure("pivot elimination failed")
        return [w[i] for i in self.free_cols]


def truncated_lie_algebra(module: LogDerModule, truncation: int = 1
                          ) -> LieAlgebraPresentation:
    """Present D_d = Der_f / m^d Der_f for d = truncation.

    Product germs are rejected: a field with nonzero constant part breaks
    the invariance of m^d Der_f under the bracket.  Every structure constant
    comes out of a membership certificate that re-multiplies exactly
    modulo m^d.
    """
    if truncation < 1:
        raise PreconditionViolated("truncation must be at least 1")
    flag, _ = is_product(module)
    if flag:
        raise ProductInput("the germ splits off a smooth factor")
    mod = module if module.minimal else minimalize(module)
    varnames = mod.varnames
    d = truncation
    gens = [tuple(f.coeffs) for f in mod.fields]
    s = len(gens)
    if s == 0:
        raise PreconditionViolated("the module has no generators")

    rels = syzygies(gens, LOCAL)
    coords = _QuotientCoordinates(rels, s, varnames, d)

    # representatives: the monomial multiple of a generator matching each
    # free column of the quotient; the class of x^a delta_i is the free
    # coordinate unit vector of (a, i), so coordinates come out directly in
    # the representative basis
    reps: List[VectorField] = []
    for col in coords.free_cols:
        comp, exp = coords.monos[col]
        h = [Polynomial.zero(varnames) for _ in range(s)]
        h[comp] = Polynomial.monomial(varnames, exp, 1)
        unit = coords.coords_of_vector(h)
        if any(unit[i] != (1 if coords.free_cols[i] == col else 0)
               for i in range(len(coords.free_cols))):
            raise CertificateFailure("representative class is not a unit vector")
        reps.append(mod.fields[comp].mul_function(
            Polynomial.monomial(varnames, exp, 1)))

    sb = standard_basis(gens, LOCAL)
    brackets: List[Tuple[Tuple[Fraction, ...], ...]] = []
    for a in reps:
        row = []
        for b in reps:
            c = a.bracket(b)
            h = _express_in_generators(tuple(c.coeffs), sb, d)
            row.append(tuple(coords.coords_of_vector(h)))
        brackets.append(tuple(row))

    faithful: Optional[bool] = None
    if d == 1:
        flat = []
        for r in reps:
            A = r.linear_part()
            flat.append([x for rw in A for x in rw])
        faithful = rank(flat) == len(reps)

    return LieAlgebraPresentation(d, tuple(reps), tuple(brackets),
                                  len(reps), faithful)


def _express_in_generators(vec, sb, d: int):
    """Quotients of a module element over the basis inputs, exact mod m^d."""
    cert = membership(vec, sb, precision=max(d, 1))
    if not cert.member:
        raise CertificateFailure("bracket is not in the module span")
    return cert.quotients


def is_solvable(pres: LieAlgebraPresentation) -> Tuple[bool, List[int]]:
    """Solvability of the presented algebra over the rationals.

    Runs the derived series on coordinates; returns the flag and the
    dimension profile, which either reaches zero (solvable) or repeats a
    positive value (not solvable).
    """
    dim = pres.dimension
    current = [[Fraction(1 if i == j else 0) for j in range(dim)]
               for i in range(dim)]
    dims = [dim]

    def bracket_coords(u, v):
        out = [Fraction(0)] * dim
        for i in range(dim):
            if u[i] == 0:
                continue
            for j in range(dim):
                if v[j] == 0:
                    continue
                c = u[i] * v[j]
                for t, val in enumerate(pres.brackets[i][j]):
                    if val:
                        out[t] += c * val
        return out

    while True:
        products = [bracket_coords(a, b) for a in current for b in current]
        if products:
            R, pivots = rref(products)
            nxt = R[:len(pivots)]
        else:
            nxt = []
        dims.append(len(nxt))
        if not nxt:
            return True, dims
        if len(nxt) == dims[-2]:
            return False, dims
        current = nxt


def ad_matrix(pres: LieAlgebraPresentation, index: int) -> List[List[Fraction]]:
    """Matrix of ad(b_index) acting on the presented basis, columns are
    bracket images."""
    dim = pres.dimension
    return [[pres.brackets[index][j][t] for j in range(dim)]
            for t in range(dim)]


def nilpotency_check(pres: LieAlgebraPresentation, index: int) -> bool:
    """Is ad of the given basis field nilpotent on the truncated algebra?"""
    M = ad_matrix(pres, index)
    power = identity(pres.dimension)
    for _ in range(pres.dimension + 1):
        power = mat_mul(M, power)
    return all(all(x == 0 for x in row) for row in power)


def center_dimension(pres: LieAlgebraPresentation) -> int:
    """Dimension of the center of the truncated algebra."""
    dim = pres.dimension
    rows = []
    for j in range(dim):
        for t in range(dim):
            rows.append([pres.brackets[i][j][t] for i in range(dim)])
    if not rows:
        return dim
    return dim - rank(rows)
