"""Laurent-tail classes and the d1 obstruction map.

The carrier H is modeled by monomials whose exponents are all negative:
projecting a Laurent polynomial onto that span is a term filter, and a
logarithmic basis acts on it coordinate-wise through d1.  A nonzero common
kernel vector refutes the necessary condition for the comparison theorem;
an empty kernel inside the searched box proves nothing.
"""

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (CertificateFailure, HasConstantPart, NotFree,
                     NotLogarithmic, PreconditionViolated, ProductInput,
                     VariableMismatch)
from .poly import Polynomial, as_poly
from .vfield import VectorField
from .linalg import rref
from .derlog import derlog_generators, is_product, minimalize, saito_free_check


class CechClass:
    """Finite rational combination of all-negative-exponent monomials."""

    __slots__ = ("terms", "vars")

    def __init__(self, terms: Dict[Tuple[int, ...], Fraction],
                 varnames: Sequence[str]):
        self.vars: Tuple[str, ...] = tuple(varnames)
        clean: Dict[Tuple[int, ...], Fraction] = {}
        for exp, c in terms.items():
            if len(exp) != len(self.vars):
                raise VariableMismatch(
                    f"exponent {exp} does not fit {len(self.vars)} variables")
            if any(k >= 0 for k in exp):
                raise PreconditionViolated(
                    f"class exponents must all be negative, got {exp}")
            c = Fraction(c)
            if c != 0:
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def zero(cls, varnames: Sequence[str]) -> "CechClass":
        return cls({}, varnames)

    @classmethod
    def top(cls, varnames: Sequence[str]) -> "CechClass":
        """The class of 1/(x_1 ... x_n)."""
        return cls({(-1,) * len(varnames): Fraction(1)}, varnames)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "CechClass":
        c = Fraction(c)
        return CechClass({e: c * v for e, v in self.terms.items()}, self.vars)

    def __add__(self, other: "CechClass") -> "CechClass":
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + v
        return CechClass(out, self.vars)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CechClass) and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def as_laurent(self) -> Polynomial:
        return Polynomial(dict(self.terms), self.vars)

    def to_json(self) -> Dict[str, str]:
        return {",".join(str(k) for k in e): str(v)
                for e, v in sorted(self.terms.items())}

    def __str__(self) -> str:
        if not self.terms:
            return "[0]"
        return f"[{self.as_laurent()}]"

    __repr__ = __str__


def cech_project(p: Polynomial) -> CechClass:
    """Drop every term with some exponent at or above zero."""
    base = as_poly(p)
    kept = {e: c for e, c in base.terms.items() if all(k < 0 for k in e)}
    return CechClass(kept, base.vars)


def d1_apply(basis: Sequence[VectorField], c: CechClass) -> List[CechClass]:
    """Componentwise derivation action followed by the tail projection."""
    carrier = c.as_laurent()
    out = []
    for delta in basis:
        for coeff in delta.coeffs:
            if not isinstance(coeff, Polynomial):
                raise PreconditionViolated("d1 needs polynomial fields")
        out.append(cech_project(as_poly(delta.apply(carrier))))
    return out


def _graded_jet(delta: VectorField, k: int) -> VectorField:
    coeffs = []
    for c in delta.coeffs:
        p = as_poly(c)
        coeffs.append(Polynomial(
            {e: v for e, v in p.terms.items() if sum(e) <= k}, p.vars))
    return VectorField(coeffs)


def trace_formula_check(delta: VectorField, k: int) -> bool:
    """Does delta send the top class to -trace(A) times itself?

    A is the linear part of delta; terms of degree two and higher must
    contribute nothing.  The identity is checked for delta and for its
    k-jet and both answers must agree, so k below 1 is rejected.
    """
    if k < 1:
        raise PreconditionViolated("jet order k must be at least 1")
    if any(v != 0 for v in delta.constant_part()):
        raise HasConstantPart("the trace identity needs delta in m*Der")
    A = delta.linear_part()
    n = len(delta.vars)
    trace = sum((A[i][i] for i in range(n)), Fraction(0))
    top = CechClass.top(delta.vars)
    expected = top.scale(-trace)
    full = d1_apply([delta], top)[0]
    jet = d1_apply([_graded_jet(delta, k)], top)[0]
    return full == expected and jet == expected


def _nullspace(rows: List[List[Fraction]], width: int) -> List[List[Fraction]]:
    if not rows:
        return [[Fraction(1 if i == j else 0) for i in range(width)]
                for j in range(width)]
    R, pivots = rref(rows)
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * width
        vec[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -R[r][j]
        basis.append(vec)
    return basis


def d1_kernel_search(basis: Sequence[VectorField],
                     bound: int = 3) -> Optional[CechClass]:
    """Exact common kernel of d1 on the box of exponents in [-bound, -1].

    Box-supported classes have finitely many image terms, so the linear
    system is exact and any kernel vector is a genuine witness; None only
    means no witness exists inside this box.
    """
    if not basis:
        raise PreconditionViolated("need at least one field")
    if bound < 1:
        raise PreconditionViolated("bound must be at least 1")
    varnames = basis[0].vars
    n = len(varnames)
    box = sorted(itertools.product(range(-bound, 0), repeat=n))
    images = []
    row_keys = {}
    for e in box:
        col = []
        mono = Polynomial({e: Fraction(1)}, varnames)
        for i, delta in enumerate(basis):
            img = cech_project(as_poly(delta.apply(mono)))
            for ie, v in img.terms.items():
                row_keys.setdefault((i, ie), len(row_keys))
                col.append(((i, ie), v))
        images.append(col)
    rows = [[Fraction(0)] * len(box) for _ in range(len(row_keys))]
    for j, col in enumerate(images):
        for key, v in col:
            rows[row_keys[key]][j] = v
    kernel = _nullspace(rows, len(box))
    if not kernel:
        return None
    vec = kernel[0]
    lead = next(v for v in vec if v != 0)
    witness = CechClass(
        {box[j]: v / lead for j, v in enumerate(vec) if v != 0}, varnames)
    for img in d1_apply(basis, witness):
        if not img.is_zero():
            raise CertificateFailure("kernel vector does not die under d1")
    return witness


def lct_obstruction_witness(f: Polynomial, basis: Sequence[VectorField],
                            bound: int = 3) -> Optional[CechClass]:
    """Witness search gated by a freeness certificate for the basis.

    Raises NotFree unless the basis passes the determinant test for f and
    ProductInput when f splits off a smooth factor; a None answer only
    covers the searched box.
    """
    n = len(f.vars)
    if len(basis) != n:
        raise NotFree(f"a free basis for {n} variables needs {n} fields")
    try:
        check = saito_free_check(list(basis), f)
    except NotLogarithmic as err:
        raise NotFree(str(err))
    if not check.free:
        raise NotFree("determinant of the basis is not a unit times f")
    prod, _ = is_product(minimalize(derlog_generators(f)))
    if prod:
        raise ProductInput("f splits off a smooth factor")
    return d1_kernel_search(basis, bound)
