"""Polynomial vector fields delta = sum a_i d/dx_i and their Lie structure.

Coefficients are Polynomials or Jets (all of one kind, same variables; jets
must share one truncation order).  The bracket follows [d,e](x_j) =
d(e(x_j)) - e(d(x_j)); for linear fields written x.A.d this gives
[x.A.d, x.B.d] = x.[A,B].d with [A,B] = AB - BA.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from .errors import HasConstantPart, OrderMismatch, VariableMismatch
from .poly import (
    Jet,
    Polynomial,
    WeightSystem,
    as_poly,
    multihomog_decompose_poly,
    poly_to_str,
)

Coeff = Union[Polynomial, Jet]


class VectorField:
    """Immutable derivation with one coefficient per variable."""

    __slots__ = ("coeffs", "vars")

    def __init__(self, coeffs: Sequence[Coeff]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise VariableMismatch("vector field needs at least one coefficient")
        vars0 = coeffs[0].vars
        if len(coeffs) != len(vars0):
            raise VariableMismatch(
                f"{len(coeffs)} coefficients for {len(vars0)} variables")
        orders = {c.order for c in coeffs if isinstance(c, Jet)}
        if len(orders) > 1:
            # one order per field: settle on the smallest
            d = min(orders)
            coeffs = tuple(c.truncate(d) if isinstance(c, Jet) else c for c in coeffs)
        for c in coeffs:
            if c.vars != vars0:
                raise VariableMismatch(f"{c.vars} vs {vars0}")
        self.coeffs = coeffs
        self.vars = vars0

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, varnames: Sequence[str]) -> "VectorField":
        return cls([Polynomial.zero(varnames) for _ in varnames])

    @classmethod
    def partial(cls, varnames: Sequence[str], i: int) -> "VectorField":
        """The coordinate field d/dx_i."""
        coeffs = [Polynomial.const(varnames, 1 if j == i else 0)
                  for j in range(len(varnames))]
        return cls(coeffs)

    @classmethod
    def from_matrix(cls, A: Sequence[Sequence], varnames: Sequence[str]) -> "VectorField":
        """Linear field x.A.d: the d_j coefficient is sum_i A[i][j] x_i."""
        n = len(varnames)
        coeffs = []
        for j in range(n):
            p = Polynomial.zero(varnames)
            for i in range(n):
                c = Fraction(A[i][j])
                if c:
                    p = p + Polynomial.variable(varnames, i) * c
            coeffs.append(p)
        return cls(coeffs)

    @classmethod
    def diagonal(cls, weights: Sequence, varnames: Sequence[str]) -> "VectorField":
        """sum w_i x_i d_i."""
        coeffs = [Polynomial.variable(varnames, i) * Fraction(w)
                  for i, w in enumerate(weights)]
        return cls(coeffs)

    # -- structure ------------------------------------------------------------

    @property
    def order(self):
        """Common jet order of the coefficients, or None for polynomials."""
        for c in self.coeffs:
            if isinstance(c, Jet):
                return c.order
        return None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def constant_part(self) -> Tuple[Fraction, ...]:
        return tuple(c.constant_term() for c in self.coeffs)

    def vanishes_at_origin(self) -> bool:
        return all(v == 0 for v in self.constant_part())

    def linear_part(self) -> List[List[Fraction]]:
        """Matrix A with A[i][j] = coefficient of x_i in delta(x_j).

        Raises HasConstantPart if some coefficient has a constant term.
        """
        n = len(self.vars)
        if not self.vanishes_at_origin():
            raise HasConstantPart(f"constant part {self.constant_part()}")
        A = [[Fraction(0)] * n for _ in range(n)]
        for j, c in enumerate(self.coeffs):
            for i in range(n):
                exp = tuple(1 if t == i else 0 for t in range(n))
                A[i][j] = as_poly(c).coeff(exp)
        return A

    def truncate(self, order: int) -> "VectorField":
        return VectorField([c.truncate(order) for c in self.coeffs])

    def as_polynomial_field(self) -> "VectorField":
        """Drop jet wrappers, keeping the stored terms."""
        return VectorField([as_poly(c) for c in self.coeffs])

    def max_coeff_degree(self) -> int:
        return max((as_poly(c).total_degree() for c in self.coeffs), default=-1)

    def low_field_degree(self) -> int:
        """Least total degree over all coefficient terms; large if zero."""
        degs = [as_poly(c).low_degree() for c in self.coeffs if not c.is_zero()]
        return min(degs) if degs else 10 ** 9

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "VectorField"):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "VectorField":
        return VectorField([-c for c in self.coeffs])

    def scale(self, c) -> "VectorField":
        return VectorField([a * Fraction(c) for a in self.coeffs])

    def mul_function(self, g: Coeff) -> "VectorField":
        """The field g*delta."""
        return VectorField([g * a for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.vars == other.vars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- action ---------------------------------------------------------------

    def apply(self, p: Coeff) -> Coeff:
        """delta(p) = sum a_i dp/dx_i."""
        if p.vars != self.vars:
            raise VariableMismatch(f"{p.vars} vs {self.vars}")
        acc = None
        for i, a in enumerate(self.coeffs):
            if a.is_zero() and not isinstance(a, Jet):
                continue
            term = a * p.diff(i)
            acc = term if acc is None else acc + term
        if acc is None:
            zero = Polynomial.zero(self.vars)
            if isinstance(p, Jet) or self.order is not None:
                orders = [x.order for x in (p, *self.coeffs) if isinstance(x, Jet)]
                return Jet(zero, min(orders))
            return zero
        return acc

    def bracket(self, other: "VectorField") -> "VectorField":
        """[self, other]; jet coefficients must share one order."""
        self._check(other)
        a, b = self.order, other.order
        if a is not None and b is not None and a != b:
            raise OrderMismatch(f"jet orders {a} vs {b}")
        coeffs = []
        for j in range(len(self.vars)):
            coeffs.append(self.apply(other.coeffs[j]) - other.apply(self.coeffs[j]))
        return VectorField(coeffs)

    def __str__(self):
        return vf_to_str(self)

    def __repr__(self):
        return f"VectorField({vf_to_str(self)!r})"


def vf_to_str(v: VectorField) -> str:
    parts = []
    for name, c in zip(v.vars, v.coeffs):
        base = as_poly(c)
        if base.is_zero():
            continue
        items = base.items_sorted()
        if len(items) == 1 and items[0][1] == 1 and not any(items[0][0]):
            parts.append(f"d_{name}")
        elif len(items) == 1:
            parts.append(f"{poly_to_str(base)}*d_{name}")
        else:
            parts.append(f"({poly_to_str(base)})*d_{name}")
    body = " + ".join(parts) if parts else "0"
    if v.order is not None:
        return f"{body} mod m^{v.order}"
    return body


def apply_vf(delta: VectorField, p: Coeff) -> Coeff:
    return delta.apply(p)


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    return a.bracket(b)


def multihomog_decompose(obj, W: WeightSystem):
    """W-multihomogeneous components of a Polynomial, Jet, or VectorField,
    keyed by the degree tuple.  A field term x^alpha d_i has multidegree
    <w^k, alpha> - w^k_i in each row k."""
    if isinstance(obj, VectorField):
        n = len(obj.vars)
        order = obj.order
        buckets: Dict[Tuple[Fraction, ...], List[Dict]] = {}
        for i, c in enumerate(obj.coeffs):
            for exp, coef in as_poly(c).terms.items():
                key = W.field_term_degree(exp, i)
                slot = buckets.setdefault(key, [dict() for _ in range(n)])
                slot[i][exp] = coef
        out = {}
        for key, maps in buckets.items():
            coeffs: List[Coeff] = [Polynomial(m, obj.vars) for m in maps]
            if order is not None:
                coeffs = [Jet(p, order) for p in coeffs]
            out[key] = VectorField(coeffs)
        return out
    return multihomog_decompose_poly(obj, W)


def field_graded_parts(v: VectorField) -> Dict[int, VectorField]:
    """Split by field degree: the degree-k part has coefficient terms of
    total degree k+1 (so the linear part has degree 0)."""
    n = len(v.vars)
    buckets: Dict[int, List[Dict]] = {}
    for i, c in enumerate(v.coeffs):
        for exp, coef in as_poly(c).terms.items():
            k = sum(exp) - 1
            slot = buckets.setdefault(k, [dict() for _ in range(n)])
            slot[i][exp] = coef
    return {k: VectorField([Polynomial(m, v.vars) for m in maps])
            for k, maps in buckets.items()}
