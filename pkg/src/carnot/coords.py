"""Polynomial coordinate models of left-invariant vector fields.

This is the independent oracle for the operator algebra: a word in the
generators can be applied to an exact polynomial either directly, field by
field, or after PBW normalization, and the two answers must agree.  The
built-in realization is the exponential-coordinate model of the Cartan
group,

    X1 = d1
    X2 = d2 + x1 d3 + (x1^2/2) d4 + x1 x2 d5
    X3 = d3 + x1 d4 + x2 d5
    X4 = d4
    X5 = d5.

Other groups accept a user-supplied list of vector fields.
"""

from __future__ import annotations

from fractions import Fraction

from . import _expr
from .env import EnvElement, _word_of
from .scalars import Scalar


class NoRealization(ValueError):
    pass


class Polynomial:
    """Commutative polynomial in x1..xn with Scalar coefficients."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = terms

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, value):
        c = field(value)
        return cls(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, field, nvars, i: int):
        exp = [0] * nvars
        exp[i - 1] = 1
        return cls(field, nvars, {tuple(exp): field.one()})

    @classmethod
    def monomial(cls, field, nvars, exp, coeff=1):
        c = field(coeff)
        return cls(field, nvars, {tuple(exp): c} if c else {})

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial(self.field, self.nvars, terms)

    def __neg__(self):
        return Polynomial(self.field, self.nvars,
                          {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        c = self.field(coeff)
        if not c:
            return Polynomial.zero(self.field, self.nvars)
        return Polynomial(self.field, self.nvars,
                          {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            other = other.as_scalar()
        return self.scale(self.field(other).inverse())

    def as_scalar(self):
        if not self.terms:
            return self.field.zero()
        unit = (0,) * self.nvars
        if set(self.terms) != {unit}:
            raise ValueError("polynomial is not constant")
        return self.terms[unit]

    def diff(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k:
                ne = list(e)
                ne[i - 1] = k - 1
                out[tuple(ne)] = c * k
        return Polynomial(self.field, self.nvars, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                f"x{k + 1}" + (f"^{d}" if d > 1 else "")
                for k, d in enumerate(e) if d)
            if c.is_multi_term():
                sign, coeff = "+", f"({c})"
            else:
                s = str(c)
                sign, coeff = ("-", s[1:]) if s.startswith("-") else ("+", s)
            body = (mono if coeff == "1" else f"{coeff}*{mono}") if mono else coeff
            if not pieces:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.render()})"

    @classmethod
    def parse(cls, field, nvars, text):
        return _expr.parse(text, _PolyAdapter(field, nvars))


class _PolyAdapter:
    def __init__(self, field, nvars):
        self.field = field
        self.nvars = nvars

    def number(self, q):
        return Polynomial.constant(self.field, self.nvars, q)

    def one(self):
        return Polynomial.constant(self.field, self.nvars, 1)

    def sqrt(self, n):
        return Polynomial.constant(self.field, self.nvars, self.field.sqrt(n))

    def var(self, name):
        if name.startswith("x") and name[1:].isdigit():
            i = int(name[1:])
            if 1 <= i <= self.nvars:
                return Polynomial.variable(self.field, self.nvars, i)
        raise _expr.ExprError(f"unknown variable {name!r}")


class CoordinateRealization:
    """Vector fields X_i = sum_j a_ij(x) d_j with polynomial coefficients."""

    def __init__(self, field, nvars: int, fields):
        self.field = field
        self.nvars = nvars
        self.fields = fields  # list over generators of list over vars of Polynomial

    def apply_field(self, i: int, p: Polynomial) -> Polynomial:
        out = Polynomial.zero(self.field, self.nvars)
        for j, coeff in enumerate(self.fields[i - 1], start=1):
            if coeff.is_zero():
                continue
            out = out + coeff * p.diff(j)
        return out

    def apply_word(self, word, p: Polynomial) -> Polynomial:
        # operator words compose right-to-left
        for i in reversed(tuple(word)):
            p = self.apply_field(i, p)
        return p

    def apply(self, op: EnvElement, p: Polynomial) -> Polynomial:
        out = Polynomial.zero(self.field, self.nvars)
        for exp, c in op.terms.items():
            out = out + self.apply_word(_word_of(exp), p).scale(c)
        return out


def cartan_realization(alg) -> CoordinateRealization:
    f = alg.field
    P = Polynomial
    zero = P.zero(f, 5)
    one = P.constant(f, 5, 1)
    x1 = P.variable(f, 5, 1)
    x2 = P.variable(f, 5, 2)
    half_x1sq = P.monomial(f, 5, (2, 0, 0, 0, 0), Fraction(1, 2))
    fields = [
        [one, zero, zero, zero, zero],
        [zero, one, x1, half_x1sq, x1 * x2],
        [zero, zero, one, x1, x2],
        [zero, zero, zero, one, zero],
        [zero, zero, zero, zero, one],
    ]
    return CoordinateRealization(f, 5, fields)


def coordinate_apply(op: EnvElement, p: Polynomial,
                     realization: CoordinateRealization | None = None) -> Polynomial:
    """Apply a normal-ordered operator to a polynomial via coordinates."""
    realization = realization or op.algebra.realization
    if realization is None:
        raise NoRealization(
            "no coordinate realization attached to this algebra")
    return realization.apply(op, p)
