"""Left-invariant differential operators as PBW-normal-ordered polynomials.

An :class:`EnvElement` is a finite sum of monomials X_1^{i_1} ... X_n^{i_n}
with exact scalar coefficients, keyed by the exponent vector (i_1, ..., i_n).
Products are renormalized with the rewriting rule

    X_j X_i  ->  X_i X_j + [X_j, X_i]        (j > i)

which terminates because brackets strictly raise the grading and the algebra
is nilpotent.  The normal form of every word is cached on the algebra, so
repeated matrix algebra over the same group stays cheap.

``formal_adjoint`` implements the L2-formal adjoint determined by
X_i* = -X_i together with product reversal.
"""

from __future__ import annotations

from fractions import Fraction

from . import _expr
from .liealg import StratifiedLieAlgebra
from .scalars import Scalar


class AlgebraMismatch(ValueError):
    pass


class ZeroElement(ValueError):
    """Raised when asking for the homogeneity of the zero operator."""


class Mixed:
    """Marker for inhomogeneous operators; lists the degrees present."""

    __slots__ = ("degrees",)

    def __init__(self, degrees):
        self.degrees = frozenset(degrees)

    def __eq__(self, other):
        if isinstance(other, Mixed):
            return self.degrees == other.degrees
        return NotImplemented

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return f"Mixed{{{', '.join(map(str, sorted(self.degrees)))}}}"


def _normalize_word(alg: StratifiedLieAlgebra, word: tuple) -> dict:
    """Normal form of X_{w1} ... X_{wk} as {exponent vector: Scalar}."""
    cache = alg._nf_cache
    hit = cache.get(word)
    if hit is not None:
        return hit
    descent = next((t for t in range(len(word) - 1)
                    if word[t] > word[t + 1]), None)
    if descent is None:
        exp = [0] * alg.n
        for i in word:
            exp[i - 1] += 1
        result = {tuple(exp): alg.field.one()}
        cache[word] = result
        return result
    t = descent
    a, b = word[t], word[t + 1]
    out = dict(_normalize_word(alg, word[:t] + (b, a) + word[t + 2:]))
    # [X_a, X_b] with a > b equals minus the stored bracket of (b, a)
    for k, c in alg.bracket_basis(b, a).items():
        sub = _normalize_word(alg, word[:t] + (k,) + word[t + 2:])
        for exp, cc in sub.items():
            s = out.get(exp, alg.field.zero()) - c * cc
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
    cache[word] = out
    return out


def _word_of(exp: tuple) -> tuple:
    word = []
    for i, e in enumerate(exp):
        word.extend([i + 1] * e)
    return tuple(word)


class EnvElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: StratifiedLieAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, alg) -> "EnvElement":
        return cls(alg, {})

    @classmethod
    def one(cls, alg) -> "EnvElement":
        return cls(alg, {(0,) * alg.n: alg.field.one()})

    @classmethod
    def generator(cls, alg, i: int) -> "EnvElement":
        exp = [0] * alg.n
        exp[i - 1] = 1
        return cls(alg, {tuple(exp): alg.field.one()})

    @classmethod
    def monomial(cls, alg, exp, coeff=1) -> "EnvElement":
        c = alg.field(coeff)
        if not c:
            return cls(alg, {})
        return cls(alg, {tuple(exp): c})

    @classmethod
    def from_word(cls, alg, word, coeff=1) -> "EnvElement":
        """Normal form of a product of generators given by basis indices."""
        c = alg.field(coeff)
        if not c:
            return cls(alg, {})
        terms = {}
        for exp, cc in _normalize_word(alg, tuple(word)).items():
            v = c * cc
            if v:
                terms[exp] = v
        return cls(alg, terms)

    # -- ring structure ---------------------------------------------------

    def _check(self, other: "EnvElement"):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("operands live over different algebras")

    def __add__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            s = c if s is None else s + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return EnvElement(self.algebra, terms)

    def __neg__(self):
        return EnvElement(self.algebra, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self + (-other)

    def scale(self, coeff) -> "EnvElement":
        c = self.algebra.field(coeff)
        if not c:
            return EnvElement.zero(self.algebra)
        return EnvElement(self.algebra,
                          {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, EnvElement):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        cache = alg._prod_cache
        out: dict = {}
        for i_exp, ci in self.terms.items():
            for j_exp, cj in other.terms.items():
                key = (i_exp, j_exp)
                prod = cache.get(key)
                if prod is None:
                    last = next((k for k in range(alg.n - 1, -1, -1)
                                 if i_exp[k]), None)
                    first = next((k for k in range(alg.n) if j_exp[k]), None)
                    if last is None or first is None or last <= first:
                        prod = {tuple(a + b for a, b in zip(i_exp, j_exp)):
                                alg.field.one()}
                    else:
                        prod = _normalize_word(alg, _word_of(i_exp) + _word_of(j_exp))
                    cache[key] = prod
                c = ci * cj
                for exp, cc in prod.items():
                    s = out.get(exp)
                    s = c * cc if s is None else s + c * cc
                    if s:
                        out[exp] = s
                    else:
                        out.pop(exp, None)
        return EnvElement(self.algebra, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, EnvElement):
            other = other.as_scalar()
        return self.scale(self.algebra.field(other).inverse())

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((e, c) for e, c in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def as_scalar(self) -> Scalar:
        """The coefficient of the unit monomial, if the element is scalar."""
        if not self.terms:
            return self.algebra.field.zero()
        unit = (0,) * self.algebra.n
        if set(self.terms) != {unit}:
            raise ValueError("operator is not a scalar multiple of the unit")
        return self.terms[unit]

    # -- grading ----------------------------------------------------------

    def term_degree(self, exp) -> int:
        w = self.algebra.weights
        return sum(e * w[k] for k, e in enumerate(exp))

    def homogeneity(self):
        """Common homogeneity degree d(I), or Mixed, or ZeroElement."""
        if not self.terms:
            raise ZeroElement("homogeneity of the zero operator is undefined")
        degrees = {self.term_degree(e) for e in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return Mixed(degrees)

    def differential_order(self) -> int:
        if not self.terms:
            raise ZeroElement("order of the zero operator is undefined")
        return max(sum(e) for e in self.terms)

    def formal_adjoint(self) -> "EnvElement":
        """Anti-homomorphism with X_i -> -X_i and product reversal."""
        alg = self.algebra
        out = EnvElement.zero(alg)
        for exp, c in self.terms.items():
            word = _word_of(exp)
            sign = -c if len(word) % 2 else c
            out = out + EnvElement.from_word(alg, tuple(reversed(word)), sign)
        return out

    # -- text ----------------------------------------------------------

    def _sorted_terms(self):
        # display higher-order monomials first, like the matrix listings
        return sorted(
            self.terms.items(),
            key=lambda item: (-self.term_degree(item[0]),
                              tuple(-e for e in item[0])))

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self._sorted_terms():
            factors = []
            for k, e in enumerate(exp):
                if e == 1:
                    factors.append(f"X{k + 1}")
                elif e > 1:
                    factors.append(f"X{k + 1}^{e}")
            mono = "*".join(factors)
            if c.is_multi_term():
                sign, coeff = "+", f"({c})"
            else:
                s = str(c)
                sign, coeff = ("-", s[1:]) if s.startswith("-") else ("+", s)
            if mono:
                body = mono if coeff == "1" else f"{coeff}*{mono}"
            else:
                body = coeff
            if not pieces:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    __str__ = render

    def __repr__(self):
        return f"EnvElement({self.render()})"

    @classmethod
    def parse(cls, alg, text: str) -> "EnvElement":
        return _expr.parse(text, _EnvAdapter(alg))


class _EnvAdapter:
    def __init__(self, alg):
        self.alg = alg

    def number(self, q):
        return EnvElement.monomial(self.alg, (0,) * self.alg.n, q)

    def one(self):
        return EnvElement.one(self.alg)

    def sqrt(self, n):
        return EnvElement.monomial(self.alg, (0,) * self.alg.n,
                                   self.alg.field.sqrt(n))

    def var(self, name):
        if name.startswith("X") and name[1:].isdigit():
            i = int(name[1:])
            if 1 <= i <= self.alg.n:
                return EnvElement.generator(self.alg, i)
        raise _expr.ExprError(f"unknown generator {name!r}")
