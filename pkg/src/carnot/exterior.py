"""Exterior algebra over the dual basis with the dilation-weight grading.

Basis covectors theta_{i1} ^ ... ^ theta_{ih} are stored as strictly
increasing index tuples and are orthonormal for the fixed inner product;
the positive volume form is theta_1 ^ ... ^ theta_n, and all Hodge-star
signs follow from it.

Two kinds of forms appear:

* :class:`Form` - constant (left-invariant) coefficients, used for bases
  of the intrinsic spaces and for star/weight computations;
* :class:`OperatorForm` - coefficients are :class:`EnvElement` operators
  applied to symbolic function slots, which is what the exterior
  differential and its layer pieces act on.

The exterior differential splits as d = d0 + d1 + ... + d_kappa, where d0
is the purely algebraic Maurer-Cartan part (dtheta_k = -sum c^k_ij
theta_i ^ theta_j, weight preserving) and d_l adds one derivative along
the l-th layer, raising the weight by l.
"""

from __future__ import annotations

from itertools import combinations

from .env import EnvElement
from .liealg import StratifiedLieAlgebra
from .scalars import Scalar


class BasisCovector(tuple):
    """Strictly increasing index tuple with a cached weight."""

    def weight_in(self, alg) -> int:
        return sum(alg.weight(i) for i in self)


def covectors(alg, h: int):
    """The lexicographically ordered basis of degree-h covectors."""
    return [tuple(c) for c in combinations(range(1, alg.n + 1), h)]


def tuple_weight(alg, t) -> int:
    return sum(alg.weight(i) for i in t)


def merge_wedge(a: tuple, b: tuple):
    """Merge two increasing tuples; returns (sign, merged) or (0, None)."""
    if set(a) & set(b):
        return 0, None
    sign = 1
    for x in a:
        for y in b:
            if x > y:
                sign = -sign
    return sign, tuple(sorted(a + b))


def sort_sign(seq):
    """(sign, sorted tuple) of an index sequence, or (0, None) on repeats."""
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))


def star_tuple(alg, j: tuple):
    """Complement tuple and sign with respect to the volume orientation."""
    comp = tuple(i for i in range(1, alg.n + 1) if i not in j)
    sign = 1
    for x in j:
        for y in comp:
            if x > y:
                sign = -sign
    return sign, comp


def _dtheta(alg: StratifiedLieAlgebra):
    """dtheta_k = -sum_{i<j} c^k_{ij} theta_i ^ theta_j, cached."""
    if alg._dtheta_cache is None:
        table = [dict() for _ in range(alg.n + 1)]
        for (i, j), vec in alg.brackets.items():
            for k, c in vec.items():
                table[k][(i, j)] = table[k].get((i, j), alg.field.zero()) - c
        alg._dtheta_cache = table
    return alg._dtheta_cache


def d0_covector(alg, j: tuple) -> dict:
    """d0(theta_J) as {covector: Scalar}, by the graded Leibniz rule."""
    table = _dtheta(alg)
    out: dict = {}
    for t, idx in enumerate(j):
        rest = j[:t] + j[t + 1:]
        sign_t = -1 if t % 2 else 1
        for (a, b), c in table[idx].items():
            s, merged = merge_wedge((a, b), rest)
            if not s:
                continue
            coeff = c * (sign_t * s)
            acc = out.get(merged, alg.field.zero()) + coeff
            if acc:
                out[merged] = acc
            else:
                out.pop(merged, None)
    return out


class Form:
    """Constant-coefficient form; terms map covector tuples to Scalars."""

    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra, degree: int, terms: dict):
        self.algebra = algebra
        self.degree = degree
        self.terms = {t: c for t, c in terms.items() if c}

    @classmethod
    def zero(cls, alg, degree):
        return cls(alg, degree, {})

    @classmethod
    def basis(cls, alg, j, coeff=1):
        j = tuple(j)
        return cls(alg, len(j), {j: alg.field(coeff)})

    @classmethod
    def volume(cls, alg):
        return cls.basis(alg, tuple(range(1, alg.n + 1)))

    def __add__(self, other):
        terms = dict(self.terms)
        for t, c in other.terms.items():
            s = terms.get(t)
            s = c if s is None else s + c
            if s:
                terms[t] = s
            else:
                terms.pop(t, None)
        return Form(self.algebra, self.degree, terms)

    def __neg__(self):
        return Form(self.algebra, self.degree,
                    {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        c = self.algebra.field(coeff)
        return Form(self.algebra, self.degree,
                    {t: c * v for t, v in self.terms.items()})

    def __mul__(self, coeff):
        return self.scale(coeff)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.algebra is other.algebra and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def wedge(self, other: "Form") -> "Form":
        if self.degree + other.degree > self.algebra.n:
            raise DegreeOverflow(self.degree, other.degree)
        out: dict = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                s, merged = merge_wedge(t1, t2)
                if not s:
                    continue
                c = c1 * c2 * s
                acc = out.get(merged, self.algebra.field.zero()) + c
                if acc:
                    out[merged] = acc
                else:
                    out.pop(merged, None)
        return Form(self.algebra, self.degree + other.degree, out)

    def inner(self, other: "Form") -> Scalar:
        s = self.algebra.field.zero()
        for t, c in self.terms.items():
            o = other.terms.get(t)
            if o is not None:
                s = s + c * o
        return s

    def star(self) -> "Form":
        alg = self.algebra
        out = {}
        for t, c in self.terms.items():
            sign, comp = star_tuple(alg, t)
            out[comp] = c * sign
        return Form(alg, alg.n - self.degree, out)

    def weight_split(self) -> dict:
        out: dict = {}
        for t, c in self.terms.items():
            w = tuple_weight(self.algebra, t)
            out.setdefault(w, {})[t] = c
        return {w: Form(self.algebra, self.degree, terms)
                for w, terms in sorted(out.items())}

    def weight(self):
        ws = {tuple_weight(self.algebra, t) for t in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None

    def d0(self) -> "Form":
        alg = self.algebra
        out = Form.zero(alg, self.degree + 1)
        for t, c in self.terms.items():
            for merged, coeff in d0_covector(alg, t).items():
                out = out + Form(alg, self.degree + 1, {merged: c * coeff})
        return out

    def delta0(self) -> "Form":
        """Adjoint of d0 in the orthonormal monomial bases."""
        alg = self.algebra
        if self.degree == 0:
            return Form.zero(alg, 0)
        out: dict = {}
        for j in covectors(alg, self.degree - 1):
            s = alg.field.zero()
            for merged, coeff in d0_covector(alg, j).items():
                c = self.terms.get(merged)
                if c is not None:
                    s = s + coeff * c
            if s:
                out[j] = s
        return Form(alg, self.degree - 1, out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for t in sorted(self.terms):
            c = self.terms[t]
            mono = "∧".join(f"θ{i}" for i in t) if t else "1"
            if c.is_multi_term():
                sign, coeff = "+", f"({c})"
            else:
                s = str(c)
                sign, coeff = ("-", s[1:]) if s.startswith("-") else ("+", s)
            body = mono if coeff == "1" else f"{coeff} {mono}"
            if not pieces:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    __str__ = render

    def __repr__(self):
        return f"Form({self.render()})"

    def to_json(self):
        return {"degree": self.degree,
                "terms": [{"covector": list(t), "coeff": str(c)}
                          for t, c in sorted(self.terms.items())]}


class DegreeOverflow(ValueError):
    pass


class OperatorForm:
    """Form whose coefficients are operators applied to function slots.

    terms: {(covector tuple, slot index): EnvElement}; represents
    sum_{J, j} (U_{J,j} alpha_j) theta_J with s symbolic slots.
    """

    __slots__ = ("algebra", "degree", "slots", "terms")

    def __init__(self, algebra, degree: int, slots: int, terms: dict):
        self.algebra = algebra
        self.degree = degree
        self.slots = slots
        self.terms = {k: u for k, u in terms.items() if u}

    @classmethod
    def zero(cls, alg, degree, slots=1):
        return cls(alg, degree, slots, {})

    @classmethod
    def from_form(cls, form: Form, slots: int = 1, slot: int = 0):
        """c theta_J  ->  (c alpha_slot) theta_J."""
        alg = form.algebra
        terms = {(t, slot): EnvElement.one(alg).scale(c)
                 for t, c in form.terms.items()}
        return cls(alg, form.degree, slots, terms)

    def __add__(self, other):
        terms = dict(self.terms)
        for k, u in other.terms.items():
            s = terms.get(k)
            s = u if s is None else s + u
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return OperatorForm(self.algebra, self.degree,
                            max(self.slots, other.slots), terms)

    def __neg__(self):
        return OperatorForm(self.algebra, self.degree, self.slots,
                            {k: -u for k, u in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        return OperatorForm(self.algebra, self.degree, self.slots,
                            {k: u.scale(coeff) for k, u in self.terms.items()})

    def compose(self, op: EnvElement) -> "OperatorForm":
        """Left-compose every coefficient with `op`."""
        return OperatorForm(self.algebra, self.degree, self.slots,
                            {k: op * u for k, u in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, OperatorForm):
            return NotImplemented
        return (self.degree == other.degree and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    def weight_split(self) -> dict:
        out: dict = {}
        for (t, slot), u in self.terms.items():
            w = tuple_weight(self.algebra, t)
            out.setdefault(w, {})[(t, slot)] = u
        return {w: OperatorForm(self.algebra, self.degree, self.slots, terms)
                for w, terms in sorted(out.items())}

    def d0(self) -> "OperatorForm":
        alg = self.algebra
        out: dict = {}
        for (t, slot), u in self.terms.items():
            for merged, coeff in d0_covector(alg, t).items():
                key = (merged, slot)
                add = u.scale(coeff)
                s = out.get(key)
                s = add if s is None else s + add
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return OperatorForm(alg, self.degree + 1, self.slots, out)

    def d_layer(self, layer: int) -> "OperatorForm":
        """sum over X_m in V_layer of (X_m . U alpha) theta_m ^ theta_J."""
        alg = self.algebra
        if not 1 <= layer <= alg.kappa:
            raise ValueError(f"layer {layer} out of range")
        out: dict = {}
        for (t, slot), u in self.terms.items():
            for m in alg.layer(layer):
                s, merged = merge_wedge((m,), t)
                if not s:
                    continue
                add = (EnvElement.generator(alg, m) * u).scale(s)
                key = (merged, slot)
                acc = out.get(key)
                acc = add if acc is None else acc + add
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return OperatorForm(alg, self.degree + 1, self.slots, out)

    def d_full(self) -> "OperatorForm":
        out = self.d0()
        for layer in range(1, self.algebra.kappa + 1):
            out = out + self.d_layer(layer)
        return out

    def pair_multivector(self, mv: dict) -> list:
        """<form, multivector> per slot; mv maps index tuples to Scalars."""
        alg = self.algebra
        row = [EnvElement.zero(alg) for _ in range(self.slots)]
        for (t, slot), u in self.terms.items():
            c = mv.get(t)
            if c is not None:
                row[slot] = row[slot] + u.scale(c)
        return row

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (t, slot) in sorted(self.terms, key=lambda k: (k[0], k[1])):
            u = self.terms[(t, slot)]
            mono = "∧".join(f"θ{i}" for i in t) if t else "1"
            pieces.append(f"({u.render()})[a{slot + 1}] {mono}")
        return " + ".join(pieces)

    __str__ = render

    def __repr__(self):
        return f"OperatorForm({self.render()})"

    def to_json(self):
        return {"degree": self.degree, "slots": self.slots,
                "terms": [{"covector": list(t), "slot": s + 1,
                           "op": u.render()}
                          for (t, s), u in sorted(
                              self.terms.items(),
                              key=lambda kv: (kv[0][0], kv[0][1]))]}


class CovectorMap:
    """Degree-homogeneous linear map given on basis covectors."""

    __slots__ = ("algebra", "degree_in", "degree_out", "columns")

    def __init__(self, algebra, degree_in, degree_out, columns: dict):
        self.algebra = algebra
        self.degree_in = degree_in
        self.degree_out = degree_out
        self.columns = columns  # {J_in: {J_out: Scalar}}

    def apply_form(self, form: Form) -> Form:
        out = Form.zero(self.algebra, self.degree_out)
        for t, c in form.terms.items():
            col = self.columns.get(t)
            if not col:
                continue
            out = out + Form(self.algebra, self.degree_out,
                             {jo: c * v for jo, v in col.items()})
        return out

    def apply_opform(self, form: OperatorForm) -> OperatorForm:
        out: dict = {}
        for (t, slot), u in form.terms.items():
            col = self.columns.get(t)
            if not col:
                continue
            for jo, v in col.items():
                key = (jo, slot)
                add = u.scale(v)
                s = out.get(key)
                s = add if s is None else s + add
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return OperatorForm(self.algebra, self.degree_out, form.slots, out)

    def apply(self, form):
        if isinstance(form, OperatorForm):
            return self.apply_opform(form)
        return self.apply_form(form)


def d0_map(alg, h: int) -> CovectorMap:
    return CovectorMap(alg, h, h + 1,
                       {j: d0_covector(alg, j) for j in covectors(alg, h)})


def multivector(alg, indices_with_coeffs) -> dict:
    """Build {sorted tuple: Scalar} from (index sequence, coeff) pairs."""
    out: dict = {}
    for seq, coeff in indices_with_coeffs:
        sign, t = sort_sign(seq)
        if not sign:
            continue
        c = alg.field(coeff) * sign
        s = out.get(t, alg.field.zero()) + c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out
