"""Stratified nilpotent Lie algebras given by exact structure constants.

A :class:`StratifiedLieAlgebra` stores the bracket table of a graded basis
X_1, ..., X_n adapted to the layers V_1 + ... + V_kappa, validates the usual
identities exactly (antisymmetry is structural, Jacobi and the grading are
checked on construction, and V_1 must bracket-generate each higher layer),
and exposes the bracket as a bilinear map on coefficient vectors.

``free_nilpotent`` generates free nilpotent algebras from a Hall basis;
``cartan_group`` is the built-in five-dimensional step-3 example with
brackets [X1,X2]=X3, [X1,X3]=X4, [X2,X3]=X5 and an attached polynomial
coordinate realization of the vector fields.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

from . import linalg
from .scalars import Scalar, ScalarField


class LieAlgebraError(ValueError):
    def __str__(self):
        args = ",".join(str(a) for a in self.args)
        return f"{type(self).__name__}({args})"


class JacobiViolation(LieAlgebraError):
    pass


class GradingViolation(LieAlgebraError):
    pass


class NotStratified(LieAlgebraError):
    pass


class DimensionMismatch(LieAlgebraError):
    pass


class ResourceLimit(LieAlgebraError):
    pass


class StratifiedLieAlgebra:
    """Immutable after construction; basis indices are 1-based."""

    def __init__(self, layer_dims, brackets, field=None, labels=None,
                 realization=None, _validate=True):
        self.field = field if field is not None else ScalarField()
        self.layer_dims = tuple(int(m) for m in layer_dims)
        if any(m <= 0 for m in self.layer_dims):
            raise DimensionMismatch("layer dimensions must be positive")
        self.n = sum(self.layer_dims)
        self.kappa = len(self.layer_dims)
        self.weights = tuple(
            a + 1 for a, m in enumerate(self.layer_dims) for _ in range(m))
        self.labels = tuple(labels) if labels else tuple(
            f"X{i}" for i in range(1, self.n + 1))
        self.brackets = {}
        for (i, j), vec in brackets.items():
            if not (1 <= i < j <= self.n):
                raise DimensionMismatch(i, j)
            clean = {}
            for k, c in vec.items():
                c = self.field(c)
                if c:
                    if not 1 <= k <= self.n:
                        raise DimensionMismatch(k)
                    clean[int(k)] = c
            if clean:
                self.brackets[(i, j)] = clean
        self.realization = realization
        # caches shared by the operator algebra
        self._nf_cache = {}
        self._prod_cache = {}
        self._dtheta_cache = None
        if _validate:
            self._validate()

    # -- basic queries --------------------------------------------------

    def weight(self, i: int) -> int:
        return self.weights[i - 1]

    def layer(self, a: int):
        """Basis indices spanning V_a."""
        start = sum(self.layer_dims[:a - 1])
        return range(start + 1, start + self.layer_dims[a - 1] + 1)

    @property
    def homogeneous_dimension(self) -> int:
        return sum(self.weights)

    def bracket_basis(self, i: int, j: int) -> dict:
        """[X_i, X_j] as a sparse {index: Scalar} vector."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, a: dict, b: dict) -> dict:
        """Bilinear extension of the bracket to coefficient vectors."""
        for v in (a, b):
            for i in v:
                if not 1 <= i <= self.n:
                    raise DimensionMismatch(i)
        out: dict = {}
        for i, ca in a.items():
            ca = self.field(ca)
            for j, cb in b.items():
                cb = self.field(cb)
                for k, c in self.bracket_basis(i, j).items():
                    s = out.get(k, self.field.zero()) + ca * cb * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def structure_constant(self, i, j, k) -> Scalar:
        return self.bracket_basis(i, j).get(k, self.field.zero())

    # -- validation -------------------------------------------------------

    def _validate(self):
        for (i, j), vec in self.brackets.items():
            target = self.weight(i) + self.weight(j)
            for k in vec:
                if target > self.kappa or self.weight(k) != target:
                    raise GradingViolation(i, j)
        for i, j, k in combinations(range(1, self.n + 1), 3):
            acc: dict = {}
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.bracket_basis(a, b)
                for t, coeff in self.bracket({m: v for m, v in inner.items()},
                                             {c: self.field.one()}).items():
                    s = acc.get(t, self.field.zero()) + coeff
                    if s:
                        acc[t] = s
                    else:
                        acc.pop(t, None)
            if acc:
                raise JacobiViolation(i, j, k)
        for a in range(1, self.kappa):
            rows = []
            for i in self.layer(1):
                for j in self.layer(a):
                    vec = self.bracket_basis(i, j)
                    rows.append([vec.get(k, self.field.zero())
                                 for k in self.layer(a + 1)])
            if linalg.rank(self.field, rows) != self.layer_dims[a]:
                raise NotStratified(a + 1)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_structure_constants(cls, layer_dims, brackets, field=None,
                                 labels=None):
        field = field if field is not None else ScalarField()
        table = {}
        for (i, j), vec in brackets.items():
            table[(int(i), int(j))] = {int(k): field(c) for k, c in vec.items()}
        return cls(layer_dims, table, field=field, labels=labels)

    @classmethod
    def from_json(cls, text_or_dict):
        data = json.loads(text_or_dict) if isinstance(text_or_dict, str) \
            else text_or_dict
        field = ScalarField(radicands=data.get("sqrt", ()))
        brackets = {}
        for key, vec in data.get("brackets", {}).items():
            i, j = (int(t) for t in key.split(","))
            brackets[(i, j)] = {int(k): field.parse(str(c))
                                for k, c in vec.items()}
        return cls(data["layers"], brackets, field=field,
                   labels=data.get("labels"))

    def to_json(self) -> dict:
        out = {"layers": list(self.layer_dims), "brackets": {}}
        if self.field.radicands:
            out["sqrt"] = list(self.field.radicands)
        for (i, j), vec in sorted(self.brackets.items()):
            out["brackets"][f"{i},{j}"] = {str(k): str(c)
                                           for k, c in sorted(vec.items())}
        return out

    def is_cartan_table(self) -> bool:
        if self.layer_dims != (2, 1, 2):
            return False
        expected = {(1, 2): {3: 1}, (1, 3): {4: 1}, (2, 3): {5: 1}}
        seen = {k: {i: c for i, c in v.items()} for k, v in self.brackets.items()}
        for key, vec in expected.items():
            got = seen.pop(key, {})
            if set(got) != set(vec):
                return False
            for i, c in vec.items():
                if got[i] != c:
                    return False
        return not seen

    def __repr__(self):
        return (f"StratifiedLieAlgebra(n={self.n}, layers={self.layer_dims}, "
                f"Q={self.homogeneous_dimension})")


def cartan_group(field=None) -> StratifiedLieAlgebra:
    """The free step-3 rank-2 Carnot group (dimension 5, Q = 10)."""
    from .coords import cartan_realization

    field = field if field is not None else ScalarField()
    alg = StratifiedLieAlgebra(
        (2, 1, 2),
        {(1, 2): {3: field.one()},
         (1, 3): {4: field.one()},
         (2, 3): {5: field.one()}},
        field=field)
    alg.realization = cartan_realization(alg)
    return alg


# -- free nilpotent Lie algebras via Hall bases ----------------------------


class _HallTree:
    __slots__ = ("left", "right", "gen", "degree", "foliage", "key")

    def __init__(self, gen=None, left=None, right=None):
        if gen is not None:
            self.gen = gen
            self.left = self.right = None
            self.degree = 1
            self.foliage = (gen,)
            self.key = (1, self.foliage, ())
        else:
            self.gen = None
            self.left, self.right = left, right
            self.degree = left.degree + right.degree
            self.foliage = left.foliage + right.foliage
            self.key = (self.degree, self.foliage, (left.key, right.key))

    def label(self, names):
        if self.gen is not None:
            return names[self.gen - 1]
        return f"[{self.left.label(names)},{self.right.label(names)}]"


def _hall_basis(m1: int, step: int):
    """Hall trees ordered by degree, then foliage, then structure.

    A composite [a, b] is a Hall tree when a < b and b is either a generator
    or b = [c, d] with c <= a.  This convention makes the degree-3 elements
    on two generators come out as [X1,[X1,X2]] then [X2,[X1,X2]].
    """
    by_degree = {1: [_HallTree(gen=i) for i in range(1, m1 + 1)]}
    for d in range(2, step + 1):
        new = []
        for da in range(1, d):
            for a in by_degree.get(da, ()):
                for b in by_degree.get(d - da, ()):
                    if not a.key < b.key:
                        continue
                    if b.gen is None and b.left.key > a.key:
                        continue
                    new.append(_HallTree(left=a, right=b))
        new.sort(key=lambda t: t.key)
        by_degree[d] = new
    ordered = []
    for d in range(1, step + 1):
        ordered.extend(by_degree[d])
    return ordered


def _tensor_expand(tree: _HallTree, step: int) -> dict:
    """Expansion in the free associative algebra, truncated above `step`."""
    if tree.gen is not None:
        return {(tree.gen,): Fraction(1)}
    left = _tensor_expand(tree.left, step)
    right = _tensor_expand(tree.right, step)
    out: dict = {}
    for u, cu in left.items():
        for v, cv in right.items():
            if len(u) + len(v) > step:
                continue
            for word, c in ((u + v, cu * cv), (v + u, -cu * cv)):
                s = out.get(word, 0) + c
                if s:
                    out[word] = s
                else:
                    out.pop(word, None)
    return out


def free_nilpotent(m1: int, step: int, max_dim: int = 64,
                   field=None) -> StratifiedLieAlgebra:
    """Free nilpotent Lie algebra on m1 generators, nilpotency step `step`.

    Structure constants are obtained by expanding Hall trees in the tensor
    algebra and solving for the coordinates of each commutator in the Hall
    basis of the appropriate degree, which is exact and convention-free.
    """
    if m1 < 2 or step < 1:
        raise DimensionMismatch(m1, step)
    trees = _hall_basis(m1, step)
    if len(trees) > max_dim:
        raise ResourceLimit(len(trees), max_dim)
    layer_dims = [0] * step
    for t in trees:
        layer_dims[t.degree - 1] += 1
    field = field if field is not None else ScalarField()
    tensors = [_tensor_expand(t, step) for t in trees]
    by_degree: dict = {}
    for idx, t in enumerate(trees):
        by_degree.setdefault(t.degree, []).append(idx)

    def express(poly: dict, degree: int) -> dict:
        """Coordinates of a tensor-algebra Lie element over degree-d trees."""
        if not poly:
            return {}
        idxs = by_degree[degree]
        words = sorted({w for i in idxs for w in tensors[i]} | set(poly))
        wpos = {w: r for r, w in enumerate(words)}
        a = [[field.zero() for _ in idxs] for _ in words]
        for c, i in enumerate(idxs):
            for w, coeff in tensors[i].items():
                a[wpos[w]][c] = field.from_rational(coeff)
        b = [field.from_rational(poly.get(w, 0)) for w in words]
        sol = linalg.solve(field, a, b)
        if sol is None:
            raise LieAlgebraError("hall expansion failed")  # pragma: no cover
        return {idxs[c] + 1: sol[c] for c in range(len(idxs)) if sol[c]}

    brackets = {}
    for i in range(len(trees)):
        for j in range(i + 1, len(trees)):
            d = trees[i].degree + trees[j].degree
            if d > step:
                continue
            prod: dict = {}
            for u, cu in tensors[i].items():
                for v, cv in tensors[j].items():
                    for word, c in ((u + v, cu * cv), (v + u, -cu * cv)):
                        s = prod.get(word, 0) + c
                        if s:
                            prod[word] = s
                        else:
                            prod.pop(word, None)
            vec = express(prod, d)
            if vec:
                brackets[(i + 1, j + 1)] = vec

    names = tuple(f"X{i}" for i in range(1, len(trees) + 1))
    return StratifiedLieAlgebra(layer_dims, brackets, field=field, labels=names)
