"""Hodge-Laplacian families on the intrinsic complex of the Cartan group.

Three families act on E0^h, written with the intrinsic differential d = d_c
and codifferential delta = delta_c (both zero maps past the boundary
degrees):

* ``G``: (delta d)^6 at h=0, (d delta)^6+(delta d)^2 at h=1,
  (d delta)^2+(delta d)^3 at h=2, the mirrored recipes above, all of
  homogeneous order 12;
* ``R``: (d delta)^3 + delta d at h=0,1 (so minus the sub-Laplacian on
  functions), (d delta)^2+(delta d)^3 at h=2 and mirrored, of orders
  (2, 6, 12, 12, 6, 2);
* ``A``: like ``R`` except at h=2,3 where the auxiliary diagonal operator
  A = -(X1^2+X2^2) I_3 is inserted to flatten the order to 6:
  d delta + delta A d at h=2 and d A delta + delta d at h=3, giving
  orders (2, 6, 6, 6, 6, 2).

The recipes are specific to the five-dimensional step-3 group; other
groups are rejected.
"""

from __future__ import annotations

from .env import EnvElement
from .rumin import OperatorMatrix, RuminComplex


class UnsupportedGroup(ValueError):
    pass


FAMILIES = ("G", "R", "A")

EXPECTED_ORDERS = {
    "G": (12, 12, 12, 12, 12, 12),
    "R": (2, 6, 12, 12, 6, 2),
    "A": (2, 6, 6, 6, 6, 2),
}


def _require_cartan(cx: RuminComplex):
    if not cx.algebra.is_cartan_table():
        raise UnsupportedGroup(
            "the Laplacian families are defined for the Cartan group only")


def a_delta(cx: RuminComplex, h: int) -> OperatorMatrix:
    """The auxiliary operator -(X1^2 + X2^2) I_3 acting on E0^h, h in {2,3}."""
    _require_cartan(cx)
    if h not in (2, 3):
        raise ValueError("the auxiliary diagonal operator acts on 2- and 3-forms")
    alg = cx.algebra
    sub = EnvElement.parse(alg, "-X1^2 - X2^2")
    zero = EnvElement.zero(alg)
    n = len(cx.E0(h))
    entries = [[sub if i == j else zero for j in range(n)] for i in range(n)]
    w = cx.E0(h).weights
    return OperatorMatrix(alg, entries, w, w)


def laplacian(cx: RuminComplex, family: str, h: int) -> OperatorMatrix:
    """Fully expanded, PBW-normalized Laplacian matrix of the family at h."""
    _require_cartan(cx)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if not 0 <= h <= 5:
        raise ValueError(f"degree {h} out of range")
    alg = cx.algebra
    d = cx.dc_matrix
    dl = cx.deltac_matrix

    def sq_zero(k):
        n = len(cx.E0(k))
        w = cx.E0(k).weights
        return OperatorMatrix.zeros(alg, n, n, w, w)

    def dd(k):   # delta_{k+1} d_k : E0^k -> E0^k; zero past the top degree
        if k >= alg.n:
            return sq_zero(k)
        return dl(k + 1) @ d(k)

    def ddl(k):  # d_{k-1} delta_k : E0^k -> E0^k; zero on functions
        if k <= 0:
            return sq_zero(k)
        return d(k - 1) @ dl(k)

    if family == "G":
        recipes = {
            0: lambda: dd(0).power(6),
            1: lambda: ddl(1).power(6) + dd(1).power(2),
            2: lambda: ddl(2).power(2) + dd(2).power(3),
            3: lambda: ddl(3).power(3) + dd(3).power(2),
            4: lambda: dd(4).power(6) + ddl(4).power(2),
            5: lambda: ddl(5).power(6),
        }
    elif family == "R":
        recipes = {
            0: lambda: ddl(0).power(3) + dd(0),
            1: lambda: ddl(1).power(3) + dd(1),
            2: lambda: ddl(2).power(2) + dd(2).power(3),
            3: lambda: ddl(3).power(3) + dd(3).power(2),
            4: lambda: ddl(4) + dd(4).power(3),
            5: lambda: ddl(5) + dd(5).power(3),
        }
    else:
        recipes = {
            0: lambda: ddl(0).power(3) + dd(0),
            1: lambda: ddl(1).power(3) + dd(1),
            2: lambda: ddl(2) + dl(3) @ a_delta(cx, 3) @ d(2),
            3: lambda: d(2) @ a_delta(cx, 2) @ dl(3) + dd(3),
            4: lambda: ddl(4) + dd(4).power(3),
            5: lambda: ddl(5) + dd(5).power(3),
        }
    return recipes[h]()


def order_table(cx: RuminComplex, family: str):
    return tuple(laplacian(cx, family, h).homogeneous_order()
                 for h in range(6))


def verify_self_adjoint(m: OperatorMatrix) -> dict:
    """Formal-adjoint transpose equals the matrix entrywise after PBW."""
    rows, cols = m.shape
    if rows != cols:
        return {"applicable": False,
                "reason": f"matrix is {rows}x{cols}, not square"}
    adj = m.transpose_adjoint()
    adj.row_weights, adj.col_weights = m.row_weights, m.col_weights
    ok = adj == m
    out = {"applicable": True, "self_adjoint": ok}
    if not ok:
        out["bad_entries"] = [
            (i, j) for i in range(rows) for j in range(cols)
            if m.entries[i][j] != adj.entries[i][j]]
    return out


def verify_homogeneous_order(m: OperatorMatrix, expected: int) -> dict:
    degs = m.orders()
    ok = degs == {expected} or not degs
    out = {"expected": expected, "orders": sorted(degs), "homogeneous": ok}
    return out


def hodge_conjugate(cx: RuminComplex, m: OperatorMatrix, h: int) -> OperatorMatrix:
    """Conjugate an E0^h endomorphism by the star into degree n-h."""
    alg = cx.algebra
    n = alg.n
    s_out = OperatorMatrix.from_scalar_matrix(alg, cx.star_matrix(h))
    s_in = OperatorMatrix.from_scalar_matrix(alg, cx.star_matrix(n - h))
    out = s_out @ m @ s_in
    out.row_weights = out.col_weights = cx.E0(n - h).weights
    return out


def star_duality_sign(cx: RuminComplex, family: str, h: int):
    """Sign s with laplacian(family, n-h) = s * conj(laplacian(family, h))."""
    lap_h = laplacian(cx, family, h)
    lap_dual = laplacian(cx, family, cx.algebra.n - h)
    conj = hodge_conjugate(cx, lap_h, h)
    if lap_dual == conj:
        return 1
    if lap_dual == conj.scale(-1):
        return -1
    return None
