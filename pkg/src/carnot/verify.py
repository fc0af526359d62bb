"""The machine-verification suite behind `carnot verify`.

Runs every structural identity the library is built on and compares the
Cartan-group output against the committed reference listings (dimension
table, intrinsic bases, all differential and codifferential matrices, star
matrices, order tables).  Checks come in two kinds:

* ``pass``/``fail`` checks gate the exit code;
* ``info`` entries record documented discrepancies between computed values
  and their published counterparts; they never fail the run, they are the
  findings.
"""

from __future__ import annotations

import json
import random
import time
from importlib import resources

from . import estimates, laplacians, linalg
from .coords import Polynomial, coordinate_apply
from .env import EnvElement
from .exterior import Form, covectors
from .liealg import cartan_group, free_nilpotent
from .rumin import OperatorMatrix, RuminComplex


def load_golden(path=None) -> dict:
    if path is not None:
        with open(path) as fh:
            return json.load(fh)
    return json.loads(resources.files("carnot").joinpath(
        "golden/section4.json").read_text())


def golden_form(alg, spec, degree):
    out = Form.zero(alg, degree)
    for coeff, idx in spec:
        out = out + Form.basis(alg, tuple(idx), alg.field.parse(coeff))
    return out


def golden_matrix(alg, rows) -> OperatorMatrix:
    return OperatorMatrix(
        alg, [[EnvElement.parse(alg, cell) for cell in row] for row in rows],
        cols=len(rows[0]) if rows else 0)


class Report:
    def __init__(self):
        self.checks = []

    def add(self, name, ok, **details):
        self.checks.append({"name": name,
                            "status": "pass" if ok else "fail",
                            **details})
        return ok

    def info(self, name, **details):
        self.checks.append({"name": name, "status": "info", **details})

    @property
    def ok(self):
        return all(c["status"] != "fail" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c["status"] == "fail"]

    def to_json(self):
        return {"ok": self.ok, "checks": self.checks}


def _scalar_matrix_to_int(rows):
    out = []
    for row in rows:
        out.append([c.as_rational() if hasattr(c, "as_rational") else c
                    for c in row])
    return out


def verify_group(cx: RuminComplex, report: Report, seed: int = 0):
    """Structural checks valid on any stratified group."""
    alg = cx.algebra
    n = alg.n

    report.add("dimension-table", True,
               dims=list(cx.dims()), Q=alg.homogeneous_dimension)

    ok = all((cx.dc_matrix(h + 1) @ cx.dc_matrix(h)).is_zero()
             for h in range(n))
    report.add("dc-squared-zero", ok)

    ok = True
    for h in range(n + 1):
        sym = cx.symbolic_basis_form(h)
        if sym.is_zero():
            continue
        if not sym.d_full().d_full().is_zero():
            ok = False
    report.add("de-rham-d-squared-zero", ok)

    signs = {}
    ok = True
    for h in range(1, n + 1):
        s = cx.deltac_star_adjoint_sign(h)
        signs[h] = s
        if s is None:
            ok = False
    report.add("deltac-star-vs-adjoint", ok, signs=signs)

    ok = True
    bad = []
    for h in range(n):
        sym = cx.symbolic_basis_form(h)
        lifted = cx.pi_E(sym)
        lhs = lifted.d_full()
        dc_rows = [cx.dc_matrix(h).entries[i] for i in range(len(cx.E0(h + 1)))]
        rhs = cx.pi_E(cx.opform_from_rows(dc_rows, h + 1, sym.slots))
        if lhs != rhs:
            ok = False
            bad.append(h)
    report.add("chain-map-d-piE-equals-piE-dc", ok, bad_degrees=bad)

    ok = True
    for h in range(n + 1):
        sym = cx.symbolic_basis_form(h)
        lifted = cx.pi_E(sym)
        rows = cx.pi_E0(lifted, h)
        again = cx.pi_E(cx.opform_from_rows(rows, h, sym.slots))
        if again != lifted:
            ok = False
    report.add("projection-piE-piE0-piE", ok)

    ok = True
    for h in range(n):
        for w in sorted(cx._weight_blocks(h)):
            b_rows, dom, cod = cx.d0_matrix_block(h, w)
            if not dom or not cod:
                continue
            p = linalg.pseudoinverse(alg.field, b_rows)
            f = alg.field
            bp = linalg.mat_mul(f, b_rows, p)
            pb = linalg.mat_mul(f, p, b_rows)
            checks = (
                linalg.mat_mul(f, bp, b_rows) == b_rows,
                linalg.mat_mul(f, pb, p) == p,
                linalg.transpose(bp) == bp,
                linalg.transpose(pb) == pb,
            )
            if not all(checks):
                ok = False
    report.add("d0-pseudoinverse-identities", ok)

    rng = random.Random(seed)

    def random_form(h):
        out = Form.zero(alg, h)
        for t in covectors(alg, h):
            c = rng.randint(-3, 3)
            if c:
                out = out + Form.basis(alg, t, c)
        return out

    ok = True
    for _ in range(20):
        h = rng.randint(0, n)
        a, b = random_form(h), random_form(h)
        if a.star().inner(b.star()) != a.inner(b):
            ok = False
        sign = -1 if (h * (n - h)) % 2 else 1
        if a.star().star() != a.scale(sign):
            ok = False
    report.add("hodge-star-isometry-involution", ok)

    ok = True
    for _ in range(20):
        h = rng.randint(0, n - 1)
        a, b = random_form(h), random_form(h + 1)
        if a.d0().inner(b) != a.inner(b.delta0()):
            ok = False
    report.add("d0-delta0-adjointness", ok)

    ok = True
    for _ in range(20):
        h = rng.randint(0, n)
        a = random_form(h)
        parts = a.weight_split()
        total = Form.zero(alg, h)
        for w, comp in parts.items():
            if comp.weight() not in (w, None):
                ok = False
            total = total + comp
        if total != a:
            ok = False
        ws = sorted(parts)
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                if parts[ws[i]].inner(parts[ws[j]]):
                    ok = False
    report.add("weight-split-orthogonal-decomposition", ok)


def verify_cartan(cx: RuminComplex, report: Report, golden: dict,
                  seed: int = 0, fast: bool = False):
    """Reference comparisons and Cartan-specific families."""
    alg = cx.algebra
    field = alg.field

    report.add("golden-dims", list(cx.dims()) == golden["dims"],
               computed=list(cx.dims()), golden=golden["dims"])

    aligns = {}
    ok = True
    details = {}
    for h_str, basis_spec in golden["bases"].items():
        h = int(h_str)
        expected = [golden_form(alg, spec, h) for spec in basis_spec]
        try:
            t = cx.align_basis(cx.E0(h), expected)
            aligns[h] = t
            details[h_str] = "aligned"
        except Exception as exc:  # SpanMismatch
            ok = False
            details[h_str] = str(exc)
    report.add("golden-basis-span-match", ok, detail=details)
    ident = {h: OperatorMatrix.from_scalar_matrix(alg, t)
             for h, t in aligns.items()}

    def t_mat(h):
        if h == 0 or h == alg.n:
            return OperatorMatrix.from_scalar_matrix(
                alg, linalg.identity(field, 1))
        return ident[h]

    def t_mat_transposed(h):
        if h == 0 or h == alg.n:
            return OperatorMatrix.from_scalar_matrix(
                alg, linalg.identity(field, 1))
        return OperatorMatrix.from_scalar_matrix(
            alg, linalg.transpose(aligns[h]))

    def compare_golden(kind, table, compute):
        ok = True
        bad = []
        for h_str, rows in table.items():
            h = int(h_str)
            try:
                expected = golden_matrix(alg, rows)
                got = compute(h)
                if expected.shape != got.shape:
                    ok = False
                    bad.append((kind, h, "shape"))
                    continue
                m, ncols = expected.shape
                diffs = [(kind, h, i, j) for i in range(m)
                         for j in range(ncols)
                         if expected.entries[i][j] != got.entries[i][j]]
                if diffs:
                    ok = False
                    bad.extend(diffs)
            except Exception as exc:
                ok = False
                bad.append((kind, h, f"error: {exc}"))
        report.add(f"golden-{kind}-matrices", ok, bad_entries=bad)

    compare_golden("dc", golden["dc"],
                   lambda h: t_mat_transposed(h + 1) @ cx.dc_matrix(h)
                   @ t_mat(h))
    compare_golden("deltac", golden["deltac"],
                   lambda h: t_mat_transposed(h - 1) @ cx.deltac_matrix(h)
                   @ t_mat(h))

    ok = True
    for h_str, rows in golden["star"].items():
        h = int(h_str)
        computed = cx.star_matrix(h)
        as_fracs = [[c.as_rational() for c in row] for row in computed]
        if [[int(x) for x in row] for row in as_fracs] != rows:
            ok = False
    report.add("golden-star-matrices", ok)

    report.add("golden-dc-orders",
               list(cx.dc_orders()) == golden["dc_orders"],
               computed=list(cx.dc_orders()))

    ok = True
    got_profile = {}
    for h in (1, 2, 3):
        prof = {}
        for w in sorted(cx._weight_blocks(h + 1)):
            rows, dom, cod = cx.d0_matrix_block(h, w)
            r = linalg.rank(field, rows) if dom and cod else 0
            if r:
                prof[str(w)] = r
        got_profile[str(h)] = prof
        if prof != golden["d0_range_weights"][str(h)]:
            ok = False
    report.add("d0-range-weight-profile", ok, computed=got_profile)

    # documented discrepancy: the printed expansion of d0(theta4 ^ theta5)
    computed = Form.basis(alg, (4, 5)).d0()
    printed = (Form.basis(alg, (1, 3, 5), -1)
               + Form.basis(alg, (2, 3, 5)))
    report.info("d0-theta45-printed-variant",
                kind="documented-discrepancy",
                computed=str(computed), printed_variant=str(printed),
                equal=computed == printed)

    # Laplacian families
    laps = {}
    for fam in laplacians.FAMILIES:
        laps[fam] = [laplacians.laplacian(cx, fam, h) for h in range(6)]

    ok = True
    got = {}
    for fam, mats in laps.items():
        orders = [m.homogeneous_order() for m in mats]
        got[fam] = orders
        if orders != golden["laplacian_orders"][fam]:
            ok = False
    report.add("laplacian-order-tables", ok, computed=got)

    ok = True
    bad = []
    for fam, mats in laps.items():
        for h, m in enumerate(mats):
            rep = laplacians.verify_self_adjoint(m)
            if not rep.get("self_adjoint"):
                ok = False
                bad.append((fam, h))
    report.add("laplacian-self-adjoint", ok, bad=bad)

    a2, a3 = laps["A"][2], laps["A"][3]
    report.add("A3-is-star-conjugate-of-A2",
               a3 == laplacians.hodge_conjugate(cx, a2, 2))

    ok = all(laps["A"][h] == laps["R"][h] for h in (0, 1, 4, 5))
    report.add("A-equals-R-away-from-middle-degrees", ok)

    ok = True
    signs = {}
    for fam in laplacians.FAMILIES:
        fam_signs = []
        for h in range(6):
            s = laplacians.star_duality_sign(cx, fam, h)
            fam_signs.append(s)
            if s is None:
                ok = False
        signs[fam] = fam_signs
    report.add("laplacian-star-duality", ok, signs=signs)

    # exponent tables
    for tag in ("H2", "C2", "H2cor", "H2sum"):
        rows = estimates.theorem_table(cx, tag)
        ok = all(r.agree for r in rows if r.discrepancy is None)
        flagged = [r.to_json() for r in rows if r.discrepancy is not None]
        report.add(f"exponent-table-{tag}", ok,
                   rows=[r.to_json() for r in rows])
        for r in flagged:
            report.info(f"exponent-{tag}-h{r['h']}-{r['term']}-ordersum",
                        **r["discrepancy"])
    pairs = estimates.sum_space_pairs(cx)
    report.add("sum-space-pairs",
               all(v["agree"] for v in pairs.values()),
               pairs={str(k): v["paper_display"] for k, v in pairs.items()})

    # window bookkeeping wherever the Lebesgue mapping theorem is invoked
    ok = True
    for tag in ("H2", "C2", "H2cor", "H2sum"):
        for r in estimates.theorem_table(cx, tag):
            if r.folland_cited and r.method in ("cvs", "folland") \
                    and not r.window_ok:
                ok = False
    report.add("kernel-window-bookkeeping", ok)

    # Cartan-formula consistency and tensor adjudication
    ok = True
    for h in (1, 2, 3, 4):
        form = cx.pi_E(cx.symbolic_basis_form(h))
        z = estimates._PAIRING_FIELDS[h]
        if not estimates._rows_equal(estimates.cartan_pairing(cx, form, z),
                                     estimates.direct_pairing(form, z)):
            ok = False
    report.add("cartan-formula-two-routes", ok)

    findings = estimates.tensor_findings(cx, "cvs")
    for entry in findings:
        if entry["status"] == "certified":
            report.add(entry["check"], True, adjudication="certified")
        else:
            fixed = entry.get("corrected_tensor") is not None and \
                entry.get("corrected_roundtrip_exact", False)
            report.info(entry["check"], kind="documented-discrepancy",
                        finding=entry)
            report.add(entry["check"] + "-adjudicated",
                       entry["paper_row_certificate"] is not None or fixed)
    ok = True
    for h in (3, 4):
        pt = estimates.proof_tensor(cx, h, "cvs")
        div = estimates.generalized_divergence(pt, "cvs")
        if estimates.check_row_membership(div, cx.dc_matrix(h)) is None:
            ok = False
    report.add("proof-tensors-h3-h4-certified", ok)

    # oracle cross-validation on the coordinate realization
    rng = random.Random(seed)
    trials = 30 if fast else 120
    ok = True
    for _ in range(trials):
        word = tuple(rng.randint(1, 5) for _ in range(rng.randint(1, 6)))
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exp = [0] * 5
            for _ in range(rng.randint(0, 6)):
                exp[rng.randint(0, 4)] += 1
            if sum(exp) > 6:
                continue
            terms[tuple(exp)] = field(rng.randint(-4, 4))
        p = Polynomial(field, 5, {e: c for e, c in terms.items() if c})
        direct = alg.realization.apply_word(word, p)
        normalized = coordinate_apply(EnvElement.from_word(alg, word), p)
        if direct != normalized:
            ok = False
    report.add("pbw-coordinate-oracle", ok, trials=trials)

    # free nilpotent generator reproduces the built-in table
    free = free_nilpotent(2, 3)
    same = (free.layer_dims == alg.layer_dims
            and free.homogeneous_dimension == alg.homogeneous_dimension
            and {k: {i: str(c) for i, c in v.items()}
                 for k, v in free.brackets.items()}
            == {k: {i: str(c) for i, c in v.items()}
                for k, v in alg.brackets.items()})
    report.add("free-nilpotent-2-3-matches-builtin", same)


def regenerate_golden(cx: RuminComplex) -> dict:
    """Rebuild the reference file schema from the current computation.

    Intended for maintenance via an explicit flag only: the committed file
    is a transcription of the published listings and normally must not be
    rewritten from the engine that it gates.
    """
    out = {"group": "cartan", "dims": list(cx.dims()), "bases": {},
           "dc": {}, "deltac": {}, "star": {},
           "dc_orders": list(cx.dc_orders()),
           "laplacian_orders": {}, "d0_range_weights": {}}
    for h in (1, 2, 3, 4):
        out["bases"][str(h)] = [
            [[str(c), list(t)] for t, c in sorted(xi.terms.items())]
            for xi in cx.E0(h)]
    for h in range(5):
        out["dc"][str(h)] = [[e.render() for e in row]
                             for row in cx.dc_matrix(h).entries]
    for h in range(1, 6):
        out["deltac"][str(h)] = [[e.render() for e in row]
                                 for row in cx.deltac_matrix(h).entries]
    for h in (1, 2, 3, 4):
        out["star"][str(h)] = [[int(c.as_rational()) for c in row]
                               for row in cx.star_matrix(h)]
    for fam in laplacians.FAMILIES:
        out["laplacian_orders"][fam] = [
            laplacians.laplacian(cx, fam, h).homogeneous_order()
            for h in range(6)]
    for h in (1, 2, 3):
        prof = {}
        for w in sorted(cx._weight_blocks(h + 1)):
            rows, dom, cod = cx.d0_matrix_block(h, w)
            r = linalg.rank(cx.algebra.field, rows) if dom and cod else 0
            if r:
                prof[str(w)] = r
        out["d0_range_weights"][str(h)] = prof
    return out


def run_verify(group="builtin:cartan", golden_path=None, seed: int = 0,
               fast: bool = False) -> Report:
    report = Report()
    t0 = time.time()
    if group == "builtin:cartan":
        alg = cartan_group()
    elif group.startswith("free:"):
        m1, step = (int(x) for x in group.split(":", 1)[1].split(","))
        alg = free_nilpotent(m1, step)
    else:
        from .liealg import StratifiedLieAlgebra
        with open(group) as fh:
            alg = StratifiedLieAlgebra.from_json(fh.read())
    cx = RuminComplex(alg)
    verify_group(cx, report, seed=seed)
    if alg.is_cartan_table() and alg.realization is not None:
        golden = load_golden(golden_path)
        verify_cartan(cx, report, golden, seed=seed, fast=fast)
    report.checks.append({"name": "elapsed-seconds", "status": "info",
                          "seconds": round(time.time() - t0, 3)})
    return report
