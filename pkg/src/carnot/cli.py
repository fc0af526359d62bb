"""Command-line front end.

Subcommands: build, dc, deltac, laplacian, pi-e, exponents, tensors, verify.
Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Output is deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import estimates, laplacians
from .liealg import (LieAlgebraError, StratifiedLieAlgebra, cartan_group,
                     free_nilpotent)
from .rumin import RuminComplex
from .verify import load_golden, run_verify


class UsageError(Exception):
    pass


def load_group(spec: str, max_dim: int = 64) -> StratifiedLieAlgebra:
    if spec == "builtin:cartan":
        return cartan_group()
    if spec.startswith("free:"):
        try:
            m1, step = (int(x) for x in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise UsageError(f"bad free group spec {spec!r}; use free:m,k")
        return free_nilpotent(m1, step, max_dim=max_dim)
    try:
        with open(spec) as fh:
            return StratifiedLieAlgebra.from_json(fh.read())
    except FileNotFoundError:
        raise UsageError(f"no such group file: {spec}")


def _aligned(cx, m, row_degree: int, col_degree: int, paper_basis: bool):
    """Transform a matrix into the published basis when requested."""
    if not paper_basis:
        return m
    if not cx.algebra.is_cartan_table():
        raise UsageError("--paper-basis requires the built-in group")
    from . import linalg
    from .rumin import OperatorMatrix
    from .verify import golden_form

    golden = load_golden()

    def t_mat(h, transposed):
        if str(h) not in golden["bases"]:
            rows = linalg.identity(cx.algebra.field, len(cx.E0(h)))
        else:
            expected = [golden_form(cx.algebra, spec, h)
                        for spec in golden["bases"][str(h)]]
            rows = cx.align_basis(cx.E0(h), expected)
            if transposed:
                rows = linalg.transpose(rows)
        return OperatorMatrix.from_scalar_matrix(cx.algebra, rows)

    return t_mat(row_degree, True) @ m @ t_mat(col_degree, False)


def cmd_build(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    dims = cx.dims()
    if args.format == "json":
        print(json.dumps({
            "n": alg.n, "layers": list(alg.layer_dims),
            "weights": list(alg.weights),
            "Q": alg.homogeneous_dimension,
            "dims": list(dims),
            "group": alg.to_json(),
        }, sort_keys=True))
    else:
        print(f"n = {alg.n}; layers = {','.join(map(str, alg.layer_dims))}; "
              f"weights = {','.join(map(str, alg.weights))}")
        print(f"dims E0 = {','.join(map(str, dims))}; "
              f"Q = {alg.homogeneous_dimension}")
    return 0


def cmd_dc(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    if not 0 <= args.degree < alg.n:
        raise UsageError(f"dc degree must be in 0..{alg.n - 1}")
    m = _aligned(cx, cx.dc_matrix(args.degree), args.degree + 1, args.degree,
                 args.paper_basis)
    print(m.render(args.format))
    return 0


def cmd_deltac(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    if not 1 <= args.degree <= alg.n:
        raise UsageError(f"deltac degree must be in 1..{alg.n}")
    m = _aligned(cx, cx.deltac_matrix(args.degree), args.degree - 1,
                 args.degree, args.paper_basis)
    print(m.render(args.format))
    return 0


def cmd_laplacian(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    try:
        m = laplacians.laplacian(cx, args.family, args.degree)
    except (laplacians.UnsupportedGroup, ValueError) as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        rep = laplacians.verify_self_adjoint(m)
        print(json.dumps({
            "family": args.family, "degree": args.degree,
            "order": m.homogeneous_order(),
            "self_adjoint": bool(rep.get("self_adjoint")),
            "matrix": m.to_json(),
        }, sort_keys=True))
    else:
        print(m.render(args.format))
    return 0


def cmd_pi_e(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    basis = cx.E0(args.degree)
    if not 1 <= args.index <= len(basis):
        raise UsageError(f"index must be in 1..{len(basis)}")
    from .exterior import OperatorForm
    lifted = cx.pi_E(OperatorForm.from_form(basis[args.index - 1]))
    if args.format == "json":
        print(json.dumps(lifted.to_json(), sort_keys=True))
    else:
        print(lifted.render())
    return 0


def cmd_exponents(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    try:
        rows = estimates.theorem_table(cx, args.theorem)
    except estimates.UnsupportedGroup as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        payload = {"theorem": args.theorem,
                   "rows": [r.to_json() for r in rows]}
        if args.theorem == "H2sum":
            payload["sum_pairs"] = {
                str(h): v for h, v in sorted(
                    estimates.sum_space_pairs(cx).items())}
        print(json.dumps(payload, sort_keys=True))
    else:
        for r in rows:
            part = f"/{r.part}" if r.part else ""
            flag = "agree" if r.agree else "DIFFERS"
            extra = "  [documented discrepancy]" if r.discrepancy else ""
            print(f"h={r.h} {r.term}{part}: |{r.rhs}|_{r.norm} "
                  f"paper {r.paper_display} derived {r.derived} "
                  f"({flag}){extra}")
    return 0


def cmd_tensors(args) -> int:
    alg = load_group(args.group, args.max_dim)
    cx = RuminComplex(alg)
    try:
        findings = estimates.tensor_findings(cx, args.convention)
    except estimates.UnsupportedGroup as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        print(json.dumps({"convention": args.convention,
                          "findings": findings}, sort_keys=True))
    else:
        for f in findings:
            print(f"{f['check']}: {f['status']}")
            print(f"  divergence: {f['display_divergence']}")
            print(f"  certificate: {f['certificate']}")
            if f.get("corrected_tensor") is not None:
                print(f"  corrected tensor: {f['corrected_tensor']}")
    return 0


def cmd_verify(args) -> int:
    if args.update_golden:
        from .liealg import cartan_group
        from .rumin import RuminComplex as _RC
        from .verify import regenerate_golden

        data = regenerate_golden(_RC(cartan_group()))
        with open(args.update_golden, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
        print(f"wrote regenerated reference data to {args.update_golden}")
        print("note: the committed file transcribes the published listings; "
              "review any diff before adopting it")
        return 0
    report = run_verify(args.group, golden_path=args.golden, seed=args.seed,
                        fast=args.fast)
    if args.format == "json":
        print(json.dumps(report.to_json(), sort_keys=True, default=str))
    else:
        for c in report.checks:
            print(f"{c['status'].upper():5} {c['name']}")
        print("result:", "ok" if report.ok else "FAILED")
        for f in report.failures():
            detail = {k: v for k, v in f.items()
                      if k not in ("name", "status", "rows")}
            print(f"  failed: {f['name']} {detail}")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default="builtin:cartan",
                        help="builtin:cartan | free:m,k | path to a JSON file")
    common.add_argument("--format", default="text",
                        choices=("text", "latex", "json"))
    common.add_argument("--max-dim", type=int, default=64)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--paper-basis", action="store_true",
                        help="print in the published basis (the default "
                             "basis already matches it on the built-in group)")

    parser = argparse.ArgumentParser(
        prog="carnot",
        description="Exact calculus for the intrinsic complex on Carnot groups")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("build", parents=[common],
                   help="validate a group and print its summary")

    p = sub.add_parser("dc", parents=[common],
                       help="intrinsic differential matrix")
    p.add_argument("--degree", type=int, required=True)
    p = sub.add_parser("deltac", parents=[common],
                       help="intrinsic codifferential matrix")
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("laplacian", parents=[common],
                       help="Hodge-Laplacian matrix")
    p.add_argument("--family", required=True, choices=laplacians.FAMILIES)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("pi-e", parents=[common],
                       help="lift of a basis form to the subcomplex")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--index", type=int, default=1)

    p = sub.add_parser("exponents", parents=[common],
                       help="limiting-exponent tables")
    p.add_argument("--theorem", required=True,
                   choices=("H2", "C2", "H2cor", "H2sum"))

    p = sub.add_parser("tensors", parents=[common],
                       help="divergence-free tensor findings")
    p.add_argument("--convention", default="cvs", choices=("cvs", "pierre"))

    p = sub.add_parser("verify", parents=[common],
                       help="run the full verification suite")
    p.add_argument("--golden", default=None,
                   help="override the committed reference file")
    p.add_argument("--fast", action="store_true",
                   help="fewer randomized oracle trials")
    p.add_argument("--update-golden", metavar="PATH", default=None,
                   help="write engine-regenerated reference data to PATH "
                        "instead of running checks")
    return parser


COMMANDS = {
    "build": cmd_build,
    "dc": cmd_dc,
    "deltac": cmd_deltac,
    "laplacian": cmd_laplacian,
    "pi-e": cmd_pi_e,
    "exponents": cmd_exponents,
    "tensors": cmd_tensors,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LieAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
