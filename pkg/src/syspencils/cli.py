"""Command line front end.

Verbs: build | verify | solve | sample | dim.  Reports go to standard
output as JSON.  Exit codes: 0 pass, 1 verified fail, 2 input error,
3 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import spaces
from .core import BlockDims, eval_transfer
from .errors import PencilError, PoleError, SolverFailure
from .io import (
    decode_matrix,
    decode_vector,
    load_pencil,
    load_problem,
    pencil_to_dict,
    save_json,
)
from .spectra import (
    recover_left,
    recover_right,
    solve_pencil,
    verify_linearization,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_COMPUTE = 3

_SOURCES = {
    "c1": "c1", "companion1": "c1",
    "c2": "c2", "companion2": "c2",
    "dl": "dl",
    "sym": "sym", "symmetric": "sym",
    "herm": "herm", "hermitian": "herm",
    "explicit": "explicit",
}


def _emit(obj):
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _build_from_source(R, source, space, options):
    if source == "c1":
        return spaces.build_C1(R)
    if source == "c2":
        return spaces.build_C2(R)
    if source == "dl":
        return spaces.build_DL(R)
    if source == "sym":
        return spaces.build_symmetric(R)
    if source == "herm":
        return spaces.build_hermitian(R)
    ansatz = options.get("ansatz")
    if not isinstance(ansatz, dict):
        raise ValueError("explicit source needs an \"ansatz\" object in the problem options")
    v = decode_vector(ansatz["v"])
    w = decode_vector(ansatz["w"])
    W = decode_matrix(ansatz["W"]) if ansatz.get("W") else None
    W1 = decode_matrix(ansatz["W1"]) if ansatz.get("W1") else None
    if space == spaces.SPACE_L2G:
        return spaces.build_pencil_L2(R, v, w, W, W1)
    return spaces.build_pencil_L1(R, v, w, W, W1, space=space)


def _parse_basis(token: str, d: int):
    from .basis import BasisSpec

    if token == "monomial":
        return BasisSpec(kind="monomial", d=d)
    if token == "chebyshev":
        return BasisSpec(kind="chebyshev_T", d=d)
    if token.startswith("newton:"):
        nodes = [complex(part) for part in token[len("newton:"):].split(",") if part]
        if len(nodes) < d - 1:
            raise ValueError(f"newton basis needs at least {d - 1} nodes for degree {d}")
        return BasisSpec(kind="newton", d=d, nodes=tuple(nodes[: d - 1]))
    raise ValueError(f"unknown basis {token!r}")


def cmd_build(args) -> int:
    try:
        R, options = load_problem(args.input)
    except (OSError, ValueError, json.JSONDecodeError, PencilError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        P = _build_from_source(R, _SOURCES[args.source], args.space, options)
        if args.basis != "monomial":
            if P.space not in (spaces.SPACE_L1G,):
                raise ValueError("non-monomial bases apply to first-space pencils only")
            from .basis import build_L1_tilde

            P = build_L1_tilde(R, _parse_basis(args.basis, R.m),
                               _parse_basis(args.basis, R.k), P.v, P.w, P.W, P.W1)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PencilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    save_json(args.output, pencil_to_dict(P))
    return EXIT_PASS


def _to_monomial(P, R, basis_token):
    if basis_token == "monomial":
        return P
    from .basis import tilde_to_monomial

    return tilde_to_monomial(P, _parse_basis(basis_token, R.m),
                             _parse_basis(basis_token, R.k))


def cmd_verify(args) -> int:
    try:
        P = load_pencil(args.pencil)
        R, _ = load_problem(args.input)
        if P.dims != R.dims:
            raise ValueError(f"pencil dims {P.dims} do not match problem dims {R.dims}")
        P = _to_monomial(P, R, args.basis)
    except (OSError, ValueError, json.JSONDecodeError, PencilError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    tol_eig = args.tol_eig * (0.5 if args.strict else 1.0)
    tol_res = (args.tol * (0.5 if args.strict else 1.0)) if args.tol else None
    try:
        report = verify_linearization(P, R, tol_res=tol_res, tol_eig=tol_eig)
    except PencilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    _emit(report.to_dict())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_solve(args) -> int:
    try:
        P = load_pencil(args.pencil)
        R, _ = load_problem(args.input)
        if P.dims != R.dims:
            raise ValueError(f"pencil dims {P.dims} do not match problem dims {R.dims}")
        P = _to_monomial(P, R, args.basis)
    except (OSError, ValueError, json.JSONDecodeError, PencilError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        eigs = solve_pencil(P.X, P.Y)
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    recover = recover_left if P.space == spaces.SPACE_L2G else recover_right
    out = {"eigenvalues": [], "eigenvectors": [], "residuals": []}
    for i, lam in enumerate(eigs.eigenvalues):
        u = eigs.left[:, i] if P.space == spaces.SPACE_L2G else eigs.right[:, i]
        out["eigenvalues"].append([lam.real, lam.imag])
        try:
            rec = recover(u, P.dims, R, lam)
            G = eval_transfer(R, lam)
            if P.space == spaces.SPACE_L2G:
                res = float(np.linalg.norm(rec.x.conj() @ G))
            else:
                res = float(np.linalg.norm(G @ rec.x))
            out["eigenvectors"].append([[z.real, z.imag] for z in rec.x])
            out["residuals"].append(res)
        except (PoleError, PencilError):
            out["eigenvectors"].append(None)
            out["residuals"].append(None)
    _emit(out)
    return EXIT_PASS


def cmd_sample(args) -> int:
    try:
        R, _ = load_problem(args.input)
    except (OSError, ValueError, json.JSONDecodeError, PencilError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    passes = []
    try:
        for i in range(args.count):
            P = spaces.sample_space(R, seed=args.seed + i, space=args.space)
            if args.output:
                save_json(f"{args.output}_{i:03d}.json", pencil_to_dict(P))
            report = verify_linearization(P, R)
            passes.append(report.passed)
    except PencilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    summary = {
        "count": args.count,
        "pass_rate": (sum(passes) / len(passes)) if passes else None,
        "passes": passes,
        "seed": args.seed,
    }
    _emit(summary)
    return EXIT_PASS


def cmd_dim(args) -> int:
    try:
        dims = BlockDims(args.m, args.n, args.k, args.r)
    except PencilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(spaces.dim_space(dims))
    return EXIT_PASS


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syspencils",
        description="Build, sample and verify ansatz-space pencils of "
                    "state-space system matrices and transfer functions.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="build a pencil from a problem file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--space", default=spaces.SPACE_L1G,
                   choices=["l1s", "l1g", "l2g", "dl"])
    p.add_argument("--source", default="c1", choices=sorted(_SOURCES))
    p.add_argument("--basis", default="monomial",
                   help="monomial | chebyshev | newton:<comma separated nodes>")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify a pencil against a problem")
    p.add_argument("--pencil", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=None,
                   help="ansatz residual tolerance (default scale-aware)")
    p.add_argument("--tol-eig", dest="tol_eig", type=float, default=1e-6)
    p.add_argument("--strict", action="store_true", help="halve all tolerances")
    p.add_argument("--basis", default="monomial",
                   help="basis the pencil file is expressed in")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="eigenvalues and recovered eigenvectors")
    p.add_argument("--pencil", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--basis", default="monomial",
                   help="basis the pencil file is expressed in")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sample", help="sample pencils and report the verify pass rate")
    p.add_argument("--input", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--space", default=spaces.SPACE_L1G,
                   choices=["l1s", "l1g", "l2g", "dl", "sym", "herm"])
    p.add_argument("--output", default=None,
                   help="prefix for the written pencil files")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("dim", help="dimension of the first ansatz space")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_dim)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
