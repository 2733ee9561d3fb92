"""JSON schemas for problem and pencil files.

Complex numbers are written as ``[re, im]`` pairs, matrices as row-major
nested arrays of pairs and matrix polynomials as arrays of matrices in
ascending degree, so files round-trip bit exactly and stay language
neutral.  Both file kinds carry a ``"format": 1`` version field.
"""

from __future__ import annotations

import json

import numpy as np

from .core import BlockDims, MatrixPolynomial, Realization
from .spaces import SPACES, AnsatzPencil

__all__ = [
    "FORMAT_VERSION",
    "encode_matrix",
    "decode_matrix",
    "encode_vector",
    "decode_vector",
    "problem_to_dict",
    "problem_from_dict",
    "load_problem",
    "pencil_to_dict",
    "pencil_from_dict",
    "load_pencil",
    "save_json",
]

FORMAT_VERSION = 1


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_vector(v) -> list:
    return [_pair(z) for z in np.asarray(v).reshape(-1)]


def decode_vector(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def encode_matrix(M) -> list:
    M = np.asarray(M)
    return [[_pair(z) for z in row] for row in M]


def decode_matrix(data) -> np.ndarray:
    if not isinstance(data, list) or not data or not isinstance(data[0], list):
        raise ValueError("matrix must be a non-empty nested array")
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)


def encode_polymat(P: MatrixPolynomial) -> list:
    return [encode_matrix(c) for c in P.coeffs]


def decode_polymat(data) -> MatrixPolynomial:
    if not isinstance(data, list) or not data:
        raise ValueError("matrix polynomial must be a non-empty array of matrices")
    return MatrixPolynomial(tuple(decode_matrix(c) for c in data))


def _check_format(obj: dict, what: str):
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be a JSON object")
    if obj.get("format") != FORMAT_VERSION:
        raise ValueError(f"{what} must carry \"format\": {FORMAT_VERSION}")


def problem_to_dict(R: Realization, options: dict | None = None) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "realization": {
            "A": encode_polymat(R.A),
            "B": encode_matrix(R.B),
            "C": encode_matrix(R.C),
            "D": encode_polymat(R.D),
        },
    }
    if options:
        out["options"] = options
    return out


def problem_from_dict(obj: dict) -> tuple[Realization, dict]:
    _check_format(obj, "problem file")
    try:
        raw = obj["realization"]
        R = Realization(
            A=decode_polymat(raw["A"]),
            B=decode_matrix(raw["B"]),
            C=decode_matrix(raw["C"]),
            D=decode_polymat(raw["D"]),
        )
    except KeyError as exc:
        raise ValueError(f"problem file misses field {exc}") from exc
    return R, obj.get("options", {})


def pencil_to_dict(P: AnsatzPencil) -> dict:
    return {
        "format": FORMAT_VERSION,
        "X": encode_matrix(P.X),
        "Y": encode_matrix(P.Y),
        "dims": {"m": P.dims.m, "n": P.dims.n, "k": P.dims.k, "r": P.dims.r},
        "space": P.space,
        "v": encode_vector(P.v),
        "w": encode_vector(P.w),
    }


def pencil_from_dict(obj: dict) -> AnsatzPencil:
    _check_format(obj, "pencil file")
    try:
        dims = BlockDims(**{key: int(obj["dims"][key]) for key in ("m", "n", "k", "r")})
        space = obj["space"]
        if space not in SPACES:
            raise ValueError(f"unknown space tag {space!r}")
        return AnsatzPencil(
            X=decode_matrix(obj["X"]),
            Y=decode_matrix(obj["Y"]),
            dims=dims,
            space=space,
            v=decode_vector(obj["v"]),
            w=decode_vector(obj["w"]),
        )
    except KeyError as exc:
        raise ValueError(f"pencil file misses field {exc}") from exc


def load_problem(path) -> tuple[Realization, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))


def load_pencil(path) -> AnsatzPencil:
    with open(path, "r", encoding="utf-8") as fh:
        return pencil_from_dict(json.load(fh))


def save_json(path, obj: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
