"""Schmidt-number witnesses, edge states and classification.

Matrices are complex numpy arrays on C^m (x) C^n with composite index a*n + b.
Report-producing calls return plain dicts parsed from the native JSON.
"""

import json

import numpy as np

from . import _qsw
from ._qsw import (
    CertificationError,
    NumericalError,
    ValidationError,
    catalog_names,
    evaluate,
    extremal_overlap,
    isotropic_witness,
    partial_transpose,
    ppt_min_eigenvalue,
    schmidt_coefficients,
)

__all__ = [
    "CertificationError",
    "NumericalError",
    "ValidationError",
    "catalog_entry",
    "catalog_names",
    "catalog_state",
    "classify",
    "conjecture_scan",
    "edge_decompose",
    "evaluate",
    "extremal_overlap",
    "isotropic_witness",
    "matrix_from_json",
    "partial_transpose",
    "ppt_min_eigenvalue",
    "rank4_schmidt2",
    "schmidt_coefficients",
]


def matrix_from_json(block):
    """Complex matrix (or vector) and dims from a JSON matrix block."""
    re = np.asarray(block["re"], dtype=float)
    im = np.asarray(block.get("im", np.zeros_like(re)), dtype=float)
    return re + 1j * im, tuple(block["dims"])


def catalog_entry(name, **params):
    return json.loads(_qsw.catalog_entry(name, {k: float(v) for k, v in params.items()}))


def catalog_state(name, **params):
    mat, _ = matrix_from_json(catalog_entry(name, **params))
    return mat


def edge_decompose(rho, m, n, k=2, preserve_ppt=False, restarts=64, seed=20010101):
    return json.loads(_qsw.edge_decompose(np.asarray(rho, dtype=complex), m, n, k, preserve_ppt, restarts, seed))


def rank4_schmidt2(rho, restarts=64, seed=20010101):
    return json.loads(_qsw.rank4_schmidt2(np.asarray(rho, dtype=complex), restarts, seed))


def classify(rho, m, n, k_max=0, restarts=64, seed=20010101):
    return json.loads(_qsw.classify(np.asarray(rho, dtype=complex), m, n, k_max, restarts, seed))


def conjecture_scan(restarts=64, seed=20010101):
    return json.loads(_qsw.conjecture_scan(restarts, seed))
