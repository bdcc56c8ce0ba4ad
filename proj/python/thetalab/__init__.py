"""Exact rank-2 cluster scattering diagrams, broken lines, and theta functions.

The heavy lifting happens in the C++ extension; this package adds JSON
decoding so results come back as plain Python structures.
"""

import json as _json

from ._core import (
    PreconditionViolation,
    VerificationFailure,
    dom_membership,
    find_mutation_symmetries,
    mutation_map,
    mutate_matrix,
    n_set_membership,
    psi,
    skew_symmetrizers,
)
from . import _core


def scattering_diagram(B, order):
    return _json.loads(_core.scattering_diagram(B, order))


def theta(B, m, order):
    return _json.loads(_core.theta(B, m, order))


def mutate_theta(B, m, k, order):
    return _json.loads(_core.mutate_theta(B, m, k, order))


def structure_constants(B, p1, p2, order):
    return _json.loads(_core.structure_constants(B, p1, p2, order))


__all__ = [
    "PreconditionViolation",
    "VerificationFailure",
    "dom_membership",
    "find_mutation_symmetries",
    "mutate_matrix",
    "mutate_theta",
    "mutation_map",
    "n_set_membership",
    "psi",
    "scattering_diagram",
    "skew_symmetrizers",
    "structure_constants",
    "theta",
]
