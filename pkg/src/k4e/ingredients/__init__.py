"""Ingredient providers: Latin squares, factorizations, frames, triple systems, PBDs and GDDs.

Every provider verifies its output before returning it.
"""

from __future__ import annotations

from .factor import Frame, near_one_factorization, one_factorization, two_frame
from .latin import GF, LatinSquare, idempotent_latin_square, latin_square, mols, transversal_design
from .pbd import PBD, pbd345
from .triples import p3_resolve, resolvable_kts15, sts
from .gdd import build_gdd, gdd_exists, gdd_from_pbd, k4e_gdd, searched_gdd, searched_igdd1, searched_mgdp  # noqa: E402

__all__ = [
    "Frame",
    "GF",
    "LatinSquare",
    "PBD",
    "build_gdd",
    "gdd_exists",
    "gdd_from_pbd",
    "idempotent_latin_square",
    "k4e_gdd",
    "latin_square",
    "mols",
    "near_one_factorization",
    "one_factorization",
    "p3_resolve",
    "pbd345",
    "resolvable_kts15",
    "searched_gdd",
    "searched_igdd1",
    "searched_mgdp",
    "sts",
    "transversal_design",
    "two_frame",
]
