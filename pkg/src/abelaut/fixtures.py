"""Shipped example tori, decompositions and construction data."""
from __future__ import annotations

from functools import lru_cache

from . import io
from .construction import TorsorDatum, default_candidates
from .torus import IsogenyDecomposition, LatticeTorus


@lru_cache(maxsize=None)
def gaussian_curve() -> LatticeTorus:
    """C / Z[i]."""
    return io.torus_from_obj(io.load_fixture("gaussian_curve"))


@lru_cache(maxsize=None)
def eisenstein_curve() -> LatticeTorus:
    """C / Z[zeta_6]; J has no rational form, stored as K / sqrt(3)."""
    return io.torus_from_obj(io.load_fixture("eisenstein_curve"))


def _datum(name) -> TorsorDatum:
    return io.datum_from_obj(io.load_fixture(name))


@lru_cache(maxsize=None)
def cm_product_datum() -> TorsorDatum:
    """Z[i] curve x Z[zeta6] curve, Sigma trivial, p = 7."""
    return _datum("cm_product")


@lru_cache(maxsize=None)
def glued_datum() -> TorsorDatum:
    """The same two curves glued along a 2-torsion point: |Sigma| = 2."""
    return _datum("glued")


@lru_cache(maxsize=None)
def gaussian_square_datum() -> TorsorDatum:
    """E x E for the Z[i] curve E; Aut_0 is infinite here."""
    return _datum("gaussian_square")


def cm_product() -> IsogenyDecomposition:
    return cm_product_datum().decomp


def glued() -> IsogenyDecomposition:
    return glued_datum().decomp


def gaussian_square() -> IsogenyDecomposition:
    return gaussian_square_datum().decomp


def shear_matrix():
    """(b1, b2) -> (b1, b1 + b2) on E x E."""
    return (
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (1, 0, 1, 0),
        (0, 1, 0, 1),
    )


@lru_cache(maxsize=None)
def candidate_suite():
    return tuple(io.candidates_from_obj(io.load_fixture("candidates"), cm_product().dim))


def write_candidate_suite(path):
    """Regenerate the shipped candidate file from the default enumeration."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(io.dumps(io.candidates_to_obj(default_candidates(cm_product_datum()))))
