"""Finite abstract polytopes: flag graphs, symmetry, presentations, constructions."""
from ._accel import backend
from .constructions import alternating, chiral_extension, halved, medial, two_power
from .io import read_poset, write_poset
from .poset import (FacePoset, FlagGraph, PolytopeError, build_poset, dual, isomorphic, schlafli_type,
                    section, validate)
from .symmetry import automorphisms, flag_orbits, is_hereditary, transitivity

__version__ = "0.1.0"

__all__ = [
    "FacePoset", "FlagGraph", "PolytopeError", "alternating", "automorphisms", "backend", "build_poset",
    "chiral_extension", "dual", "flag_orbits", "halved", "is_hereditary", "isomorphic", "medial",
    "read_poset", "schlafli_type", "section", "transitivity", "two_power", "validate", "write_poset",
]
