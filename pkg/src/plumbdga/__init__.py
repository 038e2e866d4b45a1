"""Exact construction and verification of DG-algebras attached to plumbings."""

from .algebra import QQ, Alphabet, Element, Generator, PrimeField, parse_element, render
from .dga import (ElementaryAutomorphism, GeneratorMap, Presentation, TwistedMap, apply_automorphism,
                  check_d_squared, check_grading, check_homomorphism, destabilize, extend_diff)
from .plumbing import PlumbingGraph, build_ce, build_mpp, build_phi, validate_graph, verify_graph
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "QQ", "Alphabet", "Element", "Generator", "PrimeField", "parse_element", "render",
    "ElementaryAutomorphism", "GeneratorMap", "Presentation", "TwistedMap", "apply_automorphism",
    "check_d_squared", "check_grading", "check_homomorphism", "destabilize", "extend_diff",
    "PlumbingGraph", "build_ce", "build_mpp", "build_phi", "validate_graph", "verify_graph",
    "Check", "Report",
]
