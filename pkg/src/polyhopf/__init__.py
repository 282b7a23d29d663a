"""Exact computations with decorated polygons, their dissections, rule trees,
shuffle linearizations and bar differentials, plus numeric multiple logarithms."""

from .algebra import FormalSum, Word
from .polygon import Arrow, Dissection, Polygon, enumerate_dissections, regions, sigma, split, tau
from .rules import RULES, Rule, get_rule, lambda_phi, tree_of
from .identities import IdentityReport, verify

__version__ = "0.1.0"

__all__ = [
    "FormalSum", "Word", "Arrow", "Dissection", "Polygon", "enumerate_dissections",
    "regions", "sigma", "split", "tau", "RULES", "Rule", "get_rule", "lambda_phi",
    "tree_of", "IdentityReport", "verify",
]
