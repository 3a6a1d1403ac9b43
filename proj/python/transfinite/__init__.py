"""Ranks and alternating-sum decompositions of step functions on countable ordinals."""

from fractions import Fraction

from ._transfinite import (
    Family,
    Fixture,
    Ordinal,
    PatternSet,
    RankReport,
    SeqFamily,
    Space,
    StepFn,
    Topology,
    TransfiniteError,
    alpha_fn,
    alpha_pair,
    alpha_xi_verify,
    beta,
    decompose,
    gamma_seq,
    phi_generate,
    run_suite,
    suite_names,
)
from . import _transfinite

__all__ = [
    "Family",
    "Fixture",
    "Ordinal",
    "PatternSet",
    "RankReport",
    "SeqFamily",
    "Space",
    "StepFn",
    "Topology",
    "TransfiniteError",
    "alpha_fn",
    "alpha_pair",
    "alpha_xi_verify",
    "altsum",
    "beta",
    "decompose",
    "gamma_seq",
    "phi_generate",
    "run_suite",
    "suite_names",
]


def _eval(f, x):
    return Fraction(f._eval(x))


def _values(f):
    return [Fraction(v) for v in f._values()]


StepFn.__call__ = _eval
StepFn.values = property(_values)


def altsum(family, x):
    """Alternating sum of a function family at x over its full length."""
    return Fraction(_transfinite._altsum(family, x))
