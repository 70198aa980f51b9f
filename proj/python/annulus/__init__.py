"""Rotation numbers, chain recurrence and periodic orbits of annulus maps.

Thin layer over the compiled ``_annulus`` module. Exact rationals come back
from the extension as (numerator, denominator) pairs; ``symbolic_point``
converts them to ``fractions.Fraction``.
"""

from fractions import Fraction

from . import _annulus
from ._annulus import (
    AmbiguousLift,
    AnnulusMap,
    ChainRun,
    ConfigError,
    Error,
    InvalidChain,
    ItineraryViolation,
    NearRational,
    NoConvergence,
    NotInBasin,
    NotLifted,
    NotPeriodic,
    NumericError,
    OutOfDomain,
    UnresolvedWinding,
    ZeroOnBoundary,
    atkinson_small_sums,
    birkhoff_rotation,
    chain_classes,
    chain_dynamical_index,
    classify_basin,
    concat_solver,
    find_periodic,
    fixed_point_index,
    heteroclinic_chain,
    horseshoe_core,
    map_from_spec,
    paper_example,
    prime_end_rotation,
    rigid_translation,
    rotation_of_periodic,
    svg_from_csv,
)


def symbolic_point(word):
    """Exact horseshoe periodic point of a 0/1 itinerary, as Fractions."""
    raw = _annulus.symbolic_point(word)

    def pt(pair):
        (xn, xd), (tn, td) = pair
        return Fraction(xn, xd), Fraction(tn, td)

    return {
        "point": pt(raw["point"]),
        "p": raw["p"],
        "q": raw["q"],
        "orbit": [pt(z) for z in raw["orbit"]],
    }


__all__ = [name for name in dir() if not name.startswith("_")]
