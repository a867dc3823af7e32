"""Weak values of operators between pre- and postselected states."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NearPoleWarning, PostselectionLostError
from .expr import evaluate, parse
from .linalg import apply, inner
from .scenario import Scenario, effective_bra

#: Numerator magnitudes at or below this count as a vanishing weak value.
ZERO_TOL = 1e-12

#: Denominator magnitudes below this set the near-pole flag.
POLE_TOL = 1e-6


@dataclass(frozen=True)
class WeakValue:
    """Complex weak value with its defining matrix elements.

    ``is_zero`` tests the numerator <post|U A|pre> against an absolute
    tolerance, not the ratio, so vanishing is well defined even near a small
    denominator. A non-vanishing numerator is exactly the condition for the
    measuring meter to register at all, which is what channel-presence
    statements rest on. ``near_pole`` warns that the denominator is small
    enough for the ratio to be unrepresentative of meter readings.
    """

    value: complex
    numerator: complex
    denominator: complex
    is_zero: bool
    near_pole: bool


def weak_value(s: Scenario, op: np.ndarray) -> WeakValue:
    """Weak value <post|U A|pre> / <post|U|pre> of an arbitrary operator."""
    denominator = s.post_overlap
    if abs(denominator) <= ZERO_TOL:
        raise PostselectionLostError(
            "postselection overlap vanishes; no weak value exists"
        )
    numerator = inner(effective_bra(s), apply(op, s.pre_state))
    near_pole = abs(denominator) < POLE_TOL
    if near_pole:
        warnings.warn(
            f"postselection overlap {abs(denominator):.3e} is below {POLE_TOL:g}; "
            "weak value may not be representative of meter readings",
            NearPoleWarning,
            stacklevel=2,
        )
    return WeakValue(
        value=numerator / denominator,
        numerator=numerator,
        denominator=denominator,
        is_zero=abs(numerator) <= ZERO_TOL,
        near_pole=near_pole,
    )


def weak_value_expr(s: Scenario, text: str) -> WeakValue:
    """Weak value of a projector expression over the scenario's channels."""
    return weak_value(s, evaluate(parse(text), s.channels))
