"""Projective (strong) measurement statistics with and without postselection.

Probabilities are clamped to [0, 1] only after a tolerance check; values
outside [-1e-10, 1 + 1e-10] raise instead of being hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AblUndefinedError, ConsistencyError, ZeroProbabilityError
from .linalg import State, apply, as_operator, identity, inner
from .scenario import Scenario, effective_bra

_BOUNDS_TOL = 1e-10
_REAL_TOL = 1e-12

#: Squared-amplitude threshold below which a probability counts as zero.
_NULL_PROB = 1e-24


def _checked_probability(value: float, what: str) -> float:
    if value < -_BOUNDS_TOL or value > 1.0 + _BOUNDS_TOL:
        raise ConsistencyError(f"{what} = {value!r} lies outside [0, 1]")
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class CollapseOutcome:
    """Result of projecting a state: outcome probability and the
    renormalized post-measurement state."""

    probability: float
    state: State


def born_prob(state: State, p: np.ndarray) -> float:
    """Outcome probability <psi|P|psi> for a projective measurement."""
    m = as_operator(p)
    if m.shape[0] != state.dim:
        raise ValueError(f"dimension mismatch: operator {m.shape[0]} vs state {state.dim}")
    value = complex(np.vdot(state.amps, m @ state.amps))
    if abs(value.imag) > _REAL_TOL:
        raise ConsistencyError(
            f"expectation value has imaginary part {value.imag!r}; not a projector?"
        )
    return _checked_probability(value.real, "Born probability")


def collapse(state: State, p: np.ndarray) -> CollapseOutcome:
    """Project a state and renormalize."""
    probability = born_prob(state, p)
    if probability <= _NULL_PROB:
        raise ZeroProbabilityError("cannot collapse onto a zero-probability outcome")
    return CollapseOutcome(probability, apply(p, state).normalize())


def cond_prob_post(s: Scenario, p: np.ndarray) -> float:
    """Probability of passing postselection after the outcome p.

    This is |<post|U P|pre>|^2, the joint probability of the intermediate
    outcome and the final postselection; it factorizes as
    prob(post | outcome) * prob(outcome | pre).
    """
    amp = inner(effective_bra(s), apply(p, s.pre_state))
    return _checked_probability(abs(amp) ** 2, "conditional probability")


def abl_prob(s: Scenario, p: np.ndarray) -> float:
    """Probability of the outcome p given both pre- and postselection,
    for the two-outcome measurement {p, 1 - p}."""
    hit = cond_prob_post(s, p)
    miss = cond_prob_post(s, identity(s.dim) - as_operator(p))
    denominator = hit + miss
    if denominator <= _NULL_PROB:
        raise AblUndefinedError(
            "postselection is unreachable under this measurement; "
            "the conditional probability is undefined"
        )
    return _checked_probability(hit / denominator, "conditioned probability")


def bayes_check(s: Scenario, p: np.ndarray) -> float:
    """Residual of the consistency relation tying the two conditional
    probabilities together.

    Left side: prob(outcome | post, pre) * prob(post | pre); right side:
    prob(post | outcome, pre) * prob(outcome | pre), with prob(post | pre)
    evaluated for the two-outcome measurement {p, 1 - p}. Returns 0 when
    the outcome probability vanishes (conditioning on a null event).
    """
    outcome_prob = born_prob(s.pre_state, p)
    if outcome_prob <= _NULL_PROB:
        return 0.0
    hit = cond_prob_post(s, p)
    miss = cond_prob_post(s, identity(s.dim) - as_operator(p))
    post_prob = hit + miss
    if post_prob <= _NULL_PROB:
        return 0.0
    lhs = abl_prob(s, p) * post_prob
    rhs = (hit / outcome_prob) * outcome_prob
    return abs(lhs - rhs)
