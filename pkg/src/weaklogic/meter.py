"""Finite-strength von Neumann pointer simulation for projector observables.

The meter starts in a Gaussian wavepacket phi(q) with Var(Q) = sigma^2,
i.e. phi(q) proportional to exp(-q^2 / (4 sigma^2)). Coupling a projector P
to the pointer momentum splits the joint state into an unshifted component
(1 - P)|pre> . phi(q) and a shifted component P|pre> . phi(q - g); after
postselection the pointer wavefunction is

    psi(q) = alpha phi(q) + beta phi(q - g),
    alpha = <post|U (1 - P)|pre>,  beta = <post|U P|pre>.

Pointer statistics are quadratures on a uniform grid. The q-derivative
needed for the momentum mean is evaluated from the exact derivative of the
Gaussian components; finite differences at the default grid resolution bias
the momentum readout by more than the advertised tolerances. With this
convention mean_q / g tends to Re and 2 sigma^2 mean_p / g to Im of the weak
value as g tends to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    MeterGridError,
    NotAProjectorError,
    PostselectionLostError,
    SweepDivergenceError,
)
from .linalg import STRUCT_TOL, apply, as_operator, identity, inner, is_projector
from .scenario import Scenario, effective_bra

#: Success weights at or below this count as extinguished postselection.
_EXTINCT = 1e-14

#: Maximum tolerated pointer density at the grid edges.
_EDGE_DENSITY = 1e-14


@dataclass(frozen=True)
class MeterConfig:
    """Pointer discretization parameters.

    ``grid_halfwidth`` of None selects 12 sigma + 2 g, wide enough that the
    pointer density at the edges stays below 1e-14.
    """

    sigma: float
    g: float
    grid_points: int = 4096
    grid_halfwidth: float | None = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.g < 0:
            raise ValueError("coupling strength g must be non-negative")
        if self.grid_points < 16:
            raise ValueError("grid_points must be at least 16")
        if self.grid_halfwidth is not None and not self.grid_halfwidth > 0:
            raise ValueError("grid_halfwidth must be positive")

    @property
    def halfwidth(self) -> float:
        if self.grid_halfwidth is not None:
            return self.grid_halfwidth
        return 12.0 * self.sigma + 2.0 * self.g


@dataclass(frozen=True)
class PointerStats:
    """Postselected pointer readout: position mean, momentum mean, and the
    probability that the run survives postselection."""

    mean_q: float
    mean_p: float
    success_prob: float


def _grid(cfg: MeterConfig) -> np.ndarray:
    return np.linspace(-cfg.halfwidth, cfg.halfwidth, cfg.grid_points)


def _packet(q: np.ndarray, sigma: float) -> np.ndarray:
    return (2.0 * np.pi * sigma**2) ** -0.25 * np.exp(-(q**2) / (4.0 * sigma**2))


def _packet_pair(cfg: MeterConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    q = _grid(cfg)
    phi0 = _packet(q, cfg.sigma)
    phig = _packet(q - cfg.g, cfg.sigma)
    edge = max(phi0[0], phi0[-1], phig[0], phig[-1]) ** 2
    if edge >= _EDGE_DENSITY:
        raise MeterGridError(
            f"pointer density {edge:.3e} at the grid edge exceeds {_EDGE_DENSITY:g}; "
            "widen grid_halfwidth"
        )
    return q, phi0, phig


def _split_amplitudes(s: Scenario, p: np.ndarray) -> tuple[complex, complex]:
    p = as_operator(p)
    if not is_projector(p, STRUCT_TOL):
        raise NotAProjectorError("meter coupling requires a projector observable")
    bra = effective_bra(s)
    beta = inner(bra, apply(p, s.pre_state))
    alpha = inner(bra, s.pre_state) - beta
    return alpha, beta


def measure_pointer(s: Scenario, p: np.ndarray, cfg: MeterConfig) -> PointerStats:
    """Postselected pointer statistics for a single projector coupling."""
    alpha, beta = _split_amplitudes(s, p)
    q, phi0, phig = _packet_pair(cfg)
    psi = alpha * phi0 + beta * phig
    density = np.abs(psi) ** 2
    success = float(np.trapezoid(density, q))
    if success <= _EXTINCT:
        raise PostselectionLostError(
            "postselection extinguishes the meter state; no statistics exist"
        )
    mean_q = float(np.trapezoid(q * density, q)) / success
    sig2 = 2.0 * cfg.sigma**2
    dpsi = alpha * (-q / sig2) * phi0 + beta * (-(q - cfg.g) / sig2) * phig
    mean_p = float(np.trapezoid(np.conj(psi) * dpsi, q).imag) / success
    return PointerStats(mean_q=mean_q, mean_p=mean_p, success_prob=success)


def weak_limit_estimate(
    s: Scenario,
    p: np.ndarray,
    sigma: float,
    g_sweep,
    grid_points: int = 4096,
) -> complex:
    """Extrapolate pointer readouts to zero coupling.

    Each sweep point yields the estimate mean_q / g + i 2 sigma^2 mean_p / g;
    the two smallest couplings are combined by linear extrapolation to g = 0.
    The finite-coupling bias of a Gaussian pointer is even in g, so the
    smallest couplings dominate the refinement; a fit across the whole sweep
    would drag the large-g bias into the intercept.
    """
    sweep = [float(g) for g in g_sweep]
    if len(sweep) < 2:
        raise ValueError("g_sweep needs at least two couplings")
    if any(g <= 0 for g in sweep):
        raise ValueError("all sweep couplings must be positive")
    if any(b >= a for a, b in zip(sweep, sweep[1:])):
        raise ValueError("g_sweep must be strictly decreasing")

    estimates = []
    for g in sweep:
        cfg = MeterConfig(sigma=sigma, g=g, grid_points=grid_points)
        stats = measure_pointer(s, p, cfg)
        estimates.append(
            stats.mean_q / g + 1j * (2.0 * sigma**2 * stats.mean_p / g)
        )

    diffs = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
    if len(diffs) >= 2 and diffs[-1] > diffs[0] and diffs[-1] > 1e-12:
        raise SweepDivergenceError(
            "weak-limit estimates move apart as g shrinks; "
            f"successive changes {[f'{d:.3e}' for d in diffs]}"
        )

    g_prev, g_min = sweep[-2], sweep[-1]
    e_prev, e_min = estimates[-2], estimates[-1]
    return (g_prev * e_min - g_min * e_prev) / (g_prev - g_min)


def sequential_disturbance(
    s: Scenario,
    p1: np.ndarray,
    p2: np.ndarray,
    sigma: float,
    g: float,
    grid_points: int = 4096,
) -> float:
    """Change in the second meter's reading caused by a preceding coupling.

    Both projectors couple at strength g to independent Gaussian pointers;
    after postselection the second pointer's position mean is compared with
    and without the first coupling. The readings are normalized by g (a
    reading is itself of order g), so the returned disturbance measures the
    shift of the extracted weak-value estimate and scales as g^2.
    """
    if g <= 0:
        raise ValueError("coupling strength g must be positive")
    p1 = as_operator(p1)
    p2 = as_operator(p2)
    for which, p in (("first", p1), ("second", p2)):
        if not is_projector(p, STRUCT_TOL):
            raise NotAProjectorError(f"{which} meter coupling requires a projector")
    if not np.any(p1):
        return 0.0  # no first coupling at all

    bra = effective_bra(s)
    one = identity(s.dim)
    splits1 = (one - p1, p1)
    splits2 = (one - p2, p2)
    coeff = np.empty((2, 2), dtype=complex)
    for j, pj in enumerate(splits1):
        first = apply(pj, s.pre_state)
        for k, pk in enumerate(splits2):
            coeff[j, k] = inner(bra, apply(pk, first))

    cfg = MeterConfig(sigma=sigma, g=g, grid_points=grid_points)
    q, phi0, phig = _packet_pair(cfg)
    packets = (phi0, phig)
    overlap = np.empty((2, 2))
    q_moment = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            overlap[a, b] = np.trapezoid(packets[a] * packets[b], q)
            q_moment[a, b] = np.trapezoid(q * packets[a] * packets[b], q)

    weight = np.einsum("JK,jk,Jj,Kk->", coeff.conj(), coeff, overlap, overlap).real
    if weight <= _EXTINCT:
        raise PostselectionLostError(
            "postselection extinguishes the two-meter state; no statistics exist"
        )
    with_first = (
        np.einsum("JK,jk,Jj,Kk->", coeff.conj(), coeff, overlap, q_moment).real
        / weight
    )

    solo = np.array([inner(bra, apply(pk, s.pre_state)) for pk in splits2])
    weight0 = np.einsum("K,k,Kk->", solo.conj(), solo, overlap).real
    if weight0 <= _EXTINCT:
        raise PostselectionLostError(
            "postselection extinguishes the meter state; no statistics exist"
        )
    without_first = np.einsum("K,k,Kk->", solo.conj(), solo, q_moment).real / weight0

    return abs(with_first - without_first) / g
