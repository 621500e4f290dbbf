"""The symmetric matrix-exponential potential and its scalar growth function.

The potential of a symmetric Y at parameter delta > 0 is
tr e^{delta Y} + tr e^{-delta Y}; it is carried as a log everywhere because
delta * ||Y|| can exceed 700 in coarse-schedule runs, overflowing direct
exponentials. The scalar function psi(m1, delta) = (e^{delta m1} - 1
- delta m1) / m1^2 is the normalized quadratic remainder of the exponential
and governs the per-step growth exponent of greedy runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, Overflow
from .symmat import SymMatrix, _eigvalsh

# Below this value of u = delta*m1 the closed form cancels catastrophically;
# a four-term series has relative error ~u^3/60 < 2e-14 there.
SERIES_CUTOFF = 1e-4
EXP_ARG_MAX = 700.0


@dataclass(frozen=True)
class PsiValue:
    """psi evaluated at (m1, delta); value >= delta^2/2, and <= delta^2 when delta <= 1/m1."""

    m1: float
    delta: float
    value: float


@dataclass(frozen=True)
class LogPotential:
    """log(tr e^{delta Y} + tr e^{-delta Y}) together with its delta."""

    delta: float
    value: float


def psi_value(m1: float, delta: float) -> float:
    """Bare float value of psi; shared fast path for hot loops."""
    if m1 <= 0:
        raise DomainError(f"m1 must be positive, got {m1}")
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    u = delta * m1
    if u > EXP_ARG_MAX:
        raise Overflow(f"delta*m1 = {u:.4g} exceeds {EXP_ARG_MAX:g}")
    if u < SERIES_CUTOFF:
        remainder = 0.5 * u * u * (1.0 + u / 3.0 + u * u / 12.0 + u * u * u / 60.0)
    else:
        remainder = math.expm1(u) - u
    return remainder / (m1 * m1)


def psi(m1: float, delta: float) -> PsiValue:
    """Normalized quadratic remainder (e^{delta m1} - 1 - delta m1) / m1^2."""
    return PsiValue(m1=float(m1), delta=float(delta), value=psi_value(m1, delta))


def log_potential_from_eigenvalues(eigenvalues: np.ndarray, delta: float) -> np.ndarray | float:
    """Log potential from a spectrum, via log-sum-exp over the 2d exponents {+-delta*mu_j}.

    Accepts a stacked (..., d) array of spectra and returns one value per row.
    Exact to relative ~1e-15 even when delta * max|mu| exceeds 700.
    """
    z = delta * np.asarray(eigenvalues, dtype=np.float64)
    exponents = np.concatenate([z, -z], axis=-1)
    out = logsumexp(exponents, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def log_potential(y: SymMatrix, delta: float) -> LogPotential:
    """log of the symmetric exponential potential of Y at parameter delta > 0."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    vals = _eigvalsh(y.entries)
    return LogPotential(delta=float(delta), value=log_potential_from_eigenvalues(vals, delta))


def scalar_exp_bound_gap(x: float, delta: float, m1: float) -> float:
    """Slack of the quadratic upper bound on the exponential at one point.

    Returns (1 + delta*x + psi(m1, delta)*x^2) - e^{delta*x}, which is
    nonnegative (up to ~1e-12 * e^{delta*m1} rounding) for every x <= m1.
    """
    if x > m1:
        raise DomainError(f"x = {x} exceeds m1 = {m1}")
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    p = psi_value(m1, delta)
    return (1.0 + delta * x + p * x * x) - math.exp(delta * x)
