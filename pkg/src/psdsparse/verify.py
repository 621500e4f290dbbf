"""Numerical checks for every inequality behind the greedy guarantee.

Each suite draws random inputs and evaluates one proved inequality, reporting
the worst slack (right side minus left side, in the comparison's natural log
or spectral scale) over all trials. A negative slack beyond the suite's
tolerance falsifies the implementation; the reproducing seed is in the
report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .instance import center, gen_random_psd
from .potential import log_potential_from_eigenvalues, psi_value, scalar_exp_bound_gap
from .symmat import SymMatrix, _eigvalsh, _symmetrize, sym_apply

SUITES = ("one-step", "mgf", "gt", "interp", "lower", "scalar", "psi")

SUITE_TOLS = {
    "one-step": 1e-9,
    "mgf": 1e-9,
    "gt": 1e-9,
    "interp": 1e-9,
    "lower": 1e-9,
    "scalar": 1e-12,
    "psi": 1e-12,
}


@dataclass(frozen=True)
class CheckReport:
    suite: str
    trials: int
    worst_slack: float
    passed: bool
    seed: int
    tolerance: float
    worst_trial: int = 0

    @classmethod
    def merge(cls, suite: str, slacks, seed: int) -> "CheckReport":
        tol = SUITE_TOLS[suite]
        worst = int(np.argmin(slacks))
        value = float(slacks[worst])
        return cls(
            suite=suite,
            trials=len(slacks),
            worst_slack=value,
            passed=value >= -tol,
            seed=seed,
            tolerance=tol,
            worst_trial=worst,
        )


@dataclass(frozen=True, eq=False)
class GeneralCenteredFamily:
    """A centered family that need not come from a PSD decomposition.

    Carries decoupled bounds: m1 caps each matrix norm, m2 caps the top
    eigenvalue of the weighted sum of squares. The one-step and moment
    bounds hold for any such family, not only for decompositions of the
    identity.
    """

    weights: np.ndarray
    mats: np.ndarray
    m1: float
    m2: float

    @property
    def d(self) -> int:
        return self.mats.shape[1]

    @property
    def m(self) -> int:
        return self.mats.shape[0]

    def stack(self) -> np.ndarray:
        return self.mats


def random_symmetric(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((d, d))
    return scale * 0.5 * (g + g.T)


def random_centered_family(
    rng: np.random.Generator, max_d: int = 16, max_m: int = 12, scale: float = 2.0
) -> GeneralCenteredFamily:
    """Random symmetric matrices with the weighted mean projected out."""
    d = int(rng.integers(1, max_d + 1))
    m = int(rng.integers(1, max_m + 1))
    w = rng.random(m) + 1e-3
    w = w / w.sum()
    xs = np.stack([random_symmetric(rng, d, scale) for _ in range(m)])
    xs -= np.einsum("i,ijk->jk", w, xs)
    norms = np.max(np.abs(_eigvalsh(xs)), axis=-1)
    m1 = max(float(np.max(norms)), 1e-9)
    sq = _symmetrize(np.einsum("i,ijk->jk", w, xs @ xs))
    m2 = max(float(np.max(_eigvalsh(sq))), 0.0)
    return GeneralCenteredFamily(weights=w, mats=xs, m1=m1, m2=m2)


def _psd_derived_family(rng: np.random.Generator):
    d = int(rng.integers(1, 7))
    rank = int(rng.integers(1, d + 1))
    m = int(rng.integers(max(1, -(-d // rank)), 2 * d + 5))
    inst = gen_random_psd(d, m, rank, cond_cap=1e4, seed=int(rng.integers(0, 2**63)))
    return center(inst)


# --- single-input checks ---------------------------------------------------------


def _one_step_slack(fam, y: np.ndarray, delta: float) -> float:
    """Slack of: weighted avg of Phi(Y + X_i) <= exp(m2 * psi_{m1}(delta)) * Phi(Y)."""
    scores = log_potential_from_eigenvalues(_eigvalsh(y[np.newaxis] + fam.stack()), delta)
    lhs = float(logsumexp(scores, b=fam.weights))
    rhs = fam.m2 * psi_value(fam.m1, delta) + float(
        log_potential_from_eigenvalues(_eigvalsh(y), delta)
    )
    return rhs - lhs


def check_one_step(fam, y: SymMatrix, delta: float, seed: int = 0) -> CheckReport:
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return CheckReport.merge("one-step", [_one_step_slack(fam, y.entries, delta)], seed)


def _mgf_slack(fam, delta: float) -> float:
    """Spectral slack of: sum_i w_i exp(±delta X_i) <= exp(m2 psi_{m1}(delta)) Id."""
    vals, vecs = np.linalg.eigh(fam.stack())
    cap = math.exp(fam.m2 * psi_value(fam.m1, delta))
    worst = math.inf
    for sign in (1.0, -1.0):
        z = np.einsum("i,ijk,ik,ilk->jl", fam.weights, vecs, np.exp(sign * delta * vals), vecs)
        top = float(np.max(_eigvalsh(_symmetrize(z))))
        worst = min(worst, cap - top)
    return worst


def check_mgf(fam, delta: float, seed: int = 0) -> CheckReport:
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return CheckReport.merge("mgf", [_mgf_slack(fam, delta)], seed)


def _gt_slack(u: np.ndarray, v: np.ndarray) -> float:
    """Relative slack of the trace product bound: tr e^{U+V} <= tr(e^U e^V)."""
    lhs = float(np.sum(np.exp(_eigvalsh(_symmetrize(u + v)))))
    eu = sym_apply(SymMatrix(u), np.exp).entries
    ev = sym_apply(SymMatrix(v), np.exp).entries
    rhs = float(np.sum(eu * ev))
    return (rhs - lhs) / rhs


def check_golden_thompson(u: SymMatrix, v: SymMatrix, seed: int = 0) -> CheckReport:
    return CheckReport.merge("gt", [_gt_slack(u.entries, v.entries)], seed)


def _interp_slack(y: np.ndarray, eta: float, delta: float, d: int) -> float:
    """Slack of: log Phi_eta <= (1 - eta/delta) log(2d) + (eta/delta) log Phi_delta."""
    if eta == 0.0:
        return 0.0  # Phi_0 = 2d on both sides, analytically
    frac = eta / delta
    eigs = _eigvalsh(y)
    lhs = float(log_potential_from_eigenvalues(eigs, eta))
    rhs = (1.0 - frac) * math.log(2 * d) + frac * float(
        log_potential_from_eigenvalues(eigs, delta)
    )
    return rhs - lhs


def check_interpolation(y: SymMatrix, eta: float, delta: float, seed: int = 0) -> CheckReport:
    if delta <= 0 or not 0 <= eta <= delta:
        raise DomainError(f"need 0 <= eta <= delta with delta > 0, got eta={eta!r} delta={delta!r}")
    return CheckReport.merge("interp", [_interp_slack(y.entries, eta, delta, y.d)], seed)


def _lower_slack(y: np.ndarray, delta: float) -> float:
    """Slack of the norm lower bound: delta * ||Y|| <= log Phi_delta(Y)."""
    eigs = _eigvalsh(y)
    return float(log_potential_from_eigenvalues(eigs, delta)) - delta * float(
        np.max(np.abs(eigs))
    )


def check_lower_bound(y: SymMatrix, delta: float, seed: int = 0) -> CheckReport:
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return CheckReport.merge("lower", [_lower_slack(y.entries, delta)], seed)


# --- randomized suite drivers ----------------------------------------------------


def _trial_rng(seed: int, suite_index: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(suite_index, trial))
    return np.random.Generator(np.random.Philox(seed=ss))


def _family_for_trial(rng: np.random.Generator, trial: int):
    # alternate PSD-derived and unconstrained centered families: the bounds
    # must hold for both
    if trial % 2 == 0:
        return _psd_derived_family(rng)
    return random_centered_family(rng)


def _one_step_trial(rng: np.random.Generator, trial: int) -> float:
    fam = _family_for_trial(rng, trial)
    y = random_symmetric(rng, fam.d, scale=rng.uniform(0.0, 3.0))
    if rng.random() < 0.1:
        delta = 1e-6
    else:
        delta = rng.uniform(1e-6, 2.0) / fam.m1
    return _one_step_slack(fam, y, delta)


def _mgf_trial(rng: np.random.Generator, trial: int) -> float:
    fam = _family_for_trial(rng, trial)
    delta = rng.uniform(1e-6, 1.0) / fam.m1
    return _mgf_slack(fam, delta)


def _gt_trial(rng: np.random.Generator, trial: int) -> float:
    d = int(rng.integers(1, 17))
    u = random_symmetric(rng, d)
    v = random_symmetric(rng, d)
    for s in (u, v):
        top = float(np.max(np.abs(_eigvalsh(s))))
        if top > 0:
            s *= rng.uniform(0.1, 2.0) / top
    if trial % 16 == 0:
        v[:] = 0.0  # equality case
    return _gt_slack(u, v)


def _interp_trial(rng: np.random.Generator, trial: int) -> float:
    d = int(rng.integers(1, 17))
    y = random_symmetric(rng, d, scale=rng.uniform(0.0, 3.0))
    delta = rng.uniform(0.05, 2.0)
    if trial % 8 == 0:
        eta = 0.0
    elif trial % 8 == 1:
        eta = delta
    else:
        eta = rng.uniform(0.0, delta)
    return _interp_slack(y, eta, delta, d)


def _lower_trial(rng: np.random.Generator, trial: int) -> float:
    d = int(rng.integers(1, 17))
    y = random_symmetric(rng, d, scale=rng.uniform(0.0, 4.0))
    delta = rng.uniform(1e-6, 2.0)
    return _lower_slack(y, delta)


def _scalar_trial(rng: np.random.Generator, trial: int) -> float:
    m1 = rng.uniform(0.1, 8.0)
    delta = rng.uniform(1e-6, 5.0) / m1
    xs = np.concatenate(
        [
            np.linspace(-50.0 * m1, m1, 48),
            rng.uniform(-50.0 * m1, m1, 16),
            [0.0, m1],
        ]
    )
    scale = math.exp(delta * m1)
    return min(scalar_exp_bound_gap(float(x), delta, m1) for x in xs) / scale


def _psi_trial(rng: np.random.Generator, trial: int) -> float:
    m1 = rng.uniform(0.1, 8.0)
    slacks = []
    d1 = rng.uniform(1e-9, 1.0) / m1  # within the quadratic-cap range
    v1 = psi_value(m1, d1)
    slacks.append((d1 * d1 - v1) / (d1 * d1))
    slacks.append((v1 - 0.5 * d1 * d1) / (d1 * d1))
    d2 = rng.uniform(1e-6, 5.0) / m1  # half-quadratic lower bound needs no range cap
    v2 = psi_value(m1, d2)
    slacks.append((v2 - 0.5 * d2 * d2) / (d2 * d2))
    lo, hi = sorted((d2, rng.uniform(1e-6, 5.0) / m1))
    vhi = psi_value(m1, hi)
    slacks.append((vhi - psi_value(m1, lo)) / max(vhi, 1e-300))
    return min(slacks)


_TRIALS = {
    "one-step": _one_step_trial,
    "mgf": _mgf_trial,
    "gt": _gt_trial,
    "interp": _interp_trial,
    "lower": _lower_trial,
    "scalar": _scalar_trial,
    "psi": _psi_trial,
}


def run_suite(suite: str, trials: int, seed: int) -> CheckReport:
    """Run one named suite for the given number of random trials."""
    if suite not in _TRIALS:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    fn = _TRIALS[suite]
    suite_index = SUITES.index(suite)
    slacks = [fn(_trial_rng(seed, suite_index, t), t) for t in range(trials)]
    return CheckReport.merge(suite, slacks, seed)


def run_all(trials: int, seed: int) -> list[CheckReport]:
    return [run_suite(s, trials, seed) for s in SUITES]
