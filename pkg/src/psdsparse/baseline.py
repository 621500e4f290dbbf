"""I.i.d. sampling baseline: draw indices from the weight distribution.

This is the probabilistic scheme the greedy selection derandomizes. Its
error guarantee holds in expectation only, so traces carry no bound column;
they exist for empirical comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .instance import Instance, center
from .symmat import _eigvalsh

# rows of (k, d, d) eigendecomposed per chunk; caps peak memory near 32 MB
_CHUNK_ENTRIES = 1 << 22


@dataclass(frozen=True, eq=False)
class BaselineTrace:
    seed: int
    indices: tuple[int, ...]            # 1-based into the instance family
    errors: np.ndarray                  # errors[k-1] = ||Y_k|| / k


def sample_run(inst: Instance, k_max: int, seed: int) -> BaselineTrace:
    """Sample k_max indices i.i.d. from the weights; record every prefix error.

    Uses the counter-based Philox generator with inverse-CDF lookup, so a
    given (instance, k_max, seed) reproduces bit-identically across
    platforms.
    """
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    rng = np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(int(seed))))
    cdf = np.cumsum(inst.weights)
    cdf[-1] = 1.0  # close the simplex gap so u < 1 always lands in range
    draws = np.searchsorted(cdf, rng.random(k_max), side="right")

    xs = center(inst).stack()
    errors = np.empty(k_max)
    chunk = max(1, _CHUNK_ENTRIES // (inst.d * inst.d))
    y = np.zeros((inst.d, inst.d))
    for start in range(0, k_max, chunk):
        block = np.cumsum(xs[draws[start:start + chunk]], axis=0)
        block += y
        eigs = _eigvalsh((block + block.swapaxes(-1, -2)) * 0.5)
        ks = np.arange(start + 1, start + 1 + block.shape[0])
        errors[start:start + block.shape[0]] = np.max(np.abs(eigs), axis=-1) / ks
        y = block[-1]

    errors.setflags(write=False)
    return BaselineTrace(seed=int(seed), indices=tuple(int(i) + 1 for i in draws), errors=errors)


def child_seed(root: int, trial: int) -> int:
    """Derived per-trial seed: deterministic, collision-resistant in (root, trial)."""
    ss = np.random.SeedSequence(entropy=int(root), spawn_key=(int(trial),))
    return int(ss.generate_state(1, np.uint64)[0])
