import copy

import numpy as np
import pytest

import psdsparse as ps

# the alternating d=2 instance used as a golden reference throughout
CANONICAL_RAW = {
    "d": 2,
    "items": [
        {"lambda": 0.5, "A": [[2.0, 0.0], [0.0, 0.0]]},
        {"lambda": 0.5, "A": [[0.0, 0.0], [0.0, 2.0]]},
    ],
}


def canonical_raw() -> dict:
    return copy.deepcopy(CANONICAL_RAW)


@pytest.fixture
def canonical() -> ps.Instance:
    return ps.validate(canonical_raw())


def raw_payload(weights, mats) -> dict:
    mats = np.asarray(mats, dtype=float)
    return {
        "d": int(mats.shape[1]),
        "items": [
            {"lambda": float(w), "A": a.tolist()} for w, a in zip(weights, mats)
        ],
    }


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(seed)))
