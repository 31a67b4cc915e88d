"""Shared helpers for the test suite."""

import numpy as np

from bitprep import TargetState, decompose

# two-component state with a quarter-turn phase split; quantizes exactly at m=2
WORKED_AMPLITUDES = np.array([-2j, -3.0]) / np.sqrt(13.0)


def worked_target() -> TargetState:
    return TargetState.from_amplitudes(WORKED_AMPLITUDES)


def worked_plan():
    return decompose(worked_target(), 2)


def random_target(rng: np.random.Generator, n: int) -> TargetState:
    mags = rng.random(1 << n)
    mags /= np.linalg.norm(mags)
    turns = rng.random(1 << n)
    return TargetState.from_polar(mags, turns)


def random_plan(rng: np.random.Generator, n: int, m: int):
    return decompose(random_target(rng, n), m)
