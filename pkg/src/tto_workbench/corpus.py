"""Random test objects shared by the acceptance suite and the tests."""

from __future__ import annotations

import numpy as np

from .disk import BlaschkeProduct, MobiusTransform

SEED = 20100801


def random_point(rng: np.random.Generator, radius: float = 0.7) -> complex:
    """Uniform in the disk of the given radius."""
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


def random_unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def random_blaschke(rng: np.random.Generator, n: int, radius: float = 0.7,
                    zero_at_origin: bool = False) -> BlaschkeProduct:
    zeros = [random_point(rng, radius) for _ in range(n)]
    if zero_at_origin:
        zeros[0] = 0j
    return BlaschkeProduct(random_unimodular(rng), tuple(zeros))


def random_mobius(rng: np.random.Generator, radius: float = 0.5) -> MobiusTransform:
    return MobiusTransform(random_unimodular(rng), random_point(rng, radius))


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)
