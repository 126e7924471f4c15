"""Seeded random instances for property audits and tests."""

from __future__ import annotations

import numpy as np

from .measure import (
    EXPONENTIAL,
    Density,
    FiberElement,
    FiniteSpace,
    Kind,
    RandomVariable,
    center,
    renormalize,
)


def random_space(rng: np.random.Generator, n: int) -> FiniteSpace:
    """Random strictly positive weights, kept away from tiny masses."""
    w = rng.uniform(0.2, 1.0, size=n)
    return FiniteSpace(w / np.sum(w))


def random_density(rng: np.random.Generator, space: FiniteSpace, spread: float = 1.0) -> Density:
    """Log-uniform density with moderate dynamic range."""
    raw = np.exp(rng.uniform(-spread, spread, size=space.n))
    return renormalize(space, raw)


def random_rv(rng: np.random.Generator, space: FiniteSpace, scale: float = 1.0) -> RandomVariable:
    return RandomVariable(space, scale * rng.standard_normal(space.n))


def random_fiber(
    rng: np.random.Generator,
    p: Density,
    kind: Kind = EXPONENTIAL,
    scale: float = 1.0,
) -> FiberElement:
    """Centered fiber element; mixture elements are kept above -1."""
    raw = scale * rng.standard_normal(p.n)
    elem = center(raw, p, kind)
    if kind == "mixture" and np.any(elem.values <= -0.9):
        shrink = 0.9 * scale / (np.max(np.abs(elem.values)) + 1e-12)
        elem = center(raw * min(1.0, shrink), p, kind)
    return elem
