"""Finite measure spaces, positive densities, and centered random variables.

The ground layer for everything else: a finite sample space carries
strictly positive reference weights ``m`` summing to one.  Densities are
strictly positive arrays integrating to one against ``m``.  Fiber
elements are random variables centered under a base density, tagged with
the geometry (exponential or mixture) whose parallel transport applies
to them.

Conventions
-----------
* Integrals are plain weighted sums, ``sum(f * p * m)``, evaluated in
  64-bit floats in natural order; desk-scale ``n`` does not need
  compensated summation.
* Constructors validate and reject.  Nothing is renormalized silently;
  integrators call :func:`renormalize` explicitly so drift stays visible.
* Arrays are locked after construction, so all operations here are pure
  functions and safe under unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .errors import (
    BaseMismatch,
    DimensionMismatch,
    DomainError,
    ValidationError,
)

Kind = Literal["exponential", "mixture"]

EXPONENTIAL: Kind = "exponential"
MIXTURE: Kind = "mixture"

#: tolerance on the reference weights summing to one
WEIGHT_SUM_TOL = 1e-12
#: tolerance on a density integrating to one against the weights
DENSITY_SUM_TOL = 1e-10
#: strict positivity floor for weights and density values
POSITIVITY_FLOOR = 1e-300
#: tolerance on the centering of a fiber element under its base
CENTERING_TOL = 1e-10


def _as_float_array(values, n: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"expected a 1-d array, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"expected length {n}, got {arr.size}")
    return arr


def _lock(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FiniteSpace:
    """A finite sample space with reference probability weights ``m``.

    Attributes
    ----------
    weights : np.ndarray
        Strictly positive weights ``m_i`` with ``sum(m) == 1`` up to
        ``WEIGHT_SUM_TOL``.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = _as_float_array(self.weights)
        if w.size == 0:
            raise ValidationError("sample space must have at least one point")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if np.any(w <= POSITIVITY_FLOOR):
            raise DomainError("weights must be strictly positive")
        total = float(np.sum(w))
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(
                f"weights must sum to 1 within {WEIGHT_SUM_TOL:g}; got {total!r}"
            )
        object.__setattr__(self, "weights", _lock(w))

    @property
    def n(self) -> int:
        return self.weights.size

    @classmethod
    def uniform(cls, n: int) -> "FiniteSpace":
        """Uniform weights on ``n`` points."""
        return cls(np.full(n, 1.0 / n))

    def integral(self, values) -> float:
        """Integral against the reference weights, ``sum(f * m)``."""
        return float(np.sum(_as_float_array(values, self.n) * self.weights))

    def same_as(self, other: "FiniteSpace") -> bool:
        return self is other or (
            self.n == other.n and np.array_equal(self.weights, other.weights)
        )

    def require_same(self, other: "FiniteSpace") -> None:
        if not self.same_as(other):
            raise DimensionMismatch("operands live on different sample spaces")

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"FiniteSpace(n={self.n})"


@dataclass(frozen=True)
class Density:
    """A strictly positive density ``p`` with ``sum(p * m) == 1``."""

    space: FiniteSpace
    values: np.ndarray

    def __post_init__(self):
        v = _as_float_array(self.values, self.space.n)
        if not np.all(np.isfinite(v)):
            raise ValidationError("density values must be finite")
        if np.any(v <= POSITIVITY_FLOOR):
            raise DomainError("density values must be strictly positive")
        total = float(np.sum(v * self.space.weights))
        if abs(total - 1.0) > DENSITY_SUM_TOL:
            raise ValidationError(
                f"density must integrate to 1 within {DENSITY_SUM_TOL:g}; got {total!r}"
            )
        object.__setattr__(self, "values", _lock(v))

    @property
    def n(self) -> int:
        return self.space.n

    def normalization_residual(self) -> float:
        """|sum(p*m) - 1|, zero up to rounding by construction."""
        return abs(float(np.sum(self.values * self.space.weights)) - 1.0)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Density(n={self.n}, values={np.array2string(self.values, precision=4)})"


@dataclass(frozen=True)
class RandomVariable:
    """A real random variable on a finite space (finite values only)."""

    space: FiniteSpace
    values: np.ndarray

    def __post_init__(self):
        v = _as_float_array(self.values, self.space.n)
        if not np.all(np.isfinite(v)):
            raise ValidationError("random variable values must be finite")
        object.__setattr__(self, "values", _lock(v))

    @property
    def n(self) -> int:
        return self.space.n


ArrayLike = Union[np.ndarray, list, tuple, RandomVariable]


def values_on(space: FiniteSpace, f: ArrayLike) -> np.ndarray:
    """Coerce ``f`` (RandomVariable or array-like) to an array on ``space``."""
    if isinstance(f, RandomVariable):
        space.require_same(f.space)
        return f.values
    return _as_float_array(f, space.n)


@dataclass(frozen=True)
class FiberElement:
    """A random variable centered under a base density.

    ``kind`` records which parallel transport moves the element:
    exponential elements transport by re-centering, mixture elements by
    density-ratio multiplication.  Mixture elements additionally need
    ``rv > -1`` pointwise when used as chart coordinates; that bound is
    enforced at the chart, not here.
    """

    base: Density
    rv: RandomVariable
    kind: Kind
    tol: float = field(default=CENTERING_TOL, repr=False, compare=False)

    def __post_init__(self):
        self.base.space.require_same(self.rv.space)
        if self.kind not in (EXPONENTIAL, MIXTURE):
            raise ValidationError(f"unknown fiber kind {self.kind!r}")
        mean = expectation(self.rv, self.base)
        if abs(mean) > self.tol:
            raise ValidationError(
                f"fiber element not centered under base: |mean| = {abs(mean):.3e} > {self.tol:g}"
            )

    @property
    def space(self) -> FiniteSpace:
        return self.base.space

    @property
    def values(self) -> np.ndarray:
        return self.rv.values

    def with_values(self, values, kind: Kind | None = None) -> "FiberElement":
        """Same base, new values (re-validated)."""
        return FiberElement(
            self.base,
            RandomVariable(self.space, values),
            self.kind if kind is None else kind,
            tol=self.tol,
        )

    def require_kind(self, kind: Kind) -> None:
        if self.kind != kind:
            raise ValidationError(f"expected a {kind} fiber element, got {self.kind}")

    def require_base(self, p: Density) -> None:
        if not (self.base is p or np.array_equal(self.base.values, p.values)):
            raise BaseMismatch("fiber element based at a different density")


def renormalize(space: FiniteSpace, values) -> Density:
    """Scale positive values so they integrate to one against ``m``.

    Integrator helper; library constructors never call it on their own.
    """
    v = _as_float_array(values, space.n)
    if np.any(v <= 0.0) or not np.all(np.isfinite(v)):
        raise DomainError("renormalize needs strictly positive finite values")
    total = float(np.sum(v * space.weights))
    return Density(space, v / total)


def expectation(f: ArrayLike, p: Density) -> float:
    """E_p[f] = sum(f * p * m)."""
    fv = values_on(p.space, f)
    return float(np.sum(fv * p.values * p.space.weights))


def center(f: ArrayLike, p: Density, kind: Kind = EXPONENTIAL) -> FiberElement:
    """Subtract the ``p``-mean: ``f - E_p[f]``, returned as a fiber element."""
    fv = values_on(p.space, f)
    centered = fv - expectation(fv, p)
    return FiberElement(p, RandomVariable(p.space, centered), kind)


def pairing(eta: FiberElement, w: FiberElement, p: Density | None = None) -> float:
    """Duality pairing ``<eta, w>_p = E_p[eta * w]`` of a mixture and an exponential element."""
    eta.require_kind(MIXTURE)
    w.require_kind(EXPONENTIAL)
    base = eta.base if p is None else p
    eta.require_base(base)
    w.require_base(base)
    return float(np.sum(eta.values * w.values * base.values * base.space.weights))


def covariance(f: ArrayLike, g: ArrayLike, p: Density) -> float:
    """Cov_p(f, g) with explicit centering of both arguments."""
    fv = values_on(p.space, f)
    gv = values_on(p.space, g)
    fc = fv - expectation(fv, p)
    gc = gv - expectation(gv, p)
    return expectation(fc * gc, p)


def third_covariance(f: ArrayLike, g: ArrayLike, h: ArrayLike, p: Density) -> float:
    """Third central cross-moment E_p[(f - Ef)(g - Eg)(h - Eh)]."""
    fv = values_on(p.space, f)
    gv = values_on(p.space, g)
    hv = values_on(p.space, h)
    fc = fv - expectation(fv, p)
    gc = gv - expectation(gv, p)
    hc = hv - expectation(hv, p)
    return expectation(fc * gc * hc, p)
