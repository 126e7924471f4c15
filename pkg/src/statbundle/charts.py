"""Chart maps on the manifold of positive densities, cumulants, divergences.

Three affine geometries share the same base set (strictly positive
densities on a finite space):

* flat:        ``s_p(q) = q - p``              inverse ``u + p``
* mixture:     ``s_p(q) = q/p - 1``            inverse ``(1 + u) p``
* exponential: ``s_p(q) = log(q/p) - E_p[.]``  inverse ``exp(u - K_p(u)) p``

plus the stereographic chart of the unit sphere of ``L^2(m)`` and the
square-root embedding that maps it onto the densities.

The cumulant ``K_p(u) = log E_p[exp u]`` is evaluated with max-shift
stabilization; its first three directional derivatives are the mean,
covariance, and third central moment under the tilted density.
"""

from __future__ import annotations

from typing import Literal, Tuple, Union

import numpy as np

from .errors import DomainError, PoleError, ValidationError
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    ArrayLike,
    Density,
    FiberElement,
    FiniteSpace,
    RandomVariable,
    center,
    covariance,
    expectation,
    third_covariance,
    values_on,
)

GeometryKind = Literal["flat", "mixture", "exponential"]

GEOMETRY_KINDS: tuple[GeometryKind, ...] = ("flat", "mixture", "exponential")

#: stereographic charts blow up where ``1 + <alpha, beta> = 0``
POLE_TOL = 1e-12
#: unit-norm tolerance for sphere chart inputs
UNIT_NORM_TOL = 1e-10
#: mixture coordinates this close to the -1 boundary are rejected
MIX_BOUNDARY_TOL = 1e-12


# ---------------------------------------------------------------------------
# mixture / exponential / flat charts
# ---------------------------------------------------------------------------

def mix_chart(p: Density, q: Density) -> FiberElement:
    """Mixture coordinate of ``q`` at ``p``: ``q/p - 1``."""
    p.space.require_same(q.space)
    return FiberElement(p, RandomVariable(p.space, q.values / p.values - 1.0), MIXTURE)


def mix_inv(p: Density, eta: FiberElement) -> Density:
    """Inverse mixture chart: ``(1 + eta) p``.

    Requires ``eta > -1`` pointwise, with a rounding margin: coordinates
    within ``MIX_BOUNDARY_TOL`` of the boundary are rejected.
    """
    eta.require_kind(MIXTURE)
    eta.require_base(p)
    if np.any(1.0 + eta.values <= MIX_BOUNDARY_TOL):
        raise DomainError("mixture coordinate must satisfy eta > -1 pointwise")
    return Density(p.space, (1.0 + eta.values) * p.values)


def exp_chart(p: Density, q: Density) -> FiberElement:
    """Exponential coordinate of ``q`` at ``p``: centered log-ratio."""
    p.space.require_same(q.space)
    log_ratio = np.log(q.values) - np.log(p.values)
    return center(log_ratio, p, EXPONENTIAL)


def exp_inv(p: Density, u: FiberElement) -> Density:
    """Inverse exponential chart: ``exp(u - K_p(u)) p``."""
    u.require_kind(EXPONENTIAL)
    u.require_base(p)
    k = cumulant(p, u)
    return Density(p.space, np.exp(u.values - k) * p.values)


def flat_chart(p: Density, q: Density) -> RandomVariable:
    """Flat coordinate ``q - p`` (integrates to zero against ``m``)."""
    p.space.require_same(q.space)
    return RandomVariable(p.space, q.values - p.values)


def flat_inv(p: Density, u: ArrayLike) -> Density:
    """Inverse flat chart ``u + p``; ``u`` must be mass-free and keep positivity."""
    uv = values_on(p.space, u)
    if abs(p.space.integral(uv)) > 1e-10:
        raise DomainError("flat coordinate must integrate to 0 against the weights")
    vals = uv + p.values
    if np.any(vals <= 0.0):
        raise DomainError("flat coordinate leaves the positive densities")
    return Density(p.space, vals)


# ---------------------------------------------------------------------------
# moment / cumulant functionals and derivatives
# ---------------------------------------------------------------------------

def moment(p: Density, u: FiberElement) -> float:
    """Moment functional ``M_p(u) = E_p[exp u] >= 1`` for centered ``u``."""
    u.require_base(p)
    return float(np.exp(cumulant(p, u)))


def cumulant(p: Density, u: FiberElement) -> float:
    """Cumulant ``K_p(u) = log E_p[exp u]``, max-shifted for stability."""
    u.require_base(p)
    return _cumulant_raw(p, u.values)


def _cumulant_raw(p: Density, u_values: np.ndarray) -> float:
    c = float(np.max(u_values))
    s = float(np.sum(np.exp(u_values - c) * p.values * p.space.weights))
    return c + float(np.log(s))


def _tilt(p: Density, u_values: np.ndarray) -> Density:
    k = _cumulant_raw(p, u_values)
    return Density(p.space, np.exp(u_values - k) * p.values)


def cumulant_d1(p: Density, u: FiberElement, h: FiberElement) -> float:
    """First derivative ``DK_p(u)[h] = E_q[h]`` with ``q`` the tilted density."""
    u.require_base(p)
    h.require_base(p)
    return expectation(h.values, _tilt(p, u.values))


def cumulant_d2(p: Density, u: FiberElement, h1: FiberElement, h2: FiberElement) -> float:
    """Second derivative: covariance of the transported directions under the tilt.

    Covariance is shift-invariant, so transporting (re-centering) the
    directions and taking the raw covariance agree.
    """
    u.require_base(p)
    h1.require_base(p)
    h2.require_base(p)
    return covariance(h1.values, h2.values, _tilt(p, u.values))


def cumulant_d3(
    p: Density,
    u: FiberElement,
    h1: FiberElement,
    h2: FiberElement,
    h3: FiberElement,
) -> float:
    """Third derivative: third central cross-moment under the tilted density."""
    u.require_base(p)
    for h in (h1, h2, h3):
        h.require_base(p)
    return third_covariance(h1.values, h2.values, h3.values, _tilt(p, u.values))


# ---------------------------------------------------------------------------
# divergences
# ---------------------------------------------------------------------------

def kl(p: Density, q: Density) -> float:
    """Kullback-Leibler divergence ``KL(p || q) = sum p log(p/q) m``."""
    p.space.require_same(q.space)
    return float(
        np.sum(p.values * (np.log(p.values) - np.log(q.values)) * p.space.weights)
    )


def entropy(q: Density) -> float:
    """Entropy ``H(q) = -sum q log q m`` (zero at the unit density)."""
    return -float(np.sum(q.values * np.log(q.values) * q.space.weights))


def kl_pythagoras(p: Density, q: Density, r: Density) -> Tuple[float, float]:
    """Both sides of ``KL(r||q) + <u, v>_p = KL(r||p) + KL(p||q)``.

    Here ``u`` is the exponential coordinate of ``q`` at ``p`` and ``v``
    the mixture coordinate of ``r`` at ``p``.  The two sides agree up to
    rounding; callers assert the gap.
    """
    p.space.require_same(q.space)
    p.space.require_same(r.space)
    u = exp_chart(p, q)
    v = mix_chart(p, r)
    inner = expectation(u.values * v.values, p)
    lhs = kl(r, q) + inner
    rhs = kl(r, p) + kl(p, q)
    return lhs, rhs


# ---------------------------------------------------------------------------
# displacement expressed in a chart
# ---------------------------------------------------------------------------

def displacement_expr(
    kind: GeometryKind,
    sigma: Density,
    u: Union[FiberElement, ArrayLike],
    v: Union[FiberElement, ArrayLike],
):
    """Displacement between the points with coordinates ``u``, ``v`` at ``sigma``.

    Equals the chart of ``S^{-1}_sigma(v)`` taken at ``S^{-1}_sigma(u)``:

    * mixture:      ``(1 + u)^{-1} (v - u)``, based at ``(1 + u) sigma``
    * exponential:  ``(v - u) - E_{tilt}[v - u]``, based at the tilt of ``u``
    * flat:         ``v - u`` (plain difference of mass-free coordinates)
    """
    if kind == "flat":
        uv = values_on(sigma.space, u)
        vv = values_on(sigma.space, v)
        return RandomVariable(sigma.space, vv - uv)
    if kind == "mixture":
        if not isinstance(u, FiberElement) or not isinstance(v, FiberElement):
            raise ValidationError("mixture displacement needs fiber elements at sigma")
        u.require_base(sigma)
        v.require_base(sigma)
        rho = mix_inv(sigma, u)  # enforces the boundary margin
        vals = (v.values - u.values) / (1.0 + u.values)
        return FiberElement(rho, RandomVariable(sigma.space, vals), MIXTURE)
    if kind == "exponential":
        if not isinstance(u, FiberElement) or not isinstance(v, FiberElement):
            raise ValidationError("exponential displacement needs fiber elements at sigma")
        u.require_base(sigma)
        v.require_base(sigma)
        rho = exp_inv(sigma, u)
        return center(v.values - u.values, rho, EXPONENTIAL)
    raise ValidationError(f"unknown geometry kind {kind!r}")


# ---------------------------------------------------------------------------
# sphere chart and square-root embedding
# ---------------------------------------------------------------------------

def _inner(space: FiniteSpace, f: np.ndarray, g: np.ndarray) -> float:
    return float(np.sum(f * g * space.weights))


def _require_unit(space: FiniteSpace, f: np.ndarray, name: str) -> None:
    nrm = np.sqrt(_inner(space, f, f))
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise ValidationError(f"{name} must have unit L2(m) norm; got {nrm!r}")


def sphere_chart(alpha: RandomVariable, beta: RandomVariable) -> RandomVariable:
    """Stereographic projection of unit ``beta`` from the pole ``-alpha``."""
    space = alpha.space
    space.require_same(beta.space)
    _require_unit(space, alpha.values, "alpha")
    _require_unit(space, beta.values, "beta")
    ab = _inner(space, alpha.values, beta.values)
    if abs(1.0 + ab) <= POLE_TOL:
        raise PoleError("beta is at the pole opposite alpha")
    u = 2.0 * (beta.values - ab * alpha.values) / (1.0 + ab)
    return RandomVariable(space, u)


def sphere_inv(alpha: RandomVariable, u: RandomVariable) -> RandomVariable:
    """Inverse stereographic chart; needs ``<u, alpha>_m = 0``."""
    space = alpha.space
    space.require_same(u.space)
    _require_unit(space, alpha.values, "alpha")
    if abs(_inner(space, u.values, alpha.values)) > UNIT_NORM_TOL:
        raise ValidationError("chart coordinate must be orthogonal to alpha")
    half_sq = _inner(space, u.values / 2.0, u.values / 2.0)
    beta = (u.values + (1.0 - half_sq) * alpha.values) / (1.0 + half_sq)
    return RandomVariable(space, beta)


def sqrt_chart(p: Density, q: Density) -> RandomVariable:
    """Square-root embedding chart: stereographic chart of ``sqrt(q)`` at ``sqrt(p)``."""
    p.space.require_same(q.space)
    return sphere_chart(
        RandomVariable(p.space, np.sqrt(p.values)),
        RandomVariable(p.space, np.sqrt(q.values)),
    )


def sqrt_inv(p: Density, u: RandomVariable) -> Density:
    """Inverse of :func:`sqrt_chart`: square of the inverse sphere chart.

    The result is automatically normalized (the sphere point is unit);
    positivity can still fail if the sphere point crosses zero, in which
    case the density constructor rejects.
    """
    root = sphere_inv(RandomVariable(p.space, np.sqrt(p.values)), u)
    return Density(p.space, root.values**2)
