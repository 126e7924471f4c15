"""Velocities, covariant derivatives, and accelerations along density curves.

A smooth curve of densities has the chart-independent velocity (Fisher
score) ``star(q) = qdot / q``.  Fiber curves differentiate covariantly:

* exponential: ``D w = wdot - E_q[wdot]``
* mixture:     ``D eta = star(q) * eta + etadot``
* Riemannian:  the arithmetic mean of the two (metric compatible)

Accelerations are covariant derivatives of the velocity: the exponential
one vanishes exactly on one-parameter exponential families, the mixture
one (``qddot / q``) on straight density segments.

Curves carry optional analytic derivatives; otherwise central finite
differences are used (step 1e-5, second derivatives with a 3-point
stencil at step 1e-4, one-sided near the domain boundary).  Assembled
results are re-centered under the current density, but a pre-centering
residual above 1e-6 raises :class:`~statbundle.errors.CenteringDriftError`
instead of being hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import fd
from .errors import CenteringDriftError, DomainError, ValidationError
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    Density,
    FiberElement,
    Kind,
    RandomVariable,
    expectation,
)

#: re-centering is silent below this residual, diagnostic error above
CENTER_DRIFT_TOL = 1e-6
#: fiber elements along curves may drift this much before validation fails
CURVE_CENTER_TOL = 1e-8


def recenter_checked(
    raw: np.ndarray, q: Density, kind: Kind, drift_tol: float = CENTER_DRIFT_TOL
) -> FiberElement:
    """Center ``raw`` under ``q``; refuse if the pre-centering drift is large."""
    mean = expectation(raw, q)
    if abs(mean) > drift_tol:
        raise CenteringDriftError(
            f"pre-centering residual {abs(mean):.3e} exceeds {drift_tol:g}"
        )
    return FiberElement(q, RandomVariable(q.space, raw - mean), kind)


@dataclass(frozen=True)
class SmoothCurve:
    """A curve of densities on a closed interval, with optional derivatives.

    ``eval`` must return a valid :class:`Density` for every ``t`` in
    ``domain``.  When ``deriv`` is given it must conserve mass
    (``sum(qdot * m) = 0`` within 1e-10); finite differences are used
    otherwise.
    """

    eval: Callable[[float], Density]
    deriv: Optional[Callable[[float], np.ndarray]] = None
    deriv2: Optional[Callable[[float], np.ndarray]] = None
    domain: Tuple[float, float] = (0.0, 1.0)

    def _require_in_domain(self, t: float) -> None:
        t0, t1 = self.domain
        if not (t0 <= t <= t1):
            raise DomainError(f"t={t!r} outside curve domain [{t0}, {t1}]")

    def density(self, t: float) -> Density:
        self._require_in_domain(t)
        return self.eval(t)

    def qdot(self, t: float) -> np.ndarray:
        self._require_in_domain(t)
        if self.deriv is not None:
            dot = np.asarray(self.deriv(t), dtype=float)
            space = self.eval(t).space
            if abs(space.integral(dot)) > 1e-10:
                raise ValidationError("analytic qdot must conserve mass")
            return dot
        offs = fd.interior_offsets(t, self.domain, fd.H1_DEFAULT, 1)
        return fd.derivative(
            lambda s: self.eval(s).values, t, order=1, h=fd.H1_DEFAULT, offsets=offs
        )

    def qddot(self, t: float) -> np.ndarray:
        self._require_in_domain(t)
        if self.deriv2 is not None:
            return np.asarray(self.deriv2(t), dtype=float)
        if self.deriv is not None:
            offs = fd.interior_offsets(t, self.domain, fd.H1_DEFAULT, 1)
            return fd.derivative(
                lambda s: np.asarray(self.deriv(s), dtype=float),
                t,
                order=1,
                h=fd.H1_DEFAULT,
                offsets=offs,
            )
        offs = fd.interior_offsets(t, self.domain, fd.H2_DEFAULT, 1)
        return fd.derivative(
            lambda s: self.eval(s).values, t, order=2, h=fd.H2_DEFAULT, offsets=offs
        )

    @classmethod
    def constant(cls, q: Density, domain: Tuple[float, float] = (0.0, 1.0)) -> "SmoothCurve":
        zero = np.zeros(q.n)
        return cls(eval=lambda t: q, deriv=lambda t: zero, deriv2=lambda t: zero, domain=domain)


@dataclass(frozen=True)
class BundleCurve:
    """A fiber curve over a base curve: ``t -> (q(t), w(t))``.

    ``fiber(t)`` must be centered at ``base.eval(t)`` (tolerance 1e-8).
    ``fiber_deriv`` returns the raw time derivative of the fiber values;
    central differences of the fiber values are the fallback.
    """

    base: SmoothCurve
    fiber: Callable[[float], FiberElement]
    fiber_deriv: Optional[Callable[[float], np.ndarray]] = None

    def fiber_at(self, t: float) -> FiberElement:
        elem = self.fiber(t)
        q = self.base.density(t)
        mean = expectation(elem.values, q)
        if abs(mean) > CURVE_CENTER_TOL:
            raise ValidationError(
                f"fiber not centered along the curve: residual {abs(mean):.3e}"
            )
        return elem

    def fiber_dot(self, t: float) -> np.ndarray:
        if self.fiber_deriv is not None:
            return np.asarray(self.fiber_deriv(t), dtype=float)
        offs = fd.interior_offsets(t, self.base.domain, fd.H1_DEFAULT, 1)
        return fd.derivative(
            lambda s: self.fiber(s).values, t, order=1, h=fd.H1_DEFAULT, offsets=offs
        )


@dataclass(frozen=True)
class FullBundleCurve:
    """A curve on the full bundle ``t -> (q(t), eta(t), w(t), c(t))``.

    ``eta`` is the mixture fiber, ``w`` the exponential fiber, ``c`` an
    optional Euclidean block.  Derivative callbacks are optional, as in
    :class:`BundleCurve`.
    """

    base: SmoothCurve
    eta: Callable[[float], FiberElement]
    w: Callable[[float], FiberElement]
    c: Optional[Callable[[float], np.ndarray]] = None
    eta_deriv: Optional[Callable[[float], np.ndarray]] = None
    w_deriv: Optional[Callable[[float], np.ndarray]] = None
    c_deriv: Optional[Callable[[float], np.ndarray]] = None

    def eta_curve(self) -> BundleCurve:
        return BundleCurve(self.base, self.eta, self.eta_deriv)

    def w_curve(self) -> BundleCurve:
        return BundleCurve(self.base, self.w, self.w_deriv)

    def c_dot(self, t: float) -> np.ndarray:
        if self.c is None:
            return np.zeros(0)
        if self.c_deriv is not None:
            return np.asarray(self.c_deriv(t), dtype=float)
        offs = fd.interior_offsets(t, self.base.domain, fd.H1_DEFAULT, 1)
        return fd.derivative(
            lambda s: np.asarray(self.c(s), dtype=float),
            t,
            order=1,
            h=fd.H1_DEFAULT,
            offsets=offs,
        )


# ---------------------------------------------------------------------------
# velocity and covariant derivatives
# ---------------------------------------------------------------------------

def velocity(curve: SmoothCurve, t: float) -> FiberElement:
    """Fisher score ``qdot / q``, the same in every geometry."""
    q = curve.density(t)
    raw = curve.qdot(t) / q.values
    return recenter_checked(raw, q, EXPONENTIAL)


def e_cov_deriv(bc: BundleCurve, t: float) -> FiberElement:
    """Exponential covariant derivative ``wdot - E_q[wdot]``."""
    # mean subtraction is the definition here, not a drift correction
    q = bc.base.density(t)
    raw = bc.fiber_dot(t)
    return FiberElement(
        q, RandomVariable(q.space, raw - expectation(raw, q)), EXPONENTIAL
    )


def m_cov_deriv(bc: BundleCurve, t: float) -> FiberElement:
    """Mixture covariant derivative ``star(q) * eta + etadot``."""
    q = bc.base.density(t)
    star = velocity(bc.base, t).values
    raw = star * bc.fiber_at(t).values + bc.fiber_dot(t)
    return recenter_checked(raw, q, MIXTURE)


def riemannian_deriv(bc: BundleCurve, t: float) -> FiberElement:
    """Metric-compatible derivative: mean of the two covariant derivatives."""
    e = e_cov_deriv(bc, t)
    m = m_cov_deriv(bc, t)
    q = bc.base.density(t)
    raw = 0.5 * (e.values + m.values)
    return recenter_checked(raw, q, bc.fiber(t).kind)


def e_acceleration(curve: SmoothCurve, t: float) -> FiberElement:
    """Exponential acceleration ``qddot/q - (star^2 - E_q[star^2])``."""
    # E_q[qddot/q] vanishes by mass conservation, so centering the raw
    # expression reproduces the stated formula exactly
    q = curve.density(t)
    star = velocity(curve, t).values
    raw = curve.qddot(t) / q.values - star**2
    return FiberElement(
        q, RandomVariable(q.space, raw - expectation(raw, q)), EXPONENTIAL
    )


def m_acceleration(curve: SmoothCurve, t: float) -> FiberElement:
    """Mixture acceleration ``qddot / q`` (mass conservation centers it)."""
    q = curve.density(t)
    raw = curve.qddot(t) / q.values
    return recenter_checked(raw, q, MIXTURE)
