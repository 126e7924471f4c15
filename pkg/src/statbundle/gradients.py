"""Natural gradients, Fisher matrices, fiber gradients, maximum entropy.

The natural gradient of a scalar functional ``F`` at ``q`` is the
mixture-fiber representative of its differential under the Fisher
pairing: along any smooth curve,

    d/dt F(q(t)) = < Grad F(q(t)), star(q(t)) >_{q(t)} .

With the gradient contract ``dF(q)[delta] = sum(g * delta * m)`` for
mass-free ``delta`` (the ``L^2(m)`` representation), the natural gradient
is simply the centered ``g``:  ``Grad F(q) = g(q) - E_q[g(q)]``.

For fiber-dependent scalars on the full bundle, three more gradients
appear (two fiber gradients and a Euclidean block); together they
assemble the total derivative along bundle curves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from . import fd
from .calculus import FullBundleCurve, e_cov_deriv, m_cov_deriv, velocity
from .charts import entropy, exp_inv
from .errors import (
    ConditioningError,
    ConfigError,
    DegenerateError,
    DomainError,
    GradientContractError,
    InfeasibleError,
)
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    ArrayLike,
    Density,
    FiberElement,
    RandomVariable,
    center,
    covariance,
    expectation,
    pairing,
    values_on,
)

#: linear solves refuse matrices with condition number above this
CONDITION_LIMIT = 1e12
#: relative tolerance of the gradient-contract self check
CONTRACT_RTOL = 1e-5


@dataclass(frozen=True)
class Functional:
    """A scalar functional of the density with its Euclidean gradient.

    ``euclid_grad(q)`` returns ``g`` with ``dF(q)[delta] = sum(g*delta*m)``
    for every mass-free direction ``delta``.
    """

    value: Callable[[Density], float]
    euclid_grad: Callable[[Density], np.ndarray]


def _contract_check(F: Functional, q: Density, rng: np.random.Generator) -> None:
    g = np.asarray(F.euclid_grad(q), dtype=float)
    m = q.space.weights
    for _ in range(3):
        raw = rng.standard_normal(q.n)
        delta = raw - q.space.integral(raw)  # mass-free direction
        step = 1e-6 / max(1.0, float(np.max(np.abs(delta / q.values))))
        fd_val = (
            F.value(Density(q.space, q.values + step * delta))
            - F.value(Density(q.space, q.values - step * delta))
        ) / (2.0 * step)
        exact = float(np.sum(g * delta * m))
        scale = max(1.0, abs(exact))
        if abs(fd_val - exact) > CONTRACT_RTOL * scale:
            raise GradientContractError(
                f"euclidean gradient disagrees with the value map: "
                f"fd={fd_val!r} vs declared={exact!r}"
            )


def natural_gradient(
    F: Functional, q: Density, self_check: bool = False, rng: Optional[np.random.Generator] = None
) -> FiberElement:
    """Natural gradient ``Grad F(q) = g(q) - E_q[g(q)]`` in the mixture fiber."""
    if self_check:
        _contract_check(F, q, rng if rng is not None else np.random.default_rng(0))
    g = np.asarray(F.euclid_grad(q), dtype=float)
    return center(g, q, MIXTURE)


def entropy_functional() -> Functional:
    """Entropy ``H(q) = -sum(q log q m)`` with gradient ``-log q - 1``."""
    return Functional(
        value=entropy,
        euclid_grad=lambda q: -np.log(q.values) - 1.0,
    )


def grad_entropy(q: Density) -> FiberElement:
    """Closed form ``Grad H(q) = -log q - H(q)``, centered by construction."""
    vals = -np.log(q.values) - entropy(q)
    return FiberElement(q, RandomVariable(q.space, vals), MIXTURE)


# ---------------------------------------------------------------------------
# parametric models and the Fisher matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParametricModel:
    """A ``d``-parameter family of densities with score functions.

    ``scores(theta)`` returns the ``d`` arrays ``d/dtheta_j log q(theta)``,
    each centered under ``q(theta)``; when omitted, the scores are
    computed by central differences of ``log q``.
    """

    dim: int
    eval: Callable[[np.ndarray], Density]
    scores: Optional[Callable[[np.ndarray], Sequence[np.ndarray]]] = None

    def density(self, theta: ArrayLike) -> Density:
        return self.eval(np.asarray(theta, dtype=float))

    def score_arrays(self, theta: ArrayLike) -> List[np.ndarray]:
        theta = np.asarray(theta, dtype=float)
        if self.scores is not None:
            out = [np.asarray(s, dtype=float) for s in self.scores(theta)]
        else:
            out = []
            for j in range(self.dim):
                e_j = np.zeros(self.dim)
                e_j[j] = 1.0
                out.append(
                    fd.diff1(
                        lambda s: np.log(self.eval(theta + s * e_j).values), 0.0
                    )
                )
        q = self.density(theta)
        checked = []
        for s in out:
            mean = expectation(s, q)
            if abs(mean) > 1e-8:
                raise GradientContractError(
                    f"score not centered under the model density: residual {abs(mean):.3e}"
                )
            checked.append(s - mean)
        return checked


class RankDeficiencyWarning(UserWarning):
    """Fisher matrix numerically rank deficient (linearly dependent scores)."""


def fisher_matrix(model: ParametricModel, theta: ArrayLike) -> np.ndarray:
    """Fisher matrix ``I_ij = E_q[score_i score_j]``; symmetric PSD."""
    q = model.density(theta)
    scores = model.score_arrays(theta)
    d = model.dim
    info = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            info[i, j] = info[j, i] = expectation(scores[i] * scores[j], q)
    if np.linalg.matrix_rank(info, tol=1e-10 * max(1.0, float(np.max(np.abs(info))))) < d:
        warnings.warn("Fisher matrix is rank deficient", RankDeficiencyWarning)
    return info


def parametric_natural_gradient(
    model: ParametricModel, theta: ArrayLike, F: Functional
) -> np.ndarray:
    """Inverse Fisher matrix applied to the ordinary parameter gradient.

    The parameter gradient is assembled through the chain rule,
    ``dF/dtheta_i = <Grad F, score_i>_q``, then solved against the Fisher
    matrix with a symmetric factorization.
    """
    q = model.density(theta)
    scores = model.score_arrays(theta)
    grad = natural_gradient(F, q)
    theta_grad = np.array([expectation(grad.values * s, q) for s in scores])
    info = fisher_matrix(model, theta)
    cond = np.linalg.cond(info)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise ConditioningError(f"Fisher matrix condition number {cond:.3e} too large")
    try:
        cho = scipy.linalg.cho_factor(info)
        return scipy.linalg.cho_solve(cho, theta_grad)
    except scipy.linalg.LinAlgError as exc:  # PSD but numerically singular
        raise ConditioningError(f"Fisher factorization failed: {exc}") from exc


# ---------------------------------------------------------------------------
# fiber gradients of the three model scalars
# ---------------------------------------------------------------------------

def grad_quadratic(q: Density, w: FiberElement) -> Tuple[FiberElement, FiberElement]:
    """Gradients of the kinetic scalar ``(1/2) <w, w>_q``.

    Returns ``(Grad, Grad_e)``: the base gradient ``(w^2 - E_q[w^2]) / 2``
    in the mixture fiber and the fiber gradient ``w`` (an exponential
    element reinterpreted through the pairing).
    """
    w.require_kind(EXPONENTIAL)
    w.require_base(q)
    sq = w.values**2
    grad = 0.5 * (sq - expectation(sq, q))
    return (
        FiberElement(q, RandomVariable(q.space, grad), MIXTURE),
        w,
    )


def grad_cumulant_lagrangian(q: Density, w: FiberElement) -> Tuple[FiberElement, FiberElement]:
    """Gradients of ``(q, w) -> K_q(w)``.

    Returns ``(Grad, Grad_e)`` with ``Grad_e = e_q(w)/q - 1`` (the tilted
    density in mixture coordinates) and ``Grad = Grad_e - w``; both are
    mixture elements.
    """
    w.require_kind(EXPONENTIAL)
    w.require_base(q)
    tilt = exp_inv(q, w)
    fiber_grad = tilt.values / q.values - 1.0
    grad = fiber_grad - w.values
    return (
        FiberElement(q, RandomVariable(q.space, grad), MIXTURE),
        FiberElement(q, RandomVariable(q.space, fiber_grad), MIXTURE),
    )


def conjugate_cumulant_value(q: Density, eta: FiberElement) -> float:
    """``H(q, eta) = E_q[(1 + eta) log(1 + eta)]`` for ``eta > -1``."""
    eta.require_kind(MIXTURE)
    eta.require_base(q)
    one_plus = 1.0 + eta.values
    if np.any(one_plus <= 0.0):
        raise DomainError("conjugate cumulant needs eta > -1 pointwise")
    return expectation(one_plus * np.log(one_plus), q)


def grad_conjugate_cumulant(q: Density, eta: FiberElement) -> Tuple[FiberElement, FiberElement]:
    """Gradients of the conjugate cumulant ``H(q, eta)``.

    Returns ``(Grad, Grad_m)`` where ``Grad_m = log(1+eta) - E_q[log(1+eta)]``
    (exponential fiber, the inverse of the cumulant fiber gradient) and
    ``Grad = Grad_m - eta`` (mixture fiber).
    """
    eta.require_kind(MIXTURE)
    eta.require_base(q)
    one_plus = 1.0 + eta.values
    if np.any(one_plus <= 0.0):
        raise DomainError("conjugate cumulant needs eta > -1 pointwise")
    log_term = np.log(one_plus)
    centered = log_term - expectation(log_term, q)
    grad = centered - eta.values
    return (
        FiberElement(q, RandomVariable(q.space, grad), MIXTURE),
        FiberElement(q, RandomVariable(q.space, centered), EXPONENTIAL),
    )


# ---------------------------------------------------------------------------
# total derivative on the full bundle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FullBundleFunctional:
    """A scalar on the full bundle with its four gradient evaluators.

    ``grad`` is the natural (base) gradient with both fibers transported
    along, a mixture element; ``grad_m`` the gradient in the mixture
    fiber (an exponential element); ``grad_e`` the gradient in the
    exponential fiber (a mixture element); ``euclid`` the plain gradient
    in the Euclidean block.
    """

    value: Callable[[Density, FiberElement, FiberElement, np.ndarray], float]
    grad: Optional[Callable[..., FiberElement]] = None
    grad_m: Optional[Callable[..., FiberElement]] = None
    grad_e: Optional[Callable[..., FiberElement]] = None
    euclid: Optional[Callable[..., np.ndarray]] = None


def total_derivative(F: FullBundleFunctional, curve: FullBundleCurve, t: float) -> float:
    """Assemble ``d/dt F(q, eta, w, c)`` from the four gradient terms.

    The four contributions are ``<Grad F, star(q)>``, ``<D eta, Grad_m F>``,
    ``<Grad_e F, D w>`` (covariant derivatives of the matching kind), and
    the Euclidean block ``grad . cdot``.
    """
    q = curve.base.density(t)
    eta = curve.eta(t)
    w = curve.w(t)
    c = np.asarray(curve.c(t), dtype=float) if curve.c is not None else np.zeros(0)
    missing = [
        name
        for name, fn in (("grad", F.grad), ("grad_m", F.grad_m), ("grad_e", F.grad_e))
        if fn is None
    ]
    if curve.c is not None and F.euclid is None:
        missing.append("euclid")
    if missing:
        raise ConfigError(f"total derivative needs evaluators: {', '.join(missing)}")

    star = velocity(curve.base, t)
    d_eta = m_cov_deriv(curve.eta_curve(), t)
    d_w = e_cov_deriv(curve.w_curve(), t)

    total = pairing(F.grad(q, eta, w, c), star, q)
    total += pairing(d_eta, F.grad_m(q, eta, w, c), q)
    total += pairing(F.grad_e(q, eta, w, c), d_w, q)
    if curve.c is not None:
        total += float(np.dot(np.asarray(F.euclid(q, eta, w, c), dtype=float), curve.c_dot(t)))
    return total


# ---------------------------------------------------------------------------
# constrained maximum entropy
# ---------------------------------------------------------------------------

def constrained_max_entropy(
    f: ArrayLike, b: float, p: Density, tol: float = 1e-12, max_iter: int = 200
) -> Tuple[float, Density]:
    """Entropy-stationary density with ``E_q[f] = b`` in the tilted family of ``p``.

    The solution has the form ``q = exp(theta (f - b) - K) p``; the scalar
    ``theta`` is found by safeguarded Newton on ``theta -> E_q[f] - b``
    (monotone increasing, derivative ``Var_q(f) > 0``), with bracket
    expansion by doubling from ``[-1, 1]`` and bisection fallback.
    """
    fv = values_on(p.space, f)
    lo_f, hi_f = float(np.min(fv)), float(np.max(fv))
    if hi_f - lo_f < 1e-14:
        raise DegenerateError("constraint statistic is constant")
    if not (lo_f < b < hi_f):
        raise InfeasibleError(
            f"target {b!r} outside the attainable open range ({lo_f!r}, {hi_f!r})"
        )

    def tilted(theta: float) -> Density:
        return exp_inv(p, center(theta * (fv - b), p))

    def residual(theta: float) -> float:
        return expectation(fv, tilted(theta)) - b

    lo, hi = -1.0, 1.0
    while residual(lo) > 0.0:
        lo *= 2.0
        if lo < -1e8:
            raise InfeasibleError("bracket expansion failed on the left")
    while residual(hi) < 0.0:
        hi *= 2.0
        if hi > 1e8:
            raise InfeasibleError("bracket expansion failed on the right")

    theta = 0.5 * (lo + hi)
    for _ in range(max_iter):
        q = tilted(theta)
        res = expectation(fv, q) - b
        if abs(res) <= tol:
            return theta, q
        if res > 0.0:
            hi = theta
        else:
            lo = theta
        slope = covariance(fv, fv, q)
        step = theta - res / slope if slope > 0.0 else None
        theta = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    q = tilted(theta)
    if abs(expectation(fv, q) - b) > 10.0 * tol:
        raise InfeasibleError("maximum entropy solve did not converge")
    return theta, q
