"""Young functions, Luxemburg norms, and sub-exponential tail machinery.

The Young pairs implemented (``phi`` denotes the derivative of ``Phi``):

====================  ===========================================  =====================
kind                  Phi(x), x >= 0                               conjugate
====================  ===========================================  =====================
``power`` (alpha>1)   ``x**alpha / alpha``                         ``power`` with beta
``exp2``              ``exp(x) - 1 - x``                           ``exp2_conj``
``exp2_conj``         ``(1+y) log(1+y) - y``                       ``exp2``
``cosh2``             ``cosh(x) - 1``                              ``cosh2_conj``
``cosh2_conj``        ``y asinh(y) - sqrt(1+y^2) + 1``             ``cosh2``
``gauss2``            ``exp(x^2 / 2) - 1``                         ``gauss2_conj``
``gauss2_conj``       numeric Legendre transform of ``gauss2``     ``gauss2``
====================  ===========================================  =====================

All functions extend to the real line by symmetry, ``Phi(x) = Phi(|x|)``.
The Luxemburg norm is the unique scale ``rho`` with
``sum(Phi(|f| / rho) mu) = 1`` (zero for ``f = 0``), found by bisection.
With the ``x**alpha / alpha`` normalization the power norm equals
``alpha**(-1/alpha)`` times the Lebesgue norm, the value obtained by
solving the defining integral directly.

On a finite space every random variable lies in every Orlicz space, the
class of bounded approximable elements is the whole space, and norm
convergence is equivalent to convergence of the defining integrals.
The pathologies of infinite-dimensional exponential Orlicz spaces
(strictly smaller Orlicz classes, failure of dominated convergence,
non-reflexivity) cannot arise here; this module therefore audits
norms, inequalities, and tail bounds rather than topology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import RegularityError, ValidationError
from .measure import ArrayLike, FiniteSpace, values_on

#: bisection settings for the Luxemburg norm
LUX_RTOL = 1e-12
LUX_MAX_ITER = 200

#: Newton settings for the numeric gauss2 conjugate
GAUSS_NEWTON_TOL = 1e-12
GAUSS_NEWTON_MAX_ITER = 80


def _gauss_phi(x: np.ndarray) -> np.ndarray:
    return x * np.exp(0.5 * x**2)


def _gauss_phi_inv(y: np.ndarray) -> np.ndarray:
    """Invert ``x exp(x^2/2) = y`` for ``y >= 0`` (Newton, bisection fallback)."""
    y = np.asarray(y, dtype=float)
    x = np.minimum(y, np.sqrt(2.0 * np.log1p(y)))
    for _ in range(GAUSS_NEWTON_MAX_ITER):
        fx = _gauss_phi(x) - y
        if np.all(np.abs(fx) <= GAUSS_NEWTON_TOL * np.maximum(1.0, y)):
            return x
        deriv = (1.0 + x**2) * np.exp(0.5 * x**2)
        step = fx / deriv
        x = np.maximum(x - step, 0.0)
    # bisection fallback, elementwise, for any stagnated entries
    out = np.empty_like(x)
    for idx, target in np.ndenumerate(y):
        lo, hi = 0.0, max(1.0, float(x[idx]))
        while _gauss_phi(np.array(hi)) < target:
            hi *= 2.0
            if hi > 1e9:
                raise RegularityError("gauss conjugate inversion diverged")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if _gauss_phi(np.array(mid)) < target:
                lo = mid
            else:
                hi = mid
        out[idx] = 0.5 * (lo + hi)
    return out


@dataclass(frozen=True)
class YoungPair:
    """A Young function with its derivative and a link to its conjugate."""

    kind: str
    phi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    phi_prime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    alpha: Optional[float] = None
    numeric_conjugate: bool = False

    @property
    def conjugate(self) -> "YoungPair":
        return conjugate_of(self)

    def __call__(self, x) -> np.ndarray:
        return young_eval(self, x)


def _power_pair(alpha: float) -> YoungPair:
    if alpha <= 1.0:
        raise ValidationError("power Young functions need alpha > 1")
    return YoungPair(
        kind="power",
        phi=lambda x: np.abs(x) ** alpha / alpha,
        phi_prime=lambda x: np.asarray(x, dtype=float) ** (alpha - 1.0),
        alpha=alpha,
    )


_FIXED_PAIRS = {
    "exp2": YoungPair(
        kind="exp2",
        phi=lambda x: np.expm1(np.abs(x)) - np.abs(x),
        phi_prime=lambda x: np.expm1(x),
    ),
    "exp2_conj": YoungPair(
        kind="exp2_conj",
        phi=lambda x: (1.0 + np.abs(x)) * np.log1p(np.abs(x)) - np.abs(x),
        phi_prime=lambda x: np.log1p(x),
    ),
    "cosh2": YoungPair(
        kind="cosh2",
        phi=lambda x: np.cosh(x) - 1.0,
        phi_prime=lambda x: np.sinh(x),
    ),
    "cosh2_conj": YoungPair(
        kind="cosh2_conj",
        phi=lambda x: np.abs(x) * np.arcsinh(np.abs(x)) - np.sqrt(1.0 + x**2) + 1.0,
        phi_prime=lambda x: np.arcsinh(x),
    ),
    "gauss2": YoungPair(
        kind="gauss2",
        phi=lambda x: np.expm1(0.5 * x**2),
        phi_prime=_gauss_phi,
    ),
    "gauss2_conj": YoungPair(
        kind="gauss2_conj",
        phi=None,  # evaluated through the Legendre transform
        phi_prime=_gauss_phi_inv,
        numeric_conjugate=True,
    ),
}

YOUNG_KINDS = ("power",) + tuple(_FIXED_PAIRS)

_CONJUGATE_KIND = {
    "exp2": "exp2_conj",
    "exp2_conj": "exp2",
    "cosh2": "cosh2_conj",
    "cosh2_conj": "cosh2",
    "gauss2": "gauss2_conj",
    "gauss2_conj": "gauss2",
}


def young(kind: str, alpha: Optional[float] = None) -> YoungPair:
    """Build a Young pair by kind name (``alpha`` only for ``power``)."""
    if kind == "power":
        if alpha is None:
            raise ValidationError("power Young functions need alpha")
        return _power_pair(alpha)
    try:
        return _FIXED_PAIRS[kind]
    except KeyError:
        raise ValidationError(f"unknown Young kind {kind!r}") from None


def conjugate_of(Y: YoungPair) -> YoungPair:
    if Y.kind == "power":
        beta = Y.alpha / (Y.alpha - 1.0)
        return _power_pair(beta)
    return _FIXED_PAIRS[_CONJUGATE_KIND[Y.kind]]


def young_eval(Y: YoungPair, x) -> np.ndarray | float:
    """Evaluate ``Phi(|x|)``; the gauss2 conjugate goes through its Legendre form."""
    arr = np.abs(np.asarray(x, dtype=float))
    if Y.kind == "gauss2_conj":
        x_star = _gauss_phi_inv(arr)
        gauss = _FIXED_PAIRS["gauss2"]
        out = x_star * arr - gauss.phi(x_star)
        out = np.where(arr == 0.0, 0.0, out)
    else:
        out = Y.phi(arr)
    return float(out) if np.ndim(x) == 0 else out


def luxemburg_norm(f: ArrayLike, space: FiniteSpace, Y: YoungPair) -> float:
    """Smallest scale ``rho`` with ``sum(Phi(|f|/rho) mu) <= 1`` (0 for ``f = 0``).

    On a finite space the defining integral is continuous and strictly
    decreasing in ``rho``, so the norm is the unique root of
    ``integral = 1``, bracketed by doubling and bisected to relative
    tolerance ``LUX_RTOL``.
    """
    fv = values_on(space, f)
    sup = float(np.max(np.abs(fv)))
    if sup == 0.0:
        return 0.0

    def integral(rho: float) -> float:
        return float(np.sum(young_eval(Y, fv / rho) * space.weights))

    hi = sup * space.n
    while integral(hi) > 1.0:
        hi *= 2.0
    lo = 0.5 * hi
    while integral(lo) < 1.0:
        hi = lo
        lo *= 0.5
        if lo < 1e-300:
            raise RegularityError("Luxemburg bracket collapsed")
    for _ in range(LUX_MAX_ITER):
        if hi - lo <= LUX_RTOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if integral(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def orlicz_dual_pairing_gap(
    u: ArrayLike, v: ArrayLike, space: FiniteSpace, Y: YoungPair
) -> float:
    """Slack ``2 |u|_Phi |v|_Phi* - |<u, v>_mu|`` of the pairing bound (>= 0)."""
    uv = values_on(space, u)
    vv = values_on(space, v)
    norm_u = luxemburg_norm(uv, space, Y)
    norm_v = luxemburg_norm(vv, space, Y.conjugate)
    inner = abs(float(np.sum(uv * vv * space.weights)))
    return 2.0 * norm_u * norm_v - inner


def subexp_bracket_norm(f: ArrayLike, space: FiniteSpace, kmax: int = 30) -> float:
    """Moment-based equivalent norm ``sup_k ((2k)!^-1 E[f^2k])^(1/2k)``.

    Evaluated in the log domain so large powers never overflow; monotone
    nondecreasing in ``kmax``.
    """
    if kmax < 1:
        raise ValidationError("kmax must be at least 1")
    fv = values_on(space, f)
    if np.all(fv == 0.0):
        return 0.0
    log_abs = np.where(fv == 0.0, -np.inf, np.log(np.abs(fv)))
    log_w = np.log(space.weights)
    best = -np.inf
    for k in range(1, kmax + 1):
        log_moment = logsumexp(2 * k * log_abs + log_w)
        best = max(best, (log_moment - gammaln(2 * k + 1)) / (2 * k))
    return float(np.exp(best))


# ---------------------------------------------------------------------------
# audit reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailBoundReport:
    """Tail audit ``mu(|f| >= t) <= 4 exp(-t / rho)`` on a grid of levels."""

    rho: float
    levels: np.ndarray
    masses: np.ndarray
    bounds: np.ndarray

    @property
    def violations(self) -> List[int]:
        return [int(i) for i in np.nonzero(self.masses > self.bounds)[0]]

    @property
    def ok(self) -> bool:
        return not self.violations


def tail_bound_audit(f: ArrayLike, space: FiniteSpace, t_grid: Sequence[float]) -> TailBoundReport:
    """Check the sub-exponential tail bound with constant 4 and the cosh norm scale."""
    fv = values_on(space, f)
    if np.all(fv == 0.0):
        raise ValidationError("tail audit needs a nonzero random variable")
    rho = luxemburg_norm(fv, space, young("cosh2"))
    levels = np.asarray(t_grid, dtype=float)
    masses = np.array(
        [float(np.sum(space.weights[np.abs(fv) >= t])) for t in levels]
    )
    bounds = 4.0 * np.exp(-levels / rho)
    return TailBoundReport(rho=rho, levels=levels, masses=masses, bounds=bounds)


@dataclass(frozen=True)
class YoungIdentityReport:
    """Grid audit of the product inequality and the Legendre equality."""

    kind: str
    min_inequality_slack: float
    max_legendre_residual: float
    inequality_tol: float = 1e-10
    legendre_tol: float = 1e-8

    @property
    def ok(self) -> bool:
        return (
            self.min_inequality_slack >= -self.inequality_tol
            and self.max_legendre_residual <= self.legendre_tol
        )


def young_identity_audit(Y: YoungPair, grid: Sequence[float]) -> YoungIdentityReport:
    """Audit ``Phi(x) + Psi(y) >= x y`` and ``Phi(x) + Psi(phi(x)) = x phi(x)``.

    Numeric conjugates (the gauss2 pair) get the looser 1e-6 Legendre
    tolerance.
    """
    conj = Y.conjugate
    xs = np.asarray(grid, dtype=float)
    phi_x = Y.phi_prime(xs) if Y.kind != "gauss2_conj" else _gauss_phi_inv(xs)
    slack = np.inf
    for x in xs:
        vals = young_eval(Y, x) + young_eval(conj, xs) - x * xs
        slack = min(slack, float(np.min(vals)))
    legendre = np.abs(
        np.asarray(young_eval(Y, xs))
        + np.asarray(young_eval(conj, phi_x))
        - xs * phi_x
    )
    numeric = Y.numeric_conjugate or conj.numeric_conjugate
    return YoungIdentityReport(
        kind=Y.kind,
        min_inequality_slack=slack,
        max_legendre_residual=float(np.max(legendre)),
        legendre_tol=1e-6 if numeric else 1e-8,
    )


@dataclass(frozen=True)
class DominationReport:
    """Empirical embedding constant ``|f|_Y1 <= c |f|_Y2`` over samples."""

    kind_1: str
    kind_2: str
    constant: float
    samples: int

    @property
    def ok(self) -> bool:
        return np.isfinite(self.constant)


def domination_audit(
    Y1: YoungPair, Y2: YoungPair, samples: Sequence[ArrayLike], space: FiniteSpace
) -> DominationReport:
    """Fit the smallest ``c`` with ``|f|_Y1 <= c |f|_Y2`` over the samples."""
    ratios = []
    for f in samples:
        fv = values_on(space, f)
        if np.all(fv == 0.0):
            continue
        ratios.append(luxemburg_norm(fv, space, Y1) / luxemburg_norm(fv, space, Y2))
    if not ratios:
        raise ValidationError("domination audit needs at least one nonzero sample")
    return DominationReport(
        kind_1=Y1.kind, kind_2=Y2.kind, constant=float(np.max(ratios)), samples=len(ratios)
    )
