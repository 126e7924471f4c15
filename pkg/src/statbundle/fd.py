"""Finite-difference stencils used by the calculus module and the test oracles.

Weights come from solving the Vandermonde moment system for the given
node offsets, so any symmetric or one-sided stencil is available without
tabulated constants.  Defaults follow the package-wide choices: central
first differences with step ``1e-5`` and 3-point second differences with
step ``1e-4``.
"""

from __future__ import annotations

from math import factorial
from typing import Callable, Sequence

import numpy as np

#: default step for first derivatives
H1_DEFAULT = 1e-5
#: default step for 3-point second derivatives
H2_DEFAULT = 1e-4


def stencil_weights(offsets: Sequence[float], order: int) -> np.ndarray:
    """Weights ``w`` with ``sum w_j g(t + o_j h) ~ h^order g^(order)(t)``.

    Solves ``sum_j w_j o_j^k = order! * delta[k, order]`` for
    ``k = 0 .. len(offsets)-1``; exact for polynomials up to that degree.
    """
    offs = np.asarray(offsets, dtype=float)
    n = offs.size
    if order >= n:
        raise ValueError("need more than `order` nodes")
    vander = np.vander(offs, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = float(factorial(order))
    return np.linalg.solve(vander, rhs)


def derivative(
    g: Callable[[float], np.ndarray | float],
    t: float,
    order: int = 1,
    h: float = H1_DEFAULT,
    halfwidth: int | None = None,
    offsets: Sequence[int] | None = None,
):
    """Finite-difference derivative of ``g`` at ``t`` (scalar or array valued).

    By default uses the smallest symmetric stencil; pass ``halfwidth`` for
    higher-order accuracy or explicit ``offsets`` (integers, in units of
    ``h``) for one-sided evaluation near a boundary.
    """
    if offsets is None:
        hw = halfwidth if halfwidth is not None else (order + 1) // 2
        offsets = range(-hw, hw + 1)
    offs = list(offsets)
    w = stencil_weights(offs, order)
    acc = None
    for weight, off in zip(w, offs):
        term = np.asarray(g(t + off * h), dtype=float) * weight
        acc = term if acc is None else acc + term
    out = acc / h**order
    return float(out) if out.ndim == 0 else out


def diff1(g: Callable[[float], np.ndarray | float], t: float, h: float = H1_DEFAULT):
    """Central 2-point first difference."""
    return derivative(g, t, order=1, h=h, offsets=(-1, 1))


def diff2(g: Callable[[float], np.ndarray | float], t: float, h: float = H2_DEFAULT):
    """Central 3-point second difference."""
    return derivative(g, t, order=2, h=h, offsets=(-1, 0, 1))


def interior_offsets(t: float, domain: tuple[float, float], h: float, halfwidth: int) -> list[int]:
    """Shift a symmetric stencil to one-sided when ``t`` is within ``h`` of the boundary."""
    t0, t1 = domain
    offs = np.arange(-halfwidth, halfwidth + 1)
    slack = 1e-9  # guard the ceil against representation error in t +/- k h
    lo_excess = int(np.ceil(max(0.0, (t0 - (t + offs[0] * h))) / h - slack))
    hi_excess = int(np.ceil(max(0.0, ((t + offs[-1] * h) - t1)) / h - slack))
    if lo_excess and hi_excess:
        raise ValueError("domain too small for the requested stencil")
    return [int(k) for k in offs + lo_excess - hi_excess]
