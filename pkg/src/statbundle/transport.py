"""Exponential and mixture parallel transports and bundle charts.

Transport conventions (``U[p -> q]`` maps the fiber at ``p`` onto the
fiber at ``q``):

* exponential: ``u -> u - E_q[u]``  (re-center under the target)
* mixture:     ``eta -> (p/q) eta`` (density-ratio multiplication)

Only the ``p/q`` ratio lands mixture elements in the fiber at ``q`` and
satisfies the duality identity

    <U_e[p->q] u, v>_q = <u, U_m[q->p] v>_p ,

which holds exactly (not just up to rounding of the two pairings being
summed in different orders).  Both transports form cocycles:
``U[q->r] U[p->q] = U[p->r]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .charts import exp_chart
from .errors import ValidationError
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    Density,
    FiberElement,
    RandomVariable,
    expectation,
    pairing,
)


def e_transport(p: Density, q: Density, u: FiberElement) -> FiberElement:
    """Exponential transport of ``u`` from the fiber at ``p`` to the fiber at ``q``."""
    u.require_kind(EXPONENTIAL)
    u.require_base(p)
    p.space.require_same(q.space)
    shifted = u.values - expectation(u.values, q)
    return FiberElement(q, RandomVariable(q.space, shifted), EXPONENTIAL)


def m_transport(p: Density, q: Density, eta: FiberElement) -> FiberElement:
    """Mixture transport of ``eta`` from the fiber at ``p`` to the fiber at ``q``."""
    eta.require_kind(MIXTURE)
    eta.require_base(p)
    p.space.require_same(q.space)
    scaled = (p.values / q.values) * eta.values
    return FiberElement(q, RandomVariable(q.space, scaled), MIXTURE)


def transport(p: Density, q: Density, fiber: FiberElement) -> FiberElement:
    """Transport ``fiber`` from ``p`` to ``q`` with the transport of its kind."""
    if fiber.kind == EXPONENTIAL:
        return e_transport(p, q, fiber)
    return m_transport(p, q, fiber)


def transport_duality_gap(
    p: Density, q: Density, u: FiberElement, v: FiberElement
) -> float:
    """|<U_e[p->q] u, v>_q - <u, U_m[q->p] v>_p| for ``u`` at ``p``, ``v`` at ``q``.

    Contract: below 1e-10 always; the identity is exact in real arithmetic.
    """
    u.require_kind(EXPONENTIAL)
    v.require_kind(MIXTURE)
    lhs = pairing(v, e_transport(p, q, u), q)
    rhs = pairing(m_transport(q, p, v), u, p)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class BundlePoint:
    """A point of a statistical bundle: a base density plus fiber elements.

    One fiber for the exponential or mixture bundle; two, ordered
    (mixture, exponential), for the full bundle.  ``extra`` holds the
    Euclidean block of the full bundle with parameters.
    """

    base: Density
    fibers: Tuple[FiberElement, ...]
    extra: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(self.fibers))
        for fiber in self.fibers:
            fiber.require_base(self.base)
        kinds = tuple(f.kind for f in self.fibers)
        if len(kinds) == 2 and kinds != (MIXTURE, EXPONENTIAL):
            raise ValidationError(
                "full-bundle points order their fibers (mixture, exponential)"
            )
        if self.extra is not None:
            arr = np.asarray(self.extra, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise ValidationError("extra block must be finite")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, "extra", arr)


def bundle_chart(nu: Density, point: BundlePoint) -> Tuple[FiberElement, List[FiberElement]]:
    """Bundle chart at ``nu``: exponential coordinate of the base, fibers transported to ``nu``."""
    nu.space.require_same(point.base.space)
    coord = exp_chart(nu, point.base)
    moved = [transport(point.base, nu, fiber) for fiber in point.fibers]
    return coord, moved
