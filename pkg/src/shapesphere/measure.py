"""Areas on the unit shape sphere and the probabilities they imply.

Three routes are kept apart and labelled:

``cap_closed_form``
    ``2 pi (1 - cos theta0)`` for a polar cap.
``paper_literal_integral``
    The published per-cluster formula, evaluated exactly as printed::

        Area = 2 | int_0^{1/2} asin((1 - 2X) / (sqrt3 k sqrt(1 - X^2))) dX |,  k = cot(alpha)

``region_quadrature``
    The area of ``{apex angle >= alpha}`` for one cluster. That region is
    ``theta <= theta+(phi)`` below the constant-angle curve, so::

        Area = int_0^{2pi} (1 - cos theta+(phi)) dphi = 2 int_0^pi 2 V+^2 / (3 + V+^2) dphi

The two integrals do not agree away from alpha = pi/2: the printed one runs
over X in [0, 1/2] (theta in [pi/3, pi/2]), which is outside the cap of
obtuseness, and uses one arcsin branch. At 2 pi/3 it gives 0.5838
(probability 0.1394) against 1.8309 (probability 0.4371) for the region
quadrature, which Monte Carlo sampling of the uniform shape measure backs.
Neither is substituted for the other.

Probabilities use ``3 Area / (4 pi)``, valid for alpha >= pi/2 where at most
one angle can reach alpha; below pi/2 only Monte Carlo is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .anglelaw import SQRT3, cot_of_alpha
from .euclid import ANGLE_TOL
from .flow import v_plus
from .quadrature import QuadratureSpec, adaptive_integrate

SPHERE_AREA = 4.0 * math.pi
FERMAT_ALPHA = 2.0 * math.pi / 3.0

CAP = "cap_closed_form"
LITERAL = "paper_literal_integral"
REGION = "region_quadrature"
MONTE_CARLO = "monte_carlo"
METHODS = (CAP, LITERAL, REGION, MONTE_CARLO)


@dataclass(frozen=True)
class AreaResult:
    value: float
    method: str
    error_estimate: float


@dataclass(frozen=True)
class ProbabilityResult:
    p: float
    method: str
    error_estimate: float
    alpha: float | None = None
    n: int | None = None
    seed: int | None = None


def cap_area(theta0: float) -> AreaResult:
    if not (0.0 <= theta0 <= math.pi):
        raise ValueError(f"theta0 must lie in [0, pi], got {theta0}")
    return AreaResult(2.0 * math.pi * (1.0 - math.cos(theta0)), CAP, 0.0)


def prob_obtuse() -> ProbabilityResult:
    """Three disjoint caps of angular radius pi/3 out of the whole sphere.

    3 * 2pi(1 - cos(pi/3)) / 4pi = 3/4 exactly; the rational value is returned
    because cos(pi/3) is not 1/2 in floating point.
    """
    return ProbabilityResult(0.75, CAP, 0.0, alpha=math.pi / 2)


def prob_acute() -> ProbabilityResult:
    p = prob_obtuse()
    return ProbabilityResult(1.0 - p.p, CAP, 0.0, alpha=math.pi / 2)


def literal_integrand(alpha: float):
    k = cot_of_alpha(alpha)

    def f(X):
        X = np.asarray(X, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = (1.0 - 2.0 * X) / (SQRT3 * k * np.sqrt(1.0 - X * X))
        return np.arcsin(np.clip(arg, -1.0, 1.0))

    return f


def paper_literal_area(alpha: float, spec: QuadratureSpec | None = None) -> AreaResult:
    """The printed per-cluster area integral, taken literally.

    Its arcsin argument stays in [-1, 1] on [0, 1/2] only when
    ``sqrt3 |k| >= 1`` with ``k < 0``, i.e. alpha in [2 pi/3, pi].
    """
    if not (FERMAT_ALPHA - ANGLE_TOL <= alpha <= math.pi):
        raise ValueError(
            f"the printed integral is defined for alpha in [2pi/3, pi] (cot(alpha) <= -1/sqrt3), got {alpha}"
        )
    if alpha == math.pi:
        # k = -inf: the integrand is identically asin(0)
        return AreaResult(0.0, LITERAL, 0.0)
    value, err = adaptive_integrate(literal_integrand(alpha), 0.0, 0.5, spec)
    return AreaResult(2.0 * abs(value), LITERAL, 2.0 * err)


def region_integrand(alpha: float):
    k = cot_of_alpha(alpha)

    def f(phi):
        v = v_plus(k, np.sin(np.asarray(phi, dtype=float)))
        v2 = v * v
        return 2.0 * v2 / (3.0 + v2)

    return f


def region_area(alpha: float, spec: QuadratureSpec | None = None) -> AreaResult:
    """Area of ``{apex angle of one cluster >= alpha}``, alpha in (pi/3, pi]."""
    if not (math.pi / 3 < alpha <= math.pi):
        raise ValueError(f"alpha must lie in (pi/3, pi], got {alpha}")
    if alpha == math.pi:
        return AreaResult(0.0, REGION, 0.0)
    value, err = adaptive_integrate(region_integrand(alpha), 0.0, math.pi, spec)
    return AreaResult(2.0 * value, REGION, 2.0 * err)


def prob_alpha_obtuse(alpha: float, method: str = REGION, mc=None) -> ProbabilityResult:
    """Probability that the maximal angle exceeds ``alpha`` under the uniform shape measure.

    ``mc`` is a ``montecarlo.McConfig`` for the Monte Carlo route.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if not (math.pi / 3 - ANGLE_TOL <= alpha <= math.pi + ANGLE_TOL):
        raise ValueError(f"alpha must lie in [pi/3, pi], got {alpha}")
    if method == MONTE_CARLO:
        from . import montecarlo

        cfg = mc or montecarlo.McConfig()
        est = montecarlo.estimate(montecarlo.alpha_obtuse(alpha), cfg)
        return ProbabilityResult(est.p_hat, MONTE_CARLO, est.stderr, alpha, est.n, est.seed)
    if alpha < math.pi / 2 - ANGLE_TOL:
        raise ValueError(
            "below pi/2 two angles can exceed alpha, so 3*Area/(4*pi) double counts; use monte_carlo"
        )
    if method == CAP:
        if abs(alpha - math.pi / 2) > ANGLE_TOL:
            raise ValueError("the cap closed form only covers alpha = pi/2")
        return prob_obtuse()
    area = paper_literal_area(alpha) if method == LITERAL else region_area(max(alpha, math.pi / 2))
    return ProbabilityResult(
        3.0 * area.value / SPHERE_AREA, method, 3.0 * area.error_estimate / SPHERE_AREA, alpha
    )
