"""Shot noise evaluation and the regime-scaled statistics.

The regimes mirror the limit-theorem landscape: no-scaling regimes (direct
and centered), Gaussian regimes A1/A2, the stable regime A3 (finite mean,
heavy tail) and the infinite-mean regime D4 whose limit is a fractionally
integrated inverse stable subordinator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laws import Constant, IncrementLaw, Pareto, ResponseFunction, Window
from .renewal import RenewalPath

NOSCALE_DRI = "NOSCALE_DRI"
NOSCALE_CENTERED = "NOSCALE_CENTERED"
A1 = "A1"
A2 = "A2"
A3 = "A3"
D4 = "D4"

REGIMES = (NOSCALE_DRI, NOSCALE_CENTERED, A1, A2, A3, D4)
SCALED_REGIMES = (A1, A2, A3, D4)


class InadmissibleSpec(ValueError):
    """Raised when (regime, alpha, beta, law, h) violate a theorem hypothesis."""


@dataclass(frozen=True)
class LimitSpec:
    regime: str
    alpha: float
    beta: float
    law: IncrementLaw
    h: ResponseFunction

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise InadmissibleSpec(f"unknown regime {self.regime!r}")
        self.validate()

    def validate(self):
        r, a, b = self.regime, self.alpha, self.beta
        law, h = self.law, self.h
        if r in SCALED_REGIMES and isinstance(h, Window):
            raise InadmissibleSpec("Window response vanishes at large t; "
                                   "scaled regimes need h > 0 eventually")
        if r in (A1, A2):
            if a != 2:
                raise InadmissibleSpec(f"{r} requires alpha = 2")
            if not 0 <= b < 0.5:
                raise InadmissibleSpec(f"{r} requires beta in [0, 1/2), got {b}")
            if r == A1 and not math.isfinite(law.variance):
                raise InadmissibleSpec("A1 requires a finite-variance law")
            if r == A2:
                if math.isfinite(law.variance):
                    raise InadmissibleSpec("A2 requires infinite variance")
                if not (isinstance(law, Pareto) and law.alpha == 2):
                    raise InadmissibleSpec("A2 normalizer needs the Pareto "
                                           "tail-index-2 law")
        elif r == A3:
            if not 1 < a < 2:
                raise InadmissibleSpec("A3 requires alpha in (1, 2)")
            if not 0 <= b < 1.0 / a:
                raise InadmissibleSpec(f"A3 requires beta in the interval (0,1/alpha); got {b}")
            if not (isinstance(law, Pareto) and law.alpha == a):
                raise InadmissibleSpec("A3 requires the matching Pareto law")
        elif r == D4:
            if not 0 < a < 1:
                raise InadmissibleSpec("D4 requires alpha in (0, 1)")
            if not 0 <= b <= a:
                raise InadmissibleSpec(f"D4 requires beta in [0, alpha]; got {b}")
            if not (isinstance(law, Pareto) and law.alpha == a):
                raise InadmissibleSpec("D4 requires an infinite-mean Pareto law")
        elif r == NOSCALE_DRI:
            if not h.dri:
                raise InadmissibleSpec("NOSCALE_DRI needs a directly Riemann "
                                       "integrable response")
            if not math.isfinite(law.mean):
                raise InadmissibleSpec("no-scaling limit needs a finite mean")
        elif r == NOSCALE_CENTERED:
            if not math.isfinite(law.variance):
                raise InadmissibleSpec("centered no-scaling regime (C1) needs "
                                       "finite variance")
            if h.integrable or not h.square_integrable:
                raise InadmissibleSpec("centered regime needs a non-integrable, "
                                       "square-integrable response")
        if r in SCALED_REGIMES and h.rv_index is not None and h.rv_index != b:
            raise InadmissibleSpec(f"response decays with index {h.rv_index}, "
                                   f"spec declares beta = {b}")


def evaluate(path: RenewalPath, h: ResponseFunction, t: float) -> float:
    """X(t) = sum over arrivals S_k <= t of h(t - S_k).

    Summation runs over ages in ascending order (numpy pairwise summation).
    """
    if not (0 <= t <= path.horizon):
        raise ValueError(f"t={t} beyond generated horizon {path.horizon}")
    n = np.searchsorted(path.arrivals, t, side="right")
    if n == 0:
        return 0.0
    ages = t - path.arrivals[n - 1::-1]
    return float(np.sum(h.eval(ages)))


def centered_statistic(path: RenewalPath, h: ResponseFunction,
                       law: IncrementLaw, t: float) -> float:
    """X(t) - mu^{-1} int_0^t h(y) dy."""
    law._require_finite_mean()
    return evaluate(path, h, t) - h.integral(t) / law.mean


def solve_c(law: IncrementLaw, t: float) -> float:
    """Normalizer c(t) with t * ell(c) / c^alpha -> 1.

    Constant ell: closed form (ell0 * t)^{1/alpha}.  Logarithmic ell
    (Pareto, alpha = 2): the upper root of c^2 = t * ell(c), by bisection
    to relative tolerance 1e-10.
    """
    if not isinstance(law, Pareto):
        raise ValueError("normalizer defined for Pareto laws only")
    if t <= 0:
        raise ValueError("t must be positive")
    a, xm = law.alpha, law.xm
    if law.slow_varying == "constant":
        return (xm**a * t) ** (1.0 / a)
    # c^2 = 2 t xm^2 ln(c/xm); roots exist only for t >= e
    phi = lambda c: c * c - t * 2.0 * xm * xm * math.log(c / xm)
    c_min = xm * math.sqrt(t)          # minimizer of phi
    if phi(c_min) > 0:
        raise ValueError(f"t={t} too small: c^2 = t*ell(c) has no root")
    hi = c_min
    while phi(hi) <= 0:
        hi *= 2.0
    lo = c_min
    while (hi - lo) > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scaling_g(spec: LimitSpec, t: float) -> float:
    """The counting-process normalizer g(t) of the scaled regimes."""
    if t <= 0:
        raise ValueError("t must be positive")
    law = spec.law
    if spec.regime == A1:
        return math.sqrt(law.variance * law.mean ** (-3) * t)
    if spec.regime == A2:
        return law.mean ** (-1.5) * solve_c(law, t)
    if spec.regime == A3:
        return law.mean ** (-1.0 - 1.0 / spec.alpha) * solve_c(law, t)
    if spec.regime == D4:
        return 1.0 / float(law.tail_prob(t))
    raise InadmissibleSpec(f"regime {spec.regime} has no scaling function")


def scaled_statistic(spec: LimitSpec, path: RenewalPath,
                     u_grid, t: float) -> np.ndarray:
    """The theorem statistic at each u of the grid, on one shared path."""
    u = np.asarray(u_grid, dtype=float)
    if np.any(np.diff(u) <= 0) or np.any(u <= 0):
        raise ValueError("u-grid must be increasing and positive")
    if u[-1] * t > path.horizon:
        raise ValueError("u_max * t exceeds the generated horizon")
    if spec.regime == NOSCALE_DRI:
        return np.array([evaluate(path, spec.h, ui * t) for ui in u])
    if spec.regime == NOSCALE_CENTERED:
        return np.array(
            [centered_statistic(path, spec.h, spec.law, ui * t) for ui in u])
    ht = float(spec.h.eval(t))
    if spec.regime == D4:
        pt = float(spec.law.tail_prob(t))
        return np.array([evaluate(path, spec.h, ui * t) for ui in u]) * (pt / ht)
    h = spec.h
    if isinstance(h, Constant):
        # the constant cancels algebraically; compute with h == 1 so the
        # result is bit-identical for every value of the constant
        h = Constant(1.0)
        ht = 1.0
    denom = scaling_g(spec, t) * ht
    return np.array(
        [centered_statistic(path, h, spec.law, ui * t) for ui in u]) / denom
