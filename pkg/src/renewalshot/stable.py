"""Totally skewed alpha-stable samplers and the closed-form absolute moment.

Parametrization bridge (single source of truth for this module): the
characteristic function

    exp{ -|z|^alpha Gamma(1-alpha) (cos(pi alpha/2) + i sin(pi alpha/2) sign z) }

is rewritten in the standard one-parametrization as

    exp{ -sigma^alpha |z|^alpha (1 - i * skew * tan(pi alpha/2) sign z) }

with skew = -1 (spectrally negative) and
sigma^alpha = Gamma(1-alpha) cos(pi alpha/2), which is positive for
1 < alpha < 2 (product of two negatives).  The spectrally positive law is
the negation (conjugate characteristic function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

SPECTRALLY_NEGATIVE = "spectrally_negative"
SPECTRALLY_POSITIVE = "spectrally_positive"


def stable_scale(alpha: float) -> float:
    """sigma = (Gamma(1-alpha) cos(pi alpha/2))^{1/alpha} for 1 < alpha < 2."""
    if not 1 < alpha < 2:
        raise ValueError("scale constant defined for 1 < alpha < 2")
    return (_gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0)) ** (1.0 / alpha)


@dataclass(frozen=True)
class StableSpec:
    alpha: float
    skew: str = SPECTRALLY_NEGATIVE

    def __post_init__(self):
        if not (0 < self.alpha <= 2):
            raise ValueError("alpha must lie in (0, 2]")
        if self.alpha == 1:
            raise ValueError("alpha = 1 is unsupported")
        if self.skew not in (SPECTRALLY_NEGATIVE, SPECTRALLY_POSITIVE):
            raise ValueError(f"unknown skew {self.skew!r}")

    @property
    def scale(self) -> float:
        return stable_scale(self.alpha)

    def char_function(self, z):
        """Target characteristic function on a real grid (for testing)."""
        z = np.asarray(z, dtype=float)
        a = self.alpha
        if a == 2:
            return np.exp(-0.5 * z**2) + 0j
        g = _gamma(1.0 - a)
        s = 1.0 if self.skew == SPECTRALLY_NEGATIVE else -1.0
        expo = -np.abs(z) ** a * g * (math.cos(math.pi * a / 2)
                                      + 1j * s * math.sin(math.pi * a / 2) * np.sign(z))
        return np.exp(expo)


def _cms_skewed_unit(alpha: float, skew: float, rng: np.random.Generator, size):
    """Chambers-Mallows-Stuck draw of S(alpha, skew, 1, 0), alpha != 1."""
    u = math.pi * (rng.random(size) - 0.5)
    w = rng.standard_exponential(size)
    t = skew * math.tan(math.pi * alpha / 2.0)
    b = math.atan(t) / alpha
    s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    num = np.sin(alpha * (u + b)) / np.cos(u) ** (1.0 / alpha)
    rest = (np.cos(u - alpha * (u + b)) / w) ** ((1.0 - alpha) / alpha)
    return s * num * rest


def sample_stable(spec: StableSpec, stream: np.random.Generator, size=None):
    """One variate (or an array) of the law given by the paper's
    characteristic function; alpha = 2 routes to a unit-variance Gaussian."""
    if spec.alpha == 2:
        return stream.standard_normal(size)
    if not 1 < spec.alpha < 2:
        raise ValueError("Levy-motion laws need alpha in (1, 2]")
    skew = -1.0 if spec.skew == SPECTRALLY_NEGATIVE else 1.0
    return spec.scale * _cms_skewed_unit(spec.alpha, skew, stream, size)


def sample_positive_stable(alpha: float, stream: np.random.Generator, size=None):
    """Standard positive stable S with E exp(-s S) = exp(-s^alpha), via
    Kanter's representation, 0 < alpha < 1."""
    if not 0 < alpha < 1:
        raise ValueError("one-sided stable needs alpha in (0, 1)")
    u = math.pi * stream.random(size)
    w = stream.standard_exponential(size)
    a_u = (np.sin(alpha * u) ** alpha * np.sin((1.0 - alpha) * u) ** (1.0 - alpha)
           / np.sin(u)) ** (1.0 / (1.0 - alpha))
    return (a_u / w) ** ((1.0 - alpha) / alpha)


def sample_subordinator_increment(alpha: float, dt: float,
                                  stream: np.random.Generator, size=None):
    """Increment of the subordinator with -log E exp(-t D(1)) = Gamma(1-alpha) t^alpha."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    scale = (_gamma(1.0 - alpha) * dt) ** (1.0 / alpha)
    return scale * sample_positive_stable(alpha, stream, size)


def abs_moment(alpha: float, r: float) -> float:
    """E|W|^r for the spectrally skewed stable W, r < alpha.

    alpha = 2 is the Gaussian branch, E|W|^r = 2^{r/2} Gamma((r+1)/2)/sqrt(pi).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if alpha == 2:
        return 2.0 ** (r / 2.0) * _gamma((r + 1.0) / 2.0) / math.sqrt(math.pi)
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2]")
    if r >= alpha:
        raise ValueError("moment of order r >= alpha is infinite")
    return (2.0 * _gamma(r + 1.0) / (math.pi * r) * math.sin(r * math.pi / 2.0)
            * _gamma(1.0 - r / alpha) * abs(_gamma(1.0 - alpha)) ** (r / alpha)
            * math.cos(math.pi * r / 2.0 - math.pi * r / alpha))
