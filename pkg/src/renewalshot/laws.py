"""Parametric increment laws and response functions.

The family set is closed on purpose: every analytic quantity the limit
theorems need (mean, variance, tail index, slowly varying part, integrals
of the response) is carried as exact metadata, so no asymptotic side
condition is ever "checked" numerically at runtime.

All supported increment laws are strictly positive and non-lattice.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.optimize import brentq


# ---------------------------------------------------------------------------
# increment laws
# ---------------------------------------------------------------------------

class IncrementLaw(ABC):
    """Positive, non-lattice law of the inter-arrival time."""

    lattice = False

    #: (0, inf] tail index of P(xi > t); inf for light tails
    tail_index: float

    #: "constant" | "logarithmic" | "not applicable"
    slow_varying: str

    @property
    @abstractmethod
    def mean(self) -> float: ...

    @property
    @abstractmethod
    def variance(self) -> float: ...

    @abstractmethod
    def tail_prob(self, t): ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None): ...

    @abstractmethod
    def stationary_cdf(self, t): ...

    @abstractmethod
    def stationary_delay(self, rng: np.random.Generator, size=None): ...

    def ell(self, t):
        """Slowly varying part relevant for the normalizer c(t)."""
        raise ValueError(f"{type(self).__name__} has no slowly varying part")

    def _require_finite_mean(self):
        if not math.isfinite(self.mean):
            raise ValueError("law has infinite mean; no stationary version exists")


@dataclass(frozen=True)
class Exponential(IncrementLaw):
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("rate must be positive")

    tail_index = math.inf
    slow_varying = "not applicable"

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def variance(self):
        return 1.0 / self.rate**2

    def tail_prob(self, t):
        return np.exp(-self.rate * np.asarray(t, dtype=float))

    def sample(self, rng, size=None):
        u = rng.random(size)
        return -np.log1p(-u) / self.rate

    def stationary_cdf(self, t):
        return -np.expm1(-self.rate * np.asarray(t, dtype=float))

    def stationary_delay(self, rng, size=None):
        # memorylessness: F* = F
        return self.sample(rng, size)


@dataclass(frozen=True)
class Uniform(IncrementLaw):
    a: float
    b: float

    def __post_init__(self):
        if not (0 <= self.a < self.b):
            raise ValueError("need 0 <= a < b")

    tail_index = math.inf
    slow_varying = "not applicable"

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def variance(self):
        return (self.b - self.a) ** 2 / 12.0

    def tail_prob(self, t):
        t = np.asarray(t, dtype=float)
        return np.clip((self.b - t) / (self.b - self.a), 0.0, 1.0)

    def sample(self, rng, size=None):
        return self.a + (self.b - self.a) * rng.random(size)

    def stationary_cdf(self, t):
        a, b, mu = self.a, self.b, self.mean
        t = np.asarray(t, dtype=float)
        low = np.minimum(t, a)
        mid = np.clip(t, a, b)
        return (low + (a != mid) * (0.5 * (b - a) - 0.5 * (b - mid) ** 2 / (b - a))) / mu

    def stationary_delay(self, rng, size=None):
        a, b, mu = self.a, self.b, self.mean
        u = rng.random(size)
        tri = b - np.sqrt((b - a) * (a + b) * (1.0 - u))
        return np.where(u <= a / mu, u * mu, tri)


@dataclass(frozen=True)
class Gamma(IncrementLaw):
    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise ValueError("shape and rate must be positive")

    tail_index = math.inf
    slow_varying = "not applicable"

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def variance(self):
        return self.shape / self.rate**2

    def tail_prob(self, t):
        return special.gammaincc(self.shape, self.rate * np.asarray(t, dtype=float))

    def sample(self, rng, size=None):
        return rng.standard_gamma(self.shape, size) / self.rate

    def stationary_cdf(self, t):
        # integral of the survival function in closed form:
        #   int_0^t Q(k, r x) dx = t Q(k, r t) + (k/r) P(k+1, r t)
        k, r = self.shape, self.rate
        t = np.asarray(t, dtype=float)
        x = r * t
        return (r * t / k) * special.gammaincc(k, x) + special.gammainc(k + 1, x)

    def stationary_delay(self, rng, size=None):
        u = np.atleast_1d(rng.random(size))
        mu = self.mean
        out = np.empty_like(u)
        for i, ui in enumerate(u):
            if ui <= 0.0:
                out[i] = 0.0
                continue
            hi = mu
            while self.stationary_cdf(hi) < ui:
                hi *= 2.0
            out[i] = brentq(lambda x: self.stationary_cdf(x) - ui, 0.0, hi,
                            xtol=1e-14, rtol=1e-13)
        return out[0] if size is None else out


@dataclass(frozen=True)
class Pareto(IncrementLaw):
    """P(xi > t) = (x_m/t)^alpha for t >= x_m, 1 below x_m."""

    alpha: float
    xm: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0 or self.xm <= 0:
            raise ValueError("tail index and scale must be positive")

    @property
    def tail_index(self):
        return self.alpha

    @property
    def slow_varying(self):
        # alpha = 2 sits in the (A2)/(D2) regime where the relevant ell comes
        # from the truncated second moment and is logarithmic.
        return "logarithmic" if self.alpha == 2 else "constant"

    @property
    def mean(self):
        a = self.alpha
        return a * self.xm / (a - 1.0) if a > 1 else math.inf

    @property
    def variance(self):
        a = self.alpha
        if a <= 2:
            return math.inf
        return self.xm**2 * a / ((a - 1.0) ** 2 * (a - 2.0))

    def ell(self, t):
        if self.alpha == 2:
            # E[xi^2 1{xi <= t}] = 2 x_m^2 ln(t/x_m)
            return 2.0 * self.xm**2 * np.log(np.asarray(t, dtype=float) / self.xm)
        return np.full_like(np.asarray(t, dtype=float), self.xm**self.alpha)

    def tail_prob(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            s = (self.xm / t) ** self.alpha
        return np.where(t < self.xm, 1.0, s)

    def sample(self, rng, size=None):
        u = rng.random(size)
        return self.xm * (1.0 - u) ** (-1.0 / self.alpha)

    def stationary_cdf(self, t):
        self._require_finite_mean()
        a, xm, mu = self.alpha, self.xm, self.mean
        t = np.asarray(t, dtype=float)
        below = np.minimum(t, xm)
        above = np.maximum(t, xm)
        extra = (xm - xm**a * above ** (1.0 - a)) / (a - 1.0)
        return (below + np.where(t > xm, extra, 0.0)) / mu

    def stationary_delay(self, rng, size=None):
        self._require_finite_mean()
        a, xm, mu = self.alpha, self.xm, self.mean
        u = rng.random(size)
        tail = xm * (a * (1.0 - u)) ** (1.0 / (1.0 - a))
        return np.where(u <= xm / mu, u * mu, tail)


# ---------------------------------------------------------------------------
# response functions
# ---------------------------------------------------------------------------

class ResponseFunction(ABC):
    """Deterministic shot response h, nonnegative and locally bounded."""

    #: regular-variation index beta with h(t) ~ t^{-beta} ell_h(t), or None
    #: for responses that decay faster than any power (carry the dri flag).
    rv_index: float | None

    dri: bool
    integrable: bool
    square_integrable: bool
    monotone_from: float = 0.0

    @abstractmethod
    def eval(self, t): ...

    @abstractmethod
    def integral(self, T: float) -> float:
        """Exact int_0^T h(y) dy via the family antiderivative."""


@dataclass(frozen=True)
class PowerDecay(ResponseFunction):
    """h(t) = (t + c0)^{-beta}."""

    beta: float
    c0: float = 1.0

    def __post_init__(self):
        if self.beta < 0 or self.c0 <= 0:
            raise ValueError("need beta >= 0 and c0 > 0")

    @property
    def rv_index(self):
        return self.beta

    @property
    def dri(self):
        return self.beta > 1

    @property
    def integrable(self):
        return self.beta > 1

    @property
    def square_integrable(self):
        return self.beta > 0.5

    def eval(self, t):
        return (np.asarray(t, dtype=float) + self.c0) ** (-self.beta)

    def integral(self, T):
        b, c0 = self.beta, self.c0
        if b == 1:
            return math.log((T + c0) / c0)
        return ((T + c0) ** (1.0 - b) - c0 ** (1.0 - b)) / (1.0 - b)


@dataclass(frozen=True)
class ExpDecay(ResponseFunction):
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("decay rate must be positive")

    rv_index = None
    dri = True
    integrable = True
    square_integrable = True

    def eval(self, t):
        return np.exp(-self.lam * np.asarray(t, dtype=float))

    def integral(self, T):
        return -math.expm1(-self.lam * T) / self.lam


@dataclass(frozen=True)
class Window(ResponseFunction):
    """Half-open indicator 1_{[a,b)}."""

    a: float
    b: float

    def __post_init__(self):
        if not (0 <= self.a < self.b):
            raise ValueError("need 0 <= a < b")

    rv_index = None
    dri = True
    integrable = True
    square_integrable = True

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return ((t >= self.a) & (t < self.b)).astype(float)

    def integral(self, T):
        return max(0.0, min(T, self.b) - self.a)


@dataclass(frozen=True)
class Constant(ResponseFunction):
    v: float

    def __post_init__(self):
        if self.v <= 0:
            raise ValueError("constant must be positive")

    rv_index = 0.0
    dri = False
    integrable = False
    square_integrable = False

    def eval(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.v)

    def integral(self, T):
        return self.v * T


@dataclass(frozen=True)
class ParetoTailMatch(ResponseFunction):
    """h(t) = c * min(1, (x_m/t)^alpha), exactly c * P(xi > t) for the
    matching Pareto law."""

    alpha: float
    xm: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0 or self.xm <= 0 or self.c <= 0:
            raise ValueError("parameters must be positive")

    @property
    def rv_index(self):
        return self.alpha

    @property
    def dri(self):
        return self.alpha > 1

    @property
    def integrable(self):
        return self.alpha > 1

    @property
    def square_integrable(self):
        return self.alpha > 0.5

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            tail = (self.xm / t) ** self.alpha
        return self.c * np.where(t < self.xm, 1.0, tail)

    def integral(self, T):
        a, xm, c = self.alpha, self.xm, self.c
        head = c * min(T, xm)
        if T <= xm:
            return head
        if a == 1:
            return head + c * xm * math.log(T / xm)
        return head + c * xm**a * (T ** (1.0 - a) - xm ** (1.0 - a)) / (1.0 - a)


# ---------------------------------------------------------------------------
# operation layer (the module contract)
# ---------------------------------------------------------------------------

def tail_prob(law: IncrementLaw, t):
    return law.tail_prob(t)


def sample_increment(law: IncrementLaw, stream: np.random.Generator, size=None):
    return law.sample(stream, size)


def stationary_delay_sample(law: IncrementLaw, stream: np.random.Generator, size=None):
    law._require_finite_mean()
    return law.stationary_delay(stream, size)


def response_eval(h: ResponseFunction, t):
    return h.eval(t)


def response_integral(h: ResponseFunction, T: float) -> float:
    if T < 0:
        raise ValueError("T must be nonnegative")
    return h.integral(T)
