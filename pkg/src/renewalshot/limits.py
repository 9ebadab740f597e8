"""Limiting processes and their closed-form moments.

Simulates stable Levy motion and the inverse stable subordinator, builds
the fractionally integrated functionals via the summation-by-parts
discretization (weights (u-y_k)^{-beta} against integrator increments,
never the raw singular kernel), and evaluates every closed-form moment
and covariance the limit theorems provide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma

from .laws import IncrementLaw, ResponseFunction
from .renewal import STATIONARY, sample_path
from .stable import StableSpec, sample_stable, sample_subordinator_increment

LEVY_MOTION = "levy_motion"
INVERSE_SUBORDINATOR = "inverse_subordinator"


@dataclass(frozen=True)
class ProcessPath:
    grid: np.ndarray       # 0 = y_0 < ... < y_n <= u_max
    values: np.ndarray     # W(y_k)
    kind: str
    alpha: float
    mesh: float

    def value_at(self, u: float) -> float:
        """W at the largest grid point <= u."""
        idx = np.searchsorted(self.grid, u * (1 + 1e-12), side="right") - 1
        if idx < 0:
            raise ValueError("u below the grid")
        return float(self.values[idx])


def simulate_levy_path(alpha: float, u_max: float, mesh: float,
                       stream: np.random.Generator) -> ProcessPath:
    """Levy motion on a regular grid: i.i.d. mesh^{1/alpha}-scaled stable
    increments (alpha = 2: Brownian motion with sqrt(mesh) Gaussians)."""
    if mesh <= 0 or u_max <= 0:
        raise ValueError("mesh and u_max must be positive")
    n = int(round(u_max / mesh))
    spec = StableSpec(alpha)
    incs = mesh ** (1.0 / alpha) * sample_stable(spec, stream, n)
    values = np.concatenate(([0.0], np.cumsum(incs)))
    grid = np.arange(n + 1) * mesh
    return ProcessPath(grid=grid, values=values, kind=LEVY_MOTION,
                       alpha=alpha, mesh=mesh)


def simulate_inverse_subordinator_path(alpha: float, u_max: float,
                                       mesh_d: float,
                                       stream: np.random.Generator,
                                       u_mesh: float | None = None) -> ProcessPath:
    """First-passage inversion of the subordinator D on a time grid of step
    mesh_d: W(u) = mesh_d * min{j : D(j*mesh_d) > u}.  Bias O(mesh_d)."""
    if mesh_d <= 0 or u_max <= 0:
        raise ValueError("meshes must be positive")
    if u_mesh is None:
        u_mesh = u_max / 1024.0
    n_u = int(round(u_max / u_mesh))
    grid = np.arange(n_u + 1) * u_mesh

    block = 2048
    d_vals = [np.array([0.0])]
    total = 0.0
    while total <= u_max:
        incs = sample_subordinator_increment(alpha, mesh_d, stream, block)
        chunk = total + np.cumsum(incs)
        d_vals.append(chunk)
        total = chunk[-1]
    d = np.concatenate(d_vals)
    # right-continuous inversion: index of first D-value strictly above u
    idx = np.searchsorted(d, grid, side="right")
    values = idx * mesh_d
    # W(0) = inf{t : D(t) > 0} = 0 since D leaves 0 immediately
    values[grid == 0.0] = 0.0
    return ProcessPath(grid=grid, values=values, kind=INVERSE_SUBORDINATOR,
                       alpha=alpha, mesh=u_mesh)


def frac_integral(path: ProcessPath, beta: float, u: float,
                  drop_cells: int = 1) -> float:
    """int_[0,u] (u-y)^{-beta} dW(y) by summation by parts on the path grid.

    Summation by parts of the defining formula over [0, u - delta] leaves
    the exact edge term (W(u) - W(u - delta)) * delta^{-beta}; only the
    remaining sliver integral over [u - delta, u] is dropped (delta =
    drop_cells mesh cells), and that vanishes in the limit for both
    integrator types.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if path.kind == LEVY_MOTION and beta >= 1.0 / path.alpha:
        raise ValueError("need beta < 1/alpha for the Levy integrator")
    if path.kind == INVERSE_SUBORDINATOR and beta > path.alpha:
        raise ValueError("need beta <= alpha for the inverse subordinator")
    if u > path.grid[-1] * (1 + 1e-12):
        raise ValueError("u beyond the simulated grid")
    if beta == 0.0:
        return path.value_at(u)
    iu = int(np.searchsorted(path.grid, u * (1 + 1e-12), side="right") - 1)
    last = iu - drop_cells          # keep cells with y_{k+1} <= u - drop
    if last < 1:
        return 0.0
    y = path.grid[:last]
    dw = np.diff(path.values[: last + 1])
    core = float(np.sum(dw * (u - y) ** (-beta)))
    edge = float(path.values[iu] - path.values[last]) \
        * (u - float(path.grid[last])) ** (-beta)
    return core + edge


def marginal_sample_finite_mean(alpha: float, beta: float, u: float,
                                stream: np.random.Generator, size=None):
    """Exact marginal of the fractionally integrated Levy motion:
    u^{1/alpha - beta} (1 - alpha beta)^{-1/alpha} W_alpha(1)."""
    if alpha * beta >= 1:
        raise ValueError("need alpha * beta < 1")
    factor = u ** (1.0 / alpha - beta) / (1.0 - alpha * beta) ** (1.0 / alpha)
    return factor * sample_stable(StableSpec(alpha), stream, size)


def _gamma_checked(x: float) -> float:
    if x <= 0 and x == round(x):
        raise ValueError(f"gamma pole at {x}")
    return _gamma(x)


def moments_inverse_case(alpha: float, beta: float, u: float, k: int) -> float:
    """k-th moment of the fractionally integrated inverse subordinator:
    u^{k(alpha-beta)} k!/Gamma(1-alpha)^k * prod_j Gamma(1-beta+(j-1)(alpha-beta))
    / Gamma(j(alpha-beta)+1)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if beta >= 1:
        raise ValueError("beta must be < 1")
    prod = 1.0
    for j in range(1, k + 1):
        prod *= (_gamma_checked(1.0 - beta + (j - 1) * (alpha - beta))
                 / _gamma_checked(j * (alpha - beta) + 1.0))
    return u ** (k * (alpha - beta)) * math.factorial(k) \
        / _gamma_checked(1.0 - alpha) ** k * prod


def covariance_inverse_case(alpha: float, beta: float,
                            t1: float, t2: float) -> float:
    """E[Y(t1) Y(t2)] for the inverse-subordinator functional, t1 <= t2.

    Adaptive quadrature of the closed-form kernel; the endpoint
    singularities y^{alpha-1} and (t1-y)^{-beta} are removed by the
    substitutions y = s^{1/alpha} and t1 - y = w^{1/(1-beta)}.
    """
    if not 0 < t1 <= t2:
        raise ValueError("need 0 < t1 <= t2")
    if not 0 < alpha < 1 or beta >= 1:
        raise ValueError("need alpha in (0,1) and beta < 1")
    front = _gamma_checked(1.0 - beta) / (
        _gamma_checked(alpha) * _gamma_checked(1.0 - alpha) ** 2
        * _gamma_checked(1.0 + alpha - beta))

    def kernel(y):
        return ((t1 - y) ** (-beta) * (t2 - y) ** (-beta) * y ** (alpha - 1)
                * ((t1 - y) ** alpha + (t2 - y) ** alpha))

    mid = 0.5 * t1

    # left half: y = s^{1/alpha} tames y^{alpha-1}
    def left(s):
        y = s ** (1.0 / alpha)
        return kernel(y) * y ** (1.0 - alpha) / alpha

    il, el = integrate.quad(left, 0.0, mid**alpha, epsabs=1e-11, limit=200)

    # right half: t1 - y = w^{1/(1-beta)} tames (t1-y)^{-beta}
    q = 1.0 - beta

    def right(w):
        y = t1 - w ** (1.0 / q)
        return kernel(y) * w ** (beta / q) / q

    ir, er = integrate.quad(right, 0.0, (t1 - mid) ** q, epsabs=1e-11, limit=200)
    if el + er > 1e-7 * max(1.0, abs(il + ir)):
        raise RuntimeError(f"covariance quadrature did not converge "
                           f"(error estimate {el + er:.2e})")
    return front * (il + ir)


def stationary_covariance(alpha: float, s: float) -> float:
    """R(s) = 1/(Gamma(alpha)Gamma(1-alpha)) * int_{|s|}^inf
    (1-e^{-y})^{-alpha} e^{-alpha y} dy, the log-time covariance of the
    exponential-marginal process."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    top = math.exp(-abs(s))
    # substitute x = e^{-y}: integral over (0, e^{-|s|}] of x^{a-1}(1-x)^{-a}
    mid = 0.5 * min(top, 1.0)

    def left(v):                         # x = v^{1/alpha}
        x = v ** (1.0 / alpha)
        return (1.0 - x) ** (-alpha) / alpha

    val, err = integrate.quad(left, 0.0, mid**alpha, epsabs=1e-13, limit=200)
    if top > mid:
        q = 1.0 - alpha

        def right(w):                    # 1 - x = w^{1/(1-alpha)}
            x = 1.0 - w ** (1.0 / q)
            return x ** (alpha - 1.0) / q

        v2, e2 = integrate.quad(right, (1.0 - top) ** q, (1.0 - mid) ** q,
                                epsabs=1e-13, limit=200)
        val += v2
        err += e2
    return val / (_gamma(alpha) * _gamma(1.0 - alpha))


def increment_dependence_gap(alpha: float, beta: float,
                             t1: float, t2: float, t3: float) -> float:
    """B - A: cross moment of consecutive increments minus the product of
    their means.  Nonzero gap certifies dependent increments."""
    if not 0 < t1 < t2 < t3:
        raise ValueError("need 0 < t1 < t2 < t3")
    m1 = _gamma_checked(1.0 - beta) / (
        _gamma_checked(1.0 - alpha) * _gamma_checked(1.0 + alpha - beta))
    ab = alpha - beta
    a_term = m1 * m1 * (t2**ab - t1**ab) * (t3**ab - t2**ab)
    b_term = (covariance_inverse_case(alpha, beta, t2, t3)
              - moments_inverse_case(alpha, beta, t2, 2)
              - covariance_inverse_case(alpha, beta, t1, t3)
              + covariance_inverse_case(alpha, beta, t1, t2))
    return b_term - a_term


def x_star_tail_bound(law: IncrementLaw, h: ResponseFunction, T: float) -> float:
    """Deterministic bound on the mean truncation error of X* at level T:
    int_T^inf h / mu (stationary intensity is Lebesgue/mu)."""
    big = max(64.0 * T, 1e9)
    return (h.integral(big) - h.integral(T)) / law.mean


def sample_X_star(law: IncrementLaw, h: ResponseFunction, T: float,
                  stream: np.random.Generator) -> float:
    """One draw of X* = sum_k h(S_k*), truncated at T."""
    if not h.integrable:
        raise ValueError("X* requires an integrable (d.R.i.) response")
    law._require_finite_mean()
    path = sample_path(law, T, STATIONARY, stream)
    if len(path) == 0:
        return 0.0
    return float(np.sum(h.eval(path.arrivals)))


def sample_X_star_centered(law: IncrementLaw, h: ResponseFunction, T: float,
                           stream: np.random.Generator,
                           unchecked_hypotheses: bool = False) -> float:
    """One draw of the centered no-scaling limit at truncation level T:
    sum_{S_k* <= T} h(S_k*) - mu^{-1} int_0^T h.

    Only the finite-variance / square-integrable regime is validated; the
    heavier-tail regimes require smoothness hypotheses this artifact cannot
    check and must be requested with unchecked_hypotheses=True.
    """
    if h.integrable:
        raise ValueError("response is integrable; use sample_X_star")
    if not unchecked_hypotheses:
        if not math.isfinite(law.variance):
            raise ValueError("finite variance required (pass "
                             "unchecked_hypotheses=True to override)")
        if not h.square_integrable:
            raise ValueError("square-integrable response required")
    law._require_finite_mean()
    path = sample_path(law, T, STATIONARY, stream)
    total = float(np.sum(h.eval(path.arrivals))) if len(path) else 0.0
    return total - h.integral(T) / law.mean
