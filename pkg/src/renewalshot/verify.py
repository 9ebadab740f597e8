"""Statistical tests and scenario runners.

Every limit theorem becomes a pass/fail Monte Carlo experiment: simulate
the scaled shot noise statistic on a ladder of horizons, compare against
the limit law (exact where a closed form exists, self-simulated where
not), and report one record per (t, u, test).

Determinism: replicates and reference batches draw from counter-based
substreams keyed by (seed, domain, index), so reports are byte-identical
for a fixed (scenario, seed) regardless of worker count.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import special, stats

from . import limits, renewal, shotnoise
from .laws import Constant, ParetoTailMatch, PowerDecay, ResponseFunction
from .shotnoise import (A1, A2, A3, D4, NOSCALE_CENTERED, NOSCALE_DRI,
                        LimitSpec, InadmissibleSpec)
from .stable import abs_moment
from .streams import DOMAIN_AUX, DOMAIN_REFERENCE, DOMAIN_REPLICATE, substream

KS_MARGINAL = "KS_MARGINAL"
MOMENTS = "MOMENTS"
JOINT_PAIRWISE_INDEPENDENCE = "JOINT_PAIRWISE_INDEPENDENCE"
TIME_REVERSAL = "TIME_REVERSAL"
SELF_SIMILARITY = "SELF_SIMILARITY"
STATIONARITY_LOGTIME = "STATIONARITY_LOGTIME"
MEAN_ABS_N = "MEAN_ABS_N"

PLAN_NAMES = (KS_MARGINAL, MOMENTS, JOINT_PAIRWISE_INDEPENDENCE,
              TIME_REVERSAL, SELF_SIMILARITY, STATIONARITY_LOGTIME,
              MEAN_ABS_N)


class ResourceCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# elementary tests
# ---------------------------------------------------------------------------

def ks_two_sample(x, y):
    """Sup-distance of the two ECDFs and the asymptotic Kolmogorov p-value
    at effective size nm/(n+m)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) == 0 or len(y) == 0:
        raise ValueError("samples must be nonempty")
    res = stats.ks_2samp(x, y, method="asymp")
    return float(res.statistic), float(res.pvalue)


def ks_one_sample(x, cdf):
    """Sup-distance of the ECDF against an exact CDF callable."""
    x = np.sort(np.asarray(x, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("sample must be nonempty")
    c = np.asarray(cdf(x), dtype=float)
    i = np.arange(n)
    d = max(np.max(c - i / n), np.max((i + 1) / n - c))
    p = float(special.kolmogorov(d * math.sqrt(n)))
    return float(d), p


def ks_one_sample_normal(x, mean, variance):
    if variance <= 0:
        raise ValueError("variance must be positive")
    sd = math.sqrt(variance)
    return ks_one_sample(x, lambda q: special.ndtr((q - mean) / sd))


def moment_test(x, k, reference):
    """z-score of the empirical k-th moment against a reference, with the
    standard error estimated by sectioning into 20 batches (robust to
    heavy tails)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = np.asarray(x, dtype=float)
    v = x**k
    if not np.all(np.isfinite(v)):
        return math.inf
    nb = 20
    usable = (len(v) // nb) * nb
    if usable == 0:
        raise ValueError("sample too small for sectioning")
    batches = v[:usable].reshape(nb, -1).mean(axis=1)
    est = batches.mean()
    se = batches.std(ddof=1) / math.sqrt(nb)
    if se == 0.0:
        return 0.0 if est == reference else math.inf
    return float((est - reference) / se)


def covariance_z(a, b, reference, nb=20):
    """z-score of the empirical covariance of centered pairs against a
    reference value, sectioned standard error."""
    prod = np.asarray(a, dtype=float) * np.asarray(b, dtype=float)
    usable = (len(prod) // nb) * nb
    batches = prod[:usable].reshape(nb, -1).mean(axis=1)
    se = batches.std(ddof=1) / math.sqrt(nb)
    if se == 0.0:
        return 0.0 if batches.mean() == reference else math.inf
    return float((batches.mean() - reference) / se)


def energy_distance_test(x, y, n_perm=199, seed=0, max_n=2000):
    """Two-sample energy-distance test for multivariate samples with a
    permutation p-value.  Samples larger than max_n per group are
    deterministically subsampled to keep the distance matrix tractable."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    rng = substream(seed, DOMAIN_AUX, 7001)
    if len(x) > max_n:
        x = x[rng.choice(len(x), max_n, replace=False)]
    if len(y) > max_n:
        y = y[rng.choice(len(y), max_n, replace=False)]
    n, m = len(x), len(y)
    pooled = np.vstack([x, y])
    d = np.sqrt(((pooled[:, None, :] - pooled[None, :, :]) ** 2).sum(-1))
    d = d.astype(np.float32)

    def estat(idx_x, idx_y):
        dxy = d[np.ix_(idx_x, idx_y)].mean()
        dxx = d[np.ix_(idx_x, idx_x)].mean()
        dyy = d[np.ix_(idx_y, idx_y)].mean()
        return 2.0 * dxy - dxx - dyy

    base = np.arange(n + m)
    obs = estat(base[:n], base[n:])
    hits = 0
    for _ in range(n_perm):
        perm = rng.permutation(n + m)
        if estat(perm[:n], perm[n:]) >= obs:
            hits += 1
    p = (1.0 + hits) / (n_perm + 1.0)
    return float(obs), float(p)


def copula_independence_test(x, y, n_perm=199, seed=0, max_n=2000, grid=20):
    """Distance between the empirical copula of (x, y) and the product
    copula, with a permutation p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rng = substream(seed, DOMAIN_AUX, 7002)
    if len(x) > max_n:
        keep = rng.choice(len(x), max_n, replace=False)
        x, y = x[keep], y[keep]
    n = len(x)
    qs = np.linspace(0.05, 0.95, grid)

    def cop_dist(u, v):
        cu = u[:, None] <= qs[None, :]
        cv = v[:, None] <= qs[None, :]
        c = (cu[:, :, None] & cv[:, None, :]).mean(axis=0)
        return np.abs(c - qs[:, None] * qs[None, :]).max()

    u = stats.rankdata(x) / (n + 1.0)
    v = stats.rankdata(y) / (n + 1.0)
    obs = cop_dist(u, v)
    hits = 0
    for _ in range(n_perm):
        if cop_dist(u, rng.permutation(v)) >= obs:
            hits += 1
    p = (1.0 + hits) / (n_perm + 1.0)
    return float(obs), float(p)


# ---------------------------------------------------------------------------
# scenario plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    spec: LimitSpec
    u_grid: tuple
    t_ladder: tuple
    replicates: int
    seed: int
    plans: tuple = (KS_MARGINAL,)
    significance: float = 0.01
    max_shots: float = 1e8
    threads: int = 1
    # knobs for self-simulated references
    x_star_truncation: float | None = None
    reference_mesh_d: float = 1e-3
    reference_u_mesh_cells: int = 4096
    reversal_pairs: tuple = ((3.0, 50.0), (5.0, 50.0), (10.0, 50.0))
    logtime_lags: tuple = (0.0, math.log(2.0))

    def __post_init__(self):
        if self.replicates < 100:
            raise InadmissibleSpec("need at least 100 replicates")
        t = tuple(self.t_ladder)
        if any(b <= a for a, b in zip(t, t[1:])):
            raise InadmissibleSpec("t-ladder must be strictly increasing")
        u = tuple(self.u_grid)
        if not u or u[0] <= 0 or any(b <= a for a, b in zip(u, u[1:])):
            raise InadmissibleSpec("u-grid must be positive and increasing")
        for p in self.plans:
            name = p.split(":")[0]
            if name not in PLAN_NAMES:
                raise InadmissibleSpec(f"unknown test plan {p!r}")
            if (name == JOINT_PAIRWISE_INDEPENDENCE
                    and self.spec.regime not in (NOSCALE_DRI, NOSCALE_CENTERED)):
                raise InadmissibleSpec("pairwise independence holds only for "
                                       "the no-scaling (i.i.d. copies) limits")

    def echo(self) -> dict:
        d = asdict(self)
        d["spec"] = {
            "regime": self.spec.regime,
            "alpha": self.spec.alpha,
            "beta": self.spec.beta,
            "law": repr(self.spec.law),
            "response": repr(self.spec.h),
        }
        return d


@dataclass
class TestRecord:
    t: float
    u: float
    test: str
    statistic: float
    reference: float
    p_value: float | None
    z_score: float | None
    passed: bool


@dataclass
class TestReport:
    scenario: dict
    seed: int
    records: list = field(default_factory=list)
    # (t, u) -> sorted sample quantiles, for external plotting
    plot_data: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "seed": self.seed,
            "all_passed": self.all_passed,
            "records": [asdict(r) for r in self.records],
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    def write_csv(self, fileobj) -> None:
        w = csv.writer(fileobj, lineterminator="\n")
        w.writerow(["t", "u", "test", "statistic", "reference",
                    "p_value", "z_score", "passed"])
        for r in self.records:
            w.writerow([r.t, r.u, r.test, repr(r.statistic), repr(r.reference),
                        "" if r.p_value is None else repr(r.p_value),
                        "" if r.z_score is None else repr(r.z_score),
                        int(r.passed)])

    def write_plot_data(self, fileobj) -> None:
        w = csv.writer(fileobj, lineterminator="\n")
        w.writerow(["t", "u", "prob", "quantile"])
        probs = np.linspace(0.0, 1.0, 101)
        for (t, u), q in sorted(self.plot_data.items()):
            for p, qv in zip(probs, q):
                w.writerow([t, u, round(float(p), 2), repr(float(qv))])


# ---------------------------------------------------------------------------
# simulation of the scaled statistic
# ---------------------------------------------------------------------------

def _estimated_shots(spec: LimitSpec, horizon: float, n: int) -> float:
    law = spec.law
    if math.isfinite(law.mean):
        per_path = horizon / law.mean + 10.0 * math.sqrt(horizon / law.mean + 1)
    else:
        a = law.tail_index
        per_path = (horizon / law.xm) ** a / (_g1(a) * _g2(a)) + 100.0
    return n * per_path


def _g1(a):
    return special.gamma(1 + a)


def _g2(a):
    return special.gamma(1 - a)


def _simulate_chunk(args):
    spec, u_grid, t, seed, lo, hi = args
    out = np.empty((hi - lo, len(u_grid)))
    horizon = max(u_grid) * t
    for r in range(lo, hi):
        rng = substream(seed, DOMAIN_REPLICATE, r)
        path = renewal.sample_path(spec.law, horizon, renewal.ZERO_DELAYED, rng)
        out[r - lo] = shotnoise.scaled_statistic(spec, path, u_grid, t)
    return lo, out


def simulate_scaled_matrix(spec: LimitSpec, u_grid, t: float, n: int,
                           seed: int, threads: int = 1,
                           max_shots: float = 1e8) -> np.ndarray:
    """(n, len(u_grid)) matrix of the scaled statistic, one zero-delayed
    path per replicate shared across the u-grid."""
    u_grid = tuple(float(u) for u in u_grid)
    if _estimated_shots(spec, max(u_grid) * t, n) > max_shots:
        raise ResourceCapExceeded(
            f"estimated shot count exceeds cap {max_shots:g}")
    if threads <= 1:
        return _simulate_chunk((spec, u_grid, t, seed, 0, n))[1]
    bounds = np.linspace(0, n, threads * 4 + 1).astype(int)
    jobs = [(spec, u_grid, t, seed, int(a), int(b))
            for a, b in zip(bounds, bounds[1:]) if b > a]
    out = np.empty((n, len(u_grid)))
    with ProcessPoolExecutor(max_workers=threads) as ex:
        for lo, chunk in ex.map(_simulate_chunk, jobs):
            out[lo:lo + len(chunk)] = chunk
    return out


# ---------------------------------------------------------------------------
# references for the limit laws
# ---------------------------------------------------------------------------

def default_x_star_truncation(spec: LimitSpec, tol: float = 1e-9) -> float:
    law, h = spec.law, spec.h
    T = 10.0 * law.mean
    while limits.x_star_tail_bound(law, h, T) > tol and T < 1e6:
        T *= 2.0
    return T


def _limit_reference_sample(spec: LimitSpec, u: float, n: int, seed: int,
                            scenario: Scenario | None = None):
    """Draws from the limit law of the scaled statistic at time point u.
    Returns None when an exact CDF is used instead (A1/A2)."""
    rng = substream(seed, DOMAIN_REFERENCE, int(u * 2**20) & 0x7FFFFFFF)
    if spec.regime in (A1, A2):
        return None
    if spec.regime == A3:
        return limits.marginal_sample_finite_mean(spec.alpha, spec.beta, u,
                                                  rng, n)
    if spec.regime == D4:
        if spec.alpha == spec.beta:
            return None                      # exact Exp(1) marginal
        mesh_d = scenario.reference_mesh_d if scenario else 1e-3
        cells = scenario.reference_u_mesh_cells if scenario else 4096
        out = np.empty(n)
        for i in range(n):
            p = limits.simulate_inverse_subordinator_path(
                spec.alpha, u, mesh_d, rng, u_mesh=u / cells)
            out[i] = limits.frac_integral(p, spec.beta, u)
        return out
    trunc = (scenario.x_star_truncation if scenario and
             scenario.x_star_truncation else default_x_star_truncation(spec))
    out = np.empty(n)
    if spec.regime == NOSCALE_DRI:
        for i in range(n):
            out[i] = limits.sample_X_star(spec.law, spec.h, trunc, rng)
    else:
        for i in range(n):
            out[i] = limits.sample_X_star_centered(spec.law, spec.h, trunc, rng)
    return out


def _gaussian_limit_variance(spec: LimitSpec, u: float) -> float:
    b = spec.beta
    return u ** (1.0 - 2.0 * b) / (1.0 - 2.0 * b) if b > 0 else u


def _limit_moment(spec: LimitSpec, u: float, k: int) -> float:
    if spec.regime in (A1, A2):
        if k % 2 == 1:
            return 0.0
        v = _gaussian_limit_variance(spec, u)
        return v ** (k // 2) * math.prod(range(1, k, 2))
    if spec.regime == A3:
        if k == 1:
            return 0.0
        raise ValueError("stable limit has no finite moments of order >= alpha")
    if spec.regime == D4:
        return limits.moments_inverse_case(spec.alpha, spec.beta, u, k)
    if spec.regime == NOSCALE_DRI:
        if k == 1:
            big = max(1e9, 1e4 * spec.law.mean)
            return spec.h.integral(big) / spec.law.mean
        raise ValueError("no closed-form higher moments for X*")
    if k == 1:
        return 0.0
    raise ValueError("no closed-form higher moments for the centered limit")


# ---------------------------------------------------------------------------
# plan runners
# ---------------------------------------------------------------------------

def _run_ks_marginal(scn, t, samples, records):
    spec = scn.spec
    for j, u in enumerate(scn.u_grid):
        col = samples[:, j]
        if spec.regime in (A1, A2):
            d, p = ks_one_sample_normal(col, 0.0, _gaussian_limit_variance(spec, u))
            ref = 0.0
        elif spec.regime == D4 and spec.alpha == spec.beta:
            d, p = ks_one_sample(col, lambda q: -np.expm1(-np.maximum(q, 0.0)))
            ref = 0.0
        else:
            refs = _limit_reference_sample(spec, u, len(col), scn.seed, scn)
            d, p = ks_two_sample(col, refs)
            ref = 0.0
        records.append(TestRecord(t, u, KS_MARGINAL, d, ref, p, None,
                                  p > scn.significance))


def _run_moments(scn, t, samples, k_max, records):
    spec = scn.spec
    for j, u in enumerate(scn.u_grid):
        for k in range(1, k_max + 1):
            try:
                ref = _limit_moment(spec, u, k)
            except ValueError:
                continue
            z = moment_test(samples[:, j], k, ref)
            est = float(np.mean(samples[:, j] ** k))
            records.append(TestRecord(t, u, f"{MOMENTS}:k={k}", est, ref,
                                      None, z, abs(z) < 3.0))


def _run_pairwise_independence(scn, t, samples, records):
    n = len(samples)
    for i in range(len(scn.u_grid)):
        for j in range(i + 1, len(scn.u_grid)):
            a, b = samples[:, i], samples[:, j]
            rho = float(np.corrcoef(a, b)[0, 1])
            ok_rho = abs(rho) < 3.0 / math.sqrt(n)
            records.append(TestRecord(
                t, scn.u_grid[j], f"CORRELATION:u={scn.u_grid[i]}", rho, 0.0,
                None, rho * math.sqrt(n), ok_rho))
            d, p = copula_independence_test(a, b, seed=scn.seed)
            records.append(TestRecord(
                t, scn.u_grid[j], f"COPULA_PRODUCT:u={scn.u_grid[i]}", d, 0.0,
                p, None, p > scn.significance))


def _run_time_reversal(scn, t, records):
    law = scn.spec.law
    n = scn.replicates
    for idx, (s, horizon) in enumerate(scn.reversal_pairs):
        fwd = np.empty(n, dtype=int)
        rev = np.empty(n, dtype=int)
        for r in range(n):
            rng = substream(scn.seed, DOMAIN_AUX, 100 + idx, r)
            path = renewal.sample_path(law, horizon, renewal.STATIONARY, rng)
            rev[r] = renewal.count_increment(path, horizon - s, horizon)
            rng2 = substream(scn.seed, DOMAIN_AUX, 200 + idx, r)
            path2 = renewal.sample_path(law, s, renewal.STATIONARY, rng2)
            fwd[r] = renewal.count(path2, s)
        d, p = ks_two_sample(rev, fwd)
        records.append(TestRecord(horizon, s, TIME_REVERSAL, d, 0.0, p, None,
                                  p > scn.significance))


def _run_self_similarity(scn, t, records):
    """Check the limit law's Hurst scaling between the smallest and largest
    grid points using independent reference batches."""
    spec = scn.spec
    if len(scn.u_grid) < 2:
        return
    u_lo, u_hi = scn.u_grid[0], scn.u_grid[-1]
    n = scn.replicates
    if spec.regime == D4:
        hurst = spec.alpha - spec.beta
    else:
        hurst = 1.0 / spec.alpha - spec.beta
    a = _limit_reference_sample(spec, u_lo, n, scn.seed + 1, scn)
    b = _limit_reference_sample(spec, u_hi, n, scn.seed + 2, scn)
    if a is None or b is None:
        rng_a = substream(scn.seed, DOMAIN_AUX, 301)
        rng_b = substream(scn.seed, DOMAIN_AUX, 302)
        if spec.regime in (A1, A2):
            a = rng_a.normal(0, math.sqrt(_gaussian_limit_variance(spec, u_lo)), n)
            b = rng_b.normal(0, math.sqrt(_gaussian_limit_variance(spec, u_hi)), n)
        else:                                 # exponential marginal case
            a = rng_a.exponential(1.0, n) * u_lo ** hurst
            b = rng_b.exponential(1.0, n) * u_hi ** hurst
    d, p = ks_two_sample(a * (u_hi / u_lo) ** hurst, b)
    records.append(TestRecord(t, u_hi, SELF_SIMILARITY, d, hurst, p, None,
                              p > scn.significance))


def _run_stationarity_logtime(scn, t, records):
    spec = scn.spec
    if spec.regime != D4 or spec.alpha != spec.beta:
        raise InadmissibleSpec("log-time stationarity needs the alpha = beta "
                               "inverse-subordinator regime")
    a = spec.alpha
    n = scn.replicates
    v = 0.5                                  # log-time shift for the lag pair
    lags = scn.logtime_lags
    u_pts = sorted({1.0} | {math.exp(s) for s in lags}
                   | {math.exp(v)} | {math.exp(v + s) for s in lags})
    u_max = max(u_pts)
    ys = np.empty((n, len(u_pts)))
    for r in range(n):
        rng = substream(scn.seed, DOMAIN_AUX, 400, r)
        p = limits.simulate_inverse_subordinator_path(
            a, u_max, scn.reference_mesh_d, rng,
            u_mesh=u_max / (scn.reference_u_mesh_cells * 4))
        for j, u in enumerate(u_pts):
            ys[r, j] = limits.frac_integral(p, a, u)
    col = {u: ys[:, j] for j, u in enumerate(u_pts)}
    for s in lags:
        ref = limits.stationary_covariance(a, s)
        z0 = covariance_z(col[1.0] - 1.0, col[math.exp(s)] - 1.0, ref)
        zv = covariance_z(col[math.exp(v)] - 1.0, col[math.exp(v + s)] - 1.0, ref)
        records.append(TestRecord(t, s, f"{STATIONARITY_LOGTIME}:lag0",
                                  ref, ref, None, z0, abs(z0) < 3.0))
        records.append(TestRecord(t, s, f"{STATIONARITY_LOGTIME}:lag{v}",
                                  ref, ref, None, zv, abs(zv) < 3.0))


def _run_mean_abs_n(scn, t, records):
    spec = scn.spec
    if spec.regime not in (A1, A2, A3):
        raise InadmissibleSpec("MEAN_ABS_N applies to the finite-mean scaled "
                               "regimes")
    law = spec.law
    n = scn.replicates
    g = shotnoise.scaling_g(spec, t)
    dev = np.empty(n)
    for r in range(n):
        rng = substream(scn.seed, DOMAIN_AUX, 500, r)
        dev[r] = abs(renewal.count_at(law, t, renewal.ZERO_DELAYED, rng)
                     - t / law.mean)
    est = dev.mean() / g
    ref = abs_moment(spec.alpha, 1.0)
    rel = est / ref - 1.0
    z = moment_test(dev / g, 1, ref)
    records.append(TestRecord(t, 1.0, MEAN_ABS_N, est, ref, None, z,
                              abs(rel) < 0.05))


def run_scenario(s: Scenario) -> TestReport:
    """Run every plan of the scenario on each rung of the t-ladder."""
    report = TestReport(scenario=s.echo(), seed=s.seed)
    per_t_plans = {KS_MARGINAL, MOMENTS, JOINT_PAIRWISE_INDEPENDENCE}
    needs_samples = any(p.split(":")[0] in per_t_plans for p in s.plans)
    for t in s.t_ladder:
        samples = None
        if needs_samples:
            samples = simulate_scaled_matrix(s.spec, s.u_grid, t,
                                             s.replicates, s.seed,
                                             s.threads, s.max_shots)
            for j, u in enumerate(s.u_grid):
                report.plot_data[(t, u)] = np.quantile(
                    samples[:, j], np.linspace(0.0, 1.0, 101))
        for plan in s.plans:
            name, _, arg = plan.partition(":")
            if name == KS_MARGINAL:
                _run_ks_marginal(s, t, samples, report.records)
            elif name == MOMENTS:
                _run_moments(s, t, samples, int(arg or 2), report.records)
            elif name == JOINT_PAIRWISE_INDEPENDENCE:
                _run_pairwise_independence(s, t, samples, report.records)
            elif name == TIME_REVERSAL:
                if t == s.t_ladder[0]:
                    _run_time_reversal(s, t, report.records)
            elif name == SELF_SIMILARITY:
                if t == s.t_ladder[0]:
                    _run_self_similarity(s, t, report.records)
            elif name == STATIONARITY_LOGTIME:
                if t == s.t_ladder[0]:
                    _run_stationarity_logtime(s, t, report.records)
            elif name == MEAN_ABS_N:
                _run_mean_abs_n(s, t, report.records)
    return report
