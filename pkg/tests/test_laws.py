"""Increment laws and response functions: exact metadata, sampling, and
the stationary-delay construction."""

import math

import numpy as np
import pytest
from scipy import stats

from renewalshot.laws import (Constant, ExpDecay, Exponential, Gamma, Pareto,
                              ParetoTailMatch, PowerDecay, Uniform, Window,
                              response_eval, response_integral,
                              sample_increment, stationary_delay_sample,
                              tail_prob)
from renewalshot.streams import substream
from renewalshot.verify import ks_one_sample


LAWS = [
    (Exponential(1.3), stats.expon(scale=1 / 1.3)),
    (Uniform(0.5, 2.0), stats.uniform(0.5, 1.5)),
    (Gamma(2.5, 1.7), stats.gamma(2.5, scale=1 / 1.7)),
    (Pareto(1.5, 1.0), stats.pareto(1.5)),
]


@pytest.mark.parametrize("law,dist", LAWS, ids=lambda x: type(x).__name__)
def test_sampling_matches_family(law, dist):
    rng = substream(101, 3, 1)
    x = sample_increment(law, rng, 20000)
    d, p = ks_one_sample(x, dist.cdf)
    assert p > 1e-3, (d, p)


@pytest.mark.parametrize("law,dist", LAWS, ids=lambda x: type(x).__name__)
def test_tail_prob_matches_family(law, dist):
    t = np.linspace(0.1, 8.0, 40)
    np.testing.assert_allclose(tail_prob(law, t), dist.sf(t), atol=1e-12)


@pytest.mark.parametrize("law", [Exponential(2.0), Uniform(0.0, 3.0),
                                 Gamma(3.0, 2.0), Pareto(3.5, 2.0)],
                         ids=lambda x: type(x).__name__)
def test_mean_variance_monte_carlo(law):
    rng = substream(101, 3, 2)
    x = law.sample(rng, 200000)
    n = len(x)
    se_mean = x.std() / math.sqrt(n)
    assert abs(x.mean() - law.mean) < 4 * se_mean
    v = (x - x.mean()) ** 2
    se_var = v.std() / math.sqrt(n)
    assert abs(v.mean() - law.variance) < 4 * se_var


@pytest.mark.parametrize("law", [Exponential(1.0), Uniform(0.5, 2.0),
                                 Gamma(2.5, 1.7), Pareto(1.5, 1.0)],
                         ids=lambda x: type(x).__name__)
def test_stationary_delay_matches_stationary_cdf(law):
    rng = substream(101, 3, 3)
    x = stationary_delay_sample(law, rng, 20000)
    d, p = ks_one_sample(x, law.stationary_cdf)
    assert p > 1e-3, (d, p)


@pytest.mark.parametrize("law", [Exponential(1.0), Uniform(0.5, 2.0),
                                 Gamma(2.5, 1.7), Pareto(1.5, 1.0)],
                         ids=lambda x: type(x).__name__)
def test_stationary_cdf_is_integrated_tail(law):
    # F*(t) = mu^{-1} int_0^t P(xi > x) dx, so dF*/dt = P(xi > t)/mu
    for t in (0.3, 0.9, 1.7, 3.1):
        eps = 1e-6
        deriv = (law.stationary_cdf(t + eps) - law.stationary_cdf(t - eps)) / (2 * eps)
        assert abs(deriv - float(law.tail_prob(t)) / law.mean) < 1e-5


def test_pareto_metadata():
    law = Pareto(1.5, 2.0)
    assert law.tail_index == 1.5
    assert law.mean == pytest.approx(1.5 * 2.0 / 0.5)
    assert law.variance == math.inf
    assert law.slow_varying == "constant"
    assert float(law.ell(10.0)) == pytest.approx(2.0**1.5)
    heavy = Pareto(0.5, 1.0)
    assert heavy.mean == math.inf
    with pytest.raises(ValueError):
        stationary_delay_sample(heavy, substream(0, 3, 0))


def test_pareto_logarithmic_ell_at_tail_index_two():
    law = Pareto(2.0, 1.5)
    assert law.slow_varying == "logarithmic"
    # truncated second moment E[xi^2 1{xi <= t}] = 2 x_m^2 ln(t/x_m)
    assert float(law.ell(15.0)) == pytest.approx(2 * 1.5**2 * math.log(10.0))


def test_law_parameter_validation():
    for bad in (lambda: Exponential(0.0), lambda: Uniform(2.0, 1.0),
                lambda: Uniform(-1.0, 1.0), lambda: Gamma(0.0, 1.0),
                lambda: Pareto(1.0, 0.0)):
        with pytest.raises(ValueError):
            bad()


# -- responses ---------------------------------------------------------------

RESPONSES = [PowerDecay(0.25), PowerDecay(1.0), PowerDecay(1.5, 0.7),
             ExpDecay(2.0), Window(0.5, 2.5), Constant(3.0),
             ParetoTailMatch(1.5, 1.0, 2.0), ParetoTailMatch(0.5)]


@pytest.mark.parametrize("h", RESPONSES, ids=lambda h: repr(h))
def test_integral_is_antiderivative(h):
    for T in (0.4, 1.0, 2.2, 7.0):
        eps = 1e-6
        num = (response_integral(h, T + eps) - response_integral(h, T - eps)) / (2 * eps)
        assert abs(num - float(h.eval(T))) < 1e-5, (h, T)


def test_window_half_open():
    h = Window(1.0, 2.0)
    assert float(h.eval(1.0)) == 1.0
    assert float(h.eval(2.0)) == 0.0
    assert float(h.eval(1.999999)) == 1.0
    assert response_integral(h, 10.0) == pytest.approx(1.0)
    assert response_integral(h, 0.5) == 0.0


def test_response_flags():
    assert PowerDecay(0.25).rv_index == 0.25
    assert not PowerDecay(0.25).integrable
    assert not PowerDecay(0.25).square_integrable
    assert PowerDecay(0.75).square_integrable and not PowerDecay(0.75).integrable
    assert PowerDecay(1.5).dri and PowerDecay(1.5).integrable
    assert Constant(1.0).rv_index == 0.0 and not Constant(1.0).integrable
    assert ExpDecay(1.0).dri and ExpDecay(1.0).rv_index is None
    assert Window(0.0, 1.0).dri


def test_pareto_tail_match_is_scaled_tail():
    law = Pareto(0.5, 1.0)
    h = ParetoTailMatch(0.5, 1.0, 3.0)
    t = np.array([0.2, 1.0, 4.0, 1e4])
    np.testing.assert_allclose(response_eval(h, t), 3.0 * law.tail_prob(t),
                               rtol=1e-14)


def test_exp_decay_integral_exact():
    h = ExpDecay(2.0)
    assert response_integral(h, 3.0) == pytest.approx((1 - math.exp(-6.0)) / 2.0)
    with pytest.raises(ValueError):
        response_integral(h, -1.0)
