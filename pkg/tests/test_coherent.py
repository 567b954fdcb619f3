import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tmdsim.coherent import (
    CoherentClickModel,
    CoherentParams,
    click_distribution,
    click_pmf,
    effective_mu,
    mean_clicks,
    poisson_pmf,
)

PUBLISHED = [13.1, 2.65, 0.57]


def test_poisson():
    assert poisson_pmf(0, 0) == 1.0
    assert poisson_pmf(0, 3) == 0.0
    assert math.fsum(poisson_pmf(2.5, n) for n in range(61)) == pytest.approx(1.0, abs=1e-12)
    assert poisson_pmf(2.5, 3) == pytest.approx(2.5**3 * math.exp(-2.5) / 6, rel=1e-14)


def test_effective_mu():
    assert effective_mu(1, 1, 16, 16) == 1.0
    assert effective_mu(0.7, 1, 0, 16) == 0.0
    assert effective_mu(0.7, 0.55, 10, 16) == pytest.approx(0.7 * 0.55 * 10 / 16)
    with pytest.raises(ValueError):
        effective_mu(1.2, 0.5, 1)


def test_zero_mean_never_clicks():
    d = click_distribution(0.0)
    assert d[0] == 1.0 and not d[1:].any()


def test_strong_pulse_values():
    model = CoherentClickModel.from_mu_prime(13.1 / 16)
    assert model.p0 == pytest.approx(0.440982538304776, abs=1e-12)
    assert mean_clicks(13.1 / 16) == pytest.approx(8.944279387123579, abs=1e-12)


def test_weak_pulse_concentrated_at_few_clicks():
    d = click_distribution(0.57 / 16)
    assert d[:3].sum() > 0.98
    assert np.argmax(d) == 0


@pytest.mark.parametrize("product", PUBLISHED)
def test_matches_binomial_formula(product):
    mu = product / 16
    p0 = math.exp(-mu)
    direct = [
        math.factorial(16) / (math.factorial(16 - m) * math.factorial(m)) * p0 ** (16 - m)
        * (1 - p0) ** m
        for m in range(17)
    ]
    assert click_distribution(mu) == pytest.approx(direct, rel=1e-12, abs=1e-300)
    params = CoherentParams.from_product(product)
    assert click_pmf(params, 5) == pytest.approx(direct[5], rel=1e-12)


@given(st.floats(0, 20))
def test_normalized_with_binomial_mean(mu):
    d = click_distribution(mu)
    assert d.sum() == pytest.approx(1.0, abs=1e-12)
    assert d @ np.arange(17) == pytest.approx(16 * (1 - math.exp(-mu)), abs=1e-12)


def test_small_mean_ratio():
    mu = 1e-4
    d = click_distribution(mu)
    assert d[1] / d[0] == pytest.approx(16 * mu, abs=1e-6)


def test_click_pmf_range():
    with pytest.raises(ValueError):
        click_pmf(CoherentParams(mu0=1.0), 17)
