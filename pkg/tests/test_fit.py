import json
import math

import numpy as np
import pytest

from tmdsim.coherent import click_distribution
from tmdsim.fit import (
    GRID_POINTS,
    MU_MAX,
    MU_MIN,
    ClickHistogram,
    FitBoundaryWarning,
    UnidentifiableFitError,
    _profile,
    fit_histogram,
)


@pytest.mark.parametrize("mu", [0.05, 2.65 / 16, 13.1 / 16])
def test_noiseless_round_trip(mu):
    result = fit_histogram(1e6 * click_distribution(mu))
    assert result.mu_prime == pytest.approx(mu, rel=1e-6)
    assert result.normalization == pytest.approx(1e6, rel=1e-6)
    assert result.eta_l_mu0 == 16 * result.mu_prime
    assert result.rss >= 0


def test_published_strong_pulse():
    result = fit_histogram(1e6 * click_distribution(13.1 / 16))
    assert result.eta_l_mu0 == pytest.approx(13.1, rel=1e-6)


def test_noisy_moderate_pulse():
    rng = np.random.default_rng(2024)
    counts = rng.multinomial(100_000, click_distribution(2.65 / 16))
    result = fit_histogram(ClickHistogram(counts))
    assert result.eta_l_mu0 == pytest.approx(2.65, rel=0.05)


def test_scale_equivariance():
    rng = np.random.default_rng(3)
    counts = rng.multinomial(50_000, click_distribution(0.3)).astype(float)
    a = fit_histogram(counts)
    b = fit_histogram(7.0 * counts)
    assert b.mu_prime == pytest.approx(a.mu_prime, rel=1e-7)
    assert b.normalization == pytest.approx(7.0 * a.normalization, rel=1e-7)


def test_refined_objective_beats_grid():
    rng = np.random.default_rng(11)
    counts = rng.multinomial(20_000, click_distribution(0.5)).astype(float)
    result = fit_histogram(counts)
    grid = np.geomspace(MU_MIN, MU_MAX, GRID_POINTS)
    assert all(result.rss <= _profile(counts, mu, 16)[1] for mu in grid)


@pytest.mark.parametrize(
    "counts",
    [np.zeros(17), np.eye(17)[0] * 1000, np.eye(17)[5] * 3],
)
def test_degenerate_histograms(counts):
    with pytest.raises(UnidentifiableFitError):
        fit_histogram(counts)


def test_wrong_length():
    with pytest.raises(ValueError):
        fit_histogram(np.ones(10))


def test_boundary_warning():
    counts = np.zeros(17)
    counts[15], counts[16] = 1, 1e6
    with pytest.warns(FitBoundaryWarning):
        result = fit_histogram(counts)
    assert result.at_boundary


def test_histogram_csv_round_trip():
    h = ClickHistogram(np.arange(17) * 3)
    back = ClickHistogram.from_csv(h.to_csv(header="x"))
    assert np.array_equal(back.counts, h.counts)
    with pytest.raises(ValueError):
        ClickHistogram.from_csv("m,probability\n0,1\n")


def test_result_json_keys():
    result = fit_histogram(1e4 * click_distribution(0.2))
    doc = json.loads(result.to_json())
    assert set(doc) == {"normalization", "mu_prime", "eta_l_mu0", "rss", "iterations"}
    assert math.isclose(doc["eta_l_mu0"], 16 * doc["mu_prime"], rel_tol=0, abs_tol=0)
