"""Least-squares fit of a click histogram to the coherent-state model.

The model is ``A * P(m; mu')`` with ``P`` the binomial click distribution.
For fixed ``mu'`` the best normalization ``A`` is linear least squares, so the
fit reduces to a one-dimensional search: a logarithmic grid to locate the
basin, then golden-section refinement in ``log mu'``.
"""

from __future__ import annotations

import io
import json
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .coherent import N_BINS, click_distribution

MU_MIN = 1e-4
MU_MAX = 10.0
GRID_POINTS = 241
REL_TOL = 1e-8
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class UnidentifiableFitError(ValueError):
    """The histogram does not pin down mu' (empty, or all mass in one bin)."""


class FitBoundaryWarning(UserWarning):
    pass


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


@dataclass(frozen=True)
class ClickHistogram:
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1:
            raise ValueError("histogram must be one-dimensional")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self):
        return self.counts.sum()

    def to_csv(self, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            buf.write(f"# {header}\n")
        buf.write("m,count\n")
        for m, c in enumerate(self.counts):
            buf.write(f"{m},{c}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ClickHistogram":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0].replace(" ", "") != "m,count":
            raise ValueError("expected header 'm,count'")
        data = {}
        for ln in rows[1:]:
            m, c = ln.split(",")
            data[int(m)] = _number(c)
        if sorted(data) != list(range(len(data))):
            raise ValueError("rows must cover m = 0..N without gaps")
        return cls(np.array([data[m] for m in range(len(data))]))


@dataclass(frozen=True)
class FitResult:
    normalization: float
    mu_prime: float
    eta_l_mu0: float
    rss: float
    iterations: int
    at_boundary: bool = False

    def to_json(self) -> str:
        doc = asdict(self)
        doc.pop("at_boundary")
        return json.dumps(doc, indent=2)


def _profile(counts: np.ndarray, mu_prime: float, N: int) -> tuple[float, float]:
    """Best normalization and residual sum of squares at fixed ``mu_prime``."""
    model = click_distribution(mu_prime, N)
    norm = float(counts @ model / (model @ model))
    resid = counts - norm * model
    return norm, float(resid @ resid)


def _golden_section(func, lo: float, hi: float, tol: float) -> tuple[float, float, int]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    it = 0
    while b - a > tol:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    return (c, fc, it) if fc <= fd else (d, fd, it)


def fit_histogram(hist, N: int = N_BINS) -> FitResult:
    """Fit ``A`` and ``mu'`` by unweighted least squares on the raw counts.

    ``hist`` is a :class:`ClickHistogram` or any sequence of N + 1
    non-negative numbers (real-valued counts are accepted for noiseless
    synthetic data).
    """
    if not isinstance(hist, ClickHistogram):
        hist = ClickHistogram(np.asarray(hist))
    counts = hist.counts.astype(float)
    if len(counts) != N + 1:
        raise ValueError(f"histogram needs {N + 1} bins, got {len(counts)}")
    if counts.sum() <= 0:
        raise UnidentifiableFitError("histogram is empty")
    if np.count_nonzero(counts) < 2:
        raise UnidentifiableFitError("all events fall in a single bin; mu' is not identifiable")

    grid = np.geomspace(MU_MIN, MU_MAX, GRID_POINTS)
    grid_rss = np.array([_profile(counts, mu, N)[1] for mu in grid])
    i = int(np.argmin(grid_rss))
    at_boundary = i in (0, len(grid) - 1)
    if at_boundary:
        warnings.warn(
            f"best grid point mu'={grid[i]:.3g} lies on the search boundary "
            f"[{MU_MIN}, {MU_MAX}]",
            FitBoundaryWarning,
            stacklevel=2,
        )

    lo, hi = math.log(grid[max(i - 1, 0)]), math.log(grid[min(i + 1, len(grid) - 1)])
    log_mu, rss, iterations = _golden_section(
        lambda x: _profile(counts, math.exp(x), N)[1], lo, hi, REL_TOL
    )
    mu = math.exp(log_mu)
    if grid_rss[i] < rss:
        mu, rss = float(grid[i]), float(grid_rss[i])
    norm, rss = _profile(counts, mu, N)
    return FitResult(norm, mu, N * mu, rss, iterations, at_boundary)
