"""Shot-by-shot simulation of the detector with classical photon routing.

Each photon independently lands in one of the 16 detection bins (bin with
loop exponent ``b`` reached with probability ``f**b / 16``) or is lost, and a
photon that lands is detected with probability ``eta``. A shot's count is the
number of distinct bins holding at least one detected photon. Classical
routing gives the same statistics as the field-operator calculation because
no two paths are ever recombined coherently; the test suite checks this.

Shots run in fixed-size batches, each with its own generator spawned from the
master seed, so results do not depend on how many worker threads are used.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .fit import ClickHistogram
from .network import DETECTORS, N_BINS, N_DETECTION, build_layout, per_bin_reach_probability

BATCH_SHOTS = 100_000


@dataclass(frozen=True)
class FockSource:
    n: int
    f: float = 0.97
    eta: float = 0.43


@dataclass(frozen=True)
class CoherentSource:
    """Poisson photon number of mean ``mu0`` at the detector input.

    With ``equal_loss`` every bin is reached with probability ``l / 16``;
    otherwise the true per-bin fiber transmission ``f**b / 16`` is used.
    """

    mu0: float
    eta: float = 0.43
    l: float = 1.0
    f: float = 0.97
    equal_loss: bool = True


@dataclass(frozen=True)
class McConfig:
    shots: int
    seed: int
    params: FockSource | CoherentSource
    workers: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class McResult:
    histogram: ClickHistogram
    seed_used: int

    @property
    def empirical_probs(self) -> np.ndarray:
        return self.histogram.counts / self.histogram.total


def _bin_reach(params: FockSource | CoherentSource) -> np.ndarray:
    if isinstance(params, CoherentSource) and params.equal_loss:
        if not 0.0 <= params.l <= 1.0:
            raise ValueError("l must lie in [0, 1]")
        return np.full(N_DETECTION, params.l / N_DETECTION)
    layout = build_layout()
    reach = per_bin_reach_probability(layout, params.f)
    return np.array([reach[d, b] for d in DETECTORS for b in range(N_BINS)])


def _batch(rng: np.random.Generator, photons: np.ndarray, outcome_p: np.ndarray) -> np.ndarray:
    shots = len(photons)
    total = int(photons.sum())
    # outcome 0..15: detected in that bin; 16: lost or missed
    outcome = rng.choice(len(outcome_p), size=total, p=outcome_p)
    shot = np.repeat(np.arange(shots), photons)
    hit = outcome < N_DETECTION
    clicked = np.zeros((shots, N_DETECTION), dtype=bool)
    clicked[shot[hit], outcome[hit]] = True
    return np.bincount(clicked.sum(axis=1), minlength=N_DETECTION + 1)


def _run(config: McConfig, draw_photons) -> McResult:
    p = config.params
    if not 0.0 <= p.eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    detected = _bin_reach(p) * p.eta
    outcome_p = np.append(detected, max(0.0, 1.0 - detected.sum()))
    outcome_p /= outcome_p.sum()

    sizes = [BATCH_SHOTS] * (config.shots // BATCH_SHOTS)
    if config.shots % BATCH_SHOTS:
        sizes.append(config.shots % BATCH_SHOTS)
    streams = np.random.SeedSequence(config.seed).spawn(len(sizes))

    def one(args):
        size, ss = args
        rng = np.random.default_rng(ss)
        return _batch(rng, draw_photons(rng, size), outcome_p)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        parts = list(pool.map(one, zip(sizes, streams)))
    return McResult(ClickHistogram(np.sum(parts, axis=0)), config.seed)


def sample_fock_clicks(config: McConfig) -> McResult:
    p = config.params
    if not isinstance(p, FockSource):
        raise TypeError("sample_fock_clicks needs FockSource parameters")
    if p.n < 0:
        raise ValueError("photon number must be non-negative")
    return _run(config, lambda rng, size: np.full(size, p.n, dtype=np.int64))


def sample_coherent_clicks(config: McConfig) -> McResult:
    p = config.params
    if not isinstance(p, CoherentSource):
        raise TypeError("sample_coherent_clicks needs CoherentSource parameters")
    if p.mu0 < 0:
        raise ValueError("mu0 must be non-negative")
    return _run(config, lambda rng, size: rng.poisson(p.mu0, size))


@dataclass(frozen=True)
class TimingConfig:
    """Pulse spacing and detector dead time, in nanoseconds."""

    delta_t: float = 110.0
    tau: float = 60.0
    pulse_duration: float = 0.05

    def __post_init__(self):
        if min(self.delta_t, self.tau, self.pulse_duration) <= 0:
            raise ValueError("timing parameters must be positive")


@dataclass(frozen=True)
class DeadTimeResult:
    registered: dict[str, int] = field(default_factory=dict)
    lost: int = 0


def dead_time_sim(clicks: Mapping[str, Iterable[int]], timing: TimingConfig) -> DeadTimeResult:
    """Replay one trigger's clicks through non-paralyzable detectors.

    ``clicks`` maps a detector name to the time bins in which it would fire.
    A click at ``bin * delta_t`` registers only if at least ``tau`` has passed
    since that detector's previous registered click. ``pulse_duration`` is far
    below both time scales and only enters through validation.
    """
    registered = {}
    lost = 0
    for det, bins in clicks.items():
        last = None
        count = 0
        for b in sorted(set(bins)):
            t = b * timing.delta_t
            if last is None or t - last >= timing.tau:
                last = t
                count += 1
            else:
                lost += 1
        registered[det] = count
    return DeadTimeResult(registered, lost)
