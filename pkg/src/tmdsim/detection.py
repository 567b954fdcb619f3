"""Click statistics of the two binary detectors behind the network."""

from __future__ import annotations

import functools
import io
import json
from dataclasses import dataclass

import numpy as np

from .fock import FockState, max_terms, mode_marginal_probabilities
from .network import N_DETECTION, N_MODES, NetworkConfig, TmdLayout, build_layout, propagate


# sparse engine budget; n = 7 at f < 1 (1.6M terms) is the largest routine case
MAX_STATE_TERMS = 2_000_000


class TermLimitError(ValueError):
    """The requested state is too large for the sparse engine."""


@dataclass(frozen=True)
class DetectorModel:
    """A single effective efficiency shared by both detectors."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"efficiency {self.eta} outside [0, 1]")


@dataclass(frozen=True)
class ClickDistribution:
    """P(m) for m = 0..len(probs)-1 detection events."""

    probs: np.ndarray

    def __getitem__(self, m: int) -> float:
        return float(self.probs[m])

    def __len__(self) -> int:
        return len(self.probs)

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))

    def to_csv(self, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            buf.write(f"# {header}\n")
        buf.write("m,probability\n")
        for m, p in enumerate(self.probs):
            buf.write(f"{m},{p:.17g}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"m": list(range(len(self.probs))), "probability": self.probs.tolist()})

    @classmethod
    def from_csv(cls, text: str) -> "ClickDistribution":
        rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if rows[0].replace(" ", "") != "m,probability":
            raise ValueError("expected header 'm,probability'")
        pairs = [ln.split(",") for ln in rows[1:]]
        probs = np.zeros(max(int(m) for m, _ in pairs) + 1)
        for m, p in pairs:
            probs[int(m)] = float(p)
        return cls(probs)


def poisson_binomial(p) -> np.ndarray:
    """Distribution of the number of successes in independent Bernoulli trials.

    Plain iterative convolution; exact up to rounding for a few dozen trials.
    """
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    dist = np.zeros(len(p) + 1)
    dist[0] = 1.0
    for k, pk in enumerate(p):
        dist[1 : k + 2] = dist[1 : k + 2] * (1 - pk) + dist[: k + 1] * pk
        dist[0] *= 1 - pk
    return dist


def _poisson_binomial_rows(p: np.ndarray) -> np.ndarray:
    # same recurrence as poisson_binomial, one row per basis term
    rows, bins = p.shape
    dist = np.zeros((rows, bins + 1))
    dist[:, 0] = 1.0
    for k in range(bins):
        pk = p[:, k : k + 1]
        dist[:, 1 : k + 2] = dist[:, 1 : k + 2] * (1 - pk) + dist[:, : k + 1] * pk
        dist[:, 0] *= 1 - pk[:, 0]
    return dist


def click_distribution_from_state(
    state: FockState, layout: TmdLayout, det: DetectorModel
) -> ClickDistribution:
    """Mix the per-term Poisson-binomial click counts with Born weights.

    A bin holding ``q`` photons stays dark with probability ``(1 - eta)**q``.
    Loss modes are summed out first, which also shrinks the term count.
    """
    if state.n_modes != layout.n_modes:
        raise ValueError(
            f"state has {state.n_modes} modes but layout describes {layout.n_modes}"
        )
    modes = layout.detection_mode_list()
    marginal = mode_marginal_probabilities(state, modes)
    occ = np.array(list(marginal.keys()), dtype=float).reshape(len(marginal), len(modes))
    weights = np.fromiter(marginal.values(), dtype=float, count=len(marginal))
    p_click = 1.0 - (1.0 - det.eta) ** occ
    per_term = _poisson_binomial_rows(p_click)
    return ClickDistribution(weights @ per_term)


@functools.lru_cache(maxsize=64)
def _propagated(f: float, n: int) -> FockState:
    return propagate(NetworkConfig(f=f, n=n))


def pmn(n: int, f: float, eta: float) -> ClickDistribution:
    """Full quantum pipeline: propagate ``n`` photons, then count clicks."""
    if n < 0:
        raise ValueError("photon number must be non-negative")
    det = DetectorModel(eta)
    modes = N_MODES if f < 1 else N_DETECTION
    if max_terms(n, modes) > MAX_STATE_TERMS:
        raise TermLimitError(
            f"n={n} can populate {max_terms(n, modes)} basis terms, "
            f"above the limit of {MAX_STATE_TERMS}"
        )
    return click_distribution_from_state(_propagated(float(f), int(n)), build_layout(), det)


def p_correct(n: int, f: float, det: DetectorModel) -> float:
    """Probability that all ``n`` photons are counted; 0 beyond 16 photons."""
    if n > N_DETECTION:
        return 0.0
    return pmn(n, f, det.eta)[n]

