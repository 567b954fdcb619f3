"""Click statistics for a coherent-state (laser pulse) input.

With equal loss in every bin, each of the ``N`` pulses reaching a detector is
an independent coherent state of mean ``mu' = eta * l * mu0 / N``; a bin stays
dark with probability ``exp(-mu')``, and the click count is binomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

N_BINS = 16


def poisson_pmf(mu: float, n: int) -> float:
    """Photon-number distribution of a coherent state of mean ``mu``."""
    if mu < 0:
        raise ValueError("mean must be non-negative")
    if n < 0:
        return 0.0
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def effective_mu(eta: float, l: float, mu0: float, N: int = N_BINS) -> float:
    """Per-bin mean photon number seen by a detector."""
    for name, v in (("eta", eta), ("l", l)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    if mu0 < 0:
        raise ValueError("mu0 must be non-negative")
    return eta * l * mu0 / N


@dataclass(frozen=True)
class CoherentParams:
    mu0: float
    l: float = 1.0
    eta: float = 1.0
    N: int = N_BINS

    @classmethod
    def from_product(cls, eta_l_mu0: float, N: int = N_BINS) -> "CoherentParams":
        """Only the product ``eta * l * mu0`` matters to the model."""
        return cls(mu0=eta_l_mu0, l=1.0, eta=1.0, N=N)

    @property
    def mu_prime(self) -> float:
        return effective_mu(self.eta, self.l, self.mu0, self.N)


@dataclass(frozen=True)
class CoherentClickModel:
    p0: float
    N: int = N_BINS

    @classmethod
    def from_mu_prime(cls, mu_prime: float, N: int = N_BINS) -> "CoherentClickModel":
        if mu_prime < 0:
            raise ValueError("mu_prime must be non-negative")
        return cls(math.exp(-mu_prime), N)

    @property
    def pA(self) -> float:
        return 1.0 - self.p0

    def distribution(self) -> np.ndarray:
        m = np.arange(self.N + 1)
        coeff = np.array([math.comb(self.N, k) for k in m], dtype=float)
        return coeff * self.p0 ** (self.N - m) * self.pA**m


def click_distribution(mu_prime: float, N: int = N_BINS) -> np.ndarray:
    """Binomial(N, 1 - exp(-mu')) probabilities for m = 0..N."""
    return CoherentClickModel.from_mu_prime(mu_prime, N).distribution()


def click_pmf(params: CoherentParams, m: int) -> float:
    if not 0 <= m <= params.N:
        raise ValueError(f"m={m} outside 0..{params.N}")
    return float(click_distribution(params.mu_prime, params.N)[m])


def mean_clicks(mu_prime: float, N: int = N_BINS) -> float:
    return N * -math.expm1(-mu_prime)
