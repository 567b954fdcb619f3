"""Classical click statistics of a balanced, lossless N-port.

Photons pick one of ``N`` outputs uniformly and independently; each output
has a binary detector of efficiency ``eta``. ``P(m|n)`` is the chance that
exactly ``m`` outputs click when ``n`` photons are sent in. Three routes are
provided (recursion, alternating closed form, brute-force enumeration) so they
can check one another; the recursion is the reference.
"""

from __future__ import annotations

import functools
import math

import numpy as np

BRUTE_FORCE_LIMIT = 50_000_000


def p_zero(n: int, eta: float) -> float:
    """Every photon missed: ``(1 - eta)**n``."""
    return (1.0 - eta) ** n


def p_all(N: int, n: int, eta: float) -> float:
    """Every photon counted: ``(eta/N)**n * N!/(N-n)!``; zero when ``n > N``."""
    if n > N:
        return 0.0
    return (eta / N) ** n * math.perm(N, n)


def recursion_table(N: int, eta: float, n_max: int) -> np.ndarray:
    """``table[n, m] = P(m|n)`` for ``0 <= m, n <= n_max``, built photon by photon.

    Adding a photon either leaves the click count alone (missed, or landed in
    an output that already clicked) or lights one of the ``N - m`` dark outputs.
    """
    table = np.zeros((n_max + 1, n_max + 1))
    table[0, 0] = 1.0
    m = np.arange(n_max + 1)
    stay = (1.0 - eta) + eta * m / N
    grow = np.clip(N + 1 - m, 0, None) * eta / N
    for n in range(n_max):
        table[n + 1] = table[n] * stay
        table[n + 1, 1:] += table[n, :-1] * grow[1:]
    return table


def recursion_pmn(N: int, eta: float, m: int, n: int) -> float:
    if m < 0 or m > n:
        return 0.0
    return float(recursion_table(N, eta, n)[n, m])


def recursion_distribution(N: int, eta: float, n: int) -> np.ndarray:
    """``P(m|n)`` for ``m = 0..n`` from the recursion."""
    return recursion_table(N, eta, n)[n].copy()


def closed_form_pmn(N: int, eta: float, m: int, n: int) -> float:
    """Inclusion-exclusion form of ``P(m|n)``.

    The alternating sum loses digits when ``m`` and ``n`` are large; it is
    accumulated with ``math.fsum`` to keep N = 16 accurate to ~1e-13.
    """
    if m < 0 or m > n or m > N:
        return 0.0
    terms = (
        (-1) ** j * math.comb(m, j) * ((1.0 - eta) + (m - j) * eta / N) ** n
        for j in range(m + 1)
    )
    return math.comb(N, m) * math.fsum(terms)


def closed_form_distribution(N: int, eta: float, n: int) -> np.ndarray:
    return np.array([closed_form_pmn(N, eta, m, n) for m in range(n + 1)])


@functools.lru_cache(maxsize=128)
def _outcome_counts(N: int, n: int) -> np.ndarray:
    # counts[k, m]: outcomes with k photons detected lighting m distinct outputs
    size = (N + 1) ** n
    counts = np.zeros((n + 1, n + 1), dtype=np.int64)
    block = 1 << 20
    for start in range(0, size, block):
        code = np.arange(start, min(start + block, size), dtype=np.int64)
        lit = np.zeros_like(code)
        k = np.zeros_like(code)
        for _ in range(n):
            code, digit = np.divmod(code, N + 1)
            hit = digit > 0
            lit |= np.where(hit, np.left_shift(1, np.maximum(digit - 1, 0)), 0)
            k += hit
        m = np.bitwise_count(lit).astype(np.int64)
        counts += np.bincount(k * (n + 1) + m, minlength=(n + 1) ** 2).reshape(n + 1, n + 1)
    counts.setflags(write=False)
    return counts


def brute_force_distribution(N: int, eta: float, n: int) -> np.ndarray:
    """Enumerate every per-photon outcome: missed, or detected at output 1..N.

    A missed photon's output never matters, so misses are one outcome with
    weight ``1 - eta``; each detected outcome weighs ``eta/N``. The outcome
    tally depends only on ``(N, n)`` and is cached; ``eta`` enters as weights.
    """
    size = (N + 1) ** n
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"(N+1)^n = {size} outcomes exceeds the enumeration limit {BRUTE_FORCE_LIMIT}"
        )
    if N > 62:
        raise ValueError("enumeration supports at most 62 outputs")
    weight = np.array([(eta / N) ** k * (1.0 - eta) ** (n - k) for k in range(n + 1)])
    return weight @ _outcome_counts(N, n)


def brute_force_pmn(N: int, eta: float, m: int, n: int) -> float:
    if m < 0 or m > n:
        return 0.0
    return float(brute_force_distribution(N, eta, n)[m])


def paul_all_detected(N: int, n: int) -> float:
    """Perfect-detector limit ``N!/((N-n)! N**n)``."""
    if n > N:
        return 0.0
    return math.perm(N, n) / N**n
