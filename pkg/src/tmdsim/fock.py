"""Sparse multimode Fock states and two-mode splitting transforms.

States are stored as a mapping from occupation tuples to real amplitudes.
Couplers use the convention

    a_in^dagger -> sqrt(t) a_out1^dagger + sqrt(1 - t) a_out2^dagger

with no relative phase. In the time-multiplexed detector every output path
has a different length, far longer than the coherence length, so no two
amplitudes ever recombine on a coupler and phases never reach a probability.
All amplitudes therefore stay real and non-negative.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

NORM_TOL = 1e-12
MAX_MODES = 23


class FockError(ValueError):
    """Invalid mode index, transmission, or occupied output mode."""


@dataclass(frozen=True)
class SplitSpec:
    """Route the photons of ``in_mode`` to ``out_a`` (prob. ``t``) and ``out_b``.

    ``out_a == in_mode`` is allowed and gives an in-place tap: the kept
    photons stay where they were and only ``out_b`` has to start empty.
    """

    in_mode: int
    out_a: int
    out_b: int
    t: float

    def __post_init__(self):
        if self.out_a == self.out_b:
            raise FockError("split outputs must be distinct modes")
        if not 0.0 <= self.t <= 1.0:
            raise FockError(f"transmission {self.t} outside [0, 1]")


class FockState:
    """Superposition of number states over a fixed number of modes.

    Instances are treated as immutable; every transform returns a new state.
    """

    __slots__ = ("_terms", "n_modes", "n")

    def __init__(self, terms: Mapping[tuple[int, ...], float], n_modes: int, n: int):
        self._terms = MappingProxyType(dict(terms))
        self.n_modes = n_modes
        self.n = n

    @property
    def terms(self) -> Mapping[tuple[int, ...], float]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        return f"FockState(n={self.n}, n_modes={self.n_modes}, terms={len(self)})"

    def norm_squared(self) -> float:
        return math.fsum(a * a for a in self._terms.values())

    def probabilities(self) -> dict[tuple[int, ...], float]:
        return {occ: a * a for occ, a in self._terms.items()}

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.n_modes:
            raise FockError(f"mode {mode} out of range for {self.n_modes} modes")


def make_number_state(n: int, n_modes: int, mode: int = 0) -> FockState:
    """``n`` photons in ``mode``, vacuum elsewhere."""
    if n < 0:
        raise FockError("photon number must be non-negative")
    if not 1 <= n_modes <= MAX_MODES:
        raise FockError(f"mode count must lie in 1..{MAX_MODES}")
    if not 0 <= mode < n_modes:
        raise FockError(f"mode {mode} out of range for {n_modes} modes")
    occ = [0] * n_modes
    occ[mode] = n
    return FockState({tuple(occ): 1.0}, n_modes, n)


def _split_weights(q: int, t: float) -> list[float]:
    # amplitude for k photons kept and q - k routed away
    return [
        math.sqrt(math.comb(q, k) * t**k * (1.0 - t) ** (q - k))
        for k in range(q + 1)
    ]


def apply_split(state: FockState, spec: SplitSpec) -> FockState:
    """Apply a lossless two-output coupler to one mode of ``state``.

    Each term with ``q`` photons in ``spec.in_mode`` becomes ``q + 1`` terms
    with binomial square-root weights.
    """
    for m in (spec.in_mode, spec.out_a, spec.out_b):
        state._check_mode(m)
    in_place = spec.out_a == spec.in_mode
    must_be_empty = [spec.out_b] if in_place else [spec.out_a, spec.out_b]
    for m in must_be_empty:
        if m == spec.in_mode:
            continue
        if any(occ[m] for occ in state.terms):
            raise FockError(f"output mode {m} is already occupied")

    cache: dict[int, list[float]] = {}
    out: dict[tuple[int, ...], float] = defaultdict(float)
    for occ, amp in state.terms.items():
        q = occ[spec.in_mode]
        if q == 0:
            out[occ] += amp
            continue
        weights = cache.get(q)
        if weights is None:
            weights = cache[q] = _split_weights(q, spec.t)
        base = list(occ)
        base[spec.in_mode] = 0
        for k, w in enumerate(weights):
            if w == 0.0:
                continue
            new = base.copy()
            new[spec.out_a] = k
            new[spec.out_b] = q - k
            out[tuple(new)] += amp * w
    return FockState(out, state.n_modes, state.n)


def apply_loss(state: FockState, mode: int, loss_mode: int, f_pow: float) -> FockState:
    """Keep each photon of ``mode`` with probability ``f_pow``; divert the rest."""
    return apply_split(state, SplitSpec(mode, mode, loss_mode, f_pow))


def mode_marginal_probabilities(
    state: FockState, modes: Iterable[int]
) -> dict[tuple[int, ...], float]:
    """Occupation probabilities restricted to ``modes`` (others summed out)."""
    modes = list(modes)
    for m in modes:
        state._check_mode(m)
    out: dict[tuple[int, ...], float] = defaultdict(float)
    for occ, amp in state.terms.items():
        out[tuple(occ[m] for m in modes)] += amp * amp
    return dict(out)


def max_terms(n: int, n_modes: int) -> int:
    """Number of ways to place ``n`` bosons in ``n_modes`` modes."""
    return math.comb(n + n_modes - 1, n_modes - 1)
