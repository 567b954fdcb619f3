"""The 23-mode time-multiplexed detector: three delay loops and a final split.

Mode numbering is fixed:

* 0-7    detector A, time bins 0-7
* 8-15   detector B, time bins 0-7
* 16     loss from the L loop (time bin 1)
* 17-18  loss from the 2L loop (time bins 2, 3)
* 19-22  loss from the 4L loop (time bins 4-7)

Time bin ``b`` is the arrival slot; its binary digits say which of the
L, 2L, 4L loops the pulse went through, so it traversed ``b * L`` of delay
fiber. During propagation modes 0-7 double as the single working arm: the
pulse in time bin ``b`` lives in mode ``b`` until the last coupler sends half
of it to ``8 + b``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .fock import FockState, SplitSpec, apply_loss, apply_split, make_number_state

N_BINS = 8
N_DETECTION = 2 * N_BINS
N_STAGES = 3
N_LOSS = 2**N_STAGES - 1
N_MODES = N_DETECTION + N_LOSS
DETECTORS = ("A", "B")


@dataclass(frozen=True)
class TmdLayout:
    detection_modes: dict[tuple[str, int], int]
    loss_modes: dict[tuple[int, int], int]  # (stage, time_bin) -> mode
    loop_exponent: dict[int, int] = field(default_factory=dict)

    @property
    def n_modes(self) -> int:
        return len(self.detection_modes) + len(self.loss_modes)

    def detection_mode_list(self) -> list[int]:
        return [self.detection_modes[d, b] for d in DETECTORS for b in range(N_BINS)]

    def mode_table(self) -> list[dict]:
        rows = []
        for (det, b), mode in self.detection_modes.items():
            rows.append(
                {
                    "mode": mode,
                    "role": "detection",
                    "detector": det,
                    "time_bin": b,
                    "loop_exponent": self.loop_exponent[b],
                }
            )
        for (stage, b), mode in self.loss_modes.items():
            rows.append(
                {
                    "mode": mode,
                    "role": "loss",
                    "stage": stage,
                    "time_bin": b,
                    "length_exponent": 2 ** (stage - 1),
                }
            )
        return sorted(rows, key=lambda r: r["mode"])

    def to_json(self) -> str:
        doc = {
            "n_modes": self.n_modes,
            "n_detection": len(self.detection_modes),
            "n_loss": len(self.loss_modes),
            "modes": self.mode_table(),
        }
        return json.dumps(doc, indent=2)


def build_layout() -> TmdLayout:
    detection = {
        (det, b): i * N_BINS + b for i, det in enumerate(DETECTORS) for b in range(N_BINS)
    }
    loss = {}
    mode = N_DETECTION
    for stage in range(1, N_STAGES + 1):
        delay = 2 ** (stage - 1)
        for b in range(delay, 2 * delay):
            loss[stage, b] = mode
            mode += 1
    return TmdLayout(detection, loss, {b: b for b in range(N_BINS)})


@dataclass(frozen=True)
class NetworkConfig:
    f: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"fiber transmission {self.f} outside [0, 1]")
        if self.n < 0:
            raise ValueError("photon number must be non-negative")

    def stage_transmission(self, stage: int) -> float:
        return self.f ** (2 ** (stage - 1))


def propagate(config: NetworkConfig, layout: TmdLayout | None = None) -> FockState:
    """Send ``config.n`` photons through the detector network."""
    layout = layout or build_layout()
    state = make_number_state(config.n, N_MODES, layout.detection_modes["A", 0])
    for stage in range(1, N_STAGES + 1):
        delay = 2 ** (stage - 1)
        for b in range(delay):
            early = layout.detection_modes["A", b]
            late = layout.detection_modes["A", b + delay]
            state = apply_split(state, SplitSpec(early, early, late, 0.5))
            state = apply_loss(
                state, late, layout.loss_modes[stage, b + delay], config.stage_transmission(stage)
            )
    for b in range(N_BINS):
        a, bm = layout.detection_modes["A", b], layout.detection_modes["B", b]
        state = apply_split(state, SplitSpec(a, a, bm, 0.5))
    return state


def per_bin_reach_probability(layout: TmdLayout, f: float) -> dict[tuple[str, int], float]:
    """Chance that a single photon ends up in each detection bin."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fiber transmission {f} outside [0, 1]")
    return {
        key: f ** layout.loop_exponent[key[1]] / N_DETECTION
        for key in layout.detection_modes
    }
