# crweier/sampling.py
"""Deterministic low-discrepancy sample points over a chart's domain box."""
from __future__ import annotations

from functools import cached_property
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from crweier.frame import ChartSpec, FrameData, build_frame
from crweier.settings import FRAME_TOL, SAMPLE_MARGIN
from crweier.verbosity import get_logger, sample_logger

_log = get_logger("crweier.sampling")


def halton_points(domain: Sequence[Tuple[float, float]], count: int, seed: int = 0,
                  margin: float = SAMPLE_MARGIN) -> np.ndarray:
    """``count`` Halton points (bases 2, 3, 5) starting at index ``seed``.

    Points land in the box shrunk by ``margin`` of its width on every side.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if not 0.0 <= margin < 0.5:
        raise ValueError(f"margin must lie in [0, 0.5), got {margin}")
    sampler = qmc.Halton(d=3, scramble=False)
    if seed:
        sampler.fast_forward(seed)
    unit = sampler.random(count)
    lo = np.array([a + margin * (b - a) for a, b in domain])
    hi = np.array([b - margin * (b - a) for a, b in domain])
    return qmc.scale(unit, lo, hi) if np.all(hi > lo) else lo + unit * (hi - lo)


class SampleSet:
    """Sample points of one chart with their frames built on first use."""

    def __init__(self, chart: ChartSpec, count: int, seed: int = 0, order: int = 5,
                 margin: float = SAMPLE_MARGIN, frame_tol: float = FRAME_TOL):
        self.chart = chart
        self.count = count
        self.seed = seed
        self.order = order
        self.margin = margin
        self.frame_tol = frame_tol
        self._frames: Dict[int, FrameData] = {}

    @cached_property
    def points(self) -> np.ndarray:
        return halton_points(self.chart.domain, self.count, self.seed, self.margin)

    def frame(self, index: int) -> FrameData:
        if index not in self._frames:
            frame = build_frame(self.chart, self.points[index], self.order, self.frame_tol)
            sample_logger(_log, self.chart.name, self.seed + index).debug(
                "frame at %s: |a|=%.3g |b|=%.3g |c|=%.3g", frame.point,
                abs(frame.a.value), abs(frame.b.value), abs(frame.c.value))
            self._frames[index] = frame
        return self._frames[index]

    def frames(self) -> List[FrameData]:
        out = [self.frame(k) for k in range(self.count)]
        _log.debug("built %d frames for chart %s", len(out), self.chart.name)
        return out

    def __iter__(self) -> Iterator[FrameData]:
        return iter(self.frames())

    def __len__(self) -> int:
        return self.count
