"""Time sources for measuring sort durations.

Three kinds are provided: the host's monotonic clock, a scripted clock that
replays fixed readings, and a simulated clock that models each sort's
duration as a per-permutation cost plus a random fluctuation.
"""

from __future__ import annotations

import os
import platform
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

DIVISOR_ENV = "QPPRNG_CLOCK_DIVISOR"

# Clock resolution of the reference platforms, in ns.
PLATFORM_DIVISORS = {
    "windows-x86": 100,
    "macos-arm": 10,
    "macos-x86": 1,
}


class ClockExhausted(RuntimeError):
    pass


class SystemClock:
    kind = "system-monotonic"

    def now_ns(self) -> int:
        return time.perf_counter_ns()

    def advance(self, permutations: int) -> None:
        pass


class ScriptedClock:
    """Returns the given readings in order, then raises ClockExhausted."""

    kind = "scripted"

    def __init__(self, readings: Iterable[int]):
        self._readings = [int(r) for r in readings]
        for a, b in zip(self._readings, self._readings[1:]):
            if b < a:
                raise ValueError(f"scripted readings must be non-decreasing ({a} then {b})")
            if a < 0:
                raise ValueError("scripted readings must be non-negative")
        self._pos = 0

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ScriptedClock":
        """Load one decimal nanosecond reading per line; blank lines and ``#`` comments are skipped."""
        readings = []
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                readings.append(int(line))
        return cls(readings)

    def now_ns(self) -> int:
        if self._pos >= len(self._readings):
            raise ClockExhausted(f"scripted clock exhausted after {len(self._readings)} readings")
        value = self._readings[self._pos]
        self._pos += 1
        return value

    def advance(self, permutations: int) -> None:
        pass

    @property
    def remaining(self) -> int:
        return len(self._readings) - self._pos


class ConstantClock:
    """Always reads the same value: a clock with no jitter at all."""

    kind = "constant"

    def __init__(self, value: int = 0):
        self.value = value

    def now_ns(self) -> int:
        return self.value

    def advance(self, permutations: int) -> None:
        pass


class SimulatedJitterClock:
    """Elapsed time per sort = permutations * base_ns + fluctuation.

    ``distribution`` is ``"uniform"`` (integers in ``[0, width)``) or
    ``"normal"`` (mean ``width / 2``, standard deviation ``sigma``, rounded and
    clipped at zero so time never runs backwards).
    """

    kind = "simulated-jitter"
    _BATCH = 1 << 16

    def __init__(
        self,
        base_ns: int = 50,
        width: int = 256,
        distribution: str = "uniform",
        sigma: float | None = None,
        seed: int | None = None,
        start_ns: int = 0,
    ):
        if base_ns < 0:
            raise ValueError("base_ns must be >= 0")
        if width < 1:
            raise ValueError("width must be >= 1")
        if distribution not in ("uniform", "normal"):
            raise ValueError(f"unknown fluctuation distribution {distribution!r}")
        self.base_ns = int(base_ns)
        self.width = int(width)
        self.distribution = distribution
        self.sigma = float(sigma) if sigma is not None else width / 6
        self._rng = np.random.default_rng(seed)
        self._t = int(start_ns)
        self._buf: list[int] = []
        self._pos = 0

    def _refill(self) -> None:
        if self.distribution == "uniform":
            draws = self._rng.integers(0, self.width, size=self._BATCH)
        else:
            draws = np.rint(self._rng.normal(self.width / 2, self.sigma, size=self._BATCH))
            draws = np.clip(draws, 0, None).astype(np.int64)
        self._buf = draws.tolist()
        self._pos = 0

    def fluctuation(self) -> int:
        if self._pos >= len(self._buf):
            self._refill()
        value = self._buf[self._pos]
        self._pos += 1
        return value

    def now_ns(self) -> int:
        return self._t

    def advance(self, permutations: int) -> None:
        self._t += permutations * self.base_ns + self.fluctuation()


def now_ns(clock) -> int:
    return clock.now_ns()


@dataclass(frozen=True)
class JitterConfig:
    divisor: int = 1

    def __post_init__(self):
        if int(self.divisor) < 1:
            raise ValueError(f"clock divisor must be >= 1, got {self.divisor}")


def jitter_byte(delta_ns: int, cfg: JitterConfig) -> int:
    return (delta_ns // cfg.divisor) & 0xFF


def platform_id(system: str | None = None, machine: str | None = None) -> str:
    system = (system or platform.system()).lower()
    machine = (machine or platform.machine()).lower()
    os_name = {"darwin": "macos", "windows": "windows", "linux": "linux"}.get(system, system)
    if machine in ("arm64", "aarch64") or machine.startswith("arm"):
        arch = "arm"
    elif machine in ("x86_64", "amd64", "i386", "i686", "x86"):
        arch = "x86"
    else:
        arch = machine or "unknown"
    return f"{os_name}-{arch}"


def default_divisor(platform_name: str | None = None) -> JitterConfig:
    """Divisor for the given platform (host platform if None).

    For the host platform the ``QPPRNG_CLOCK_DIVISOR`` environment variable
    overrides the table. Unknown platforms get 1.
    """
    if platform_name is None:
        override = os.environ.get(DIVISOR_ENV)
        if override:
            return JitterConfig(int(override))
        platform_name = platform_id()
    return JitterConfig(PLATFORM_DIVISORS.get(platform_name, 1))
