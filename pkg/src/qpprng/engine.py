"""The QPP-RNG engine: jitter-seeded initialization and the generation loop.

Every sorting round disorders the array with the pad generator, counts the
pads needed to sort it again, and folds the round's timing byte into the
seed. Output bytes come from the counts alone; timing only steers the pads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from qpprng.clock import JitterConfig, default_divisor, jitter_byte
from qpprng.permutation import (
    DEFAULT_ITERATION_CAP,
    DEFAULT_STATIC_SEED,
    MASK64,
    MAX_ARRAY_SIZE,
    DrawSource,
    PadGenerator,
    disorder,
    identity_array,
    sort_by_random_permutations,
)


class ThinEntropyWarning(UserWarning):
    """m * log2(n!) is below 8 bits, so output bytes cannot be full-entropy."""


def evolve_seed(seed: int, r: int) -> int:
    return ((seed << 8) + r) & MASK64


def round_entropy_bits(n: int, m: int) -> float:
    return m * math.log2(math.factorial(n))


@dataclass(frozen=True)
class EngineConfig:
    n: int = 5
    m: int = 4
    static_seed: int = DEFAULT_STATIC_SEED
    jitter: JitterConfig = field(default_factory=default_divisor)
    init_rounds: int = 8
    iteration_cap: int = DEFAULT_ITERATION_CAP

    def __post_init__(self):
        if not 2 <= self.n <= MAX_ARRAY_SIZE:
            raise ValueError(f"n must be in [2, {MAX_ARRAY_SIZE}], got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.init_rounds < 1:
            raise ValueError(f"init_rounds must be >= 1, got {self.init_rounds}")
        if self.iteration_cap < 1:
            raise ValueError("iteration_cap must be >= 1")
        bits = round_entropy_bits(self.n, self.m)
        if bits < 8:
            warnings.warn(
                f"n={self.n}, m={self.m} gives only {bits:.2f} bits of permutation "
                "entropy per output byte (< 8); raise m or n",
                ThinEntropyWarning,
                stacklevel=3,
            )


@dataclass(frozen=True, slots=True)
class DualSample:
    count_byte: int
    jitter_b: int
    raw_count: int
    raw_delta_ns: int


@dataclass
class Counters:
    sorts: int = 0
    permutations: int = 0
    bytes: int = 0

    @property
    def permutations_per_byte(self) -> float:
        return self.permutations / self.bytes if self.bytes else 0.0


class Engine:
    """Running generator state. Build one with :meth:`initialize`.

    Not thread-safe: timing measurements from two threads would interleave.
    """

    def __init__(self, cfg: EngineConfig, clock, gen: DrawSource | None = None):
        self.cfg = cfg
        self.clock = clock
        self.gen = gen if gen is not None else PadGenerator(cfg.static_seed)
        self.seed = 0
        self.arr = identity_array(cfg.n)
        self.counters = Counters()

    @classmethod
    def initialize(cls, cfg: EngineConfig | None = None, clock=None, gen: DrawSource | None = None) -> "Engine":
        """Seed the pad generator from ``init_rounds`` timing bytes.

        The generator starts from the static seed; the timing bytes of the
        initialization sorts are concatenated (first byte most significant)
        into the seed that replaces it.
        """
        if cfg is None:
            cfg = EngineConfig()
        if clock is None:
            from qpprng.clock import SystemClock

            clock = SystemClock()
        eng = cls(cfg, clock, gen)
        eng.gen.reseed(cfg.static_seed)
        seed = 0
        for _ in range(cfg.init_rounds):
            _, r, _ = eng._sort_round()
            seed = evolve_seed(seed, r)
        eng.seed = seed
        eng.gen.reseed(seed)
        return eng

    def _sort_round(self) -> tuple[int, int, int]:
        disorder(self.arr, self.gen)
        out = sort_by_random_permutations(self.arr, self.gen, self.clock, self.cfg.iteration_cap)
        self.counters.sorts += 1
        self.counters.permutations += out.count
        return out.count, jitter_byte(out.elapsed_ns, self.cfg.jitter), out.elapsed_ns

    def _evolving_round(self) -> DualSample:
        count, r, elapsed = self._sort_round()
        self.seed = evolve_seed(self.seed, r)
        self.gen.reseed(self.seed)
        return DualSample(count & 0xFF, r, count, elapsed)

    def next_byte(self) -> tuple[int, list[DualSample]]:
        """Run ``m`` rounds and return (sum of counts mod 256, the round samples)."""
        samples = [self._evolving_round() for _ in range(self.cfg.m)]
        self.counters.bytes += 1
        return sum(s.raw_count for s in samples) & 0xFF, samples

    def generate(self, length: int) -> bytes:
        if length < 0:
            raise ValueError("length must be >= 0")
        out = bytearray(length)
        for i in range(length):
            out[i] = self.next_byte()[0]
        return bytes(out)

    def capture_dual_streams(self, samples: int) -> tuple[bytes, bytes]:
        """Run ``samples`` rounds; return the count-byte and jitter-byte streams."""
        if samples < 0:
            raise ValueError("samples must be >= 0")
        counts = bytearray(samples)
        jitter = bytearray(samples)
        for i in range(samples):
            s = self._evolving_round()
            counts[i] = s.count_byte
            jitter[i] = s.jitter_b
        return bytes(counts), bytes(jitter)


def initialize(cfg: EngineConfig | None = None, clock=None, gen: DrawSource | None = None) -> Engine:
    return Engine.initialize(cfg, clock, gen)
