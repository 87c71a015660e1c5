"""Random bytes from the number of random permutations needed to re-sort
a small disordered array, with timing jitter steering the pad generator."""

from qpprng.clock import (
    ClockExhausted,
    ConstantClock,
    JitterConfig,
    ScriptedClock,
    SimulatedJitterClock,
    SystemClock,
    default_divisor,
    jitter_byte,
)
from qpprng.engine import DualSample, Engine, EngineConfig, ThinEntropyWarning, evolve_seed, initialize
from qpprng.permutation import (
    IterationCapExceeded,
    PadGenerator,
    ScriptedDraws,
    SortOutcome,
    fisher_yates,
    is_sorted,
    lcg_next,
    sort_by_random_permutations,
)
from qpprng.stats import Histogram256, InsufficientSamples, StatsReport, report

__version__ = "0.1.0"
