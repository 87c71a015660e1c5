"""Permutation machinery: the pad generator, Fisher-Yates pads, and the
counting sort loop whose iteration count is the raw randomness variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, MutableSequence, Protocol, Sequence

import numpy as np

from qpprng import _kernels

MASK64 = (1 << 64) - 1

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
DEFAULT_STATIC_SEED = 123456789
DEFAULT_ITERATION_CAP = 1 << 24
MAX_ARRAY_SIZE = 16


class IterationCapExceeded(RuntimeError):
    """A sort loop ran for ``cap`` shuffles without reaching sorted order."""

    def __init__(self, cap: int):
        super().__init__(f"array not sorted after {cap} permutations (iteration cap)")
        self.cap = cap


class DrawSource(Protocol):
    def draw(self) -> int: ...

    def reseed(self, seed: int) -> None: ...


@dataclass
class PadGenerator:
    """64-bit LCG that expands a seed into Fisher-Yates pads.

    Draws are the upper 32 bits of each new state; the low bits of a
    power-of-two-modulus LCG have short periods and would leave whole
    permutation classes unreachable.
    """

    state: int = DEFAULT_STATIC_SEED
    multiplier: int = LCG_MULTIPLIER
    increment: int = LCG_INCREMENT

    def __post_init__(self) -> None:
        self.state &= MASK64
        self.multiplier &= MASK64
        self.increment &= MASK64

    def next(self) -> int:
        return lcg_next(self)

    def draw(self) -> int:
        return lcg_next(self) >> 32

    def reseed(self, seed: int) -> None:
        self.state = seed & MASK64


class ScriptedDraws:
    """Replays a fixed list of draws; used to pin down shuffles in tests."""

    def __init__(self, draws: Iterable[int]):
        self._draws = list(draws)
        self._pos = 0
        self.seeds: list[int] = []

    def draw(self) -> int:
        if self._pos >= len(self._draws):
            raise IndexError("scripted draws exhausted")
        value = self._draws[self._pos]
        self._pos += 1
        return value

    def reseed(self, seed: int) -> None:
        # Scripted sources ignore seeding but keep a record of it.
        self.seeds.append(seed)

    @property
    def remaining(self) -> int:
        return len(self._draws) - self._pos


@dataclass(frozen=True)
class SortOutcome:
    count: int
    elapsed_ns: int


def lcg_next(gen: PadGenerator) -> int:
    """Advance ``gen`` by one affine step mod 2**64 and return the new state."""
    gen.state = (gen.multiplier * gen.state + gen.increment) & MASK64
    return gen.state


def identity_array(n: int) -> np.ndarray:
    if not 2 <= n <= MAX_ARRAY_SIZE:
        raise ValueError(f"array size must be in [2, {MAX_ARRAY_SIZE}], got {n}")
    return np.arange(n, dtype=np.int64)


def is_sorted(arr: Sequence[int]) -> bool:
    return all(arr[i] < arr[i + 1] for i in range(len(arr) - 1))


def _fast(arr, gen) -> bool:
    return isinstance(gen, PadGenerator) and isinstance(arr, np.ndarray) and arr.dtype == np.int64


def fisher_yates(arr: MutableSequence[int], gen: DrawSource) -> MutableSequence[int]:
    """Shuffle ``arr`` in place (for i = n-1 .. 1: swap i with draw % (i+1)).

    Consumes exactly ``len(arr) - 1`` draws and returns ``arr``.
    """
    if _fast(arr, gen):
        gen.state = int(
            _kernels.shuffle(arr, np.uint64(gen.state), np.uint64(gen.multiplier), np.uint64(gen.increment))
        )
        return arr
    for i in range(len(arr) - 1, 0, -1):
        j = gen.draw() % (i + 1)
        arr[i], arr[j] = arr[j], arr[i]
    return arr


def disorder(arr: MutableSequence[int], gen: DrawSource) -> MutableSequence[int]:
    """Shuffle once, repeating while the result happens to be sorted."""
    if len(arr) < 2:
        raise ValueError("cannot disorder an array with fewer than 2 elements")
    if _fast(arr, gen):
        gen.state = int(
            _kernels.disorder(arr, np.uint64(gen.state), np.uint64(gen.multiplier), np.uint64(gen.increment))
        )
        return arr
    fisher_yates(arr, gen)
    while is_sorted(arr):
        fisher_yates(arr, gen)
    return arr


def sort_by_random_permutations(
    arr: MutableSequence[int],
    gen: DrawSource,
    clock,
    cap: int = DEFAULT_ITERATION_CAP,
) -> SortOutcome:
    """Apply random pads to ``arr`` until it is sorted, counting the pads.

    Each pad permutes the current state of the array. The clock is read once
    before and once after the whole loop; simulated clocks are told how many
    permutations ran in between.

    Raises:
        IterationCapExceeded: if ``cap`` pads did not sort the array.
    """
    start = clock.now_ns()
    if _fast(arr, gen):
        count, state, ok = _kernels.sort_loop(
            arr, np.uint64(gen.state), np.uint64(gen.multiplier), np.uint64(gen.increment), cap
        )
        gen.state = int(state)
    else:
        count, ok = 0, True
        while not is_sorted(arr):
            if count >= cap:
                ok = False
                break
            fisher_yates(arr, gen)
            count += 1
    if not ok:
        raise IterationCapExceeded(cap)
    clock.advance(int(count))
    end = clock.now_ns()
    return SortOutcome(count=int(count), elapsed_ns=end - start)
