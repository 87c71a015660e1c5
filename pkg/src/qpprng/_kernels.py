"""Compiled inner loops for the LCG-driven shuffle and the sort-by-permutation loop.

All state arguments are ``np.uint64``; mixing signed and unsigned 64-bit
integers under numba silently promotes to float64, so callers must convert.
"""

import numpy as np
from numba import njit

_SHIFT = np.uint64(32)
_ONE = np.uint64(1)


@njit(cache=True)
def shuffle(arr, state, mult, inc):
    """One Fisher-Yates pass over ``arr`` in place; returns the advanced LCG state."""
    for i in range(arr.size - 1, 0, -1):
        state = state * mult + inc
        j = (state >> _SHIFT) % np.uint64(i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp
    return state


@njit(cache=True)
def is_sorted(arr):
    for i in range(arr.size - 1):
        if arr[i] >= arr[i + 1]:
            return False
    return True


@njit(cache=True)
def disorder(arr, state, mult, inc):
    # n >= 2 is checked by the caller, otherwise this never terminates
    state = shuffle(arr, state, mult, inc)
    while is_sorted(arr):
        state = shuffle(arr, state, mult, inc)
    return state


@njit(cache=True)
def sort_loop(arr, state, mult, inc, cap):
    """Shuffle until sorted.

    Returns ``(count, state, ok)``; ``ok`` is False when ``cap`` shuffles ran
    without reaching sorted order.
    """
    count = 0
    while not is_sorted(arr):
        if count >= cap:
            return count, state, False
        state = shuffle(arr, state, mult, inc)
        count += 1
    return count, state, True
