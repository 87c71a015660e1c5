"""Plain-integer reference for the full engine, used to derive frozen vectors.

Shares no code with the package: its own LCG, shuffle, sort loop and seed fold.
"""

M64 = 2**64


class RefLCG:
    A = 6364136223846793005
    C = 1442695040888963407

    def __init__(self, state):
        self.state = state % M64

    def step(self):
        self.state = (self.A * self.state + self.C) % M64
        return self.state

    def draw(self):
        return self.step() // 2**32


def ref_shuffle(a, lcg):
    for i in reversed(range(1, len(a))):
        j = lcg.draw() % (i + 1)
        a[i], a[j] = a[j], a[i]


def ref_sorted(a):
    return a == sorted(a) and len(set(a)) == len(a)


def ref_round(a, lcg, readings):
    """Disorder, sort, and return (count, delta) using two clock readings."""
    ref_shuffle(a, lcg)
    while ref_sorted(a):
        ref_shuffle(a, lcg)
    start = next(readings)
    count = 0
    while not ref_sorted(a):
        ref_shuffle(a, lcg)
        count += 1
    end = next(readings)
    return count, end - start


def ref_engine(readings, n=5, m=4, static_seed=123456789, divisor=1, init_rounds=8):
    """Generator of (output_byte, [(count, delta, r), ...]) from a reading iterator."""
    readings = iter(readings)
    a = list(range(n))
    lcg = RefLCG(static_seed)
    seed = 0
    for _ in range(init_rounds):
        _, delta = ref_round(a, lcg, readings)
        seed = (seed * 256 + (delta // divisor) % 256) % M64
    lcg = RefLCG(seed)
    state = {"seed": seed}

    def rounds():
        while True:
            count, delta = ref_round(a, lcg, readings)
            r = (delta // divisor) % 256
            state["seed"] = (state["seed"] * 256 + r) % M64
            lcg.state = state["seed"]
            yield count, delta, r

    it = rounds()

    def gen():
        while True:
            rs = [next(it) for _ in range(m)]
            yield sum(c for c, _, _ in rs) % 256, rs

    return gen(), it, state
