import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qpprng.stats import (
    EmptyHistogram,
    Histogram256,
    InsufficientSamples,
    StatsReport,
    chi_square,
    histogram,
    mcv_min_entropy,
    report,
    shannon_entropy,
)

CYCLE = bytes(range(256))


def _one_hot(value, total):
    counts = np.zeros(256, dtype=np.uint64)
    counts[value] = total
    return Histogram256(counts)


def test_histogram_basics():
    h = histogram(b"")
    assert h.total == 0 and not h.counts.any()
    h = histogram(bytes([7, 7, 7]))
    assert h.counts[7] == 3 and h.total == 3 and h.counts.sum() == 3
    assert (histogram(CYCLE * 9).counts == 9).all()


def test_histogram_rejects_wrong_shape():
    with pytest.raises(ValueError):
        Histogram256(np.zeros(10, dtype=np.uint64))


def test_shannon_exact_cases():
    assert shannon_entropy(histogram(CYCLE * 3)) == 8.0
    assert shannon_entropy(histogram(bytes([1, 2] * 50))) == 1.0
    assert shannon_entropy(histogram(bytes(10))) == 0.0
    with pytest.raises(EmptyHistogram):
        shannon_entropy(histogram(b""))


def test_shannon_finite_sample_bias():
    # Miller: E[H_hat] ~ 8 - 255 / (2 ln2 N) for uniform bytes
    data = np.random.default_rng(7).integers(0, 256, size=1_000_000, dtype=np.uint8)
    expected = 8 - 255 / (2 * math.log(2) * 1_000_000)
    assert abs(expected - 7.99982) < 1e-5
    assert abs(shannon_entropy(histogram(data)) - expected) < 2e-4


def test_mcv_degenerate():
    assert mcv_min_entropy(_one_hot(3, 1000)) == 0.0


def test_mcv_known_value():
    counts = np.zeros(256, dtype=np.uint64)
    counts[0] = 8
    counts[1:125] = 8  # 125 bins of 8 = 1000
    h = Histogram256(counts)
    assert h.total == 1000
    mpmath.mp.dps = 40
    p = mpmath.mpf(8) / 1000
    oracle = -mpmath.log(p + mpmath.mpf("2.576") * mpmath.sqrt(p * (1 - p) / 999), 2)
    assert mcv_min_entropy(h) == pytest.approx(float(oracle), abs=1e-12)
    assert mcv_min_entropy(h) == pytest.approx(6.0340580443869574, abs=1e-12)


def test_mcv_needs_two_samples():
    with pytest.raises(InsufficientSamples):
        mcv_min_entropy(histogram(b"\x01"))


def test_chi_square_exact_cases():
    assert chi_square(histogram(CYCLE * 5)) == 0.0
    assert chi_square(_one_hot(0, 256 * 5)) == pytest.approx(255**2 * 5 + 255 * 5)


def test_chi_square_single_bin_256():
    # 255^2 / 1 + 255 * 1^2 / 1
    assert chi_square(_one_hot(0, 256), min_samples=0) == 65280
    with pytest.raises(InsufficientSamples):
        chi_square(_one_hot(0, 256))


def test_chi_square_floor():
    with pytest.raises(InsufficientSamples):
        chi_square(histogram(bytes(1279)))


def test_chi_square_uniform_random():
    data = np.random.default_rng(8).integers(0, 256, size=1_000_000, dtype=np.uint8)
    assert 180 <= chi_square(histogram(data)) <= 345


def test_report_cases():
    rep = report(CYCLE * 5)
    assert rep.shannon_bits == 8.0 and rep.chi_square == 0.0 and rep.sample_count == 1280
    rep = report(bytes(1280))
    assert rep.shannon_bits == 0.0 and rep.min_entropy_bits == 0.0
    with pytest.raises(InsufficientSamples):
        report(bytes(1279))


def test_report_serialization_round_trip():
    rep = report(CYCLE * 7 + bytes(100))
    assert StatsReport.from_kv(rep.to_kv()) == rep
    assert "shannon_bits=" in rep.to_kv()
    assert "chi-square" in rep.to_text()


counts_strategy = arrays(np.uint64, 256, elements=st.integers(0, 5000))


@given(counts_strategy)
@settings(max_examples=200)
def test_metric_ordering(counts):
    h = Histogram256(counts)
    if h.total < 2:
        return
    assert 0 <= mcv_min_entropy(h) <= shannon_entropy(h) + 1e-9 <= 8 + 1e-9


def _skewed_bytes(seed, length, alpha):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.full(256, alpha))
    return rng.choice(256, size=length, p=p).astype(np.uint8).tobytes()


skewed = st.builds(
    _skewed_bytes, st.integers(0, 2**32), st.integers(1280, 5000), st.sampled_from([0.05, 1.0, 50.0])
)


@given(skewed, st.integers(0, 2**32))
@settings(max_examples=50)
def test_permutation_invariance(data, seed):
    shuffled = np.random.default_rng(seed).permutation(np.frombuffer(data, dtype=np.uint8)).tobytes()
    assert report(data) == report(shuffled)


@given(skewed)
@settings(max_examples=50)
def test_duplication(data):
    a, b = report(data), report(data * 2)
    assert b.shannon_bits == pytest.approx(a.shannon_bits, abs=1e-12)
    assert b.chi_square == pytest.approx(2 * a.chi_square)
    assert report(CYCLE * 10).chi_square == 0.0


@given(counts_strategy, st.integers(0, 255))
@settings(max_examples=100)
def test_mcv_monotone_in_max_bin(counts, donor):
    h = Histogram256(counts)
    top = int(np.argmax(counts))
    if h.total < 2 or donor == top or counts[donor] == 0:
        return
    moved = counts.copy()
    moved[donor] -= 1
    moved[top] += 1
    assert mcv_min_entropy(Histogram256(moved)) <= mcv_min_entropy(h) + 1e-12
