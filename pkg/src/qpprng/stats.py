"""Byte-stream quality metrics: Shannon entropy, most-common-value
min-entropy (the SP 800-90B IID-track estimator) and chi-square.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

MCV_Z = 2.576
MIN_EXPECTED_PER_BIN = 5
MIN_REPORT_SAMPLES = 256 * MIN_EXPECTED_PER_BIN


class InsufficientSamples(ValueError):
    pass


class EmptyHistogram(InsufficientSamples):
    pass


@dataclass(frozen=True)
class Histogram256:
    counts: np.ndarray

    def __post_init__(self):
        if self.counts.shape != (256,):
            raise ValueError("histogram must have exactly 256 bins")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_counts(cls, counts) -> "Histogram256":
        return cls(np.asarray(counts, dtype=np.uint64))


def histogram(data) -> Histogram256:
    """Count occurrences of each byte value in ``data`` (bytes-like or uint8 array)."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
    return Histogram256(np.bincount(arr, minlength=256).astype(np.uint64))


def shannon_entropy(h: Histogram256) -> float:
    total = h.total
    if total < 1:
        raise EmptyHistogram("Shannon entropy of an empty histogram is undefined")
    nz = h.counts[h.counts > 0].astype(np.float64)
    p = nz / total
    return float(max(0.0, -(p * np.log2(p)).sum()))


def mcv_min_entropy(h: Histogram256) -> float:
    """-log2 of the 99% upper confidence bound on the most common value's probability."""
    total = h.total
    if total < 2:
        raise InsufficientSamples(f"MCV estimate needs at least 2 samples, got {total}")
    p_hat = int(h.counts.max()) / total
    p_u = min(1.0, p_hat + MCV_Z * math.sqrt(p_hat * (1.0 - p_hat) / (total - 1)))
    return max(0.0, -math.log2(p_u))


def chi_square(h: Histogram256, min_samples: int = MIN_REPORT_SAMPLES) -> float:
    """Pearson statistic against the uniform distribution over 256 values.

    Below ``min_samples`` (5 expected per bin by default) the statistic is not
    chi-square distributed and InsufficientSamples is raised.
    """
    total = h.total
    if total < max(min_samples, 1):
        raise InsufficientSamples(
            f"chi-square needs at least {min_samples} samples "
            f"({MIN_EXPECTED_PER_BIN} expected per bin), got {total}"
        )
    expected = total / 256
    obs = h.counts.astype(np.float64)
    return float(((obs - expected) ** 2).sum() / expected)


@dataclass(frozen=True)
class StatsReport:
    shannon_bits: float
    min_entropy_bits: float
    chi_square: float
    sample_count: int

    def to_kv(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items())

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def to_text(self) -> str:
        return (
            f"samples          {self.sample_count}\n"
            f"Shannon entropy  {self.shannon_bits:.6f} bits/byte\n"
            f"min-entropy MCV  {self.min_entropy_bits:.6f} bits/byte\n"
            f"chi-square       {self.chi_square:.2f} (255 degrees of freedom)\n"
        )

    @classmethod
    def from_kv(cls, text: str) -> "StatsReport":
        fields = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        return cls(
            shannon_bits=float(fields["shannon_bits"]),
            min_entropy_bits=float(fields["min_entropy_bits"]),
            chi_square=float(fields["chi_square"]),
            sample_count=int(fields["sample_count"]),
        )


def report(data) -> StatsReport:
    h = data if isinstance(data, Histogram256) else histogram(data)
    if h.total < MIN_REPORT_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_REPORT_SAMPLES} bytes, got {h.total}")
    return StatsReport(
        shannon_bits=shannon_entropy(h),
        min_entropy_bits=mcv_min_entropy(h),
        chi_square=chi_square(h),
        sample_count=h.total,
    )
