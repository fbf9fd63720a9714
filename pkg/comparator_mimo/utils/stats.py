import math
from dataclasses import dataclass
from typing import Sequence, Tuple


@dataclass(frozen=True)
class SampleSummary:
    """Mean and standard error of a sample, computed with compensated sums."""

    mean: float
    stderr: float
    n: int

    def confidence_interval(self, z: float = 1.96) -> Tuple[float, float]:
        """Normal-approximation confidence interval around the mean."""
        return (self.mean - z * self.stderr, self.mean + z * self.stderr)


def summarize(values: Sequence[float]) -> SampleSummary:
    """Summarize a sample. An empty sample yields NaN mean and zero stderr."""
    n = len(values)
    if n == 0:
        return SampleSummary(mean=float("nan"), stderr=0.0, n=0)
    mean = math.fsum(values) / n
    if n == 1:
        return SampleSummary(mean=mean, stderr=0.0, n=1)
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return SampleSummary(mean=mean, stderr=math.sqrt(variance / n), n=n)
