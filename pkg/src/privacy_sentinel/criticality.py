"""Criticality index over the five-level consequence scale.

Given the per-level report counts of an incident, this module computes the
normalized severity estimate (0 = all reports insignificant, 1 = all
catastrophic), its variance, a normal-approximation confidence interval and
the conservative severity score used for warning decisions (the interval's
upper bound).

The variance uses the normalization 1/(n*(K-1)). That is deliberately the
form the reference worked values were produced with; it is (K-1) times the
asymptotic sampling variance of the estimator, so the resulting intervals are
conservative (wider than nominal). See the acceptance suite for the exact
consequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from statistics import NormalDist

from .errors import InsufficientEvidenceError, ValidationError
from .model import SCALE_SIZE, ConsequenceLevel


@dataclass(frozen=True)
class ConsequenceFrequency:
    """Per-level report counts, ordered catastrophic -> insignificant."""

    counts: tuple[int, int, int, int, int]

    def __post_init__(self):
        if len(self.counts) != SCALE_SIZE:
            raise ValidationError(
                f"expected {SCALE_SIZE} counts, got {len(self.counts)}"
            )
        for c in self.counts:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise ValidationError(f"counts must be non-negative integers, got {c!r}")
        object.__setattr__(self, "counts", tuple(self.counts))

    @classmethod
    def of(cls, *counts: int) -> "ConsequenceFrequency":
        return cls(tuple(counts))

    @classmethod
    def zero(cls) -> "ConsequenceFrequency":
        return cls((0, 0, 0, 0, 0))

    @property
    def n(self) -> int:
        return sum(self.counts)

    def count(self, level: ConsequenceLevel) -> int:
        return self.counts[level.rank - 1]

    def incremented(self, level: ConsequenceLevel) -> "ConsequenceFrequency":
        counts = list(self.counts)
        counts[level.rank - 1] += 1
        return ConsequenceFrequency(tuple(counts))


@dataclass(frozen=True)
class CriticalityResult:
    """Full severity assessment for one evidence cell."""

    point: float
    variance: float
    std_dev: float
    ci_lower: float
    ci_upper: float
    alpha: float
    n: int

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "variance": self.variance,
            "std_dev": self.std_dev,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "alpha": self.alpha,
            "n": self.n,
        }


def _require_evidence(freq: ConsequenceFrequency) -> int:
    n = freq.n
    if n < 1:
        raise InsufficientEvidenceError(
            "no consequence reports recorded; severity is undefined"
        )
    return n


def empirical_cdf(freq: ConsequenceFrequency) -> tuple[float, ...]:
    """Cumulative proportion of reports at or above each severity rank.

    Non-decreasing, and exactly 1.0 at the last rank.
    """
    n = _require_evidence(freq)
    out = []
    cum = 0
    for c in freq.counts:
        cum += c
        out.append(cum / n)
    return tuple(out)


def criticality_estimate(freq: ConsequenceFrequency) -> float:
    """Point estimate of the severity index, in [0, 1]."""
    cdf = empirical_cdf(freq)
    return (sum(cdf) - 1.0) / (SCALE_SIZE - 1)


def criticality_variance(freq: ConsequenceFrequency) -> float:
    """Variance of the index estimate, normalized by 1/(n*(K-1)).

    Keeping that normalization reproduces the reference interval values
    exactly; it is (K-1) times the asymptotic sampling variance.
    """
    n = _require_evidence(freq)
    k_max = SCALE_SIZE
    p = [c / n for c in freq.counts]
    spread = 0.0
    cross = 0.0
    for k in range(1, k_max):  # ranks 1..K-1; rank K has weight 0
        pk = p[k - 1]
        spread += (k_max - k) ** 2 * pk * (1.0 - pk)
        inner = sum((k_max - l) * p[l - 1] for l in range(1, k))
        cross += (k_max - k) * pk * inner
    var = (spread - 2.0 * cross) / (n * (k_max - 1))
    # guard against tiny negative round-off when all mass sits in one level
    return max(var, 0.0)


def criticality_std_dev(freq: ConsequenceFrequency) -> float:
    return math.sqrt(criticality_variance(freq))


@lru_cache(maxsize=32)
def z_score(alpha: float) -> float:
    """Two-sided standard-normal quantile for significance level ``alpha``."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha!r}")
    return NormalDist().inv_cdf(1.0 - alpha / 2.0)


def confidence_interval(
    freq: ConsequenceFrequency, alpha: float = 0.05
) -> tuple[float, float]:
    """Normal-approximation interval for the index, clamped into [0, 1]."""
    z = z_score(alpha)
    point = criticality_estimate(freq)
    half = z * criticality_std_dev(freq)
    return (max(point - half, 0.0), min(point + half, 1.0))


def severity_score(freq: ConsequenceFrequency, alpha: float = 0.05) -> float:
    """Conservative severity: the upper confidence bound."""
    return confidence_interval(freq, alpha)[1]


def criticality_result(
    freq: ConsequenceFrequency, alpha: float = 0.05
) -> CriticalityResult:
    z = z_score(alpha)
    n = _require_evidence(freq)
    point = criticality_estimate(freq)
    var = criticality_variance(freq)
    sd = math.sqrt(var)
    return CriticalityResult(
        point=point,
        variance=var,
        std_dev=sd,
        ci_lower=max(point - z * sd, 0.0),
        ci_upper=min(point + z * sd, 1.0),
        alpha=alpha,
        n=n,
    )


def true_index(probabilities) -> float:
    """Closed-form index for an exact consequence distribution.

    Equivalent to the point estimate with the given probabilities as the
    observed proportions; used as ground truth in simulations.
    """
    probs = list(probabilities)
    if len(probs) != SCALE_SIZE:
        raise ValidationError(f"expected {SCALE_SIZE} probabilities")
    total = math.fsum(probs)
    if total <= 0 or abs(total - 1.0) > 1e-9:
        raise ValidationError("probabilities must sum to 1")
    k_max = SCALE_SIZE
    return sum((k_max - k) * probs[k - 1] for k in range(1, k_max + 1)) / (k_max - 1)
