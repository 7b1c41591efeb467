"""Robustness metrics: per-corruption error ratios, their mean, plain
accuracy, and a rank-based separability score for OOD detection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CORRUPTION_CATEGORIES",
    "CORRUPTIONS",
    "SEVERITIES",
    "MetricsError",
    "MissingDataError",
    "DegenerateReferenceError",
    "CorruptionErrorTable",
    "ScoreSet",
    "corruption_error",
    "mce",
    "accuracy",
    "auroc",
]

CORRUPTION_CATEGORIES: dict[str, tuple[str, ...]] = {
    "noise": ("gaussian_noise", "shot_noise", "impulse_noise"),
    "blur": ("defocus_blur", "glass_blur", "motion_blur", "zoom_blur"),
    "weather": ("snow", "frost", "fog", "brightness"),
    "digital": ("contrast", "elastic_transform", "pixelate", "jpeg_compression"),
}

CORRUPTIONS: tuple[str, ...] = tuple(
    name for names in CORRUPTION_CATEGORIES.values() for name in names
)

SEVERITIES: tuple[int, ...] = (1, 2, 3, 4, 5)


class MetricsError(ValueError):
    """Base class for metric computation failures."""


class MissingDataError(MetricsError):
    """A corruption/severity cell required by the metric is absent."""


class DegenerateReferenceError(MetricsError):
    """The reference errors for a corruption sum to zero."""


@dataclass(eq=False)
class CorruptionErrorTable:
    """Top-1 error rates keyed by (corruption name, severity 1..5)."""

    entries: dict[tuple[str, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[tuple[str, int], float] = {}
        for key, value in self.entries.items():
            name, severity = key
            severity = int(severity)
            if name not in CORRUPTIONS:
                raise ValueError(f"unknown corruption {name!r}")
            if severity not in SEVERITIES:
                raise ValueError(f"severity must be 1..5, got {severity}")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"error rate must lie in [0, 1], got {value} for {key}")
            if (name, severity) in clean:
                raise ValueError(f"duplicate entry for {key}")
            clean[(name, severity)] = value
        self.entries = clean

    def get(self, corruption: str, severity: int) -> float | None:
        return self.entries.get((corruption, int(severity)))

    def severity_errors(self, corruption: str) -> list[float]:
        """All five severity errors for one corruption, or raise."""
        missing = [s for s in SEVERITIES if (corruption, s) not in self.entries]
        if missing:
            raise MissingDataError(
                f"corruption {corruption!r} is missing severities {missing}"
            )
        return [self.entries[(corruption, s)] for s in SEVERITIES]


def corruption_error(
    model: CorruptionErrorTable,
    reference: CorruptionErrorTable,
    corruption: str,
) -> float:
    """Severity-summed model error divided by the reference's same sum."""
    if corruption not in CORRUPTIONS:
        raise ValueError(f"unknown corruption {corruption!r}")
    model_sum = sum(model.severity_errors(corruption))
    reference_sum = sum(reference.severity_errors(corruption))
    if reference_sum == 0.0:
        raise DegenerateReferenceError(
            f"reference errors for {corruption!r} sum to zero"
        )
    return model_sum / reference_sum


def mce(model: CorruptionErrorTable, reference: CorruptionErrorTable) -> float:
    """Unweighted mean of the per-corruption error ratios over all 15."""
    ratios = [corruption_error(model, reference, name) for name in CORRUPTIONS]
    return sum(ratios) / len(ratios)


def accuracy(predictions, truths) -> float:
    """Fraction of positions where prediction equals truth."""
    predictions = np.asarray(predictions)
    truths = np.asarray(truths)
    if predictions.ndim != 1 or predictions.shape != truths.shape:
        raise ValueError(
            f"predictions and truths must be equal-length 1D sequences, "
            f"got {predictions.shape} and {truths.shape}"
        )
    if predictions.size == 0:
        raise ValueError("cannot score an empty prediction list")
    return float(np.mean(predictions == truths))


@dataclass(eq=False)
class ScoreSet:
    """Detector scores for in-distribution and out-of-distribution inputs.

    Higher scores are read as more in-distribution.
    """

    in_distribution: np.ndarray
    out_of_distribution: np.ndarray

    def __post_init__(self) -> None:
        self.in_distribution = np.asarray(self.in_distribution, dtype=np.float64)
        self.out_of_distribution = np.asarray(self.out_of_distribution, dtype=np.float64)
        for name, arr in (
            ("in_distribution", self.in_distribution),
            ("out_of_distribution", self.out_of_distribution),
        ):
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError(f"{name} scores must be a non-empty 1D sequence")
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} scores must be finite")


def auroc(scores: ScoreSet) -> float:
    """Probability a random in-distribution score outranks an OOD one.

    Computed as the normalized Mann-Whitney statistic: pairs that tie
    count one half.
    """
    ood_sorted = np.sort(scores.out_of_distribution)
    below = np.searchsorted(ood_sorted, scores.in_distribution, side="left")
    below_or_equal = np.searchsorted(ood_sorted, scores.in_distribution, side="right")
    wins = float(np.sum(below))
    ties = float(np.sum(below_or_equal - below))
    pairs = scores.in_distribution.size * scores.out_of_distribution.size
    return (wins + 0.5 * ties) / pairs
