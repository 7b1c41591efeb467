"""Frequency-spectrum augmentations over labeled image batches.

The ops here exchange frequency content between images. The paired
variants blur each image into a low-frequency part plus a residual and
recombine one image's low frequencies with another's residual, chosen
by a random permutation of the batch; labels always stay with the image
that donated the low-frequency (or phase) content, so output label i
equals input label i. The single-image variants build two photometric
views of one image and swap frequency content between the views. The
"pp" variants additionally re-randomize the amplitude spectrum of the
low-frequency part while keeping its phase, pushing the model further
toward phase-driven content.

All stochastic ops draw from an explicit numpy Generator; given the
same batch, config, and generator state the output bits are identical.
Deterministic ``*_apply`` companions take the sampled choices (the
permutations, chains, and mix flag) as arguments so a fixed choice can
be replayed or forced directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .photo_ops import OpChain, apply_chain, sample_chain
from .spectral import GaussianKernel, Spectrum, decompose, dft2, gaussian_kernel, idft2

__all__ = [
    "MODES",
    "AugmentConfig",
    "LabeledBatch",
    "make_rng",
    "bernoulli_gate",
    "apr_p",
    "apr_s",
    "apr_s_apply",
    "apr_p_apply",
    "ha_p",
    "ha_p_apply",
    "ha_s",
    "ha_s_apply",
    "ha_pp_p",
    "ha_pp_p_apply",
    "ha_pp_s",
    "ha_pp_s_apply",
    "augment_batch",
]

MODES = (
    "apr_s",
    "apr_p",
    "ha_s",
    "ha_p",
    "ha_pp_s",
    "ha_pp_p",
    "ha_ps",
    "ha_pp_ps",
    "apr_ps",
)

_SEED_CAP = 2**63


@dataclass(frozen=True)
class AugmentConfig:
    """Shared knobs for every augmentation mode.

    ``kernel_size``/``sigma`` set the low-pass cut-off. ``p_paired``
    gates whole-batch paired augmentation, ``p_single`` gates each
    single-image augmentation (and picks the view whose low frequencies
    survive in ha_s / ha_pp_s), and ``p_inner_apr`` gates the nested
    amplitude swap of the pp variants.
    """

    kernel_size: int = 3
    sigma: float = 0.5
    p_paired: float = 0.6
    p_single: float = 0.5
    p_inner_apr: float = 0.6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ValueError(f"kernel_size must be an odd positive integer, got {self.kernel_size}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        for name in ("p_paired", "p_single", "p_inner_apr"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a non-negative 64-bit integer, got {self.seed}")

    def kernel(self) -> GaussianKernel:
        return _cached_kernel(self.kernel_size, self.sigma)


@lru_cache(maxsize=64)
def _cached_kernel(size: int, sigma: float) -> GaussianKernel:
    return gaussian_kernel(size, sigma)


@dataclass(eq=False)
class LabeledBatch:
    """A stack of same-shaped images plus one integer label per image."""

    images: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        self.images = np.asarray(self.images, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.ndim != 4 or self.images.shape[0] == 0:
            raise ValueError(f"images must be a non-empty (N, H, W, C) stack, got shape {self.images.shape}")
        if self.labels.shape != (self.images.shape[0],):
            raise ValueError(
                f"labels must be one per image, got {self.labels.shape} for {self.images.shape[0]} images"
            )
        if not np.isfinite(self.images).all():
            raise ValueError("images must be finite")

    def __len__(self) -> int:
        return int(self.images.shape[0])


def make_rng(*key: int) -> np.random.Generator:
    """Generator for an integer key tuple; equal keys give equal streams."""
    if not key:
        raise ValueError("make_rng needs at least one integer key")
    return np.random.default_rng(np.random.SeedSequence(tuple(int(k) for k in key)))


def bernoulli_gate(rng: np.random.Generator, p: float) -> bool:
    """One uniform draw against ``p``; never fires at 0, always at 1."""
    return float(rng.random()) < p


def _check_permutation(perm: np.ndarray, n: int, what: str) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError(f"{what} must be a permutation of range({n})")
    return perm


def apr_p(x_i: np.ndarray, x_z: np.ndarray) -> np.ndarray:
    """Rebuild ``x_i`` with its own phase but the amplitude spectrum of ``x_z``."""
    x_i = np.asarray(x_i)
    x_z = np.asarray(x_z)
    if x_i.shape != x_z.shape:
        raise ValueError(f"images must share a shape, got {x_i.shape} and {x_z.shape}")
    phase_spec = dft2(x_i)
    amp_spec = dft2(x_z)
    mixed = Spectrum(amplitude=amp_spec.amplitude, phase=phase_spec.phase)
    return idft2(mixed).astype(np.float32)


def apr_s_apply(x: np.ndarray, chain_a: OpChain, chain_b: OpChain) -> np.ndarray:
    """Amplitude swap between two fixed photometric views of one image.

    Phase comes from the ``chain_a`` view, amplitude from the
    ``chain_b`` view.
    """
    return apr_p(apply_chain(x, chain_a), apply_chain(x, chain_b))


def apr_s(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample two op chains and amplitude-swap the resulting views."""
    chain_a = sample_chain(rng)
    chain_b = sample_chain(rng)
    return apr_s_apply(x, chain_a, chain_b)


def apr_p_apply(batch: LabeledBatch, perm: np.ndarray) -> LabeledBatch:
    """Pairwise amplitude swap across a batch under a fixed permutation.

    Image i keeps its phase and labels[i]; amplitude comes from image
    perm[i].
    """
    n = len(batch)
    perm = _check_permutation(perm, n, "perm")
    donors = batch.images[perm]
    mixed = np.stack([apr_p(batch.images[i], donors[i]) for i in range(n)])
    return LabeledBatch(images=mixed, labels=batch.labels.copy())


def ha_p_apply(batch: LabeledBatch, kernel: GaussianKernel, perm: np.ndarray) -> LabeledBatch:
    """Keep each image's low frequencies, take residuals from image perm[i]."""
    n = len(batch)
    perm = _check_permutation(perm, n, "perm")
    parts = decompose(batch.images, kernel)
    return LabeledBatch(images=parts.lf + parts.hf[perm], labels=batch.labels.copy())


def ha_p(batch: LabeledBatch, config: AugmentConfig, rng: np.random.Generator) -> LabeledBatch:
    """Gated paired low/high swap; the whole batch augments or passes through."""
    if not bernoulli_gate(rng, config.p_paired):
        return batch
    perm = rng.permutation(len(batch))
    return ha_p_apply(batch, config.kernel(), perm)


def ha_pp_p_apply(
    batch: LabeledBatch,
    kernel: GaussianKernel,
    perm: np.ndarray,
    inner_perm: np.ndarray | None = None,
) -> LabeledBatch:
    """Paired low/high swap with an optional nested amplitude swap.

    When ``inner_perm`` is given, each low-frequency part first trades
    its amplitude spectrum with the low-frequency part of image
    inner_perm[i] (phase kept) before the residual of image perm[i] is
    added back.
    """
    n = len(batch)
    perm = _check_permutation(perm, n, "perm")
    parts = decompose(batch.images, kernel)
    lf = parts.lf
    if inner_perm is not None:
        inner_perm = _check_permutation(inner_perm, n, "inner_perm")
        donors = lf[inner_perm]
        lf = np.stack([apr_p(lf[i], donors[i]) for i in range(n)])
    return LabeledBatch(images=lf + parts.hf[perm], labels=batch.labels.copy())


def ha_pp_p(batch: LabeledBatch, config: AugmentConfig, rng: np.random.Generator) -> LabeledBatch:
    """Gated paired swap with a nested, separately gated amplitude swap."""
    if not bernoulli_gate(rng, config.p_paired):
        return batch
    perm = rng.permutation(len(batch))
    inner_perm = None
    if bernoulli_gate(rng, config.p_inner_apr):
        inner_perm = rng.permutation(len(batch))
    return ha_pp_p_apply(batch, config.kernel(), perm, inner_perm)


def ha_s_apply(
    x: np.ndarray,
    kernel: GaussianKernel,
    chain_a: OpChain,
    chain_b: OpChain,
    lf_from_b: bool,
) -> np.ndarray:
    """Swap frequency content between two fixed views of one image."""
    parts_a = decompose(apply_chain(x, chain_a), kernel)
    parts_b = decompose(apply_chain(x, chain_b), kernel)
    if lf_from_b:
        return parts_b.lf + parts_a.hf
    return parts_a.lf + parts_b.hf


def ha_s(x: np.ndarray, config: AugmentConfig, rng: np.random.Generator) -> np.ndarray:
    """Gated single-image swap between two sampled photometric views."""
    if not bernoulli_gate(rng, config.p_single):
        return np.asarray(x, dtype=np.float32)
    chain_a = sample_chain(rng)
    chain_b = sample_chain(rng)
    lf_from_b = bernoulli_gate(rng, config.p_single)
    return ha_s_apply(x, config.kernel(), chain_a, chain_b, lf_from_b)


def ha_pp_s_apply(
    x: np.ndarray,
    kernel: GaussianKernel,
    chain_a: OpChain,
    chain_b: OpChain,
    inner_a: tuple[OpChain, OpChain] | None,
    inner_b: tuple[OpChain, OpChain] | None,
    lf_from_b: bool,
) -> np.ndarray:
    """Single-image swap whose low-frequency parts may be amplitude-mixed.

    ``inner_a``/``inner_b`` each hold the two chains of a nested
    amplitude swap applied to that view's low-frequency part, or None to
    leave it untouched.
    """
    parts_a = decompose(apply_chain(x, chain_a), kernel)
    parts_b = decompose(apply_chain(x, chain_b), kernel)
    lf_a = parts_a.lf if inner_a is None else apr_s_apply(parts_a.lf, *inner_a)
    lf_b = parts_b.lf if inner_b is None else apr_s_apply(parts_b.lf, *inner_b)
    if lf_from_b:
        return lf_b + parts_a.hf
    return lf_a + parts_b.hf


def ha_pp_s(x: np.ndarray, config: AugmentConfig, rng: np.random.Generator) -> np.ndarray:
    """Gated single-image swap with nested amplitude swaps on each view."""
    if not bernoulli_gate(rng, config.p_single):
        return np.asarray(x, dtype=np.float32)
    chain_a = sample_chain(rng)
    chain_b = sample_chain(rng)
    inner_a = None
    if bernoulli_gate(rng, config.p_inner_apr):
        inner_a = (sample_chain(rng), sample_chain(rng))
    inner_b = None
    if bernoulli_gate(rng, config.p_inner_apr):
        inner_b = (sample_chain(rng), sample_chain(rng))
    lf_from_b = bernoulli_gate(rng, config.p_single)
    return ha_pp_s_apply(x, config.kernel(), chain_a, chain_b, inner_a, inner_b, lf_from_b)


_PAIRED_STAGE = {
    "apr_p": "apr",
    "apr_ps": "apr",
    "ha_p": "ha",
    "ha_ps": "ha",
    "ha_pp_p": "ha_pp",
    "ha_pp_ps": "ha_pp",
}

_SINGLE_STAGE = {
    "apr_s": "apr",
    "apr_ps": "apr",
    "ha_s": "ha",
    "ha_ps": "ha",
    "ha_pp_s": "ha_pp",
    "ha_pp_ps": "ha_pp",
}


def _paired_pass(batch: LabeledBatch, kind: str, config: AugmentConfig, rng: np.random.Generator) -> LabeledBatch:
    if kind == "ha":
        return ha_p(batch, config, rng)
    if kind == "ha_pp":
        return ha_pp_p(batch, config, rng)
    if not bernoulli_gate(rng, config.p_paired):
        return batch
    return apr_p_apply(batch, rng.permutation(len(batch)))


def _single_pass(batch: LabeledBatch, kind: str, config: AugmentConfig, rng: np.random.Generator) -> LabeledBatch:
    # One derived stream per image, seeded up front, so results do not
    # depend on evaluation order.
    seeds = rng.integers(0, _SEED_CAP, size=len(batch))
    out = np.empty_like(batch.images)
    for i in range(len(batch)):
        sub = np.random.default_rng(int(seeds[i]))
        x = batch.images[i]
        if kind == "ha":
            out[i] = ha_s(x, config, sub)
        elif kind == "ha_pp":
            out[i] = ha_pp_s(x, config, sub)
        else:
            out[i] = apr_s(x, sub) if bernoulli_gate(sub, config.p_single) else x
    return LabeledBatch(images=out, labels=batch.labels.copy())


def augment_batch(
    batch: LabeledBatch,
    mode: str,
    config: AugmentConfig,
    rng: np.random.Generator,
) -> LabeledBatch:
    """Run one of the nine augmentation modes over a batch.

    The paired modes (``*_p``) act on the whole batch at once; the
    single modes (``*_s``) act per image with independent derived
    streams; the combined modes (``*_ps``) run the paired pass first and
    the single pass on its output. Labels are returned in input order
    for every mode.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    out = batch
    paired = _PAIRED_STAGE.get(mode)
    if paired is not None:
        out = _paired_pass(out, paired, config, rng)
    single = _SINGLE_STAGE.get(mode)
    if single is not None:
        out = _single_pass(out, single, config, rng)
    if out is batch:
        out = LabeledBatch(images=batch.images.copy(), labels=batch.labels.copy())
    return out
