"""Frequency-domain primitives: gaussian kernels, separable low-pass
filtering, low/high-frequency image decomposition, and per-channel 2D
DFT helpers.

Images are (H, W, C) row-major float arrays; the filtering helpers also
accept batched (..., H, W, C) stacks. Filtering and spectral arithmetic
run in float64 internally. Image-valued results come back in the input
dtype; spectra are always float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GaussianKernel",
    "FrequencyDecomposition",
    "Spectrum",
    "gaussian_kernel",
    "low_pass",
    "decompose",
    "dft2",
    "idft2",
]


@dataclass(frozen=True, eq=False)
class GaussianKernel:
    """Normalized, symmetric 1D gaussian tap weights."""

    size: int
    sigma: float
    weights: np.ndarray


def gaussian_kernel(size: int, sigma: float) -> GaussianKernel:
    """Sample a gaussian at integer offsets from the kernel center.

    ``weights[i]`` is proportional to ``exp(-d^2 / (2 sigma^2))`` with
    ``d = i - (size - 1) / 2``; the weights are normalized to sum to 1.
    ``size`` must be an odd positive integer and ``sigma`` positive.
    """
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be an odd positive integer, got {size}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    w = np.exp(-(d * d) / (2.0 * sigma * sigma))
    w /= w.sum()
    w.setflags(write=False)
    return GaussianKernel(size=size, sigma=float(sigma), weights=w)


def _mirror_indices(n: int, pad: int) -> np.ndarray:
    """Source indices for reflect-101 padding (edge sample not repeated)."""
    idx = np.arange(-pad, n + pad)
    if n == 1:
        return np.zeros_like(idx)
    period = 2 * (n - 1)
    m = np.mod(idx, period)
    return np.where(m >= n, period - m, m)


def _convolve_axis(x: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    n = x.shape[axis]
    pad = weights.size // 2
    padded = np.take(x, _mirror_indices(n, pad), axis=axis)
    out = np.zeros_like(x)
    window = [slice(None)] * x.ndim
    for k in range(weights.size):
        window[axis] = slice(k, k + n)
        out += weights[k] * padded[tuple(window)]
    return out


def low_pass(x: np.ndarray, kernel: GaussianKernel) -> np.ndarray:
    """Separable gaussian blur: horizontal pass, then vertical pass.

    Borders reflect without repeating the edge sample. Accepts (H, W, C)
    images or batched (..., H, W, C) stacks; per-image results are
    identical either way.
    """
    x = np.asarray(x)
    if x.ndim < 3:
        raise ValueError(f"expected at least (H, W, C) dimensions, got shape {x.shape}")
    work = x.astype(np.float64, copy=False)
    work = _convolve_axis(work, kernel.weights, axis=-2)
    work = _convolve_axis(work, kernel.weights, axis=-3)
    return work.astype(x.dtype, copy=False)


@dataclass(eq=False)
class FrequencyDecomposition:
    """Additive split of an image: ``lf + hf`` reconstructs the input."""

    lf: np.ndarray
    hf: np.ndarray


def decompose(x: np.ndarray, kernel: GaussianKernel) -> FrequencyDecomposition:
    """Split ``x`` into a blurred low-frequency part and the residual."""
    x = np.asarray(x)
    lf = low_pass(x, kernel)
    return FrequencyDecomposition(lf=lf, hf=x - lf)


@dataclass(eq=False)
class Spectrum:
    """Per-channel amplitude and phase of an unnormalized 2D DFT.

    Both arrays are (H, W, C) float64; amplitude is non-negative and
    phase lies in (-pi, pi], with phase fixed to 0 wherever the
    amplitude is exactly 0.
    """

    amplitude: np.ndarray
    phase: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return self.amplitude.shape


def dft2(x: np.ndarray) -> Spectrum:
    """Unnormalized forward 2D DFT of each channel of an (H, W, C) image."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ValueError(f"expected an (H, W, C) image, got shape {x.shape}")
    f = np.fft.fft2(x, axes=(0, 1))
    amplitude = np.abs(f)
    phase = np.where(amplitude == 0.0, 0.0, np.angle(f))
    # np.angle can emit -pi when the imaginary part is a negative zero;
    # fold it onto the principal branch.
    phase = np.where(phase <= -np.pi, np.pi, phase)
    return Spectrum(amplitude=amplitude, phase=phase)


def idft2(spectrum: Spectrum) -> np.ndarray:
    """Inverse of :func:`dft2`, scaled by 1/(H*W); returns the real part.

    For spectra taken from real images the discarded imaginary residual
    is rounding noise; for arbitrary amplitude/phase combinations it is
    dropped silently.
    """
    f = spectrum.amplitude * np.exp(1j * spectrum.phase)
    out = np.fft.ifft2(f, axes=(0, 1))
    return np.ascontiguousarray(out.real)
