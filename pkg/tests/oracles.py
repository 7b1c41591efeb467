"""Independent reference implementations used only by the tests.

Everything here is deliberately written the slow, obvious way so it
shares no code path with the package: direct O(N^2) transforms, full
2D convolution, pairwise rank counting.
"""

import numpy as np


def naive_dft2(x: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2D DFT per channel via explicit DFT matrices."""
    x = np.asarray(x, dtype=np.float64)
    h, w, _ = x.shape
    eh = np.exp(-2j * np.pi * np.outer(np.arange(h), np.arange(h)) / h)
    ew = np.exp(-2j * np.pi * np.outer(np.arange(w), np.arange(w)) / w)
    return np.einsum("uy,yxc,xv->uvc", eh, x.astype(complex), ew.T)


def naive_idft2(f: np.ndarray) -> np.ndarray:
    """Inverse of :func:`naive_dft2` including the 1/(H*W) scale."""
    h, w, _ = f.shape
    eh = np.exp(2j * np.pi * np.outer(np.arange(h), np.arange(h)) / h)
    ew = np.exp(2j * np.pi * np.outer(np.arange(w), np.arange(w)) / w)
    return np.einsum("uy,yxc,xv->uvc", eh, f, ew.T) / (h * w)


def conv2_reflect101(x: np.ndarray, kernel2d: np.ndarray) -> np.ndarray:
    """Direct full-kernel 2D convolution with reflect-101 padding."""
    x = np.asarray(x, dtype=np.float64)
    kh, kw = kernel2d.shape
    ph, pw = kh // 2, kw // 2
    padded = np.pad(x, ((ph, ph), (pw, pw), (0, 0)), mode="reflect")
    out = np.zeros_like(x)
    for i in range(kh):
        for j in range(kw):
            out += kernel2d[i, j] * padded[i : i + x.shape[0], j : j + x.shape[1]]
    return out


def brute_auroc(id_scores, ood_scores) -> float:
    """Pairwise Mann-Whitney count, half credit for ties."""
    total = 0.0
    for a in id_scores:
        for b in ood_scores:
            if a > b:
                total += 1.0
            elif a == b:
                total += 0.5
    return total / (len(id_scores) * len(ood_scores))


def equalize_channel_256(values: np.ndarray) -> np.ndarray:
    """Classic 256-bin histogram equalization of one channel in [0, 1]."""
    q = np.clip(np.floor(values * 255.0 + 0.5), 0, 255).astype(int)
    hist = np.bincount(q.ravel(), minlength=256)
    cdf = np.cumsum(hist)
    levels = np.nonzero(hist)[0]
    cdf_min = cdf[levels[0]]
    total = cdf[-1]
    if total == cdf_min:
        return values.astype(np.float32)
    out = np.empty_like(values, dtype=np.float32)
    flat = out.reshape(-1)
    for pos, level in enumerate(q.ravel()):
        mapped = np.floor((cdf[level] - cdf_min) / (total - cdf_min) * 255.0 + 0.5)
        flat[pos] = min(max(mapped, 0.0), 255.0) / 255.0
    return out


def wrap_angle(theta: np.ndarray) -> np.ndarray:
    """Wrap angles onto (-pi, pi]."""
    wrapped = np.mod(theta + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped <= -np.pi, np.pi, wrapped)
