"""Single-image photometric and geometric ops used by the chain sampler.

Every op maps an (H, W, C) float32 image to a new float32 image of the
same shape. Pixel-value ops assume values nominally in [0, 1] and keep
them there; geometric ops resample bilinearly about the image center
and fill uncovered regions with zero.

Each op takes one scalar magnitude in [0, 1] that scales linearly to
the op's physical range; autocontrast and equalize ignore it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OP_KINDS",
    "MAX_ROTATE_DEGREES",
    "MAX_SHEAR",
    "MAX_TRANSLATE_FRACTION",
    "AugOp",
    "OpChain",
    "apply_op",
    "apply_chain",
    "sample_chain",
]

OP_KINDS = (
    "posterize",
    "autocontrast",
    "equalize",
    "rotate",
    "solarize",
    "shear_x",
    "shear_y",
    "translate_x",
    "translate_y",
)

MAX_ROTATE_DEGREES = 30.0
MAX_SHEAR = 0.3
MAX_TRANSLATE_FRACTION = 0.25
_POSTERIZE_MAX_DROPPED_BITS = 4
_SOLARIZE_MIN_THRESHOLD = 0.5

_MIN_CHAIN_LEN = 1
_MAX_CHAIN_LEN = 3


@dataclass(frozen=True)
class AugOp:
    """One op: a kind from :data:`OP_KINDS` plus a magnitude in [0, 1]."""

    kind: str
    magnitude: float

    def __post_init__(self) -> None:
        if self.kind not in OP_KINDS:
            raise ValueError(f"unknown op kind {self.kind!r}")
        if not (isinstance(self.magnitude, (int, float)) and 0.0 <= self.magnitude <= 1.0):
            raise ValueError(f"magnitude must lie in [0, 1], got {self.magnitude!r}")


@dataclass(frozen=True)
class OpChain:
    """An ordered sequence of 1 to 3 ops, applied left to right."""

    ops: tuple[AugOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if not (_MIN_CHAIN_LEN <= len(self.ops) <= _MAX_CHAIN_LEN):
            raise ValueError(f"chain length must be 1..3, got {len(self.ops)}")
        for op in self.ops:
            if not isinstance(op, AugOp):
                raise ValueError(f"chain entries must be AugOp, got {type(op).__name__}")


def _quantize_256(x: np.ndarray) -> np.ndarray:
    """Map [0, 1] floats onto the 256 levels used by the value ops."""
    return np.clip(np.floor(x * 255.0 + 0.5), 0.0, 255.0).astype(np.int64)


def _posterize(x: np.ndarray, magnitude: float) -> np.ndarray:
    dropped = int(round(magnitude * _POSTERIZE_MAX_DROPPED_BITS))
    if dropped == 0:
        return x.copy()
    q = _quantize_256(x)
    q = (q >> dropped) << dropped
    return (q / 255.0).astype(np.float32)


def _solarize(x: np.ndarray, magnitude: float) -> np.ndarray:
    threshold = 1.0 - magnitude * _SOLARIZE_MIN_THRESHOLD
    return np.where(x > threshold, 1.0 - x, x).astype(np.float32)


def _autocontrast(x: np.ndarray, magnitude: float) -> np.ndarray:
    q = _quantize_256(x)
    out = x.astype(np.float32).copy()
    for c in range(x.shape[2]):
        lo = int(q[:, :, c].min())
        hi = int(q[:, :, c].max())
        if hi == lo:
            continue
        out[:, :, c] = ((q[:, :, c] - lo) / (hi - lo)).astype(np.float32)
    return out


def _equalize(x: np.ndarray, magnitude: float) -> np.ndarray:
    q = _quantize_256(x)
    out = x.astype(np.float32).copy()
    for c in range(x.shape[2]):
        hist = np.bincount(q[:, :, c].ravel(), minlength=256)
        cdf = np.cumsum(hist)
        nonzero = np.nonzero(hist)[0]
        cdf_min = cdf[nonzero[0]]
        total = cdf[-1]
        if total == cdf_min:
            continue
        lut = np.floor((cdf - cdf_min) / (total - cdf_min) * 255.0 + 0.5)
        lut = np.clip(lut, 0.0, 255.0) / 255.0
        out[:, :, c] = lut[q[:, :, c]].astype(np.float32)
    return out


def _resample(img: np.ndarray, src_rows: np.ndarray, src_cols: np.ndarray) -> np.ndarray:
    """Bilinear lookup at float source coordinates; zero outside the grid."""
    h, w = img.shape[:2]
    r0 = np.floor(src_rows)
    c0 = np.floor(src_cols)
    fr = src_rows - r0
    fc = src_cols - c0
    r0 = r0.astype(np.int64)
    c0 = c0.astype(np.int64)
    out = np.zeros(img.shape, dtype=np.float64)
    for dr in (0, 1):
        for dc in (0, 1):
            rr = r0 + dr
            cc = c0 + dc
            weight = (fr if dr else 1.0 - fr) * (fc if dc else 1.0 - fc)
            inside = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < w)
            vals = img[np.clip(rr, 0, h - 1), np.clip(cc, 0, w - 1)]
            out += (weight * inside)[:, :, None] * vals
    return out.astype(np.float32)


def _output_grid(h: int, w: int) -> tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(
        np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij"
    )


def _rotate(x: np.ndarray, magnitude: float) -> np.ndarray:
    theta = math.radians(magnitude * MAX_ROTATE_DEGREES)
    h, w = x.shape[:2]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    rows, cols = _output_grid(h, w)
    dy = rows - cy
    dx = cols - cx
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    src_cols = cos_t * dx + sin_t * dy + cx
    src_rows = -sin_t * dx + cos_t * dy + cy
    return _resample(x, src_rows, src_cols)


def _shear_x(x: np.ndarray, magnitude: float) -> np.ndarray:
    shear = magnitude * MAX_SHEAR
    h, w = x.shape[:2]
    cy = (h - 1) / 2.0
    rows, cols = _output_grid(h, w)
    return _resample(x, rows, cols - shear * (rows - cy))


def _shear_y(x: np.ndarray, magnitude: float) -> np.ndarray:
    shear = magnitude * MAX_SHEAR
    h, w = x.shape[:2]
    cx = (w - 1) / 2.0
    rows, cols = _output_grid(h, w)
    return _resample(x, rows - shear * (cols - cx), cols)


def _translate_x(x: np.ndarray, magnitude: float) -> np.ndarray:
    h, w = x.shape[:2]
    shift = magnitude * MAX_TRANSLATE_FRACTION * w
    rows, cols = _output_grid(h, w)
    return _resample(x, rows, cols - shift)


def _translate_y(x: np.ndarray, magnitude: float) -> np.ndarray:
    h, w = x.shape[:2]
    shift = magnitude * MAX_TRANSLATE_FRACTION * h
    rows, cols = _output_grid(h, w)
    return _resample(x, rows - shift, cols)


_APPLY = {
    "posterize": _posterize,
    "autocontrast": _autocontrast,
    "equalize": _equalize,
    "rotate": _rotate,
    "solarize": _solarize,
    "shear_x": _shear_x,
    "shear_y": _shear_y,
    "translate_x": _translate_x,
    "translate_y": _translate_y,
}


def apply_op(x: np.ndarray, op: AugOp) -> np.ndarray:
    """Apply one op to an (H, W, C) float32 image; pure and deterministic."""
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 3:
        raise ValueError(f"expected an (H, W, C) image, got shape {x.shape}")
    fn = _APPLY.get(op.kind)
    if fn is None:
        raise ValueError(f"unknown op kind {op.kind!r}")
    return fn(x, float(op.magnitude))


def apply_chain(x: np.ndarray, chain: OpChain) -> np.ndarray:
    """Apply a chain's ops left to right."""
    out = np.asarray(x, dtype=np.float32)
    for op in chain.ops:
        out = apply_op(out, op)
    return out


def sample_chain(rng: np.random.Generator) -> OpChain:
    """Draw a chain of 1 to 3 ops, kinds uniform over :data:`OP_KINDS`.

    Per op the kind index is drawn first, then the magnitude; repeats
    within a chain are allowed.
    """
    length = int(rng.integers(_MIN_CHAIN_LEN, _MAX_CHAIN_LEN + 1))
    ops = []
    for _ in range(length):
        kind = OP_KINDS[int(rng.integers(len(OP_KINDS)))]
        ops.append(AugOp(kind=kind, magnitude=float(rng.random())))
    return OpChain(ops=tuple(ops))
