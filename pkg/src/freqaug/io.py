"""File formats and loaders.

Raw tensor files (extension ``.hat``) hold one float32 image exactly:
a 16-byte header of the magic ``HAT1`` followed by H, W, C as
little-endian uint32, then H*W*C little-endian float32 values in
row-major order. They round-trip bit for bit and are the format of
choice wherever exactness matters.

PNG files are 8-bit L or RGB; loading maps value v to v/255 as float32,
saving quantizes with round(clamp(x + offset, 0, 1) * 255). CSV files
are strict: exact headers, exact field counts, no silent skipping.
"""

from __future__ import annotations

import csv
import json
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .hybrid import AugmentConfig
from .metrics import CorruptionErrorTable

__all__ = [
    "HAT_MAGIC",
    "FormatError",
    "UnsupportedFormatError",
    "PredictionRecord",
    "atomic_write_bytes",
    "load_hat",
    "save_hat",
    "load_image",
    "save_image",
    "load_error_table",
    "load_label_csv",
    "save_label_csv",
    "load_predictions",
    "load_scores",
    "load_config",
    "save_config",
]

HAT_MAGIC = b"HAT1"
_HAT_HEADER = struct.Struct("<4sIII")


class FormatError(ValueError):
    """The file exists but its contents violate the format contract."""


class UnsupportedFormatError(FormatError):
    """The file's extension or encoding is not one this package reads."""


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write to a temp file in the target directory, then rename over."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


def save_hat(x: np.ndarray, path: str | Path) -> None:
    """Write one (H, W, C) image as float32, bit-exact."""
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 3:
        raise ValueError(f"expected an (H, W, C) image, got shape {x.shape}")
    h, w, c = x.shape
    header = _HAT_HEADER.pack(HAT_MAGIC, h, w, c)
    payload = np.ascontiguousarray(x, dtype="<f4").tobytes()
    atomic_write_bytes(path, header + payload)


def load_hat(path: str | Path) -> np.ndarray:
    """Read a raw tensor file back as a float32 (H, W, C) array."""
    data = Path(path).read_bytes()
    if len(data) < _HAT_HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, h, w, c = _HAT_HEADER.unpack_from(data)
    if magic != HAT_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    expected = _HAT_HEADER.size + 4 * h * w * c
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes for {h}x{w}x{c}, got {len(data)}")
    flat = np.frombuffer(data, dtype="<f4", offset=_HAT_HEADER.size)
    return flat.reshape(h, w, c).astype(np.float32)


def _image_from_pil(img: Image.Image, path: str | Path) -> np.ndarray:
    if img.mode == "P":
        img = img.convert("RGB")
    if img.mode == "L":
        arr = np.asarray(img, dtype=np.float32)[:, :, None]
    elif img.mode == "RGB":
        arr = np.asarray(img, dtype=np.float32)
    else:
        raise UnsupportedFormatError(f"{path}: unsupported image mode {img.mode!r}")
    return arr / 255.0


def load_image(path: str | Path) -> np.ndarray:
    """Load a ``.png`` or ``.hat`` image as (H, W, C) float32."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".hat":
        return load_hat(path)
    if suffix == ".png":
        try:
            with Image.open(path) as img:
                return _image_from_pil(img, path)
        except Image.UnidentifiedImageError as exc:
            raise FormatError(f"{path}: not a readable PNG file") from exc
    raise UnsupportedFormatError(f"{path}: unsupported extension {suffix!r}")


def save_image(x: np.ndarray, path: str | Path, offset: float = 0.0) -> None:
    """Save to ``.png`` (quantized, after adding ``offset``) or ``.hat``.

    The offset exists for visualizing signed content such as
    high-frequency residuals; raw tensor files ignore it and store the
    array untouched.
    """
    path = Path(path)
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 3:
        raise ValueError(f"expected an (H, W, C) image, got shape {x.shape}")
    suffix = path.suffix.lower()
    if suffix == ".hat":
        save_hat(x, path)
        return
    if suffix != ".png":
        raise UnsupportedFormatError(f"{path}: unsupported extension {suffix!r}")
    shifted = np.clip(x.astype(np.float64) + offset, 0.0, 1.0)
    quantized = np.floor(shifted * 255.0 + 0.5).astype(np.uint8)
    if x.shape[2] == 1:
        img = Image.fromarray(quantized[:, :, 0], mode="L")
    elif x.shape[2] == 3:
        img = Image.fromarray(quantized, mode="RGB")
    else:
        raise ValueError(f"PNG output supports 1 or 3 channels, got {x.shape[2]}")
    import io as _stdlib_io

    buf = _stdlib_io.BytesIO()
    img.save(buf, format="PNG")
    atomic_write_bytes(path, buf.getvalue())


def _read_csv_rows(path: str | Path, header: list[str]) -> list[list[str]]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        raise FormatError(f"{path}: empty CSV")
    if rows[0] != header:
        raise FormatError(f"{path}: expected header {','.join(header)!r}, got {','.join(rows[0])!r}")
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
    return rows[1:]


def _parse_int(text: str, path: str | Path, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise FormatError(f"{path}:{lineno}: {what} must be an integer, got {text!r}") from exc


def _parse_float(text: str, path: str | Path, lineno: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise FormatError(f"{path}:{lineno}: {what} must be a number, got {text!r}") from exc
    if not np.isfinite(value):
        raise FormatError(f"{path}:{lineno}: {what} must be finite, got {text!r}")
    return value


def load_error_table(path: str | Path) -> CorruptionErrorTable:
    """Load ``corruption,severity,error`` rows into an error table."""
    rows = _read_csv_rows(path, ["corruption", "severity", "error"])
    entries: dict[tuple[str, int], float] = {}
    for lineno, (name, severity, error) in enumerate(rows, start=2):
        key = (name, _parse_int(severity, path, lineno, "severity"))
        if key in entries:
            raise FormatError(f"{path}:{lineno}: duplicate entry for {key}")
        entries[key] = _parse_float(error, path, lineno, "error")
    try:
        return CorruptionErrorTable(entries=entries)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def load_label_csv(path: str | Path) -> dict[str, int]:
    """Load ``image_id,label`` rows; duplicate ids are rejected."""
    rows = _read_csv_rows(path, ["image_id", "label"])
    labels: dict[str, int] = {}
    for lineno, (image_id, label) in enumerate(rows, start=2):
        if image_id in labels:
            raise FormatError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
        labels[image_id] = _parse_int(label, path, lineno, "label")
    return labels


def save_label_csv(labels: dict[str, int], path: str | Path) -> None:
    lines = ["image_id,label"]
    lines += [f"{image_id},{label}" for image_id, label in labels.items()]
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())


@dataclass(frozen=True)
class PredictionRecord:
    image_id: str
    true_label: int
    pred_label: int


def load_predictions(path: str | Path) -> list[PredictionRecord]:
    """Load ``image_id,true_label,pred_label`` rows."""
    rows = _read_csv_rows(path, ["image_id", "true_label", "pred_label"])
    records = []
    seen: set[str] = set()
    for lineno, (image_id, true_label, pred_label) in enumerate(rows, start=2):
        if image_id in seen:
            raise FormatError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        records.append(
            PredictionRecord(
                image_id=image_id,
                true_label=_parse_int(true_label, path, lineno, "true_label"),
                pred_label=_parse_int(pred_label, path, lineno, "pred_label"),
            )
        )
    if not records:
        raise FormatError(f"{path}: no prediction rows")
    return records


def load_scores(path: str | Path) -> np.ndarray:
    """Load a one-column ``score`` CSV as float64."""
    rows = _read_csv_rows(path, ["score"])
    if not rows:
        raise FormatError(f"{path}: no score rows")
    values = [_parse_float(row[0], path, lineno, "score") for lineno, row in enumerate(rows, start=2)]
    return np.asarray(values, dtype=np.float64)


_CONFIG_FIELDS = ("kernel_size", "sigma", "p_paired", "p_single", "p_inner_apr", "seed")


def load_config(path: str | Path) -> AugmentConfig:
    """Load an :class:`AugmentConfig` from a flat JSON object."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError(f"{path}: expected a JSON object")
    unknown = set(raw) - set(_CONFIG_FIELDS)
    if unknown:
        raise FormatError(f"{path}: unknown config fields {sorted(unknown)}")
    try:
        return AugmentConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_config(config: AugmentConfig, path: str | Path) -> None:
    payload = {name: getattr(config, name) for name in _CONFIG_FIELDS}
    atomic_write_bytes(path, (json.dumps(payload, indent=2) + "\n").encode())
