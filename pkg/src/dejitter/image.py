"""Image container, boundary-aware sampling and integer-displacement warps.

Pixels are addressed 1-based as (i, j) where i is the column (1..m, left to
right) and j is the row (1..n, top to bottom), matching the convention used
throughout the solvers.  Any read outside the grid yields the all-zero
intensity vector, so every sampling operation is total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image as _PILImage


@dataclass(frozen=True, eq=False)
class Image:
    """An m x n grid of D-channel intensities in [0, 1].

    ``data`` has shape (n, m, D) with D in {1, 3}; it is copied on
    construction and frozen, so instances are safe to share.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise ValueError(f"image data must be 2-D or 3-D, got shape {arr.shape}")
        n, m, d = arr.shape
        if m < 1 or n < 1:
            raise ValueError(f"image must have at least one pixel, got {m}x{n}")
        if d not in (1, 3):
            raise ValueError(f"channel count must be 1 or 3, got {d}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image intensities must be finite")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("image intensities must lie in [0, 1]")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @classmethod
    def from_bytes(cls, raw: np.ndarray) -> "Image":
        """Map 8-bit intensities to [0, 1] by value / 255."""
        arr = np.asarray(raw)
        if arr.dtype != np.uint8:
            raise ValueError(f"expected uint8 data, got {arr.dtype}")
        return cls(arr.astype(np.float64) / 255.0)


def sample(img: Image, i: int, j: int) -> np.ndarray:
    """Pixel (i, j) as a D-vector; zeros when (i, j) is outside the grid."""
    if 1 <= i <= img.width and 1 <= j <= img.height:
        return img.data[j - 1, i - 1]
    return np.zeros(img.channels)


def pnorm_pow(v: np.ndarray, p: float) -> float:
    """Sum of |v_c|^p over the channels; defined for any p > 0."""
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    return float(np.sum(np.abs(np.asarray(v, dtype=np.float64)) ** p))


def powsum(diff: np.ndarray, p: float, axis=-1) -> np.ndarray:
    """Vectorised |diff|^p summed over ``axis`` with fast paths for common p."""
    a = np.abs(diff)
    if p == 1.0:
        pw = a
    elif p == 2.0:
        pw = a * a
    elif p == 0.5:
        pw = np.sqrt(a)
    else:
        pw = a ** p
    return pw.sum(axis=axis)


def _padded(img: Image, pad_x: int, pad_y: int = 0) -> np.ndarray:
    return np.pad(img.data, ((pad_y, pad_y), (pad_x, pad_x), (0, 0)))


def warp_rows(img: Image, shifts: np.ndarray) -> Image:
    """out(i, j) = sample(img, i + shifts[j], j) for one integer shift per row."""
    shifts = np.asarray(shifts, dtype=np.int64)
    if shifts.shape != (img.height,):
        raise ValueError(f"expected {img.height} row shifts, got shape {shifts.shape}")
    pad = int(np.max(np.abs(shifts), initial=0))
    padded = _padded(img, pad)
    cols = np.arange(img.width)[None, :] + shifts[:, None] + pad
    out = np.take_along_axis(padded, cols[:, :, None], axis=1)
    return Image(out)


def warp_horizontal(img: Image, offsets: np.ndarray) -> Image:
    """out(i, j) = sample(img, i + offsets[i, j], j) for per-pixel horizontal offsets."""
    offsets = np.asarray(offsets, dtype=np.int64)
    if offsets.shape != (img.height, img.width):
        raise ValueError(
            f"expected offsets of shape {(img.height, img.width)}, got {offsets.shape}"
        )
    pad = int(np.max(np.abs(offsets), initial=0))
    padded = _padded(img, pad)
    cols = np.arange(img.width)[None, :] + offsets + pad
    out = np.take_along_axis(padded, cols[:, :, None], axis=1)
    return Image(out)


def warp_vector(img: Image, dx: np.ndarray, dy: np.ndarray) -> Image:
    """out(i, j) = sample(img, i + dx[i, j], j + dy[i, j]) for per-pixel 2-D offsets."""
    dx = np.asarray(dx, dtype=np.int64)
    dy = np.asarray(dy, dtype=np.int64)
    shape = (img.height, img.width)
    if dx.shape != shape or dy.shape != shape:
        raise ValueError(f"expected offset fields of shape {shape}")
    pad = int(max(np.max(np.abs(dx), initial=0), np.max(np.abs(dy), initial=0)))
    padded = _padded(img, pad, pad)
    rows = np.arange(img.height)[:, None] + dy + pad
    cols = np.arange(img.width)[None, :] + dx + pad
    return Image(padded[rows, cols])


def load_png(path) -> Image:
    """Read an 8-bit grayscale or RGB PNG.  Alpha channels are rejected."""
    with _PILImage.open(path) as pil:
        if pil.mode in ("RGBA", "LA", "PA") or "transparency" in pil.info:
            raise ValueError(f"{path}: images with an alpha channel are not supported")
        if pil.mode not in ("L", "RGB"):
            raise ValueError(
                f"{path}: unsupported mode {pil.mode!r}, expected 8-bit grayscale or RGB"
            )
        raw = np.asarray(pil, dtype=np.uint8)
    return Image.from_bytes(raw)


def save_png(img: Image, path) -> None:
    """Write as 8-bit PNG (grayscale for D=1, RGB for D=3)."""
    raw = np.rint(img.data * 255.0).astype(np.uint8)
    if img.channels == 1:
        pil = _PILImage.fromarray(raw[:, :, 0], mode="L")
    else:
        pil = _PILImage.fromarray(raw, mode="RGB")
    pil.save(path, format="PNG")
