"""Seeded generation of jitter-corrupted images.

Displacements are drawn from N(0, sigma^2) with numpy's default_rng (PCG64)
and rounded to the nearest integer, half away from zero.  The reported rho is
the maximum displacement magnitude that actually occurred, which is what the
solvers are given.  Optional Gaussian intensity noise is added after the
displacement corruption, from the same generator stream, and clamped to
[0, 1]; draw order (displacements first, then noise; d1-plane before d2-plane
for vector fields) is part of the deterministic contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import LineDisplacement, ScalarField, VectorField
from .image import Image, warp_horizontal, warp_rows, warp_vector

KINDS = ("line", "line-pixel", "pixel")


@dataclass(frozen=True)
class SynthesisSpec:
    sigma2: float
    noise_sigma2: float = 0.0
    seed: int = 0
    kind: str = "line"

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if self.noise_sigma2 < 0:
            raise ValueError(f"noise_sigma2 must be non-negative, got {self.noise_sigma2}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def round_half_away(x: np.ndarray) -> np.ndarray:
    """Round to the nearest integer with ties away from zero."""
    x = np.asarray(x, dtype=np.float64)
    return np.copysign(np.floor(np.abs(x) + 0.5), x).astype(np.int64)


def _draw_rounded(rng: np.random.Generator, sigma2: float, shape) -> np.ndarray:
    return round_half_away(rng.normal(0.0, math.sqrt(sigma2), size=shape))


def _noised(img: Image, noise_sigma2: float, rng: np.random.Generator) -> Image:
    if noise_sigma2 == 0.0:
        return img
    noisy = img.data + rng.normal(0.0, math.sqrt(noise_sigma2), size=img.data.shape)
    return Image(np.clip(noisy, 0.0, 1.0))


def _require_kind(spec: SynthesisSpec, kind: str) -> None:
    if spec.kind != kind:
        raise ValueError(f"spec.kind is {spec.kind!r}, expected {kind!r}")


def synthesize_line(img: Image, spec: SynthesisSpec):
    """Corrupt with one horizontal shift per row; returns (corrupted, truth)."""
    _require_kind(spec, "line")
    rng = np.random.default_rng(spec.seed)
    d = _draw_rounded(rng, spec.sigma2, img.height)
    rho = int(np.max(np.abs(d)))
    corrupted = _noised(warp_rows(img, d), spec.noise_sigma2, rng)
    return corrupted, LineDisplacement(d, rho=rho)


def synthesize_line_pixel(img: Image, spec: SynthesisSpec):
    """Corrupt with an independent horizontal shift per pixel; returns (corrupted, truth)."""
    _require_kind(spec, "line-pixel")
    rng = np.random.default_rng(spec.seed)
    d = _draw_rounded(rng, spec.sigma2, (img.height, img.width))
    rho = int(np.max(np.abs(d)))
    corrupted = _noised(warp_horizontal(img, d), spec.noise_sigma2, rng)
    return corrupted, ScalarField(d, rho=rho)


def synthesize_pixel(img: Image, spec: SynthesisSpec):
    """Corrupt with an independent 2-D integer shift per pixel; returns (corrupted, truth)."""
    _require_kind(spec, "pixel")
    rng = np.random.default_rng(spec.seed)
    shape = (img.height, img.width)
    d1 = _draw_rounded(rng, spec.sigma2, shape)
    d2 = _draw_rounded(rng, spec.sigma2, shape)
    rho = int(max(np.max(np.abs(d1)), np.max(np.abs(d2))))
    corrupted = _noised(warp_vector(img, d1, d2), spec.noise_sigma2, rng)
    return corrupted, VectorField(np.stack([d1, d2], axis=2), rho=rho)


def add_noise(img: Image, noise_sigma2: float, seed: int) -> Image:
    """Add clamped Gaussian white noise of the given variance to every channel."""
    if noise_sigma2 < 0:
        raise ValueError(f"noise_sigma2 must be non-negative, got {noise_sigma2}")
    return _noised(img, noise_sigma2, np.random.default_rng(seed))
