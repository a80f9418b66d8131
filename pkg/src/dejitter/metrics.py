"""Reconstruction quality metrics."""

from __future__ import annotations

import math

import numpy as np

from .fields import LineDisplacement, ScalarField, VectorField
from .image import Image


def mse(a: Image, b: Image) -> float:
    """Mean squared difference over all m*n*D entries."""
    if a.data.shape != b.data.shape:
        raise ValueError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")
    diff = a.data - b.data
    return float(np.mean(diff * diff))


def psnr(a: Image, b: Image) -> float:
    """Peak signal-to-noise ratio for intensities in [0, 1]; +inf for identical images."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / err)


def displacement_accuracy(
    est: LineDisplacement, truth: LineDisplacement, modulo_shift: bool = False
) -> float:
    """Fraction of rows where the estimate matches the truth exactly.

    With ``modulo_shift`` the best constant integer offset c, |c| <= 2*rho,
    is applied to the estimate first; a constant displacement is invisible to
    the line-jitter data term, so this scores recovery up to that ambiguity.
    """
    if len(est) != len(truth):
        raise ValueError(f"length mismatch: {len(est)} vs {len(truth)}")
    if not modulo_shift:
        return float(np.mean(est.values == truth.values))
    bound = 2 * max(est.rho, truth.rho)
    best = 0.0
    for c in range(-bound, bound + 1):
        best = max(best, float(np.mean(est.values + c == truth.values)))
    return best


def scalar_field_accuracy(est: ScalarField, truth: ScalarField, modulo_shift: bool = False) -> float:
    """Fraction of pixels with exact agreement, optionally up to a constant offset."""
    if est.values.shape != truth.values.shape:
        raise ValueError(f"field shapes differ: {est.values.shape} vs {truth.values.shape}")
    if not modulo_shift:
        return float(np.mean(est.values == truth.values))
    bound = 2 * max(est.rho, truth.rho)
    best = 0.0
    for c in range(-bound, bound + 1):
        best = max(best, float(np.mean(est.values + c == truth.values)))
    return best


def vector_field_accuracy(est: VectorField, truth: VectorField, modulo_shift: bool = False) -> float:
    """Fraction of pixels where both components agree, optionally up to a constant offset."""
    if est.values.shape != truth.values.shape:
        raise ValueError(f"field shapes differ: {est.values.shape} vs {truth.values.shape}")
    match = np.all(est.values == truth.values, axis=2)
    if not modulo_shift:
        return float(np.mean(match))
    bound = 2 * max(est.rho, truth.rho)
    best = 0.0
    for c1 in range(-bound, bound + 1):
        for c2 in range(-bound, bound + 1):
            shifted = est.values + np.asarray([c1, c2])
            best = max(best, float(np.mean(np.all(shifted == truth.values, axis=2))))
    return best
