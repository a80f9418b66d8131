"""Synthetic images and random problem instances shared across tests."""

import numpy as np

from dejitter import ChainProblem, Image


def constant_image(height, width, value=0.5, channels=1):
    return Image(np.full((height, width, channels), float(value)))


def random_image(height, width, channels=1, seed=0):
    rng = np.random.default_rng(seed)
    return Image(rng.random((height, width, channels)))


def stripe_image(width=64, height=64, margin=8, seed=0):
    """Aperiodic vertical stripes with black side margins.

    Constant down each column, so row-to-row alignment is exact and the
    margins absorb boundary reads for shifts smaller than ``margin``.
    """
    rng = np.random.default_rng(seed)
    cols = 0.1 + 0.9 * rng.random(width)
    cols[:margin] = 0.0
    cols[width - margin :] = 0.0
    return Image(np.tile(cols, (height, 1)))


def blob_image(width=32, height=32, seed=0, regions=4, channels=3):
    """Piecewise-constant colour regions from a posterised cosine mixture."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width]
    q = np.zeros((height, width))
    for _ in range(4):
        fx, fy = rng.uniform(0.5, 2.5, 2)
        ph1, ph2 = rng.uniform(0, 2 * np.pi, 2)
        q += np.cos(2 * np.pi * fx * x / width + ph1) * np.cos(2 * np.pi * fy * y / height + ph2)
    edges = np.quantile(q, np.linspace(0, 1, regions + 1)[1:-1])
    idx = np.digitize(q, edges)
    palette = rng.random((regions, channels)) * 0.9 + 0.05
    return Image(palette[idx])


def random_chain(seed, max_n=6, max_labels=5, ternary=False):
    """A random dense chain instance with costs uniform in [0, 1]."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    num = int(rng.integers(1, max_labels + 1))
    unary = rng.random((n, num))
    pairwise = rng.random((n - 1, num, num)) if n >= 2 else None
    tern = rng.random((n - 2, num, num, num)) if ternary and n >= 3 else None
    return ChainProblem.from_arrays(unary, pairwise, tern)
