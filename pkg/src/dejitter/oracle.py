"""Ground-truth minimisers and direct energy evaluators for tests.

Everything here favours obviousness over speed: labellings are enumerated (in
chunks, lexicographically) and image energies are accumulated pixel by pixel
through :func:`dejitter.image.sample`, independently of the vectorised
production paths they are used to check.
"""

from __future__ import annotations

import numpy as np

from .chain import ChainProblem, ChainSolution, evaluate
from .fields import EnergyParams, VectorField, labels_for
from .image import Image, pnorm_pow, sample

_MAX_LABELLINGS = 10**7
_CHUNK = 1 << 16


def brute_force_chain(problem: ChainProblem) -> ChainSolution:
    """Enumerate all L^n labellings and return the first one attaining the minimum."""
    n, num = problem.length, problem.num_labels
    count = num**n
    if count > _MAX_LABELLINGS:
        raise ValueError(f"search space too large: {num}^{n} labellings")

    unary = np.stack([np.asarray(problem.unary(j), dtype=np.float64) for j in range(1, n + 1)])
    pair = None
    if problem.pairwise is not None and n >= 2:
        pair = np.stack([np.asarray(problem.pairwise(j), dtype=np.float64) for j in range(2, n + 1)])
    tern = None
    if problem.ternary is not None and n >= 3:
        tern = np.stack([np.asarray(problem.ternary(j), dtype=np.float64) for j in range(3, n + 1)])

    place = num ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best_energy = np.inf
    best_labels = None
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
        lab = (idx[:, None] // place[None, :]) % num
        energy = unary[np.arange(n)[None, :], lab].sum(axis=1)
        if pair is not None:
            energy += pair[np.arange(n - 1)[None, :], lab[:, :-1], lab[:, 1:]].sum(axis=1)
        if tern is not None:
            energy += tern[np.arange(n - 2)[None, :], lab[:, :-2], lab[:, 1:-1], lab[:, 2:]].sum(axis=1)
        k = int(np.argmin(energy))
        if energy[k] < best_energy:
            best_energy = float(energy[k])
            best_labels = lab[k].copy()

    return ChainSolution(best_labels, evaluate(problem, best_labels))


# ---------------------------------------------------------------------------
# direct image-energy evaluators (scalar, per pixel)


def _vertical_terms(value_at, m, n, params: EnergyParams) -> float:
    """Sum of first (and second, for order 2) vertical difference powers of a
    reconstruction given by ``value_at(i, j)``."""
    total = 0.0
    for j in range(2, n + 1):
        for i in range(1, m + 1):
            total += pnorm_pow(value_at(i, j) - value_at(i, j - 1), params.p)
    if params.order == 2:
        for j in range(3, n + 1):
            for i in range(1, m + 1):
                total += pnorm_pow(
                    value_at(i, j) - 2 * value_at(i, j - 1) + value_at(i, j - 2), params.p
                )
    return total


def reference_line_energy(img: Image, displacements, params: EnergyParams) -> float:
    """Line-jitter energy of a per-row displacement vector, term by term."""
    d = np.asarray(displacements, dtype=np.int64)
    total = params.alpha * float(np.sum(d.astype(np.float64) ** 2))
    total += _vertical_terms(
        lambda i, j: sample(img, i - int(d[j - 1]), j), img.width, img.height, params
    )
    return total


def reference_line_pixel_energy(img: Image, field, params: EnergyParams) -> float:
    """Line-pixel-jitter energy of a per-pixel horizontal displacement field."""
    d = np.asarray(field, dtype=np.int64)
    total = params.alpha * float(np.sum(d.astype(np.float64) ** 2))
    total += _vertical_terms(
        lambda i, j: sample(img, i - int(d[j - 1, i - 1]), j), img.width, img.height, params
    )
    return total


def reference_pixel_energy(img: Image, field: VectorField, params: EnergyParams) -> float:
    """Pixel-jitter energy of a 2-D displacement field, term by term."""
    vals = field.values
    m, n = img.width, img.height

    def rec(i, j):
        d1, d2 = vals[j - 1, i - 1]
        return sample(img, i - int(d1), j - int(d2))

    total = params.alpha * float(np.sum(vals.astype(np.float64) ** 2))
    for j in range(1, n + 1):
        for i in range(2, m + 1):
            total += pnorm_pow(rec(i, j) - rec(i - 1, j), params.p)
    for j in range(2, n + 1):
        for i in range(1, m + 1):
            total += pnorm_pow(rec(i, j) - rec(i, j - 1), params.p)
    return total


# ---------------------------------------------------------------------------
# exact pixel-jitter minimiser on tiny images


def brute_force_pixel_energy(img: Image, params: EnergyParams):
    """Global minimum of the pixel-jitter energy on a tiny image.

    Exhausts the per-column label combinations: every column is expanded into
    all L^n joint labellings and columns are chained exactly, which visits
    the same search space as full enumeration but stays feasible for the
    3x3-at-rho-1 instances the tests use.  Returns (field, energy) with a
    deterministic, smallest-state tie-break.
    """
    m, n, depth = img.width, img.height, img.channels
    rho = params.rho
    offsets = labels_for(rho)
    num1 = offsets.size
    num = num1 * num1  # labels are (d1, d2), lexicographic
    states = num**n
    if states > 2048 or m * states * states > 5 * 10**9:
        raise ValueError(f"search space too large: {num}^{n} states per column")

    d1 = np.repeat(offsets, num1)
    d2 = np.tile(offsets, num1)
    label_sq = (d1.astype(np.float64) ** 2) + (d2.astype(np.float64) ** 2)

    padded = np.pad(img.data, ((rho, rho), (rho, rho), (0, 0)))
    place = num ** np.arange(n - 1, -1, -1, dtype=np.int64)
    idx = np.arange(states, dtype=np.int64)
    X = (idx[:, None] // place[None, :]) % num  # (S, n) label indices, row j ascending

    def column_values(i):
        rows = np.arange(n)[:, None] - d2[None, :] + rho
        cols = (i - 1) - d1[None, :] + rho
        v = padded[rows, np.broadcast_to(cols, rows.shape)]  # (n, L, D)
        return v[np.arange(n)[None, :], X]  # (S, n, D)

    def powsum_last(a):
        if params.p == 0.5:
            return np.sqrt(np.abs(a)).sum(axis=-1)
        return (np.abs(a) ** params.p).sum(axis=-1)

    def column_unary(val):
        u = params.alpha * label_sq[X].sum(axis=1)
        if n >= 2:
            u = u + powsum_last(val[:, 1:] - val[:, :-1]).sum(axis=1)
        return u

    prev_val = column_values(1)
    cost = column_unary(prev_val)
    args = np.empty((m, states), dtype=np.int64)
    for i in range(2, m + 1):
        val = column_values(i)
        trans = np.empty((states, states))
        for s0 in range(0, states, 256):
            s1 = min(s0 + 256, states)
            diff = prev_val[s0:s1, None, :, :] - val[None, :, :, :]
            trans[s0:s1] = powsum_last(diff).sum(axis=-1)
        reach = cost[:, None] + trans
        args[i - 1] = np.argmin(reach, axis=0)
        cost = column_unary(val) + np.min(reach, axis=0)
        prev_val = val

    state = np.empty(m, dtype=np.int64)
    state[m - 1] = int(np.argmin(cost))
    for i in range(m - 1, 0, -1):
        state[i - 1] = args[i, state[i]]

    values = np.empty((n, m, 2), dtype=np.int64)
    for i in range(m):
        lab = X[state[i]]
        values[:, i, 0] = d1[lab]
        values[:, i, 1] = d2[lab]
    field = VectorField(values, rho=rho)
    return field, reference_pixel_energy(img, field, params)
