"""Line-pixel jitter removal: one independent chain DP per image column.

The energy has no coupling between columns, so each column's per-pixel
horizontal shifts are recovered to global optimality on their own and the
total energy is the sum of the column optima.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .chain import ChainProblem, solve_chain, solve_chain_ternary
from .fields import EnergyParams, ScalarField, labels_for
from .image import Image, powsum, warp_horizontal
from .line import _order_terms


def _column_windows(img: Image, column: int, rho: int) -> np.ndarray:
    # (n, L, D): pixel (column, j) of the reconstruction for each candidate shift
    padded = np.pad(img.data, ((0, 0), (rho, rho), (0, 0)))
    cols = (column - 1) + rho - labels_for(rho)
    return padded[:, cols, :]


def build_column_problem(
    img: Image, column: int, params: EnergyParams, weights=None, exponents=None
) -> ChainProblem:
    """Chain problem over the rows of one column (1 <= column <= m)."""
    if not 1 <= column <= img.width:
        raise ValueError(f"column {column} out of range 1..{img.width}")
    w, e = _order_terms(params, weights, exponents)
    n, rho = img.height, params.rho
    offsets = labels_for(rho)
    num = offsets.size
    win = _column_windows(img, column, rho)

    unary = np.broadcast_to(params.alpha * offsets.astype(np.float64) ** 2, (n, num))
    pair = None
    if n >= 2:
        diff = win[1:, None, :, :] - win[:-1, :, None, :]
        pair = w[0] * powsum(diff, e[0], axis=3)  # (n-1, Lprev, Lcur)
    tern = None
    if params.order == 2 and n >= 3:
        diff2 = (
            win[2:, None, None, :, :]
            - 2.0 * win[1:-1, None, :, None, :]
            + win[:-2, :, None, None, :]
        )
        tern = w[1] * powsum(diff2, e[1], axis=4)  # (n-2, L, L, L)
    return ChainProblem.from_arrays(np.array(unary), pair, tern)


def reconstruct_line_pixel(img: Image, field: ScalarField) -> Image:
    """out(i, j) = sample(img, i - d_{i,j}, j)."""
    if (field.height, field.width) != (img.height, img.width):
        raise ValueError("field dimensions do not match the image")
    return warp_horizontal(img, -field.values)


def dejitter_line_pixel(
    img: Image, params: EnergyParams, weights=None, exponents=None, threads: int = 1
):
    """Solve all column chains; returns (field, reconstruction, energy).

    Columns may be solved in parallel (``threads``); results are written to
    per-column slots and the energy is summed in column order, so the output
    is independent of scheduling.
    """
    solve = solve_chain_ternary if params.order == 2 else solve_chain

    def solve_column(i):
        sol = solve(build_column_problem(img, i, params, weights, exponents))
        return sol.labels - params.rho, sol.energy

    columns = range(1, img.width + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve_column, columns))
    else:
        results = [solve_column(i) for i in columns]

    values = np.stack([lab for lab, _ in results], axis=1)  # (n, m)
    energy = 0.0
    for _, col_energy in results:
        energy += col_energy
    field = ScalarField(values, rho=params.rho)
    return field, reconstruct_line_pixel(img, field), energy
