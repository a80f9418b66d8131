"""Global removal of line jitter: one chain DP over the image rows.

The unknowns are one integer shift per row in {-rho..rho}.  Unary costs are
the squared-displacement penalty, pairwise costs the p-powers of first-order
vertical differences of the candidate reconstruction, and (for order 2)
ternary costs the second-order differences.  The data sums run over all
columns, including out-of-range zero reads, so border pixels compare against
black; the squared-displacement term is the model's counterweight there.
"""

from __future__ import annotations

import numpy as np

from .chain import ChainProblem, solve_chain, solve_chain_ternary
from .fields import EnergyParams, LineDisplacement, labels_for
from .image import Image, powsum, warp_rows

# precomputing every shifted-row stack costs n*L*m*D floats; beyond this
# budget the stacks are rebuilt per row instead
DEFAULT_CACHE_BYTES = 1 << 28


def _order_terms(params: EnergyParams, weights, exponents):
    w = tuple(weights) if weights is not None else (1.0,) * params.order
    e = tuple(exponents) if exponents is not None else (params.p,) * params.order
    if len(w) != params.order or len(e) != params.order:
        raise ValueError(f"need {params.order} per-order weights/exponents")
    if any(wi < 0 for wi in w) or any(pi <= 0 for pi in e):
        raise ValueError("weights must be non-negative and exponents positive")
    return w, e


def build_line_problem(
    img: Image,
    params: EnergyParams,
    weights=None,
    exponents=None,
    cache_bytes: int = DEFAULT_CACHE_BYTES,
) -> ChainProblem:
    """Chain problem over the rows of ``img`` with labels {-rho..rho}.

    ``weights`` and ``exponents`` optionally give each derivative order its
    own weight and p; both default to uniform.
    """
    w, e = _order_terms(params, weights, exponents)
    n, m, rho = img.height, img.width, params.rho
    offsets = labels_for(rho)
    num = offsets.size
    padded = np.pad(img.data, ((0, 0), (rho, rho), (0, 0)))

    def shifted_stack(j):
        # (L, m, D): row j of the reconstruction for each candidate shift
        row = padded[j - 1]
        return np.stack([row[rho - d : rho - d + m] for d in offsets])

    unary = np.broadcast_to(params.alpha * offsets.astype(np.float64) ** 2, (n, num))

    eager = n * num * m * img.channels * 8 <= cache_bytes
    if eager:
        stacks = [shifted_stack(j) for j in range(1, n + 1)]
        shifted_stack = lambda j: stacks[j - 1]

    def pairwise(j):
        diff = shifted_stack(j)[None, :] - shifted_stack(j - 1)[:, None]
        return w[0] * powsum(diff, e[0], axis=(2, 3))

    ternary = None
    if params.order == 2:
        def ternary(j):
            base = shifted_stack(j)[None, :] - 2.0 * shifted_stack(j - 1)[:, None]
            prev2 = shifted_stack(j - 2)
            table = np.empty((num, num, num))
            for a in range(num):
                table[a] = w[1] * powsum(base + prev2[a], e[1], axis=(2, 3))
            return table

    return ChainProblem(n, num, lambda j: unary[j - 1], pairwise, ternary)


def reconstruct_line(img: Image, d: LineDisplacement) -> Image:
    """out(i, j) = sample(img, i - d_j, j)."""
    if len(d) != img.height:
        raise ValueError(f"displacement length {len(d)} does not match height {img.height}")
    return warp_rows(img, -d.values)


def dejitter_line(img: Image, params: EnergyParams, weights=None, exponents=None):
    """Globally optimal line-jitter removal; returns (displacement, reconstruction, energy).

    Time O(m n L^q) and memory O(n L^{q-1}) for L = 2 rho + 1 labels, where
    q is 2 for order 1 and 3 for order 2.
    """
    problem = build_line_problem(img, params, weights, exponents)
    if params.order == 2:
        sol = solve_chain_ternary(problem)
    else:
        sol = solve_chain(problem)
    d = LineDisplacement(sol.labels - params.rho, rho=params.rho)
    return d, reconstruct_line(img, d), sol.energy
