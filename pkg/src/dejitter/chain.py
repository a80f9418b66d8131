"""Exact minimisation of chain energies with unary, pairwise and ternary costs.

A labelling x in {0..L-1}^n is scored as

    sum_j phi_j(x_j) + sum_{j>=2} psi_j(x_{j-1}, x_j) + sum_{j>=3} omega_j(x_{j-2}, x_{j-1}, x_j)

and the solvers return a global minimiser by dynamic programming over the
elements: O(n L^2) time for pairwise chains, O(n L^3) with ternary terms.

Costs are consumed through per-element table providers so callers can either
precompute arrays or evaluate on the fly; element indices j are 1-based.
Tie-breaking is fixed: among equal-cost predecessors the smallest label index
wins, and so does the smallest final state, which makes results deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

TableProvider = Callable[[int], np.ndarray]


@dataclass(frozen=True)
class ChainProblem:
    """A sequence-labelling instance over n elements and L labels.

    ``unary(j)`` returns the (L,) cost vector of element j (1 <= j <= n),
    ``pairwise(j)`` the (L, L) cost table indexed [label of j-1, label of j]
    (2 <= j <= n), and ``ternary(j)`` the (L, L, L) table indexed
    [j-2, j-1, j] (3 <= j <= n).  ``None`` means the costs are identically
    zero.
    """

    length: int
    num_labels: int
    unary: TableProvider
    pairwise: Optional[TableProvider] = None
    ternary: Optional[TableProvider] = None

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"need at least one element, got n={self.length}")
        if self.num_labels < 1:
            raise ValueError(f"need at least one label, got L={self.num_labels}")

    @classmethod
    def from_arrays(cls, unary, pairwise=None, ternary=None) -> "ChainProblem":
        """Build from dense cost arrays of shapes (n,L), (n-1,L,L), (n-2,L,L,L)."""
        unary = np.asarray(unary, dtype=np.float64)
        if unary.ndim != 2:
            raise ValueError(f"unary costs must be (n, L), got shape {unary.shape}")
        n, num = unary.shape
        pw_provider = None
        if pairwise is not None:
            pairwise = np.asarray(pairwise, dtype=np.float64)
            if pairwise.shape != (n - 1, num, num):
                raise ValueError(
                    f"pairwise costs must be {(n - 1, num, num)}, got {pairwise.shape}"
                )
            pw_provider = lambda j, _t=pairwise: _t[j - 2]
        tern_provider = None
        if ternary is not None:
            ternary = np.asarray(ternary, dtype=np.float64)
            if ternary.shape != (n - 2, num, num, num):
                raise ValueError(
                    f"ternary costs must be {(n - 2, num, num, num)}, got {ternary.shape}"
                )
            tern_provider = lambda j, _t=ternary: _t[j - 3]
        return cls(n, num, lambda j, _t=unary: _t[j - 1], pw_provider, tern_provider)

    @classmethod
    def from_functions(cls, n, num_labels, phi, psi=None, omega=None) -> "ChainProblem":
        """Build from scalar cost functions phi(j, l), psi(j, lp, l), omega(j, lpp, lp, l)."""
        rng = range(num_labels)

        def unary(j):
            return np.asarray([phi(j, l) for l in rng], dtype=np.float64)

        pw = None
        if psi is not None:
            def pw(j):
                return np.asarray(
                    [[psi(j, lp, l) for l in rng] for lp in rng], dtype=np.float64
                )

        tern = None
        if omega is not None:
            def tern(j):
                return np.asarray(
                    [[[omega(j, lpp, lp, l) for l in rng] for lp in rng] for lpp in rng],
                    dtype=np.float64,
                )

        return cls(n, num_labels, unary, pw, tern)


@dataclass(frozen=True)
class ChainSolution:
    """A labelling and its energy; energy always equals evaluate() of the labels."""

    labels: np.ndarray
    energy: float


def evaluate(problem: ChainProblem, labels) -> float:
    """Energy of a labelling, summed in ascending element order."""
    labels = np.asarray(labels, dtype=np.int64)
    n, num = problem.length, problem.num_labels
    if labels.shape != (n,):
        raise ValueError(f"expected {n} labels, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= num):
        raise ValueError(f"labels must lie in 0..{num - 1}")
    total = 0.0
    for j in range(1, n + 1):
        total += float(problem.unary(j)[labels[j - 1]])
    if problem.pairwise is not None:
        for j in range(2, n + 1):
            total += float(problem.pairwise(j)[labels[j - 2], labels[j - 1]])
    if problem.ternary is not None:
        for j in range(3, n + 1):
            total += float(problem.ternary(j)[labels[j - 3], labels[j - 2], labels[j - 1]])
    return total


def solve_chain(problem: ChainProblem) -> ChainSolution:
    """Globally minimise a pairwise chain; O(n L^2) time, O(n L) memory."""
    if problem.ternary is not None:
        raise ValueError("problem has ternary costs, use solve_chain_ternary")
    n, num = problem.length, problem.num_labels
    labels = np.empty(n, dtype=np.int64)
    if n == 1:
        labels[0] = int(np.argmin(problem.unary(1)))
        return ChainSolution(labels, evaluate(problem, labels))

    args = np.empty((n, num), dtype=np.int64)
    cost = np.asarray(problem.unary(1), dtype=np.float64).copy()
    for j in range(2, n + 1):
        if problem.pairwise is not None:
            trans = cost[:, None] + np.asarray(problem.pairwise(j), dtype=np.float64)
        else:
            trans = np.broadcast_to(cost[:, None], (num, num))
        args[j - 1] = np.argmin(trans, axis=0)
        cost = np.asarray(problem.unary(j), dtype=np.float64) + np.min(trans, axis=0)

    labels[n - 1] = int(np.argmin(cost))
    for j in range(n - 1, 0, -1):
        labels[j - 1] = args[j, labels[j]]
    return ChainSolution(labels, evaluate(problem, labels))


def solve_chain_ternary(problem: ChainProblem) -> ChainSolution:
    """Globally minimise a chain with ternary terms; O(n L^3) time, O(n L^2) memory.

    The state is the label pair of the last two elements.  For n < 3 or a
    problem without ternary costs this coincides with solve_chain.
    """
    n, num = problem.length, problem.num_labels
    if problem.ternary is None or n < 3:
        reduced = ChainProblem(n, num, problem.unary, problem.pairwise)
        return solve_chain(reduced)

    def pair_table(j):
        if problem.pairwise is None:
            return np.zeros((num, num))
        return np.asarray(problem.pairwise(j), dtype=np.float64)

    # cost[a, b] = best energy of elements 1..j with (x_{j-1}, x_j) = (a, b)
    cost = (
        np.asarray(problem.unary(1), dtype=np.float64)[:, None]
        + np.asarray(problem.unary(2), dtype=np.float64)[None, :]
        + pair_table(2)
    )
    args = np.empty((n, num, num), dtype=np.int64)
    for j in range(3, n + 1):
        tern = np.asarray(problem.ternary(j), dtype=np.float64)
        reach = cost[:, :, None] + tern  # (x_{j-2}, x_{j-1}, x_j)
        args[j - 1] = np.argmin(reach, axis=0)
        cost = (
            np.asarray(problem.unary(j), dtype=np.float64)[None, :]
            + pair_table(j)
            + np.min(reach, axis=0)
        )

    flat = int(np.argmin(cost))
    labels = np.empty(n, dtype=np.int64)
    labels[n - 2], labels[n - 1] = divmod(flat, num)
    for j in range(n, 2, -1):
        labels[j - 3] = args[j - 1, labels[j - 2], labels[j - 1]]
    return ChainSolution(labels, evaluate(problem, labels))
