"""Globally optimal contiguous quantizer by dynamic programming.

For outputs sorted by posterior, ``cost[j][k]`` is the minimum of
beta*H(X|Z) + H(Z) restricted to the first ``j`` sorted outputs split into
at most ``k`` contiguous clusters::

    cost[j][k] = min_{0 <= q < j} cost[q][k-1] + C(q, j)

where ``C(q, j)`` is the single-cluster cost of positions (q, j]. The
objective is a sum of per-cluster terms, which is what makes the
recursion exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channel import SortedChannel
from .cost import CostBreakdown, evaluate_quantizer
from .errors import InvalidK, QuantizerError
from .quantizer import ThresholdQuantizer

__all__ = ["DpTables", "ThresholdQuantizer", "solve", "objective_curve_in_k", "run_dp"]

_INF = math.inf


@dataclass(frozen=True)
class DpTables:
    cost: NDArray[np.float64]
    decision: NDArray[np.intp]


def _check_args(sc: SortedChannel, K: int, beta: float) -> None:
    if int(K) != K or K < 1:
        raise InvalidK(f"cluster budget must be a positive integer, got {K!r}")
    if not beta >= 0:
        raise QuantizerError(f"beta must be nonnegative, got {beta!r}")
    if sc.M < 1:
        raise QuantizerError("channel has no retained outputs")


def run_dp(sc: SortedChannel, K: int, beta: float) -> DpTables:
    """Fill the cost and decision tables for budgets 0..K.

    Runs in O(K M'^2) time. Each single-cluster cost C(q, j) is computed
    once from prefix sums and shared by every budget k, so only the
    current row of C is held in memory. Ties go to the smallest q.
    """
    _check_args(sc, K, beta)
    K = int(K)
    beta = float(beta)
    M = sc.M
    P1 = sc._p1
    P2 = sc._p2
    log2 = math.log2

    # cost[j][k]; cost[0][k] = 0 and cost[j][0] = inf for j > 0
    cost = [[0.0] * (K + 1)]
    decision = [[0] * (K + 1)]
    for j in range(1, M + 1):
        a1 = P1[j]
        a2 = P2[j]
        row = [0.0] * j
        for q in range(j):
            p1 = a1 - P1[q]
            p2 = a2 - P2[q]
            w = p1 + p2
            c = 0.0
            if w > 0.0:
                h = 0.0
                if p1 > 0.0:
                    h -= p1 * log2(p1 / w)
                if p2 > 0.0:
                    h -= p2 * log2(p2 / w)
                c = beta * h - w * log2(w)
            row[q] = c

        cj = [_INF] * (K + 1)
        dj = [0] * (K + 1)
        for k in range(1, K + 1):
            best = _INF
            arg = 0
            for q in range(j):
                prev = cost[q][k - 1]
                if prev == _INF:
                    continue
                v = prev + row[q]
                if v < best:
                    best = v
                    arg = q
            cj[k] = best
            dj[k] = arg
        cost.append(cj)
        decision.append(dj)

    cost_arr = np.array(cost, dtype=np.float64)
    dec_arr = np.array(decision, dtype=np.intp)
    cost_arr.setflags(write=False)
    dec_arr.setflags(write=False)
    return DpTables(cost=cost_arr, decision=dec_arr)


def backtrack(tables: DpTables, K: int) -> ThresholdQuantizer:
    M = tables.cost.shape[0] - 1
    cuts = [0] * (K + 1)
    cuts[K] = M
    for k in range(K - 1, 0, -1):
        cuts[k] = int(tables.decision[cuts[k + 1], k + 1])
    return ThresholdQuantizer(tuple(cuts))


def solve(
    sc: SortedChannel, K: int, beta: float
) -> tuple[ThresholdQuantizer, CostBreakdown, DpTables]:
    """Optimal quantizer into at most ``K`` clusters for trade-off ``beta``."""
    tables = run_dp(sc, K, beta)
    q = backtrack(tables, int(K))
    return q, evaluate_quantizer(sc, q, beta), tables


def objective_curve_in_k(sc: SortedChannel, K_max: int, beta: float) -> list[float]:
    """Optimal objective for every budget 1..K_max, from a single DP run."""
    tables = run_dp(sc, K_max, beta)
    return [float(v) for v in tables.cost[sc.M, 1:]]
