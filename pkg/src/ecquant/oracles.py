"""Independent checks on quantizer optimality.

The exhaustive searches here deliberately avoid the prefix-sum machinery
used by the dynamic program: cluster masses are re-summed from the joint
rows, and entropies go through numpy rather than the scalar helpers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.special import xlogy

from .channel import SortedChannel
from .errors import (
    EmptyCluster,
    IndexOutOfRange,
    InvalidK,
    InvalidQuantizer,
    TooLarge,
    ZeroMassOutput,
)
from .quantizer import ThresholdQuantizer

ENUMERATION_LIMIT = 10**7
OPTIMALITY_TOL = 1e-9
_LN2 = math.log(2.0)


def lagrangian_from_joint(pxz: NDArray[np.float64], beta: float) -> NDArray[np.float64]:
    """beta*H(X|Z) + H(Z) for joints of shape (..., K, 2), vectorized over leading axes."""
    pz = pxz.sum(axis=-1)
    cond = -(xlogy(pxz, pxz).sum(axis=(-1, -2)) - xlogy(pz, pz).sum(axis=-1)) / _LN2
    out = -xlogy(pz, pz).sum(axis=-1) / _LN2
    return beta * cond + out


# -- optimality condition ---------------------------------------------------


@dataclass(frozen=True)
class OptimalityReport:
    satisfied: bool
    worst_violation: float
    per_output: list[tuple[int, int, int, float]] = field(default_factory=list)
    tolerance: float = OPTIMALITY_TOL


Assignment = Union[ThresholdQuantizer, Sequence[int]]


def _labels(sc: SortedChannel, q: Assignment) -> tuple[NDArray[np.intp], int]:
    """Per-position cluster labels and cluster count for a quantizer or raw labeling."""
    if isinstance(q, ThresholdQuantizer):
        q.check(sc)
        return q.labels(), q.K
    labels = np.asarray(q, dtype=np.intp)
    if labels.shape != (sc.M,) or (labels.size and labels.min() < 0):
        raise InvalidQuantizer(f"need {sc.M} nonnegative labels, got {labels.tolist()}")
    return labels, int(labels.max()) + 1


def lemma1_distance(sc: SortedChannel, q: Assignment, t: int, l: int, beta: float) -> float:
    """Assignment distance from sorted output ``t`` to cluster ``l`` (0-based).

    ``beta * KL(p(x|y_t) || p(x|z_l)) - log2 p(z_l)``, in bits. Defined only
    up to an additive constant per output, so only differences between
    clusters for the same ``t`` are meaningful. ``q`` may be a threshold
    quantizer or any labeling of the sorted positions.
    """
    labels, K = _labels(sc, q)
    if not 0 <= t < sc.M:
        raise IndexOutOfRange(f"sorted position {t} outside 0..{sc.M - 1}")
    if not 0 <= l < K:
        raise IndexOutOfRange(f"cluster {l} outside 0..{K - 1}")
    return _distance(sc, labels, t, l, beta)


def _distance(sc: SortedChannel, labels: NDArray[np.intp], t: int, l: int, beta: float) -> float:
    member = labels == l
    if not member.any():
        raise EmptyCluster(f"cluster {l} is empty")
    y1, y2 = (float(v) for v in sc.joint[t])
    wy = float(y1 + y2)
    if wy <= 0:
        raise ZeroMassOutput(f"sorted output {t} has zero probability")
    c1, c2 = (float(v) for v in sc.joint[member].sum(axis=0))
    wz = c1 + c2
    constraint = -math.log2(wz)
    if beta == 0:
        return constraint
    kl = 0.0
    for py, pz in ((y1 / wy, c1 / wz), (y2 / wy, c2 / wz)):
        if py > 0:
            if pz <= 0:
                return math.inf
            kl += py * math.log2(py / pz)
    return beta * kl + constraint


def check_optimality_condition(
    sc: SortedChannel, q: Assignment, beta: float, tol: float = OPTIMALITY_TOL
) -> OptimalityReport:
    """Check that every output sits in a cluster minimizing its assignment distance.

    This is a necessary condition for optimality. Only nonempty clusters
    are candidates; with a single nonempty cluster the check passes trivially.
    """
    labels, K = _labels(sc, q)
    live = [k for k in range(K) if np.any(labels == k)]
    if not live:
        raise EmptyCluster("quantizer has no nonempty cluster")
    rows = []
    worst = 0.0
    for t in range(sc.M):
        own = int(labels[t])
        dists = {k: _distance(sc, labels, t, k, beta) for k in live}
        others = [k for k in live if k != own]
        if others:
            best_other = min(others, key=lambda k: (dists[k], k))
            margin = dists[best_other] - dists[own]
        else:
            margin = math.inf
        best = min(live, key=lambda k: (dists[k], k))
        rows.append((t, own, best, margin))
        worst = max(worst, -margin)
    return OptimalityReport(satisfied=worst <= tol, worst_violation=worst, per_output=rows, tolerance=tol)


# -- exhaustive searches ----------------------------------------------------


def _cluster_cost_table(sc: SortedChannel, beta: float) -> NDArray[np.float64]:
    """table[a, b] = cost of sorted positions a..b-1 as one cluster, by direct summation."""
    M = sc.M
    joint = sc.joint
    table = np.zeros((M + 1, M + 1))
    for a in range(M + 1):
        for b in range(a + 1, M + 1):
            mass = joint[a:b].sum(axis=0)
            table[a, b] = lagrangian_from_joint(mass[None, :], beta)
    return table


def count_cut_vectors(M: int, K: int) -> int:
    return math.comb(M + K - 1, K - 1)


def brute_force_contiguous(
    sc: SortedChannel, K: int, beta: float
) -> tuple[ThresholdQuantizer, float]:
    """Exact minimum over every nondecreasing cut vector (empty clusters allowed)."""
    if K < 1:
        raise InvalidK(f"K must be >= 1, got {K}")
    M = sc.M
    n = count_cut_vectors(M, K)
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"{n} cut vectors exceed the limit of {ENUMERATION_LIMIT}")
    table = _cluster_cost_table(sc, beta)
    best_val = math.inf
    best_cuts = None
    for inner in itertools.combinations_with_replacement(range(M + 1), K - 1):
        cuts = (0, *inner, M)
        val = sum(table[a, b] for a, b in zip(cuts, cuts[1:]))
        if val < best_val:
            best_val = float(val)
            best_cuts = cuts
    return ThresholdQuantizer(best_cuts), best_val


def brute_force_unrestricted(
    sc: SortedChannel, K: int, beta: float, chunk: int = 1 << 15
) -> float:
    """Exact minimum over all K**M' deterministic assignments, contiguous or not."""
    if K < 1:
        raise InvalidK(f"K must be >= 1, got {K}")
    M = sc.M
    total = K**M
    if total > ENUMERATION_LIMIT:
        raise TooLarge(f"{total} assignments exceed the limit of {ENUMERATION_LIMIT}")
    joint = sc.joint
    powers = K ** np.arange(M - 1, -1, -1)
    best = math.inf
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        labels = (codes[:, None] // powers[None, :]) % K
        onehot = labels[:, :, None] == np.arange(K)[None, None, :]
        pxz = np.einsum("cjk,jn->ckn", onehot.astype(np.float64), joint)
        best = min(best, float(lagrangian_from_joint(pxz, beta).min()))
    return best


# -- stochastic relaxation --------------------------------------------------


def stochastic_objective(sc: SortedChannel, Q: NDArray[np.float64], beta: float) -> NDArray[np.float64]:
    """Objective of row-stochastic quantizer matrices ``Q`` of shape (..., M', K)."""
    pxz = np.einsum("...jk,jn->...kn", Q, sc.joint)
    return lagrangian_from_joint(pxz, beta)


def sample_stochastic_objective(
    sc: SortedChannel, K: int, beta: float, seed: int = 0, count: int = 1000
) -> NDArray[np.float64]:
    """Objectives of ``count`` random stochastic quantizers drawn uniformly per row."""
    rng = np.random.default_rng(seed)
    draws = rng.exponential(size=(count, sc.M, K))
    Q = draws / draws.sum(axis=-1, keepdims=True)
    return stochastic_objective(sc, Q, beta)


def deterministic_matrix(q: ThresholdQuantizer) -> NDArray[np.float64]:
    Q = np.zeros((q.M, q.K))
    Q[np.arange(q.M), q.labels()] = 1.0
    return Q

