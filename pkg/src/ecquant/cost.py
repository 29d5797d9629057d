"""Lagrangian cost beta*H(X|Z) + H(Z) of contiguous clusters, in bits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .channel import BinaryInputChannel, SortedChannel, range_mass
from .errors import InvalidQuantizer
from .quantizer import ThresholdQuantizer


def neg_xlog2x(p: float) -> float:
    """-p log2 p with the 0 log 0 = 0 convention."""
    return -p * math.log2(p) if p > 0.0 else 0.0


def entropy_bits(probs) -> float:
    return sum(neg_xlog2x(float(p)) for p in probs)


@dataclass(frozen=True)
class CostBreakdown:
    objective: float
    cond_entropy: float
    out_entropy: float
    mutual_info: float
    beta: float

    def as_dict(self) -> dict:
        return asdict(self)


def prior_entropy(ch: BinaryInputChannel) -> float:
    """H(X) in bits."""
    return entropy_bits(ch.prior)


def cluster_terms(p1: float, p2: float) -> tuple[float, float]:
    """Return (W*H(X | cluster), -W log2 W) for a cluster with joint mass (p1, p2)."""
    w = p1 + p2
    if w <= 0.0:
        return 0.0, 0.0
    cond = 0.0
    if p1 > 0.0:
        cond -= p1 * math.log2(p1 / w)
    if p2 > 0.0:
        cond -= p2 * math.log2(p2 / w)
    return cond, neg_xlog2x(w)


def single_cluster_cost(sc: SortedChannel, i: int, j: int, beta: float) -> float:
    """Cost of merging sorted positions (i, j] into one cluster."""
    p1, p2 = range_mass(sc, i, j)
    cond, out = cluster_terms(p1, p2)
    return beta * cond + out


def evaluate_quantizer(sc: SortedChannel, q: ThresholdQuantizer, beta: float) -> CostBreakdown:
    """Objective and entropy decomposition of a threshold quantizer."""
    if q.cuts[-1] != sc.M:
        raise InvalidQuantizer(
            f"quantizer covers {q.cuts[-1]} outputs but the channel retains {sc.M}"
        )
    objective = cond = out = 0.0
    for a, b in q.clusters():
        c, h = cluster_terms(*range_mass(sc, a, b))
        cond += c
        out += h
        objective += beta * c + h
    return CostBreakdown(
        objective=objective,
        cond_entropy=cond,
        out_entropy=out,
        mutual_info=prior_entropy(sc.source) - cond,
        beta=float(beta),
    )


def breakdown_from_joint(pxz, beta: float, hx: float) -> CostBreakdown:
    """Breakdown for an arbitrary (possibly stochastic) joint p(x, z), given as K rows of (p1, p2)."""
    cond = out = 0.0
    for p1, p2 in pxz:
        c, h = cluster_terms(float(p1), float(p2))
        cond += c
        out += h
    return CostBreakdown(beta * cond + out, cond, out, hx - cond, float(beta))
