"""Binary-input discrete channels and their sorted-posterior view."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import (
    AllOutputsZero,
    IndexOutOfRange,
    MassNotNormalizable,
    NegativeEntry,
    PriorInconsistent,
    ShapeMismatch,
)

INPUT_TOL = 1e-6


@dataclass(frozen=True)
class BinaryInputChannel:
    """Joint distribution p(x_n, y_j) of a channel with two inputs.

    ``joint`` has one row per channel output and one column per input,
    so ``joint[j, n] = p(x_n, y_j)``.
    """

    prior: NDArray[np.float64]
    joint: NDArray[np.float64]

    @property
    def M(self) -> int:
        return self.joint.shape[0]

    @property
    def output_marginal(self) -> NDArray[np.float64]:
        return self.joint.sum(axis=1)

    def likelihood(self) -> NDArray[np.float64]:
        """p(y_j | x_n) as a 2 x M array; columns of a zero-prior input are zero."""
        out = np.zeros((2, self.M))
        for n in range(2):
            if self.prior[n] > 0:
                out[n] = self.joint[:, n] / self.prior[n]
        return out


def validate_channel(raw: ArrayLike, prior: ArrayLike | None = None) -> BinaryInputChannel:
    """Check and normalize an M x 2 joint matrix.

    A total mass within 1e-6 of one is rescaled to exactly one; anything
    further off is rejected. A supplied prior must match the column sums.
    """
    joint = np.array(raw, dtype=np.float64)
    if joint.ndim != 2 or joint.shape[1] != 2 or joint.shape[0] < 1:
        raise ShapeMismatch(f"joint must be M x 2 with M >= 1, got shape {joint.shape}")
    if not np.all(np.isfinite(joint)):
        raise NegativeEntry("joint contains non-finite entries")
    if np.any(joint < 0):
        raise NegativeEntry("joint contains negative entries")
    total = float(joint.sum())
    if abs(total - 1.0) > INPUT_TOL:
        raise MassNotNormalizable(f"total mass {total!r} is not within {INPUT_TOL} of 1")
    joint = joint / total
    marginal = joint.sum(axis=0)
    if prior is not None:
        given = np.array(prior, dtype=np.float64)
        if given.shape != (2,):
            raise ShapeMismatch(f"prior must have 2 entries, got shape {given.shape}")
        if np.any(given < 0):
            raise NegativeEntry("prior contains negative entries")
        if np.max(np.abs(given - marginal)) > INPUT_TOL:
            raise PriorInconsistent(
                f"prior {given.tolist()} disagrees with joint marginal {marginal.tolist()}"
            )
    joint.setflags(write=False)
    marginal.setflags(write=False)
    return BinaryInputChannel(prior=marginal, joint=joint)


def channel_from_likelihood(prior: ArrayLike, likelihood: ArrayLike) -> BinaryInputChannel:
    """Build a channel from p(x) and the 2 x M conditional rows p(y | x)."""
    p = np.array(prior, dtype=np.float64)
    lik = np.array(likelihood, dtype=np.float64)
    if p.shape != (2,) or lik.ndim != 2 or lik.shape[0] != 2:
        raise ShapeMismatch(
            f"expected prior of shape (2,) and likelihood of shape (2, M), "
            f"got {p.shape} and {lik.shape}"
        )
    if np.any(p < 0) or np.any(lik < 0):
        raise NegativeEntry("prior and likelihood must be nonnegative")
    return validate_channel((p[:, None] * lik).T, prior=p)


def channel_from_dict(data: dict) -> BinaryInputChannel:
    """Parse the JSON channel schema (either a ``joint`` or a ``likelihood`` key)."""
    if "joint" in data:
        return validate_channel(data["joint"], data.get("prior"))
    if "likelihood" in data:
        if "prior" not in data:
            raise ShapeMismatch("a likelihood channel needs an explicit prior")
        return channel_from_likelihood(data["prior"], data["likelihood"])
    raise ShapeMismatch("channel must contain a 'joint' or 'likelihood' entry")


def load_channel(path: str | Path) -> BinaryInputChannel:
    with open(path) as fh:
        return channel_from_dict(json.load(fh))


def channel_to_dict(ch: BinaryInputChannel) -> dict:
    return {"prior": ch.prior.tolist(), "joint": ch.joint.tolist()}


@dataclass(frozen=True)
class SortedChannel:
    """Channel outputs re-indexed by ascending p(x_1 | y), with prefix sums.

    ``perm[t]`` is the original output index at sorted position ``t``.
    ``prefix[t]`` holds the joint mass of the first ``t`` sorted outputs.
    """

    source: BinaryInputChannel
    perm: NDArray[np.intp]
    posterior: NDArray[np.float64]
    prefix: NDArray[np.float64]
    dropped: tuple[int, ...]
    # plain-float copies of the prefix columns for the scalar hot loops
    _p1: list[float] = field(repr=False, compare=False, default_factory=list)
    _p2: list[float] = field(repr=False, compare=False, default_factory=list)

    @property
    def M(self) -> int:
        """Number of retained outputs."""
        return len(self.perm)

    @property
    def joint(self) -> NDArray[np.float64]:
        """Joint rows in sorted order."""
        return self.source.joint[self.perm]


def sort_by_posterior(ch: BinaryInputChannel) -> SortedChannel:
    """Drop zero-mass outputs and stably sort the rest by p(x_1 | y)."""
    mass = ch.output_marginal
    keep = np.flatnonzero(mass > 0)
    if keep.size == 0:
        raise AllOutputsZero("every channel output has zero probability")
    dropped = tuple(int(j) for j in np.flatnonzero(mass <= 0))
    post = ch.joint[keep, 0] / mass[keep]
    order = np.argsort(post, kind="stable")
    perm = keep[order]
    posterior = post[order]
    prefix = np.zeros((perm.size + 1, 2))
    np.cumsum(ch.joint[perm], axis=0, out=prefix[1:])
    for arr in (perm, posterior, prefix):
        arr.setflags(write=False)
    return SortedChannel(
        source=ch,
        perm=perm,
        posterior=posterior,
        prefix=prefix,
        dropped=dropped,
        _p1=prefix[:, 0].tolist(),
        _p2=prefix[:, 1].tolist(),
    )


def _check_range(sc: SortedChannel, i: int, j: int) -> None:
    if not (0 <= i <= j <= sc.M):
        raise IndexOutOfRange(f"need 0 <= i <= j <= {sc.M}, got i={i}, j={j}")


def range_mass(sc: SortedChannel, i: int, j: int) -> tuple[float, float]:
    """Joint mass (P_1, P_2) of the sorted outputs in positions (i, j]."""
    _check_range(sc, i, j)
    if i == j:
        return 0.0, 0.0
    return sc._p1[j] - sc._p1[i], sc._p2[j] - sc._p2[i]


def original_assignment(sc: SortedChannel, labels: Sequence[int]) -> dict[int, int]:
    """Map sorted-position labels back to original output indices."""
    return {int(sc.perm[t]): int(lab) for t, lab in enumerate(labels)}


def random_channel(M: int, seed: int | None = None, zero_rows: int = 0) -> BinaryInputChannel:
    """Joint drawn uniformly from the simplex over the 2M cells.

    ``zero_rows`` outputs (chosen at random) are forced to zero mass.
    """
    rng = np.random.default_rng(seed)
    joint = rng.dirichlet(np.ones(2 * M)).reshape(M, 2)
    if zero_rows:
        joint[rng.choice(M, size=zero_rows, replace=False)] = 0.0
        joint /= joint.sum()
    return validate_channel(joint)
