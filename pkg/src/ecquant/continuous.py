"""Binary-input channels with a continuous scalar output.

The output is binned onto a uniform grid so the discrete solver applies.
For K=2 a direct search over the posterior threshold r(y) <= a is also
available, together with a sampled test of likelihood-ratio monotonicity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.special import ndtr

from .channel import BinaryInputChannel, sort_by_posterior, validate_channel
from .cost import CostBreakdown, evaluate_quantizer
from .errors import DegenerateSupport, DensityNegative, ZeroDensityPoint
from .quantizer import ThresholdQuantizer

Density = Callable[[NDArray[np.float64]], NDArray[np.float64]]


# -- density constructors ---------------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DegenerateSupport(f"gaussian sigma must be positive, got {self.sigma}")

    def __call__(self, y):
        z = (np.asarray(y, dtype=np.float64) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi))

    def cdf(self, y):
        return ndtr((np.asarray(y, dtype=np.float64) - self.mu) / self.sigma)


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise DegenerateSupport(f"uniform needs a < b, got [{self.a}, {self.b}]")

    def __call__(self, y):
        y = np.asarray(y, dtype=np.float64)
        return np.where((y >= self.a) & (y <= self.b), 1.0 / (self.b - self.a), 0.0)

    def cdf(self, y):
        y = np.asarray(y, dtype=np.float64)
        return np.clip((y - self.a) / (self.b - self.a), 0.0, 1.0)


@dataclass(frozen=True)
class Mixture:
    weights: tuple[float, ...]
    components: tuple[Density, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.components) or not self.weights:
            raise DegenerateSupport("mixture needs one weight per component")
        if any(w < 0 for w in self.weights):
            raise DensityNegative("mixture weights must be nonnegative")
        total = sum(self.weights)
        object.__setattr__(self, "weights", tuple(w / total for w in self.weights))

    def __call__(self, y):
        return sum(w * c(y) for w, c in zip(self.weights, self.components))

    def cdf(self, y):
        return sum(w * c.cdf(y) for w, c in zip(self.weights, self.components))


def gaussian(mu: float, sigma: float) -> Gaussian:
    return Gaussian(float(mu), float(sigma))


def uniform(a: float, b: float) -> Uniform:
    return Uniform(float(a), float(b))


def mixture(weights: Sequence[float], components: Sequence[Density]) -> Mixture:
    return Mixture(tuple(float(w) for w in weights), tuple(components))


# -- channel spec -----------------------------------------------------------


@dataclass(frozen=True)
class ContinuousChannelSpec:
    prior: tuple[float, float]
    density1: Density
    density2: Density
    support: tuple[float, float]
    bins: int

    def __post_init__(self):
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DegenerateSupport(f"support must satisfy lo < hi, got {self.support}")
        if int(self.bins) != self.bins or self.bins < 2:
            raise DegenerateSupport(f"need at least 2 bins, got {self.bins}")
        p = self.prior
        if len(p) != 2 or min(p) < 0 or abs(sum(p) - 1.0) > 1e-6:
            raise DegenerateSupport(f"prior must be a probability 2-vector, got {p}")

    @property
    def densities(self) -> tuple[Density, Density]:
        return self.density1, self.density2

    def edges(self) -> NDArray[np.float64]:
        lo, hi = self.support
        return np.linspace(lo, hi, int(self.bins) + 1)


def fig2_spec(bins: int = 200) -> ContinuousChannelSpec:
    """Antipodal inputs -2/+2 in unit-variance Gaussian noise, equal priors, binned on [-10, 10]."""
    return ContinuousChannelSpec(
        prior=(0.5, 0.5),
        density1=gaussian(-2.0, 1.0),
        density2=gaussian(2.0, 1.0),
        support=(-10.0, 10.0),
        bins=bins,
    )


@dataclass(frozen=True)
class DiscretizedChannel(BinaryInputChannel):
    """A binned continuous channel; row j of ``joint`` is bin j in ascending y."""

    edges: NDArray[np.float64] = field(default=None, repr=False)
    midpoints: NDArray[np.float64] = field(default=None, repr=False)


def discretize(spec: ContinuousChannelSpec, rule: str = "midpoint") -> DiscretizedChannel:
    """Bin the output onto ``spec.bins`` equal-width cells.

    With ``rule="midpoint"`` a cell's weight under input n is
    ``phi_n(midpoint) * width``; ``rule="cdf"`` integrates the density
    exactly and needs densities with a ``cdf`` method. Each input's column
    is then rescaled to total ``prior[n]``, so truncation of the tails is
    absorbed without disturbing the prior.
    """
    edges = spec.edges()
    mids = 0.5 * (edges[:-1] + edges[1:])
    width = edges[1] - edges[0]
    cols = []
    for n, dens in enumerate(spec.densities):
        if rule == "midpoint":
            w = np.asarray(dens(mids), dtype=np.float64) * width
        elif rule == "cdf":
            if not hasattr(dens, "cdf"):
                raise TypeError(f"density {dens!r} has no cdf; use rule='midpoint'")
            w = np.diff(np.asarray(dens.cdf(edges), dtype=np.float64))
        else:
            raise ValueError(f"unknown discretization rule {rule!r}")
        if np.any(~np.isfinite(w)) or np.any(w < 0):
            raise DensityNegative(f"density {n + 1} is negative or non-finite on the support")
        mass = float(w.sum())
        if abs(mass - 1.0) > 1e-3:
            warnings.warn(
                f"density {n + 1} has mass {mass:.6f} on the support; renormalizing",
                stacklevel=2,
            )
        p = spec.prior[n]
        if p > 0 and mass <= 0:
            raise DegenerateSupport(f"density {n + 1} has no mass on the support")
        cols.append(p * w / mass if p > 0 else np.zeros_like(w))
    base = validate_channel(np.stack(cols, axis=1), prior=spec.prior)
    edges.setflags(write=False)
    mids.setflags(write=False)
    return DiscretizedChannel(prior=base.prior, joint=base.joint, edges=edges, midpoints=mids)


def posterior_ratio(spec: ContinuousChannelSpec, y: float) -> float:
    """r(y) = p(x_1 | y) under the continuous model."""
    a = spec.prior[0] * float(spec.density1(y))
    b = spec.prior[1] * float(spec.density2(y))
    if not a + b > 0:
        raise ZeroDensityPoint(f"both inputs have zero density at y={y}")
    return a / (a + b)


class LRCheck(NamedTuple):
    monotone: bool
    direction: str | None
    skipped: tuple[float, ...] = ()
    evidence: str = "sampled"


def is_monotone_lr(spec: ContinuousChannelSpec, grid: int = 1001, tol: float = 1e-12) -> LRCheck:
    """Sampled test of strict monotonicity of phi_2(y) / phi_1(y) on the support.

    A positive answer is evidence from ``grid`` sample points, not a proof.
    Consecutive ratios must differ by more than ``tol`` relative to their
    magnitude; points where phi_1 vanishes are skipped and listed.
    """
    if grid < 3:
        raise ValueError("grid must be at least 3")
    lo, hi = spec.support
    ys = np.linspace(lo, hi, grid)
    f1 = np.asarray(spec.density1(ys), dtype=np.float64)
    f2 = np.asarray(spec.density2(ys), dtype=np.float64)
    ok = f1 > 0
    skipped = tuple(float(y) for y in ys[~ok])
    ratio = f2[ok] / f1[ok]
    if ratio.size < 2:
        return LRCheck(False, None, skipped)
    d = np.diff(ratio)
    scale = np.maximum(np.abs(ratio[:-1]), np.abs(ratio[1:]))
    thresh = tol * np.maximum(scale, 1.0e-300)
    if np.all(d > thresh):
        return LRCheck(True, "increasing", skipped)
    if np.all(d < -thresh):
        return LRCheck(True, "decreasing", skipped)
    return LRCheck(False, None, skipped)


# -- scalar threshold search for K = 2 ---------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    a: float
    y: float | None | tuple[int, ...]
    cost: CostBreakdown
    quantizer: ThresholdQuantizer
    low_bins: tuple[int, ...]


def y_boundary(
    ch: DiscretizedChannel, low_bins: Sequence[int], retained: Sequence[int] | None = None
) -> float | None | tuple[int, ...]:
    """Translate the set of bins with r <= a into y-space.

    Returns the single bin edge separating the two groups when they form
    two intervals, ``None`` when one group is empty, and otherwise the
    sorted tuple of bin indices in the r <= a group. Bins outside
    ``retained`` (zero-mass bins) are ignored.
    """
    idx = np.arange(ch.M) if retained is None else np.sort(np.asarray(retained))
    member = np.isin(idx, np.asarray(list(low_bins), dtype=np.intp))
    switches = np.flatnonzero(member[1:] != member[:-1])
    if switches.size == 0:
        return None
    if switches.size == 1:
        s = switches[0]
        if idx[s + 1] != idx[s] + 1:
            # zero-mass bins sit between the groups; report the gap's midpoint edge
            return float(0.5 * (ch.edges[idx[s] + 1] + ch.edges[idx[s + 1]]))
        return float(ch.edges[idx[s] + 1])
    return tuple(int(j) for j in idx[member])


def scalar_threshold_search(
    spec: ContinuousChannelSpec,
    beta: float,
    steps: int = 1000,
    rule: str = "midpoint",
    channel: DiscretizedChannel | None = None,
) -> ThresholdResult:
    """Grid search over a in {1/steps, ..., (steps-1)/steps} for the best split r(y) <= a.

    Each candidate is scored on the discretized channel; ties keep the
    smallest a.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    ch = channel if channel is not None else discretize(spec, rule)
    sc = sort_by_posterior(ch)
    best = None
    last_count = -1
    for i in range(1, steps):
        a = i / steps
        count = int(np.searchsorted(sc.posterior, a, side="right"))
        if count == last_count:
            continue
        last_count = count
        q = ThresholdQuantizer((0, count, sc.M))
        cb = evaluate_quantizer(sc, q, beta)
        if best is None or cb.objective < best[2].objective:
            best = (a, q, cb)
    a, q, cb = best
    low = tuple(sorted(int(j) for j in sc.perm[: q.cuts[1]]))
    return ThresholdResult(a=a, y=y_boundary(ch, low, sc.perm), cost=cb, quantizer=q, low_bins=low)
