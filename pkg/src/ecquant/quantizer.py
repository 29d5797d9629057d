from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channel import SortedChannel
from .errors import InvalidQuantizer


@dataclass(frozen=True)
class ThresholdQuantizer:
    """Contiguous quantizer given by cut indices into the sorted outputs.

    ``cuts = (a_0, ..., a_K)`` with ``a_0 = 0`` and ``a_K = M'``; cluster
    ``k`` (1-based) holds sorted positions ``a_{k-1} .. a_k - 1``. Repeated
    cuts are allowed and mean an empty cluster.
    """

    cuts: tuple[int, ...]

    def __post_init__(self):
        cuts = tuple(int(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cuts)
        if len(cuts) < 2:
            raise InvalidQuantizer("a quantizer needs at least two cut indices")
        if cuts[0] != 0:
            raise InvalidQuantizer(f"first cut must be 0, got {cuts[0]}")
        if any(b < a for a, b in zip(cuts, cuts[1:])):
            raise InvalidQuantizer(f"cuts must be nondecreasing, got {cuts}")

    @property
    def K(self) -> int:
        return len(self.cuts) - 1

    @property
    def M(self) -> int:
        return self.cuts[-1]

    def clusters(self) -> list[tuple[int, int]]:
        """Half-open ``(start, stop)`` sorted-position ranges, one per cluster."""
        return list(zip(self.cuts[:-1], self.cuts[1:]))

    def nonempty(self) -> list[int]:
        return [k for k, (a, b) in enumerate(self.clusters()) if b > a]

    def labels(self) -> NDArray[np.intp]:
        """0-based cluster index of each sorted position."""
        out = np.empty(self.M, dtype=np.intp)
        for k, (a, b) in enumerate(self.clusters()):
            out[a:b] = k
        return out

    def check(self, sc: SortedChannel) -> None:
        if self.cuts[-1] != sc.M:
            raise InvalidQuantizer(
                f"last cut must equal the number of retained outputs {sc.M}, got {self.cuts[-1]}"
            )

    def posterior_boundaries(self, sc: SortedChannel) -> list[float]:
        """Cut values in posterior space.

        An interior cut sits halfway between the posteriors on either side;
        the outer cuts are reported as 0 and 1.
        """
        self.check(sc)
        out = []
        for a in self.cuts:
            if a == 0:
                out.append(0.0)
            elif a == sc.M:
                out.append(1.0)
            else:
                out.append(0.5 * (float(sc.posterior[a - 1]) + float(sc.posterior[a])))
        return out

    @classmethod
    def from_labels(cls, labels, K: int | None = None) -> "ThresholdQuantizer":
        """Build from per-position labels that are nondecreasing in sorted order."""
        labels = [int(x) for x in labels]
        if any(b < a for a, b in zip(labels, labels[1:])):
            raise InvalidQuantizer("labels are not contiguous in sorted order")
        K = (max(labels) + 1 if labels else 1) if K is None else K
        cuts = [0]
        for k in range(K):
            cuts.append(cuts[-1] + labels.count(k))
        if cuts[-1] != len(labels):
            raise InvalidQuantizer("labels fall outside 0..K-1")
        return cls(tuple(cuts))

    @classmethod
    def identity(cls, M: int) -> "ThresholdQuantizer":
        return cls(tuple(range(M + 1)))
