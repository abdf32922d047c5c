"""Wilcoxon signed-rank test for paired differences.

Zeros are dropped.  Small samples (up to 20 nonzero pairs) use the exact
null distribution of the rank sum, computed by dynamic programming over
doubled midranks so rank ties stay on an integer grid.  Larger samples
use the normal approximation with tie and continuity corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

EXACT_LIMIT = 20


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float          # min of the positive/negative rank sums
    p_value: float            # two-sided
    n_nonzero: int
    method: str               # "exact", "approx" or "degenerate"

    @property
    def degenerate(self) -> bool:
        return self.method == "degenerate"


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_cdf_at(doubled_ranks: list[int], doubled_w: int) -> float:
    """P(rank sum <= w) under the null, on the doubled-rank integer grid."""
    total = sum(doubled_ranks)
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    doubled_w = min(doubled_w, total)
    return counts[: doubled_w + 1].sum() / 2.0 ** len(doubled_ranks)


def wilcoxon_signed_rank(diffs: Sequence[float]) -> WilcoxonResult:
    d = np.asarray(list(diffs), dtype=float)
    d = d[d != 0.0]
    n = len(d)
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, n_nonzero=0, method="degenerate")

    ranks = _midranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)

    if n <= EXACT_LIMIT:
        doubled = [int(round(2 * r)) for r in ranks]
        p = 2.0 * _exact_cdf_at(doubled, int(round(2 * w)))
        return WilcoxonResult(statistic=w, p_value=min(1.0, p), n_nonzero=n, method="exact")

    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var -= float(((tie_counts**3 - tie_counts) / 48.0).sum())
    if var <= 0:
        return WilcoxonResult(statistic=w, p_value=1.0, n_nonzero=n, method="degenerate")
    z = (w - mean + 0.5) / math.sqrt(var)
    p = math.erfc(-z / math.sqrt(2.0))
    return WilcoxonResult(statistic=w, p_value=min(1.0, p), n_nonzero=n, method="approx")
