"""Normalized mutual information between labelings and its average (ANMI).

NMI uses the sample estimator with logarithm base ``k_a * k_b``::

    nmi(a, b) = 2/n * sum_{h,g} n_hg * log_{k_a k_b}(n_hg * n / (n_h * n_g))

Empty cells contribute nothing. When both labelings have a single cluster
the base is 1; they are then the same partition and the value is 1.

The histogram route computes the same number without touching records:
cluster sizes come from the per-cluster histogram totals, the attribute
value counts from the dataset-wide histogram, and the cell counts from the
per-cluster histograms.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .core import Histogram, Labeling, as_labeling


@dataclass
class ContingencyTable:
    counts: np.ndarray  # counts[h, g]

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def to_list(self) -> list[list[int]]:
        return self.counts.tolist()


def contingency(a, b) -> ContingencyTable:
    a, b = as_labeling(a), as_labeling(b)
    if len(a) != len(b):
        raise ValueError(f"labelings differ in length: {len(a)} vs {len(b)}")
    counts = np.zeros((a.num_labels, b.num_labels), dtype=np.int64)
    np.add.at(counts, (a.labels, b.labels), 1)
    return ContingencyTable(counts)


def _nmi_from_cells(cells, row_sizes, col_sizes, n: int, ka: int, kb: int) -> float:
    """Shared core: ``cells`` yields ``(n_hg, h, g)`` for non-empty cells."""
    if ka * kb == 1:
        return 1.0
    # fsum is order independent, which keeps nmi(a, b) == nmi(b, a) bitwise
    acc = math.fsum(c * math.log(c * n / (row_sizes[h] * col_sizes[g]))
                    for c, h, g in cells)
    return 2.0 / n * acc / math.log(ka * kb)


def nmi(a, b) -> float:
    """NMI of two labelings, straight from their contingency table."""
    table = contingency(a, b)
    n = table.total
    if n == 0:
        raise ValueError("nmi of empty labelings is undefined")
    rows = table.row_sums.tolist()
    cols = table.col_sums.tolist()
    counts = table.counts
    cells = ((int(counts[h, g]), h, g)
             for h in range(counts.shape[0]) for g in range(counts.shape[1])
             if counts[h, g])
    return _nmi_from_cells(cells, rows, cols, n, counts.shape[0], counts.shape[1])


def nmi_from_histograms(cluster_hists: Sequence[Histogram | Mapping],
                        cluster_sizes: Sequence[int],
                        attr_hist: Histogram | Mapping,
                        n: int, k: int | None = None) -> float:
    """NMI between a clustering and one attribute labeling, from histograms only.

    ``cluster_hists[h]`` is the histogram of the attribute over cluster ``h``,
    ``attr_hist`` the histogram over the whole dataset.
    """
    sizes = [int(s) for s in cluster_sizes]
    if len(cluster_hists) != len(sizes):
        raise ValueError("one histogram per cluster is required")
    if k is None:
        k = len(sizes)
    if k != len(sizes) or any(s < 1 for s in sizes):
        raise ValueError("k must equal the number of non-empty clusters")
    if sum(sizes) != n:
        raise ValueError(f"cluster sizes sum to {sum(sizes)}, expected n={n}")
    ah = attr_hist.counts if isinstance(attr_hist, Histogram) else attr_hist
    if sum(ah.values()) != n:
        raise ValueError("attribute histogram total differs from n")
    for h, ch in enumerate(cluster_hists):
        cc = ch.counts if isinstance(ch, Histogram) else ch
        if sum(cc.values()) != sizes[h]:
            raise ValueError(f"histogram of cluster {h} disagrees with its size")

    def cells():
        for h, ch in enumerate(cluster_hists):
            cc = ch.counts if isinstance(ch, Histogram) else ch
            for v, c in cc.items():
                if c:
                    yield c, h, v

    kb = sum(1 for f in ah.values() if f)
    return _nmi_from_cells(cells(), sizes, ah, n, k, kb)


def anmi(base: Sequence, candidate) -> float:
    """Mean NMI between ``candidate`` and each labeling in ``base``."""
    if len(base) == 0:
        raise ValueError("anmi needs at least one base labeling")
    cand = as_labeling(candidate)
    total = 0.0
    for lab in base:
        total += nmi(cand, lab)
    return total / len(base)


def xlogx_table(n: int) -> np.ndarray:
    """``t[c] = c * ln(c)`` for ``c = 0..n`` (``t[0] = 0``)."""
    t = np.zeros(n + 2, dtype=np.float64)
    for c in range(1, n + 2):
        t[c] = c * math.log(c)
    return t
