"""k-ANMI: k-means style local search maximizing ANMI.

Phase 1 seeds cluster ``l`` with record ``l`` and assigns every later
record to the cluster whose histograms match it best. Phase 2 sweeps the
records in file order, moving each to whichever other cluster raises ANMI
the most, until a sweep moves nothing.

All objective values come from the (r + 1) * k histograms: per-cluster
attribute histograms plus one dataset-wide histogram per attribute. The
sweep itself runs in ``kernels`` and scores a candidate move in O(r) from
the change in ``sum c ln c`` over the two touched cells per attribute.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .core import Dataset, Histogram, Labeling, as_labeling
from .information import xlogx_table


class EmptyClusterError(ValueError):
    """A move would leave its source cluster empty."""


@dataclass(frozen=True)
class KanmiConfig:
    k: int
    max_sweeps: int = 100
    improvement_epsilon: float = 1e-12

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if not self.improvement_epsilon >= 0:
            raise ValueError("improvement_epsilon must be non-negative")


@dataclass
class KanmiResult:
    labels: Labeling
    final_anmi: float
    sweeps_run: int
    anmi_history: list[float]
    moves_per_sweep: list[int]
    initial_anmi: float = 0.0
    converged: bool = True
    seconds: float = 0.0
    backend: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = self.labels.labels.tolist()
        return d


def _offsets(dataset: Dataset) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(dataset.domain_sizes)]).astype(np.int64)


@dataclass
class ClusterState:
    """Mutable clustering state: labels, k cluster sizes, k x r cluster
    histograms and r attribute histograms, stored as dense count arrays.

    ``cah[l, offsets[i] + v]`` is the frequency of value id ``v`` of
    attribute ``i`` inside cluster ``l``; ``ah`` holds the dataset-wide
    counts in the same column layout.
    """

    dataset: Dataset
    k: int
    labels: np.ndarray
    cah: np.ndarray
    sizes: np.ndarray
    offsets: np.ndarray = field(repr=False)
    ah: np.ndarray = field(repr=False)

    @classmethod
    def from_labels(cls, dataset: Dataset, labels, k: int | None = None) -> "ClusterState":
        """Build every histogram from scratch for a given label vector."""
        labels = np.asarray(as_labeling(labels).labels if isinstance(labels, Labeling)
                            else labels, dtype=np.int64).copy()
        if len(labels) != dataset.n:
            raise ValueError("label vector length differs from dataset size")
        if k is None:
            k = int(labels.max()) + 1
        offsets = _offsets(dataset)
        cols = dataset.codes.astype(np.int64) + offsets[:-1]
        cah = np.zeros((k, int(offsets[-1])), dtype=np.int64)
        np.add.at(cah, (labels[:, None], cols), 1)
        sizes = np.bincount(labels, minlength=k).astype(np.int64)
        ah = np.bincount(cols.ravel(), minlength=int(offsets[-1])).astype(np.int64)
        return cls(dataset, k, labels, cah, sizes, offsets, ah)

    @property
    def n(self) -> int:
        return self.dataset.n

    @property
    def r(self) -> int:
        return self.dataset.num_attributes

    @property
    def labeling(self) -> Labeling:
        return Labeling._trusted(self.labels.copy(), self.k)

    def _block(self, counts: np.ndarray, i: int) -> np.ndarray:
        return counts[..., self.offsets[i]:self.offsets[i + 1]]

    def _as_histogram(self, row: np.ndarray, i: int) -> Histogram:
        vals = self.dataset.values[i]
        h = Histogram(i)
        for v in np.flatnonzero(row).tolist():
            h.add(vals[v], int(row[v]))
        return h

    def cluster_histogram(self, l: int, i: int) -> Histogram:
        """CAH for cluster ``l`` and attribute ``i``, keyed by value token."""
        return self._as_histogram(self._block(self.cah[l], i), i)

    def cluster_histograms(self, i: int) -> list[Histogram]:
        return [self.cluster_histogram(l, i) for l in range(self.k)]

    def attribute_histogram(self, i: int) -> Histogram:
        return self._as_histogram(self._block(self.ah, i), i)

    def copy(self) -> "ClusterState":
        return ClusterState(self.dataset, self.k, self.labels.copy(), self.cah.copy(),
                            self.sizes.copy(), self.offsets, self.ah)

    def check(self) -> None:
        """Raise AssertionError unless every histogram matches the labels."""
        fresh = ClusterState.from_labels(self.dataset, self.labels, self.k)
        assert np.array_equal(fresh.cah, self.cah), "cluster histograms drifted"
        assert np.array_equal(fresh.sizes, self.sizes), "cluster sizes drifted"
        assert np.array_equal(self.cah.sum(axis=0), self.ah), "attribute histograms drifted"
        assert int(self.sizes.sum()) == self.n
        assert (self.sizes > 0).all(), "empty cluster"
        for i in range(self.r):
            assert (self._block(self.cah, i).sum(axis=1) == self.sizes).all()


def initialize(dataset: Dataset, k: int, backend: str | None = None) -> ClusterState:
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if dataset.n < k:
        raise ValueError(f"n < k: cannot form {k} clusters from {dataset.n} records")
    offsets = _offsets(dataset)
    labels, cah, sizes = kernels.get(backend).assign_initial(
        np.ascontiguousarray(dataset.codes, dtype=np.int32), offsets, k)
    ah = cah.sum(axis=0)
    return ClusterState(dataset, k, labels, cah, sizes, offsets, ah)


def _attribute_nmis(state: ClusterState, cah: np.ndarray, sizes: np.ndarray) -> list[float]:
    n, k = state.n, state.k
    out = []
    for i in range(state.r):
        block = state._block(cah, i)
        ng = state._block(state.ah, i)
        h, g = np.nonzero(block)
        c = block[h, g].astype(np.float64)
        terms = c * np.log(c * n / (sizes[h].astype(np.float64) * ng[g]))
        kb = int(np.count_nonzero(ng))
        out.append(2.0 / n * math.fsum(terms.tolist()) / math.log(k * kb))
    return out


def state_anmi(state: ClusterState) -> float:
    """ANMI of the current labels against all attribute labelings, from histograms."""
    nmis = _attribute_nmis(state, state.cah, state.sizes)
    total = 0.0
    for v in nmis:
        total += v
    return total / state.r


def evaluate_move(state: ClusterState, j: int, target: int) -> float:
    """ANMI the state would have after moving record ``j`` to ``target``.

    The move is applied to the 2r touched histogram cells and two sizes,
    measured and reverted; the state is left exactly as it was.
    """
    a = int(state.labels[j])
    if target == a:
        raise ValueError(f"record {j} is already in cluster {target}")
    if not 0 <= target < state.k:
        raise IndexError(f"cluster {target} out of range")
    if state.sizes[a] == 1:
        raise EmptyClusterError(f"moving record {j} would empty cluster {a}")
    cols = state.offsets[:-1] + state.dataset.codes[j]
    state.cah[a, cols] -= 1
    state.cah[target, cols] += 1
    state.sizes[a] -= 1
    state.sizes[target] += 1
    try:
        return state_anmi(state)
    finally:
        state.cah[a, cols] += 1
        state.cah[target, cols] -= 1
        state.sizes[a] += 1
        state.sizes[target] -= 1


def move_weights(state: ClusterState) -> np.ndarray:
    """Per-attribute factor turning a change of ``sum c ln c`` into an ANMI change."""
    p = np.diff(state.offsets).astype(np.float64)
    return 2.0 / (state.n * state.r * np.log(state.k * p))


def sweep(state: ClusterState, config: KanmiConfig, backend: str | None = None,
          xlx: np.ndarray | None = None) -> int:
    """One pass over the records; returns how many moved."""
    if xlx is None:
        xlx = xlogx_table(state.n)
    return kernels.get(backend).sweep(
        np.ascontiguousarray(state.dataset.codes, dtype=np.int32), state.offsets,
        state.labels, state.cah, state.sizes, xlx, move_weights(state),
        float(config.improvement_epsilon))


def run(dataset: Dataset, config: KanmiConfig | int, backend: str | None = None) -> KanmiResult:
    if isinstance(config, int):
        config = KanmiConfig(config)
    t0 = time.perf_counter()
    state = initialize(dataset, config.k, backend)
    xlx = xlogx_table(dataset.n)
    initial = state_anmi(state)
    history = [initial]
    moves: list[int] = []
    converged = False
    for _ in range(config.max_sweeps):
        m = sweep(state, config, backend, xlx)
        moves.append(m)
        history.append(state_anmi(state))
        if m == 0:
            converged = True
            break
    return KanmiResult(
        labels=state.labeling,
        final_anmi=history[-1],
        sweeps_run=len(moves),
        anmi_history=history,
        moves_per_sweep=moves,
        initial_anmi=initial,
        converged=converged,
        seconds=time.perf_counter() - t0,
        backend=backend or kernels.BACKEND,
    )
