"""Categorical datasets, value histograms and labelings.

Every attribute column doubles as a base clustering: records that share a
value of attribute ``i`` form one cluster of the attribute labeling.
Values are interned per attribute to dense integer ids in first-occurrence
order, so histograms and contingency counts can live in plain arrays.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

Record = tuple  # r value tokens, one per attribute


class Labeling:
    """A partition of ``n`` objects stored as a label vector.

    Labels are renumbered to ``0..k-1`` by order of first occurrence, so
    every id below ``num_labels`` is used at least once.
    """

    __slots__ = ("labels", "num_labels")

    def __init__(self, labels: Iterable[Hashable]):
        ids: dict = {}
        out = [ids.setdefault(v, len(ids)) for v in labels]
        self.labels = np.asarray(out, dtype=np.int64)
        self.num_labels = len(ids)

    @classmethod
    def _trusted(cls, labels: np.ndarray, num_labels: int) -> "Labeling":
        obj = cls.__new__(cls)
        obj.labels = labels
        obj.num_labels = num_labels
        return obj

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Labeling):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"Labeling(n={len(self)}, k={self.num_labels})"

    def clusters(self) -> list[list[int]]:
        """Member indices of each cluster, in label order."""
        groups: list[list[int]] = [[] for _ in range(self.num_labels)]
        for j, l in enumerate(self.labels.tolist()):
            groups[l].append(j)
        return groups

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_labels)


def as_labeling(labels) -> Labeling:
    if isinstance(labels, Labeling):
        return labels
    return Labeling(labels)


class Histogram:
    """Value -> frequency table for one attribute over some record set.

    Entries never hold a zero count; removing the last occurrence of a value
    deletes its entry.
    """

    __slots__ = ("attribute_index", "counts", "total")

    def __init__(self, attribute_index: int = 0, counts: Mapping | None = None):
        self.attribute_index = attribute_index
        self.counts: dict = {}
        self.total = 0
        if counts:
            for v, f in counts.items():
                if f < 0:
                    raise ValueError(f"negative frequency for {v!r}")
                if f:
                    self.counts[v] = int(f)
                    self.total += int(f)

    def add(self, v, count: int = 1) -> "Histogram":
        self.counts[v] = self.counts.get(v, 0) + count
        self.total += count
        return self

    def remove(self, v) -> "Histogram":
        f = self.counts.get(v, 0)
        if f < 1:
            raise KeyError(f"value {v!r} not present in histogram of attribute "
                           f"{self.attribute_index}")
        if f == 1:
            del self.counts[v]
        else:
            self.counts[v] = f - 1
        self.total -= 1
        return self

    def frequency(self, v) -> int:
        return self.counts.get(v, 0)

    def copy(self) -> "Histogram":
        h = Histogram(self.attribute_index)
        h.counts = dict(self.counts)
        h.total = self.total
        return h

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, v) -> bool:
        return v in self.counts

    def __getitem__(self, v) -> int:
        return self.counts.get(v, 0)

    def items(self):
        return self.counts.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return (self.attribute_index == other.attribute_index
                and self.counts == other.counts and self.total == other.total)

    def __repr__(self) -> str:
        return f"Histogram(attr={self.attribute_index}, {self.counts!r})"


def histogram_add(h: Histogram, v) -> Histogram:
    return h.add(v)


def histogram_remove(h: Histogram, v) -> Histogram:
    return h.remove(v)


@dataclass
class HistogramSet:
    """One histogram per attribute, all over the same record set."""

    histograms: list[Histogram]

    @property
    def total(self) -> int:
        totals = {h.total for h in self.histograms}
        if len(totals) > 1:
            raise ValueError(f"member histograms disagree on total: {sorted(totals)}")
        return totals.pop() if totals else 0

    def __len__(self) -> int:
        return len(self.histograms)

    def __getitem__(self, i: int) -> Histogram:
        return self.histograms[i]

    def __iter__(self):
        return iter(self.histograms)

    @classmethod
    def empty(cls, r: int) -> "HistogramSet":
        return cls([Histogram(i) for i in range(r)])

    def add_record(self, record: Sequence) -> None:
        for h, v in zip(self.histograms, record):
            h.add(v)

    def remove_record(self, record: Sequence) -> None:
        for h, v in zip(self.histograms, record):
            h.remove(v)


@dataclass
class Dataset:
    """``n`` records over ``r`` categorical attributes.

    ``codes[j, i]`` is the interned id of record ``j``'s value on attribute
    ``i``; ``values[i][codes[j, i]]`` recovers the original token.
    """

    records: list[Record]
    attribute_names: list[str] = field(default_factory=list)
    ground_truth: Labeling | None = None
    class_values: list = field(default_factory=list)

    def __post_init__(self):
        if not self.records:
            raise ValueError("dataset must contain at least one record")
        self.records = [tuple(rec) for rec in self.records]
        r = len(self.records[0])
        if r < 1:
            raise ValueError("records must have at least one attribute")
        n = len(self.records)
        codes = np.empty((n, r), dtype=np.int32)
        interners: list[dict] = [{} for _ in range(r)]
        for j, rec in enumerate(self.records):
            if len(rec) != r:
                raise ValueError(f"record {j} has {len(rec)} values, expected {r}")
            for i, v in enumerate(rec):
                codes[j, i] = interners[i].setdefault(v, len(interners[i]))
        self.codes = codes
        self.values: list[list] = [list(m) for m in interners]
        if not self.attribute_names:
            self.attribute_names = [f"a{i + 1}" for i in range(r)]
        if len(self.attribute_names) != r:
            raise ValueError("attribute_names length does not match record arity")
        if self.ground_truth is not None and len(self.ground_truth) != n:
            raise ValueError("ground truth length does not match number of records")

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def num_attributes(self) -> int:
        return self.codes.shape[1]

    r = num_attributes

    @property
    def domain_sizes(self) -> list[int]:
        """p_i, the number of distinct values of each attribute."""
        return [len(v) for v in self.values]

    def head(self, n: int) -> "Dataset":
        gt = None
        if self.ground_truth is not None:
            gt = Labeling(self.ground_truth.labels[:n].tolist())
        return Dataset(self.records[:n], list(self.attribute_names), gt,
                       list(self.class_values))


def build_histograms(dataset: Dataset) -> HistogramSet:
    hs = HistogramSet.empty(dataset.num_attributes)
    for rec in dataset.records:
        hs.add_record(rec)
    return hs


def histograms_of(records: Sequence[Record]) -> HistogramSet:
    """Histograms of an arbitrary non-empty record collection."""
    if not records:
        raise ValueError("cannot build histograms of an empty record set")
    hs = HistogramSet.empty(len(records[0]))
    for rec in records:
        hs.add_record(rec)
    return hs


def attribute_labeling(dataset: Dataset, i: int) -> Labeling:
    """The partition induced by attribute ``i``: one cluster per value."""
    if not 0 <= i < dataset.num_attributes:
        raise IndexError(f"attribute index {i} out of range 0..{dataset.num_attributes - 1}")
    col = dataset.codes[:, i].astype(np.int64)
    return Labeling._trusted(col, len(dataset.values[i]))
