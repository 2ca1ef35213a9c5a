"""Evaluation, baselines, synthetic data and the benchmark protocol.

Accuracy follows the dominant-class convention: each cluster is credited
with the size of its largest class, accuracy is the credited total over n,
and error is its complement.
"""
from __future__ import annotations

import time
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np

from .algorithm import KanmiConfig, run
from .core import Dataset, Labeling, as_labeling
from .dataio import CsvFormat, read_dataset
from .information import ContingencyTable, contingency

# Published average clustering errors over k = 2..9, used for report rendering only.
REFERENCE_ERRORS = {
    "votes": {"Squeezer": 0.163, "GAClust": 0.136, "ccdByEnsemble": 0.115, "k-ANMI": 0.092},
    "mushroom": {"Squeezer": 0.206, "GAClust": 0.393, "ccdByEnsemble": 0.315, "k-ANMI": 0.165},
    "cancer": {"Squeezer": 0.091, "GAClust": 0.117, "ccdByEnsemble": 0.071, "k-ANMI": 0.039},
}

# file name, class column, columns to drop
_BUNDLED = {
    "votes": ("house-votes-84.data", 0, []),
    "mushroom": ("agaricus-lepiota.data", 0, []),
    "cancer": ("breast-cancer-wisconsin.data", -1, []),
}


def load_benchmark(name: str, path=None, variant: str = "683") -> Dataset:
    """Load one of the three UCI benchmark datasets.

    The bundled cancer file is the 683-record variant (incomplete rows
    removed, no sample-id column). Pass ``path`` with ``variant="699"`` to
    read the original UCI file, whose first column is the sample id.
    """
    if name not in _BUNDLED:
        raise KeyError(f"unknown benchmark dataset {name!r}; choose from {sorted(_BUNDLED)}")
    fname, cls, drop = _BUNDLED[name]
    if name == "cancer" and variant == "699":
        if path is None:
            raise ValueError("the 699-record cancer variant is not bundled; pass its path")
        drop = [0]
    elif name == "cancer" and variant != "683":
        raise ValueError(f"unknown cancer variant {variant!r}")
    fmt = CsvFormat(class_column=cls, drop_columns=drop)
    if path is not None:
        return read_dataset(path, fmt)
    with resources.as_file(resources.files("kanmi") / "data" / fname) as p:
        return read_dataset(p, fmt)


@dataclass
class EvaluationReport:
    k: int
    accuracy: float
    error: float
    per_cluster_dominant: list[tuple[int | str, int]]
    confusion: list[list[int]]
    n: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_cluster_dominant"] = [list(t) for t in self.per_cluster_dominant]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        d = dict(d)
        d["per_cluster_dominant"] = [tuple(t) for t in d["per_cluster_dominant"]]
        return cls(**d)


def accuracy(labels, classes, class_names: Sequence | None = None) -> EvaluationReport:
    labels, classes = as_labeling(labels), as_labeling(classes)
    if len(labels) != len(classes):
        raise ValueError(f"{len(labels)} labels but {len(classes)} class entries")
    table: ContingencyTable = contingency(labels, classes)
    counts = table.counts
    dominant = counts.argmax(axis=1)  # lowest class id on ties
    credited = counts.max(axis=1)
    n = len(labels)
    r = int(credited.sum()) / n
    names = list(class_names) if class_names is not None else None
    per = [(names[g] if names else int(g), int(a)) for g, a in zip(dominant, credited)]
    return EvaluationReport(labels.num_labels, r, 1.0 - r, per, table.to_list(), n)


def squeezer(dataset: Dataset, threshold: float) -> Labeling:
    """One-pass threshold clustering.

    A record joins the existing cluster with the highest matched-frequency
    share when that share reaches ``threshold``; otherwise it opens a new
    cluster.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    offsets = np.concatenate([[0], np.cumsum(dataset.domain_sizes)]).astype(np.int64)
    rows = (dataset.codes.astype(np.int64) + offsets[:-1]).tolist()
    hists: list[list[int]] = []
    sizes: list[int] = []
    labels = []
    P = int(offsets[-1])
    for row in rows:
        best, best_sim = -1, -1.0
        for c, h in enumerate(hists):
            sim = sum(h[col] for col in row) / sizes[c]
            if sim > best_sim:
                best, best_sim = c, sim
        if best < 0 or best_sim < threshold:
            hists.append([0] * P)
            sizes.append(0)
            best = len(hists) - 1
        for col in row:
            hists[best][col] += 1
        sizes[best] += 1
        labels.append(best)
    return Labeling(labels)


def squeezer_for_k(dataset: Dataset, k: int, iterations: int = 40) -> tuple[Labeling, float]:
    """Bisect the threshold until Squeezer yields ``k`` clusters (or as close as found)."""
    lo, hi = 0.0, float(dataset.num_attributes) + 1.0
    best = None
    for _ in range(iterations):
        s = (lo + hi) / 2
        lab = squeezer(dataset, s)
        gap = abs(lab.num_labels - k)
        if best is None or gap < best[0]:
            best = (gap, lab, s)
        if lab.num_labels == k:
            break
        if lab.num_labels < k:
            lo = s
        else:
            hi = s
    return best[1], best[2]


@dataclass
class GeneratorSpec:
    rows: int
    attributes: int = 10
    classes: int = 10
    values: int = 10
    skew: float = 0.6
    seed: int = 5

    def __post_init__(self):
        if self.rows < 1 or self.rows < self.classes:
            raise ValueError("need rows >= classes >= 1")
        if self.classes < 1 or self.attributes < 1:
            raise ValueError("classes and attributes must be positive")
        if self.values < 2:
            raise ValueError("each attribute needs at least 2 values")
        if not 0 < self.skew <= 1:
            raise ValueError("skew must lie in (0, 1]")


def _prototypes(rng: np.random.Generator, spec: GeneratorSpec) -> np.ndarray:
    protos = np.empty((spec.classes, spec.attributes), dtype=np.int64)
    distinct_possible = spec.values ** spec.attributes >= spec.classes
    seen = set()
    for c in range(spec.classes):
        for _ in range(1000):
            row = rng.integers(spec.values, size=spec.attributes)
            if not distinct_possible or tuple(row) not in seen:
                break
        seen.add(tuple(row))
        protos[c] = row
    return protos


def generate(spec: GeneratorSpec) -> Dataset:
    """Class-conditional skewed multinomial data.

    Each (class, attribute) pair has one preferred value drawn with
    probability ``skew``; the other ``values - 1`` share the rest evenly.
    Classes are drawn uniformly.
    """
    rng = np.random.default_rng(spec.seed)
    protos = _prototypes(rng, spec)
    cls = rng.integers(spec.classes, size=spec.rows)
    pref = protos[cls]
    keep = rng.random((spec.rows, spec.attributes)) < spec.skew
    other = rng.integers(spec.values - 1, size=(spec.rows, spec.attributes))
    vals = np.where(keep, pref, (pref + 1 + other) % spec.values)
    records = [tuple(f"v{v}" for v in row) for row in vals.tolist()]
    names = [f"a{i + 1}" for i in range(spec.attributes)]
    class_tokens = [f"c{c}" for c in cls.tolist()]
    return Dataset(records, names, Labeling(class_tokens), list(dict.fromkeys(class_tokens)))


@dataclass
class BenchmarkRow:
    k: int
    error: float
    clusters: int
    seconds: float
    anmi: float | None = None
    sweeps: int | None = None
    threshold: float | None = None


@dataclass
class BenchmarkTable:
    dataset: str
    algorithm: str
    rows: list[BenchmarkRow] = field(default_factory=list)
    reference: dict = field(default_factory=dict)

    @property
    def average_error(self) -> float:
        return sum(r.error for r in self.rows) / len(self.rows)

    def to_dict(self) -> dict:
        return {"dataset": self.dataset, "algorithm": self.algorithm,
                "rows": [asdict(r) for r in self.rows],
                "average_error": self.average_error, "reference": self.reference}

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkTable":
        return cls(d["dataset"], d["algorithm"], [BenchmarkRow(**r) for r in d["rows"]],
                   d.get("reference", {}))

    def render(self) -> str:
        lines = [f"{self.dataset} / {self.algorithm}",
                 f"{'k':>3} {'clusters':>8} {'error':>8} {'seconds':>9}"]
        for r in self.rows:
            lines.append(f"{r.k:>3} {r.clusters:>8} {r.error:>8.4f} {r.seconds:>9.3f}")
        lines.append(f"average error {self.average_error:.4f}")
        for name, e in self.reference.items():
            lines.append(f"  published {name:<14} {e:.3f}")
        return "\n".join(lines)


ALGORITHMS = ("kanmi", "squeezer")


def benchmark(dataset: Dataset, algorithm: str = "kanmi", ks: Iterable[int] = range(2, 10),
              name: str = "", config: KanmiConfig | None = None,
              backend: str | None = None) -> BenchmarkTable:
    """One run per k; per-k clustering error plus the average."""
    if dataset.ground_truth is None:
        raise ValueError("benchmark needs a dataset with ground-truth classes")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    ks = list(ks)
    if not ks:
        raise ValueError("empty k list")
    table = BenchmarkTable(name, algorithm, reference=REFERENCE_ERRORS.get(name, {}))
    for k in ks:
        t0 = time.perf_counter()
        if algorithm == "kanmi":
            cfg = KanmiConfig(k) if config is None else KanmiConfig(
                k, config.max_sweeps, config.improvement_epsilon)
            res = run(dataset, cfg, backend)
            labels, extra = res.labels, dict(anmi=res.final_anmi, sweeps=res.sweeps_run)
        else:
            labels, s = squeezer_for_k(dataset, k)
            extra = dict(threshold=s)
        secs = time.perf_counter() - t0
        rep = accuracy(labels, dataset.ground_truth)
        table.rows.append(BenchmarkRow(k, rep.error, labels.num_labels, secs, **extra))
    return table


@dataclass
class TimingRow:
    rows: int
    k: int
    seconds: float
    sweeps: int
    error: float | None = None


def time_run(dataset: Dataset, k: int, backend: str | None = None,
             repeats: int = 1) -> TimingRow:
    """Time ``run`` on ``dataset``; with repeats, keep the fastest wall clock."""
    best = None
    for _ in range(max(1, repeats)):
        res = run(dataset, KanmiConfig(k), backend)
        if best is None or res.seconds < best.seconds:
            best = res
    err = None
    if dataset.ground_truth is not None:
        err = accuracy(best.labels, dataset.ground_truth).error
    return TimingRow(dataset.n, k, best.seconds, best.sweeps_run, err)


def scaling_rows(dataset: Dataset, row_counts: Sequence[int], k: int = 2,
                 backend: str | None = None, repeats: int = 1) -> list[TimingRow]:
    """Runtime on growing prefixes of ``dataset`` at fixed k."""
    if not row_counts:
        raise ValueError("empty row-count list")
    for m in row_counts:
        if not k <= m <= dataset.n:
            raise ValueError(f"row count {m} outside {k}..{dataset.n}")
    return [time_run(dataset.head(m), k, backend, repeats) for m in row_counts]


def scaling_clusters(dataset: Dataset, ks: Sequence[int], backend: str | None = None,
                     repeats: int = 1) -> list[TimingRow]:
    """Runtime on the full dataset for each k."""
    if not ks:
        raise ValueError("empty k list")
    if any(k < 2 or k > dataset.n for k in ks):
        raise ValueError(f"every k must lie in 2..{dataset.n}")
    return [time_run(dataset, k, backend, repeats) for k in ks]


def linear_r2(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Coefficient of determination of a least-squares line through the points."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0:
        return 1.0
    return 1.0 - float((resid ** 2).sum()) / ss_tot


def majority_share(classes) -> float:
    """Accuracy of the single-cluster partition."""
    sizes = as_labeling(classes).sizes()
    return float(sizes.max()) / float(sizes.sum())

