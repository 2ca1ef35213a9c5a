"""Command-line front end: ``kanmi cluster|eval|gen|bench``."""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import kernels
from .algorithm import KanmiConfig, run
from .core import Dataset
from .dataio import CsvFormat, DataFormatError, dump_json, read_column, read_dataset, write_labels
from .experiments import (REFERENCE_ERRORS, GeneratorSpec, accuracy,
                          benchmark, generate, linear_r2, load_benchmark, scaling_clusters,
                          scaling_rows, squeezer)


@dataclass
class RunManifest:
    input: str | None
    fmt: CsvFormat = field(default_factory=CsvFormat)
    dataset: str | None = None
    algorithm: str = "kanmi"
    k: int = 2
    threshold: float | None = None
    max_sweeps: int = 100
    epsilon: float = 1e-12
    labels_out: str = "labels.csv"
    report_out: str | None = None
    backend: str | None = None
    seed: int | None = None  # recorded for provenance; k-ANMI itself is deterministic


@dataclass
class RunReport:
    source: str
    algorithm: str
    n: int
    r: int
    k: int
    clusters: int
    seconds: float
    final_anmi: float | None = None
    initial_anmi: float | None = None
    sweeps: int | None = None
    moves_per_sweep: list[int] | None = None
    anmi_history: list[float] | None = None
    threshold: float | None = None
    backend: str | None = None
    evaluation: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(**d)


class CliError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(float(part)))
    return out


def _fmt_from_args(args) -> CsvFormat:
    cls = args.class_column
    return CsvFormat(delimiter=args.delimiter, header=args.header, class_column=cls,
                     missing=args.missing, drop_columns=list(args.drop_column or []))


def _load(args) -> tuple[Dataset, str]:
    if args.dataset:
        if args.input:
            raise CliError("give either an input file or --dataset, not both")
        return load_benchmark(args.dataset), args.dataset
    if not args.input:
        raise CliError("an input file or --dataset is required")
    return read_dataset(args.input, _fmt_from_args(args)), args.input


def cluster_dataset(manifest: RunManifest, dataset: Dataset, source: str) -> tuple[list[int], RunReport]:
    n, r = dataset.n, dataset.num_attributes
    if manifest.algorithm == "kanmi":
        if n < manifest.k:
            raise CliError(f"n < k: {n} records cannot form {manifest.k} clusters")
        cfg = KanmiConfig(manifest.k, manifest.max_sweeps, manifest.epsilon)
        res = run(dataset, cfg, manifest.backend)
        labels = res.labels
        report = RunReport(source, "kanmi", n, r, manifest.k, labels.num_labels, res.seconds,
                           res.final_anmi, res.initial_anmi, res.sweeps_run,
                           res.moves_per_sweep, res.anmi_history,
                           backend=res.backend)
    elif manifest.algorithm == "squeezer":
        if manifest.threshold is None:
            raise CliError("squeezer needs --threshold")
        t0 = time.perf_counter()
        labels = squeezer(dataset, manifest.threshold)
        report = RunReport(source, "squeezer", n, r, labels.num_labels, labels.num_labels,
                           time.perf_counter() - t0, threshold=manifest.threshold)
    else:
        raise CliError(f"unknown algorithm {manifest.algorithm!r}")
    if dataset.ground_truth is not None:
        report.evaluation = accuracy(labels, dataset.ground_truth,
                                     dataset.class_values or None).to_dict()
    return labels.labels.tolist(), report


def cmd_cluster(args) -> int:
    dataset, source = _load(args)
    manifest = RunManifest(args.input, _fmt_from_args(args), args.dataset, args.algorithm,
                           args.k, args.threshold, args.max_sweeps, args.epsilon,
                           args.labels, args.report, args.backend)
    labels, report = cluster_dataset(manifest, dataset, source)
    write_labels(manifest.labels_out, labels)
    if manifest.report_out:
        dump_json(report.to_dict(), manifest.report_out)
    line = f"{report.algorithm}: n={report.n} r={report.r} clusters={report.clusters}"
    if report.final_anmi is not None:
        line += f" anmi={report.final_anmi:.6f} sweeps={report.sweeps}"
    if report.evaluation:
        line += f" error={report.evaluation['error']:.4f}"
    line += f" time={report.seconds:.3f}s"
    print(line)
    return 0


def cmd_eval(args) -> int:
    header = not args.no_header
    labels = read_column(args.labels, args.labels_column, header, args.delimiter)
    classes = read_column(args.classes, args.classes_column, header, args.delimiter)
    if len(labels) != len(classes):
        raise CliError(f"row-count mismatch: {len(labels)} labels vs {len(classes)} classes")
    names = list(dict.fromkeys(classes))
    rep = accuracy(labels, classes, names)
    text = dump_json(rep.to_dict(), args.report)
    print(text)
    return 0


def write_generated(dataset: Dataset, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(dataset.attribute_names) + ["class"])
        classes = dataset.class_values
        for rec, c in zip(dataset.records, dataset.ground_truth.labels.tolist()):
            w.writerow(list(rec) + [classes[c]])


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.rows, args.attrs, args.classes, args.values, args.skew, args.seed)
    ds = generate(spec)
    write_generated(ds, args.output)
    print(f"wrote {ds.n} rows x {ds.num_attributes} attributes + class to {args.output}")
    return 0


def _emit_table(rows: list[dict], csv_path, json_path, extra: dict) -> None:
    if csv_path:
        with Path(csv_path).open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    if json_path:
        dump_json({**extra, "rows": rows}, json_path)


def cmd_bench(args) -> int:
    dataset, source = _load(args)
    if args.mode == "rows":
        counts = _int_list(args.rows) if args.rows else []
        if not counts:
            raise CliError("--rows needs at least one row count")
        timing = scaling_rows(dataset, counts, args.k, args.backend, args.repeats)
        rows = [asdict(t) for t in timing]
        r2 = linear_r2([t.rows for t in timing], [t.seconds for t in timing]) if len(timing) > 1 else None
        print(f"{'rows':>8} {'k':>3} {'sweeps':>6} {'seconds':>9}")
        for t in timing:
            print(f"{t.rows:>8} {t.k:>3} {t.sweeps:>6} {t.seconds:>9.4f}")
        if r2 is not None:
            print(f"linear fit R^2 = {r2:.4f}")
        _emit_table(rows, args.csv, args.json,
                    {"source": source, "mode": "rows", "r2": r2, "backend": args.backend or kernels.BACKEND})
        return 0
    ks = _int_list(args.ks) if args.ks else []
    if not ks:
        raise CliError("--ks needs at least one k")
    if dataset.ground_truth is not None:
        name = args.dataset or Path(source).stem
        table = benchmark(dataset, args.algorithm, ks, name=name, backend=args.backend)
        if args.dataset in REFERENCE_ERRORS:
            table.reference = REFERENCE_ERRORS[args.dataset]
        print(table.render())
        rows = [asdict(r) for r in table.rows]
        _emit_table(rows, args.csv, args.json,
                    {"source": source, "mode": "clusters", "algorithm": args.algorithm,
                     "average_error": table.average_error, "reference": table.reference})
        return 0
    timing = scaling_clusters(dataset, ks, args.backend, args.repeats)
    print(f"{'k':>3} {'sweeps':>6} {'seconds':>9}")
    for t in timing:
        print(f"{t.k:>3} {t.sweeps:>6} {t.seconds:>9.4f}")
    _emit_table([asdict(t) for t in timing], args.csv, args.json,
                {"source": source, "mode": "clusters"})
    return 0


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="CSV file of categorical records")
    p.add_argument("--dataset", choices=sorted(REFERENCE_ERRORS),
                   help="use a bundled UCI benchmark dataset instead of a file")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", action="store_true", help="first row names the columns")
    p.add_argument("--class-column", help="index or header name of the class column")
    p.add_argument("--missing", default="?", help="token substituted for empty cells")
    p.add_argument("--drop-column", action="append", help="column to ignore (repeatable)")
    p.add_argument("--backend", choices=["python", "cython"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kanmi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a dataset, write labels and a report")
    _add_input(p)
    p.add_argument("-k", "--k", type=int, default=2)
    p.add_argument("--algorithm", choices=["kanmi", "squeezer"], default="kanmi")
    p.add_argument("--threshold", type=float, help="squeezer similarity threshold")
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.add_argument("-o", "--labels", default="labels.csv", help="output label file")
    p.add_argument("--report", help="write the metrics report as JSON")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="score a label file against a class file")
    p.add_argument("labels")
    p.add_argument("classes")
    p.add_argument("--labels-column", default="0")
    p.add_argument("--classes-column", default="0")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a synthetic categorical dataset")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--attrs", type=int, default=10)
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--values", type=int, default=10)
    p.add_argument("--skew", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=5)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="scaling timings or per-k error tables")
    _add_input(p)
    p.add_argument("--mode", choices=["rows", "clusters"], default="clusters")
    p.add_argument("--rows", help="row counts for --mode rows, e.g. 12500,25000,50000")
    p.add_argument("--ks", default="2-9", help="k values for --mode clusters, e.g. 2-9")
    p.add_argument("-k", "--k", type=int, default=2, help="k for --mode rows")
    p.add_argument("--algorithm", choices=["kanmi", "squeezer"], default="kanmi")
    p.add_argument("--repeats", type=int, default=1, help="keep the fastest of N timings")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, DataFormatError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"kanmi {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
