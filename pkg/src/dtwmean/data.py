"""UCR-format datasets, seeded sampling and CSV/JSON evaluation reports."""
from dataclasses import dataclass, field
import io
import json
import math
import os
import re
import zlib

import numpy as np

from .errors import DataError

ZERO_TOL = 1e-9

CORRECTNESS_COLUMNS = (
    "n_eq",
    "n_mid",
    "eq_avg",
    "eq_std",
    "eq_max",
    "mid_avg",
    "mid_std",
    "mid_max",
)
DRIFT_METHOD_ORDER = ("dba", "ssg", "exact")


@dataclass(frozen=True)
class Dataset:
    """Equal-length labelled series; ``values`` has shape (count, length)."""

    name: str
    labels: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise DataError(f"dataset {self.name!r} must be a non-empty 2-D array")
        if not np.all(np.isfinite(v)):
            raise DataError(f"dataset {self.name!r} contains non-finite values")
        if len(self.labels) != v.shape[0]:
            raise DataError(f"dataset {self.name!r}: {len(self.labels)} labels for {v.shape[0]} series")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))

    @property
    def declared_length(self):
        return self.values.shape[1]

    @property
    def series(self):
        return tuple(zip(self.labels, self.values))

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, i):
        return self.values[i]


def _split(line):
    if "," in line:
        return [f.strip() for f in line.split(",")]
    if "\t" in line:
        return [f.strip() for f in line.split("\t")]
    return line.split()


def _dataset_name(path):
    stem = os.path.splitext(os.path.basename(path))[0]
    return re.sub(r"_(TRAIN|TEST)$", "", stem, flags=re.IGNORECASE)


def znormalize(values):
    values = np.asarray(values, dtype=np.float64)
    mu = values.mean(axis=-1, keepdims=True)
    sd = values.std(axis=-1, keepdims=True)
    return (values - mu) / np.where(sd > 0, sd, 1.0)


def load_ucr(paths, name=None, normalize=False):
    """Load one or more UCR text files (train then test) into one dataset.

    Each non-blank row holds a class label followed by the series values,
    separated by commas, tabs or whitespace.
    """
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    paths = [os.fspath(p) for p in paths]
    if not paths:
        raise DataError("no dataset files given")
    labels, rows = [], []
    width = None
    for path in paths:
        n_rows = 0
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"{path}: cannot open ({exc.strerror})") from exc
        with fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                fields = _split(line)
                if len(fields) < 2:
                    raise DataError(f"{path}:{lineno}: expected a label and at least one value")
                try:
                    vals = [float(f) for f in fields[1:]]
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: non-numeric field ({exc})") from exc
                if not all(math.isfinite(v) for v in vals):
                    raise DataError(f"{path}:{lineno}: non-finite value")
                if width is None:
                    width = len(vals)
                elif len(vals) != width:
                    raise DataError(f"{path}:{lineno}: series of length {len(vals)}, expected {width}")
                labels.append(fields[0])
                rows.append(vals)
                n_rows += 1
        if n_rows == 0:
            raise DataError(f"{path}: file contains no series")
    values = np.array(rows)
    if normalize:
        values = znormalize(values)
    return Dataset(name or _dataset_name(paths[0]), tuple(labels), values)


def load_series(path):
    """Read one series: a single delimited row or one value per line."""
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [l.strip() for l in fh if l.strip()]
    except OSError as exc:
        raise DataError(f"{path}: cannot open ({exc.strerror})") from exc
    if not lines:
        raise DataError(f"{path}: file contains no values")
    if len(lines) == 1:
        fields = _split(lines[0])
    else:
        fields = []
        for lineno, line in enumerate(lines, 1):
            parts = _split(line)
            if len(parts) != 1:
                raise DataError(f"{path}:{lineno}: expected one value per line")
            fields.append(parts[0])
    try:
        vals = np.array([float(f) for f in fields])
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric field ({exc})") from exc
    if not np.all(np.isfinite(vals)):
        raise DataError(f"{path}: non-finite value")
    return vals


def random_walks(count, length, seed=0, name="synthetic"):
    """Seeded Gaussian random walks standing in for UCR files."""
    if count < 1 or length < 1:
        raise ValueError("count and length must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(name.encode())]))
    values = np.cumsum(rng.standard_normal((count, length)), axis=1)
    return Dataset(name, ("0",) * count, values)


def write_ucr(dataset, path):
    with open(path, "w", encoding="utf-8") as fh:
        for label, row in dataset.series:
            fh.write("\t".join([label] + [repr(float(v)) for v in row]) + "\n")


# --- sampling ----------------------------------------------------------------


def trial_seed(seed, name, trial, stream=0):
    """Seed sequence for one trial; independent of execution order."""
    return np.random.SeedSequence([int(seed), zlib.crc32(name.encode()), int(trial), int(stream)])


def sample_tuple(d, tuple_size, seed, trial):
    rng = np.random.default_rng(trial_seed(seed, d.name, trial))
    return tuple(int(i) for i in rng.choice(len(d), size=tuple_size, replace=False))


def sample_tuples(d, tuple_size, trials, seed):
    """``trials`` tuples of distinct series indices, drawn independently per trial."""
    if tuple_size not in (2, 3):
        raise ValueError(f"tuple_size must be 2 or 3, got {tuple_size}")
    if len(d) < tuple_size:
        raise ValueError(f"dataset {d.name!r} has {len(d)} series, fewer than {tuple_size}")
    return [sample_tuple(d, tuple_size, seed, t) for t in range(trials)]


# --- evaluation summaries ----------------------------------------------------


def _stats(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return math.nan, math.nan, math.nan
    return float(v.mean()), float(v.std()), float(v.max())


@dataclass
class EvalSummary:
    """Per-dataset outcome of a correctness or drift-out evaluation.

    ``records`` holds one dict per trial, sorted by trial index; every
    aggregate is recomputed from them.
    """

    kind: str
    dataset: str
    seed: int
    records: list
    methods: tuple = ()
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("correctness", "driftout"):
            raise ValueError(f"unknown summary kind {self.kind!r}")
        self.records = sorted(self.records, key=lambda r: r["trial"])
        self.methods = tuple(m for m in DRIFT_METHOD_ORDER if m in self.methods)

    @property
    def trials(self):
        return len(self.records)

    def aggregates(self):
        if self.kind == "correctness":
            eq = [r["err_eq"] for r in self.records]
            mid = [r["err_mid"] for r in self.records]
            eq_avg, eq_std, eq_max = _stats(eq)
            mid_avg, mid_std, mid_max = _stats(mid)
            return {
                "n_eq": sum(e <= ZERO_TOL for e in eq),
                "n_mid": sum(e <= ZERO_TOL for e in mid),
                "eq_avg": eq_avg,
                "eq_std": eq_std,
                "eq_max": eq_max,
                "mid_avg": mid_avg,
                "mid_std": mid_std,
                "mid_max": mid_max,
            }
        out = {}
        for m in self.methods:
            drifted = sum(not r["methods"][m]["coherent"] for r in self.records)
            out[f"{m}_pct"] = 100.0 * drifted / self.trials if self.trials else math.nan
        return out

    def to_dict(self):
        return {
            "kind": self.kind,
            "dataset": self.dataset,
            "seed": self.seed,
            "trials": self.trials,
            "methods": list(self.methods),
            "config": self.config,
            "aggregates": self.aggregates(),
            "records": self.records,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d["dataset"], d["seed"], d["records"], tuple(d["methods"]), d.get("config", {}))


def pooled(summaries, name="total"):
    """One summary holding the trials of all given summaries."""
    summaries = list(summaries)
    first = summaries[0]
    records = []
    for s in summaries:
        if s.kind != first.kind or s.methods != first.methods:
            raise ValueError("cannot pool summaries of different kinds or methods")
        records += [dict(r, trial=len(records) + i) for i, r in enumerate(s.records)]
    return EvalSummary(first.kind, name, first.seed, records, first.methods, dict(first.config))


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.6f}"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def render_csv(summaries):
    summaries = [summaries] if isinstance(summaries, EvalSummary) else list(summaries)
    first = summaries[0]
    if first.kind == "correctness":
        columns = CORRECTNESS_COLUMNS
    else:
        columns = tuple(f"{m}_pct" for m in first.methods)
    buf = io.StringIO()
    buf.write(",".join(("dataset",) + columns) + "\n")
    for s in summaries + [pooled(summaries)]:
        agg = s.aggregates()
        buf.write(",".join([s.dataset] + [_fmt(agg[c]) for c in columns]) + "\n")
    return buf.getvalue()


def render_json(summaries):
    summaries = [summaries] if isinstance(summaries, EvalSummary) else list(summaries)
    doc = {
        "kind": summaries[0].kind,
        "datasets": [s.to_dict() for s in summaries],
        "total": pooled(summaries).aggregates(),
    }
    return json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n"


def write_report(summaries, fmt, path):
    """Write a CSV table (one row per dataset plus ``total``) or a JSON dump.

    CSV floats use fixed 6-decimal formatting.  JSON keeps full ``repr``
    precision so aggregates recompute exactly from the stored records.
    """
    if fmt == "csv":
        text = render_csv(summaries)
    elif fmt == "json":
        text = render_json(summaries)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def read_report(path):
    """Summaries stored in a JSON report written by :func:`write_report`."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return [EvalSummary.from_dict(d) for d in doc["datasets"]]


__all__ = [
    "Dataset",
    "EvalSummary",
    "load_series",
    "load_ucr",
    "pooled",
    "random_walks",
    "read_report",
    "sample_tuples",
    "write_report",
    "write_ucr",
]


def find_ucr_files(root, name):
    """Locate ``NAME_TRAIN`` / ``NAME_TEST`` files under ``root`` or ``root/NAME``.

    Falls back to a single ``NAME.tsv`` (or ``.txt``/``.csv``) file.
    """
    found = []
    for split in ("TRAIN", "TEST"):
        for folder in (os.path.join(root, name), root):
            hits = [
                os.path.join(folder, f"{name}_{split}{ext}")
                for ext in (".tsv", ".txt", ".csv", "")
                if os.path.isfile(os.path.join(folder, f"{name}_{split}{ext}"))
            ]
            if hits:
                found.append(hits[0])
                break
    if not found:
        found = [
            os.path.join(root, f"{name}{ext}")
            for ext in (".tsv", ".txt", ".csv")
            if os.path.isfile(os.path.join(root, f"{name}{ext}"))
        ][:1]
    if not found:
        raise DataError(f"no {name}_TRAIN/{name}_TEST files under {root}")
    return found
