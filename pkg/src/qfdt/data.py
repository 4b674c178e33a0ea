"""Dataset loading, cleaning, discretization and seeded splitting.

Built-in datasets are read from canonical UCI file names. Files in the
directory named by ``QFDT_DATA_DIR`` take precedence over the copies bundled
with the package (``scripts/fetch_datasets.py`` writes either location).
"""

import csv
import enum
import io
import json
import math
import os
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from qfdt.embedding import sort_key
from qfdt.errors import (
    DatasetUnavailable,
    DegenerateSplit,
    EmptyDataset,
    ParseError,
    UnknownDataset,
    UnknownLabel,
)

MISSING = "?"
DATA_DIR_ENV = "QFDT_DATA_DIR"


class FeatureKind(enum.Enum):
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"


class MissingPolicy(enum.Enum):
    DROP = "drop"
    KEEP = "keep"  # raw view with None cells; not valid input for training


class BinStrategy(enum.Enum):
    EQUAL_FREQUENCY = "equal-frequency"
    EQUAL_WIDTH = "equal-width"


@dataclass(frozen=True)
class DatasetSchema:
    feature_names: tuple
    feature_kinds: tuple
    label_name: str
    class_labels: tuple = None
    positive_label: object = None

    def __post_init__(self):
        if len(self.feature_names) != len(self.feature_kinds):
            raise ValueError("feature_names and feature_kinds differ in length")
        names = (*self.feature_names, self.label_name)
        if len(set(names)) != len(names):
            raise ValueError("feature and label names must be unique")


@dataclass(frozen=True)
class Dataset:
    schema: DatasetSchema
    rows: tuple  # of (feature value tuple, label)
    note: str = ""
    bin_edges: dict = field(default=None, compare=False)

    def __len__(self):
        return len(self.rows)

    @property
    def name(self):
        return self.note.split(";", 1)[0]

    @property
    def labels(self):
        return [y for _, y in self.rows]

    def class_counts(self):
        counts = Counter(self.labels)
        return {y: counts[y] for y in sorted(counts, key=sort_key)}

    def column(self, index):
        return [r[index] for r, _ in self.rows]

    def constant_features(self):
        return [i for i in range(len(self.schema.feature_names)) if len(set(self.column(i))) <= 1]

    @property
    def positive_label(self):
        if self.schema.positive_label is not None:
            return self.schema.positive_label
        labels = self.schema.class_labels or tuple(self.class_counts())
        return max(labels, key=sort_key)


def coerce(text):
    """Parse a cell as int, then float, falling back to the stripped string."""
    text = text.strip()
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def _split_line(line, delimiter):
    if delimiter is None:
        return line.split()
    return next(csv.reader([line], delimiter=delimiter))


def load_csv(path, schema, missing=MissingPolicy.DROP, *, delimiter=",", header=False,
             feature_columns=None, label_column=-1, note=None):
    """Read a delimited text file into a typed ``Dataset``.

    Args:
        delimiter: field separator; ``None`` splits on runs of whitespace.
        header: skip the first nonblank line.
        feature_columns: file column indices of the features, in schema order;
            by default every column except ``label_column``.

    Raises:
        ParseError: wrong arity or a non-numeric continuous cell (names the line).
        UnknownLabel: a label outside ``schema.class_labels``.
        EmptyDataset: no rows survive.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text") from exc

    n_features = len(schema.feature_names)
    rows = []
    width = None
    dropped = 0
    seen_header = not header
    for lineno, line in enumerate(io.StringIO(text), start=1):
        if not line.strip():
            continue
        if not seen_header:
            seen_header = True
            continue
        cells = [c.strip() for c in _split_line(line.rstrip("\r\n"), delimiter)]
        if width is None:
            width = len(cells)
            label_at = label_column % width
            cols = list(feature_columns) if feature_columns is not None else [
                i for i in range(width) if i != label_at
            ]
            if len(cols) != n_features or max(cols, default=0) >= width:
                raise ParseError(f"expected {n_features} feature columns, found {width - 1}", lineno)
        if len(cells) != width:
            raise ParseError(f"expected {width} fields, found {len(cells)}", lineno)

        values = []
        has_missing = False
        for name, kind, c in zip(schema.feature_names, schema.feature_kinds, cols):
            cell = cells[c]
            if cell == MISSING:
                has_missing = True
                values.append(None)
                continue
            value = coerce(cell)
            if kind is FeatureKind.CONTINUOUS:
                if isinstance(value, str):
                    raise ParseError(f"column {name!r}: {cell!r} is not numeric", lineno)
                value = float(value)
            values.append(value)
        label_cell = cells[label_at]
        if label_cell == MISSING:
            raise ParseError("missing class label", lineno)
        label = coerce(label_cell)
        if schema.class_labels is not None and label not in schema.class_labels:
            raise UnknownLabel(f"line {lineno}: label {label!r} not in {schema.class_labels}")
        if has_missing and missing is MissingPolicy.DROP:
            dropped += 1
            continue
        rows.append((tuple(values), label))

    if not rows:
        raise EmptyDataset(f"{path} yielded no rows")
    note = note or path.name
    if dropped:
        note += f"; dropped {dropped} rows with missing values"
    return Dataset(schema, tuple(rows), note)


_C = FeatureKind.CONTINUOUS

BUILTINS = {
    "haberman": dict(
        file="haberman.data",
        schema=DatasetSchema(
            ("age", "year", "nodes"), (_C,) * 3, "survival", class_labels=(1, 2), positive_label=2
        ),
        options=dict(delimiter=","),
    ),
    "wisconsin": dict(
        file="breast-cancer-wisconsin.data",
        schema=DatasetSchema(
            (
                "clump_thickness", "cell_size_uniformity", "cell_shape_uniformity",
                "marginal_adhesion", "epithelial_cell_size", "bare_nuclei",
                "bland_chromatin", "normal_nucleoli", "mitoses",
            ),
            (_C,) * 9,
            "class",
            class_labels=(2, 4),
            positive_label=4,
        ),
        options=dict(delimiter=",", feature_columns=range(1, 10)),
    ),
    "seeds": dict(
        file="seeds_dataset.txt",
        schema=DatasetSchema(
            ("area", "perimeter", "compactness", "kernel_length", "kernel_width",
             "asymmetry", "groove_length"),
            (_C,) * 7,
            "variety",
            class_labels=(1, 2, 3),
            positive_label=3,
        ),
        options=dict(delimiter=None),
        keep_labels=(1, 3),  # Kama and Canadian
    ),
}


def data_dirs():
    dirs = []
    if os.environ.get(DATA_DIR_ENV):
        dirs.append(Path(os.environ[DATA_DIR_ENV]))
    dirs.append(Path(str(resources.files("qfdt") / "datasets")))
    return dirs


def builtin_path(name):
    if name not in BUILTINS:
        raise UnknownDataset(f"unknown dataset {name!r}; choose from {', '.join(BUILTINS)}")
    filename = BUILTINS[name]["file"]
    for d in data_dirs():
        if (d / filename).is_file():
            return d / filename
    raise DatasetUnavailable(
        f"{filename} not found in {', '.join(map(str, data_dirs()))}; "
        f"run scripts/fetch_datasets.py or set {DATA_DIR_ENV}"
    )


def prepare_builtin(name, missing=MissingPolicy.DROP):
    """Load one of ``haberman``, ``wisconsin`` or ``seeds`` in its benchmark form."""
    entry = BUILTINS.get(name)
    path = builtin_path(name)
    d = load_csv(path, entry["schema"], missing, note=name, **entry["options"])
    keep = entry.get("keep_labels")
    if keep:
        rows = tuple(r for r in d.rows if r[1] in keep)
        d = replace(d, schema=replace(d.schema, class_labels=keep), rows=rows,
                    note=d.note + f"; classes {list(keep)} only")
    return d


def fit_bins(d, bins=2, strategy=BinStrategy.EQUAL_FREQUENCY):
    """Interior bin edges for each continuous feature of ``d``.

    A value equal to an edge falls in the lower bin. Edges that coincide, or
    that sit at or above the column maximum, are dropped, so a constant
    column gets no edges (a single bin).
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    edges = {}
    for i, kind in enumerate(d.schema.feature_kinds):
        if kind is not FeatureKind.CONTINUOUS:
            continue
        col = np.asarray(d.column(i), dtype=float)
        if strategy is BinStrategy.EQUAL_FREQUENCY:
            cuts = np.quantile(col, np.arange(1, bins) / bins)
        else:
            cuts = np.linspace(col.min(), col.max(), bins + 1)[1:-1]
        edges[i] = tuple(float(e) for e in np.unique(cuts) if e < col.max())
    return edges


def apply_bins(d, edges):
    """Replace binned features by bin indices ``0..len(edges)``; schema becomes all-categorical."""
    rows = []
    for values, label in d.rows:
        values = list(values)
        for i, e in edges.items():
            if values[i] is not None:
                values[i] = int(np.searchsorted(e, values[i], side="left"))
        rows.append((tuple(values), label))
    kinds = tuple(FeatureKind.CATEGORICAL for _ in d.schema.feature_kinds)
    return replace(d, schema=replace(d.schema, feature_kinds=kinds), rows=tuple(rows), bin_edges=dict(edges))


def discretize(d, bins=2, strategy=BinStrategy.EQUAL_FREQUENCY):
    """Fit edges on ``d`` and bin it; the edges are kept on ``result.bin_edges``."""
    return apply_bins(d, fit_bins(d, bins, strategy))


def train_test_split(d, train_fraction=0.9, seed=0):
    """Seeded shuffle, then cut at ``floor(N * train_fraction)``.

    The permutation is ``numpy.random.default_rng(seed).permutation(N)``
    (PCG64), so a given seed always produces the same split.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = len(d.rows)
    cut = math.floor(n * train_fraction + 1e-9)
    if cut == 0 or cut == n:
        raise DegenerateSplit(f"{n} rows at fraction {train_fraction} leave an empty side")
    order = np.random.default_rng(seed).permutation(n)
    train = tuple(d.rows[i] for i in order[:cut])
    test = tuple(d.rows[i] for i in order[cut:])
    tag = f"; seed {seed} split"
    return replace(d, rows=train, note=d.note + tag + " train"), replace(d, rows=test, note=d.note + tag + " test")


def edges_to_json(d, edges):
    names = d.schema.feature_names
    return {names[i]: list(e) for i, e in sorted(edges.items())}


def edges_from_json(schema, doc):
    index = {n: i for i, n in enumerate(schema.feature_names)}
    try:
        return {index[n]: tuple(float(x) for x in e) for n, e in doc.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad bin-edge document: {exc}") from exc


def save_prepared(d, path):
    """Write ``d`` as CSV with a header, plus ``<path>.bins.json`` when it carries edges."""
    path = Path(path)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*d.schema.feature_names, d.schema.label_name])
    for values, label in d.rows:
        writer.writerow([*values, label])
    path.write_text(buf.getvalue(), encoding="utf-8")
    if d.bin_edges is not None:
        sidecar = path.with_name(path.name + ".bins.json")
        sidecar.write_text(json.dumps(edges_to_json(d, d.bin_edges), indent=2) + "\n", encoding="utf-8")
    return path
