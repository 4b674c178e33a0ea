"""Confusion-matrix metrics, the benchmark runner and report rendering."""

import csv
import io
import json
from dataclasses import asdict, dataclass

from qfdt import data as data_mod
from qfdt.criteria import CriterionKind
from qfdt.embedding import AmplitudeMode, sort_key
from qfdt.errors import LengthMismatch, UndefinedMetric
from qfdt.tree import TreeConfig, TreeStats, build_tree, predict, tree_stats

CSV_COLUMNS = (
    "dataset", "criterion", "seed", "bins", "tp", "fp", "tn", "fn",
    "accuracy", "precision_paper", "recall_paper", "f1", "precision_macro", "recall_macro",
    "specificity", "ppv", "npv", "tree_depth", "leaf_count", "balanced",
)
METRICS = CSV_COLUMNS[8:17]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts ``grid[t][p]`` of rows with true label ``labels[t]`` predicted as ``labels[p]``."""

    labels: tuple
    grid: tuple
    positive: object

    def _pos(self):
        return self.labels.index(self.positive) if self.positive in self.labels else None

    @property
    def total(self):
        return sum(map(sum, self.grid))

    @property
    def tp(self):
        p = self._pos()
        return 0 if p is None else self.grid[p][p]

    @property
    def fn(self):
        p = self._pos()
        return 0 if p is None else sum(self.grid[p]) - self.grid[p][p]

    @property
    def fp(self):
        p = self._pos()
        return 0 if p is None else sum(row[p] for row in self.grid) - self.grid[p][p]

    @property
    def tn(self):
        return self.total - self.tp - self.fn - self.fp

    def per_class(self):
        """(tp, fp, fn) for every label, each class treated as positive in turn."""
        out = []
        for k in range(len(self.labels)):
            tp = self.grid[k][k]
            out.append((tp, sum(row[k] for row in self.grid) - tp, sum(self.grid[k]) - tp))
        return out


def confusion(true_labels, predicted_labels, positive, labels=None):
    true_labels = list(true_labels)
    predicted_labels = list(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise LengthMismatch(f"{len(true_labels)} true labels vs {len(predicted_labels)} predictions")
    if not true_labels:
        raise LengthMismatch("no labels to compare")
    if labels is None:
        labels = set(true_labels) | set(predicted_labels) | {positive}
    labels = tuple(sorted(labels, key=sort_key))
    index = {y: i for i, y in enumerate(labels)}
    grid = [[0] * len(labels) for _ in labels]
    for t, p in zip(true_labels, predicted_labels):
        grid[index[t]][index[p]] += 1
    return ConfusionMatrix(labels, tuple(map(tuple, grid)), positive)


def _ratio(name, num, den):
    if den == 0:
        raise UndefinedMetric(name)
    return num / den


def accuracy(c):
    return _ratio("accuracy", sum(c.grid[k][k] for k in range(len(c.labels))), c.total)


def precision_paper(c):
    """Pooled precision: summed per-class TP over summed per-class TP + FP."""
    stats = c.per_class()
    tp = sum(s[0] for s in stats)
    return _ratio("precision_paper", tp, tp + sum(s[1] for s in stats))


def recall_paper(c):
    stats = c.per_class()
    tp = sum(s[0] for s in stats)
    return _ratio("recall_paper", tp, tp + sum(s[2] for s in stats))


def f1(c):
    p, r = precision_paper(c), recall_paper(c)
    return _ratio("f1", 2 * p * r, p + r)


def precision_macro(c):
    return sum(_ratio("precision_macro", tp, tp + fp) for tp, fp, _ in c.per_class()) / len(c.labels)


def recall_macro(c):
    return sum(_ratio("recall_macro", tp, tp + fn) for tp, _, fn in c.per_class()) / len(c.labels)


def specificity(c):
    return _ratio("specificity", c.tn, c.tn + c.fp)


def ppv(c):
    return _ratio("ppv", c.tp, c.tp + c.fp)


def npv(c):
    return _ratio("npv", c.tn, c.tn + c.fn)


def _collect(c, funcs):
    out = {}
    for fn in funcs:
        try:
            out[fn.__name__] = fn(c)
        except UndefinedMetric:
            out[fn.__name__] = None
    return out


def basic_metrics(c):
    """Accuracy, pooled precision/recall, F1 and the standard macro averages.

    Undefined values (zero denominators) are ``None``.
    """
    return _collect(c, (accuracy, precision_paper, recall_paper, f1, precision_macro, recall_macro))


def clinical_metrics(c):
    return _collect(c, (specificity, ppv, npv))


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    criterion: str
    seed: int
    bins: int
    confusion: ConfusionMatrix
    accuracy: float
    precision_paper: float
    recall_paper: float
    f1: float
    precision_macro: float
    recall_macro: float
    specificity: float
    ppv: float
    npv: float
    tree_stats: TreeStats

    @classmethod
    def from_confusion(cls, dataset, criterion, seed, bins, c, stats):
        if isinstance(criterion, CriterionKind):
            criterion = criterion.value
        return cls(dataset, criterion, seed, bins, c, **basic_metrics(c), **clinical_metrics(c), tree_stats=stats)

    def to_dict(self):
        c = self.confusion
        out = {
            "dataset": self.dataset, "criterion": self.criterion, "seed": self.seed, "bins": self.bins,
            "tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn,
        }
        out.update({m: getattr(self, m) for m in METRICS})
        out.update(
            tree_depth=self.tree_stats.depth,
            leaf_count=self.tree_stats.leaf_count,
            balanced=self.tree_stats.balanced,
            positive_class=c.positive,
            labels=list(c.labels),
            grid=[list(r) for r in c.grid],
            leaf_depths=list(self.tree_stats.leaf_depths),
        )
        return out

    @classmethod
    def from_dict(cls, d):
        c = ConfusionMatrix(tuple(d["labels"]), tuple(map(tuple, d["grid"])), d["positive_class"])
        stats = TreeStats(d["tree_depth"], d["leaf_count"], tuple(d["leaf_depths"]), d["balanced"])
        return cls(d["dataset"], d["criterion"], d["seed"], d["bins"], c,
                   **{m: d[m] for m in METRICS}, tree_stats=stats)


def fit_tree(train, criterion, mode=AmplitudeMode.JOINT, max_depth=None):
    features = range(len(train.schema.feature_names))
    return build_tree(list(train.rows), features, criterion, TreeConfig(max_depth, mode))


def evaluate_tree(tree, test, dataset, criterion, seed, bins):
    """Report for ``tree`` on an already-binned test set."""
    truth = test.labels
    predicted = [predict(tree, values) for values, _ in test.rows]
    labels = set(truth) | set(predicted) | set(test.schema.class_labels or ())
    c = confusion(truth, predicted, test.positive_label, labels)
    return EvaluationReport.from_confusion(dataset, criterion, seed, bins, c, tree_stats(tree))


def prepare_split(d, train_fraction=0.9, seed=42, bins=2, strategy=data_mod.BinStrategy.EQUAL_FREQUENCY):
    """Split, then bin both sides with edges fitted on the training rows only."""
    train, test = data_mod.train_test_split(d, train_fraction, seed)
    edges = data_mod.fit_bins(train, bins, strategy)
    return data_mod.apply_bins(train, edges), data_mod.apply_bins(test, edges)


def run_benchmark(datasets, criteria, train_fraction=0.9, seed=42, bins=2,
                  mode=AmplitudeMode.JOINT, max_depth=None,
                  strategy=data_mod.BinStrategy.EQUAL_FREQUENCY):
    """One report per (dataset, criterion), in the order given.

    ``datasets`` holds built-in names or ``Dataset`` objects.
    """
    reports = []
    for d in datasets:
        if isinstance(d, str):
            d = data_mod.prepare_builtin(d)
        name = d.name or "dataset"
        train, test = prepare_split(d, train_fraction, seed, bins, strategy)
        for criterion in criteria:
            if isinstance(criterion, str):
                criterion = CriterionKind.parse(criterion)
            tree = fit_tree(train, criterion, mode, max_depth)
            reports.append(evaluate_tree(tree, test, name, criterion, seed, bins))
    return reports


def _pct(value):
    return "" if value is None else f"{100 * value:.2f}"


def _row(report):
    d = report.to_dict()
    return [_pct(d[k]) if k in METRICS else str(d[k]).lower() if k == "balanced" else d[k] for k in CSV_COLUMNS]


def emit_report(reports, fmt="json"):
    """Render reports as ``json`` (lossless), ``csv`` or ``markdown``.

    CSV and markdown print metrics as percentages with two decimals; an
    undefined metric is left blank (CSV) or shown as ``n/a`` (markdown).
    """
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(_row(r) for r in reports)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(CSV_COLUMNS) + " |", "|" + "---|" * len(CSV_COLUMNS)]
        for r in reports:
            lines.append("| " + " | ".join(str(v) if v != "" else "n/a" for v in _row(r)) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report_json(text):
    return [EvaluationReport.from_dict(d) for d in json.loads(text)]
