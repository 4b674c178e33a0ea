"""Command-line front end.

Exit codes: 0 success, 2 bad flags, 3 data or model problems, 4 numerical
failures inside the criteria.
"""

import csv
import functools
import json
import sys
from pathlib import Path

import click

from qfdt import data as data_mod
from qfdt import evaluation, tree
from qfdt.criteria import CriterionKind, score_features
from qfdt.embedding import AmplitudeMode
from qfdt.errors import DataError, MissingFeatureValue, NumericalError, ParseError, QFDTError

EXIT_DATA = 3
EXIT_NUMERIC = 4


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DataError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA)
        except (NumericalError, QFDTError) as exc:
            click.echo(f"numerical error: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)

    return wrapper


def _criterion(ctx, param, value):
    try:
        return CriterionKind.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def data_options(fn):
    options = [
        click.option("--data", "data_path", type=click.Path(dir_okay=False, path_type=Path),
                     help="CSV with a header row; the label is the last column unless --label is given."),
        click.option("--builtin", type=click.Choice(sorted(data_mod.BUILTINS)), help="Built-in benchmark dataset."),
        click.option("--label", "label_name", help="Label column name for --data."),
        click.option("--continuous", default="",
                     help="Comma-separated --data columns to treat as continuous, or 'all'."),
        click.option("--train-fraction", default=0.9, show_default=True,
                     type=click.FloatRange(0, 1, min_open=True, max_open=True)),
        click.option("--seed", default=42, show_default=True, type=int),
        click.option("--full", is_flag=True, help="Use every row instead of the seeded holdout split."),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def load_source(data_path, builtin, label_name, continuous):
    if (data_path is None) == (builtin is None):
        raise click.UsageError("give exactly one of --data or --builtin")
    if builtin:
        return data_mod.prepare_builtin(builtin)
    with open(data_path, encoding="utf-8") as fh:
        header = next(csv.reader(fh), None)
    if not header:
        raise ParseError(f"{data_path} has no header row", 1)
    header = [h.strip() for h in header]
    label_at = header.index(label_name) if label_name in header else len(header) - 1
    if label_name and label_name not in header:
        raise click.BadParameter(f"no column named {label_name!r}", param_hint="--label")
    names = [h for i, h in enumerate(header) if i != label_at]
    wanted = set(names) if continuous == "all" else {c.strip() for c in continuous.split(",") if c.strip()}
    if wanted - set(names):
        raise click.BadParameter(f"unknown columns {sorted(wanted - set(names))}", param_hint="--continuous")
    kinds = [data_mod.FeatureKind.CONTINUOUS if n in wanted else data_mod.FeatureKind.CATEGORICAL for n in names]
    schema = data_mod.DatasetSchema(tuple(names), tuple(kinds), header[label_at])
    return data_mod.load_csv(data_path, schema, header=True, label_column=label_at, note=data_path.name)


def _sidecar(model_path):
    return model_path.with_name(model_path.name + ".bins.json")


@click.group()
def main():
    """Decision trees with a fidelity-based attribute-selection criterion."""


@main.command()
@data_options
@click.option("--criterion", default="fidelity", show_default=True, callback=_criterion)
@click.option("--mode", type=click.Choice([m.value for m in AmplitudeMode]), default="joint", show_default=True)
@click.option("--bins", default=2, show_default=True, type=click.IntRange(min=2))
@click.option("--max-depth", type=click.IntRange(min=0))
@click.option("--out", "out_path", default="model.json", show_default=True, type=click.Path(path_type=Path))
@_guard
def train(data_path, builtin, label_name, continuous, train_fraction, seed, full,
          criterion, mode, bins, max_depth, out_path):
    """Grow a tree and write the model document."""
    d = load_source(data_path, builtin, label_name, continuous)
    train_set = d if full else data_mod.train_test_split(d, train_fraction, seed)[0]
    edges = data_mod.fit_bins(train_set, bins)
    train_set = data_mod.apply_bins(train_set, edges)
    mode = AmplitudeMode(mode)
    root = evaluation.fit_tree(train_set, criterion, mode, max_depth)

    names = d.schema.feature_names
    out_path.write_text(tree.dumps(tree.serialize(root, criterion, names)), encoding="utf-8")
    sidecar = {"bins": bins, "edges": data_mod.edges_to_json(d, edges)}
    _sidecar(out_path).write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")

    rows = [r for r, _ in train_set.rows]
    scores = score_features(rows, train_set.labels, range(len(names)), criterion, mode)
    stats = tree.tree_stats(root)
    root_name = names[root.rule.feature] if isinstance(root, tree.Internal) else "(leaf)"
    click.echo(f"criterion: {criterion.value}")
    click.echo(f"training rows: {len(train_set)}")
    click.echo(f"root: {root_name}")
    click.echo("root scores:")
    for s in scores:
        click.echo(f"  {names[s.feature_index]}: {s.score:.6f}")
    click.echo(f"depth: {stats.depth}  leaves: {stats.leaf_count}  balanced: {str(stats.balanced).lower()}")
    click.echo(f"model: {out_path}")


def _load_model(model_path):
    model_path = Path(model_path)
    document = tree.loads(model_path.read_text(encoding="utf-8"))
    root = tree.deserialize(document)
    side = _sidecar(model_path)
    sidecar = {"bins": 2, "edges": {}}
    if side.exists():
        try:
            sidecar = json.loads(side.read_text(encoding="utf-8"))
            if not isinstance(sidecar.get("edges"), dict):
                raise ValueError("'edges' must be an object")
        except (ValueError, AttributeError) as exc:
            raise ParseError(f"{side}: {exc}") from exc
    return document, root, sidecar


@main.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@data_options
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "markdown"]), default="csv", show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path))
@_guard
def eval_cmd(model_path, data_path, builtin, label_name, continuous, train_fraction, seed, full, fmt, out_path):
    """Score a saved model on the holdout rows (or every row with --full)."""
    document, root, sidecar = _load_model(model_path)
    d = load_source(data_path, builtin, label_name, continuous)
    test = d if full else data_mod.train_test_split(d, train_fraction, seed)[1]
    test = data_mod.apply_bins(test, data_mod.edges_from_json(d.schema, sidecar["edges"]))
    report = evaluation.evaluate_tree(root, test, d.name, document["criterion"], seed, sidecar["bins"])
    _write(evaluation.emit_report([report], fmt), out_path)


@main.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--value", "values", multiple=True, metavar="NAME=VALUE", help="One feature value; repeatable.")
@_guard
def predict_cmd(model_path, values):
    """Predict the class of one row given as NAME=VALUE pairs."""
    document, root, sidecar = _load_model(model_path)
    names = document["featureNames"]
    row = [None] * len(names)
    for item in values:
        name, sep, raw = item.partition("=")
        if not sep or name not in names:
            raise click.BadParameter(f"expected NAME=VALUE with NAME in {names}, got {item!r}", param_hint="--value")
        row[names.index(name)] = data_mod.coerce(raw)
    for name, edges in sidecar["edges"].items():
        i = names.index(name)
        if row[i] is not None:
            if isinstance(row[i], str):
                raise MissingFeatureValue(f"{name} needs a numeric value")
            row[i] = sum(1 for e in edges if row[i] > e)
    click.echo(tree.predict(root, row))


@main.command()
@click.option("--dataset", "datasets", default="all", show_default=True,
              help="Comma-separated built-in names, or 'all'.")
@click.option("--criteria", default="all", show_default=True, help="Comma-separated criteria, or 'all'.")
@click.option("--mode", type=click.Choice([m.value for m in AmplitudeMode]), default="joint", show_default=True)
@click.option("--bins", default=2, show_default=True, type=click.IntRange(min=2))
@click.option("--train-fraction", default=0.9, show_default=True,
              type=click.FloatRange(0, 1, min_open=True, max_open=True))
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--max-depth", type=click.IntRange(min=0))
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "markdown"]), default="csv", show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path))
@_guard
def bench(datasets, criteria, mode, bins, train_fraction, seed, max_depth, fmt, out_path):
    """Run every requested (dataset, criterion) pair on the seeded holdout split."""
    names = list(data_mod.BUILTINS) if datasets == "all" else [s.strip() for s in datasets.split(",")]
    unknown = [n for n in names if n not in data_mod.BUILTINS]
    if unknown:
        raise click.BadParameter(f"unknown datasets {unknown}", param_hint="--dataset")
    if criteria == "all":
        kinds = list(CriterionKind)
    else:
        try:
            kinds = [CriterionKind.parse(c.strip()) for c in criteria.split(",")]
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--criteria") from None
    reports = evaluation.run_benchmark(names, kinds, train_fraction, seed, bins, AmplitudeMode(mode), max_depth)
    _write(evaluation.emit_report(reports, fmt), out_path)


@main.command()
@click.argument("model_path", type=click.Path(dir_okay=False, path_type=Path))
@_guard
def inspect(model_path):
    """Print a saved model as an indented tree."""
    document, root, _ = _load_model(model_path)
    click.echo(tree.render_tree(root, document["featureNames"]))


def _write(text, out_path):
    if out_path is None:
        click.echo(text, nl=False)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
