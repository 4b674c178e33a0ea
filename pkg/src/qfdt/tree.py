"""Recursive multiway decision trees, prediction, shape statistics and model I/O."""

import json
from collections import Counter
from dataclasses import dataclass, field

from qfdt.criteria import CriterionKind, score_features, select_best
from qfdt.embedding import AmplitudeMode, sort_key
from qfdt.errors import EmptyRootPartition, MalformedModel, MissingFeatureValue

MODEL_VERSION = 1


@dataclass(frozen=True)
class SplitRule:
    """Multiway split on observed ``values``, or a binary ``threshold`` split."""

    feature: int
    values: tuple = ()
    threshold: float = None

    def branch(self, value):
        if self.threshold is not None:
            return "le" if value <= self.threshold else "gt"
        return value


@dataclass
class Leaf:
    label: object
    counts: dict = field(default_factory=dict)


@dataclass
class Internal:
    rule: SplitRule
    children: dict
    fallback: object


@dataclass(frozen=True)
class TreeStats:
    depth: int
    leaf_count: int
    leaf_depths: tuple
    balanced: bool


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = None
    mode: AmplitudeMode = AmplitudeMode.JOINT


def majority_label(counts):
    """Most frequent label; ties go to the smallest label."""
    top = max(counts.values())
    return min((y for y, c in counts.items() if c == top), key=sort_key)


def _leaf(counts):
    ordered = {y: counts[y] for y in sorted(counts, key=sort_key)}
    return Leaf(majority_label(counts), ordered)


def build_tree(partition, features, criterion, config=None, *, parent_label=None, _depth=0):
    """Grow a tree on ``partition``, a list of ``(feature_values, label)`` rows.

    Stopping rules, in order: no usable features left -> majority leaf;
    one class -> leaf of that class; empty partition -> leaf labelled with
    the parent's majority. ``config.max_depth`` also forces a majority leaf.
    The chosen feature is removed before recursing.
    """
    config = config or TreeConfig()
    if not partition:
        if parent_label is None:
            raise EmptyRootPartition("cannot grow a tree from an empty partition")
        return Leaf(parent_label, {})

    rows = [r for r, _ in partition]
    labels = [y for _, y in partition]
    counts = Counter(labels)
    features = sorted(features)

    if not features or len(counts) == 1:
        return _leaf(counts)
    if config.max_depth is not None and _depth >= config.max_depth:
        return _leaf(counts)

    scores = score_features(rows, labels, features, criterion, config.mode)
    if not scores:
        return _leaf(counts)

    best = select_best(scores)
    majority = majority_label(counts)
    groups = {}
    for row, y in partition:
        groups.setdefault(row[best], []).append((row, y))
    values = tuple(sorted(groups, key=sort_key))
    remaining = [f for f in features if f != best]
    children = {
        v: build_tree(groups[v], remaining, criterion, config, parent_label=majority, _depth=_depth + 1)
        for v in values
    }
    return Internal(SplitRule(best, values), children, majority)


def predict(node, row):
    """Class label for one row (a sequence indexed by feature).

    Values never seen at an internal node fall back to that node's
    training majority.
    """
    while isinstance(node, Internal):
        f = node.rule.feature
        if f >= len(row) or row[f] is None:
            raise MissingFeatureValue(f"row has no value for feature {f}")
        child = node.children.get(node.rule.branch(row[f]))
        if child is None:
            return node.fallback
        node = child
    return node.label


def tree_stats(node):
    depths = []
    stack = [(node, 0)]
    while stack:
        n, d = stack.pop()
        if isinstance(n, Internal):
            stack.extend((c, d + 1) for c in n.children.values())
        else:
            depths.append(d)
    depths.sort()
    return TreeStats(depths[-1], len(depths), tuple(depths), depths[0] == depths[-1])


# Model documents. JSON object keys must be strings, so branch values and
# count labels are stored as their JSON encoding ("0", "\"a\"") and decoded
# back on load; this keeps int/str/float values distinct across a round-trip.


def _encode_node(node):
    if isinstance(node, Leaf):
        return {"leaf": {"label": node.label, "counts": {json.dumps(y): c for y, c in node.counts.items()}}}
    body = {"feature": node.rule.feature}
    if node.rule.threshold is not None:
        body["threshold"] = node.rule.threshold
        keys = ("le", "gt")
    else:
        keys = node.rule.values
    body["branches"] = {json.dumps(k): _encode_node(node.children[k]) for k in keys if k in node.children}
    body["fallback"] = node.fallback
    return {"internal": body}


def serialize(node, criterion=None, feature_names=()):
    """Model document (a JSON-ready dict) for a tree."""
    if isinstance(criterion, CriterionKind):
        criterion = criterion.value
    return {
        "version": MODEL_VERSION,
        "criterion": criterion or "",
        "featureNames": list(feature_names),
        "root": _encode_node(node),
    }


def _decode_key(text):
    try:
        return json.loads(text)
    except (TypeError, ValueError) as exc:
        raise MalformedModel(f"bad encoded key {text!r}") from exc


def _is_label(value):
    return isinstance(value, (str, int, float)) and not isinstance(value, bool)


def _decode_node(doc, path="root"):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise MalformedModel(f"{path}: node must be an object with one key")
    (kind, body), = doc.items()
    if not isinstance(body, dict):
        raise MalformedModel(f"{path}: node body must be an object")
    if kind == "leaf":
        if set(body) != {"label", "counts"} or not isinstance(body["counts"], dict):
            raise MalformedModel(f"{path}: leaf needs 'label' and 'counts'")
        if not _is_label(body["label"]):
            raise MalformedModel(f"{path}: bad leaf label")
        counts = {}
        for k, c in body["counts"].items():
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise MalformedModel(f"{path}: bad count {c!r}")
            counts[_decode_key(k)] = c
        return Leaf(body["label"], counts)
    if kind == "internal":
        if not {"feature", "branches", "fallback"} <= set(body) or set(body) - {"feature", "branches", "fallback", "threshold"}:
            raise MalformedModel(f"{path}: internal node needs 'feature', 'branches', 'fallback'")
        feature = body["feature"]
        if not isinstance(feature, int) or isinstance(feature, bool) or feature < 0:
            raise MalformedModel(f"{path}: bad feature index {feature!r}")
        if not isinstance(body["branches"], dict) or not body["branches"]:
            raise MalformedModel(f"{path}: internal node needs at least one branch")
        if not _is_label(body["fallback"]):
            raise MalformedModel(f"{path}: bad fallback label")
        children = {}
        for k, child in body["branches"].items():
            value = _decode_key(k)
            children[value] = _decode_node(child, f"{path}/{k}")
        if "threshold" in body:
            if not isinstance(body["threshold"], (int, float)) or set(children) - {"le", "gt"}:
                raise MalformedModel(f"{path}: bad threshold split")
            rule = SplitRule(feature, threshold=float(body["threshold"]))
        else:
            if any(isinstance(v, (list, dict)) for v in children):
                raise MalformedModel(f"{path}: branch values must be scalars")
            rule = SplitRule(feature, tuple(children))
        return Internal(rule, children, body["fallback"])
    raise MalformedModel(f"{path}: unknown node kind {kind!r}")


def _check_header(document):
    if not isinstance(document, dict):
        raise MalformedModel("model document must be a JSON object")
    missing = {"version", "criterion", "featureNames", "root"} - set(document)
    if missing:
        raise MalformedModel(f"model document lacks {sorted(missing)}")
    if document["version"] != MODEL_VERSION:
        raise MalformedModel(f"unsupported model version {document['version']!r}")
    if not isinstance(document["featureNames"], list):
        raise MalformedModel("featureNames must be a list")


def deserialize(document):
    """Tree root from a model document; raises ``MalformedModel`` on schema violations."""
    _check_header(document)
    return _decode_node(document["root"])


def dumps(document):
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def loads(text):
    try:
        document = json.loads(text)
    except ValueError as exc:
        raise MalformedModel(f"model is not valid JSON: {exc}") from exc
    _check_header(document)
    return document


def render_tree(node, feature_names=()):
    """Indented text diagram, one branch per line, branches in value order."""

    def name(f):
        return feature_names[f] if f < len(feature_names) else f"x{f}"

    def leaf_text(leaf):
        counts = ", ".join(f"{y}: {c}" for y, c in leaf.counts.items())
        return f"leaf {leaf.label} {{{counts}}}"

    def head(n):
        return leaf_text(n) if isinstance(n, Leaf) else f"[{name(n.rule.feature)}]"

    lines = [head(node)]

    def walk(n, indent):
        if isinstance(n, Leaf):
            return
        f = name(n.rule.feature)
        for key in sorted(n.children, key=sort_key):
            child = n.children[key]
            if n.rule.threshold is not None:
                cond = f"{f} {'<=' if key == 'le' else '>'} {n.rule.threshold:g}"
            else:
                cond = f"{f} = {key}"
            lines.append(f"{'  ' * indent}{cond} -> {head(child)}")
            walk(child, indent + 1)

    walk(node, 1)
    return "\n".join(lines)
