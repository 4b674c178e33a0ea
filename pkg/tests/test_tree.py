import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import TOY_ROWS
from qfdt.criteria import CriterionKind
from qfdt.errors import EmptyRootPartition, MalformedModel, MissingFeatureValue
from qfdt.tree import (
    Internal,
    Leaf,
    SplitRule,
    TreeConfig,
    build_tree,
    deserialize,
    dumps,
    loads,
    majority_label,
    predict,
    render_tree,
    serialize,
    tree_stats,
)

FEATURES = [0, 1, 2]
NAMES = ("X1", "X2", "X3")


def grow(criterion, rows=TOY_ROWS, **config):
    return build_tree(list(rows), FEATURES, criterion, TreeConfig(**config))


@pytest.fixture
def fidelity_tree():
    return grow(CriterionKind.FIDELITY)


@pytest.fixture
def cig_tree():
    return grow(CriterionKind.CIG)


class TestToyTrees:
    def test_fidelity_shape(self, fidelity_tree):
        assert fidelity_tree.rule.feature == 0
        assert all(isinstance(c, Internal) and c.rule.feature == 1 for c in fidelity_tree.children.values())
        stats = tree_stats(fidelity_tree)
        assert (stats.depth, stats.leaf_count, stats.balanced) == (2, 4, True)

    def test_cig_shape(self, cig_tree):
        assert cig_tree.rule.feature == 2
        assert cig_tree.children[0] == Leaf(0, {0: 1})
        stats = tree_stats(cig_tree)
        assert 1 in stats.leaf_depths and max(stats.leaf_depths) >= 2
        assert not stats.balanced

    def test_fidelity_no_deeper_than_cig(self, fidelity_tree, cig_tree):
        assert tree_stats(fidelity_tree).depth <= tree_stats(cig_tree).depth

    @pytest.mark.parametrize("criterion", list(CriterionKind))
    def test_reproduces_training_labels(self, criterion):
        tree = grow(criterion)
        assert [predict(tree, r) for r, _ in TOY_ROWS] == [y for _, y in TOY_ROWS]

    def test_printed_predictions(self, fidelity_tree):
        assert predict(fidelity_tree, (1, 1, 1)) == 1
        assert predict(fidelity_tree, (0, 1, 0)) == 0

    def test_unseen_value_uses_root_fallback(self, fidelity_tree):
        assert fidelity_tree.fallback == 0
        assert predict(fidelity_tree, (7, 1, 1)) == 0

    def test_missing_value(self, fidelity_tree):
        with pytest.raises(MissingFeatureValue):
            predict(fidelity_tree, (None, 1, 1))
        with pytest.raises(MissingFeatureValue):
            predict(fidelity_tree, ())


class TestStoppingRules:
    @pytest.mark.parametrize("criterion", list(CriterionKind))
    def test_single_class(self, criterion):
        tree = build_tree([((0, 1), 1), ((1, 0), 1)], [0, 1], criterion)
        assert tree == Leaf(1, {1: 2})

    def test_no_features_gives_majority_with_low_tie(self):
        assert build_tree([((0,), 2), ((1,), 1)], [], CriterionKind.CIG) == Leaf(1, {1: 1, 2: 1})

    def test_constant_features_give_majority(self):
        tree = build_tree([((0,), 2), ((0,), 1), ((0,), 2)], [0], CriterionKind.FIDELITY)
        assert tree == Leaf(2, {1: 1, 2: 2})

    def test_empty_child_uses_parent_label(self):
        assert build_tree([], [0], CriterionKind.CIG, parent_label=4) == Leaf(4, {})

    def test_empty_root(self):
        with pytest.raises(EmptyRootPartition):
            build_tree([], [0], CriterionKind.CIG)

    def test_max_depth(self):
        tree = grow(CriterionKind.FIDELITY, max_depth=1)
        assert tree_stats(tree).depth == 1
        assert grow(CriterionKind.FIDELITY, max_depth=0) == Leaf(0, {0: 2, 1: 2})

    def test_majority_label(self):
        assert majority_label({"b": 2, "a": 2, "c": 1}) == "a"
        assert majority_label({3: 1, 1: 5}) == 1


def test_single_leaf_stats():
    stats = tree_stats(Leaf(1, {1: 3}))
    assert (stats.depth, stats.leaf_count, stats.leaf_depths, stats.balanced) == (0, 1, (0,), True)


def _paths(node, seen=()):
    if isinstance(node, Leaf):
        yield seen
        return
    for child in node.children.values():
        yield from _paths(child, seen + (node.rule.feature,))


datasets = st.lists(
    st.tuples(st.tuples(*[st.integers(0, 2)] * 3), st.integers(0, 2)), min_size=1, max_size=25
)


@settings(max_examples=100, deadline=None)
@given(datasets, st.sampled_from(list(CriterionKind)))
def test_tree_invariants(rows, criterion):
    tree = build_tree(rows, FEATURES, criterion)
    assert build_tree(rows, FEATURES, criterion) == tree
    for path in _paths(tree):
        assert len(path) == len(set(path))
    stats = tree_stats(tree)
    assert stats.depth == max(stats.leaf_depths) and stats.leaf_count == len(stats.leaf_depths)
    # No two rows share features with different labels -> the tree fits them all.
    by_row = {}
    for r, y in rows:
        by_row.setdefault(r, set()).add(y)
    if all(len(ys) == 1 for ys in by_row.values()):
        assert all(predict(tree, r) == y for r, y in rows)
    assert deserialize(json.loads(dumps(serialize(tree, criterion)))) == tree


class TestModelDocument:
    def test_leaf_round_trip(self):
        leaf = Leaf(1, {1: 3})
        assert deserialize(serialize(leaf)) == leaf

    def test_toy_round_trip(self, fidelity_tree):
        doc = serialize(fidelity_tree, CriterionKind.FIDELITY, NAMES)
        assert doc["version"] == 1 and doc["criterion"] == "fidelity" and doc["featureNames"] == list(NAMES)
        back = deserialize(loads(dumps(doc)))
        assert back == fidelity_tree
        assert [predict(back, r) for r, _ in TOY_ROWS] == [predict(fidelity_tree, r) for r, _ in TOY_ROWS]

    def test_document_layout(self):
        doc = serialize(mixed_tree())
        assert doc["root"] == {
            "internal": {
                "feature": 0,
                "branches": {
                    '"a"': {"leaf": {"label": 1, "counts": {"1": 2}}},
                    "2": {"leaf": {"label": 0, "counts": {"0": 1}}},
                },
                "fallback": 1,
            }
        }

    def test_value_types_survive(self):
        back = deserialize(json.loads(dumps(serialize(mixed_tree()))))
        assert set(back.children) == {"a", 2}

    def test_dumps_is_stable(self, fidelity_tree):
        a = dumps(serialize(fidelity_tree, CriterionKind.FIDELITY, NAMES))
        b = dumps(serialize(grow(CriterionKind.FIDELITY), CriterionKind.FIDELITY, NAMES))
        assert a == b

    def test_truncated_document(self, fidelity_tree):
        text = dumps(serialize(fidelity_tree))
        with pytest.raises(MalformedModel):
            loads(text[: len(text) // 2])

    @pytest.mark.parametrize(
        "root",
        [
            {},
            {"leaf": {"label": 1}},
            {"leaf": {"label": 1, "counts": {"1": -1}}},
            {"internal": {"feature": -1, "branches": {"0": {"leaf": {"label": 1, "counts": {}}}}, "fallback": 1}},
            {"internal": {"feature": 0, "branches": {}, "fallback": 1}},
            {"internal": {"feature": 0, "branches": {"not json": {"leaf": {"label": 1, "counts": {}}}}, "fallback": 1}},
            {"branch": {}},
        ],
    )
    def test_schema_violations(self, root):
        with pytest.raises(MalformedModel):
            deserialize({"version": 1, "criterion": "cig", "featureNames": [], "root": root})

    def test_bad_header(self):
        with pytest.raises(MalformedModel):
            deserialize({"version": 2, "criterion": "", "featureNames": [], "root": {}})
        with pytest.raises(MalformedModel):
            loads("[]")


def mixed_tree():
    return Internal(SplitRule(0, ("a", 2)), {"a": Leaf(1, {1: 2}), 2: Leaf(0, {0: 1})}, 1)


def test_render(fidelity_tree, cig_tree):
    assert render_tree(fidelity_tree, NAMES).splitlines() == [
        "[X1]",
        "  X1 = 0 -> [X2]",
        "    X2 = 0 -> leaf 1 {1: 1}",
        "    X2 = 1 -> leaf 0 {0: 1}",
        "  X1 = 1 -> [X2]",
        "    X2 = 0 -> leaf 0 {0: 1}",
        "    X2 = 1 -> leaf 1 {1: 1}",
    ]
    assert render_tree(cig_tree, NAMES).splitlines()[:2] == ["[X3]", "  X3 = 0 -> leaf 0 {0: 1}"]
    assert render_tree(Leaf(1, {1: 3})) == "leaf 1 {1: 3}"
