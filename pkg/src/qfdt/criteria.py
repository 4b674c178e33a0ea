"""Attribute-selection criteria and best-feature selection."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from qfdt import linalg
from qfdt.embedding import AmplitudeMode, build_contingency, embed_state, joint_density, reduced_pair
from qfdt.errors import EmptyScoreList

TIE_TOL = 1e-12


class CriterionKind(enum.Enum):
    FIDELITY = "fidelity"
    QIG = "qig"
    CIG = "cig"
    GINI = "gini"

    @property
    def maximize(self):
        return self is not CriterionKind.GINI

    @classmethod
    def parse(cls, name):
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"unknown criterion {name!r}; choose from {', '.join(c.value for c in cls)}"
            ) from None


@dataclass(frozen=True)
class FeatureScore:
    feature_index: int
    score: float
    maximize: bool = True


def score_fidelity(table, mode=AmplitudeMode.JOINT):
    rho_x, rho_y = reduced_pair(embed_state(table, mode))
    return linalg.fidelity(rho_x, rho_y)


def score_qig(table, mode=AmplitudeMode.JOINT):
    """Von Neumann mutual information S(X) + S(Y) - S(XY) of the embedded state, in bits."""
    state = embed_state(table, mode)
    rho = joint_density(state)
    dims = (state.dx, state.dy)
    s_x = linalg.von_neumann_entropy(linalg.partial_trace(rho, dims, "X"))
    s_y = linalg.von_neumann_entropy(linalg.partial_trace(rho, dims, "Y"))
    s_xy = linalg.von_neumann_entropy(rho)
    return max(0.0, s_x + s_y - s_xy)


def _shannon(counts):
    total = sum(counts)
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def score_cig(table):
    """ID3 information gain H(Y) - H(Y | X) in bits."""
    n = table.as_array()
    total = n.sum()
    conditional = sum(row.sum() / total * _shannon(row) for row in n if row.sum())
    return max(0.0, _shannon(n.sum(axis=0)) - conditional)


def score_gini(table):
    """Weighted Gini impurity of the children; lower is better."""
    n = table.as_array()
    total = n.sum()
    impurity = 0.0
    for row in n:
        size = row.sum()
        if size:
            impurity += size / total * (1.0 - float(np.sum((row / size) ** 2)))
    return impurity


def score_table(table, criterion, mode=AmplitudeMode.JOINT):
    if criterion is CriterionKind.FIDELITY:
        return score_fidelity(table, mode)
    if criterion is CriterionKind.QIG:
        return score_qig(table, mode)
    if criterion is CriterionKind.CIG:
        return score_cig(table)
    if criterion is CriterionKind.GINI:
        return score_gini(table)
    raise ValueError(f"unknown criterion {criterion!r}")


def score_features(rows, labels, features, criterion, mode=AmplitudeMode.JOINT):
    """Score each candidate feature of a partition.

    Args:
        rows: sequence of feature-value tuples.
        labels: class label per row.
        features: candidate feature indices.

    Returns:
        One ``FeatureScore`` per non-constant feature, in ``features`` order.
    """
    scores = []
    for f in features:
        table = build_contingency([r[f] for r in rows], labels)
        if len(table.feature_values) < 2:
            continue
        scores.append(FeatureScore(f, score_table(table, criterion, mode), criterion.maximize))
    return scores


def select_best(scores):
    """Index of the best-scoring feature; near-ties go to the lowest index."""
    if not scores:
        raise EmptyScoreList("no feature scores to choose from")
    sign = 1.0 if scores[0].maximize else -1.0
    best = max(sign * s.score for s in scores)
    return min(s.feature_index for s in scores if sign * s.score >= best - TIE_TOL)
