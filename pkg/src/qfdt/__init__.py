"""Decision trees whose attribute selection uses the Uhlmann fidelity between
the feature and class reduced states of an amplitude-embedded contingency table.
"""

from qfdt.criteria import CriterionKind, score_cig, score_fidelity, score_gini, score_qig, select_best
from qfdt.embedding import AmplitudeMode, build_contingency, embed_state
from qfdt.tree import build_tree, predict, tree_stats

__version__ = "0.1.0"

__all__ = [
    "AmplitudeMode",
    "CriterionKind",
    "build_contingency",
    "build_tree",
    "embed_state",
    "predict",
    "score_cig",
    "score_fidelity",
    "score_gini",
    "score_qig",
    "select_best",
    "tree_stats",
]
