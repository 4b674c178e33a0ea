"""Feature/class statistics as amplitude-embedded states and their density operators."""

import enum
from collections import Counter
from dataclasses import dataclass

import numpy as np

from qfdt import linalg
from qfdt.errors import AllZeroCounts, LengthMismatch


class AmplitudeMode(enum.Enum):
    """How contingency counts become amplitudes.

    JOINT uses the joint counts n(i, j) directly. CONDITIONAL first turns each
    feature-value row into the class distribution p(j | i).
    """

    JOINT = "joint"
    CONDITIONAL = "conditional"


def sort_key(value):
    # numbers before strings so mixed columns still order deterministically
    return (isinstance(value, str), value)


@dataclass(frozen=True)
class ContingencyTable:
    feature_values: tuple
    class_labels: tuple
    counts: tuple  # k rows of m nonnegative ints

    @property
    def shape(self):
        return len(self.feature_values), len(self.class_labels)

    @property
    def total(self):
        return sum(map(sum, self.counts))

    def as_array(self):
        return np.array(self.counts, dtype=float).reshape(self.shape)


@dataclass(frozen=True, eq=False)
class AmplitudeState:
    dx: int
    dy: int
    amplitudes: np.ndarray


def build_contingency(feature_column, label_column):
    """Count co-occurrences of feature values and class labels.

    Both axes are the distinct observed values, sorted ascending.
    """
    feature_column = list(feature_column)
    label_column = list(label_column)
    if len(feature_column) != len(label_column):
        raise LengthMismatch(
            f"feature column has {len(feature_column)} rows, label column {len(label_column)}"
        )
    if not feature_column:
        raise LengthMismatch("columns are empty")
    pairs = Counter(zip(feature_column, label_column))
    values = tuple(sorted(set(feature_column), key=sort_key))
    labels = tuple(sorted(set(label_column), key=sort_key))
    counts = tuple(tuple(pairs.get((v, y), 0) for y in labels) for v in values)
    return ContingencyTable(values, labels, counts)


def embed_state(table, mode=AmplitudeMode.JOINT):
    """Normalized amplitude vector over ``|X_i Y_j>``, j fastest."""
    n = table.as_array()
    if mode is AmplitudeMode.CONDITIONAL:
        row_sums = n.sum(axis=1, keepdims=True)
        n = np.divide(n, row_sums, out=np.zeros_like(n), where=row_sums > 0)
    elif mode is not AmplitudeMode.JOINT:
        raise ValueError(f"unknown amplitude mode {mode!r}")
    amps = n.ravel()
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise AllZeroCounts("every contingency count is zero")
    k, m = table.shape
    return AmplitudeState(k, m, amps / norm)


def joint_density(state):
    """Pure-state projector ``|psi><psi|``."""
    psi = state.amplitudes
    return np.outer(psi, psi)


def reduced_pair(state):
    """Reduced operators on the feature and class subsystems.

    When the subsystems differ in dimension the smaller operator is zero-padded
    so that the two can be compared.
    """
    rho = joint_density(state)
    dims = (state.dx, state.dy)
    rho_x = linalg.partial_trace(rho, dims, keep="X")
    rho_y = linalg.partial_trace(rho, dims, keep="Y")
    d = max(dims)
    return linalg.zero_pad(rho_x, d), linalg.zero_pad(rho_y, d)
