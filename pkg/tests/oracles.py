"""Independent reference computations used only by the tests.

None of these go through the Jacobi kernel: they use numpy's LAPACK
eigensolver, closed forms, or explicit loops over raw rows.
"""

import math
from collections import Counter

import numpy as np

TOY_ROWS = [
    ((1, 1, 1), 1),
    ((0, 1, 0), 0),
    ((1, 0, 1), 0),
    ((0, 0, 1), 1),
]


def toy_column(f):
    return [r[f] for r, _ in TOY_ROWS], [y for _, y in TOY_ROWS]


def eigh_sqrt(m):
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.T


def brute_partial_trace(rho, dx, dy, keep):
    if keep == "X":
        out = np.zeros((dx, dx))
        for i in range(dx):
            for k in range(dx):
                for j in range(dy):
                    out[i, k] += rho[i * dy + j, k * dy + j]
    else:
        out = np.zeros((dy, dy))
        for j in range(dy):
            for l in range(dy):
                for i in range(dx):
                    out[j, l] += rho[i * dy + j, i * dy + l]
    return out


def fidelity_2x2(r, s):
    """tr sqrt(sqrt r s sqrt r) for 2x2 operators: F^2 = tr(rs) + 2 sqrt(det r det s)."""
    return math.sqrt(np.trace(r @ s) + 2 * math.sqrt(max(0.0, np.linalg.det(r) * np.linalg.det(s))))


def bhattacharyya(p, q):
    return float(np.sum(np.sqrt(np.asarray(p) * np.asarray(q))))


def entropy_bits(m):
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-12]
    return float(-np.sum(w * np.log2(w)))


def random_density(rng, d, rank=None):
    g = rng.normal(size=(d, rank or d))
    m = g @ g.T
    return m / np.trace(m)


def shannon(labels):
    n = len(labels)
    return -sum(c / n * math.log2(c / n) for c in Counter(labels).values())


def brute_cig(xs, ys):
    n = len(ys)
    cond = 0.0
    for v in set(xs):
        sub = [y for x, y in zip(xs, ys) if x == v]
        cond += len(sub) / n * shannon(sub)
    return shannon(ys) - cond


def brute_gini(xs, ys):
    n = len(ys)
    total = 0.0
    for v in set(xs):
        sub = [y for x, y in zip(xs, ys) if x == v]
        total += len(sub) / n * (1 - sum((c / len(sub)) ** 2 for c in Counter(sub).values()))
    return total


# Frozen from the closed forms above (computed once, independently of qfdt):
# eigenvalues of [[1/6,1/6],[1/6,5/6]] are (1 +- sqrt(5)/3)/2.
FIDELITY_X3_JOINT = math.sqrt(17 / 18)  # 0.97182531580755
FIDELITY_X3_CONDITIONAL = 0.9948848769417229
ENTROPY_RHO_X3 = 0.5500477595827575
CIG_X3 = 0.31127812445913283
