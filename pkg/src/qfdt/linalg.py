"""Small dense real-symmetric linear algebra for the quantum criteria.

Every matrix here is a real symmetric ``numpy`` array; the states built from
contingency counts have nonnegative real amplitudes, so complex arithmetic is
never needed. Eigendecompositions use cyclic Jacobi rotations, which are
accurate and fast enough for the tiny operators a split produces.
"""

import numpy as np

from qfdt.errors import DimensionMismatch, NotPSD, NumericalError

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
CLAMP_FLOOR = 1e-10
NOT_PSD_THRESHOLD = -1e-8
ENTROPY_CUTOFF = 1e-12
TRACE_TOL = 1e-9
# eigenvalues within this multiple of eps * spectral radius are rounding noise
NOISE_ULPS = 64


class NotSymmetric(NumericalError):
    pass


def symmetric(m, atol=1e-9):
    """Return ``m`` as a float array whose transpose equals it exactly.

    Entries that disagree by at most ``atol`` are averaged; anything larger
    raises ``NotSymmetric``.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    if np.max(np.abs(a - a.T)) > atol:
        raise NotSymmetric("matrix is not symmetric")
    return (a + a.T) / 2.0


def density_operator(m):
    """Validate a density operator: symmetric, unit trace, PSD up to the floor."""
    a = symmetric(m)
    tr = np.trace(a)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NumericalError(f"trace is {tr!r}, expected 1")
    w, _ = jacobi_eigh(a)
    if w[0] < -CLAMP_FLOOR:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is below the PSD floor")
    return a


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def jacobi_eigh(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    Cyclic Jacobi: sweep every (p, q) pair, zeroing ``a[p, q]`` with a plane
    rotation, until the off-diagonal Frobenius norm drops below
    ``JACOBI_TOL`` (scaled by the matrix norm when that exceeds 1).
    """
    a = symmetric(m)
    n = a.shape[0]
    v = np.eye(n)
    tol = JACOBI_TOL * max(1.0, np.linalg.norm(a))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if _off_norm(a) >= tol:
            raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _clamped_spectrum(m):
    w, v = jacobi_eigh(m)
    if w[0] < NOT_PSD_THRESHOLD:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is below {NOT_PSD_THRESHOLD}")
    noise = NOISE_ULPS * np.finfo(float).eps * max(abs(w[0]), abs(w[-1]))
    return np.where(w > noise, w, 0.0), v


def matrix_sqrt(m):
    """Principal square root of a symmetric PSD matrix.

    Round-off negatives in the spectrum, and positives too small to be told
    apart from rounding noise, are set to zero before the root. Without this
    a true zero eigenvalue computed as 1e-17 would contribute 3e-9.

    Raises:
        NotPSD: an eigenvalue is below ``NOT_PSD_THRESHOLD``.
    """
    w, v = _clamped_spectrum(m)
    s = (v * np.sqrt(w)) @ v.T
    return (s + s.T) / 2.0


def partial_trace(rho, dims, keep):
    """Reduced operator of a bipartite state on ``|X_i Y_j>`` (j fastest).

    Args:
        rho: (dX*dY) x (dX*dY) symmetric matrix.
        dims: pair ``(dX, dY)``.
        keep: ``"X"`` or ``"Y"``, the subsystem that survives.
    """
    dx, dy = (int(d) for d in dims)
    a = symmetric(rho)
    if dx < 1 or dy < 1 or a.shape[0] != dx * dy:
        raise DimensionMismatch(f"operator of dim {a.shape[0]} does not factor as {dx}x{dy}")
    t = a.reshape(dx, dy, dx, dy)
    if keep == "X":
        out = np.einsum("ijkj->ik", t)
    elif keep == "Y":
        out = np.einsum("ijil->jl", t)
    else:
        raise ValueError(f"keep must be 'X' or 'Y', not {keep!r}")
    return (out + out.T) / 2.0


def fidelity(a, b):
    """Uhlmann fidelity ``tr sqrt(sqrt(a) b sqrt(a))`` of two density operators, in [0, 1]."""
    a = symmetric(a)
    b = symmetric(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operators have shapes {a.shape} and {b.shape}")
    for name, op in (("a", a), ("b", b)):
        if abs(np.trace(op) - 1.0) > TRACE_TOL:
            raise NumericalError(f"{name} does not have unit trace")
    root_a = matrix_sqrt(a)
    inner = root_a @ b @ root_a
    f = float(np.trace(matrix_sqrt((inner + inner.T) / 2.0)))
    return min(1.0, max(0.0, f))


def von_neumann_entropy(rho):
    """``-tr(rho log2 rho)`` in bits; eigenvalues below 1e-12 contribute nothing."""
    w, _ = _clamped_spectrum(rho)
    w = w[w > ENTROPY_CUTOFF]
    return max(0.0, float(-np.sum(w * np.log2(w))))


def zero_pad(m, dim):
    """Embed ``m`` in the top-left corner of a ``dim`` x ``dim`` zero matrix."""
    a = np.asarray(m, dtype=float)
    if a.shape[0] > dim:
        raise DimensionMismatch(f"cannot pad a {a.shape[0]}-dim operator down to {dim}")
    out = np.zeros((dim, dim))
    out[: a.shape[0], : a.shape[1]] = a
    return out
