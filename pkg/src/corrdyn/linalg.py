"""Dense complex-matrix substrate for small bipartite quantum systems.

All operations work on plain ``numpy.ndarray`` values with complex entries.
States and unitaries are validated rather than wrapped: the validators
return the (possibly eigenvalue-clamped) array so call sites stay purely
functional.  The vectorization convention is column stacking, fixed
project-wide: ``vec(m)[j*d + i] = m[i, j]``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitary, Unphysical

# Default tolerances for double-precision spectral computations on dims <= 16.
HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_SLACK = 1e-10


def as_matrix(entries) -> np.ndarray:
    """Coerce to a complex 2-d array, rejecting non-finite entries."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of rank {m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Max entrywise deviation of ``m`` from its own adjoint."""
    return float(np.abs(m - m.conj().T).max())


def kron(a, b) -> np.ndarray:
    """Kronecker product, row-major block layout."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: tuple[int, int], keep: str = "first") -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    Parameters
    ----------
    rho : array_like
        Operator on a product space of dimension ``dims[0] * dims[1]``.
    dims : (int, int)
        Dimensions of the first and second factor.
    keep : {"first", "second"}
        Which factor the result acts on.
    """
    rho = np.asarray(rho, dtype=complex)
    n, m = dims
    if rho.shape != (n * m, n * m):
        raise DimensionMismatch(
            f"operator of shape {rho.shape} does not factor as ({n}, {m})"
        )
    blocks = rho.reshape(n, m, n, m)
    if keep == "first":
        return np.einsum("ambm->ab", blocks)
    if keep == "second":
        return np.einsum("aman->mn", blocks)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and
    descending and eigenvectors as columns.  Exact ties are ordered
    lexicographically by the real parts of the eigenvector entries, which
    keeps downstream operator indexing deterministic.
    """
    m = np.asarray(m, dtype=complex)
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {HERMITICITY_TOL}")
    lam, vec = np.linalg.eigh(m)
    order = sorted(range(lam.size), key=lambda k: (-lam[k], tuple(vec[:, k].real)))
    return lam[order].real, vec[:, order]


def matrix_exp_unitary(h, t: float) -> np.ndarray:
    """``exp(-i*h*t)`` for Hermitian ``h``, via spectral decomposition."""
    lam, vec = eig_hermitian(h)
    return (vec * np.exp(-1j * lam * t)) @ vec.conj().T


def unitary_family(h) -> Callable[[float], np.ndarray]:
    """Return ``t -> exp(-i*h*t)`` with the spectral data computed once.

    This is the natural way to supply a time-parameterized unitary to the
    propagator and master-equation routines.
    """
    lam, vec = eig_hermitian(h)
    vec_h = vec.conj().T

    def u_of_t(t: float) -> np.ndarray:
        return (vec * np.exp(-1j * lam * t)) @ vec_h

    return u_of_t


def vectorize(m) -> np.ndarray:
    """Column-stack a square matrix: ``vec(m)[j*d + i] = m[i, j]``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"vectorize expects a square matrix, got {m.shape}")
    return m.T.reshape(-1)


def devectorize(v) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not a square matrix")
    return v.reshape(d, d).T


def validate_density(
    rho,
    *,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    positivity_slack: float = POSITIVITY_SLACK,
) -> np.ndarray:
    """Check density-operator invariants and return the validated matrix.

    Eigenvalues in ``(-positivity_slack, 0)`` are treated as round-off and
    clamped to zero; anything below the slack raises :class:`Unphysical`.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density operator must be square, got {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > herm_tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {herm_tol}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise Unphysical(
            float("nan"), f"trace {tr:.12g} deviates from 1 by more than {trace_tol}"
        )
    lam, vec = np.linalg.eigh(rho)
    min_eig = float(lam.min())
    if min_eig < -positivity_slack:
        raise Unphysical(min_eig)
    if min_eig < 0.0:
        lam = np.clip(lam, 0.0, None)
        rho = (vec * lam) @ vec.conj().T
    return rho


def validate_unitary(u, *, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Check ``u`` is unitary within ``tol`` (max entrywise defect)."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"unitary must be square, got {u.shape}")
    defect = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
    if defect > tol:
        raise NotUnitary(f"unitarity defect {defect:.3e} exceeds {tol}")
    return u


def swap_factors(dim_first: int, dim_second: int) -> np.ndarray:
    """Permutation matrix sending ``x (x) y`` to ``y (x) x``."""
    s = np.zeros((dim_first * dim_second, dim_first * dim_second), dtype=complex)
    for x in range(dim_first):
        for y in range(dim_second):
            s[y * dim_first + x, x * dim_second + y] = 1.0
    return s


def trace_distance(a, b) -> float:
    """Half the sum of the absolute eigenvalues of ``a - b``."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Full-rank random state: normalized ``G G†`` with Gaussian ``G``."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / rho.trace().real


def random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Rank-one random state from a Gaussian amplitude vector."""
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases
