"""Generator bases and the coefficient decomposition of bipartite states.

A bipartite state on dimensions ``(N, M)`` is expanded as

    rho = (1/NM) * (I + alpha_i s_i (x) I + beta_j I (x) t_j
                      + gamma_ij s_i (x) t_j)

over traceless Hermitian generator bases ``s_i`` (dimension N) and ``t_j``
(dimension M) normalized to ``trace(s_i s_j) = 2 delta_ij``.  The residual
tensor ``gamma' = (gamma - outer(alpha, beta)) / (N*M)`` isolates the part
of the correlations not explained by the product of the marginals; it is
exactly the coefficient array of ``rho - rho_A (x) rho_B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, InvalidDimension
from .linalg import kron, partial_trace, validate_density


@lru_cache(maxsize=None)
def _su_generators_cached(n: int) -> np.ndarray:
    gens = np.zeros((n * n - 1, n, n), dtype=complex)
    idx = 0
    for j in range(n):
        for k in range(j + 1, n):
            gens[idx, j, k] = 1.0
            gens[idx, k, j] = 1.0
            idx += 1
    for j in range(n):
        for k in range(j + 1, n):
            gens[idx, j, k] = -1.0j
            gens[idx, k, j] = 1.0j
            idx += 1
    for l in range(1, n):
        scale = np.sqrt(2.0 / (l * (l + 1)))
        gens[idx, :l, :l] = scale * np.eye(l)
        gens[idx, l, l] = -scale * l
        idx += 1
    gens.setflags(write=False)
    return gens


def su_generators(n: int) -> np.ndarray:
    """Traceless Hermitian generator basis for dimension ``n``.

    Returns an array of shape ``(n*n - 1, n, n)`` ordered as: symmetric
    off-diagonal pairs (row-major), antisymmetric pairs, then diagonal
    members.  Normalization is ``trace(g_i g_j) = 2 delta_ij``, so ``n = 2``
    yields the Pauli matrices in (x, y, z) order.
    """
    if n < 2:
        raise InvalidDimension(f"generator basis needs dimension >= 2, got {n}")
    return _su_generators_cached(n)


@dataclass(frozen=True)
class BlochDecomposition:
    """Coefficient set of a bipartite state over the generator bases."""

    n: int
    m: int
    alpha: np.ndarray  # shape (n*n - 1,)
    beta: np.ndarray  # shape (m*m - 1,)
    gamma: np.ndarray  # shape (n*n - 1, m*m - 1)


def decompose(rho, n: int, m: int) -> BlochDecomposition:
    """Extract ``(alpha, beta, gamma)`` from a state on dimensions ``(n, m)``.

    The prefactors ``n/2``, ``m/2`` and ``n*m/4`` follow from the generator
    normalization ``trace(g_i g_j) = 2 delta_ij``.
    """
    rho = validate_density(rho)
    if rho.shape != (n * m, n * m):
        raise DimensionMismatch(
            f"state of shape {rho.shape} does not factor as ({n}, {m})"
        )
    gen_a = su_generators(n)
    gen_b = su_generators(m)
    rho_a = partial_trace(rho, (n, m), keep="first")
    rho_b = partial_trace(rho, (n, m), keep="second")
    alpha = 0.5 * n * np.einsum("ab,iba->i", rho_a, gen_a).real
    beta = 0.5 * m * np.einsum("cd,jdc->j", rho_b, gen_b).real
    blocks = rho.reshape(n, m, n, m)
    gamma = 0.25 * n * m * np.einsum("acbd,iba,jdc->ij", blocks, gen_a, gen_b).real
    return BlochDecomposition(n=n, m=m, alpha=alpha, beta=beta, gamma=gamma)


def compose(dec: BlochDecomposition) -> np.ndarray:
    """Rebuild the state from its coefficients, validating physicality.

    Raises :class:`~corrdyn.errors.Unphysical` when the coefficients lie
    outside the convex set of valid states (positivity failure beyond the
    round-off slack); callers relying on silent projection would mask
    genuine domain errors.
    """
    n, m = dec.n, dec.m
    gen_a = su_generators(n)
    gen_b = su_generators(m)
    local_a = np.einsum("i,iab->ab", np.asarray(dec.alpha, dtype=float), gen_a)
    local_b = np.einsum("j,jcd->cd", np.asarray(dec.beta, dtype=float), gen_b)
    corr = np.einsum(
        "ij,iab,jcd->acbd", np.asarray(dec.gamma, dtype=float), gen_a, gen_b
    ).reshape(n * m, n * m)
    rho = (
        np.eye(n * m, dtype=complex)
        + kron(local_a, np.eye(m))
        + kron(np.eye(n), local_b)
        + corr
    ) / (n * m)
    return validate_density(rho)


def residual(dec: BlochDecomposition) -> np.ndarray:
    """Correlation tensor left after removing the product of the marginals."""
    return (dec.gamma - np.outer(dec.alpha, dec.beta)) / (dec.n * dec.m)


def purity(rho) -> float:
    """``trace(rho @ rho)`` as a real number."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.einsum("ab,ba->", rho, rho).real)


def check_pure_state_constraint(
    rho_a, gamma_prime, *, tol: float = 1e-10
) -> bool:
    """Whether a reduced state is compatible with the given correlations.

    A pure reduced state admits only product joint states, so any nonzero
    residual correlation is inconsistent.  Returns ``True`` when consistent.
    """
    rho_a = validate_density(rho_a)
    gamma_prime = np.asarray(gamma_prime, dtype=float)
    if purity(rho_a) >= 1.0 - tol and np.abs(gamma_prime).max() > tol:
        return False
    return True
