"""Operator-sum extraction and the two-term reduced evolution law.

Given a joint unitary ``U`` on dimensions ``(N, M)`` and an environment
state ``rho_B``, the system-side operators

    M[mu, nu] = sqrt(p_nu) <mu| U |nu>

(``|nu>`` the eigenbasis of ``rho_B``, ``<mu|`` the computational basis of
the environment) reproduce the familiar operator-sum channel for product
inputs.  For correlated inputs the reduced evolution picks up an additive
term ``xi`` built from the residual correlation tensor; the sum of the two
terms equals the directly traced evolution exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import decompose, residual, su_generators
from .errors import DimensionMismatch
from .linalg import (
    eig_hermitian,
    kron,
    partial_trace,
    validate_density,
    validate_unitary,
)

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class KrausSet:
    """Indexed operator family ``operators[mu, nu]`` with weights ``env_probs``.

    ``operators`` has shape ``(env_dim, env_dim, system_dim, system_dim)``;
    entries for zero-probability ``nu`` are kept as zero matrices so the
    indexing stays uniform.
    """

    system_dim: int
    env_dim: int
    operators: np.ndarray
    env_probs: np.ndarray


def kraus_from_env_basis(u, probs, basis, n: int, m: int) -> KrausSet:
    """Build the operator family from an explicit environment ensemble.

    ``probs``/``basis`` are the weights and orthonormal columns of an
    eigendecomposition of the environment state.  Exposed separately so
    alternative eigenbases of a degenerate environment state can be
    compared; the induced channel is basis-independent even though the
    individual operators are not.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (n * m, n * m):
        raise DimensionMismatch(f"unitary of shape {u.shape} does not match ({n}, {m})")
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    basis = np.asarray(basis, dtype=complex)
    blocks = u.reshape(n, m, n, m)
    ops = np.einsum("ambc,cv->mvab", blocks, basis)
    ops = ops * np.sqrt(probs)[np.newaxis, :, np.newaxis, np.newaxis]
    return KrausSet(system_dim=n, env_dim=m, operators=ops, env_probs=probs)


def kraus_from_unitary(u, rho_b, n: int, m: int) -> KrausSet:
    """Extract the operator family of ``(U, rho_B)`` on dimensions ``(n, m)``."""
    u = validate_unitary(u)
    rho_b = validate_density(rho_b)
    if rho_b.shape != (m, m):
        raise DimensionMismatch(f"environment state has shape {rho_b.shape}, not ({m}, {m})")
    probs, basis = eig_hermitian(rho_b)
    return kraus_from_env_basis(u, probs, basis, n, m)


def apply_kraus(k: KrausSet, rho) -> np.ndarray:
    """Apply ``sum_munu M rho M†`` to a system operator."""
    rho = np.asarray(rho, dtype=complex)
    d = k.system_dim
    if rho.shape != (d, d):
        raise DimensionMismatch(f"operator of shape {rho.shape} does not match dim {d}")
    return np.einsum("uvab,bc,uvdc->ad", k.operators, rho, k.operators.conj())


def completeness_defect(k: KrausSet) -> float:
    """Max entrywise deviation of ``sum M† M`` from the identity."""
    total = np.einsum("uvba,uvbc->ac", k.operators.conj(), k.operators)
    return float(np.abs(total - np.eye(k.system_dim)).max())


def inhomogeneous_term(u, gamma_prime, basis_a, basis_b) -> np.ndarray:
    """Correlation-induced additive term of the reduced evolution.

    Computes ``Tr_env(U C U†)`` for the correlation operator
    ``C = sum_ij gamma'_ij s_i (x) t_j``.  The result is Hermitian and
    traceless, and depends only on ``(U, gamma')``.
    """
    basis_a = np.asarray(basis_a, dtype=complex)
    basis_b = np.asarray(basis_b, dtype=complex)
    n = basis_a.shape[1]
    m = basis_b.shape[1]
    u = np.asarray(u, dtype=complex)
    if u.shape != (n * m, n * m):
        raise DimensionMismatch(f"unitary of shape {u.shape} does not match ({n}, {m})")
    gamma_prime = np.asarray(gamma_prime, dtype=float)
    corr = np.einsum("ij,iab,jcd->acbd", gamma_prime, basis_a, basis_b)
    corr = corr.reshape(n * m, n * m)
    return partial_trace(u @ corr @ u.conj().T, (n, m), keep="first")


def evolve_reduced(u, rho_ab, n: int, m: int):
    """Two-term reduced evolution of a (possibly correlated) joint state.

    Returns ``(rho_out, channel_part, xi)`` where ``rho_out`` is the
    validated sum of the operator-sum part (acting on the marginal of the
    system) and the correlation term ``xi``.  The sum reproduces
    ``Tr_env(U rho_AB U†)``.
    """
    rho_ab = validate_density(rho_ab)
    u = validate_unitary(u)
    if rho_ab.shape != (n * m, n * m) or u.shape != (n * m, n * m):
        raise DimensionMismatch(
            f"joint operators of shape {rho_ab.shape}/{u.shape} do not match ({n}, {m})"
        )
    dec = decompose(rho_ab, n, m)
    gamma_prime = residual(dec)
    rho_a = partial_trace(rho_ab, (n, m), keep="first")
    rho_b = partial_trace(rho_ab, (n, m), keep="second")
    kset = kraus_from_unitary(u, rho_b, n, m)
    channel_part = apply_kraus(kset, rho_a)
    xi = inhomogeneous_term(u, gamma_prime, su_generators(n), su_generators(m))
    rho_out = validate_density(channel_part + xi)
    return rho_out, channel_part, xi


def choi_matrix(k: KrausSet) -> np.ndarray:
    """Block matrix ``sum_ab |a><b| (x) channel(|a><b|)``."""
    d = k.system_dim
    choi = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[a, b] = 1.0
            choi += kron(unit, apply_kraus(k, unit))
    return choi


def is_completely_positive(k: KrausSet, *, tol: float = 1e-10) -> bool:
    """Positive-semidefiniteness of the Choi matrix, within slack ``tol``."""
    eigs = np.linalg.eigvalsh(choi_matrix(k))
    return float(eigs.min()) >= -tol
