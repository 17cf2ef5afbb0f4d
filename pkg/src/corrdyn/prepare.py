"""Preparation (assignment) maps and the evolutions they induce.

A preparation map sends a system state ``rho_A`` to a joint state whose
system marginal is again ``rho_A``.  The induced evolution is
``rho_A -> Tr_env(U P(rho_A) U†)``.  Preparation rules may be nonlinear
(cloning-like assignments), so they are represented behaviorally, as a
rule applied per input, never as a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bloch import BlochDecomposition, compose, su_generators
from .errors import DimensionMismatch, OutsideDomain, Unphysical
from .linalg import (
    kron,
    partial_trace,
    random_density,
    swap_factors,
    validate_density,
    validate_unitary,
)

PRODUCT = "product"
CLONE = "clone"
TRANSPOSE_CLONE = "transpose-clone"
FIXED_CORRELATION = "fixed-correlation"


@dataclass(frozen=True)
class PreparationMap:
    """Assignment rule from system states to joint states.

    ``rho_env`` is used by the product rule; ``env_bloch`` and
    ``correlation`` hold the fixed coefficient data of the
    fixed-correlation rule.
    """

    kind: str
    system_dim: int
    env_dim: int
    rho_env: np.ndarray | None = None
    env_bloch: np.ndarray | None = None
    correlation: np.ndarray | None = None


def product_preparation(rho_env, system_dim: int) -> PreparationMap:
    """``rho_A -> rho_A (x) rho_env`` with a fixed environment state."""
    rho_env = validate_density(rho_env)
    return PreparationMap(
        kind=PRODUCT,
        system_dim=system_dim,
        env_dim=rho_env.shape[0],
        rho_env=rho_env,
    )


def clone_preparation(dim: int) -> PreparationMap:
    """``rho_A -> rho_A (x) rho_A`` (nonlinear assignment)."""
    return PreparationMap(kind=CLONE, system_dim=dim, env_dim=dim)


def transpose_clone_preparation(dim: int) -> PreparationMap:
    """``rho_A -> rho_A (x) rho_A^T`` (nonlinear assignment)."""
    return PreparationMap(kind=TRANSPOSE_CLONE, system_dim=dim, env_dim=dim)


def fixed_correlation_preparation(
    beta, gamma_prime, system_dim: int, env_dim: int
) -> PreparationMap:
    """Keep ``(beta, gamma')`` fixed and inherit ``alpha`` from the input.

    Inputs whose coefficients make the composed joint state unphysical are
    rejected by :func:`prep_apply`; the accepted inputs form a convex set.
    """
    beta = np.asarray(beta, dtype=float)
    gamma_prime = np.asarray(gamma_prime, dtype=float)
    if beta.shape != (env_dim * env_dim - 1,):
        raise DimensionMismatch(
            f"environment coefficient vector has shape {beta.shape}, "
            f"expected ({env_dim * env_dim - 1},)"
        )
    if gamma_prime.shape != (system_dim * system_dim - 1, env_dim * env_dim - 1):
        raise DimensionMismatch(
            f"correlation tensor has shape {gamma_prime.shape}, expected "
            f"({system_dim * system_dim - 1}, {env_dim * env_dim - 1})"
        )
    return PreparationMap(
        kind=FIXED_CORRELATION,
        system_dim=system_dim,
        env_dim=env_dim,
        env_bloch=beta,
        correlation=gamma_prime,
    )


def prep_apply(prep: PreparationMap, rho_a) -> np.ndarray:
    """Apply the assignment rule, returning a validated joint state."""
    rho_a = validate_density(rho_a)
    n = prep.system_dim
    if rho_a.shape != (n, n):
        raise DimensionMismatch(f"system state has shape {rho_a.shape}, not ({n}, {n})")
    if prep.kind == PRODUCT:
        return kron(rho_a, prep.rho_env)
    if prep.kind == CLONE:
        return kron(rho_a, rho_a)
    if prep.kind == TRANSPOSE_CLONE:
        return kron(rho_a, rho_a.T)
    if prep.kind == FIXED_CORRELATION:
        gens = su_generators(n)
        alpha = 0.5 * n * np.einsum("ab,iba->i", rho_a, gens).real
        gamma = n * prep.env_dim * prep.correlation + np.outer(alpha, prep.env_bloch)
        dec = BlochDecomposition(
            n=n, m=prep.env_dim, alpha=alpha, beta=prep.env_bloch, gamma=gamma
        )
        try:
            return compose(dec)
        except Unphysical as exc:
            raise OutsideDomain(
                "input state is outside the domain of the fixed-correlation "
                f"preparation ({exc})"
            ) from exc
    raise ValueError(f"unknown preparation kind {prep.kind!r}")


@dataclass(frozen=True)
class InducedEvolution:
    """Reduced evolution obtained by preparing, evolving, and tracing."""

    prep: PreparationMap
    unitary: np.ndarray


def induced_evolution(prep: PreparationMap, unitary) -> InducedEvolution:
    unitary = validate_unitary(unitary)
    joint = prep.system_dim * prep.env_dim
    if unitary.shape != (joint, joint):
        raise DimensionMismatch(
            f"unitary of shape {unitary.shape} does not match joint dim {joint}"
        )
    return InducedEvolution(prep=prep, unitary=unitary)


def induced_apply(evo: InducedEvolution, rho_a) -> np.ndarray:
    """``Tr_env(U P(rho_A) U†)`` as a validated density operator."""
    joint = prep_apply(evo.prep, rho_a)
    n, m = evo.prep.system_dim, evo.prep.env_dim
    out = partial_trace(evo.unitary @ joint @ evo.unitary.conj().T, (n, m), keep="first")
    return validate_density(out)


@dataclass(frozen=True)
class LinearityWitness:
    """Concrete convex combination on which linearity fails."""

    states: tuple[np.ndarray, ...]
    weights: tuple[float, ...]
    deviation: np.ndarray
    deviation_norm: float


def _draw_in_domain(evo: InducedEvolution, rng: np.random.Generator, attempts: int = 200):
    for _ in range(attempts):
        rho = random_density(rng, evo.prep.system_dim)
        try:
            out = induced_apply(evo, rho)
        except OutsideDomain:
            continue
        return rho, out
    raise OutsideDomain("could not sample a state inside the preparation domain")


def linearity_test(
    evo: InducedEvolution,
    samples: int,
    mix_weights: int = 3,
    tol: float = 1e-10,
    rng: np.random.Generator | None = None,
) -> LinearityWitness | None:
    """Probe ``$`` on random two-state convex combinations.

    Returns ``None`` when every sampled combination satisfies
    ``$(sum_j w_j rho_j) = sum_j w_j $(rho_j)`` within ``tol`` (max
    entrywise deviation), otherwise the first failing witness.
    """
    if samples < 2:
        raise ValueError("linearity test needs at least 2 samples")
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(samples):
        rho1, out1 = _draw_in_domain(evo, rng)
        rho2, out2 = _draw_in_domain(evo, rng)
        for _ in range(mix_weights):
            w = float(rng.uniform(0.05, 0.95))
            try:
                mixed_out = induced_apply(evo, w * rho1 + (1 - w) * rho2)
            except OutsideDomain:
                # Domain convexity makes this unreachable for accepted
                # endpoints; skip defensively rather than report nonlinearity.
                continue
            deviation = mixed_out - (w * out1 + (1 - w) * out2)
            norm = float(np.abs(deviation).max())
            if norm > tol:
                return LinearityWitness(
                    states=(rho1, rho2),
                    weights=(w, 1 - w),
                    deviation=deviation,
                    deviation_norm=norm,
                )
    return None


@dataclass(frozen=True)
class EnvironmentMarginalResult:
    """Outcome of probing whether ``Tr_sys P(rho)`` depends on the input."""

    constant: bool
    env_state: np.ndarray | None
    witness: tuple[np.ndarray, np.ndarray] | None
    max_deviation: float


def constant_environment_test(
    prep: PreparationMap,
    samples: int,
    tol: float = 1e-10,
    rng: np.random.Generator | None = None,
) -> EnvironmentMarginalResult:
    """Check whether the environment marginal is the same for all inputs."""
    if samples < 2:
        raise ValueError("environment test needs at least 2 samples")
    if rng is None:
        rng = np.random.default_rng(0)
    n, m = prep.system_dim, prep.env_dim
    reference_input: np.ndarray | None = None
    reference: np.ndarray | None = None
    worst = 0.0
    drawn = 0
    attempts = 0
    while drawn < samples and attempts < 100 * samples:
        attempts += 1
        rho = random_density(rng, n)
        try:
            joint = prep_apply(prep, rho)
        except OutsideDomain:
            continue
        drawn += 1
        marginal = partial_trace(joint, (n, m), keep="second")
        if reference is None:
            reference_input, reference = rho, marginal
            continue
        deviation = float(np.abs(marginal - reference).max())
        if deviation > worst:
            worst = deviation
        if deviation > tol:
            return EnvironmentMarginalResult(
                constant=False,
                env_state=None,
                witness=(reference_input, rho),
                max_deviation=deviation,
            )
    return EnvironmentMarginalResult(
        constant=True, env_state=reference, witness=None, max_deviation=worst
    )


def example_swap_construction(target) -> tuple[PreparationMap, np.ndarray]:
    """Preparation and unitary realizing the constant map onto ``target``.

    Pairing the product preparation whose environment state is the target
    with the factor-exchange unitary sends every input to ``target``.
    """
    target = validate_density(target)
    dim = target.shape[0]
    prep = product_preparation(target, system_dim=dim)
    return prep, swap_factors(dim, dim)
