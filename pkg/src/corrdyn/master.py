"""Time-local generator of the reduced dynamics and its integration.

The reduced evolution is ``rho(t) = T(t) rho(0) + xi(t)`` with ``T(t)`` the
column-stacking matrix of the operator-sum map.  Differentiating and
eliminating ``rho(0)`` gives the inhomogeneous master equation

    d/dt rho(t) = X(t) rho(t) + F(t),
    X(t) = (d/dt T(t)) T(t)^{-1},
    F(t) = d/dt xi(t) - X(t) xi(t),

where ``X`` depends only on ``(U, rho_B)`` and all correlation information
lives in ``F``.  Time derivatives use central differences; the inverse of
``T`` is guarded by a condition-number limit because the propagator can be
genuinely non-invertible at isolated times, which must be surfaced rather
than regularized away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bloch import check_pure_state_constraint, su_generators
from .channel import KrausSet, inhomogeneous_term, kraus_from_unitary
from .errors import SingularPropagator, UnphysicalInitialState
from .linalg import devectorize, validate_density, vectorize

DERIVATIVE_STEP = 1e-5
CONDITION_LIMIT = 1e12

# Integration keeps trace and hermiticity only up to accumulated round-off,
# so stored trajectory points are validated at these relaxed tolerances.
TRAJECTORY_TOL = 1e-8


@dataclass(frozen=True)
class LiouvillianSample:
    """Time-local generator at one instant, or the reason it is unavailable."""

    time: float
    generator: np.ndarray | None
    condition: float
    singular: bool


@dataclass(frozen=True)
class TrajectoryPoint:
    time: float
    rho: np.ndarray
    xi: np.ndarray
    drive: np.ndarray


def kraus_superop(k: KrausSet) -> np.ndarray:
    """Column-stacking matrix of ``rho -> sum M rho M†``."""
    d = k.system_dim
    ops = k.operators.reshape(-1, d, d)
    return np.einsum("kab,kcd->acbd", ops.conj(), ops).reshape(d * d, d * d)


def superop_at(u_of_t: Callable[[float], np.ndarray], rho_b, t: float) -> np.ndarray:
    """Propagator matrix ``T(t)`` for the channel of ``(U(t), rho_B)``."""
    rho_b = np.asarray(rho_b, dtype=complex)
    m = rho_b.shape[0]
    u = np.asarray(u_of_t(t), dtype=complex)
    n = u.shape[0] // m
    return kraus_superop(kraus_from_unitary(u, rho_b, n, m))


def liouvillian_at(
    u_of_t: Callable[[float], np.ndarray],
    rho_b,
    t: float,
    h: float = DERIVATIVE_STEP,
    *,
    strict: bool = True,
) -> LiouvillianSample:
    """Time-local generator ``X(t) = (dT/dt) T^{-1}`` by central difference.

    When the condition estimate of ``T(t)`` exceeds the invertibility guard
    the sample is flagged singular; with ``strict`` (the default) this
    raises :class:`SingularPropagator` instead of returning a flagged
    sample without a generator.
    """
    if h <= 0:
        raise ValueError(f"derivative step must be positive, got {h}")
    t_mat = superop_at(u_of_t, rho_b, t)
    cond = float(np.linalg.cond(t_mat))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        if strict:
            raise SingularPropagator(t, cond)
        return LiouvillianSample(time=t, generator=None, condition=cond, singular=True)
    dt_mat = (superop_at(u_of_t, rho_b, t + h) - superop_at(u_of_t, rho_b, t - h)) / (2 * h)
    gen = np.linalg.solve(t_mat.T, dt_mat.T).T
    return LiouvillianSample(time=t, generator=gen, condition=cond, singular=False)


def propagator_condition(u_of_t, rho_b, t: float) -> float:
    """Condition estimate of ``T(t)``, for reporting without inversion."""
    return float(np.linalg.cond(superop_at(u_of_t, rho_b, t)))


def _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t: float) -> np.ndarray:
    return inhomogeneous_term(u_of_t(t), gamma_prime, basis_a, basis_b)


def driving_term(
    u_of_t: Callable[[float], np.ndarray],
    rho_b,
    gamma_prime,
    t: float,
    h: float = DERIVATIVE_STEP,
) -> np.ndarray:
    """Inhomogeneity ``F(t) = d/dt xi(t) - X(t) xi(t)`` of the master equation."""
    rho_b = np.asarray(rho_b, dtype=complex)
    m = rho_b.shape[0]
    n = np.asarray(u_of_t(t), dtype=complex).shape[0] // m
    basis_a = su_generators(n)
    basis_b = su_generators(m)
    sample = liouvillian_at(u_of_t, rho_b, t, h)
    xi_now = _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t)
    dxi = (
        _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t + h)
        - _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t - h)
    ) / (2 * h)
    return dxi - devectorize(sample.generator @ vectorize(xi_now))


def integrate_master(
    rho_a0,
    u_of_t: Callable[[float], np.ndarray],
    rho_b,
    gamma_prime,
    grid: Sequence[float],
    h: float = DERIVATIVE_STEP,
) -> list[TrajectoryPoint]:
    """Fixed-step 4th-order integration of the inhomogeneous master equation.

    ``grid`` must be strictly increasing and start at 0, the time at which
    ``rho_a0`` and ``gamma_prime`` describe the preparation.  The generator
    and inhomogeneity are resampled at every integrator substep.  Raises
    :class:`SingularPropagator` when a substep hits a flagged singular time
    and :class:`UnphysicalInitialState` when a pure initial state is paired
    with nonzero correlations.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        grid = np.zeros(1)
    if grid[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if grid.size > 1 and np.diff(grid).min() <= 0:
        raise ValueError("time grid must be strictly increasing")
    rho_a0 = validate_density(rho_a0)
    gamma_prime = np.asarray(gamma_prime, dtype=float)
    if not check_pure_state_constraint(rho_a0, gamma_prime):
        raise UnphysicalInitialState(
            "pure initial state is incompatible with nonzero residual correlations"
        )
    rho_b = validate_density(rho_b)
    m = rho_b.shape[0]
    n = rho_a0.shape[0]
    basis_a = su_generators(n)
    basis_b = su_generators(m)

    def field_parts(t: float):
        gen = liouvillian_at(u_of_t, rho_b, t, h).generator
        xi_now = _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t)
        dxi = (
            _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t + h)
            - _xi_at(u_of_t, gamma_prime, basis_a, basis_b, t - h)
        ) / (2 * h)
        drive_vec = vectorize(dxi) - gen @ vectorize(xi_now)
        return gen, drive_vec, xi_now

    points: list[TrajectoryPoint] = []
    gen0, drive0, xi0 = field_parts(grid[0])
    points.append(
        TrajectoryPoint(
            time=float(grid[0]), rho=rho_a0, xi=xi0, drive=devectorize(drive0)
        )
    )

    y = vectorize(rho_a0)
    gen_a, drive_a = gen0, drive0
    for t_prev, t_next in zip(grid[:-1], grid[1:]):
        dt = t_next - t_prev
        gen_m, drive_m, _ = field_parts(t_prev + dt / 2)
        gen_b, drive_b, xi_b = field_parts(t_next)
        k1 = gen_a @ y + drive_a
        k2 = gen_m @ (y + dt / 2 * k1) + drive_m
        k3 = gen_m @ (y + dt / 2 * k2) + drive_m
        k4 = gen_b @ (y + dt * k3) + drive_b
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        rho_t = validate_density(
            devectorize(y),
            herm_tol=TRAJECTORY_TOL,
            trace_tol=TRAJECTORY_TOL,
            positivity_slack=TRAJECTORY_TOL,
        )
        points.append(
            TrajectoryPoint(
                time=float(t_next), rho=rho_t, xi=xi_b, drive=devectorize(drive_b)
            )
        )
        gen_a, drive_a = gen_b, drive_b
    return points
