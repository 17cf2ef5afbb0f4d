"""Canonical scenario runners, configuration parsing, and report emission.

Two canonical scenarios are provided: a controlled-NOT interaction between
a qubit and a single-qubit environment prepared with and without residual
correlations, and the factor-exchange construction realizing an arbitrary
constant map.  Generic configurations drive the same machinery from JSON.

Matrices in configurations are read literally; the ``tensorOrder`` field
says whether their first tensor factor is the system (``system-first``) or
the environment (``environment-first``).  Environment-first input is
normalized internally by conjugating with the factor-exchange permutation,
and every report records the convention it was computed under.  The
controlled-NOT reports always carry a comparison block for both
conventions because the two readings produce qualitatively different
endpoint behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .bloch import decompose, residual, su_generators
from .channel import (
    choi_matrix,
    completeness_defect,
    evolve_reduced,
    is_completely_positive,
    kraus_from_unitary,
)
from .errors import ConfigError, SingularPropagator
from .linalg import (
    matrix_exp_unitary,
    partial_trace,
    random_density,
    swap_factors,
    trace_distance,
    unitary_family,
    validate_density,
)
from .master import CONDITION_LIMIT, integrate_master, propagator_condition
from .prepare import example_swap_construction, induced_apply, induced_evolution

SYSTEM_FIRST = "system-first"
ENVIRONMENT_FIRST = "environment-first"
TENSOR_ORDERS = (SYSTEM_FIRST, ENVIRONMENT_FIRST)

DEFAULT_AMPLITUDE_A = np.sqrt(3.0) / 2.0
DEFAULT_AMPLITUDE_B = 0.5
DEFAULT_STEPS = 200

_PAULI = su_generators(2)
PAULI_X, PAULI_Y, PAULI_Z = _PAULI[0], _PAULI[1], _PAULI[2]

_PRESET_CALL = re.compile(r"^\s*([\w.\-]+)\s*\(([^)]*)\)\s*$")


def cnot_interaction() -> np.ndarray:
    """Hamiltonian whose propagator is the controlled-NOT at t = pi/2.

    Written with the flip on the first factor conditioned on the second:
    ``X (x) |1><1| + I (x) |0><0|``.  It squares to the identity, so the
    propagator has the closed form ``cos(t) I - i sin(t) H``.
    """
    p0 = 0.5 * (np.eye(2) + PAULI_Z)
    p1 = 0.5 * (np.eye(2) - PAULI_Z)
    return kron(PAULI_X, p1) + kron(np.eye(2), p0)


def classically_correlated_pair(a: complex, b: complex) -> np.ndarray:
    """Diagonal two-qubit state ``|a|^2 |00><00| + |b|^2 |11><11|``."""
    _check_amplitudes(a, b)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(a) ** 2
    rho[3, 3] = abs(b) ** 2
    return rho


def entangled_pair(a: complex, b: complex) -> np.ndarray:
    """Pure two-qubit state ``(a|00> + b|11>)(a*<00| + b*<11|)``."""
    _check_amplitudes(a, b)
    psi = np.array([a, 0.0, 0.0, b], dtype=complex)
    return np.outer(psi, psi.conj())


def bell_state() -> np.ndarray:
    """Maximally entangled two-qubit state."""
    return entangled_pair(1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0))


def _check_amplitudes(a: complex, b: complex) -> None:
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ConfigError(f"amplitudes must satisfy |a|^2 + |b|^2 = 1, got {norm!r}")


# ---------------------------------------------------------------------------
# Configuration parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    n: int
    m: int
    tensor_order: str
    hamiltonian: np.ndarray | None
    unitary: np.ndarray | None
    initial_state: np.ndarray | None
    amplitudes: tuple[complex, complex]
    t0: float
    t1: float
    steps: int
    outputs: tuple[str, ...]
    seed: int
    target: np.ndarray | None = None
    probes: tuple[np.ndarray, ...] = field(default=())


def parse_complex(value) -> complex:
    """Read a scalar that is either a real number or an ``[re, im]`` pair."""
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re_part, im_part = value
        if isinstance(re_part, (int, float)) and isinstance(im_part, (int, float)):
            return complex(re_part, im_part)
    raise ConfigError(f"expected a number or [re, im] pair, got {value!r}")


def parse_matrix(value, *, what: str = "matrix") -> np.ndarray:
    """Read a nested array of scalars / ``[re, im]`` pairs as a matrix."""
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{what} must be a non-empty nested array")
    rows = []
    width = None
    for row in value:
        if not isinstance(row, (list, tuple)) or not row:
            raise ConfigError(f"{what} rows must be non-empty arrays")
        parsed = [parse_complex(entry) for entry in row]
        if width is None:
            width = len(parsed)
        elif len(parsed) != width:
            raise ConfigError(f"{what} rows have inconsistent lengths")
        rows.append(parsed)
    return np.array(rows, dtype=complex)


def _parse_preset_string(text: str):
    match = _PRESET_CALL.match(text)
    if match:
        name = match.group(1)
        args = [float(part) for part in match.group(2).split(",") if part.strip()]
        return name, args
    return text.strip(), []


def parse_state(value, *, what: str = "initialState") -> np.ndarray:
    """Read a state given as a matrix, ``{"matrix": ...}``, or a named preset.

    Presets: ``bell``, ``eq2.8-rho1`` and ``eq2.8-rho2`` (the latter two
    take amplitudes, either as call-style arguments in a string such as
    ``"eq2.8-rho1(0.8,0.6)"`` or as ``a``/``b`` keys in an object).
    """
    if isinstance(value, str):
        name, args = _parse_preset_string(value)
        return _build_preset(name, args, {}, what=what)
    if isinstance(value, dict):
        if "matrix" in value:
            return parse_matrix(value["matrix"], what=what)
        if "preset" in value:
            return _build_preset(value["preset"], [], value, what=what)
        raise ConfigError(f"{what} object needs a 'matrix' or 'preset' key")
    return parse_matrix(value, what=what)


def _build_preset(name: str, args: list[float], extra: dict, *, what: str) -> np.ndarray:
    if name == "bell":
        return bell_state()
    if name in ("eq2.8-rho1", "eq2.8-rho2"):
        if args:
            if len(args) != 2:
                raise ConfigError(f"{what} preset {name} takes two amplitudes")
            a, b = complex(args[0]), complex(args[1])
        else:
            a = parse_complex(extra.get("a", DEFAULT_AMPLITUDE_A))
            b = parse_complex(extra.get("b", DEFAULT_AMPLITUDE_B))
        builder = classically_correlated_pair if name.endswith("rho1") else entangled_pair
        return builder(a, b)
    raise ConfigError(f"unknown {what} preset {name!r}")


def _parse_time_grid(value) -> tuple[float, float, int]:
    if value is None:
        return 0.0, float(np.pi / 2.0), DEFAULT_STEPS
    if isinstance(value, dict):
        t0 = float(value.get("t0", 0.0))
        t1 = float(value.get("t1", np.pi / 2.0))
        steps = int(value.get("steps", DEFAULT_STEPS))
    elif isinstance(value, (list, tuple)) and len(value) == 3:
        t0, t1, steps = float(value[0]), float(value[1]), int(value[2])
    else:
        raise ConfigError(f"timeGrid must be an object or [t0, t1, steps], got {value!r}")
    if t1 < t0:
        raise ConfigError("timeGrid must have t1 >= t0")
    if steps < 0:
        raise ConfigError("timeGrid steps must be non-negative")
    return t0, t1, steps


DEFAULT_OUTPUTS = ("trajectory", "kraus", "xi", "liouvillian", "report")


def parse_scenario(data: dict, *, require_interaction: bool = True) -> ScenarioConfig:
    """Validate a scenario configuration object."""
    if not isinstance(data, dict):
        raise ConfigError("scenario configuration must be a JSON object")
    name = str(data.get("name", "scenario"))
    n = int(data.get("N", 2))
    m = int(data.get("M", 2))
    if n < 2 or m < 2:
        raise ConfigError(f"dimensions must be at least 2, got N={n}, M={m}")
    tensor_order = str(data.get("tensorOrder", SYSTEM_FIRST))
    if tensor_order not in TENSOR_ORDERS:
        raise ConfigError(
            f"tensorOrder must be one of {TENSOR_ORDERS}, got {tensor_order!r}"
        )

    hamiltonian = unitary = None
    if "hamiltonian" in data and "unitary" in data:
        raise ConfigError("exactly one of 'hamiltonian' and 'unitary' may be present")
    if "hamiltonian" in data:
        hamiltonian = parse_matrix(data["hamiltonian"], what="hamiltonian")
        if hamiltonian.shape != (n * m, n * m):
            raise ConfigError(
                f"hamiltonian has shape {hamiltonian.shape}, expected {(n * m, n * m)}"
            )
    if "unitary" in data:
        unitary = parse_matrix(data["unitary"], what="unitary")
        if unitary.shape != (n * m, n * m):
            raise ConfigError(
                f"unitary has shape {unitary.shape}, expected {(n * m, n * m)}"
            )
    if require_interaction and hamiltonian is None and unitary is None:
        raise ConfigError("exactly one of 'hamiltonian' and 'unitary' is required")

    initial_state = None
    if "initialState" in data:
        initial_state = parse_state(data["initialState"])
        if initial_state.shape != (n * m, n * m):
            raise ConfigError(
                f"initialState has shape {initial_state.shape}, expected {(n * m, n * m)}"
            )

    amp = data.get("amplitudes", {})
    if isinstance(amp, dict):
        a = parse_complex(amp.get("a", DEFAULT_AMPLITUDE_A))
        b = parse_complex(amp.get("b", DEFAULT_AMPLITUDE_B))
    elif isinstance(amp, (list, tuple)) and len(amp) == 2:
        a, b = parse_complex(amp[0]), parse_complex(amp[1])
    else:
        raise ConfigError(f"amplitudes must be an object or pair, got {amp!r}")

    t0, t1, steps = _parse_time_grid(data.get("timeGrid"))

    outputs = data.get("outputs", list(DEFAULT_OUTPUTS))
    if not isinstance(outputs, (list, tuple)) or not all(
        isinstance(o, str) for o in outputs
    ):
        raise ConfigError("outputs must be a list of strings")
    unknown = sorted(set(outputs) - set(DEFAULT_OUTPUTS))
    if unknown:
        raise ConfigError(f"unknown outputs {unknown}; allowed: {list(DEFAULT_OUTPUTS)}")

    target = None
    if "target" in data:
        target = parse_state(data["target"], what="target")
    probes = tuple(
        parse_state(p, what="probe") for p in data.get("probes", [])
    )

    return ScenarioConfig(
        name=name,
        n=n,
        m=m,
        tensor_order=tensor_order,
        hamiltonian=hamiltonian,
        unitary=unitary,
        initial_state=initial_state,
        amplitudes=(a, b),
        t0=t0,
        t1=t1,
        steps=steps,
        outputs=tuple(outputs),
        seed=int(data.get("seed", 0)),
        target=target,
        probes=probes,
    )


def to_system_first(mat: np.ndarray, n: int, m: int, tensor_order: str) -> np.ndarray:
    """Rewrite a joint operator so the system is the first tensor factor."""
    if tensor_order == SYSTEM_FIRST:
        return mat
    s = swap_factors(m, n)
    return s @ mat @ s.conj().T


# ---------------------------------------------------------------------------
# JSON encoding helpers (complex values as [re, im] pairs)
# ---------------------------------------------------------------------------


def encode_complex(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def encode_matrix(m) -> list[list[list[float]]]:
    m = np.asarray(m, dtype=complex)
    return [[encode_complex(z) for z in row] for row in m]


def encode_real_vector(v) -> list[float]:
    return [float(x) for x in np.asarray(v, dtype=float)]


def encode_real_matrix(m) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


# ---------------------------------------------------------------------------
# Trajectory rows and CSV emission
# ---------------------------------------------------------------------------


def csv_header(n: int) -> list[str]:
    columns = ["t"]
    for i in range(n):
        for j in range(n):
            columns.append(f"re(rho{i}{j})")
            columns.append(f"im(rho{i}{j})")
    if n == 2:
        columns += ["alpha_x", "alpha_y", "alpha_z"]
    else:
        columns += [f"alpha_{k + 1}" for k in range(n * n - 1)]
    columns += ["xi_norm", "cond_T", "singular"]
    return columns


def trajectory_row(t: float, rho: np.ndarray, xi: np.ndarray, cond: float) -> dict:
    n = rho.shape[0]
    gens = su_generators(n)
    alpha = 0.5 * n * np.einsum("ab,iba->i", rho, gens).real
    return {
        "t": float(t),
        "rho": rho,
        "alpha": alpha,
        "xi_norm": float(np.linalg.norm(xi)),
        "cond_T": float(cond),
        "singular": bool(not np.isfinite(cond) or cond > CONDITION_LIMIT),
    }


def encode_row(row: dict) -> dict:
    cond = row["cond_T"]
    return {
        "t": row["t"],
        "rho": encode_matrix(row["rho"]),
        "alpha": encode_real_vector(row["alpha"]),
        "xi_norm": row["xi_norm"],
        "cond_T": cond if np.isfinite(cond) else None,
        "singular": row["singular"],
    }


def write_trajectory_csv(path: str, rows: list[dict], n: int) -> None:
    """Write rows with shortest-round-trip float formatting."""
    lines = [",".join(csv_header(n))]
    for row in rows:
        cells = [repr(float(row["t"]))]
        rho = row["rho"]
        for i in range(n):
            for j in range(n):
                cells.append(repr(float(rho[i, j].real)))
                cells.append(repr(float(rho[i, j].imag)))
        cells += [repr(float(x)) for x in row["alpha"]]
        cells.append(repr(float(row["xi_norm"])))
        cells.append(repr(float(row["cond_T"])))
        cells.append("1" if row["singular"] else "0")
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Controlled-NOT scenario
# ---------------------------------------------------------------------------


def _endpoint_pair(tensor_order: str, a: complex, b: complex, t1: float):
    """Directly evolved reduced endpoints of both initial states."""
    h = to_system_first(cnot_interaction(), 2, 2, tensor_order)
    u = matrix_exp_unitary(h, t1)
    endpoints = []
    for rho in (classically_correlated_pair(a, b), entangled_pair(a, b)):
        rho = to_system_first(rho, 2, 2, tensor_order)
        evolved = u @ rho @ u.conj().T
        endpoints.append(partial_trace(evolved, (2, 2), keep="first"))
    return endpoints


def _claimed_endpoints(a: complex, b: complex) -> tuple[np.ndarray, np.ndarray]:
    """Reduced endpoints asserted for this scenario in the source analysis."""
    eye = np.eye(2, dtype=complex)
    line1 = 0.5 * (eye + PAULI_Z)
    line2 = 0.5 * (eye + (abs(a) ** 2 - abs(b) ** 2) * PAULI_Z)
    return line1, line2


def run_cnot_example(config: ScenarioConfig) -> dict:
    """Evolve both canonical initial states and assemble the full report."""
    if config.n != 2 or config.m != 2:
        raise ConfigError("the cnot scenario is defined for N = M = 2")
    if config.hamiltonian is not None or config.unitary is not None:
        raise ConfigError("the cnot scenario defines its own interaction")
    if config.t0 != 0.0:
        raise ConfigError("the cnot scenario time grid must start at 0")
    a, b = config.amplitudes

    h_literal = cnot_interaction()
    h_sf = to_system_first(h_literal, 2, 2, config.tensor_order)
    u_of_t = unitary_family(h_sf)

    rho1 = to_system_first(classically_correlated_pair(a, b), 2, 2, config.tensor_order)
    rho2 = to_system_first(entangled_pair(a, b), 2, 2, config.tensor_order)
    states = {"rho1": rho1, "rho2": rho2}

    marg_sys = {k: partial_trace(v, (2, 2), keep="first") for k, v in states.items()}
    marg_env = {k: partial_trace(v, (2, 2), keep="second") for k, v in states.items()}
    expected_marginal = np.diag([abs(a) ** 2, abs(b) ** 2]).astype(complex)
    marginal_mismatch = max(
        float(np.abs(marg_sys["rho1"] - marg_sys["rho2"]).max()),
        float(np.abs(marg_env["rho1"] - marg_env["rho2"]).max()),
        float(np.abs(marg_sys["rho1"] - expected_marginal).max()),
        float(np.abs(marg_env["rho1"] - expected_marginal).max()),
    )

    gamma_primes = {k: residual(decompose(v, 2, 2)) for k, v in states.items()}

    endpoints = {
        order: dict(zip(("rho1", "rho2"), _endpoint_pair(order, a, b, config.t1)))
        for order in TENSOR_ORDERS
    }
    configured = endpoints[config.tensor_order]
    line1, line2 = _claimed_endpoints(a, b)
    claim_matches = {
        label: {
            order: [
                key
                for key in ("rho1", "rho2")
                if np.abs(endpoints[order][key] - claim).max() <= 1e-12
            ]
            for order in TENSOR_ORDERS
        }
        for label, claim in (("rho1_line", line1), ("rho2_line", line2))
    }

    report = {
        "scenario": "cnot",
        "tensor_order": config.tensor_order,
        "amplitudes": {
            "a": encode_complex(a),
            "b": encode_complex(b),
            "weight_a": abs(a) ** 2,
            "weight_b": abs(b) ** 2,
        },
        "time_grid": {"t0": config.t0, "t1": config.t1, "steps": config.steps},
        "initial": {
            "rho1": encode_matrix(rho1),
            "rho2": encode_matrix(rho2),
            "system_marginal": encode_matrix(marg_sys["rho1"]),
            "environment_marginal": encode_matrix(marg_env["rho1"]),
            "max_marginal_mismatch": marginal_mismatch,
            "gamma_prime": {
                k: encode_real_matrix(v) for k, v in gamma_primes.items()
            },
        },
        "endpoints": {
            "time": config.t1,
            "rho1": encode_matrix(configured["rho1"]),
            "rho2": encode_matrix(configured["rho2"]),
            "trace_distance": trace_distance(configured["rho1"], configured["rho2"]),
        },
        "claim_comparison": {
            "claimed": {
                "rho1_line": encode_matrix(line1),
                "rho2_line": encode_matrix(line2),
            },
            "computed": {
                order: {
                    "rho1": encode_matrix(endpoints[order]["rho1"]),
                    "rho2": encode_matrix(endpoints[order]["rho2"]),
                    "trace_distance": trace_distance(
                        endpoints[order]["rho1"], endpoints[order]["rho2"]
                    ),
                }
                for order in TENSOR_ORDERS
            },
            "claim_matches": claim_matches,
            "endpoints_distinct": {
                order: bool(
                    trace_distance(endpoints[order]["rho1"], endpoints[order]["rho2"])
                    > 1e-12
                )
                for order in TENSOR_ORDERS
            },
        },
    }

    rho_b = marg_env["rho1"]
    if "kraus" in config.outputs:
        kset = kraus_from_unitary(u_of_t(config.t1), rho_b, 2, 2)
        report["kraus"] = {
            "time": config.t1,
            "env_probs": encode_real_vector(kset.env_probs),
            "operators": [
                [encode_matrix(kset.operators[mu, nu]) for nu in range(2)]
                for mu in range(2)
            ],
            "completeness_defect": completeness_defect(kset),
            "completely_positive": is_completely_positive(kset),
        }

    if "xi" in config.outputs:
        report["xi"] = {}
        for key in ("rho1", "rho2"):
            _, channel_part, xi = evolve_reduced(u_of_t(config.t1), states[key], 2, 2)
            report["xi"][key] = {
                "time": config.t1,
                "matrix": encode_matrix(xi),
                "norm": float(np.linalg.norm(xi)),
                "channel_part": encode_matrix(channel_part),
            }

    needs_grid = bool(
        {"trajectory", "liouvillian"} & set(config.outputs)
    ) and config.steps > 0
    if needs_grid:
        grid = np.linspace(config.t0, config.t1, config.steps + 1)
        conds = [propagator_condition(u_of_t, rho_b, t) for t in grid]
        singular_times = [
            float(t)
            for t, c in zip(grid, conds)
            if not np.isfinite(c) or c > CONDITION_LIMIT
        ]
        finite_conds = [c for c in conds if np.isfinite(c)]
        report["liouvillian"] = {
            "grid_points": int(grid.size),
            "max_finite_condition": max(finite_conds) if finite_conds else None,
            "singular_times": singular_times,
        }

        trajectories = {}
        agreement = {}
        for key in ("rho1", "rho2"):
            rows = []
            two_term_dev = 0.0
            direct_states = []
            for t, cond in zip(grid, conds):
                u = u_of_t(t)
                direct = validate_density(
                    partial_trace(u @ states[key] @ u.conj().T, (2, 2), keep="first"),
                    herm_tol=1e-8,
                    trace_tol=1e-8,
                    positivity_slack=1e-8,
                )
                two_term, _, xi = evolve_reduced(u, states[key], 2, 2)
                two_term_dev = max(two_term_dev, trace_distance(two_term, direct))
                rows.append(trajectory_row(float(t), direct, xi, cond))
                direct_states.append(direct)
            master_dev: float | None = None
            master_status: dict = {"status": "ok"}
            try:
                points = integrate_master(
                    marg_sys[key], u_of_t, rho_b, gamma_primes[key], grid
                )
                master_dev = max(
                    trace_distance(p.rho, ref)
                    for p, ref in zip(points, direct_states)
                )
                master_status["max_trace_distance_vs_direct"] = master_dev
            except SingularPropagator as exc:
                master_status = {
                    "status": "singular",
                    "time": exc.time,
                    "condition": exc.condition,
                }
            agreement[key] = {
                "two_term_vs_direct_max_trace_distance": two_term_dev,
                "master_integration": master_status,
            }
            trajectories[key] = rows
        report["paths"] = agreement
        if "trajectory" in config.outputs:
            report["trajectory"] = {
                key: [encode_row(r) for r in rows]
                for key, rows in trajectories.items()
            }
            report["_trajectory_rows"] = trajectories  # stripped before emission
    return report


# ---------------------------------------------------------------------------
# Factor-exchange scenario
# ---------------------------------------------------------------------------


def run_swap_example(config: ScenarioConfig) -> dict:
    """Check that the exchange construction maps every probe to the target."""
    if config.n != config.m:
        raise ConfigError("the swap scenario needs equal system and environment dims")
    n = config.n
    target = config.target
    if target is None:
        target = _basis_state(n, n - 1)
    target = validate_density(target)
    if target.shape != (n, n):
        raise ConfigError(f"target has shape {target.shape}, expected ({n}, {n})")

    prep, swap = example_swap_construction(target)
    evo = induced_evolution(prep, swap)
    unitarity_defect = float(np.abs(swap.conj().T @ swap - np.eye(n * n)).max())
    self_inverse_defect = float(np.abs(swap @ swap - np.eye(n * n)).max())

    probes: list[tuple[str, np.ndarray]] = [
        ("ground", _basis_state(n, 0)),
        ("uniform-superposition", _uniform_superposition(n)),
        ("maximally-mixed", np.eye(n, dtype=complex) / n),
    ]
    for idx, probe in enumerate(config.probes):
        probes.append((f"probe-{idx}", validate_density(probe)))
    rng = np.random.default_rng(config.seed)
    probes.append(("random", random_density(rng, n)))

    results = []
    worst = 0.0
    for label, probe in probes:
        out = induced_apply(evo, probe)
        deviation = float(np.abs(out - target).max())
        worst = max(worst, deviation)
        results.append(
            {
                "name": label,
                "input": encode_matrix(probe),
                "output": encode_matrix(out),
                "deviation": deviation,
            }
        )

    return {
        "scenario": "swap",
        "dimension": n,
        "target": encode_matrix(target),
        "unitarity_defect": unitarity_defect,
        "self_inverse_defect": self_inverse_defect,
        "probes": results,
        "max_deviation": worst,
    }


def _basis_state(dim: int, index: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[index, index] = 1.0
    return rho


def _uniform_superposition(dim: int) -> np.ndarray:
    psi = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    return np.outer(psi, psi.conj())
