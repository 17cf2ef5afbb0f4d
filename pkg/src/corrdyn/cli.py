"""Command-line front end: JSON configuration in, JSON report out.

Subcommands
-----------
``decompose``   coefficient decomposition of a joint state
``kraus``       operator-sum extraction for a configured interaction
``evolve``      two-term reduced evolution (endpoint and trajectory)
``master``      inhomogeneous master-equation integration
``prepare``     preparation-map analysis (consistency, marginals, linearity)
``scenario``    canonical runners: ``cnot`` and ``swap``

Reports go to stdout or ``--out``; trajectories optionally to ``--csv``.
Exit codes: 0 success, 1 configuration/parse error, 2 numerical failure.
Errors are emitted as single-line JSON on stderr with a ``code`` field.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bloch import check_pure_state_constraint, decompose, purity, residual
from .channel import (
    choi_matrix,
    completeness_defect,
    evolve_reduced,
    is_completely_positive,
    kraus_from_unitary,
)
from .errors import (
    ConfigError,
    CorrDynError,
    DimensionMismatch,
    InvalidDimension,
    NotHermitian,
    NotUnitary,
    OutsideDomain,
    SingularPropagator,
    Unphysical,
    UnphysicalInitialState,
)
from .linalg import (
    devectorize,
    partial_trace,
    random_density,
    swap_factors,
    trace_distance,
    unitary_family,
    validate_density,
    validate_unitary,
    vectorize,
)
from .master import integrate_master, propagator_condition, superop_at
from .prepare import (
    clone_preparation,
    constant_environment_test,
    fixed_correlation_preparation,
    induced_evolution,
    linearity_test,
    prep_apply,
    product_preparation,
    transpose_clone_preparation,
)
from .scenarios import (
    ScenarioConfig,
    encode_matrix,
    encode_real_matrix,
    encode_real_vector,
    encode_row,
    parse_matrix,
    parse_scenario,
    parse_state,
    run_cnot_example,
    run_swap_example,
    to_system_first,
    trajectory_row,
    write_trajectory_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as configuration errors."""

    def error(self, message):
        raise ConfigError(message)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the JSON report to this path")
    parser.add_argument("--csv", help="write the trajectory CSV to this path")
    parser.add_argument("--seed", type=int, default=None, help="random seed (u64)")
    parser.add_argument(
        "--tensor-order",
        choices=["system-first", "environment-first"],
        default=None,
        help="override the configuration's tensorOrder",
    )
    parser.add_argument("--steps", type=int, default=None, help="override grid steps")
    parser.add_argument("--tmax", type=float, default=None, help="override grid end time")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corrdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, needs_input in (
        ("decompose", True),
        ("kraus", True),
        ("evolve", True),
        ("master", True),
        ("prepare", True),
    ):
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="path to the JSON configuration")
        _add_common_flags(p)

    p = sub.add_parser("scenario")
    p.add_argument("which", choices=["cnot", "swap"])
    p.add_argument("--config", help="path to the JSON configuration")
    _add_common_flags(p)
    return parser


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _apply_overrides(data: dict, args) -> dict:
    data = dict(data)
    if args.tensor_order is not None:
        data["tensorOrder"] = args.tensor_order
    if args.seed is not None:
        data["seed"] = args.seed
    if args.steps is not None or args.tmax is not None:
        grid = data.get("timeGrid", {})
        if isinstance(grid, (list, tuple)):
            grid = {"t0": grid[0], "t1": grid[1], "steps": grid[2]}
        grid = dict(grid)
        if args.steps is not None:
            grid["steps"] = args.steps
        if args.tmax is not None:
            grid["t1"] = args.tmax
        data["timeGrid"] = grid
    return data


def _scenario_interaction(config: ScenarioConfig) -> tuple:
    """Return (u_of_t, label).  ``u_of_t(t)`` ignores ``t`` for fixed unitaries."""
    if config.unitary is not None:
        u = validate_unitary(to_system_first(config.unitary, config.n, config.m, config.tensor_order))
        return (lambda t: u), "unitary"
    h = to_system_first(config.hamiltonian, config.n, config.m, config.tensor_order)
    return unitary_family(h), "hamiltonian"


def _require_initial_state(config: ScenarioConfig) -> np.ndarray:
    if config.initial_state is None:
        raise ConfigError("this command requires an initialState")
    rho = to_system_first(config.initial_state, config.n, config.m, config.tensor_order)
    return validate_density(rho)


def _cmd_decompose(args) -> dict:
    data = _apply_overrides(_load_json(args.input), args)
    config = parse_scenario(data, require_interaction=False)
    rho = _require_initial_state(config)
    n, m = config.n, config.m
    dec = decompose(rho, n, m)
    gamma_prime = residual(dec)
    rho_a = partial_trace(rho, (n, m), keep="first")
    rho_b = partial_trace(rho, (n, m), keep="second")
    return {
        "command": "decompose",
        "N": n,
        "M": m,
        "tensor_order": config.tensor_order,
        "alpha": encode_real_vector(dec.alpha),
        "beta": encode_real_vector(dec.beta),
        "gamma": encode_real_matrix(dec.gamma),
        "gamma_prime": encode_real_matrix(gamma_prime),
        "rho_system": encode_matrix(rho_a),
        "rho_environment": encode_matrix(rho_b),
        "system_purity": purity(rho_a),
        "pure_state_constraint": (
            "consistent" if check_pure_state_constraint(rho_a, gamma_prime) else "violation"
        ),
    }


def _cmd_kraus(args) -> dict:
    data = _apply_overrides(_load_json(args.input), args)
    config = parse_scenario(data)
    rho = _require_initial_state(config)
    n, m = config.n, config.m
    u_of_t, kind = _scenario_interaction(config)
    t = config.t1 if kind == "hamiltonian" else None
    u = u_of_t(t if t is not None else 0.0)
    rho_b = partial_trace(rho, (n, m), keep="second")
    kset = kraus_from_unitary(u, rho_b, n, m)
    choi = choi_matrix(kset)
    return {
        "command": "kraus",
        "N": n,
        "M": m,
        "tensor_order": config.tensor_order,
        "time": t,
        "env_probs": encode_real_vector(kset.env_probs),
        "operators": [
            [encode_matrix(kset.operators[mu, nu]) for nu in range(m)]
            for mu in range(m)
        ],
        "completeness_defect": completeness_defect(kset),
        "choi_min_eigenvalue": float(np.linalg.eigvalsh(choi).min()),
        "completely_positive": is_completely_positive(kset),
    }


def _grid(config: ScenarioConfig) -> np.ndarray:
    return np.linspace(config.t0, config.t1, config.steps + 1)


def _cmd_evolve(args) -> tuple[dict, list[dict] | None, int]:
    data = _apply_overrides(_load_json(args.input), args)
    config = parse_scenario(data)
    rho = _require_initial_state(config)
    n, m = config.n, config.m
    u_of_t, kind = _scenario_interaction(config)
    t_end = config.t1 if kind == "hamiltonian" else None
    u_end = u_of_t(t_end if t_end is not None else 0.0)

    rho_out, channel_part, xi = evolve_reduced(u_end, rho, n, m)
    direct = partial_trace(u_end @ rho @ u_end.conj().T, (n, m), keep="first")
    report = {
        "command": "evolve",
        "N": n,
        "M": m,
        "tensor_order": config.tensor_order,
        "time": t_end,
        "endpoint": {
            "rho": encode_matrix(rho_out),
            "channel_part": encode_matrix(channel_part),
            "xi": encode_matrix(xi),
            "direct_check_max_abs": float(np.abs(rho_out - direct).max()),
        },
        "gamma_prime": encode_real_matrix(residual(decompose(rho, n, m))),
    }

    rows = None
    if kind == "hamiltonian" and config.steps > 0:
        rho_b = partial_trace(rho, (n, m), keep="second")
        rows = []
        for t in _grid(config):
            u = u_of_t(t)
            point, _, xi_t = evolve_reduced(u, rho, n, m)
            cond = propagator_condition(u_of_t, rho_b, t)
            rows.append(trajectory_row(float(t), point, xi_t, cond))
        report["trajectory"] = [encode_row(r) for r in rows]
    return report, rows, n


def _cmd_master(args) -> tuple[dict, list[dict] | None, int]:
    data = _apply_overrides(_load_json(args.input), args)
    config = parse_scenario(data)
    if config.hamiltonian is None:
        raise ConfigError("master integration requires a hamiltonian")
    if config.t0 != 0.0:
        raise ConfigError("master integration requires a time grid starting at 0")
    rho = _require_initial_state(config)
    n, m = config.n, config.m
    u_of_t, _ = _scenario_interaction(config)
    rho_a = partial_trace(rho, (n, m), keep="first")
    rho_b = partial_trace(rho, (n, m), keep="second")
    gamma_prime = residual(decompose(rho, n, m))
    grid = _grid(config)

    conds = [propagator_condition(u_of_t, rho_b, t) for t in grid]
    singular_times = [
        float(t) for t, c in zip(grid, conds) if not np.isfinite(c) or c > 1e12
    ]
    points = integrate_master(rho_a, u_of_t, rho_b, gamma_prime, grid)

    rows = []
    exactness = 0.0
    for point, cond in zip(points, conds):
        closed = devectorize(
            superop_at(u_of_t, rho_b, point.time) @ vectorize(rho_a)
        ) + point.xi
        exactness = max(exactness, trace_distance(point.rho, closed))
        rows.append(trajectory_row(point.time, point.rho, point.xi, cond))

    report = {
        "command": "master",
        "N": n,
        "M": m,
        "tensor_order": config.tensor_order,
        "grid": {"t0": config.t0, "t1": config.t1, "steps": config.steps},
        "singular_times": singular_times,
        "exactness_max_trace_distance": exactness,
        "final_rho": encode_matrix(points[-1].rho),
        "trajectory": [encode_row(r) for r in rows],
    }
    return report, rows, n


def _prepare_unitary(name_or_matrix, n: int, m: int) -> np.ndarray:
    if isinstance(name_or_matrix, str):
        if name_or_matrix == "cnot":
            if (n, m) != (2, 2):
                raise ConfigError("the named cnot unitary needs N = M = 2")
            u = np.zeros((4, 4), dtype=complex)
            u[0, 0] = u[1, 1] = 1.0
            u[2, 3] = u[3, 2] = 1.0
            return u
        if name_or_matrix == "swap":
            if n != m:
                raise ConfigError("the named swap unitary needs N = M")
            return swap_factors(n, m)
        raise ConfigError(f"unknown named unitary {name_or_matrix!r}")
    u = parse_matrix(name_or_matrix, what="unitary")
    if u.shape != (n * m, n * m):
        raise ConfigError(f"unitary has shape {u.shape}, expected {(n * m, n * m)}")
    return validate_unitary(u)


def _cmd_prepare(args) -> dict:
    data = _apply_overrides(_load_json(args.input), args)
    if not isinstance(data, dict):
        raise ConfigError("preparation configuration must be a JSON object")
    kind = data.get("kind")
    n = int(data.get("N", 2))
    m = int(data.get("M", n))
    samples = int(data.get("samples", 100))
    mix_weights = int(data.get("mixWeights", 3))
    tol = float(data.get("tol", 1e-10))
    seed = int(data.get("seed", 0))
    rng = np.random.default_rng(seed)

    if kind == "product":
        if "rhoB" not in data:
            raise ConfigError("product preparation requires rhoB")
        prep = product_preparation(parse_state(data["rhoB"], what="rhoB"), n)
    elif kind == "clone":
        prep = clone_preparation(n)
    elif kind == "transposeClone":
        prep = transpose_clone_preparation(n)
    elif kind == "fixedCorrelation":
        beta = np.asarray(data.get("beta", np.zeros(m * m - 1)), dtype=float)
        if "gammaPrime" not in data:
            raise ConfigError("fixedCorrelation preparation requires gammaPrime")
        gamma_prime = np.asarray(data["gammaPrime"], dtype=float)
        prep = fixed_correlation_preparation(beta, gamma_prime, n, m)
    else:
        raise ConfigError(
            "kind must be one of product, clone, transposeClone, fixedCorrelation"
        )

    report = {
        "command": "prepare",
        "kind": kind,
        "N": prep.system_dim,
        "M": prep.env_dim,
        "samples": samples,
        "seed": seed,
    }

    worst = 0.0
    accepted = 0
    rejected = 0
    for _ in range(samples):
        rho = random_density(rng, prep.system_dim)
        try:
            joint = prep_apply(prep, rho)
        except OutsideDomain:
            rejected += 1
            continue
        accepted += 1
        marginal = partial_trace(joint, (prep.system_dim, prep.env_dim), keep="first")
        worst = max(worst, float(np.abs(marginal - rho).max()))
    report["consistency"] = {
        "accepted": accepted,
        "rejected": rejected,
        "max_marginal_deviation": worst,
    }

    env = constant_environment_test(prep, samples=max(2, samples), tol=tol, rng=rng)
    report["environment_marginal"] = {
        "constant": env.constant,
        "max_deviation": env.max_deviation,
        "env_state": encode_matrix(env.env_state) if env.env_state is not None else None,
    }

    if "unitary" in data:
        u = _prepare_unitary(data["unitary"], prep.system_dim, prep.env_dim)
        evo = induced_evolution(prep, u)
        witness = linearity_test(
            evo, samples=max(2, samples), mix_weights=mix_weights, tol=tol, rng=rng
        )
        if witness is None:
            report["linearity"] = {"linear": True}
        else:
            report["linearity"] = {
                "linear": False,
                "witness": {
                    "states": [encode_matrix(s) for s in witness.states],
                    "weights": list(witness.weights),
                    "deviation": encode_matrix(witness.deviation),
                    "deviation_norm": witness.deviation_norm,
                },
            }
    return report


def _cmd_scenario(args) -> tuple[dict, dict | None, int]:
    data = _load_json(args.config) if args.config else {}
    data.setdefault("name", args.which)
    data = _apply_overrides(data, args)
    config = parse_scenario(data, require_interaction=False)
    if args.which == "cnot":
        report = run_cnot_example(config)
        rows = report.pop("_trajectory_rows", None)
        return report, rows, 2
    report = run_swap_example(config)
    return report, None, config.n


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fail(code: int, error_code: str, exc: BaseException) -> int:
    sys.stderr.write(
        json.dumps({"code": error_code, "message": str(exc)}) + "\n"
    )
    return code


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        command = args.command
        rows = None
        n = 2
        if command == "decompose":
            report = _cmd_decompose(args)
        elif command == "kraus":
            report = _cmd_kraus(args)
        elif command == "evolve":
            report, rows, n = _cmd_evolve(args)
        elif command == "master":
            report, rows, n = _cmd_master(args)
        elif command == "prepare":
            report = _cmd_prepare(args)
        else:
            report, rows, n = _cmd_scenario(args)

        if args.csv:
            if isinstance(rows, dict):
                written = []
                base = Path(args.csv)
                for key, row_list in rows.items():
                    path = base.with_name(f"{base.stem}-{key}{base.suffix or '.csv'}")
                    write_trajectory_csv(str(path), row_list, n)
                    written.append(str(path))
                report["csv_files"] = written
            elif rows:
                write_trajectory_csv(args.csv, rows, n)
                report["csv_files"] = [args.csv]
            else:
                report["csv_files"] = []
        _emit(report, args)
        return EXIT_OK
    except json.JSONDecodeError as exc:
        return _fail(EXIT_CONFIG, "config.parse", exc)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config.invalid", exc)
    except (DimensionMismatch, InvalidDimension) as exc:
        return _fail(EXIT_CONFIG, "config.dims", exc)
    except OSError as exc:
        return _fail(EXIT_CONFIG, "config.io", exc)
    except SingularPropagator as exc:
        return _fail(EXIT_NUMERIC, "numeric.singular", exc)
    except (Unphysical, UnphysicalInitialState, OutsideDomain, NotHermitian, NotUnitary) as exc:
        return _fail(EXIT_NUMERIC, "numeric.unphysical", exc)
    except CorrDynError as exc:
        return _fail(EXIT_NUMERIC, "numeric.error", exc)


if __name__ == "__main__":
    sys.exit(main())
