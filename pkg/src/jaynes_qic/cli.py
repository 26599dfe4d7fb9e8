"""Command-line front end.

    jaynes-qic infer        --config cfg.json [--out PREFIX]
    jaynes-qic simulate     --config cfg.json [--out PREFIX] [--seed S] [--threads T]
    jaynes-qic converse     --config cfg.json --rate-budget B [--out PREFIX]
    jaynes-qic oracle-check --config cfg.json [--trials K]

Exit codes: 0 success, 2 configuration error, 3 inconsistent data,
4 oracle violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import (
    DegenerateObservable,
    InconsistentData,
    InconsistentEnsemble,
    InvalidBudget,
    InvalidDelta,
    JaynesQICError,
    OutOfFamilyRange,
    TooLarge,
)
from .inference import Constraint, ConstraintSet, JaynesSolution, family_state, infer
from .oracle import MAX_QUBITS, corrupt_window, oracle_compare
from .protocol import converse_check, decompose_ensemble, simulate
from .qubit import Hermitian2
from .typical import build_projector

log = logging.getLogger("jaynes_qic")

EXIT_OK, EXIT_CONFIG, EXIT_INCONSISTENT, EXIT_ORACLE = 0, 2, 3, 4
ORACLE_TOL = 1e-10

_number = {"type": "number"}
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["constraints"],
    "properties": {
        "constraints": {
            "type": "array",
            "minItems": 1,
            "maxItems": 3,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["matrix", "mean"],
                "properties": {
                    "matrix": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["h11", "h22"],
                        "properties": {"h11": _number, "h22": _number, "re12": _number, "im12": _number},
                    },
                    "mean": _number,
                },
            },
        },
        "delta": {"type": "number", "exclusiveMinimum": 0},
        "n_list": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "ensemble": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["eigen", "random-mix"]},
                "members": {"type": "integer", "minimum": 2},
                "family_params": {"type": "array", "maxItems": 3, "items": _number},
            },
        },
        "output": {"type": "string", "minLength": 1},
        "rate_budget": {"type": "number", "exclusiveMinimum": 0},
        "corrupt_window": {"type": "boolean"},
    },
}


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    constraints: ConstraintSet
    delta: float = 0.05
    n_list: list[int] = field(default_factory=lambda: [100, 1000])
    samples: int = 1000
    seed: int = 0
    method: str = "eigen"
    members: int = 5
    family_params: list[float] = field(default_factory=list)
    output: str = "jaynes"
    rate_budget: float | None = None
    corrupt_window: bool = False

    @classmethod
    def from_dict(cls, doc: dict) -> ExperimentConfig:
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
        if error is not None:
            where = "/".join(str(p) for p in error.absolute_path) or "<root>"
            raise ConfigError(f"config field {where}: {error.message}")
        cons = []
        for c in doc["constraints"]:
            m = c["matrix"]
            h = Hermitian2(m["h11"], m["h22"], complex(m.get("re12", 0.0), m.get("im12", 0.0)))
            cons.append(Constraint(h, c["mean"]))
        ens = doc.get("ensemble", {})
        kw = {k: doc[k] for k in ("delta", "n_list", "samples", "seed", "output", "rate_budget", "corrupt_window") if k in doc}
        return cls(
            ConstraintSet(tuple(cons)),
            method=ens.get("method", "eigen"),
            members=ens.get("members", 5),
            family_params=list(ens.get("family_params", [])),
            **kw,
        )

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def infer_report(sol: JaynesSolution) -> dict:
    rho = sol.rho_j
    view = sol.data_view
    fam = sol.family
    return {
        "units": "entropy_bits uses log base 2 (qubits); entropy_nats uses natural log",
        "rho_j": {
            "matrix": {"h11": rho.h11, "h22": rho.h22, "re12": rho.h12.real, "im12": rho.h12.imag},
            "bloch": [rho.rx, rho.ry, rho.rz],
        },
        "entropy_bits": sol.entropy_bits,
        "entropy_nats": sol.entropy_nats,
        "eigenvalues": [sol.frame.lambda_hi, sol.frame.lambda_lo],
        "data_frame_view": {"rho11": view.h11, "rho22": view.h22, "d_re": view.h12.real, "d_im": view.h12.imag},
        "family": {
            "kind": fam.kind.value,
            "dim": fam.dim,
            "radius": fam.radius,
            "param_range": [-fam.radius, fam.radius],
            "axes": [[float(v) for v in u] for u in fam.axes],
        },
        "data_rank": sol.data_rank,
    }


def _out_path(args, cfg: ExperimentConfig, suffix: str) -> Path:
    prefix = args.out or cfg.output
    path = Path(f"{prefix}_{suffix}")
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_infer(args, cfg: ExperimentConfig) -> int:
    sol = infer(cfg.constraints)
    path = _out_path(args, cfg, "infer.json")
    path.write_text(json.dumps(infer_report(sol), indent=2) + "\n")
    print(path)
    return EXIT_OK


def write_simulation_csv(path: Path, report) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "rate_bits", "p_error", "fidelity_mean", "fidelity_stderr", "fidelity_bound", "seed"])
        for r in report.records:
            w.writerow(
                [
                    r.n_copies,
                    fmt(r.rate_bits),
                    fmt(r.p_error_exact),
                    fmt(r.fidelity_mc_mean),
                    fmt(r.fidelity_mc_stderr),
                    fmt(r.fidelity_lower_bound),
                    r.seed,
                ]
            )


def cmd_simulate(args, cfg: ExperimentConfig) -> int:
    sol = infer(cfg.constraints)
    source = family_state(sol, cfg.family_params)
    ens = decompose_ensemble(source, cfg.method, cfg.members, cfg.seed)
    report = simulate(sol, ens, cfg.n_list, cfg.delta, cfg.samples, cfg.seed, threads=args.threads)
    path = _out_path(args, cfg, "simulate.csv")
    write_simulation_csv(path, report)
    print(path)
    return EXIT_OK


def cmd_converse(args, cfg: ExperimentConfig) -> int:
    budget = args.rate_budget if args.rate_budget is not None else cfg.rate_budget
    if budget is None:
        raise ConfigError("converse needs --rate-budget (or rate_budget in the config)")
    sol = infer(cfg.constraints)
    report = converse_check(sol, cfg.n_list, budget)
    path = _out_path(args, cfg, "converse.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "rank_log2", "retained_trace"])
        for r in report.records:
            w.writerow([r.n_copies, r.rank_budget_log2, fmt(r.best_retained_trace)])
    print(path)
    return EXIT_OK


def cmd_oracle_check(args, cfg: ExperimentConfig) -> int:
    too_big = [n for n in cfg.n_list if n > MAX_QUBITS]
    if too_big:
        raise TooLarge(f"oracle-check supports n <= {MAX_QUBITS}; n_list contains {too_big}")
    sol = infer(cfg.constraints)
    worst = 0.0
    for n in cfg.n_list:
        fast = None
        if cfg.corrupt_window:
            fast = corrupt_window(build_projector(sol, n, cfg.delta))
        rep = oracle_compare(sol, n, cfg.delta, args.trials, cfg.seed, fast_projector=fast)
        worst = max(worst, rep.max_dev)
        print(
            f"n={n} window={rep.window} trace={rep.max_trace_dev:.3e} overlap={rep.max_overlap_dev:.3e} "
            f"flag={rep.max_flag_dev:.3e} identity={rep.max_identity_dev:.3e}"
        )
    ok = worst <= ORACLE_TOL
    print(f"{'PASS' if ok else 'FAIL'}: max deviation {worst:.3e} (tolerance {ORACLE_TOL:g})")
    return EXIT_OK if ok else EXIT_ORACLE


COMMANDS = {
    "infer": cmd_infer,
    "simulate": cmd_simulate,
    "converse": cmd_converse,
    "oracle-check": cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jaynes-qic", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment JSON file")
        p.add_argument("--out", help="output path prefix (overrides config 'output')")
        p.add_argument("--seed", type=int, help="overrides config 'seed'")
        p.add_argument("--threads", type=int, default=1, help="Monte Carlo worker threads, 0 = auto")
        if name == "converse":
            p.add_argument("--rate-budget", type=float, help="qubits per message allowed")
        if name == "oracle-check":
            p.add_argument("--trials", type=int, default=200)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg.seed = args.seed
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, TooLarge, InvalidBudget, InvalidDelta, OutOfFamilyRange) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except (InconsistentData, DegenerateObservable, InconsistentEnsemble) as exc:
        log.error("inconsistent data: %s", exc)
        return EXIT_INCONSISTENT
    except (JaynesQICError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
