"""
CLI del toolkit
===============

Uso:
    ecost lemma-check --seed 7 --output out/lemmas.csv
    ecost spectral-rate --input rho.json --reference omega.json --n 4 8 16 24
    ecost eof --input ecost/fixtures/bell.json --bits
    ecost dilution-curve --input ecost/fixtures/qubit_09_01.json --n 4 8 16 24
    ecost fixture --kind werner --p 0.9 --output werner.json

Los flags pisan los valores de --config (YAML). Sin --output la tabla va a
stdout; los logs JSON y los registros de error van a stderr.
"""
import argparse
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from ..config.schemas import ExperimentConfig, merge_overrides
from .commands import build_registry
from .runner import EXIT_INVALID, emit_record, run, validation_record


def build_parser() -> argparse.ArgumentParser:
    registry = build_registry()
    epilog = "\n".join(f"  {cmd:<15} {desc}" for cmd, desc in sorted(registry.get_help().items()))
    parser = argparse.ArgumentParser(
        prog="ecost",
        description="Information-spectrum toolkit for entanglement cost",
        epilog=f"commands:\n{epilog}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=sorted(registry.available_commands), help="Experiment to run")
    parser.add_argument("--config", help="YAML experiment config (flags override it)")
    parser.add_argument("--input", help="JSON state file")
    parser.add_argument("--output", help="CSV or JSON output path (default: stdout)")
    parser.add_argument("--seed", type=int, help="Master seed (default: 0)")

    grid = parser.add_argument_group("gamma grid")
    grid.add_argument("--gamma-min", type=float)
    grid.add_argument("--gamma-max", type=float)
    grid.add_argument("--gamma-step", type=float)

    sweep = parser.add_argument_group("levels and rates")
    sweep.add_argument("--n", type=int, nargs="+", help="Levels n (each ≥ 1)")
    sweep.add_argument("--rates", type=float, nargs="+", help="Rates in nats")
    sweep.add_argument("--epsilon", type=float, help="Rate-estimate threshold in (0, 0.5)")
    sweep.add_argument("--bits", action="store_true", help="Report the summary value in bits")
    sweep.add_argument("--draws", type=int, help="Draws per lemma suite (default: 1000)")

    spectral = parser.add_argument_group("spectral-rate")
    spectral.add_argument("--mode", choices=["divergence", "conditional-entropy"])
    spectral.add_argument("--reference", help="JSON state file for omega")
    spectral.add_argument("--condition-on-b", action="store_true", help="Use I_A ⊗ rho_B as omega")

    optimizer = parser.add_argument_group("optimizer")
    optimizer.add_argument("--restarts", type=int)
    optimizer.add_argument("--members", type=int, help="Decomposition size K (default: rank²)")
    optimizer.add_argument("--workers", type=int, help="Threads (default: min(8, cpu))")

    dilution = parser.add_argument_group("dilution")
    dilution.add_argument("--variant", choices=["orthogonal-flag", "weyl-teleport", "both"])
    dilution.add_argument("--ranks", type=int, nargs="+", help="Resource ranks M")

    fixture = parser.add_argument_group("fixture")
    fixture.add_argument("--kind", choices=["bell", "werner", "random-mixed", "random-pure", "product"])
    fixture.add_argument("--p", type=float, help="Werner weight in [0, 1]")
    fixture.add_argument("--dim-a", type=int)
    fixture.add_argument("--dim-b", type=int)
    fixture.add_argument("--rank", type=int)

    parser.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Log level"
    )
    return parser


def _put(target: Dict[str, Any], key: str, value: Any) -> None:
    if value is not None and value is not False:
        target[key] = value


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """Namespace → dict anidado con solo los flags presentes."""
    root: Dict[str, Any] = {"command": args.command}
    _put(root, "input_path", args.input)
    _put(root, "output_path", args.output)
    _put(root, "seed", args.seed)
    _put(root, "n_values", args.n)
    _put(root, "rates", args.rates)
    _put(root, "epsilon", args.epsilon)
    _put(root, "draws", args.draws)
    if args.bits:
        root["units"] = "bits"

    sections: Dict[str, Dict[str, Any]] = {
        "gamma": {},
        "spectral": {},
        "optimizer": {},
        "dilution": {},
        "fixture": {},
        "logging": {},
    }
    _put(sections["gamma"], "gamma_min", args.gamma_min)
    _put(sections["gamma"], "gamma_max", args.gamma_max)
    _put(sections["gamma"], "gamma_step", args.gamma_step)
    _put(sections["spectral"], "mode", args.mode)
    _put(sections["spectral"], "reference_path", args.reference)
    _put(sections["spectral"], "condition_on_b", args.condition_on_b)
    _put(sections["optimizer"], "restarts", args.restarts)
    _put(sections["optimizer"], "members", args.members)
    _put(sections["optimizer"], "workers", args.workers)
    _put(sections["dilution"], "variant", args.variant)
    _put(sections["dilution"], "ranks", args.ranks)
    _put(sections["fixture"], "kind", args.kind)
    _put(sections["fixture"], "p", args.p)
    _put(sections["fixture"], "dim_a", args.dim_a)
    _put(sections["fixture"], "dim_b", args.dim_b)
    _put(sections["fixture"], "rank", args.rank)
    _put(sections["logging"], "level", args.log_level)

    root.update({name: values for name, values in sections.items() if values})
    return root


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Raises:
        ValidationError: config inválida
        FileNotFoundError: --config inexistente
    """
    overrides = overrides_from_args(args)
    if args.config:
        return ExperimentConfig.from_yaml(args.config, overrides)
    return ExperimentConfig(**merge_overrides({}, overrides))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point del script `ecost`; devuelve el exit status."""
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    try:
        config = load_config(args)
    except ValidationError as e:
        emit_record(validation_record(e))
        return EXIT_INVALID
    except (OSError, ValueError) as e:
        emit_record({"code": "invalid_config", "message": str(e), "context": {"config": args.config}})
        return EXIT_INVALID
    return run(config)


__all__ = ["build_parser", "overrides_from_args", "load_config", "main"]
