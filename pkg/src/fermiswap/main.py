#!/usr/bin/env python3
"""
Main entry point for fermiswap
"""

import json
import sys
from pathlib import Path
from typing import List, Optional

import typer
import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from .core.config_loader import ConfigLoader, RunConfig
from .core.errors import FermiSwapError, InputValidationError, SizeLimitError, BranchCutError, VerificationError
from .core.runner import SynthesisRunner
from .utils.logger import logger, set_level

app = typer.Typer(help="Fermionic swap network and Givens-rotation circuit synthesis")
console = Console()

PROG_NAME = "fermiswap"


# click exception bases as re-exported through typer
UsageError = next(c for c in typer.BadParameter.__mro__ if c.__name__ == "UsageError")
ClickException = next(c for c in typer.BadParameter.__mro__ if c.__name__ == "ClickException")


def _make_config(command: str, **options) -> RunConfig:
    """Build a RunConfig; options left unset take the config file defaults"""
    try:
        defaults = ConfigLoader(str(options["config_dir"])).load().defaults
        for name, value in defaults.model_dump().items():
            key = "tolerance" if name == "tol" else name
            if options.get(key) is None:
                options[key] = value
        return RunConfig(command=command, **options)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise typer.BadParameter(messages)
    except yaml.YAMLError as e:
        raise typer.BadParameter(f"Unreadable configuration: {e}")


InputOption = typer.Option(None, "--in", help="Input JSON file")
OutputOption = typer.Option(None, "--out", help="Output JSON file")
SeedOption = typer.Option(None, "--seed", help="Random seed (FERMISWAP_SEED overrides)")
TolOption = typer.Option(None, "--tol", help="Verification tolerance")
ThreadsOption = typer.Option(None, "--threads", help="Worker threads for statevector simulation")
TimeOption = typer.Option(None, "--t", help="Time step")
VerboseOption = typer.Option(False, "--verbose", "-v", help="Debug logging")
ConfigDirOption = typer.Option(Path("./config"), "--config-dir", help="Configuration directory")


@app.command("synth-trotter")
def synth_trotter(
        input_path: Optional[Path] = InputOption,
        output_path: Optional[Path] = OutputOption,
        t: Optional[float] = TimeOption,
        order: Optional[int] = typer.Option(None, "--order", help="Trotter order (1, 2 or 4)"),
        steps: Optional[int] = typer.Option(None, "--steps", help="Number of consecutive Trotter steps"),
        seed: Optional[int] = SeedOption,
        tolerance: Optional[float] = TolOption,
        threads: Optional[int] = ThreadsOption,
        verbose: bool = VerboseOption,
        config_dir: Path = ConfigDirOption,
):
    """Synthesize a swap-network Trotter step for a Hamiltonian file"""
    return _make_config("synth-trotter", **locals())


@app.command("synth-slater")
def synth_slater(
        input_path: Optional[Path] = InputOption,
        output_path: Optional[Path] = OutputOption,
        seed: Optional[int] = SeedOption,
        tolerance: Optional[float] = TolOption,
        threads: Optional[int] = ThreadsOption,
        verbose: bool = VerboseOption,
        config_dir: Path = ConfigDirOption,
):
    """Synthesize a Slater-determinant preparation or basis rotation"""
    return _make_config("synth-slater", **locals())


@app.command("synth-hubbard")
def synth_hubbard(
        input_path: Optional[Path] = InputOption,
        output_path: Optional[Path] = OutputOption,
        t: Optional[float] = TimeOption,
        seed: Optional[int] = SeedOption,
        tolerance: Optional[float] = TolOption,
        threads: Optional[int] = ThreadsOption,
        verbose: bool = VerboseOption,
        config_dir: Path = ConfigDirOption,
):
    """Synthesize a Hubbard-model Trotter step for a lattice file"""
    return _make_config("synth-hubbard", **locals())


@app.command("verify")
def verify(
        input_path: Optional[Path] = InputOption,
        output_path: Optional[Path] = OutputOption,
        seed: Optional[int] = SeedOption,
        tolerance: Optional[float] = TolOption,
        threads: Optional[int] = ThreadsOption,
        verbose: bool = VerboseOption,
        config_dir: Path = ConfigDirOption,
):
    """Check a circuit against the exact oracle named by its metadata"""
    return _make_config("verify", **locals())


@app.command("stats")
def stats(
        input_path: Optional[Path] = InputOption,
        output_path: Optional[Path] = OutputOption,
        verbose: bool = VerboseOption,
        config_dir: Path = ConfigDirOption,
):
    """Show gate counts and depth of a circuit file"""
    return _make_config("stats", **locals())


def parse_args(argv: List[str]) -> RunConfig:
    """Parse command-line arguments; usage errors exit with status 2"""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=list(argv), prog_name=PROG_NAME, standalone_mode=False)
    except UsageError as e:
        e.show()
        raise SystemExit(2)
    except ClickException as e:
        e.show()
        raise SystemExit(e.exit_code)
    if not isinstance(result, RunConfig):
        # --help and friends
        raise SystemExit(0)
    return result


def _emit_error(e: Exception) -> None:
    sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
    sys.stderr.flush()


def _show_result(runner: SynthesisRunner) -> None:
    if runner.last_stats is not None:
        table = Table(title="Circuit Statistics")
        table.add_column("Metric", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Two-qubit gates", str(runner.last_stats["two_qubit_count"]))
        table.add_row("Depth", str(runner.last_stats["depth"]))
        for kind, count in runner.last_stats["per_kind_counts"].items():
            table.add_row(f"{kind} gates", str(count))
        console.print(table)
    if runner.last_report is not None:
        report = runner.last_report
        colour = "green" if report.passed else "red"
        console.print(f"[{colour}]{report.check}: {report.metric:.3e} "
                      f"(tolerance {report.tolerance:.1e})[/{colour}]")


def run(config: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit status"""
    runner = None
    try:
        framework_config = ConfigLoader(str(config.config_dir)).load()
        set_level("DEBUG" if config.verbose else framework_config.logging.level)
        runner = SynthesisRunner(config, framework_config)
        status = runner.run()
        _show_result(runner)
        return status
    except (InputValidationError, SizeLimitError, BranchCutError, ValidationError) as e:
        logger.error(f"Invalid input: {e}")
        _emit_error(e)
        return 2
    except VerificationError as e:
        if runner is not None:
            _show_result(runner)
        _emit_error(e)
        return 1
    except FermiSwapError as e:
        logger.error(f"Error: {e}")
        _emit_error(e)
        return 1
    except Exception as e:
        logger.exception("Unhandled exception")
        _emit_error(e)
        return 1


def main(argv: Optional[List[str]] = None) -> None:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
