"""Command-line client for the experiment runner.

``qexpect run`` reads an INI config and/or flag overrides, builds an
ExperimentRequest, and executes it: in-process by default, or against a
running service with ``--server URL`` (the CLI itself never computes in
that mode).  ``serve`` starts the HTTP service, ``inspect`` summarizes an
operator file, ``hint`` prints the advisory shot budget.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .experiments import (
    DEFAULTS,
    EstimateReport,
    load_config,
    parse_amplitudes,
    report_text,
    shot_budget_hint,
)
from .service.models import ExperimentRequest, VqeRequest

_PATH_KEYS = ("operator", "vqe_hamiltonian")


def _read_source(value: str, base_dir: Path) -> tuple[str | None, str | None]:
    """Split a config value into (inline text, builtin ref)."""
    if value.startswith("builtin:"):
        return None, value
    path = Path(value)
    if not path.is_absolute():
        path = base_dir / path
    return path.read_text(), None


def _request_from_settings(settings: dict) -> ExperimentRequest:
    if "operator" not in settings:
        raise click.UsageError("an operator is required (config key or --operator)")
    base_dir = Path(settings.get("config_dir", "."))

    text, builtin = _read_source(str(settings["operator"]), base_dir)
    amplitudes = settings.get("amplitudes")
    if isinstance(amplitudes, str):
        amplitudes = parse_amplitudes(amplitudes)

    vqe = None
    if "vqe_hamiltonian" in settings:
        h_text, h_builtin = _read_source(str(settings["vqe_hamiltonian"]), base_dir)
        vqe = VqeRequest(
            hamiltonian_text=h_text,
            hamiltonian=h_builtin,
            hamiltonian_label=None if h_builtin else str(settings["vqe_hamiltonian"]),
            ansatz=str(settings.get("vqe_ansatz", DEFAULTS["vqe_ansatz"])),
            depth=int(settings.get("vqe_depth", DEFAULTS["vqe_depth"])),
            restarts=int(settings.get("vqe_restarts", DEFAULTS["vqe_restarts"])),
            max_evaluations=int(
                settings.get("vqe_max_evaluations", DEFAULTS["vqe_max_evaluations"])
            ),
            mode=str(settings.get("vqe_mode", DEFAULTS["vqe_mode"])),
            shots=int(settings.get("vqe_shots", DEFAULTS["vqe_shots"])),
        )

    return ExperimentRequest(
        operator_text=text,
        operator=builtin,
        operator_label=None if builtin else str(settings["operator"]),
        encoding=str(settings.get("encoding", DEFAULTS["encoding"])),
        method=str(settings.get("method", DEFAULTS["method"])),
        shots=int(settings.get("shots", DEFAULTS["shots"])),
        runs=int(settings.get("runs", DEFAULTS["runs"])),
        seed=int(settings.get("seed", DEFAULTS["seed"])),
        sign_policy=str(settings.get("sign_policy", DEFAULTS["sign_policy"])),
        amplitudes=list(amplitudes) if amplitudes is not None else None,
        vqe=vqe,
        workers=int(settings.get("workers", DEFAULTS["workers"])),
    )


def _post_run(server: str, request: ExperimentRequest) -> EstimateReport:
    import httpx

    response = httpx.post(
        f"{server.rstrip('/')}/experiments/run",
        json=request.model_dump(exclude_none=True),
        timeout=600.0,
    )
    if response.status_code != 200:
        raise click.ClickException(
            f"server returned {response.status_code}: {response.text}"
        )
    return EstimateReport(**response.json())


@click.group()
def main() -> None:
    """Expectation-value estimation experiments."""


@main.command()
@click.argument("config", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--operator", help="Operator file path or builtin:<name>.")
@click.option("--encoding", type=click.Choice(["gc", "jw"]), help="State encoding.")
@click.option("--amplitudes", help="Comma-separated mode amplitudes.")
@click.option("--vqe-hamiltonian", help="Optimize this Hamiltonian for the state.")
@click.option(
    "--method",
    type=click.Choice(["htest", "lcu-swap", "lcu-dswap", "exact"]),
    help="Estimation method.",
)
@click.option("--shots", type=int, help="Shots per run (sampled methods).")
@click.option("--runs", type=int, help="Independent repetitions.")
@click.option("--seed", type=int, help="Base seed; run r uses derived streams.")
@click.option(
    "--sign-policy",
    type=click.Choice(["oracle", "assume-positive", "htest-sign"]),
    help="How LCU estimates recover the lost sign.",
)
@click.option("--output", type=click.Path(dir_okay=False), help="Report file path.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), help="Report format.")
@click.option("--workers", type=int, help="Worker threads for independent runs.")
@click.option("--vqe-ansatz", type=click.Choice(["single-ry", "ry-cnot-ladder"]))
@click.option("--vqe-depth", type=int)
@click.option("--vqe-restarts", type=int)
@click.option("--vqe-max-evaluations", type=int)
@click.option("--vqe-mode", type=click.Choice(["exact", "sampled"]))
@click.option("--vqe-shots", type=int)
@click.option("--server", help="Run on this service URL instead of in-process.")
def run(config, server, output, fmt, **flags) -> None:
    """Run an experiment from CONFIG and/or flags; print or write the report."""
    try:
        settings = load_config(config) if config else {}
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    for key, value in flags.items():
        if value is not None:
            if key in _PATH_KEYS and not value.startswith("builtin:"):
                value = str(Path(value).absolute())
            settings[key] = value
    if output is not None:
        settings["output"] = output
    if fmt is not None:
        settings["format"] = fmt

    out_path = settings.get("output")
    out_fmt = str(settings.get("format", DEFAULTS["format"]))
    try:
        request = _request_from_settings(settings)
        if server:
            report = _post_run(server, request)
        else:
            from .service.app import execute_request

            report = execute_request(request)
    except (ValueError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc)) from exc

    if out_path:
        Path(out_path).write_text(report_text(report, out_fmt), newline="")
        click.echo(
            f"median {report.median:.8g}  mad {report.mad:.4g}  "
            f"({len(report.per_run_values)} runs) -> {out_path}"
        )
    else:
        click.echo(report_text(report, out_fmt), nl=False)


@main.command()
@click.argument("value", type=float)
@click.option("--maximum", type=int, default=10_000_000, show_default=True)
def hint(value: float, maximum: int) -> None:
    """Advisory shot budget to resolve an expectation VALUE."""
    try:
        shots = shot_budget_hint(value, maximum)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    if value == 0.0:
        click.echo("warning: a zero expectation cannot be resolved", err=True)
    click.echo(str(shots))


@main.command()
@click.argument("operator")
def inspect(operator: str) -> None:
    """Summarize an operator file (path or builtin:<name>)."""
    from .service.models import _load_source

    try:
        text, builtin = _read_source(operator, Path("."))
        op = _load_source(text, builtin)
    except (ValueError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"qubits: {op.n_qubits}")
    click.echo(f"terms:  {len(op.terms)}")
    for t in op.terms:
        click.echo(f"  {t.coefficient:+.10g}  {t.label()}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("qexpect.service.app:app", host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
