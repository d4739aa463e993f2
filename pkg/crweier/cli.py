from __future__ import annotations

from dotenv import load_dotenv
load_dotenv()

from typing import Dict, List, Optional, Tuple

import typer

from crweier.dto import build_run_config
from crweier.errors import CrweierError, ModelError
from crweier.settings import DEFAULT_ORDER, DEFAULT_POINTS, DEFAULT_SEED, VERBOSITY
from crweier.verbosity import setup_logging, get_logger

app = typer.Typer(add_completion=False, help="crweier CLI: pseudohermitian frames, Garfield-Lee complex, immersion checks.")
_log = get_logger("crweier.cli")

_state = {"verbose": VERBOSITY}


@app.callback()
def _cli_callback(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True,
                                help="Verbosity level: -v for progress, -vv for debug traces."),
):
    """crweier: numerical verification on 3-dimensional CR manifolds."""
    _state["verbose"] = max(verbose, VERBOSITY)
    setup_logging(_state["verbose"])


# -------------------------
# Helpers
# -------------------------

# ConfigError, ParseError and ChartParseError are ValueErrors
_USAGE_ERRORS = (ValueError, ModelError)


def fail(exc: Exception) -> None:
    """Report a library error and exit: 2 for configuration/parse problems, 1 otherwise."""
    if _state["verbose"] >= 2:
        _log.exception("command failed")
    typer.echo(f"error: {exc}", err=True)
    raise typer.Exit(code=2 if isinstance(exc, _USAGE_ERRORS) else 1)


def parse_point(text: str) -> Tuple[float, float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise typer.BadParameter("point must be three comma-separated numbers, e.g. 0.5,0,0")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc


def parse_assignments(items: List[str], what: str) -> Dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise typer.BadParameter(f"{what} must look like KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def split_names(items: List[str]) -> List[str]:
    """Flatten repeated and comma-separated option values."""
    return [name.strip() for item in items for name in item.split(",") if name.strip()]


def _coerce(value: str):
    low = value.lower()
    if low in ("true", "false"):
        return low == "true"
    return value


def resolve_chart(model_name: Optional[str], chart_file: Optional[str]):
    if bool(model_name) == bool(chart_file):
        raise typer.BadParameter("give exactly one of --model or --chart")
    if model_name:
        from crweier.models import model
        return model(model_name).chart
    from crweier.chartfile import load_chart
    return load_chart(chart_file)


# -------------------------
# Commands
# -------------------------

@app.command("run")
def cmd_run(
    model_name: Optional[str] = typer.Option(None, "--model", help="Built-in model name"),
    chart_file: Optional[str] = typer.Option(None, "--chart", help="Path to a TOML chart file"),
    suite: List[str] = typer.Option([], "--suite", help="Suite(s) to run, NAME[,NAME...] (repeatable; default: all)"),
    points: int = typer.Option(DEFAULT_POINTS, help="Number of Halton sample points"),
    seed: int = typer.Option(DEFAULT_SEED, help="Halton start index"),
    tol: List[str] = typer.Option([], "--tol", help="Per-suite tolerance SUITE=VALUE (repeatable)"),
    order: int = typer.Option(DEFAULT_ORDER, help="Jet order"),
    fmt: str = typer.Option("json", "--format", help="json | csv | text"),
    out: Optional[str] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Run verification suites on a model or chart. Exit 0 if all pass, 1 on a failure, 2 on bad input.
    """
    from crweier.storage import store_report
    from crweier.suites import run

    if bool(model_name) == bool(chart_file):
        typer.echo("error: give exactly one of --model or --chart", err=True)
        raise typer.Exit(code=2)
    try:
        tolerances = {k: float(v) for k, v in parse_assignments(tol, "--tol").items()}
    except ValueError as exc:
        typer.echo(f"error: --tol: {exc}", err=True)
        raise typer.Exit(code=2)

    fields = dict(
        target=f"model:{model_name}" if model_name else f"chart:{chart_file}",
        points=points, seed=seed, tolerances=tolerances, order=order, format=fmt, out=out,
    )
    names = split_names(suite)
    if names:
        fields["suites"] = names
    try:
        config = build_run_config(**fields)
        report = run(config)
    except (CrweierError, ValueError) as exc:
        fail(exc)

    text = store_report(report, config.format, config.out)
    if config.out:
        typer.echo(f"{'OK' if report.passed else 'FAIL'} run: target={config.target} out={config.out}")
    else:
        typer.echo(text, nl=False)
    raise typer.Exit(code=0 if report.passed else 1)


@app.command("eval")
def cmd_eval(
    expression: Optional[str] = typer.Argument(None, help="Expression in u1, u2, u3"),
    model_name: Optional[str] = typer.Option(None, "--model", help="Built-in model name"),
    chart_file: Optional[str] = typer.Option(None, "--chart", help="Path to a TOML chart file"),
    point: str = typer.Option(..., help="Base point x,y,z"),
    order: int = typer.Option(DEFAULT_ORDER, help="Jet order"),
    structure: Optional[str] = typer.Option(None, help="Print structure function a, b or c instead"),
):
    """
    Print the jet table of an expression, or of a structure function, at a point.
    """
    from crweier import expr as ex
    from crweier.frame import build_frame
    from crweier.jets import multi_indices

    base = parse_point(point)
    try:
        if structure is not None:
            if structure not in ("a", "b", "c"):
                raise typer.BadParameter("--structure must be a, b or c")
            chart = resolve_chart(model_name, chart_file)
            jet = getattr(build_frame(chart, base, order), structure)
            label = structure
        else:
            if expression is None:
                raise typer.BadParameter("an expression or --structure is required")
            if model_name or chart_file:
                chart = resolve_chart(model_name, chart_file)
                if not chart.contains(base):
                    _log.warning("point %s lies outside chart %s", base, chart.name)
            jet = ex.evaluate_source(expression, base, order)
            label = expression
    except (CrweierError, ValueError) as exc:
        fail(exc)

    typer.echo(f"# {label} at {base}, order {jet.order}")
    typer.echo(f"{'alpha':<10} {'coefficient':>44}")
    for alpha, coef in zip(multi_indices(jet.order), jet.coeffs):
        typer.echo(f"{str(alpha):<10} {coef.real:>21.14e} {coef.imag:>+21.14e}i")


@app.command("models")
def cmd_models():
    """
    List the built-in models.
    """
    from crweier.models import model, model_names

    for name in model_names():
        desc = model(name)
        embedded = "embedded" if desc.chart.immersion else "no embedding"
        typer.echo(f"{name:<12} {desc.description} ({embedded})")


@app.command("export-chart")
def cmd_export_chart(
    name: str = typer.Argument(..., help="Built-in model name"),
    param: List[str] = typer.Option([], "--param", help="Model parameter KEY=VALUE (repeatable)"),
    out: Optional[str] = typer.Option(None, help="Output TOML path (default: stdout)"),
):
    """
    Write a built-in model as a TOML chart file.
    """
    from crweier.chartfile import export_chart
    from crweier.models import model

    params = {k: _coerce(v) for k, v in parse_assignments(param, "--param").items()}
    try:
        text = export_chart(model(name, **params).chart, out)
    except CrweierError as exc:
        fail(exc)
    if out:
        typer.echo(f"OK export-chart: model={name} out={out}")
    else:
        typer.echo(text, nl=False)


def main():
    app()


if __name__ == "__main__":
    main()
