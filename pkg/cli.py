# -*- coding: utf-8 -*-
"""
Linha de comando do motor de cascata de dois átomos.

    python cli.py minima scenarios/linear_resonant.cfg
    python cli.py run scenarios/linear_resonant.cfg --set tau1=0.23
    python cli.py sweep scenarios/linear_resonant.cfg --axis delta2 --values 0,15
    python cli.py surface scenarios/linear_resonant.cfg --observable entropy --tau1-values 0.2,0.4

Exit codes: 0 sucesso, 2 configuração, 3 piso de projeção, 4 truncamento,
5 falha numérica.
"""

import functools
import logging
from pathlib import Path
from typing import List

import click
from pydantic import ValidationError

from config import settings
from cavity.errors import CavityError, ConfigError
from cavity.runner import cmd_minima, cmd_run, cmd_surface, cmd_sweep
from cavity.scenario import load_engine_settings, load_scenario, parse_overrides

logger = logging.getLogger("cavity.cli")


def _parse_values(raw: str) -> List[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"lista de valores inválida '{raw}': {exc}", code="values") from exc


def _guarded(func):
    """Mapeia as exceções do motor para os exit codes documentados"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except CavityError as exc:
            click.echo(f"error [{exc.code}]: {exc}", err=True)
            raise SystemExit(exc.exit_code)
        except ValidationError as exc:
            click.echo(f"error [validation]: {exc}", err=True)
            raise SystemExit(ConfigError.exit_code)

    return wrapper


def _scenario_options(func):
    func = click.option(
        "--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override a scenario key."
    )(func)
    func = click.argument("scenario", type=click.Path(dir_okay=False))(func)
    return func


@click.group()
@click.option("--verbose/--quiet", default=None, help="DEBUG (verbose) or WARNING (quiet) logging.")
def cli(verbose):
    """Dois átomos tipo V atravessando uma cavidade: dinâmica em forma fechada e observáveis."""
    level = settings.log_level
    if verbose is True:
        level = "DEBUG"
    elif verbose is False:
        level = "WARNING"
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@cli.command()
@_scenario_options
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Also write first_passage.csv and minima.csv here.")
@_guarded
def minima(scenario, overrides, out_dir):
    """Lista os mínimos locais da inversão do primeiro átomo (candidatos a tau1)."""
    config = load_scenario(scenario, parse_overrides(overrides))
    candidates = cmd_minima(config, Path(out_dir) if out_dir else None)
    click.echo("tau1,inversion,probability")
    for c in candidates:
        click.echo(f"{c.tau1:.17g},{c.inversion:.17g},{c.probability:.17g}")


@cli.command()
@_scenario_options
@_guarded
def run(scenario, overrides):
    """Séries temporais do segundo átomo, grade de Wigner e manifesto de um cenário."""
    config = load_scenario(scenario, parse_overrides(overrides))
    report = cmd_run(config, load_engine_settings(scenario))
    for name in report.files:
        click.echo(str(Path(report.out_dir) / name))


@cli.command()
@_scenario_options
@click.option("--axis", required=True, help="delta1, delta2, lambda1, alpha_sq or tau1.")
@click.option("--values", "raw_values", required=True, help="Comma-separated list of values.")
@click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1))
@_guarded
def sweep(scenario, overrides, axis, raw_values, workers):
    """Repete a execução ao longo de um eixo de parâmetro e resume."""
    config = load_scenario(scenario, parse_overrides(overrides))
    points = cmd_sweep(config, axis, _parse_values(raw_values), workers=workers,
                       engine=load_engine_settings(scenario))
    for p in points:
        click.echo(f"{axis}={p.value!r}: {p.status}" + (f" ({p.error})" if p.error else ""))


@cli.command()
@_scenario_options
@click.option("--observable", required=True,
              type=click.Choice(["inversion", "entropy", "squeezing1", "squeezing2", "mandel"]))
@click.option("--tau1-values", "raw_values", required=True, help="Comma-separated tau1 list.")
@click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1))
@_guarded
def surface(scenario, overrides, observable, raw_values, workers):
    """Um observável no plano (tau1, tau2), em formato longo."""
    config = load_scenario(scenario, parse_overrides(overrides))
    path = cmd_surface(config, _parse_values(raw_values), observable, workers=workers,
                       engine=load_engine_settings(scenario))
    click.echo(str(path))


if __name__ == "__main__":
    cli()
