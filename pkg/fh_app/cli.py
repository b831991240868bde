"""
Командная строка: реестр, потенциал, спектр, волновые функции, сканы и валидация.
"""

import functools
import logging
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
from pydantic import ValidationError

from . import constants
from .analytic import make_wavefunction, spectrum, synthetic_level, variant_values, wavefunction
from .config import load_settings, get_unit_system
from .error_handlers import EXIT_OK, EXIT_USAGE, SpectrumException
from .potential import derive_coefficients, evaluate_potential
from .registry import get_molecule, resolve_registry
from .reports import format_number, run_scan, run_validation
from .schemas import (
    BetaVariant,
    EigenvalueVariant,
    PotentialConfig,
    ScanKind,
    ScanRequest,
    SweepRange,
)
from .units import to_momentum

logger = logging.getLogger(__name__)

VARIANTS = [variant.value for variant in EigenvalueVariant]
BETA_VARIANTS = [variant.value for variant in BetaVariant]
SCAN_KINDS = [kind.value for kind in ScanKind]


def handle_errors(func):
    """SpectrumException → сообщение в stderr и код выхода исключения"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SpectrumException as exc:
            logger.debug(f"{exc.__class__.__name__}: {exc.detail}")
            click.echo(f"error: {exc.message}", err=True)
            click.get_current_context().exit(exc.exit_code)
        except ValidationError as exc:
            first = exc.errors()[0]
            click.echo(f"error: {'.'.join(map(str, first['loc']))}: {first['msg']}", err=True)
            click.get_current_context().exit(EXIT_USAGE)

    return wrapper


def _config(ctx: click.Context, name: str) -> PotentialConfig:
    current = ctx.obj["settings"]
    return PotentialConfig(
        molecule=get_molecule(name, ctx.obj["registry"]),
        alpha=current.default_alpha,
        beta_variant=current.default_beta_variant,
    )


def _number(value: Optional[float], digits: int) -> str:
    return constants.EXCLUDED if value is None else format_number(value, digits)


@click.group()
@click.option("--alpha", type=click.FloatRange(min=0, min_open=True), help="α, 1/ns")
@click.option("--variant", type=click.Choice(VARIANTS), help="Eigenvalue variant")
@click.option("--beta-variant", type=click.Choice(BETA_VARIANTS), help="β definition")
@click.option(
    "--registry", type=click.Path(dir_okay=False, path_type=Path), help="Molecule registry file"
)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="Output directory")
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Env-format file overriding settings and physical constants",
)
@click.option("--log-level", help="Logging level")
@click.pass_context
def cli(ctx, alpha, variant, beta_variant, registry, out, config_file, log_level):
    """Импульсный спектр уравнения Фейнберга-Городецкого для IDEP"""
    current = load_settings(config_file)
    updates = {
        "default_alpha": alpha,
        "default_variant": EigenvalueVariant(variant) if variant else None,
        "default_beta_variant": BetaVariant(beta_variant) if beta_variant else None,
        "registry_path": registry,
        "output_dir": out,
        "log_level": log_level.upper() if log_level else None,
    }
    current = current.model_copy(
        update={key: value for key, value in updates.items() if value is not None}
    )
    logging.basicConfig(level=getattr(logging, current.log_level, logging.INFO))

    ctx.ensure_object(dict)
    ctx.obj["settings"] = current
    ctx.obj["units"] = get_unit_system(current)
    try:
        ctx.obj["registry"] = resolve_registry(current.registry_path)
    except SpectrumException as exc:
        click.echo(f"error: {exc.message}", err=True)
        ctx.exit(exc.exit_code)


@cli.command()
@click.pass_context
@handle_errors
def molecules(ctx):
    """Список молекул реестра"""
    click.echo(",".join(("name", "De", "te", "mu", "t0", "q")))
    for molecule in ctx.obj["registry"]:
        click.echo(
            f"{molecule.name},{molecule.De!r},{molecule.te!r},{molecule.mu!r},"
            f"{molecule.t0!r},{molecule.q!r}"
        )


@cli.command()
@click.argument("molecule")
@click.option("--t", "times", type=float, multiple=True, required=True, help="Time, ns")
@click.pass_context
@handle_errors
def potential(ctx, molecule, times):
    """V(t) в эВ для заданных моментов времени"""
    config = _config(ctx, molecule)
    digits = ctx.obj["settings"].csv_significant_digits
    click.echo("t,V")
    for t in times:
        click.echo(f"{format_number(t, digits)},{format_number(evaluate_potential(config, t), digits)}")


@cli.command(name="spectrum")
@click.argument("molecule")
@click.option("--levels", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--compare", is_flag=True, help="Print every eigenvalue variant")
@click.pass_context
@handle_errors
def spectrum_command(ctx, molecule, levels, compare):
    """Уровни Pn = ±cPn/c выбранного варианта (или всех с --compare)"""
    current = ctx.obj["settings"]
    units = ctx.obj["units"]
    config = _config(ctx, molecule)
    digits = current.csv_significant_digits
    if compare:
        coeffs = derive_coefficients(config, units)
        click.echo(",".join(["n", *VARIANTS]))
        for n in range(levels):
            values = variant_values(coeffs, n, list(EigenvalueVariant))
            cells = [
                _number(
                    None if values[name] is None else to_momentum(values[name], current.momentum_sign),
                    digits,
                )
                for name in VARIANTS
            ]
            click.echo(",".join([str(n), *cells]))
        return

    result = spectrum(
        config, levels, current.default_variant, units, current.momentum_sign
    )
    click.echo("n,cPn,Pn")
    for level in result.levels:
        click.echo(
            f"{level.n},{format_number(level.cPn, digits)},{format_number(level.Pn, digits)}"
        )
    for n in result.excluded:
        click.echo(f"{n},{constants.EXCLUDED},{constants.EXCLUDED}")


@cli.command(name="wavefunction")
@click.option("--n", "n", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--zeta1", type=click.FloatRange(min=0), required=True)
@click.option("--R", "R", type=click.FloatRange(min=0, min_open=True), required=True)
@click.option("--points", type=click.IntRange(min=2), default=11, show_default=True)
@click.pass_context
@handle_errors
def wavefunction_command(ctx, n, zeta1, R, points):
    """Нормированная ψn(s) на внутренних точках (0, 1)"""
    current = ctx.obj["settings"]
    level = synthetic_level(n, zeta1, R)
    spec = make_wavefunction(level, R, current.quadrature_order)
    s = np.linspace(0, 1, points + 2)[1:-1]
    psi = wavefunction(spec, level, s)
    digits = current.csv_significant_digits
    click.echo("s,psi")
    for x, value in zip(s, psi):
        click.echo(f"{format_number(x, digits)},{format_number(value, digits)}")


@cli.command()
@click.option("--kind", type=click.Choice(SCAN_KINDS), required=True)
@click.option("--molecule", "molecule_names", multiple=True, help="Default: whole registry")
@click.option("--start", type=float, required=True)
@click.option("--stop", type=float, required=True)
@click.option("--steps", type=click.IntRange(min=2), default=50, show_default=True)
@click.option("--level", "levels", type=click.IntRange(min=0), multiple=True)
@click.option("--q", type=float, help="Fixed q override")
@click.option("--compare", is_flag=True, help="Scan every eigenvalue variant")
@click.option("--stem", default="scan", show_default=True)
@click.pass_context
@handle_errors
def scan(ctx, kind, molecule_names, start, stop, steps, levels, q, compare, stem):
    """CSV и SVG скана параметров"""
    current = ctx.obj["settings"]
    registry = ctx.obj["registry"]
    fixed = {"alpha": current.default_alpha}
    if q is not None:
        fixed["q"] = q
    request = ScanRequest(
        kind=ScanKind(kind),
        molecules=list(molecule_names) or [molecule.name for molecule in registry],
        sweep=SweepRange(start=start, stop=stop, steps=steps),
        fixed=fixed,
        levels=list(levels) or [0],
        variants=list(EigenvalueVariant) if compare else [current.default_variant],
        output_stem=stem,
    )
    result = run_scan(request, registry, ctx.obj["units"], current, current.output_dir)
    excluded = sum(1 for row in result.rows if row.value is None)
    click.echo(f"{len(result.rows)} rows ({excluded} excluded)")
    click.echo(str(result.csv_path))
    click.echo(str(result.svg_path))


@cli.command()
@click.option("--molecule", "molecule_names", multiple=True, help="Default: whole registry")
@click.option("--levels", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--points", type=click.IntRange(min=constants.MIN_GRID_POINTS), help="Grid override")
@click.option("--stem", default="validation", show_default=True)
@click.pass_context
@handle_errors
def validate(ctx, molecule_names, levels, points, stem):
    """Сравнение вариантов с сеточным оракулом; расхождения не меняют код выхода"""
    current = ctx.obj["settings"]
    report = run_validation(
        list(molecule_names) or None,
        ctx.obj["registry"],
        alpha=current.default_alpha,
        levels=levels,
        num_points=points,
        units=ctx.obj["units"],
        current=current,
        output_dir=current.output_dir,
        stem=stem,
    )
    digits = current.csv_significant_digits
    variant = current.default_variant.value
    click.echo(f"box self-test deviation {format_number(report.box_self_test_deviation, 3)}")
    for row in report.rows:
        status = "ok" if row.agrees.get(variant) else "FLAGGED"
        click.echo(
            f"{row.molecule} n={row.n} {variant}={_number(row.values.get(variant), digits)} "
            f"oracle={format_number(row.oracle, digits)} {status}"
        )
    click.echo(str(report.csv_path))
    click.echo(str(report.ledger_path))


@cli.command()
@click.option("--host", default="0.0.0.0", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.pass_context
def serve(ctx, host, port):
    """JSON API через uvicorn"""
    import uvicorn

    current = ctx.obj["settings"]
    uvicorn.run(
        "main:app",
        host=host,
        port=port,
        reload=current.env == "dev",
        log_level=current.log_level.lower(),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Точка входа; коды выхода 0/1/2"""
    try:
        code = cli.main(args=argv, prog_name="fh", standalone_mode=False)
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK
