"""
This module serves as the entry point for the command line verification suites.
"""

import asyncio
import functools
import json
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import click

from . import __version__
from .arith import PTWError
from .kuznetsov import AD, STD_PAIR
from .suites import (
    ORACLE_OPS,
    TATE_FAMILIES,
    basic_vector_suite,
    char_identity_suite,
    conv_suite,
    exchange_suite,
    fundamental_lemma_suite,
    gamma_suite,
    load_measure,
    mellin_suite,
    oracle_suite,
    scattering_suite,
    tate_suite,
    transfer_suite,
)
from .tools import Report, RunConfig, configure_cache, default_config, format_csv, write_csv, write_reports
from .utils import configure_logging, merge_config, print_status

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SuiteRunner = Callable[[RunConfig], List[Report]]

# the default invocation of every suite, for --suite
SUITES: Dict[str, SuiteRunner] = {
    "gamma": lambda cfg: [gamma_suite(cfg)],
    "mellin": lambda cfg: [mellin_suite(cfg)],
    "tate-check": lambda cfg: [tate_suite(cfg)],
    "conv": lambda cfg: [conv_suite(cfg)],
    "basic-vector": lambda cfg: [basic_vector_suite(cfg)],
    "transfer": lambda cfg: [transfer_suite(cfg, "rudnick"), transfer_suite(cfg, "torus")],
    "fundamental-lemma": lambda cfg: [fundamental_lemma_suite(cfg, depth=1)],
    "scattering-table": lambda cfg: scattering_suite(cfg),
    "char-identity": lambda cfg: [char_identity_suite(cfg)],
    "exchange": lambda cfg: [exchange_suite(cfg)],
    "oracle": lambda cfg: [oracle_suite(cfg, op) for op in ("kloosterman", "satake", "spherical")],
}


class FractionType(click.ParamType):
    """A rational number such as ``3``, ``-1/2`` or ``0.25``."""

    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


RATIONAL = FractionType()

prime_option = click.option("--p", "p", type=int, default=None, help="Prime for this suite; overrides --prime.")


def _read_measure(file) -> Optional[object]:
    if file is None:
        return None
    try:
        return load_measure(json.loads(file.read()))
    except (KeyError, TypeError, ValueError, PTWError) as e:
        raise click.BadParameter(f"invalid measure in {file.name}: {e}", param_hint="--input")


def _run_config(ctx: click.Context, p: Optional[int] = None) -> RunConfig:
    overrides = merge_config(ctx.obj["overrides"], {"prime": p})
    return RunConfig.from_config(ctx.obj["config"], suite=ctx.info_name, **overrides)


def _finish(ctx: click.Context, cfg: RunConfig, reports: List[Report], echo: bool = True) -> None:
    """Print and write the reports, then exit with the status of their checks."""
    if echo and not ctx.obj["quiet"]:
        for report in reports:
            click.echo(f"== {report.name} ==")
            click.echo(report.table())
            for key, value in report.notes.items():
                click.echo(f"{key}: {value}")
    for path in write_reports(reports, cfg.to_dict(), cfg.out):
        print_status(f"Wrote {path}")
    failed = [r for r in reports if not r.passed]
    for report in reports:
        if report.passed:
            print_status(f"{report.name}: {len(report.rows)} checks passed", passed=True)
        else:
            print_status(
                f"{report.name}: {len(report.failures())} of {len(report.rows)} checks failed\n"
                f"{report.diff_table()}",
                passed=False,
            )
    ctx.exit(EXIT_FAILED if failed else EXIT_PASSED)


def suite_command(func):
    """Map domain and input errors of a subcommand to the usage exit status."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (PTWError, ValueError) as e:
            print_status(f"{ctx.info_name}: {e}", passed=False)
            ctx.exit(EXIT_USAGE)

    return wrapper


async def _run_suites(names: List[str], cfg: RunConfig) -> List[Report]:
    runs = [asyncio.to_thread(SUITES[name], cfg) for name in names]
    reports = []
    # gather keeps the selection order, whatever order the suites finish in
    for result in await asyncio.gather(*runs):
        reports.extend(result)
    return reports


@click.group(invoke_without_command=True)
@click.option(
    "-c",
    "--config",
    help="Configuration file.",
    nargs=1,
    required=False,
    type=click.File("r", encoding="utf-8"),
)
@click.option("--prime", type=int, default=None, help="The prime p.")
@click.option("--precision", type=int, default=None, help="Maximal coset level.")
@click.option("--regime", type=click.Choice(["symbolic", "numeric"]), default=None, help="Scalar regime.")
@click.option("--tolerance", type=float, default=None, help="Tolerance of numeric comparisons.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory of CSV and JSON reports.")
@click.option(
    "--suite",
    "suites",
    type=click.Choice(sorted(SUITES) + ["all"]),
    multiple=True,
    help="Run the default checks of a suite; repeatable.",
)
@click.option("-q", "--quiet", is_flag=True, help="Print pass/fail lines only.")
@click.option("-v", "--verbose", is_flag=True, help="Show library debug messages.")
@click.version_option(__version__)
@click.pass_context
def main(ctx, config, suites, quiet, verbose, **overrides):
    configure_logging(verbose)
    try:
        user_config = json.loads(config.read()) if config else {}
    except json.JSONDecodeError as e:
        raise click.BadParameter(f"invalid JSON: {e}", param_hint="--config")
    if not isinstance(user_config, dict):
        raise click.BadParameter("expected a JSON object", param_hint="--config")
    merged = merge_config(default_config, user_config)

    oracle_config = merged.get("oracle") or {}
    configure_cache(oracle_config.get("cache"), bool(oracle_config.get("enabled", True)))

    ctx.obj = {"config": merged, "overrides": overrides, "quiet": quiet}
    if ctx.invoked_subcommand is not None:
        return
    if not suites:
        click.echo(ctx.get_help())
        ctx.exit(EXIT_PASSED)
    names = sorted(SUITES) if "all" in suites else list(dict.fromkeys(suites))
    try:
        cfg = RunConfig.from_config(merged, suite=",".join(names), **overrides)
        reports = asyncio.run(_run_suites(names, cfg))
    except (PTWError, ValueError) as e:
        print_status(str(e), passed=False)
        ctx.exit(EXIT_USAGE)
    _finish(ctx, cfg, reports)


@main.command()
@prime_option
@click.option("--conductor", type=int, default=0, show_default=True, help="Conductor of the characters.")
@click.option("--unramified", is_flag=True, help="The unramified character; same as --conductor 0.")
@click.option("--as-ratfunc", is_flag=True, help="Symbolic in z and u whatever the regime.")
@click.pass_context
@suite_command
def gamma(ctx, p, conductor, unramified, as_ratfunc):
    """Tate gamma factors with their L/epsilon decomposition."""
    if unramified and conductor:
        raise click.UsageError("--unramified excludes --conductor")
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [gamma_suite(cfg, conductor, as_ratfunc)])


@main.command()
@prime_option
@click.option("--input", "input_file", type=click.File("r", encoding="utf-8"), help="Extended measure as JSON.")
@click.option("--window", type=int, default=3, show_default=True, help="Shells -window..window are compared.")
@click.pass_context
@suite_command
def mellin(ctx, p, input_file, window):
    """Mellin transform of a measure on Gm and its inverse."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [mellin_suite(cfg, _read_measure(input_file), window)])


@main.command("tate-check")
@prime_option
@click.option("--family", type=click.Choice(TATE_FAMILIES), default="balls", show_default=True)
@click.option("--max-level", type=int, default=2, show_default=True)
@click.option("--max-conductor", type=int, default=2, show_default=True)
@click.pass_context
@suite_command
def tate_check(ctx, p, family, max_level, max_conductor):
    """The local functional equation over a family of ball indicators."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [tate_suite(cfg, family, max_level, max_conductor)])


@main.command()
@prime_option
@click.option("--power", type=int, default=1, show_default=True, help="The power map x -> x^k.")
@click.option("--s", "s", type=int, default=1, show_default=True, help="The twist |x|^s.")
@click.option("--window", type=int, default=3, show_default=True)
@click.option("--input", "input_file", type=click.File("r", encoding="utf-8"), help="Extended measure as JSON.")
@click.pass_context
@suite_command
def conv(ctx, p, power, s, window, input_file):
    """Multiplicative Fourier convolution by shells and by Mellin multipliers."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [conv_suite(cfg, power, s, window, _read_measure(input_file))])


@main.command("basic-vector")
@prime_option
@click.option("--group", type=click.Choice(["sl2", "pgl2"]), default="sl2", show_default=True)
@click.option(
    "--r", "r_tag", type=click.Choice([AD, STD_PAIR], case_sensitive=False), default=AD, show_default=True
)
@click.option("--shells", type=int, default=8, show_default=True)
@click.option("--hecke-depth", type=int, default=0, show_default=True)
@click.pass_context
@suite_command
def basic_vector(ctx, p, group, r_tag, shells, hecke_depth):
    """Basic vectors of the Kuznetsov side against enumerated orbital integrals."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [basic_vector_suite(cfg, group, r_tag, shells, hecke_depth)])


@main.command()
@prime_option
@click.option("--case", type=click.Choice(["rudnick", "torus"]), default="rudnick", show_default=True)
@click.option("--input", "input_file", type=click.File("r", encoding="utf-8"), help="Extended measure as JSON.")
@click.option("--window", type=int, default=3, show_default=True)
@click.pass_context
@suite_command
def transfer(ctx, p, case, input_file, window):
    """Transfer operators from the Kuznetsov side."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [transfer_suite(cfg, case, _read_measure(input_file), window)])


@main.command("fundamental-lemma")
@prime_option
@click.option("--depth", type=int, default=0, show_default=True, help="Largest Hecke double coset.")
@click.option("--max-level", type=int, default=2, show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Also write the CSV here.")
@click.pass_context
@suite_command
def fundamental_lemma(ctx, p, depth, max_level, report_path):
    """T(h f_{L(Ad, 1)}) against zeta(2) times the trace pushforward of h."""
    cfg = _run_config(ctx, p)
    report = fundamental_lemma_suite(cfg, depth, max_level)
    if report_path:
        write_csv(report, report_path)
    _finish(ctx, cfg, [report])


@main.command("scattering-table")
@prime_option
@click.option(
    "--case", type=click.Choice(["all", "whittaker", "torus", "group"]), default="all", show_default=True
)
@click.option("--z-samples", type=int, default=8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table", show_default=True)
@click.pass_context
@suite_command
def scattering_table(ctx, p, case, z_samples, fmt):
    """Scattering operators and Plancherel densities at unitary parameters."""
    cfg = _run_config(ctx, p)
    reports = scattering_suite(cfg, case, z_samples)
    if fmt == "csv":
        for report in reports:
            click.echo(format_csv(report), nl=False)
    elif fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True))
    _finish(ctx, cfg, reports, echo=fmt == "table")


@main.command("char-identity")
@prime_option
@click.option("--depth", type=int, default=2, show_default=True)
@click.pass_context
@suite_command
def char_identity(ctx, p, depth):
    """Stable pairings of T f against Bessel characters of f."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [char_identity_suite(cfg, depth)])


@main.command()
@prime_option
@click.option("--max-level", type=int, default=1, show_default=True)
@click.pass_context
@suite_command
def exchange(ctx, p, max_level):
    """Radon and Jacquet exchange relations with the Fourier transform of the plane."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [exchange_suite(cfg, max_level)])


@main.command()
@prime_option
@click.option("--op", type=click.Choice(ORACLE_OPS), required=True)
@click.option("--k", type=int, default=2, show_default=True, help="Mesh or modulus exponent.")
@click.option("--center", type=RATIONAL, default="0", show_default=True)
@click.option("--level", type=int, default=1, show_default=True)
@click.option("--depth", type=int, default=1, show_default=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.pass_context
@suite_command
def oracle(ctx, p, op, k, center, level, depth, a, b):
    """Brute-force finite enumerations."""
    cfg = _run_config(ctx, p)
    _finish(ctx, cfg, [oracle_suite(cfg, op, k, center, level, depth, a, b)])


if __name__ == "__main__":
    main()
