import io
import logging
import sys
from pathlib import Path

# ──────────────────────────────────────────────────────────────
# UTF-8 fix (prevents UnicodeEncodeError on Windows terminals)
# ──────────────────────────────────────────────────────────────
if hasattr(sys.stdout, "buffer") and sys.stdout.encoding != "utf-8":
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding="utf-8", errors="replace")

if hasattr(sys.stderr, "buffer") and sys.stderr.encoding != "utf-8":
    sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding="utf-8", errors="replace")

# ──────────────────────────────────────────────────────────────
# sys.path fix (allows `from sympgrass.xxx import` when run directly)
# ──────────────────────────────────────────────────────────────
_project_root = str(Path(__file__).resolve().parent.parent)
if _project_root not in sys.path:
    sys.path.insert(0, _project_root)

import click

from sympgrass.config import LOG_LEVEL, default_output_path, make_config, parse_tolerances
from sympgrass.engine.errors import SympGrassError, UsageError
from sympgrass.engine.suites import describe_suites, run_suite, suite_names


# ──────────────────────────────────────────────────────────────
# Logging
# ──────────────────────────────────────────────────────────────
def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


# ──────────────────────────────────────────────────────────────
# Commands
# ──────────────────────────────────────────────────────────────
class SuiteGroup(click.Group):
    """Unknown commands fall through to `run <suite>` so `sympgrass charts ...` works."""

    def resolve_command(self, ctx, args):
        if args and args[0] not in self.commands and not args[0].startswith("-"):
            return super().resolve_command(ctx, ["run", *args])
        return super().resolve_command(ctx, args)


@click.group(cls=SuiteGroup)
def cli():
    """Lagrangian Grassmannian orbit experiments."""


@cli.command("list")
def list_suites():
    """Print the suite names with their defaults."""
    for name, description, trials, n in describe_suites():
        click.echo(f"{name:<18} trials={trials:<4} n≤{n:<3} {description}")


@cli.command("run")
@click.argument("suite")
@click.option("--n", "n", type=int, default=None, help="Largest half-dimension (suite default if omitted).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=None, help="Trial count (suite default if omitted).")
@click.option("--grid", "grid_points", type=int, default=None, help="Samples per curve.")
@click.option("--tol", "tol", multiple=True, metavar="KEY=VAL", help="Override a named tolerance.")
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="JSON report path (default $SYMPGRASS_OUT_DIR/<suite>.json).")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--jobs", type=int, default=None, help="Concurrent trial workers.")
@click.option("--verbose", is_flag=True, default=False)
def run(suite, n, seed, trials, grid_points, tol, out, csv_path, jobs, verbose):
    """Run one suite; exit status 0 iff every check passed."""
    _configure_logging(verbose)
    try:
        if suite not in suite_names():
            raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(suite_names())}")
        fields = dict(
            n=n, seed=seed, trials=trials, grid_points=grid_points,
            tolerances=parse_tolerances(tol),
            output_path=out or default_output_path(suite), csv_path=csv_path,
        )
        if jobs is not None:
            fields["jobs"] = jobs
        report = run_suite(suite, make_config(**fields))
    except UsageError as exc:
        raise click.UsageError(str(exc))
    except SympGrassError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    status = "PASS" if report.passed else "FAIL"
    click.echo(f"{report.name}: {status}  ({int(report.metrics['failed_trials'])} of "
               f"{int(report.metrics['trials'])} trials failed)")
    sys.exit(0 if report.passed else 1)


def main():
    cli()


if __name__ == "__main__":
    main()
