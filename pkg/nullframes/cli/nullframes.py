# Copyright 2020 Curtin University
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import logging
import os
import sys
from textwrap import indent
from typing import Dict, List, Union

import click

from nullframes.catalog.entries import dump, entries, entry, variants
from nullframes.cli.runner import ExitCode, Report, default_spec, run
from nullframes.errors import CatalogError, ConfigError, ExportError
from nullframes.hypersurfaces.model import Model
from nullframes.utils.config_utils import CHECK_NAMES, RunConfig
from nullframes.utils.json_util import canonical_dumps

CATALOG_PREFIX = 'catalog:'
LEMMAS = {
    'components': 'components',
    'codazzi': 'codazzi',
    'eqgrads': 'eqgrads',
    'cpd': 'cpd',
    'principal': 'principal',
    'qc-screen': 'qc_screen',
    'flat-screen': 'flat_screen',
    'cmc': 'cmc',
    'nonmetric': 'nonmetric'
}
INDENT1 = 2
INDENT2 = 4


@click.group()
def cli():
    """ The nullframes command line tool.

    COMMAND: the commands to run include:\n
      - validate: check a configuration and the frames it describes.\n
      - shape, angle, verify: run groups of checks.\n
      - run: run every configured check.\n
      - catalog: list or dump the shipped hypersurfaces.\n
      - export: write plot data and charts.\n

    CONFIG is a JSON file or catalog:<name>[:<variant>].
    """

    pass


def load_run_config(source: str, strict: bool = True) -> RunConfig:
    """ Load a configuration from a JSON file or from the catalog.

    :param source: a path or catalog:<name>[:<variant>].
    :param strict: reject unknown keys.
    :return: the valid RunConfig.
    """

    if source.startswith(CATALOG_PREFIX):
        parts = source[len(CATALOG_PREFIX):].split(':')
        return entry(parts[0], parts[1] if len(parts) > 1 else None).to_config()
    if not os.path.isfile(source):
        raise ConfigError(f'no such file: {source}')
    config = RunConfig.load(source, strict=strict)
    if config is None:
        raise ConfigError(f'{source} could not be parsed')
    if not config.is_valid:
        raise ConfigError(f'{source} is invalid', config.errors)
    return config


def parse_grid(grid: Union[str, None]) -> Union[List[int], None]:
    if grid is None:
        return None
    try:
        return [int(n) for n in grid.lower().split('x')]
    except ValueError:
        raise ConfigError(f'grid {grid!r} is not of the form NxM')


def print_errors(errors: Dict, level: int = INDENT1):
    for key, value in errors.items():
        print(indent(f'- {key}: {value}', ' ' * level))


def print_report(report: Report):
    print(f'{report.name}' + (f' ({report.variant})' if report.variant else ''))
    for outcome in report.outcomes:
        result = outcome.result
        where = '/'.join(str(v) for v in [outcome.spec.get('screen'), outcome.spec.get('field')] if v is not None)
        expected = '' if outcome.expect is None else f" expected {outcome.expect}{'' if outcome.met else ' (NOT MET)'}"
        print(indent(f'- {result.name} {where}: {result.verdict.value}{expected}', ' ' * INDENT1))
        if result.message:
            print(indent(result.message, ' ' * INDENT2))
        for key, stats in result.summary().items():
            if stats is not None:
                print(indent(f"{key}: max {stats['max']:.3e} mean {stats['mean']:.3e} p95 {stats['p95']:.3e}",
                             ' ' * INDENT2))
    print(f'exit code: {int(report.exit_code)}')


def common_options(function):
    options = [
        click.argument('config', type=click.STRING),
        click.option('--tol-exact', type=click.FLOAT, default=None, help='Tolerance for quantities from jets only.'),
        click.option('--tol-fd', type=click.FLOAT, default=None, help='Tolerance for finite difference quantities.'),
        click.option('--seed', type=click.INT, default=None, help='Seed for randomized checks.'),
        click.option('--grid', type=click.STRING, default=None, help='Samples per parameter axis, e.g. 16x16.'),
        click.option('--strict/--no-strict', default=True, help='Reject unknown configuration keys.'),
        click.option('--verbose', is_flag=True, default=False, help='Log at INFO level.'),
        click.option('--report-path', type=click.Path(dir_okay=False), default=None, help='Write the JSON report.'),
        click.option('--samples-path', type=click.Path(dir_okay=False), default=None,
                     help='Write per sample residuals as JSON lines.')
    ]
    for option in reversed(options):
        function = option(function)
    return function


def requested_check(config: RunConfig, name: str, screen: Union[str, None], field: Union[str, None]) -> Dict:
    """ The configured request for a check on a screen and field, or a bare one when none is configured. """

    for spec in config.checks:
        if spec['name'] == name and (screen is None or spec.get('screen') == screen) \
                and (field is None or spec.get('field') == field):
            return spec
    spec = default_spec(config, name)
    if screen is not None:
        spec['screen'] = screen
    if field is not None:
        spec['field'] = field
    return spec


def setup_logging(verbose: bool):
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    logging.getLogger().setLevel(logging.INFO if verbose else logging.WARNING)


def execute(config_source: str, names: Union[List[str], None], screen: Union[str, None], field: Union[str, None],
            tol_exact, tol_fd, seed, grid, strict, verbose, report_path, samples_path) -> Report:
    """ Load a configuration, run checks, print and save the report, and exit with the report's code.

    :return: the report, when exiting is left to the caller.
    """

    setup_logging(verbose)
    try:
        config = load_run_config(config_source, strict)
        checks = None
        if names is not None and (screen is not None or field is not None):
            checks = [requested_check(config, name, screen, field) for name in names]
        tolerances = config.tolerances.replace(tol_exact=tol_exact, tol_fd=tol_fd)
        report = run(config, names, tolerances=tolerances, grid=parse_grid(grid), seed=seed, checks=checks)
    except (ConfigError, CatalogError, ValueError, ArithmeticError) as e:
        print(f'Configuration error: {e}')
        if isinstance(e, ConfigError) and e.errors:
            print_errors(e.errors)
        sys.exit(int(ExitCode.config_error))

    print_report(report)
    if report_path is not None:
        report.save(report_path)
        print(f'Report saved to: "{report_path}"')
    if samples_path is not None:
        report.save_samples(samples_path)
        print(f'Samples saved to: "{samples_path}"')
    sys.exit(int(report.exit_code))


@cli.command()
@common_options
def validate(config, tol_exact, tol_fd, seed, grid, strict, verbose, report_path, samples_path):
    """ Validate CONFIG against the schema and check every screen's frame at every grid point. """

    setup_logging(verbose)
    try:
        run_config = load_run_config(config, strict)
    except (ConfigError, CatalogError) as e:
        print(f'Configuration error: {e}')
        if isinstance(e, ConfigError) and e.errors:
            print_errors(e.errors)
        sys.exit(int(ExitCode.config_error))
    print(f'{config}: file valid')
    names = ['validate_frame']
    checks = [{'name': 'validate_frame', 'screen': screen} for screen in run_config.screens]
    tolerances = run_config.tolerances.replace(tol_exact=tol_exact, tol_fd=tol_fd)
    try:
        report = run(run_config, names, tolerances=tolerances, grid=parse_grid(grid), seed=seed, checks=checks)
    except (ConfigError, ValueError, ArithmeticError) as e:
        print(f'Configuration error: {e}')
        sys.exit(int(ExitCode.config_error))
    print_report(report)
    if report_path is not None:
        report.save(report_path)
    sys.exit(int(report.exit_code))


@cli.command()
@common_options
@click.option('--screen', type=click.STRING, default=None, help='The screen to analyse.')
def shape(config, screen, **kwargs):
    """ Shape operators of CONFIG: duality, integrability and umbilicity. """

    execute(config, ['shape', 'integrability', 'umbilic'], screen, None, **kwargs)


@cli.command()
@common_options
@click.option('--screen', type=click.STRING, default=None, help='The screen to analyse.')
@click.option('--field', type=click.STRING, default=None, help='The vector field the angle is taken with.')
def angle(config, screen, field, **kwargs):
    """ Constant angle test and gauge invariance of the angle product. """

    execute(config, ['constant_angle', 'gauge_invariance'], screen, field, **kwargs)


@cli.command()
@common_options
@click.option('--lemma', type=click.Choice(list(LEMMAS)), required=True, help='The result to verify.')
@click.option('--screen', type=click.STRING, default=None, help='The screen to use.')
@click.option('--field', type=click.STRING, default=None, help='The closed conformal field to use.')
def verify(config, lemma, screen, field, **kwargs):
    """ Verify one structural result on CONFIG. """

    execute(config, [LEMMAS[lemma]], screen, field, **kwargs)


@cli.command(name='run')
@common_options
@click.option('--check', 'names', type=click.Choice(CHECK_NAMES),
              multiple=True, help='Run only these checks.')
def run_command(config, names, **kwargs):
    """ Run the checks configured in CONFIG and compare them with their expected verdicts. """

    execute(config, list(names) if names else None, None, None, **kwargs)


@cli.group()
def catalog():
    """ The shipped null hypersurfaces. """

    pass


@catalog.command(name='list')
def catalog_list():
    """ List the catalog entries and their variants. """

    for name in entries():
        print(name)
        for variant in variants(name):
            print(indent(f'- {variant}', ' ' * INDENT1))


@catalog.command(name='dump')
@click.argument('name', type=click.STRING)
@click.option('--variant', type=click.STRING, default=None, help='The variant, the first one by default.')
@click.option('--output', type=click.Path(dir_okay=False), default=None, help='Write to a file instead of stdout.')
def catalog_dump(name, variant, output):
    """ Print a catalog entry as a run configuration. """

    try:
        document = dump(entry(name, variant))
    except CatalogError as e:
        print(f'Catalog error: {e}')
        sys.exit(int(ExitCode.config_error))
    if output is None:
        print(canonical_dumps(document))
    else:
        with open(output, 'w') as f:
            json.dump(document, f, indent=2, sort_keys=True)
        print(f'Configuration saved to: "{output}"')


@cli.command()
@common_options
@click.option('--what', type=click.STRING, multiple=True, default=['all'],
              help='all, frame or a check name; repeat for several.')
@click.option('--output', type=click.Path(dir_okay=False), required=True, help='The CSV path.')
@click.option('--screen', type=click.STRING, default=None, help='The screen for the frame columns.')
@click.option('--chart', type=click.Path(dir_okay=False), default=None, help='Also draw the frame as a PNG.')
def export(config, what, output, screen, chart, tol_exact, tol_fd, seed, grid, strict, verbose, report_path,
           samples_path):
    """ Run CONFIG and write plot data as CSV, with a sidecar column file. """

    import matplotlib
    matplotlib.use('Agg')
    from nullframes.reports.charts import FrameMeshChart
    from nullframes.reports.plotdata import export_plotdata
    import pandas as pd

    setup_logging(verbose)
    try:
        run_config = load_run_config(config, strict)
        tolerances = run_config.tolerances.replace(tol_exact=tol_exact, tol_fd=tol_fd)
        grid_counts = parse_grid(grid)
        report = run(run_config, tolerances=tolerances, grid=grid_counts, seed=seed)
        if grid_counts is not None:
            run_config.immersion = dict(run_config.immersion, grid=grid_counts)
        model = Model(run_config, tolerances)
        columns = export_plotdata(report, list(what), output, model=model, screen=screen)
    except ExportError as e:
        print(f'Export error: {e}')
        sys.exit(int(ExitCode.failed))
    except (ConfigError, CatalogError, ValueError, ArithmeticError) as e:
        print(f'Configuration error: {e}')
        sys.exit(int(ExitCode.config_error))
    print(f'Plot data saved to: "{output}" ({len(columns)} columns)')
    if chart is not None:
        FrameMeshChart(pd.read_csv(output)).save(chart)
        print(f'Chart saved to: "{chart}"')
    if report_path is not None:
        report.save(report_path)
    if samples_path is not None:
        report.save_samples(samples_path)
