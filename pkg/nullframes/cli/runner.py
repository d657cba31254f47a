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

import copy
import logging
from enum import IntEnum
from typing import Dict, List, Sequence, Union

import pendulum

import nullframes
from nullframes.analysis.verdict import CheckResult, Verdict
from nullframes.cli.checks import run_check
from nullframes.hypersurfaces.model import Model
from nullframes.utils.config_utils import RunConfig
from nullframes.utils.json_util import canonical_dumps, sha256_of, write_json_lines
from nullframes.utils.tolerances import Tolerances


class ExitCode(IntEnum):
    ok = 0
    failed = 1
    config_error = 2
    internal_error = 3


class CheckOutcome:
    """ A configured check, its result and whether the expected verdict was met. """

    def __init__(self, spec: Dict, result: CheckResult):
        self.spec = spec
        self.result = result

    @property
    def expect(self) -> Union[str, None]:
        return self.spec.get('expect')

    @property
    def met(self) -> Union[bool, None]:
        if self.expect is None:
            return None
        return self.result.verdict.value == self.expect

    @property
    def failed(self) -> bool:
        if self.result.verdict == Verdict.error:
            return False
        if self.expect is not None:
            return not self.met
        return self.result.verdict == Verdict.failed

    @property
    def errored(self) -> bool:
        return self.result.verdict == Verdict.error

    def to_dict(self) -> Dict:
        dict_ = self.result.to_dict()
        dict_.update({'screen': self.spec.get('screen'), 'field': self.spec.get('field'), 'expect': self.expect,
                      'met': self.met, 'options': self.spec.get('options', dict())})
        return dict_


class Report:
    """ Verdicts and residuals of a run, with the provenance needed to reproduce it. """

    def __init__(self, name: str, variant: Union[str, None], outcomes: List[CheckOutcome], provenance: Dict,
                 generated: Union[pendulum.DateTime, None] = None):
        """ Create a Report.

        :param name: the config name.
        :param variant: the catalog variant, if any.
        :param outcomes: the checks in configured order.
        :param provenance: config hash, seed and package version.
        :param generated: when the report was produced; not part of the body.
        """

        self.name = name
        self.variant = variant
        self.outcomes = outcomes
        self.provenance = provenance
        self.generated = generated if generated is not None else pendulum.now('UTC')

    @property
    def exit_code(self) -> ExitCode:
        if any(outcome.failed for outcome in self.outcomes):
            return ExitCode.failed
        if any(outcome.errored for outcome in self.outcomes):
            return ExitCode.internal_error
        return ExitCode.ok

    def find(self, name: str, screen: Union[str, None] = None) -> List[CheckOutcome]:
        return [o for o in self.outcomes
                if o.spec['name'] == name and (screen is None or o.spec.get('screen') == screen)]

    def body(self) -> Dict:
        return {
            'name': self.name,
            'variant': self.variant,
            'provenance': self.provenance,
            'checks': [outcome.to_dict() for outcome in self.outcomes],
            'exit_code': int(self.exit_code)
        }

    def body_json(self) -> str:
        return canonical_dumps(self.body())

    def save(self, path: str) -> None:
        """ Write the report as JSON, the timestamp next to the body.

        :param path: the output path.
        :return: None.
        """

        with open(path, 'w') as f:
            f.write(canonical_dumps({'generated': self.generated.to_iso8601_string(), 'body': self.body()}))
        logging.info(f'Report written to {path}')

    def samples(self) -> List[Dict]:
        """ One record per check, residual and sample point. """

        records = []
        for number, outcome in enumerate(self.outcomes):
            result = outcome.result
            for key, values in sorted(result.residuals.items()):
                indices = result.indices.get(key, [None] * len(values))
                for index, value in zip(indices, values):
                    records.append({'check': number, 'name': result.name, 'screen': outcome.spec.get('screen'),
                                    'residual': key, 'index': index, 'value': value})
        return records

    def save_samples(self, path: str) -> None:
        write_json_lines(self.samples(), path)
        logging.info(f'Samples written to {path}')


def default_spec(config: RunConfig, name: str) -> Dict:
    """ A check request for a name that the config does not list, on the first screen and field. """

    spec = {'name': name}
    if config.screens:
        spec['screen'] = next(iter(config.screens))
    if config.fields:
        spec['field'] = next(iter(config.fields))
    return spec


def select_checks(config: RunConfig, check_names: Union[Sequence[str], None]) -> List[Dict]:
    if check_names is None:
        return list(config.checks)
    selected = []
    for name in check_names:
        configured = [spec for spec in config.checks if spec['name'] == name]
        selected.extend(configured if configured else [default_spec(config, name)])
    return selected


def run(config: RunConfig, check_names: Union[Sequence[str], None] = None,
        tolerances: Union[Tolerances, None] = None, grid: Union[Sequence[int], None] = None,
        seed: Union[int, None] = None, checks: Union[List[Dict], None] = None) -> Report:
    """ Run the requested checks of a configuration. Errors raised by a check are captured as error verdicts.

    :param config: a valid RunConfig.
    :param check_names: the check names to run, all configured checks by default.
    :param tolerances: overrides the tolerances of the config.
    :param grid: overrides the sample counts per parameter axis.
    :param seed: overrides the seed of the config.
    :param checks: explicit check requests, used instead of the configured ones.
    :return: the Report.
    """

    if grid is not None:
        config = copy.deepcopy(config)
        config.immersion = dict(config.immersion, grid=list(grid))
    seed = config.seed if seed is None else seed
    tolerances = tolerances if tolerances is not None else config.tolerances
    model = Model(config, tolerances)

    outcomes = []
    specs = checks if checks is not None else select_checks(config, check_names)
    for spec in specs:
        try:
            result = run_check(model, spec, seed)
        except Exception as e:
            logging.error(f"run: check {spec['name']!r} raised {type(e).__name__}: {e}")
            result = CheckResult(spec['name'], Verdict.error, message=f'{type(e).__name__}: {e}')
        outcome = CheckOutcome(spec, result)
        logging.info(f"run: {spec['name']} on {spec.get('screen')}/{spec.get('field')}: {result.verdict.value}"
                     + (f' (expected {outcome.expect})' if outcome.expect is not None else ''))
        outcomes.append(outcome)

    document = config.to_dict()
    document['tolerances'] = tolerances.to_dict()
    document['seed'] = seed
    provenance = {'config_sha256': sha256_of(document), 'seed': seed, 'version': nullframes.__version__}
    return Report(config.name, config.variant, outcomes, provenance)
