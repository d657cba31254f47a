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

from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.errors import DegeneracyError, FrameError, GaugeError, ImmersionError, NullFieldError, StencilError
from nullframes.hypersurfaces.frames import NullFrameField


class Verdict(Enum):
    passed = 'pass'
    failed = 'fail'
    inapplicable = 'inapplicable'
    error = 'error'


def summary_stats(values: Sequence[float]) -> Union[Dict[str, float], None]:
    """ Max, mean and 95th percentile of a residual series, ignoring non finite entries.

    :param values: the residuals.
    :return: the statistics, or None for an empty series.
    """

    array = np.asarray([v for v in values if v is not None], dtype=float)
    array = array[np.isfinite(array)]
    if array.size == 0:
        return None
    return {'max': float(np.max(array)), 'mean': float(np.mean(array)), 'p95': float(np.percentile(array, 95))}


def within(value: float, tol: float, scale: float = 1.0) -> bool:
    """ Whether a residual is below tol relative to max(1, scale). """

    return bool(np.isfinite(value)) and value <= tol * max(1.0, abs(scale))


class CheckResult:
    """ The outcome of one check over a set of sample points. """

    def __init__(self, name: str, verdict: Verdict = Verdict.passed, residuals: Union[Dict[str, List], None] = None,
                 values: Union[Dict[str, Any], None] = None, excluded: Union[List[Tuple[int, str]], None] = None,
                 message: str = ''):
        """ Create a CheckResult.

        :param name: the check name.
        :param verdict: the verdict.
        :param residuals: per sample series keyed by residual name, in grid order.
        :param values: scalar or per sample values that are not residuals.
        :param excluded: (grid index, reason) for every sample the check skipped.
        :param message: a short explanation, mandatory for inapplicable verdicts.
        """

        self.name = name
        self.verdict = verdict
        self.residuals = residuals if residuals is not None else dict()
        self.values = values if values is not None else dict()
        self.excluded = excluded if excluded is not None else []
        self.message = message
        self.indices = dict()
        self._index = None

    @staticmethod
    def inapplicable(name: str, message: str, **kwargs) -> 'CheckResult':
        return CheckResult(name, Verdict.inapplicable, message=message, **kwargs)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.passed

    def point(self, index: int) -> None:
        """ Set the grid index that subsequent residuals belong to. """

        self._index = index

    def add(self, key: str, value: Union[float, None]) -> None:
        self.residuals.setdefault(key, []).append(value)
        self.indices.setdefault(key, []).append(self._index)

    def worst(self, key: str) -> float:
        stats = summary_stats(self.residuals.get(key, []))
        return stats['max'] if stats is not None else 0.0

    def summary(self) -> Dict[str, Union[Dict[str, float], None]]:
        return {key: summary_stats(values) for key, values in sorted(self.residuals.items())}

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'verdict': self.verdict.value,
            'message': self.message,
            'summary': self.summary(),
            'residuals': {key: [None if v is None else float(v) for v in values]
                          for key, values in sorted(self.residuals.items())},
            'values': self.values,
            'excluded': [[index, reason] for index, reason in self.excluded],
            'indices': {key: list(values) for key, values in sorted(self.indices.items())}
        }


def decide(result: CheckResult, ok: bool, message: str = '') -> CheckResult:
    """ Set a pass or fail verdict, or inapplicable when every sample was excluded. """

    if not any(len(v) for v in result.residuals.values()) and result.excluded:
        result.verdict = Verdict.inapplicable
        result.message = message or 'every sample was excluded'
    else:
        result.verdict = Verdict.passed if ok else Verdict.failed
        result.message = message
    return result


def overall(verdicts: Sequence[Verdict]) -> Verdict:
    """ Combine verdicts: any failure fails, otherwise any error errors, otherwise pass. """

    if Verdict.failed in verdicts:
        return Verdict.failed
    if Verdict.error in verdicts:
        return Verdict.error
    return Verdict.passed


SAMPLE_ERRORS = (FrameError, StencilError, DegeneracyError, ImmersionError, GaugeError, NullFieldError, ArithmeticError,
                 np.linalg.LinAlgError)


def grid_points(frame: NullFrameField, grid: Union[Sequence[Sequence[float]], None] = None) \
        -> List[Tuple[int, np.ndarray]]:
    """ Indexed sample points: the given points, or the immersion grid in row major order. """

    points = frame.immersion.grid_points() if grid is None else grid
    return [(index, np.asarray(u, dtype=float)) for index, u in enumerate(points)]
