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

import logging
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, decide, grid_points
from nullframes.errors import NullFieldError
from nullframes.geometry.ambient import VectorField
from nullframes.hypersurfaces.frames import FrameSample, GaugedFrameField, NullFrameField, normalizing_gauge
from nullframes.utils.tolerances import Tolerances


def field_angles(sample: FrameSample, V: VectorField, floor: float = 1e-9) -> Dict[str, float]:
    """ Angles of a nowhere null field with the radical and the transversal at one frame sample.

    :param sample: the frame sample.
    :param V: the field.
    :param floor: |g(V, V)| at or below floor * max(|V|^2, 1) counts as null.
    :return: angle_xi, angle_n, their product q, the screen ratio g(V*, V*) / |V|^2 and the sign of g(V, V).
    """

    v = V(sample.x)
    norm_sq = sample.inner(v, v)
    if abs(norm_sq) <= floor * max(float(v @ v), 1.0):
        raise NullFieldError(f'field {V.name!r} is null at {list(sample.u)}')
    norm = np.sqrt(abs(norm_sq))
    angle_xi = sample.inner(v, sample.xi) / norm
    angle_n = sample.inner(v, sample.N) / norm
    vstar = sample.screen_coordinates(v)
    return {
        'angle_xi': angle_xi,
        'angle_n': angle_n,
        'q': angle_xi * angle_n,
        'screen_ratio': float(vstar @ vstar) / abs(norm_sq),
        'eps': float(np.sign(norm_sq))
    }


def relative_spread(values: Sequence[float], tol_rel: float, floor: float) -> Tuple[float, float, bool]:
    """ Spread max - min of a series and whether it counts as constant: spread <= tol_rel * (|mean| + floor).

    :return: the spread, the bound and the verdict. An empty series is constant.
    """

    if len(values) == 0:
        return 0.0, 0.0, True
    array = np.asarray(values, dtype=float)
    spread = float(np.max(array) - np.min(array))
    bound = tol_rel * (abs(float(np.mean(array))) + floor)
    return spread, bound, spread <= bound


class AngleReport:
    """ Per sample angles of a field with a null frame and the three equivalent constancy criteria. """

    def __init__(self, field: str, indices: List[int], angles: List[Dict[str, float]], gauged: List[Dict[str, float]],
                 excluded: List[Tuple[int, str]], tolerances: Tolerances):
        self.field = field
        self.indices = indices
        self.angles = angles
        self.gauged = gauged
        self.excluded = excluded
        self.tolerances = tolerances

    def series(self, key: str) -> List[float]:
        return [a[key] for a in self.angles]

    def identity_residuals(self) -> List[float]:
        return [abs(a['eps'] - 2.0 * a['q'] - a['screen_ratio']) for a in self.angles]

    def spread(self, key: str) -> Tuple[float, float, bool]:
        return relative_spread(self.series(key), self.tolerances.tol_rel, self.tolerances.floor)

    def frame_criterion(self) -> Tuple[bool, str]:
        """ Whether some gauge makes both angles constant. With the normalizing gauge the radical angle is 1 and the
        transversal angle equals q, so the criterion reduces to constancy of the gauged transversal angle.

        :return: the verdict and how it was reached.
        """

        floor = self.tolerances.floor
        zero = [abs(a) <= floor for a in self.series('angle_xi')]
        if all(zero):
            return True, 'radical angle vanishes identically'
        if any(zero):
            return False, 'radical angle vanishes at some samples only'
        angle_xi = [g['angle_xi'] for g in self.gauged]
        angle_n = [g['angle_n'] for g in self.gauged]
        tol = self.tolerances
        normalized = max(abs(a - 1.0) for a in angle_xi) <= tol.tol_exact * 10.0
        constant = relative_spread(angle_n, tol.tol_rel, tol.floor)[2]
        return normalized and constant, 'normalizing gauge'

    def criteria(self) -> Dict[str, bool]:
        return {
            'frame_gauge': self.frame_criterion()[0],
            'product': self.spread('q')[2],
            'screen_ratio': self.spread('screen_ratio')[2]
        }

    @property
    def constant(self) -> bool:
        return all(self.criteria().values())

    @property
    def agree(self) -> bool:
        return len(set(self.criteria().values())) == 1

    def to_dict(self) -> Dict:
        summary = dict()
        for key in ['angle_xi', 'angle_n', 'q', 'screen_ratio']:
            spread, bound, constant = self.spread(key)
            values = self.series(key)
            summary[key] = {'spread': spread, 'bound': bound, 'constant': constant,
                            'mean': float(np.mean(values)) if values else None}
        return {'field': self.field, 'criteria': self.criteria(), 'agree': self.agree, 'summary': summary,
                'frame_criterion': self.frame_criterion()[1], 'indices': self.indices}


def angle_report(frame: NullFrameField, V: VectorField,
                 grid: Union[Sequence[Sequence[float]], None] = None) -> AngleReport:
    """ Evaluate the angles of V on a frame over a set of points.

    :param frame: the frame field.
    :param V: a nowhere null field.
    :param grid: the sample points, the immersion grid by default.
    :return: the AngleReport.
    """

    tolerances = frame.tolerances
    gauged_frame = GaugedFrameField(frame, normalizing_gauge(V), name='normalized', check_grid=False)
    indices, angles, gauged, excluded = [], [], [], []
    for index, u in grid_points(frame, grid):
        try:
            a = field_angles(frame.at(u), V, tolerances.floor)
            b = field_angles(gauged_frame.at(u), V, tolerances.floor) if abs(a['angle_xi']) > tolerances.floor else None
        except SAMPLE_ERRORS as e:
            logging.warning(f'angle_report: point {index} excluded: {e}')
            excluded.append((index, str(e)))
            continue
        indices.append(index)
        angles.append(a)
        if b is not None:
            gauged.append(b)
    return AngleReport(V.name, indices, angles, gauged, excluded, tolerances)


def constant_angle_test(frame: NullFrameField, V: VectorField,
                        grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ Decide whether the hypersurface has constant angle with respect to V on the given frame.

    The verdict is pass when the product of the angles is constant, and the gauge and screen ratio criteria agree
    with it.

    :param frame: the frame field.
    :param V: a nowhere null field.
    :param grid: the sample points.
    :return: the CheckResult, with the AngleReport under values['report'].
    """

    report = angle_report(frame, V, grid)
    result = CheckResult('constant_angle', excluded=report.excluded)
    result.residuals['identity'] = report.identity_residuals()
    result.indices['identity'] = list(report.indices)
    for key in ['angle_xi', 'angle_n', 'q', 'screen_ratio']:
        result.residuals[key] = report.series(key)
        result.indices[key] = list(report.indices)
    result.values['report'] = report.to_dict()
    if not report.agree:
        logging.warning(f'constant_angle_test: criteria disagree for {V.name!r}: {report.criteria()}')
    identity_ok = max(result.residuals['identity'], default=0.0) <= frame.tolerances.tol_exact * 10.0
    return decide(result, report.constant and identity_ok,
                  '' if report.agree else 'constancy criteria disagree')


def random_gauges(dim: int, count: int, seed: int = 0) -> List:
    """ Positive gauges c (1 + sin(k . u + d) / 2) with seeded random c, k and d.

    :param dim: the parameter dimension.
    :param count: the number of gauges.
    :param seed: the random seed.
    :return: gauge callables of (u, sample).
    """

    rng = np.random.default_rng(seed)
    gauges = []
    for _ in range(count):
        c = rng.uniform(0.5, 2.0)
        k = rng.uniform(-1.0, 1.0, dim)
        d = rng.uniform(0.0, 2.0 * np.pi)

        def gauge(u, sample, c=c, k=k, d=d):
            return c * (1.0 + 0.5 * np.sin(k @ np.asarray(u) + d))

        gauges.append(gauge)
    return gauges


def gauge_invariance_check(frame: NullFrameField, V: VectorField, f_samples: Union[Sequence, None] = None,
                           grid: Union[Sequence[Sequence[float]], None] = None, count: int = 20,
                           seed: int = 0) -> CheckResult:
    """ Maximum deviation of the angle product under rescalings of the frame.

    :param frame: the frame field.
    :param V: a nowhere null field.
    :param f_samples: the gauges to try; seeded random positive gauges by default.
    :param grid: the sample points.
    :param count: the number of random gauges.
    :param seed: the random seed.
    :return: the CheckResult; pass when the deviation is within tol_exact.
    """

    tolerances = frame.tolerances
    if f_samples is None:
        f_samples = random_gauges(len(frame.immersion.parameters), count, seed)
    gauged_frames = [GaugedFrameField(frame, f, name=f'gauge{i}', check_grid=False) for i, f in enumerate(f_samples)]
    normalized = GaugedFrameField(frame, normalizing_gauge(V), name='normalized', check_grid=False)

    result = CheckResult('gauge_invariance')
    for index, u in grid_points(frame, grid):
        result.point(index)
        try:
            q = field_angles(frame.at(u), V, tolerances.floor)['q']
            deviation = 0.0
            for gauged in gauged_frames:
                deviation = max(deviation, abs(field_angles(gauged.at(u), V, tolerances.floor)['q'] - q))
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        result.add('deviation', deviation)
        try:
            angles = field_angles(normalized.at(u), V, tolerances.floor)
            result.add('normalized_angle_xi', abs(angles['angle_xi'] - 1.0))
            result.add('normalized_q', abs(angles['q'] - q))
        except SAMPLE_ERRORS:
            result.add('normalized_angle_xi', None)
            result.add('normalized_q', None)
    result.values['gauges'] = len(f_samples)
    return decide(result, result.worst('deviation') <= tolerances.tol_exact)
