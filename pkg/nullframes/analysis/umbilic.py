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
from typing import Dict, Sequence, Union

import numpy as np

from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, decide, grid_points, within
from nullframes.geometry.ambient import VectorField, cc_test
from nullframes.hypersurfaces.frames import NullFrameField
from nullframes.shape.calculus import conformal_factor, shape_operators, split_field


class UmbilicLabel(Enum):
    totally_geodesic = 'totally_geodesic'
    totally_umbilical = 'totally_umbilical'
    screen_geodesic = 'screen_geodesic'
    screen_umbilical = 'screen_umbilical'
    none = 'none'


def umbilic_deviation(A: np.ndarray) -> Dict[str, float]:
    """ Norm of an operator and distance from the nearest multiple of the identity.

    :param A: the operator on the screen basis.
    :return: lambda = trace / n, the deviation |A - lambda Id| and |A|.
    """

    n = A.shape[0]
    lam = float(np.trace(A)) / n if n else 0.0
    return {'lambda': lam, 'deviation': float(np.linalg.norm(A - lam * np.eye(n), 2)) if n else 0.0,
            'norm': float(np.linalg.norm(A, 2)) if n else 0.0}


def umbilic_classifier(frame: NullFrameField, grid: Union[Sequence[Sequence[float]], None] = None,
                       label: Union[str, None] = None) -> CheckResult:
    """ Classify the hypersurface by A*_xi and the screen by A_N against multiples of the identity.

    The label is the hypersurface class when it is not 'none', otherwise the screen class.

    :param frame: the frame field.
    :param grid: the sample points.
    :param label: an expected label; the verdict fails when the computed label differs.
    :return: the CheckResult with the classes and per sample lambda estimates.
    """

    tol = frame.tolerances.tol_fd
    result = CheckResult('umbilic')
    for index, u in grid_points(frame, grid):
        result.point(index)
        try:
            shape = shape_operators(frame, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        star = umbilic_deviation(shape.A_star)
        transversal = umbilic_deviation(shape.A_N)
        result.add('A_star_norm', star['norm'])
        result.add('A_star_deviation', star['deviation'])
        result.add('A_N_norm', transversal['norm'])
        result.add('A_N_deviation', transversal['deviation'])
        result.values.setdefault('lambda_star', []).append(star['lambda'])
        result.values.setdefault('lambda_N', []).append(transversal['lambda'])

    def holds(key: str) -> bool:
        return bool(result.residuals.get(key)) and all(within(v, tol) for v in result.residuals[key])

    if holds('A_star_norm'):
        hypersurface = UmbilicLabel.totally_geodesic
    elif holds('A_star_deviation'):
        hypersurface = UmbilicLabel.totally_umbilical
    else:
        hypersurface = UmbilicLabel.none
    if holds('A_N_norm'):
        screen = UmbilicLabel.screen_geodesic
    elif holds('A_N_deviation'):
        screen = UmbilicLabel.screen_umbilical
    else:
        screen = UmbilicLabel.none
    computed = hypersurface if hypersurface != UmbilicLabel.none else screen

    result.values['hypersurface'] = hypersurface.value
    result.values['screen'] = screen.value
    result.values['label'] = computed.value
    ok = label is None or UmbilicLabel(label) == computed
    return decide(result, ok, '' if ok else f'expected {label}, classified {computed.value}')


def totally_umbilical_corollary(frame: NullFrameField, Z: VectorField,
                                grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ For a closed conformal Z with Z* = 0: when g(Z, xi) = 0 the hypersurface is totally umbilical with
    A*_xi = -(phi / g(Z, N)) Id, and when g(Z, N) = 0 the screen is totally umbilical with A_N = -(phi / g(Z, xi)) Id.

    :param frame: the frame field.
    :param Z: the field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable when neither case holds at every point.
    """

    name = 'totally_umbilical'
    tolerances = frame.tolerances
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tolerances.tol_fd,
                 floor=tolerances.floor)
    if not cc.is_cc:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal')

    result = CheckResult(name)
    cases = set()
    for index, u in points:
        result.point(index)
        try:
            split = split_field(frame, Z, u)
            small = tolerances.tol_exact * max(split.normZ, 1.0)
            if split.zstar_norm > small:
                return CheckResult.inapplicable(name, f'screen part of {Z.name!r} does not vanish at point {index}')
            if abs(split.Z_N_coef) <= small:
                case, coefficient, operator = 'radical', split.Z_xi_coef, 'A_star'
            elif abs(split.Z_xi_coef) <= small:
                case, coefficient, operator = 'transversal', split.Z_N_coef, 'A_N'
            else:
                return CheckResult.inapplicable(name, f'{Z.name!r} has both normal components at point {index}')
            shape = shape_operators(frame, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        cases.add(case)
        lam = -conformal_factor(frame, Z, u) / coefficient
        A = getattr(shape, operator)
        result.add('umbilic', float(np.linalg.norm(A - lam * np.eye(shape.n), 2)) / max(abs(lam), 1.0))
        result.values.setdefault('lambda', []).append(lam)
    result.values['cases'] = sorted(cases)
    ok = all(within(v, tolerances.tol_fd) for v in result.residuals.get('umbilic', []))
    return decide(result, ok)
