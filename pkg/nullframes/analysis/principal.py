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
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from nullframes.analysis.angles import field_angles, relative_spread
from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, Verdict, decide, grid_points, within
from nullframes.geometry.ambient import VectorField, cc_test
from nullframes.hypersurfaces.frames import FrameSample, GaugedFrameField, NullFrameField, normalizing_gauge, \
    orthonormalize
from nullframes.shape.calculus import ShapeSample, SplitField, conformal_factor, integrability_residual, \
    screen_derivative, shape_operators, split_field, zperp_operator

OPERATORS = ['zperp', 'star']


class PrincipalReport:
    """ Canonical principal direction data at one point. """

    def __init__(self, index: int, T: np.ndarray, lam: float, eigen_residual: float, q: float, eps: int,
                 phi: Union[float, None]):
        self.index = index
        self.T = T
        self.lam = lam
        self.eigen_residual = eigen_residual
        self.q = q
        self.eps = eps
        self.phi = phi

    @property
    def predicted(self) -> Union[float, None]:
        """ The signed principal value -2 eps q phi. """

        return None if self.phi is None else -2.0 * self.eps * self.q * self.phi

    @property
    def opposite_sign(self) -> Union[float, None]:
        return None if self.phi is None else 2.0 * self.eps * self.q * self.phi

    def to_dict(self) -> Dict:
        return {'index': self.index, 'T': self.T.tolist(), 'lambda': self.lam, 'eigen_residual': self.eigen_residual,
                'q': self.q, 'eps': self.eps, 'phi': self.phi, 'predicted': self.predicted,
                'opposite_sign': self.opposite_sign}


def unit_screen_part(Z: VectorField) -> Callable[[FrameSample], np.ndarray]:
    """ The field T = Z* / |Z*| as a function of frame samples. """

    def fun(t: FrameSample) -> np.ndarray:
        z = t.screen_coordinates(Z(t.x))
        return t.from_screen_coordinates(z / np.linalg.norm(z))

    return fun


def screen_norm_sq(Z: VectorField) -> Callable[[FrameSample], float]:
    return lambda t: float(np.sum(t.screen_coordinates(Z(t.x)) ** 2))


def screen_part(Z: VectorField) -> Callable[[FrameSample], np.ndarray]:
    return lambda t: t.project(Z(t.x))


def orthogonal_directions(sample: FrameSample, zstar: np.ndarray) -> List[np.ndarray]:
    """ Orthonormal screen directions orthogonal to Z*, as parameter coordinates. Empty when n = 1.

    :param sample: the frame sample.
    :param zstar: the screen coordinates of Z*.
    :return: the parameter coordinates of each direction.
    """

    n = len(sample.screen)
    T = zstar / np.linalg.norm(zstar)
    candidates = [np.eye(n)[j] - T[j] * T for j in range(n)]
    directions = orthonormalize(candidates, np.eye(n), tol=1e-8, skip_dependent=True, limit=n - 1) if n > 1 else []
    return [sum(w[j] * sample.screen_params[j] for j in range(n)) for w in directions]


def operator_of(shape: ShapeSample, split: SplitField, operator: str) -> np.ndarray:
    if operator == 'zperp':
        return zperp_operator(shape, split)
    if operator == 'star':
        return shape.A_star
    raise ValueError(f'unknown operator {operator!r}, expected one of {OPERATORS}')


def principal_sample(index: int, shape: ShapeSample, split: SplitField, operator: str,
                     phi: Union[float, None]) -> PrincipalReport:
    A = operator_of(shape, split, operator)
    z = split.Zstar
    lam = float(z @ A @ z / (z @ z))
    eigen = float(np.linalg.norm(A @ z - lam * z) / np.linalg.norm(z))
    q = split.angle_xi() * split.angle_n()
    return PrincipalReport(index, z / np.linalg.norm(z), lam, eigen, q, split.eps_Z, phi)


def cpd_test(frame: NullFrameField, Z: VectorField, grid: Union[Sequence[Sequence[float]], None] = None,
             operator: str = 'zperp') -> CheckResult:
    """ Test whether Z* is a principal direction of A_{Z perp} (or of A*_xi with operator='star').

    Besides the eigen residual the check differentiates g(Z*, Z*) along screen directions orthogonal to Z*, and,
    when Z is closed conformal and the angle is constant, compares the principal value with -2 eps q phi. The
    value with the opposite sign is reported as 'opposite_sign'.

    :param frame: the frame field.
    :param Z: a nowhere null field.
    :param grid: the sample points.
    :param operator: 'zperp' or 'star'.
    :return: the CheckResult; inapplicable when Z* vanishes everywhere or the screen is not integrable.
    """

    tolerances = frame.tolerances
    tol = tolerances.tol_fd
    name = 'cpd' if operator == 'zperp' else 'cpd_star'
    if operator not in OPERATORS:
        raise ValueError(f'unknown operator {operator!r}, expected one of {OPERATORS}')
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tol,
                 floor=tolerances.floor)

    result = CheckResult(name)
    reports = []
    for index, u in points:
        result.point(index)
        try:
            shape = shape_operators(frame, u)
            split = split_field(frame, Z, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        if operator == 'zperp' and not within(integrability_residual(shape), tol):
            return CheckResult.inapplicable(name, f'screen is not integrable at point {index}')
        if split.zstar_norm <= tolerances.floor * max(split.normZ, 1.0):
            result.excluded.append((index, 'screen part of the field vanishes'))
            continue

        phi = conformal_factor(frame, Z, u) if cc.is_cc and operator == 'zperp' else None
        report = principal_sample(index, shape, split, operator, phi)
        A = operator_of(shape, split, operator)
        result.add('eigen', report.eigen_residual / max(float(np.linalg.norm(A, 2)), 1.0))
        if cc.is_cc and operator == 'zperp':
            derivatives = [frame.directional_derivative(u, w, screen_norm_sq(Z))
                           for w in orthogonal_directions(shape.sample, split.Zstar)]
            result.add('criterion4', max((abs(d) for d in derivatives), default=0.0) / max(split.normZ ** 2, 1.0))
        reports.append(report)

    if not reports:
        return CheckResult.inapplicable(name, 'screen part of the field vanishes at every sample',
                                        excluded=result.excluded)

    spread, bound, constant = relative_spread([r.q for r in reports], tolerances.tol_rel, tolerances.floor)
    if operator == 'zperp' and cc.is_cc and constant:
        for r in reports:
            result.add('lambda_error', abs(r.lam - r.predicted))
            result.add('image', abs(r.lam) if abs(r.phi) <= tol else 0.0)

    result.values['operator'] = operator
    result.values['constant_angle'] = constant
    result.values['closed_conformal'] = cc.is_cc
    result.values['criterion4_vacuous'] = frame.immersion.screen_dim == 1
    result.values['principal'] = [r.to_dict() for r in reports]
    ok = all(within(v, tol) for values in result.residuals.values() for v in values)
    return decide(result, ok)


def geodesic_direction_check(frame: NullFrameField, Z: VectorField,
                             grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ For a canonical principal direction T: |nabla*_T T| and |lambda - (g(nabla*_T Z*, T) - phi)|.

    :param frame: the frame field.
    :param Z: a closed conformal field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable unless cpd_test passes.
    """

    name = 'geodesic'
    cpd = cpd_test(frame, Z, grid)
    if cpd.verdict != Verdict.passed:
        return CheckResult.inapplicable(name, f'cpd test did not pass: {cpd.verdict.value}')
    if not cpd.values['closed_conformal']:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal')

    tol = frame.tolerances.tol_fd
    result = CheckResult(name, excluded=list(cpd.excluded))
    excluded = {index for index, _ in cpd.excluded}
    T_fun = unit_screen_part(Z)
    zstar_fun = screen_part(Z)
    for index, u in grid_points(frame, grid):
        result.point(index)
        if index in excluded:
            continue
        try:
            shape = shape_operators(frame, u)
            split = split_field(frame, Z, u)
            sample = shape.sample
            T = T_fun(sample)
            a = sample.immersion.tangent_coordinates(u, T)
            nabla_TT = sample.screen_coordinates(screen_derivative(frame, u, a, T_fun))
            nabla_TZ = screen_derivative(frame, u, a, zstar_fun)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        phi = conformal_factor(frame, Z, u)
        A = zperp_operator(shape, split)
        t = sample.screen_coordinates(T)
        lam = float(t @ A @ t)
        result.add('nabla_TT', float(np.linalg.norm(nabla_TT)))
        result.add('lambda', abs(lam - (sample.inner(nabla_TZ, T) - phi)) / max(abs(lam), 1.0))
    ok = all(within(v, tol) for values in result.residuals.values() for v in values)
    return decide(result, ok)


def lemma_cpd_equivalence(frame: NullFrameField, Z: VectorField,
                          grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ Evaluate, at every point, four criteria that are equivalent for a closed conformal Z over an integrable
    screen: Z* is principal for A_{Z perp}, and the derivatives along screen directions orthogonal to Z* of the angle
    product, of the transversal angle after the normalizing gauge, and of g(Z*, Z*) vanish.

    :param frame: the frame field.
    :param Z: a closed conformal, nowhere null field.
    :param grid: the sample points.
    :return: the CheckResult; pass when the criteria agree at every point.
    """

    name = 'lemma_cpd'
    tolerances = frame.tolerances
    tol = tolerances.tol_fd
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tol,
                 floor=tolerances.floor)
    if not cc.is_cc:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal')

    normalized = GaugedFrameField(frame, normalizing_gauge(Z), name='normalized', check_grid=False)
    result = CheckResult(name)
    table = []
    for index, u in points:
        result.point(index)
        try:
            shape = shape_operators(frame, u)
            split = split_field(frame, Z, u)
            if not within(integrability_residual(shape), tol):
                return CheckResult.inapplicable(name, f'screen is not integrable at point {index}')
            if split.zstar_norm <= tolerances.floor * max(split.normZ, 1.0):
                result.excluded.append((index, 'screen part of the field vanishes'))
                continue
            report = principal_sample(index, shape, split, 'zperp', None)
            directions = orthogonal_directions(shape.sample, split.Zstar)
            d_q = [frame.directional_derivative(u, w, lambda t: field_angles(t, Z, tolerances.floor)['q'])
                   for w in directions]
            d_norm = [frame.directional_derivative(u, w, screen_norm_sq(Z))
                      for w in directions]
            if abs(split.angle_xi()) > tolerances.floor:
                d_gauge = [normalized.directional_derivative(u, w,
                                                             lambda t: field_angles(t, Z, tolerances.floor)['angle_n'])
                           for w in directions]
            else:
                d_gauge = None
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue

        scale = max(split.normZ ** 2, 1.0)
        criteria = {
            'principal': within(report.eigen_residual, tol, float(np.linalg.norm(zperp_operator(shape, split), 2))),
            'product': all(within(abs(d), tol) for d in d_q),
            'screen_norm': all(within(abs(d), tol, scale) for d in d_norm)
        }
        if d_gauge is not None:
            criteria['frame_gauge'] = all(within(abs(d), tol) for d in d_gauge)
        agree = len(set(criteria.values())) == 1
        result.add('disagreement', 0.0 if agree else 1.0)
        table.append({'index': index, **criteria})
        if not agree:
            logging.warning(f'{name}: criteria disagree at point {index}: {criteria}')
    result.values['criteria'] = table
    return decide(result, result.worst('disagreement') == 0.0)
