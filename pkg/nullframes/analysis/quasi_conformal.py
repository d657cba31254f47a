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
from enum import Enum
from typing import Dict, Sequence, Union

import numpy as np

from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, decide, grid_points, within
from nullframes.geometry.ambient import VectorField, cc_test
from nullframes.hypersurfaces.frames import CCFrameField, NullFrameField
from nullframes.hypersurfaces.immersion import NullImmersion
from nullframes.shape.calculus import ShapeSample, conformal_factor, shape_operators, split_field

UNIQUENESS_CONDITION = 1e8


class QCClass(Enum):
    quasi_conformal = 'quasi_conformal'
    conformal = 'conformal'
    neither = 'neither'


class QCFit:
    """ Least squares fit of A_N = phi A*_xi + psi P at one point. """

    def __init__(self, phi: float, psi: float, residual: float, unique: bool, condition: float,
                 classification: QCClass):
        self.phi = phi
        self.psi = psi
        self.residual = residual
        self.unique = unique
        self.condition = condition
        self.classification = classification

    def to_dict(self) -> Dict:
        return {'phi': self.phi, 'psi': self.psi, 'residual': self.residual, 'unique': self.unique,
                'condition': self.condition, 'class': self.classification.value}


def quasi_conformal_fit(shape: ShapeSample, tol: Union[float, None] = None) -> QCFit:
    """ Fit a quasi-conformal pair to the shape operators of a point.

    The normal equations are solved on the flattened n x n entries of A*_xi and the identity. When the two are
    dependent, which always happens for n = 1, the fit is flagged non-unique and the minimal norm solution is returned.

    :param shape: the shape sample.
    :param tol: residual and |psi| threshold for the classification, tol_fd by default.
    :return: the QCFit. The residual is the operator 2-norm of A_N - phi A*_xi - psi P.
    """

    tol = shape.sample.immersion.tolerances.tol_fd if tol is None else tol
    n = shape.n
    design = np.column_stack([shape.A_star.ravel(), np.eye(n).ravel()])
    target = shape.A_N.ravel()
    normal = design.T @ design
    condition = float(np.linalg.cond(normal))
    unique = bool(np.isfinite(condition) and condition <= UNIQUENESS_CONDITION)
    if unique:
        phi, psi = np.linalg.solve(normal, design.T @ target)
    else:
        logging.info(f'quasi_conformal_fit: non-unique fit at {list(shape.u)}, condition {condition}')
        phi, psi = np.linalg.lstsq(design, target, rcond=None)[0]

    residual = float(np.linalg.norm(shape.A_N - phi * shape.A_star - psi * np.eye(n), 2))
    if residual > tol:
        classification = QCClass.neither
    elif abs(psi) <= tol:
        classification = QCClass.conformal
    else:
        classification = QCClass.quasi_conformal
    return QCFit(float(phi), float(psi), residual, unique, condition, classification)


def quasi_conformal_check(frame: NullFrameField, grid: Union[Sequence[Sequence[float]], None] = None,
                          expected_phi=None, expected_psi=None) -> CheckResult:
    """ Fit the pair at every point and compare with expected pair functions when given.

    :param frame: the frame field.
    :param grid: the sample points.
    :param expected_phi: optional callable of the ambient point.
    :param expected_psi: optional callable of the ambient point.
    :return: the CheckResult; pass when every fit is quasi-conformal or conformal and matches the expected pair.
    """

    tol = frame.tolerances.tol_fd
    result = CheckResult('quasi_conformal_fit')
    fits = []
    for index, u in grid_points(frame, grid):
        result.point(index)
        try:
            shape = shape_operators(frame, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        fit = quasi_conformal_fit(shape)
        fits.append(fit.to_dict())
        result.add('residual', fit.residual)
        x = shape.sample.x
        if expected_phi is not None:
            expected = float(expected_phi(x))
            result.add('phi_error', abs(fit.phi - expected) / max(abs(expected), 1.0))
        if expected_psi is not None:
            expected = float(expected_psi(x))
            result.add('psi_error', abs(fit.psi - expected) / max(abs(expected), 1.0))
    result.values['fits'] = fits
    ok = all(within(v, tol) for key in ['residual', 'phi_error', 'psi_error'] for v in result.residuals.get(key, []))
    return decide(result, ok)


def cc_screen_theorem_check(imm: NullImmersion, Z: VectorField,
                            grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ Verify that the frame adapted to a closed conformal field is screen quasi-conformal with tau vanishing on
    the screen and theta = g(Z, Z) / 2 constant along the screen.

    :param imm: the immersion.
    :param Z: the field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable when Z is not closed conformal.
    """

    tol = imm.tolerances.tol_fd
    name = 'qc_screen'
    frame = CCFrameField(imm, Z, name='cc')
    points = grid_points(frame, grid)
    cc = cc_test(imm.ambient, Z, [imm.point(u) for _, u in points], tol=tol, floor=imm.tolerances.floor)
    if not cc.is_cc:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal', excluded=cc.excluded)

    result = CheckResult(name)
    pairs = []
    for index, u in points:
        result.point(index)
        try:
            shape = shape_operators(frame, u)
            sample = shape.sample
            dtheta = max((abs(frame.directional_derivative(u, a, lambda t: t.theta)) for a in sample.screen_params),
                         default=0.0)
        except SAMPLE_ERRORS as e:
            logging.warning(f'{name}: point {index} excluded: {e}')
            result.excluded.append((index, str(e)))
            continue
        theta = sample.theta
        phi = conformal_factor(frame, Z, u)
        fit = quasi_conformal_fit(shape)
        n = shape.n
        substitution = float(np.linalg.norm(shape.A_N + shape.A_star / theta + (phi / theta) * np.eye(n), 2))
        scale = max(float(np.linalg.norm(shape.A_N, 2)), 1.0)
        result.add('qc_residual', fit.residual / scale)
        result.add('substitution', substitution / scale)
        result.add('tau_screen', float(np.max(np.abs(shape.tau))) if n else 0.0)
        result.add('theta_screen_derivative', dtheta)
        if fit.unique:
            result.add('pair_error', max(abs(fit.phi + 1.0 / theta), abs(fit.psi + phi / theta)) / scale)
        pairs.append({'index': index, 'phi': fit.phi, 'psi': fit.psi, 'predicted_phi': -1.0 / theta,
                      'predicted_psi': -phi / theta, 'unique': fit.unique})
    result.values['pairs'] = pairs
    ok = all(within(v, tol) for values in result.residuals.values() for v in values)
    return decide(result, ok)


def zero_projection_check(frame: NullFrameField, Z: VectorField,
                          grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ For a closed conformal Z with Z* = 0 the pair (-g(Z, N) / g(Z, xi), -phi / g(Z, xi)) is quasi-conformal.

    :param frame: the frame field.
    :param Z: the field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable unless Z is closed conformal, Z* vanishes and g(Z, xi) does not.
    """

    tolerances = frame.tolerances
    name = 'zero_projection'
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tolerances.tol_fd,
                 floor=tolerances.floor)
    if not cc.is_cc:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal')

    result = CheckResult(name)
    for index, u in points:
        result.point(index)
        try:
            split = split_field(frame, Z, u)
            if split.zstar_norm > tolerances.tol_exact * max(split.normZ, 1.0):
                return CheckResult.inapplicable(name, f'screen part of {Z.name!r} does not vanish at point {index}')
            if abs(split.Z_N_coef) <= tolerances.floor:
                return CheckResult.inapplicable(name, f'field {Z.name!r} is tangent at point {index}')
            shape = shape_operators(frame, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        phi = conformal_factor(frame, Z, u)
        qc_phi = -split.Z_xi_coef / split.Z_N_coef
        qc_psi = -phi / split.Z_N_coef
        scale = max(float(np.linalg.norm(shape.A_N, 2)), 1.0)
        residual = np.linalg.norm(shape.A_N - qc_phi * shape.A_star - qc_psi * np.eye(shape.n), 2)
        result.add('substitution', float(residual) / scale)
        fit = quasi_conformal_fit(shape)
        if fit.unique:
            result.add('pair_error', max(abs(fit.phi - qc_phi), abs(fit.psi - qc_psi)) / max(abs(qc_phi), abs(qc_psi),
                                                                                            1.0))
    ok = all(within(v, tolerances.tol_fd) for values in result.residuals.values() for v in values)
    return decide(result, ok)
