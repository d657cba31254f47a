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

import itertools
import logging
from typing import Callable, Dict, List

import numpy as np

from nullframes.analysis.angles import constant_angle_test, gauge_invariance_check
from nullframes.analysis.principal import cpd_test, geodesic_direction_check, lemma_cpd_equivalence
from nullframes.analysis.quasi_conformal import cc_screen_theorem_check, quasi_conformal_check, \
    zero_projection_check
from nullframes.analysis.theorems import cmc_cc_check, flat_screen_check, screen_gradient_check
from nullframes.analysis.umbilic import totally_umbilical_corollary, umbilic_classifier
from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, decide, grid_points, within
from nullframes.catalog.transnormal import transnormal_residual
from nullframes.errors import ConfigError
from nullframes.geometry.ambient import cc_test, spaceform_residual
from nullframes.geometry.expression import ExpressionField
from nullframes.hypersurfaces.frames import GaugedFrameField, NullFrameField, compare_frames, validate_frame
from nullframes.hypersurfaces.model import Model
from nullframes.shape.calculus import codazzi_residual, components_residual, gauge_covariance_report, \
    integrability_residual, nonmetric_residual, shape_operators, sqc_grw_residual, zperp_residual

CheckFunction = Callable[[Model, Dict, int], CheckResult]


def frame_of(model: Model, spec: Dict) -> NullFrameField:
    if 'screen' not in spec:
        raise ConfigError(f"check {spec['name']!r} needs a screen", {'checks': [spec['name']]})
    return model.frame(spec['screen'])


def field_of(model: Model, spec: Dict):
    if 'field' not in spec:
        raise ConfigError(f"check {spec['name']!r} needs a field", {'checks': [spec['name']]})
    return model.field(spec['field'])


def options_of(spec: Dict) -> Dict:
    return spec.get('options', dict())


def tolerance_of(spec: Dict, default: float) -> float:
    return float(spec.get('tolerance', default))


def ambient_expression(model: Model, source: str) -> Callable[[np.ndarray], float]:
    field = ExpressionField(str(source), model.ambient.coordinates)
    return field.evaluate


def sampled(name: str, frame: NullFrameField, tol: float, fun: Callable[[np.ndarray], Dict[str, float]],
            scale: Callable[[np.ndarray], float] = None) -> CheckResult:
    """ Run a per point residual function over the grid and pass when every residual is within tol.

    :param name: the check name.
    :param frame: the frame field, which supplies the grid.
    :param tol: the tolerance.
    :param fun: returns the named residuals at a parameter point.
    :param scale: optional relative scale of the residuals at a parameter point.
    :return: the CheckResult.
    """

    result = CheckResult(name)
    ok = True
    for index, u in grid_points(frame):
        result.point(index)
        try:
            residuals = fun(u)
            s = scale(u) if scale is not None else 1.0
        except SAMPLE_ERRORS as e:
            logging.warning(f'{name}: point {index} excluded: {e}')
            result.excluded.append((index, str(e)))
            continue
        for key, value in residuals.items():
            result.add(key, value)
            ok = ok and within(value, tol, s)
    return decide(result, ok)


def point_scale(model: Model) -> Callable[[np.ndarray], float]:
    return lambda u: float(np.linalg.norm(model.immersion.point(u)))


def check_validate_frame(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_exact)
    return sampled('validate_frame', frame, tol, lambda u: validate_frame(frame, u), point_scale(model))


def check_compare_frames(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    other = options_of(spec).get('other')
    if other is None:
        raise ConfigError("compare_frames needs options.other", {'checks': ['compare_frames']})
    other_frame = model.frame(other)
    tol = tolerance_of(spec, model.tolerances.tol_exact)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        comparison = compare_frames(frame, other_frame, u)
        return {key: comparison[key] for key in ['xi', 'N', 'screen']}

    result = sampled('compare_frames', frame, tol, residuals, point_scale(model))
    result.values['other'] = other
    return result


def check_shape(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd)
    return sampled('shape', frame, tol, lambda u: shape_operators(frame, u).duality_residuals())


def field_scale(model: Model, Z) -> Callable[[np.ndarray], float]:
    return lambda u: float(np.linalg.norm(Z(model.immersion.point(u))))


def check_components(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    Z = field_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        values = components_residual(frame, Z, u)
        return {key: values[key] for key in ['a', 'b', 'c']}

    result = sampled('components', frame, tol, residuals, field_scale(model, Z))
    points = [model.immersion.point(u) for _, u in grid_points(frame)]
    cc = cc_test(model.ambient, Z, points, tol=model.tolerances.tol_fd, floor=model.tolerances.floor)
    if not cc.is_cc:
        result = CheckResult.inapplicable('components', f'field {Z.name!r} is not closed conformal, '
                                                        f'the residuals are diagnostics', residuals=result.residuals,
                                          excluded=result.excluded)
    return result


def coordinate_vectors(model: Model) -> List[np.ndarray]:
    return list(np.eye(len(model.immersion.parameters)))


def check_codazzi(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd * 10.0)
    basis = coordinate_vectors(model)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        worst = 0.0
        for i, j in itertools.combinations(range(len(basis)), 2):
            for W in basis:
                worst = max(worst, codazzi_residual(frame, u, basis[i], basis[j], W))
        return {'codazzi': worst}

    return sampled('codazzi', frame, tol, residuals)


def check_nonmetric(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd)
    basis = coordinate_vectors(model)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        worst = 0.0
        for X in basis:
            for j, k in itertools.combinations_with_replacement(range(len(basis)), 2):
                worst = max(worst, nonmetric_residual(frame, u, X, basis[j], basis[k]))
        xi = frame.at(u).xi_params
        radical = max(nonmetric_residual(frame, u, X, xi, xi) for X in basis)
        return {'coordinates': worst, 'radical': radical}

    return sampled('nonmetric', frame, tol, residuals)


def check_integrability(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd)
    return sampled('integrability', frame, tol,
                   lambda u: {'integrability': integrability_residual(shape_operators(frame, u))})


def check_zperp(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    Z = field_of(model, spec)
    tol = tolerance_of(spec, model.tolerances.tol_fd)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        shape = shape_operators(frame, u)
        return {'integrability': integrability_residual(shape), 'zperp': zperp_residual(frame, Z, u, shape)}

    result = sampled('zperp', frame, tol, residuals, lambda u: field_scale(model, Z)(u) ** 2)
    if any(not within(v, model.tolerances.tol_fd) for v in result.residuals.get('integrability', [])):
        return CheckResult.inapplicable('zperp', 'screen is not integrable', residuals=result.residuals,
                                        excluded=result.excluded)
    return result


def check_gauge_covariance(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    source = str(options_of(spec).get('gauge', '2'))
    gauged = GaugedFrameField(frame, model.gauge(source), name=f'{frame.name}_gauged')
    tol = tolerance_of(spec, model.tolerances.tol_fd)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        report = gauge_covariance_report(frame, gauged, u)
        return {key: report[key] for key in ['B', 'A_star', 'A_N', 'H', 'tau']}

    result = sampled('gauge_covariance', frame, tol, residuals)
    result.values['gauge'] = source
    return result


def check_sqc_grw(model: Model, spec: Dict, seed: int) -> CheckResult:
    frame = frame_of(model, spec)
    options = options_of(spec)
    if 'warp_ratio' in options:
        ratio = ambient_expression(model, options['warp_ratio'])
    elif model.grw is not None:
        grw = model.grw

        def ratio(x: np.ndarray) -> float:
            return grw.warp_derivative(x[0]) / grw.warp.evaluate([x[0]])
    else:
        return CheckResult.inapplicable('sqc_grw', 'ambient is not a GRW spacetime and no warp_ratio is given')
    tol = tolerance_of(spec, model.tolerances.tol_fd)

    def residuals(u: np.ndarray) -> Dict[str, float]:
        shape = shape_operators(frame, u)
        return {'sqc': sqc_grw_residual(shape, float(ratio(shape.sample.x)))}

    return sampled('sqc_grw', frame, tol, residuals)


def check_constant_angle(model: Model, spec: Dict, seed: int) -> CheckResult:
    return constant_angle_test(frame_of(model, spec), field_of(model, spec))


def check_gauge_invariance(model: Model, spec: Dict, seed: int) -> CheckResult:
    count = int(options_of(spec).get('count', 20))
    return gauge_invariance_check(frame_of(model, spec), field_of(model, spec), count=count, seed=seed)


def check_quasi_conformal_fit(model: Model, spec: Dict, seed: int) -> CheckResult:
    options = options_of(spec)
    expected_phi = ambient_expression(model, options['expected_phi']) if 'expected_phi' in options else None
    expected_psi = ambient_expression(model, options['expected_psi']) if 'expected_psi' in options else None
    return quasi_conformal_check(frame_of(model, spec), expected_phi=expected_phi, expected_psi=expected_psi)


def check_qc_screen(model: Model, spec: Dict, seed: int) -> CheckResult:
    return cc_screen_theorem_check(model.immersion, field_of(model, spec))


def check_zero_projection(model: Model, spec: Dict, seed: int) -> CheckResult:
    return zero_projection_check(frame_of(model, spec), field_of(model, spec))


def check_cpd(model: Model, spec: Dict, seed: int) -> CheckResult:
    return cpd_test(frame_of(model, spec), field_of(model, spec), operator='zperp')


def check_cpd_star(model: Model, spec: Dict, seed: int) -> CheckResult:
    return cpd_test(frame_of(model, spec), field_of(model, spec), operator='star')


def check_principal(model: Model, spec: Dict, seed: int) -> CheckResult:
    return geodesic_direction_check(frame_of(model, spec), field_of(model, spec))


def check_lemma_cpd(model: Model, spec: Dict, seed: int) -> CheckResult:
    return lemma_cpd_equivalence(frame_of(model, spec), field_of(model, spec))


def check_flat_screen(model: Model, spec: Dict, seed: int) -> CheckResult:
    return flat_screen_check(frame_of(model, spec), field_of(model, spec))


def check_cmc(model: Model, spec: Dict, seed: int) -> CheckResult:
    return cmc_cc_check(frame_of(model, spec), field_of(model, spec), seed=seed)


def check_eqgrads(model: Model, spec: Dict, seed: int) -> CheckResult:
    return screen_gradient_check(frame_of(model, spec), field_of(model, spec))


def check_umbilic(model: Model, spec: Dict, seed: int) -> CheckResult:
    return umbilic_classifier(frame_of(model, spec), label=options_of(spec).get('label'))


def check_totally_umbilical(model: Model, spec: Dict, seed: int) -> CheckResult:
    return totally_umbilical_corollary(frame_of(model, spec), field_of(model, spec))


def check_spaceform(model: Model, spec: Dict, seed: int) -> CheckResult:
    options = options_of(spec)
    if 'c' not in options:
        raise ConfigError('spaceform needs options.c', {'checks': ['spaceform']})
    c = float(options['c'])
    tol = tolerance_of(spec, 1e-6)
    immersion = model.immersion
    points = [immersion.point(u) for u in immersion.grid_points()]
    residual = spaceform_residual(model.ambient, c, points, seed=seed, triples=int(options.get('triples', 200)))
    result = CheckResult('spaceform', residuals={'spaceform': [residual]}, values={'c': c})
    return decide(result, within(residual, tol, c))


def check_transnormal(model: Model, spec: Dict, seed: int) -> CheckResult:
    """ For a graph t = f(x) over the fiber of a GRW spacetime, the residual of |grad f| = rho(f). """

    name = 'transnormal'
    if model.grw is None:
        return CheckResult.inapplicable(name, 'ambient is not a GRW spacetime')
    immersion = model.immersion
    parameters = list(immersion.parameters)
    if [c.source.strip() for c in immersion.components[1:]] != parameters:
        return CheckResult.inapplicable(name, 'immersion is not a graph over the fiber coordinates')
    grw = model.grw
    f = immersion.components[0].rename(dict(zip(parameters, grw.fiber_coordinates)))
    fiber = {'coordinates': list(grw.fiber_coordinates),
             'metric': {f'g{i}{j}': v for (i, j), v in grw.fiber_metric.items()}}
    tol = tolerance_of(spec, model.tolerances.tol_exact)
    points = immersion.grid_points()
    residual = transnormal_residual(grw.warp.source, f, fiber, points, time=grw.time)
    result = CheckResult(name, residuals={name: [residual]}, values={'f': f.source})
    return decide(result, within(residual, tol))


CHECKS: Dict[str, CheckFunction] = {
    'validate_frame': check_validate_frame,
    'compare_frames': check_compare_frames,
    'shape': check_shape,
    'components': check_components,
    'codazzi': check_codazzi,
    'nonmetric': check_nonmetric,
    'zperp': check_zperp,
    'integrability': check_integrability,
    'gauge_covariance': check_gauge_covariance,
    'sqc_grw': check_sqc_grw,
    'constant_angle': check_constant_angle,
    'gauge_invariance': check_gauge_invariance,
    'quasi_conformal_fit': check_quasi_conformal_fit,
    'qc_screen': check_qc_screen,
    'zero_projection': check_zero_projection,
    'cpd': check_cpd,
    'cpd_star': check_cpd_star,
    'principal': check_principal,
    'lemma_cpd': check_lemma_cpd,
    'flat_screen': check_flat_screen,
    'cmc': check_cmc,
    'eqgrads': check_eqgrads,
    'umbilic': check_umbilic,
    'totally_umbilical': check_totally_umbilical,
    'spaceform': check_spaceform,
    'transnormal': check_transnormal
}


def run_check(model: Model, spec: Dict, seed: int = 0) -> CheckResult:
    """ Run one configured check.

    :param model: the model.
    :param spec: the check entry of the config.
    :param seed: the random seed.
    :return: the CheckResult.
    """

    name = spec['name']
    if name not in CHECKS:
        raise ConfigError(f'unknown check {name!r}', {'checks': [name]})
    return CHECKS[name](model, spec, seed)
