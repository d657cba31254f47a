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
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from nullframes.analysis.angles import constant_angle_test
from nullframes.analysis.principal import cpd_test, orthogonal_directions, unit_screen_part
from nullframes.analysis.verdict import CheckResult, SAMPLE_ERRORS, Verdict, decide, grid_points, within
from nullframes.geometry.ambient import AmbientManifold, VectorField, cc_test, riemann, spaceform_residual
from nullframes.hypersurfaces.frames import FrameSample, NullFrameField
from nullframes.shape.calculus import conformal_factor, integrability_residual, screen_derivative, \
    shape_operators, split_field, zperp_operator


def sectional_curvature(M: AmbientManifold, p: Sequence[float], X: np.ndarray, Y: np.ndarray) -> float:
    """ Sectional curvature of the plane spanned by X and Y, with the sign convention under which a spaceform of
    curvature c satisfies R(X, Y)U = c (g(X, U) Y - g(Y, U) X).

    :return: the curvature of the plane.
    """

    g = M.metric_jet(p)[0]
    area = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return float(-(riemann(M, p, X, Y, Y) @ g @ X) / area)


def estimate_spaceform(M: AmbientManifold, points: Sequence[Sequence[float]], seed: int = 0,
                       triples: int = 200) -> Tuple[float, float]:
    """ Estimate a constant curvature from a sectional curvature at the first point, then test it everywhere.

    :param M: the manifold.
    :param points: the ambient points.
    :param seed: the random seed for the test triples.
    :param triples: the number of test triples.
    :return: the estimate and the spaceform residual.
    """

    p = np.asarray(points[0], dtype=float)
    g = M.metric_jet(p)[0]
    basis = np.eye(M.dim)
    spacelike = [e for e in basis if e @ g @ e > 0]
    if len(spacelike) >= 2:
        X, Y = spacelike[0], spacelike[1]
    else:
        X, Y = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(2, M.dim))
    c = sectional_curvature(M, p, X, Y)
    return c, spaceform_residual(M, c, points, seed=seed, triples=triples)


def screen_gradient_check(frame: NullFrameField, Z: VectorField,
                          grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ Compare the screen gradient of |Z| with (eps phi / |Z|) Z*.

    :param frame: the frame field.
    :param Z: a closed conformal field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable unless Z is closed conformal.
    """

    name = 'eqgrads'
    tolerances = frame.tolerances
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tolerances.tol_fd,
                 floor=tolerances.floor)
    if not cc.is_cc:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not closed conformal')

    def norm(t: FrameSample) -> float:
        z = Z(t.x)
        return float(np.sqrt(abs(t.inner(z, z))))

    result = CheckResult(name)
    for index, u in points:
        result.point(index)
        try:
            sample = frame.at(u)
            split = split_field(frame, Z, u)
            if split.normZ <= tolerances.floor:
                result.excluded.append((index, 'field is null'))
                continue
            gradient = np.array([frame.directional_derivative(u, a, norm) for a in sample.screen_params])
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        phi = conformal_factor(frame, Z, u)
        expected = split.eps_Z * phi / split.normZ * split.Zstar
        result.add('gradient', float(np.linalg.norm(gradient - expected)))
    ok = all(within(v, tolerances.tol_fd) for v in result.residuals.get('gradient', []))
    return decide(result, ok)


def orthogonal_unit_field(T_fun: Callable[[FrameSample], np.ndarray], c: np.ndarray) \
        -> Callable[[FrameSample], np.ndarray]:
    """ The unit screen field orthogonal to T in a two dimensional screen, oriented by a fixed ambient vector c. """

    def fun(t: FrameSample) -> np.ndarray:
        T = T_fun(t)
        w = t.project(c)
        w = w - t.inner(w, T) * T
        return w / np.sqrt(t.inner(w, w))

    return fun


def first_screen_vector(t: FrameSample) -> np.ndarray:
    return t.screen[0]


def flat_screen_check(frame: NullFrameField, Z: VectorField,
                      grid: Union[Sequence[Sequence[float]], None] = None) -> CheckResult:
    """ For a two dimensional screen, a parallel Z with constant angle and trace free A_{Z perp}, check that the
    orthonormal frame {T, W} is parallel for the screen connection.

    Where Z* vanishes T is the first screen basis field.

    :param frame: the frame field.
    :param Z: the field.
    :param grid: the sample points.
    :return: the CheckResult; inapplicable when a hypothesis fails.
    """

    name = 'flat_screen'
    tolerances = frame.tolerances
    tol = tolerances.tol_fd
    if frame.immersion.screen_dim != 2:
        return CheckResult.inapplicable(name, 'screen dimension is not 2')
    points = grid_points(frame, grid)
    cc = cc_test(frame.immersion.ambient, Z, [frame.immersion.point(u) for _, u in points], tol=tol,
                 floor=tolerances.floor)
    if not cc.is_cc or max((abs(phi) for phi in cc.phi if phi is not None), default=0.0) > tol:
        return CheckResult.inapplicable(name, f'field {Z.name!r} is not parallel')
    angle = constant_angle_test(frame, Z, grid)
    if angle.verdict != Verdict.passed:
        return CheckResult.inapplicable(name, 'angle is not constant')

    result = CheckResult(name)
    for index, u in points:
        result.point(index)
        try:
            shape = shape_operators(frame, u)
            split = split_field(frame, Z, u)
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
            continue
        if not within(integrability_residual(shape), tol):
            return CheckResult.inapplicable(name, f'screen is not integrable at point {index}')
        trace = float(np.trace(zperp_operator(shape, split)))
        if not within(abs(trace), tol):
            return CheckResult.inapplicable(name, f'A_Zperp is not trace free at point {index}: {trace}')

        sample = shape.sample
        if split.zstar_norm > tolerances.floor * max(split.normZ, 1.0):
            T_fun = unit_screen_part(Z)
        else:
            T_fun = first_screen_vector
        T = T_fun(sample)
        c = sample.screen[1] if abs(sample.inner(sample.screen[1], T)) < 0.9 else sample.screen[0]
        W_fun = orthogonal_unit_field(T_fun, c)
        W = W_fun(sample)
        a_T = sample.immersion.tangent_coordinates(u, T)
        a_W = sample.immersion.tangent_coordinates(u, W)
        try:
            for key, a, fun in [('nabla_TT', a_T, T_fun), ('nabla_WT', a_W, T_fun), ('nabla_TW', a_T, W_fun),
                                ('nabla_WW', a_W, W_fun)]:
                result.add(key, float(np.linalg.norm(sample.screen_coordinates(screen_derivative(frame, u, a, fun)))))
        except SAMPLE_ERRORS as e:
            result.excluded.append((index, str(e)))
    ok = all(within(v, tol) for values in result.residuals.values() for v in values)
    return decide(result, ok)


def cmc_cc_check(frame: NullFrameField, Z: VectorField, grid: Union[Sequence[Sequence[float]], None] = None,
                 seed: int = 0) -> CheckResult:
    """ For a three dimensional hypersurface with vanishing null mean curvature in a spaceform, where Z* is a
    principal direction of A*_xi with principal curvature k*, check that k* is constant along W and that
    f = 1 / sqrt(|2 k*|) satisfies W f = 0 and T f + h f = f g(nabla*_W T, W), with nabla*_T T = h T.

    The conditions are homogeneous in f; they are evaluated again for f = 1 / sqrt(|k*|).

    :param frame: the frame field.
    :param Z: a closed conformal field.
    :param grid: the sample points.
    :param seed: the random seed of the spaceform test.
    :return: the CheckResult; inapplicable when a hypothesis fails.
    """

    name = 'cmc'
    tolerances = frame.tolerances
    tol = tolerances.tol_fd
    immersion = frame.immersion
    if len(immersion.parameters) != 3:
        return CheckResult.inapplicable(name, 'hypersurface is not three dimensional')
    points = grid_points(frame, grid)
    if not points:
        return CheckResult.inapplicable(name, 'no sample points')

    c, residual = estimate_spaceform(immersion.ambient, [immersion.point(u) for _, u in points], seed=seed)
    if not within(residual, tol, c):
        return CheckResult.inapplicable(name, f'ambient is not a spaceform: residual {residual} for c = {c}')

    shapes = dict()
    for index, u in points:
        try:
            shapes[index] = shape_operators(frame, u)
        except SAMPLE_ERRORS:
            continue
        if not within(abs(shapes[index].H), tol):
            return CheckResult.inapplicable(name, f'null mean curvature does not vanish at point {index}')
    cpd = cpd_test(frame, Z, grid, operator='star')
    if cpd.verdict != Verdict.passed:
        return CheckResult.inapplicable(name, f'Z* is not a principal direction of A*_xi: {cpd.verdict.value}')

    T_fun = unit_screen_part(Z)
    kstar_values = dict()

    def kstar(t: FrameSample) -> float:
        key = tuple(float(x) for x in t.u)
        if key not in kstar_values:
            T = t.screen_coordinates(T_fun(t))
            a_T = T @ np.asarray(t.screen_params)
            Dxi = frame.covariant_derivative(t.u, a_T, lambda s: s.xi)
            kstar_values[key] = float(T @ t.screen_coordinates(-Dxi))
        return kstar_values[key]

    def inverse_root(scale: float) -> Callable[[FrameSample], float]:
        return lambda t: 1.0 / np.sqrt(abs(scale * kstar(t)))

    result = CheckResult(name)
    result.values['curvature'] = c
    for index, u in points:
        result.point(index)
        if index not in shapes:
            result.excluded.append((index, 'shape operators unavailable'))
            continue
        sample = shapes[index].sample
        try:
            k = kstar(sample)
            if abs(k) <= tol:
                result.excluded.append((index, 'principal curvature k* vanishes'))
                continue
            split = split_field(frame, Z, u)
            w = orthogonal_directions(sample, split.Zstar)[0]
            T = T_fun(sample)
            W = immersion.push(u, w)
            a_T = immersion.tangent_coordinates(u, T)
            nabla_TT = screen_derivative(frame, u, a_T, T_fun)
            h = sample.inner(nabla_TT, T)
            g_WT_W = sample.inner(screen_derivative(frame, u, w, T_fun), W)
            result.add('W_kstar', abs(frame.directional_derivative(u, w, kstar)))
            result.add('geodesic_T', float(np.linalg.norm(sample.screen_coordinates(nabla_TT - h * T))))
            for suffix, scale in [('', 2.0), ('_proof', 1.0)]:
                f_fun = inverse_root(scale)
                f = f_fun(sample)
                result.add('W_f' + suffix, abs(frame.directional_derivative(u, w, f_fun)))
                result.add('T_f' + suffix, abs(frame.directional_derivative(u, a_T, f_fun) + h * f - f * g_WT_W))
        except SAMPLE_ERRORS as e:
            logging.warning(f'{name}: point {index} excluded: {e}')
            result.excluded.append((index, str(e)))
    ok = all(within(v, tol) for values in result.residuals.values() for v in values)
    return decide(result, ok)
