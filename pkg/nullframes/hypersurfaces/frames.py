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
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.errors import FrameError, GaugeError, StencilError
from nullframes.geometry.ambient import VectorField
from nullframes.geometry.expression import ExpressionField
from nullframes.hypersurfaces.immersion import NullImmersion

MAX_CACHE_SIZE = 16384

FRAME_RESIDUALS = ['xi_radical', 'n_null', 'pairing', 'n_screen', 'screen_orthonormal', 'tangency']


class FrameSample:
    """ A null frame at one point: xi spanning the radical, the transversal N and an orthonormal screen basis. """

    def __init__(self, immersion: NullImmersion, u: np.ndarray, xi: np.ndarray, N: np.ndarray,
                 screen: Sequence[np.ndarray], xi_params: Union[np.ndarray, None] = None,
                 theta: Union[float, None] = None, method: str = ''):
        self.immersion = immersion
        self.u = np.asarray(u, dtype=float)
        self.x = immersion.point(self.u)
        self.g = immersion.ambient.metric_jet(self.x)[0]
        self.xi = np.asarray(xi, dtype=float)
        self.N = np.asarray(N, dtype=float)
        self.screen = [np.asarray(e, dtype=float) for e in screen]
        self.xi_params = xi_params if xi_params is not None else immersion.tangent_coordinates(self.u, self.xi)
        self.screen_params = [immersion.tangent_coordinates(self.u, e) for e in self.screen]
        self.theta = theta
        self.method = method

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(a @ self.g @ b)

    def project(self, v: np.ndarray) -> np.ndarray:
        """ Projection onto the screen along span(xi, N).

        :param v: an ambient vector.
        :return: v - g(v, N) xi - g(v, xi) N.
        """

        return v - self.inner(v, self.N) * self.xi - self.inner(v, self.xi) * self.N

    def projector(self) -> np.ndarray:
        return np.eye(len(self.x)) - np.outer(self.xi, self.g @ self.N) - np.outer(self.N, self.g @ self.xi)

    def screen_coordinates(self, v: np.ndarray) -> np.ndarray:
        return np.array([self.inner(v, e) for e in self.screen])

    def from_screen_coordinates(self, c: np.ndarray) -> np.ndarray:
        return sum((ci * e for ci, e in zip(c, self.screen)), np.zeros(len(self.x)))

    def residuals(self) -> Dict[str, float]:
        """ Residuals of the null frame conditions and of the tangency of xi.

        :return: one entry per name in FRAME_RESIDUALS.
        """

        xi_radical = abs(self.inner(self.xi, self.xi))
        n_screen = 0.0
        orthonormal = 0.0
        for i, e in enumerate(self.screen):
            xi_radical = max(xi_radical, abs(self.inner(self.xi, e)))
            n_screen = max(n_screen, abs(self.inner(self.N, e)))
            for j, f in enumerate(self.screen):
                orthonormal = max(orthonormal, abs(self.inner(e, f) - (1.0 if i == j else 0.0)))
        return {
            'xi_radical': xi_radical,
            'n_null': abs(self.inner(self.N, self.N)),
            'pairing': abs(self.inner(self.xi, self.N) - 1.0),
            'n_screen': n_screen,
            'screen_orthonormal': orthonormal,
            'tangency': self.immersion.tangency_residual(self.u, self.xi)
        }


def orthonormalize(vectors: Sequence[np.ndarray], g: np.ndarray, tol: float = 1e-9,
                   skip_dependent: bool = False, limit: Union[int, None] = None) -> List[np.ndarray]:
    """ Modified Gram-Schmidt in the metric g with one re-orthogonalization pass.

    g must be positive definite on the span of the vectors.

    :param vectors: the input vectors, processed in order.
    :param g: the metric matrix.
    :param tol: vectors whose remaining squared norm falls below tol times their initial squared norm are dependent.
    :param skip_dependent: drop dependent vectors instead of raising FrameError.
    :param limit: stop once this many vectors have been produced.
    :return: the orthonormal vectors.
    """

    basis = []
    for v in vectors:
        w = np.array(v, dtype=float)
        initial = abs(w @ g @ w)
        for _ in range(2):
            for e in basis:
                w = w - (e @ g @ w) * e
        norm_sq = w @ g @ w
        if norm_sq <= tol * max(initial, np.finfo(float).tiny) or norm_sq <= 0:
            if skip_dependent:
                continue
            if norm_sq < -tol * max(initial, 1.0):
                raise FrameError(f'screen candidate is not spacelike: g(v, v) = {norm_sq}')
            raise FrameError('screen candidates are degenerate or linearly dependent')
        basis.append(w / np.sqrt(norm_sq))
        if limit is not None and len(basis) == limit:
            break
    return basis


def constructed_screen(g: np.ndarray, xi: np.ndarray, N: np.ndarray, n: int) -> List[np.ndarray]:
    """ Screen basis from the projections of the coordinate axes, in axis order.

    :param g: the metric matrix.
    :param xi: the radical vector.
    :param N: the transversal vector.
    :param n: the screen dimension.
    :return: the orthonormal basis.
    """

    m = len(xi)
    # projections of unit axes that vanish up to rounding carry no direction
    negligible = 1e-8 * max(1.0, np.linalg.norm(xi) * np.linalg.norm(g @ N), np.linalg.norm(N) * np.linalg.norm(g @ xi))
    candidates = []
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        projection = e - (e @ g @ N) * xi - (e @ g @ xi) * N
        if np.linalg.norm(projection) > negligible:
            candidates.append(projection)
    basis = orthonormalize(candidates, g, tol=1e-8, skip_dependent=True, limit=n)
    if len(basis) != n:
        raise FrameError(f'could only build {len(basis)} of {n} screen vectors')
    return basis


def rigging_transversal(g: np.ndarray, xi: np.ndarray, zeta: np.ndarray, floor: float = 1e-9) -> np.ndarray:
    """ The null transversal induced by a rigging: (zeta - g(zeta, zeta) / (2 g(xi, zeta)) xi) / g(xi, zeta).

    :param g: the metric matrix.
    :param xi: the radical vector.
    :param zeta: the rigging vector.
    :param floor: pairings below this are treated as zero.
    :return: N.
    """

    pairing = xi @ g @ zeta
    if abs(pairing) <= floor:
        raise FrameError(f'rigging is not transversal: g(xi, zeta) = {pairing}')
    return (zeta - (zeta @ g @ zeta) / (2.0 * pairing) * xi) / pairing


class NullFrameField(ABC):
    """ A null frame along an immersion, evaluated lazily and cached per parameter point.

    Frame derivatives are taken in parameter space with central differences and one Richardson step. Near the
    boundary a one sided second order stencil is used.
    """

    method = ''

    def __init__(self, immersion: NullImmersion, name: str = ''):
        self.immersion = immersion
        self.name = name
        self.tolerances = immersion.tolerances
        self._cache: Dict[Tuple, FrameSample] = dict()

    @abstractmethod
    def build(self, u: np.ndarray) -> FrameSample:
        pass

    def at(self, u: Sequence[float]) -> FrameSample:
        key = tuple(float(v) for v in u)
        sample = self._cache.get(key)
        if sample is None:
            sample = self.build(np.array(key))
            if len(self._cache) >= MAX_CACHE_SIZE:
                self._cache.clear()
            self._cache[key] = sample
        return sample

    def _inside(self, u: np.ndarray) -> bool:
        return self.immersion.in_domain(u, self.immersion.stencil_margin)

    def directional_derivative(self, u: Sequence[float], a: np.ndarray,
                               fun: Callable[[FrameSample], Union[float, np.ndarray]]):
        """ Derivative of a quantity built from frame samples along a parameter direction.

        :param u: the parameter point.
        :param a: the parameter direction, not necessarily unit.
        :param fun: maps a FrameSample to a scalar or an array.
        :return: d/de fun(at(u + e a)) at e = 0.
        """

        u = np.asarray(u, dtype=float)
        a = np.asarray(a, dtype=float)
        scale = float(np.linalg.norm(a))
        f0 = fun(self.at(u))
        if scale == 0.0:
            return 0.0 * f0

        d = a / scale
        h = self.tolerances.fd_step

        def f(step):
            return fun(self.at(u + step * d))

        if self._inside(u + h * d) and self._inside(u - h * d):
            d1 = (f(h) - f(-h)) / (2 * h)
            d2 = (f(h / 2) - f(-h / 2)) / h
        elif self._inside(u + 2 * h * d):
            d1 = (-3 * f0 + 4 * f(h) - f(2 * h)) / (2 * h)
            d2 = (-3 * f0 + 4 * f(h / 2) - f(h)) / h
        elif self._inside(u - 2 * h * d):
            d1 = (3 * f0 - 4 * f(-h) + f(-2 * h)) / (2 * h)
            d2 = (3 * f0 - 4 * f(-h / 2) + f(-h)) / h
        else:
            raise StencilError(f'no finite difference stencil fits the domain at {list(u)} along {list(d)}')
        return scale * (4 * d2 - d1) / 3

    def covariant_derivative(self, u: Sequence[float], a: np.ndarray,
                             fun: Callable[[FrameSample], np.ndarray]) -> np.ndarray:
        """ Ambient covariant derivative of a vector field along the immersion.

        :param u: the parameter point.
        :param a: parameter coordinates of the tangent direction X.
        :param fun: maps a FrameSample to the ambient components of the field.
        :return: the ambient vector covariant derivative of the field along X.
        """

        sample = self.at(u)
        X = self.immersion.push(sample.u, a)
        gamma = self.immersion.ambient.christoffel(sample.x)
        return self.directional_derivative(u, a, fun) + np.einsum('kij,i,j->k', gamma, X, fun(sample))

    def samples(self) -> List[Tuple[int, Union[FrameSample, None], str]]:
        """ Evaluate the frame at every grid point, capturing construction failures.

        :return: (grid index, sample or None, failure reason).
        """

        results = []
        for index, u in enumerate(self.immersion.grid_points()):
            try:
                results.append((index, self.at(u), ''))
            except (FrameError, ValueError, ArithmeticError) as e:
                logging.warning(f'{self.name or self.method} frame: point {index} excluded: {e}')
                results.append((index, None, str(e)))
        return results


class RiggingFrameField(NullFrameField):
    """ The frame induced by a rigging field zeta. """

    method = 'rigging'

    def __init__(self, immersion: NullImmersion, zeta: VectorField, name: str = ''):
        super().__init__(immersion, name)
        self.zeta = zeta

    def build(self, u: np.ndarray) -> FrameSample:
        x = self.immersion.point(u)
        g = self.immersion.ambient.metric_jet(x)[0]
        xi, xi_params = self.immersion.radical(u)
        zeta = self.zeta(x)
        if self.immersion.tangency_residual(u, zeta) <= self.tolerances.tol_exact * max(np.linalg.norm(zeta), 1.0):
            raise FrameError(f'rigging {self.zeta.name!r} is tangent at {list(u)}')
        N = rigging_transversal(g, xi, zeta, self.tolerances.floor)
        screen = constructed_screen(g, xi, N, self.immersion.screen_dim)
        return FrameSample(self.immersion, u, xi, N, screen, xi_params, method=self.method)


class CCFrameField(NullFrameField):
    """ The frame adapted to a non null, nowhere tangent field Z: Z = xi + theta N with theta = g(Z, Z) / 2. """

    method = 'cc'

    def __init__(self, immersion: NullImmersion, Z: VectorField, name: str = ''):
        super().__init__(immersion, name)
        self.Z = Z

    def build(self, u: np.ndarray) -> FrameSample:
        x = self.immersion.point(u)
        g = self.immersion.ambient.metric_jet(x)[0]
        xi0, xi0_params = self.immersion.radical(u)
        z = self.Z(x)
        scale = max(float(np.linalg.norm(z)) ** 2, 1.0)
        norm_sq = float(z @ g @ z)
        if abs(norm_sq) <= self.tolerances.floor * scale:
            raise FrameError(f'field {self.Z.name!r} is null at {list(u)}')
        pairing = float(z @ g @ xi0)
        if abs(pairing) <= self.tolerances.floor * max(np.linalg.norm(z) * np.linalg.norm(xi0), 1.0):
            raise FrameError(f'field {self.Z.name!r} is tangent at {list(u)}')

        alpha = norm_sq / (2.0 * pairing)
        theta = 0.5 * norm_sq
        xi = alpha * xi0
        N = (z - xi) / theta
        screen = constructed_screen(g, xi, N, self.immersion.screen_dim)
        return FrameSample(self.immersion, u, xi, N, screen, alpha * xi0_params, theta=theta, method=self.method)


class ExplicitFrameField(NullFrameField):
    """ The frame determined by user supplied screen fields, given as expressions over the parameters. """

    method = 'explicit'

    def __init__(self, immersion: NullImmersion, fields: Sequence[Sequence[Union[str, ExpressionField]]],
                 name: str = ''):
        super().__init__(immersion, name)
        self.fields = [[c if isinstance(c, ExpressionField) else ExpressionField(str(c), immersion.parameters)
                        for c in field] for field in fields]
        if len(self.fields) != immersion.screen_dim:
            raise FrameError(f'{len(self.fields)} screen fields given for a screen of dimension '
                             f'{immersion.screen_dim}')
        for field in self.fields:
            if len(field) != immersion.ambient.dim:
                raise FrameError(f'screen field has {len(field)} components, expected {immersion.ambient.dim}')

    def build(self, u: np.ndarray) -> FrameSample:
        x = self.immersion.point(u)
        g = self.immersion.ambient.metric_jet(x)[0]
        xi, xi_params = self.immersion.radical(u)
        tol = 1e-8
        vectors = []
        for i, field in enumerate(self.fields):
            v = np.array([c.evaluate(u) for c in field])
            scale = max(np.linalg.norm(v), 1.0)
            if self.immersion.tangency_residual(u, v) > tol * scale * max(np.linalg.norm(self.immersion.jacobian(u)),
                                                                          1.0):
                raise FrameError(f'screen field {i} is not tangent at {list(u)}')
            if abs(v @ g @ xi) > tol * scale * max(np.linalg.norm(g @ xi), 1.0):
                raise FrameError(f'screen field {i} is not orthogonal to xi at {list(u)}: g(v, xi) = {v @ g @ xi}')
            vectors.append(v)

        screen = orthonormalize(vectors, g, tol=1e-10)
        zeta = self.immersion.reference(x)
        zeta = zeta - sum(((zeta @ g @ e) * e for e in screen), np.zeros(len(zeta)))
        N = rigging_transversal(g, xi, zeta, self.tolerances.floor)
        return FrameSample(self.immersion, u, xi, N, screen, xi_params, method=self.method)


GaugeFunction = Union[ExpressionField, Callable[[np.ndarray, FrameSample], float], float]


class GaugedFrameField(NullFrameField):
    """ A frame rescaled by a nowhere vanishing function: xi' = f xi, N' = N / f, same screen. """

    method = 'gauge'

    def __init__(self, base: NullFrameField, f: GaugeFunction, name: str = '', check_grid: bool = True):
        super().__init__(base.immersion, name or base.name)
        self.base = base
        self.f = f
        if check_grid:
            for index, sample, reason in base.samples():
                if sample is not None and abs(self.gauge_value(sample)) <= self.tolerances.floor:
                    raise GaugeError(f'gauge vanishes at grid point {index}')

    def gauge_value(self, sample: FrameSample) -> float:
        f = self.f
        if isinstance(f, ExpressionField):
            if f.variables == self.immersion.parameters:
                return float(f.evaluate(sample.u))
            return float(f.evaluate(sample.x))
        if callable(f):
            return float(f(sample.u, sample))
        return float(f)

    def build(self, u: np.ndarray) -> FrameSample:
        sample = self.base.at(u)
        f = self.gauge_value(sample)
        if abs(f) <= self.tolerances.floor:
            raise GaugeError(f'gauge vanishes at {list(u)}')
        return FrameSample(self.immersion, u, f * sample.xi, sample.N / f, sample.screen, f * sample.xi_params,
                           theta=sample.theta, method=sample.method)


def frame_from_rigging(imm: NullImmersion, zeta: VectorField, u: Sequence[float]) -> FrameSample:
    """ Null frame induced by a rigging at one point.

    :param imm: the immersion.
    :param zeta: the rigging field.
    :param u: the parameter point.
    :return: the FrameSample.
    """

    return RiggingFrameField(imm, zeta).at(u)


def frame_from_cc(imm: NullImmersion, Z: VectorField, u: Sequence[float]) -> FrameSample:
    """ Null frame adapted to a closed conformal field at one point; the sample carries theta.

    :param imm: the immersion.
    :param Z: the field.
    :param u: the parameter point.
    :return: the FrameSample.
    """

    return CCFrameField(imm, Z).at(u)


def frame_from_explicit(imm: NullImmersion, screen_fields: Sequence[Sequence[Union[str, ExpressionField]]],
                        u: Sequence[float]) -> FrameSample:
    return ExplicitFrameField(imm, screen_fields).at(u)


def gauge_rescale(frame: NullFrameField, f: GaugeFunction) -> GaugedFrameField:
    """ Rescale a frame field by a nowhere vanishing function.

    :param frame: the frame field.
    :param f: an expression over the parameters or ambient coordinates, a callable (u, sample) or a constant.
    :return: the rescaled frame field.
    """

    return GaugedFrameField(frame, f)


def normalizing_gauge(V: VectorField) -> Callable[[np.ndarray, FrameSample], float]:
    """ The gauge |V| / g(V, xi), after which the angle between V and the radical is 1.

    :param V: a nowhere null field.
    :return: the gauge as a callable of (u, sample).
    """

    def gauge(u: np.ndarray, sample: FrameSample) -> float:
        v = V(sample.x)
        return float(np.sqrt(abs(sample.inner(v, v))) / sample.inner(v, sample.xi))

    return gauge


def validate_frame(frame: Union[NullFrameField, FrameSample], u: Union[Sequence[float], None] = None) \
        -> Dict[str, float]:
    """ Residuals of the null frame conditions and tangency of xi.

    :param frame: a frame field and a point, or a single sample.
    :param u: the parameter point when frame is a field.
    :return: the residuals keyed by FRAME_RESIDUALS.
    """

    sample = frame if isinstance(frame, FrameSample) else frame.at(u)
    return sample.residuals()


def compare_frames(frame_a: NullFrameField, frame_b: NullFrameField, u: Sequence[float]) -> Dict[str, float]:
    """ Compare two frames at a point up to gauge.

    :param frame_a: the first frame.
    :param frame_b: the second frame.
    :param u: the parameter point.
    :return: the gauge factor f with xi_b = f xi_a and the residuals of xi, N and the screen projector.
    """

    a = frame_a.at(u)
    b = frame_b.at(u)
    f = a.inner(b.xi, a.N)
    return {
        'gauge': f,
        'xi': float(np.linalg.norm(b.xi - f * a.xi)),
        'N': float(np.linalg.norm(b.N - a.N / f)),
        'screen': float(np.max(np.abs(a.projector() - b.projector())))
    }
