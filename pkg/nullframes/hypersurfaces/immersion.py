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
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.errors import DegeneracyError, FrameError, ImmersionError
from nullframes.geometry.ambient import AmbientManifold, VectorField
from nullframes.geometry.expression import ExpressionField, Jet2
from nullframes.utils.tolerances import DEFAULT_TOLERANCES, Tolerances

RANK_TOLERANCE = 1e-10
MAX_CACHE_SIZE = 8192


class GramReport:

    def __init__(self, gram: np.ndarray, singular_values: np.ndarray, jacobian_singular_values: np.ndarray):
        """ The induced Gram matrix J^T g J at a parameter point and its spectrum.

        :param gram: the Gram matrix of the pushforward basis.
        :param singular_values: singular values of the Gram matrix, descending.
        :param jacobian_singular_values: Euclidean singular values of the Jacobian, descending.
        """

        self.gram = gram
        self.singular_values = singular_values
        self.jacobian_singular_values = jacobian_singular_values

    def rank(self, tol_rad: float = 1e-8) -> int:
        return int(np.sum(self.singular_values > tol_rad * self.singular_values[0]))

    def to_dict(self) -> Dict:
        return {'gram': self.gram.tolist(), 'singular_values': self.singular_values.tolist(),
                'jacobian_singular_values': self.jacobian_singular_values.tolist()}


class NullImmersion:
    """ A parametrized hypersurface of an ambient Lorentzian manifold, expected to be degenerate. """

    def __init__(self, ambient: AmbientManifold, parameters: Sequence[str],
                 components: Sequence[Union[str, ExpressionField]], domain: Sequence[Tuple[float, float]],
                 grid: Sequence[int], reference: Union[VectorField, None] = None,
                 level_set: Union[str, ExpressionField, None] = None, stencil_margin: float = 1e-3,
                 tolerances: Tolerances = DEFAULT_TOLERANCES, name: str = ''):
        """ Create a NullImmersion.

        :param ambient: the ambient manifold.
        :param parameters: the n + 1 parameter names, distinct from the ambient coordinate names.
        :param components: one expression over the parameters per ambient coordinate.
        :param domain: the parameter box, one (min, max) per parameter.
        :param grid: the number of samples per parameter axis.
        :param reference: the field that orients and scales the radical direction, g(xi, reference) = 1. Defaults to
        the first coordinate vector field.
        :param level_set: optional defining function over the ambient coordinates, used for the tangency residual.
        :param stencil_margin: how far finite difference stencils may leave the parameter box.
        :param tolerances: numerical thresholds.
        :param name: an optional label.
        """

        self.ambient = ambient
        self.parameters = tuple(parameters)
        self.name = name
        self.tolerances = tolerances
        self.stencil_margin = float(stencil_margin)

        clash = set(self.parameters) & set(ambient.coordinates)
        if clash:
            raise ValueError(f'parameter names {sorted(clash)} clash with ambient coordinates')
        if len(components) != ambient.dim:
            raise ValueError(f'{len(components)} components given for a {ambient.dim} dimensional ambient manifold')
        if len(self.parameters) != ambient.dim - 1:
            raise ValueError(f'a hypersurface of a {ambient.dim} dimensional manifold needs {ambient.dim - 1} '
                             f'parameters, got {len(self.parameters)}')
        if len(domain) != len(self.parameters) or len(grid) != len(self.parameters):
            raise ValueError('domain and grid need one entry per parameter')

        self.components = [c if isinstance(c, ExpressionField) else ExpressionField(str(c), self.parameters)
                           for c in components]
        self.domain = [(float(lo), float(hi)) for lo, hi in domain]
        self.grid = [int(count) for count in grid]

        if reference is None:
            reference = VectorField(['1'] + ['0'] * (ambient.dim - 1), ambient.coordinates, name='e0')
        self.reference = reference

        if level_set is not None and not isinstance(level_set, ExpressionField):
            level_set = ExpressionField(str(level_set), ambient.coordinates)
        self.level_set = level_set
        self._jet_cache: Dict[Tuple, Tuple[np.ndarray, np.ndarray, np.ndarray]] = dict()

    @property
    def screen_dim(self) -> int:
        return len(self.parameters) - 1

    @property
    def grid_shape(self) -> Tuple[int, ...]:
        return tuple(self.grid)

    def axis_values(self, axis: int) -> np.ndarray:
        lo, hi = self.domain[axis]
        return np.linspace(lo, hi, self.grid[axis])

    def grid_points(self) -> List[np.ndarray]:
        """ The sample points in row major grid order.

        :return: the parameter points.
        """

        axes = [self.axis_values(i) for i in range(len(self.parameters))]
        return [np.array(point) for point in itertools.product(*axes)]

    def in_domain(self, u: Sequence[float], margin: float = 0.0) -> bool:
        return all(lo - margin <= x <= hi + margin for x, (lo, hi) in zip(u, self.domain))

    def parametrization_jet(self, u: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """ The immersion, its Jacobian and its second partial derivatives at a parameter point.

        :param u: the parameter point.
        :return: x[k], J[k, a] = d_a F^k and H[k, a, b] = d_a d_b F^k.
        """

        key = tuple(float(v) for v in u)
        cached = self._jet_cache.get(key)
        if cached is not None:
            return cached

        dim = len(self.parameters)
        env = [Jet2.variable(v, i, dim) for i, v in enumerate(key)]
        x = np.zeros(self.ambient.dim)
        J = np.zeros((self.ambient.dim, dim))
        H = np.zeros((self.ambient.dim, dim, dim))
        for k, component in enumerate(self.components):
            jet = component.jet_at(env)
            if isinstance(jet, Jet2):
                x[k], J[k], H[k] = jet.value, jet.grad, jet.hess
            else:
                x[k] = jet

        if len(self._jet_cache) >= MAX_CACHE_SIZE:
            self._jet_cache.clear()
        self._jet_cache[key] = (x, J, H)
        return x, J, H

    def point(self, u: Sequence[float]) -> np.ndarray:
        return self.parametrization_jet(u)[0]

    def jacobian(self, u: Sequence[float]) -> np.ndarray:
        return self.parametrization_jet(u)[1]

    def hessians(self, u: Sequence[float]) -> np.ndarray:
        return self.parametrization_jet(u)[2]

    def push(self, u: Sequence[float], a: np.ndarray) -> np.ndarray:
        """ Push parameter coordinates of a tangent vector forward to ambient components.

        :param u: the parameter point.
        :param a: the parameter coordinates.
        :return: the ambient vector J a.
        """

        return self.jacobian(u) @ np.asarray(a, dtype=float)

    def tangent_coordinates(self, u: Sequence[float], v: np.ndarray) -> np.ndarray:
        """ Parameter coordinates of a tangent ambient vector, by least squares against the Jacobian.

        :param u: the parameter point.
        :param v: the ambient vector.
        :return: coordinates a with J a closest to v.
        """

        return np.linalg.lstsq(self.jacobian(u), np.asarray(v, dtype=float), rcond=None)[0]

    def tangency_residual(self, u: Sequence[float], v: np.ndarray) -> float:
        """ How far an ambient vector is from being tangent.

        With a defining function F this is |dF(v)|, otherwise the distance from v to the span of the Jacobian.

        :param u: the parameter point.
        :param v: the ambient vector.
        :return: the residual.
        """

        v = np.asarray(v, dtype=float)
        if self.level_set is not None:
            return float(abs(self.level_set.gradient(self.point(u)) @ v))
        J = self.jacobian(u)
        return float(np.linalg.norm(J @ self.tangent_coordinates(u, v) - v))

    def induced_gram(self, u: Sequence[float]) -> GramReport:
        x, J, _ = self.parametrization_jet(u)
        jacobian_sv = np.linalg.svd(J, compute_uv=False)
        if jacobian_sv[-1] <= RANK_TOLERANCE * max(jacobian_sv[0], 1.0):
            raise ImmersionError(f'Jacobian of {self.name or "immersion"} is rank deficient at {list(u)}')
        g = self.ambient.metric_jet(x)[0]
        gram = J.T @ g @ J
        return GramReport(gram, np.linalg.svd(gram, compute_uv=False), jacobian_sv)

    def radical(self, u: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """ The radical direction, scaled so that g(xi, reference) = 1.

        :param u: the parameter point.
        :return: xi as an ambient vector and in parameter coordinates.
        """

        x, J, _ = self.parametrization_jet(u)
        g = self.ambient.metric_jet(x)[0]
        _, s, vt = np.linalg.svd(self.induced_gram(u).gram)
        tol_rad = self.tolerances.tol_rad * s[0]
        if s[-1] > tol_rad:
            raise DegeneracyError(f'induced metric is non-degenerate at {list(u)}: smallest singular value {s[-1]}')
        if len(s) > 1 and s[-2] < 100.0 * tol_rad:
            raise DegeneracyError(f'radical has dimension greater than one at {list(u)}: singular values {list(s)}')

        k = vt[-1]
        xi = J @ k
        pairing = xi @ g @ self.reference(x)
        if abs(pairing) <= self.tolerances.floor * max(np.linalg.norm(xi), 1.0):
            raise FrameError(f'reference field {self.reference.name!r} is orthogonal to the radical at {list(u)}')
        return xi / pairing, k / pairing

    def check_grid(self) -> List[Tuple[int, str]]:
        """ Run the immersion and degeneracy tests at every grid point.

        :return: (grid index, reason) for every failing point.
        """

        failures = []
        for index, u in enumerate(self.grid_points()):
            try:
                self.radical(u)
                self.induced_gram(u)
            except (ImmersionError, DegeneracyError, FrameError) as e:
                logging.warning(f'check_grid: point {index} excluded: {e}')
                failures.append((index, str(e)))
        return failures


def induced_gram(imm: NullImmersion, u: Sequence[float]) -> GramReport:
    """ Gram matrix of the pushforward basis with singular value diagnostics.

    :param imm: the immersion.
    :param u: the parameter point.
    :return: the GramReport.
    """

    return imm.induced_gram(u)


def radical_direction(imm: NullImmersion, u: Sequence[float]) -> np.ndarray:
    """ The radical direction xi as an ambient vector, oriented and scaled against the reference field.

    :param imm: the immersion.
    :param u: the parameter point.
    :return: xi.
    """

    return imm.radical(u)[0]
