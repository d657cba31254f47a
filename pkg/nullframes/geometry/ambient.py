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
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.errors import SignatureError, SingularMetricError
from nullframes.geometry.expression import ExpressionField, Jet2

MAX_CACHE_SIZE = 4096
SINGULAR_CONDITION = 1e12


class VectorField:
    """ A vector field on the ambient manifold, one closed form component per coordinate. """

    def __init__(self, components: Sequence[Union[str, ExpressionField]], coordinates: Sequence[str],
                 name: str = ''):
        """ Create a VectorField.

        :param components: component expressions in coordinate order.
        :param coordinates: the ambient coordinate names.
        :param name: an optional label used in reports.
        """

        self.coordinates = tuple(coordinates)
        self.components = [c if isinstance(c, ExpressionField) else ExpressionField(str(c), self.coordinates)
                           for c in components]
        self.name = name
        if len(self.components) != len(self.coordinates):
            raise ValueError(f'vector field {name!r} has {len(self.components)} components but the manifold has '
                             f'{len(self.coordinates)} coordinates')

    @property
    def sources(self) -> List[str]:
        return [c.source for c in self.components]

    def __call__(self, p: Sequence[float]) -> np.ndarray:
        return np.array([c.evaluate(p) for c in self.components], dtype=float)

    def derivative(self, p: Sequence[float]) -> np.ndarray:
        """ Partial derivatives of the components.

        :param p: the point.
        :return: matrix D with D[k, i] = d_i V^k.
        """

        return np.array([c.jet(p).grad for c in self.components])

    def __repr__(self):
        return f'VectorField({self.name!r}, {self.sources!r})'


class AmbientManifold:
    """ A Lorentzian manifold covered by one chart, with closed form metric components. """

    def __init__(self, coordinates: Sequence[str], metric: Dict[Tuple[int, int], Union[str, ExpressionField]],
                 check_points: Sequence[Sequence[float]] = (), name: str = ''):
        """ Create an AmbientManifold.

        :param coordinates: the coordinate names, time first by convention.
        :param metric: metric components keyed by index pairs; only one of (i, j) and (j, i) is needed and missing
        components are zero.
        :param check_points: points where the Lorentzian signature is verified.
        :param name: an optional label.
        """

        self.coordinates = tuple(coordinates)
        self.name = name
        self.check_points = [np.asarray(p, dtype=float) for p in check_points]
        self.metric_components: Dict[Tuple[int, int], ExpressionField] = dict()
        for (i, j), component in metric.items():
            key = (min(i, j), max(i, j))
            if key in self.metric_components:
                raise ValueError(f'metric component g{i}{j} given twice')
            if not 0 <= key[0] <= key[1] < self.dim:
                raise ValueError(f'metric component g{i}{j} outside dimension {self.dim}')
            if not isinstance(component, ExpressionField):
                component = ExpressionField(str(component), self.coordinates)
            self.metric_components[key] = component
        self._jet_cache: Dict[Tuple, Tuple[np.ndarray, np.ndarray, np.ndarray]] = dict()

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def metric_sources(self) -> Dict[str, str]:
        return {f'g{i}{j}': c.source for (i, j), c in sorted(self.metric_components.items())}

    def metric(self, p: Sequence[float]) -> np.ndarray:
        """ The metric matrix at a point.

        :param p: the point.
        :return: the symmetric matrix g_ij.
        """

        g = np.zeros((self.dim, self.dim))
        for (i, j), component in self.metric_components.items():
            g[i, j] = g[j, i] = component.evaluate(p)
        return g

    def metric_jet(self, p: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """ The metric and its first and second partial derivatives.

        :param p: the point.
        :return: g[i, j], dg[k, i, j] = d_k g_ij and ddg[k, l, i, j] = d_k d_l g_ij.
        """

        key = tuple(float(x) for x in p)
        cached = self._jet_cache.get(key)
        if cached is not None:
            return cached

        m = self.dim
        g = np.zeros((m, m))
        dg = np.zeros((m, m, m))
        ddg = np.zeros((m, m, m, m))
        for (i, j), component in self.metric_components.items():
            jet = component.jet(key)
            g[i, j] = g[j, i] = jet.value
            dg[:, i, j] = dg[:, j, i] = jet.grad
            ddg[:, :, i, j] = ddg[:, :, j, i] = jet.hess

        if len(self._jet_cache) >= MAX_CACHE_SIZE:
            self._jet_cache.clear()
        self._jet_cache[key] = (g, dg, ddg)
        return g, dg, ddg

    def inverse_metric(self, p: Sequence[float]) -> np.ndarray:
        return self._inverse(self.metric_jet(p)[0], p)

    @staticmethod
    def _inverse(g: np.ndarray, p) -> np.ndarray:
        if not np.all(np.isfinite(g)) or np.linalg.cond(g) > SINGULAR_CONDITION:
            raise SingularMetricError(f'metric is singular at {list(np.asarray(p, dtype=float))}')
        return np.linalg.inv(g)

    def inner(self, p: Sequence[float], X: np.ndarray, Y: np.ndarray) -> float:
        return float(X @ self.metric_jet(p)[0] @ Y)

    def christoffel(self, p: Sequence[float]) -> np.ndarray:
        """ Christoffel symbols of the Levi-Civita connection.

        :param p: the point.
        :return: gamma[k, i, j] = Gamma^k_ij, symmetric in (i, j).
        """

        g, dg, _ = self.metric_jet(p)
        g_inv = self._inverse(g, p)
        return 0.5 * np.einsum('kl,lij->kij', g_inv, _lowered_terms(dg))

    def christoffel_jet(self, p: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """ Christoffel symbols and their partial derivatives.

        :param p: the point.
        :return: gamma[k, i, j] and dgamma[m, k, i, j] = d_m Gamma^k_ij.
        """

        g, dg, ddg = self.metric_jet(p)
        g_inv = self._inverse(g, p)
        terms = _lowered_terms(dg)
        d_terms = ddg.transpose(0, 3, 1, 2) + ddg.transpose(0, 3, 2, 1) - ddg
        d_g_inv = -np.einsum('ka,mab,bl->mkl', g_inv, dg, g_inv)
        gamma = 0.5 * np.einsum('kl,lij->kij', g_inv, terms)
        d_gamma = 0.5 * np.einsum('mkl,lij->mkij', d_g_inv, terms) + 0.5 * np.einsum('kl,mlij->mkij', g_inv, d_terms)
        return gamma, d_gamma

    def eigenvalues(self, p: Sequence[float]) -> np.ndarray:
        return np.linalg.eigvalsh(self.metric(p))

    def is_lorentzian(self, p: Sequence[float]) -> bool:
        g = self.metric(p)
        if not np.all(np.isfinite(g)):
            return False
        eig = np.linalg.eigvalsh(g)
        scale = max(np.max(np.abs(eig)), 1.0)
        return int(np.sum(eig < -1e-12 * scale)) == 1 and int(np.sum(eig > 1e-12 * scale)) == self.dim - 1

    def symmetry_residual(self, p: Sequence[float]) -> float:
        g = self.metric(p)
        return float(np.max(np.abs(g - g.T)))

    def check_signature(self) -> None:
        """ Verify the Lorentzian signature at every declared check point.

        :return: None.
        """

        for p in self.check_points:
            if not self.is_lorentzian(p):
                raise SignatureError(f'metric of {self.name or "ambient manifold"} is not Lorentzian at {list(p)}: '
                                     f'eigenvalues {list(self.eigenvalues(p))}')


def _lowered_terms(dg: np.ndarray) -> np.ndarray:
    # t[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    return dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg


def lorentzian_check(M: AmbientManifold) -> Dict:
    """ Report the metric signature at the declared check points.

    :param M: the manifold.
    :return: a dictionary with the eigenvalues per point and an overall flag.
    """

    points = []
    for p in M.check_points:
        points.append({'point': [float(x) for x in p], 'eigenvalues': [float(e) for e in M.eigenvalues(p)],
                       'lorentzian': M.is_lorentzian(p), 'symmetry': M.symmetry_residual(p)})
    return {'lorentzian': all(x['lorentzian'] for x in points), 'points': points}


def christoffel(M: AmbientManifold, p: Sequence[float]) -> np.ndarray:
    return M.christoffel(p)


def _field_derivative(V: Union[VectorField, Callable], p: np.ndarray, step: float = 1e-5) -> np.ndarray:
    if isinstance(V, VectorField):
        return V.derivative(p)
    columns = []
    for i in range(len(p)):
        h = np.zeros(len(p))
        h[i] = step
        columns.append((np.asarray(V(p + h)) - np.asarray(V(p - h))) / (2 * step))
    return np.array(columns).T


def covariant_derivative(M: AmbientManifold, V: Union[VectorField, Callable], p: Sequence[float],
                         X: np.ndarray) -> np.ndarray:
    """ Covariant derivative of a vector field along a vector.

    :param M: the manifold.
    :param V: the vector field; jets are used for VectorField instances, central differences for other callables.
    :param p: the point.
    :param X: the direction.
    :return: the ambient vector d_X V + Gamma(X, V).
    """

    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    gamma = M.christoffel(p)
    return _field_derivative(V, p) @ X + np.einsum('kij,i,j->k', gamma, X, V(p))


def covariant_jacobian(M: AmbientManifold, V: Union[VectorField, Callable], p: Sequence[float]) -> np.ndarray:
    """ The covariant derivative of V as a matrix: column i is the covariant derivative along the coordinate e_i.

    :param M: the manifold.
    :param V: the vector field.
    :param p: the point.
    :return: the matrix.
    """

    p = np.asarray(p, dtype=float)
    gamma = M.christoffel(p)
    return _field_derivative(V, p) + np.einsum('kij,j->ki', gamma, V(p))


def _standard_curvature(M: AmbientManifold, p: Sequence[float]) -> np.ndarray:
    # r[a, b, c, d] = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
    gamma, d_gamma = M.christoffel_jet(p)
    return (np.einsum('cadb->abcd', d_gamma) - np.einsum('dacb->abcd', d_gamma) +
            np.einsum('ace,edb->abcd', gamma, gamma) - np.einsum('ade,ecb->abcd', gamma, gamma))


def curvature_tensor(M: AmbientManifold, p: Sequence[float]) -> np.ndarray:
    """ Components of the curvature endomorphism returned by riemann.

    :param M: the manifold.
    :param p: the point.
    :return: r[a, b, c, d] such that riemann(M, p, X, Y, U)^a = r[a, b, c, d] U^b X^c Y^d.
    """

    return -_standard_curvature(M, p)


def riemann(M: AmbientManifold, p: Sequence[float], X: np.ndarray, Y: np.ndarray, U: np.ndarray) -> np.ndarray:
    """ The curvature endomorphism R(X, Y)U = nabla_[X,Y] U - [nabla_X, nabla_Y] U.

    With this sign a spaceform of sectional curvature c satisfies R(X, Y)U = c (g(X, U) Y - g(Y, U) X), e.g. c = 1
    on de Sitter space. The commutator first operator is the negative of this one, see commutator_curvature.

    :param M: the manifold.
    :param p: the point.
    :param X: first direction.
    :param Y: second direction.
    :param U: the vector acted upon.
    :return: the ambient vector.
    """

    return np.einsum('abcd,b,c,d->a', curvature_tensor(M, p), U, X, Y)


def commutator_curvature(M: AmbientManifold, p: Sequence[float], X: np.ndarray, Y: np.ndarray,
                         U: np.ndarray) -> np.ndarray:
    """ The curvature operator [nabla_X, nabla_Y] U - nabla_[X,Y] U, i.e. -riemann.

    :return: the ambient vector.
    """

    return np.einsum('abcd,b,c,d->a', _standard_curvature(M, p), U, X, Y)


class CCReport:

    def __init__(self, is_cc: bool, phi: List[float], residual: List[float], excluded: List[Tuple[int, str]]):
        """ Result of a closed conformal test.

        :param is_cc: whether every evaluated sample passed.
        :param phi: the fitted conformal factor per sample, None for excluded samples.
        :param residual: max over the basis of |nabla_X Z - phi X| per sample, None for excluded samples.
        :param excluded: (sample index, reason) for skipped samples.
        """

        self.is_cc = is_cc
        self.phi = phi
        self.residual = residual
        self.excluded = excluded

    def to_dict(self) -> Dict:
        return {'is_cc': self.is_cc, 'phi': self.phi, 'residual': self.residual,
                'excluded': [{'sample': i, 'reason': r} for i, r in self.excluded]}


def cc_test(M: AmbientManifold, Z: Union[VectorField, Callable], samples: Sequence[Sequence[float]],
            tol: float = 1e-9, floor: float = 1e-9) -> CCReport:
    """ Test whether Z is closed conformal, i.e. nabla_X Z = phi X for every X.

    :param M: the manifold.
    :param Z: the vector field.
    :param samples: the ambient points.
    :param tol: residual tolerance.
    :param floor: coordinate vectors with |g(X, X)| below this are treated as null.
    :return: the CCReport.
    """

    phis, residuals, excluded = [], [], []
    for index, p in enumerate(samples):
        p = np.asarray(p, dtype=float)
        g = M.metric_jet(p)[0]
        non_null = [i for i in range(M.dim) if abs(g[i, i]) >= floor]
        if not non_null:
            logging.warning(f'cc_test: every coordinate vector is null at {list(p)}, sample skipped')
            phis.append(None)
            residuals.append(None)
            excluded.append((index, 'all basis vectors null'))
            continue

        D = covariant_jacobian(M, Z, p)
        i = non_null[0]
        phi = float(D[:, i] @ g[:, i] / g[i, i])
        residual = float(np.max(np.linalg.norm(D - phi * np.eye(M.dim), axis=0)))
        phis.append(phi)
        residuals.append(residual)

    evaluated = [r for r in residuals if r is not None]
    is_cc = len(evaluated) > 0 and max(evaluated) <= tol
    return CCReport(is_cc, phis, residuals, excluded)


def random_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """ Draw vectors uniformly from the unit box [-1, 1]^dim.

    :param rng: the seeded generator.
    :param count: number of vectors.
    :param dim: the dimension.
    :return: array of shape (count, dim).
    """

    return rng.uniform(-1.0, 1.0, size=(count, dim))


def spaceform_residual(M: AmbientManifold, c: float, samples: Sequence[Sequence[float]], seed: int = 0,
                       triples: int = 200) -> float:
    """ Max over random triples of |R(X, Y)U - c (g(X, U) Y - g(Y, U) X)|.

    :param M: the manifold.
    :param c: the candidate sectional curvature.
    :param samples: the points, visited round robin.
    :param seed: the random seed.
    :param triples: the total number of (X, Y, U) triples.
    :return: the max residual.
    """

    if not len(samples):
        return 0.0

    rng = np.random.default_rng(seed)
    tensors = [(np.asarray(p, dtype=float), curvature_tensor(M, p), M.metric_jet(p)[0]) for p in samples]
    worst = 0.0
    for k in range(triples):
        p, r, g = tensors[k % len(tensors)]
        X, Y, U = random_vectors(rng, 3, M.dim)
        lhs = np.einsum('abcd,b,c,d->a', r, U, X, Y)
        rhs = c * ((X @ g @ U) * Y - (Y @ g @ U) * X)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def metric_compatibility_residual(M: AmbientManifold, V: VectorField, W: VectorField, p: Sequence[float],
                                  X: np.ndarray) -> float:
    """ |X g(V, W) - g(nabla_X V, W) - g(V, nabla_X W)|, with the left side from jets.

    :return: the residual.
    """

    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    g, dg, _ = M.metric_jet(p)
    v, w = V(p), W(p)
    lhs = np.einsum('k,kij,i,j->', X, dg, v, w) + (V.derivative(p) @ X) @ g @ w + v @ g @ (W.derivative(p) @ X)
    rhs = covariant_derivative(M, V, p, X) @ g @ w + v @ g @ covariant_derivative(M, W, p, X)
    return float(abs(lhs - rhs))


def cc_norm_derivative(M: AmbientManifold, Z: VectorField, p: Sequence[float], X: np.ndarray) -> float:
    """ Directional derivative of |Z| = sqrt(|g(Z, Z)|) along X, from jets.

    :return: X |Z|.
    """

    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    g, dg, _ = M.metric_jet(p)
    z = Z(p)
    dz = Z.derivative(p) @ X
    norm_sq = z @ g @ z
    d_norm_sq = np.einsum('k,kij,i,j->', X, dg, z, z) + 2.0 * dz @ g @ z
    return float(np.sign(norm_sq) * d_norm_sq / (2.0 * np.sqrt(abs(norm_sq))))


class GRWSpec:
    """ A generalized Robertson-Walker spacetime -I x_rho F with metric -dt^2 + rho(t)^2 g_F. """

    def __init__(self, time: str, warp: Union[str, ExpressionField], interval: Tuple[float, float],
                 fiber_coordinates: Sequence[str], fiber_metric: Dict[Tuple[int, int], str], name: str = ''):
        """ Create a GRWSpec.

        :param time: name of the time coordinate.
        :param warp: the warping function rho(t).
        :param interval: the open time interval I.
        :param fiber_coordinates: the fiber coordinate names.
        :param fiber_metric: the Riemannian fiber metric keyed by fiber index pairs.
        :param name: an optional label.
        """

        self.time = time
        self.warp = warp if isinstance(warp, ExpressionField) else ExpressionField(str(warp), [time])
        self.interval = (float(interval[0]), float(interval[1]))
        self.fiber_coordinates = tuple(fiber_coordinates)
        self.fiber_metric = {(min(i, j), max(i, j)): str(v) for (i, j), v in fiber_metric.items()}
        self.name = name

    def warp_derivative(self, t: float) -> float:
        return float(self.warp.jet([t]).grad[0])

    def check_warp(self, samples: int = 64) -> bool:
        """ Check rho > 0 on the interval at evenly spaced interior samples.

        :param samples: the number of samples.
        :return: whether rho is positive.
        """

        ts = np.linspace(self.interval[0], self.interval[1], samples + 2)[1:-1]
        return all(self.warp.evaluate([t]) > 0 for t in ts)

    def to_dict(self) -> Dict:
        return {'time': self.time, 'warp': self.warp.source, 'interval': list(self.interval),
                'fiber': {'coordinates': list(self.fiber_coordinates),
                          'metric': {f'g{i}{j}': v for (i, j), v in sorted(self.fiber_metric.items())}}}


def assemble_grw(spec: GRWSpec, check_points: Sequence[Sequence[float]] = ()) -> AmbientManifold:
    """ Build the warped product metric -dt^2 + rho(t)^2 g_F.

    :param spec: the GRW data.
    :param check_points: points where the signature is verified.
    :return: the AmbientManifold with coordinates (t, fiber...).
    """

    if not spec.check_warp():
        raise SignatureError(f'warp {spec.warp.source!r} is not positive on {spec.interval}')

    coordinates = (spec.time,) + spec.fiber_coordinates
    warp = spec.warp.source
    metric = {(0, 0): '-1'}
    for (i, j), component in spec.fiber_metric.items():
        metric[(i + 1, j + 1)] = f'({warp})^2*({component})'
    M = AmbientManifold(coordinates, metric, check_points, name=spec.name)
    M.check_signature()
    logging.info(f'assemble_grw: {spec.name} with warp {spec.warp.source}')
    return M
