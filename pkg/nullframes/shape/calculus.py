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

from typing import Dict, Sequence, Union

import numpy as np

from nullframes.geometry.ambient import VectorField, cc_test, commutator_curvature
from nullframes.hypersurfaces.frames import FrameSample, NullFrameField


class ShapeSample:
    """ Second order invariants of a framed null hypersurface at one point, on the screen basis of that point.

    Matrices of operators hold the image of e_i in column i, so A[j, i] = g(e_j, A e_i).
    """

    def __init__(self, sample: FrameSample, B: np.ndarray, B_xi: np.ndarray, C: np.ndarray, tau: np.ndarray,
                 tau_xi: float, A_N: np.ndarray, A_star: np.ndarray, a_n_xi_component: float, a_star_xi: float):
        """ Create a ShapeSample.

        :param sample: the frame sample.
        :param B: B(e_i, e_j).
        :param B_xi: B(e_i, xi) for each i followed by B(xi, xi).
        :param C: C(e_i, e_j).
        :param tau: tau(e_i).
        :param tau_xi: tau(xi).
        :param A_N: the shape operator of the hypersurface.
        :param A_star: the shape operator of the screen.
        :param a_n_xi_component: max over i of |g(A_N e_i, N)|.
        :param a_star_xi: |A*_xi xi|.
        """

        self.sample = sample
        self.B = B
        self.B_xi = B_xi
        self.C = C
        self.tau = tau
        self.tau_xi = tau_xi
        self.A_N = A_N
        self.A_star = A_star
        self.a_n_xi_component = a_n_xi_component
        self.a_star_xi = a_star_xi

    @property
    def u(self) -> np.ndarray:
        return self.sample.u

    @property
    def n(self) -> int:
        return len(self.sample.screen)

    @property
    def H(self) -> float:
        return float(np.trace(self.A_star))

    def duality_residuals(self) -> Dict[str, float]:
        """ Agreement of the bilinear forms with the shape operators and the algebraic properties of both.

        :return: residuals keyed by name.
        """

        return {
            'b_symmetry': float(np.max(np.abs(self.B - self.B.T))) if self.n else 0.0,
            'b_xi': float(np.max(np.abs(self.B_xi))),
            'b_a_star': float(np.max(np.abs(self.B - self.A_star.T))) if self.n else 0.0,
            'c_a_n': float(np.max(np.abs(self.C - self.A_N.T))) if self.n else 0.0,
            'a_star_symmetry': float(np.max(np.abs(self.A_star - self.A_star.T))) if self.n else 0.0,
            'a_n_screen_valued': self.a_n_xi_component,
            'a_star_xi': self.a_star_xi
        }

    def to_dict(self) -> Dict:
        return {'u': self.u.tolist(), 'B': self.B.tolist(), 'B_xi': self.B_xi.tolist(), 'C': self.C.tolist(),
                'tau': self.tau.tolist(), 'tau_xi': self.tau_xi, 'A_N': self.A_N.tolist(),
                'A_star': self.A_star.tolist(), 'H': self.H}


class SplitField:
    """ Decomposition Z = Z* + g(Z, N) xi + g(Z, xi) N of an ambient field at one point. """

    def __init__(self, Zstar: np.ndarray, Zstar_vector: np.ndarray, Z_xi_coef: float, Z_N_coef: float,
                 eps_Z: int, normZ: float, reassembly: float, product: float):
        self.Zstar = Zstar
        self.Zstar_vector = Zstar_vector
        self.Z_xi_coef = Z_xi_coef
        self.Z_N_coef = Z_N_coef
        self.eps_Z = eps_Z
        self.normZ = normZ
        self.reassembly = reassembly
        self.product = product

    @property
    def zstar_norm(self) -> float:
        return float(np.linalg.norm(self.Zstar))

    def angle_xi(self) -> float:
        return self.Z_N_coef / self.normZ

    def angle_n(self) -> float:
        return self.Z_xi_coef / self.normZ

    def to_dict(self) -> Dict:
        return {'Zstar': self.Zstar.tolist(), 'g_Z_N': self.Z_xi_coef, 'g_Z_xi': self.Z_N_coef, 'eps_Z': self.eps_Z,
                'normZ': self.normZ, 'reassembly': self.reassembly, 'product': self.product}


def tangent_params(sample: FrameSample, X: np.ndarray) -> np.ndarray:
    return sample.immersion.tangent_coordinates(sample.u, X)


def b_params(sample: FrameSample, a: np.ndarray, b: np.ndarray) -> float:
    """ B(X, Y) = g(nabla_X Y, xi) for X = J a and the coordinate extension Y = J b, from jets.

    :param sample: the frame sample.
    :param a: parameter coordinates of X.
    :param b: parameter coordinates of Y.
    :return: B(X, Y).
    """

    immersion = sample.immersion
    x, J, H = immersion.parametrization_jet(sample.u)
    gamma = immersion.ambient.christoffel(x)
    v = np.einsum('kab,a,b->k', H, a, b) + np.einsum('kij,i,j->k', gamma, J @ a, J @ b)
    return sample.inner(v, sample.xi)


def induced_connection(sample: FrameSample, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """ The induced connection nabla_X Y = nabla-bar_X Y - B(X, Y) N for coordinate extensions, in parameter
    coordinates.

    :param sample: the frame sample.
    :param a: parameter coordinates of X.
    :param b: parameter coordinates of Y.
    :return: parameter coordinates of nabla_X Y.
    """

    immersion = sample.immersion
    x, J, H = immersion.parametrization_jet(sample.u)
    gamma = immersion.ambient.christoffel(x)
    v = np.einsum('kab,a,b->k', H, a, b) + np.einsum('kij,i,j->k', gamma, J @ a, J @ b)
    return tangent_params(sample, v - sample.inner(v, sample.xi) * sample.N)


def second_fund_B(frame: NullFrameField, u: Sequence[float], X: np.ndarray, Y: np.ndarray) -> float:
    """ The second fundamental form B(X, Y) = g(nabla-bar_X Y, xi).

    :param frame: the frame field.
    :param u: the parameter point.
    :param X: an ambient tangent vector.
    :param Y: an ambient tangent vector.
    :return: B(X, Y).
    """

    sample = frame.at(u)
    return b_params(sample, tangent_params(sample, X), tangent_params(sample, Y))


def c_params(frame: NullFrameField, u: Sequence[float], a: np.ndarray, b: np.ndarray) -> float:
    sample = frame.at(u)
    b = np.asarray(b, dtype=float)
    derivative = frame.covariant_derivative(u, a, lambda s: s.project(s.immersion.push(s.u, b)))
    return sample.inner(derivative, sample.N)


def screen_fund_C(frame: NullFrameField, u: Sequence[float], X: np.ndarray, Y: np.ndarray) -> float:
    """ The screen second fundamental form C(X, Y) = g(nabla-bar_X PY, N).

    :param frame: the frame field.
    :param u: the parameter point.
    :param X: an ambient tangent vector.
    :param Y: an ambient tangent vector.
    :return: C(X, Y).
    """

    sample = frame.at(u)
    return c_params(frame, u, tangent_params(sample, X), tangent_params(sample, Y))


def tau_params(frame: NullFrameField, u: Sequence[float], a: np.ndarray) -> float:
    sample = frame.at(u)
    return sample.inner(frame.covariant_derivative(u, a, lambda s: s.N), sample.xi)


def tau_form(frame: NullFrameField, u: Sequence[float], X: np.ndarray) -> float:
    """ The transversal connection form tau(X) = g(nabla-bar_X N, xi).

    :param frame: the frame field.
    :param u: the parameter point.
    :param X: an ambient tangent vector.
    :return: tau(X).
    """

    return tau_params(frame, u, tangent_params(frame.at(u), X))


def screen_derivative(frame: NullFrameField, u: Sequence[float], a: np.ndarray, fun) -> np.ndarray:
    """ The screen connection: P of the ambient covariant derivative of a screen valued field.

    :param frame: the frame field.
    :param u: the parameter point.
    :param a: parameter coordinates of the direction.
    :param fun: maps a FrameSample to the ambient components of the field.
    :return: the ambient vector.
    """

    return frame.at(u).project(frame.covariant_derivative(u, a, fun))


def shape_operators(frame: NullFrameField, u: Sequence[float]) -> ShapeSample:
    """ B, C, tau, A_N, A*_xi and H at a point.

    :param frame: the frame field.
    :param u: the parameter point.
    :return: the ShapeSample.
    """

    s = frame.at(u)
    n = len(s.screen)
    B = np.zeros((n, n))
    C = np.zeros((n, n))
    A_N = np.zeros((n, n))
    A_star = np.zeros((n, n))
    tau = np.zeros(n)
    B_xi = np.zeros(n + 1)
    a_n_xi_component = 0.0

    for i, a in enumerate(s.screen_params):
        DN = frame.covariant_derivative(u, a, lambda t: t.N)
        Dxi = frame.covariant_derivative(u, a, lambda t: t.xi)
        tau[i] = s.inner(DN, s.xi)
        an = -(DN - tau[i] * s.N)
        a_n_xi_component = max(a_n_xi_component, abs(s.inner(an, s.N)))
        an = an - s.inner(an, s.xi) * s.N
        A_N[:, i] = s.screen_coordinates(an)
        A_star[:, i] = s.screen_coordinates(-Dxi)
        B_xi[i] = b_params(s, a, s.xi_params)
        for j, b in enumerate(s.screen_params):
            B[i, j] = b_params(s, a, b)
            C[i, j] = c_params(frame, u, a, b)

    B_xi[n] = b_params(s, s.xi_params, s.xi_params)
    tau_xi = s.inner(frame.covariant_derivative(u, s.xi_params, lambda t: t.N), s.xi)
    a_star_xi = float(np.linalg.norm(s.screen_coordinates(frame.covariant_derivative(u, s.xi_params,
                                                                                     lambda t: t.xi))))
    return ShapeSample(s, B, B_xi, C, tau, tau_xi, A_N, A_star, a_n_xi_component, a_star_xi)


def split_field(frame: NullFrameField, Z: VectorField, u: Sequence[float]) -> SplitField:
    """ Split Z along the frame.

    :param frame: the frame field.
    :param Z: the ambient field.
    :param u: the parameter point.
    :return: the SplitField; eps_Z is 0 for null Z.
    """

    s = frame.at(u)
    z = Z(s.x)
    zstar = s.screen_coordinates(z)
    zstar_vector = s.from_screen_coordinates(zstar)
    g_z_n = s.inner(z, s.N)
    g_z_xi = s.inner(z, s.xi)
    norm_sq = s.inner(z, z)
    floor = frame.tolerances.floor * max(float(z @ z), 1.0)
    eps = 0 if abs(norm_sq) <= floor else int(np.sign(norm_sq))
    reassembly = float(np.linalg.norm(z - (zstar_vector + g_z_n * s.xi + g_z_xi * s.N)))
    product = abs(norm_sq - float(zstar @ zstar) - 2.0 * g_z_xi * g_z_n)
    return SplitField(zstar, zstar_vector, g_z_n, g_z_xi, eps, float(np.sqrt(abs(norm_sq))), reassembly, product)


def zperp_operator(shape: ShapeSample, split: SplitField) -> np.ndarray:
    return split.Z_xi_coef * shape.A_star + split.Z_N_coef * shape.A_N


def shape_AZperp(shape: ShapeSample, split: SplitField, X: np.ndarray) -> np.ndarray:
    """ The shape operator of the normal part of Z: g(Z, N) A*_xi X + g(Z, xi) A_N X.

    :param shape: the shape sample.
    :param split: the split of Z at the same point.
    :param X: screen coordinates of X.
    :return: screen coordinates of the image.
    """

    return zperp_operator(shape, split) @ np.asarray(X, dtype=float)


def conformal_factor(frame: NullFrameField, Z: VectorField, u: Sequence[float]) -> float:
    sample = frame.at(u)
    return cc_test(sample.immersion.ambient, Z, [sample.x]).phi[0]


def components_residual(frame: NullFrameField, Z: VectorField, u: Sequence[float],
                        shape: Union[ShapeSample, None] = None) -> Dict[str, float]:
    """ Residuals of the component equations of a closed conformal field, max over the screen basis:
    (a) |phi X - nabla*_X Z* + g(Z, N) A*_xi X + g(Z, xi) A_N X|,
    (b) |C(X, Z*) + X g(Z, N) - g(Z, N) tau(X)|,
    (c) |B(X, Z*) + X g(Z, xi) + g(Z, xi) tau(X)|.

    :param frame: the frame field.
    :param Z: the field.
    :param u: the parameter point.
    :param shape: a precomputed ShapeSample at u.
    :return: residuals keyed 'a', 'b', 'c' plus the conformal factor 'phi'.
    """

    shape = shape if shape is not None else shape_operators(frame, u)
    s = shape.sample
    split = split_field(frame, Z, u)
    phi = conformal_factor(frame, Z, u)
    A = zperp_operator(shape, split)
    zstar = split.Zstar
    res_a = res_b = res_c = 0.0
    for i, a in enumerate(s.screen_params):
        nabla_zstar = s.screen_coordinates(frame.covariant_derivative(u, a, lambda t: t.project(Z(t.x))))
        basis = np.zeros(len(s.screen))
        basis[i] = 1.0
        res_a = max(res_a, float(np.linalg.norm(phi * basis - nabla_zstar + A[:, i])))
        d_z_n = frame.directional_derivative(u, a, lambda t: t.inner(Z(t.x), t.N))
        d_z_xi = frame.directional_derivative(u, a, lambda t: t.inner(Z(t.x), t.xi))
        res_b = max(res_b, abs(shape.C[i] @ zstar + d_z_n - split.Z_xi_coef * shape.tau[i]))
        res_c = max(res_c, abs(shape.B[i] @ zstar + d_z_xi + split.Z_N_coef * shape.tau[i]))
    return {'a': res_a, 'b': res_b, 'c': res_c, 'phi': phi}


def zperp_residual(frame: NullFrameField, Z: VectorField, u: Sequence[float],
                   shape: Union[ShapeSample, None] = None) -> float:
    """ max over screen X of |X (g(Z, xi) g(Z, N)) + g(X, A_Zperp Z*)|; vanishes for integrable screens.

    :return: the residual.
    """

    shape = shape if shape is not None else shape_operators(frame, u)
    split = split_field(frame, Z, u)
    image = zperp_operator(shape, split) @ split.Zstar
    worst = 0.0
    for i, a in enumerate(shape.sample.screen_params):
        d = frame.directional_derivative(u, a, lambda t: t.inner(Z(t.x), t.xi) * t.inner(Z(t.x), t.N))
        worst = max(worst, abs(d + image[i]))
    return worst


def codazzi_residual(frame: NullFrameField, u: Sequence[float], X: np.ndarray, Y: np.ndarray,
                     W: np.ndarray) -> float:
    """ Residual of the Codazzi equation for coordinate fields X, Y, W given by parameter coordinates:
    g(R(X, Y)W, xi) = (nabla_X B)(Y, W) - (nabla_Y B)(X, W) + tau(X) B(Y, W) - tau(Y) B(X, W),
    with R the commutator first curvature operator.

    :return: the absolute difference of both sides.
    """

    s = frame.at(u)
    X, Y, W = (np.asarray(v, dtype=float) for v in (X, Y, W))
    immersion = s.immersion
    lhs = s.inner(commutator_curvature(immersion.ambient, s.x, immersion.push(u, X), immersion.push(u, Y),
                                       immersion.push(u, W)), s.xi)

    def nabla_b(a, b, c):
        derivative = frame.directional_derivative(u, a, lambda t: b_params(t, b, c))
        return derivative - b_params(s, induced_connection(s, a, b), c) - b_params(s, b, induced_connection(s, a, c))

    rhs = (nabla_b(X, Y, W) - nabla_b(Y, X, W) + tau_params(frame, u, X) * b_params(s, Y, W) -
           tau_params(frame, u, Y) * b_params(s, X, W))
    return float(abs(lhs - rhs))


def nonmetric_residual(frame: NullFrameField, u: Sequence[float], X: np.ndarray, Y: np.ndarray,
                       W: np.ndarray) -> float:
    """ Residual of (nabla_X g)(Y, W) = B(X, Y) g(N, W) + B(X, W) g(Y, N) for coordinate fields.

    :return: the absolute difference of both sides.
    """

    s = frame.at(u)
    X, Y, W = (np.asarray(v, dtype=float) for v in (X, Y, W))
    immersion = s.immersion

    def induced(t: FrameSample, b, c) -> float:
        J = t.immersion.jacobian(t.u)
        return t.inner(J @ b, J @ c)

    lhs = (frame.directional_derivative(u, X, lambda t: induced(t, Y, W)) -
           induced(s, induced_connection(s, X, Y), W) - induced(s, Y, induced_connection(s, X, W)))
    rhs = (b_params(s, X, Y) * s.inner(s.N, immersion.push(u, W)) +
           b_params(s, X, W) * s.inner(immersion.push(u, Y), s.N))
    return float(abs(lhs - rhs))


def integrability_residual(shape: ShapeSample) -> float:
    """ max |C(e_i, e_j) - C(e_j, e_i)|; zero iff the screen is integrable at the point. """

    if shape.n < 2:
        return 0.0
    return float(np.max(np.abs(shape.C - shape.C.T)))


def sqc_grw_residual(shape: ShapeSample, warp_ratio: float) -> float:
    """ |(A_N - A*_xi) / sqrt(2) - (rho' / rho) P| in the operator norm.

    :param shape: the shape sample.
    :param warp_ratio: rho'(t) / rho(t) at the point.
    :return: the residual.
    """

    return float(np.linalg.norm((shape.A_N - shape.A_star) / np.sqrt(2.0) - warp_ratio * np.eye(shape.n), 2))


def gauge_covariance_report(frame: NullFrameField, gauged: NullFrameField, u: Sequence[float]) -> Dict[str, float]:
    """ Compare the invariants of a frame and a rescaled copy at the same point.

    Under xi' = f xi, N' = N / f: B' = f B, A*' = f A*, A_N' = A_N / f, H' = f H and tau' = tau - X log f.

    :param frame: the original frame.
    :param gauged: the rescaled frame.
    :param u: the parameter point.
    :return: residual of each transformation law and the gauge value.
    """

    a = shape_operators(frame, u)
    b = shape_operators(gauged, u)
    sa = a.sample
    f = sa.inner(b.sample.xi, sa.N)
    dlog = np.array([frame.directional_derivative(u, p, lambda t: np.log(abs(t.inner(gauged.at(t.u).xi, t.N))))
                     for p in sa.screen_params])
    return {
        'gauge': f,
        'B': float(np.max(np.abs(b.B - f * a.B))) if a.n else 0.0,
        'A_star': float(np.max(np.abs(b.A_star - f * a.A_star))) if a.n else 0.0,
        'A_N': float(np.max(np.abs(b.A_N - a.A_N / f))) if a.n else 0.0,
        'H': abs(b.H - f * a.H),
        'tau': float(np.max(np.abs(b.tau - a.tau + dlog))) if a.n else 0.0
    }
