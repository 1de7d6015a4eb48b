"""Real spherical harmonics, sphere/ball quadrature, and the linearized
curvature operator on the sphere.

Harmonics are evaluated through associated Legendre functions; the two
theta-derivatives come from the recurrence

    (x^2 - 1) dP/dx = l x P_l^m - (l + m) P_{l-1}^m

and the Legendre equation, so all derivatives up to second order are
analytic.  Evaluation assumes sin(theta) bounded away from zero; sphere
quadrature uses Gauss-Legendre nodes in cos(theta), which never touch
the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, lpmv

from .errors import PoleProximityError

__all__ = [
    "BALL_VOLUME",
    "SPHERE_AREA",
    "RealSphericalHarmonic",
    "ball_quadrature",
    "expand_on_sphere",
    "rigid_basis",
    "sphere_operator_B",
    "sphere_quadrature",
    "spectral_gap",
    "sum_harmonics",
]

_POLE_TOL = 1e-8


def SPHERE_AREA(N: int = 3, R: float = 1.0) -> float:
    """Surface area of the sphere of radius R in R^N."""
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0) * R ** (N - 1)


def BALL_VOLUME(N: int = 3, R: float = 1.0) -> float:
    return SPHERE_AREA(N, R) * R / N


def _legendre_with_derivs(l: int, m: int, x):
    """P_l^m(x) and its first two x-derivatives (|x| < 1)."""
    x = np.asarray(x, dtype=np.float64)
    p = lpmv(m, l, x)
    if l == 0:
        return p, np.zeros_like(x), np.zeros_like(x)
    pm1 = lpmv(m, l - 1, x) if l - 1 >= m else np.zeros_like(x)
    one_minus = 1.0 - x * x
    dp = (l * x * p - (l + m) * pm1) / (-one_minus)
    d2p = (2.0 * x * dp - (l * (l + 1) - m * m / one_minus) * p) / one_minus
    return p, dp, d2p


@dataclass(frozen=True)
class RealSphericalHarmonic:
    """Orthonormal real harmonic Y_{l,m} on the unit sphere, N = 3.

    m > 0 pairs with cos(m phi), m < 0 with sin(|m| phi).  Evaluators take
    (theta, phi) with theta the colatitude.
    """

    l: int
    m: int

    def __post_init__(self):
        if abs(self.m) > self.l:
            raise ValueError("|m| must not exceed l")

    def _norm(self) -> float:
        l, am = self.l, abs(self.m)
        logk = 0.5 * (math.log(2 * l + 1) - math.log(4 * math.pi)
                      + gammaln(l - am + 1) - gammaln(l + am + 1))
        k = math.exp(logk)
        return k * math.sqrt(2.0) if self.m != 0 else k

    def _angular(self, phi, d: int = 0):
        am = abs(self.m)
        phi = np.asarray(phi, dtype=np.float64)
        if self.m == 0:
            return np.ones_like(phi) if d == 0 else np.zeros_like(phi)
        if self.m > 0:
            base = [np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)][d]
        else:
            base = [np.sin, np.cos, lambda t: -np.sin(t)][d]
        return am ** d * base(am * phi)

    def _check_theta(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        if np.any(np.abs(np.sin(theta)) < _POLE_TOL):
            raise PoleProximityError("evaluation too close to a chart pole")
        return theta

    def value(self, theta, phi):
        theta = self._check_theta(theta)
        p, _, _ = _legendre_with_derivs(self.l, abs(self.m), np.cos(theta))
        return self._norm() * p * self._angular(phi)

    def d_theta(self, theta, phi):
        theta = self._check_theta(theta)
        _, dp, _ = _legendre_with_derivs(self.l, abs(self.m), np.cos(theta))
        return self._norm() * dp * (-np.sin(theta)) * self._angular(phi)

    def d_phi(self, theta, phi):
        theta = self._check_theta(theta)
        p, _, _ = _legendre_with_derivs(self.l, abs(self.m), np.cos(theta))
        return self._norm() * p * self._angular(phi, d=1)

    def d2_theta(self, theta, phi):
        theta = self._check_theta(theta)
        x = np.cos(theta)
        _, dp, d2p = _legendre_with_derivs(self.l, abs(self.m), x)
        s = np.sin(theta)
        return self._norm() * (d2p * s * s - dp * x) * self._angular(phi)

    def d2_theta_phi(self, theta, phi):
        theta = self._check_theta(theta)
        _, dp, _ = _legendre_with_derivs(self.l, abs(self.m), np.cos(theta))
        return self._norm() * dp * (-np.sin(theta)) * self._angular(phi, d=1)

    def d2_phi(self, theta, phi):
        theta = self._check_theta(theta)
        p, _, _ = _legendre_with_derivs(self.l, abs(self.m), np.cos(theta))
        return self._norm() * p * self._angular(phi, d=2)

    def eigenvalue(self) -> float:
        """Laplace-Beltrami eigenvalue on the unit sphere."""
        return -float(self.l * (self.l + 1))


def sum_harmonics(series):
    """Combine [(l, m, coef), ...] into one (theta, phi) evaluator bundle.

    Returns a dict of callables: value and the five derivatives, matching
    the RealSphericalHarmonic evaluator names.
    """
    terms = [(RealSphericalHarmonic(int(l), int(m)), float(c))
             for l, m, c in series]

    def make(name):
        def f(theta, phi):
            acc = 0.0
            for y, c in terms:
                acc = acc + c * getattr(y, name)(theta, phi)
            return acc
        return f

    return {name: make(name) for name in
            ("value", "d_theta", "d_phi", "d2_theta", "d2_theta_phi", "d2_phi")}


# --------------------------------------------------------------------------
# quadrature


def sphere_quadrature(n_theta: int = 32, n_phi: int = 64, R: float = 1.0):
    """(theta, phi, w) arrays integrating over the sphere of radius R.

    Gauss-Legendre in cos(theta) tensored with a uniform phi rule; exact
    for spherical polynomials of degree up to min(2 n_theta - 1, n_phi - 1).
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.broadcast_to((wx * wphi)[:, None] * R * R, T.shape).copy()
    return T.ravel(), P.ravel(), W.ravel()


def sphere_points(theta, phi, R: float = 1.0):
    st, ct = np.sin(theta), np.cos(theta)
    return R * np.stack([np.cos(phi) * st, np.sin(phi) * st, ct], axis=-1)


def circle_quadrature(n: int = 256, R: float = 1.0):
    """Uniform rule on the circle of radius R (the N = 2 'sphere')."""
    t = 2.0 * np.pi * np.arange(n) / n
    w = np.full(n, 2.0 * np.pi * R / n)
    return t, w


def ball_quadrature(R: float = 1.0, N: int = 3, n_r: int = 24,
                    n_theta: int = 24, n_phi: int = 48):
    """(points, weights) for the ball of radius R, radial weight r^{N-1}."""
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (xr + 1.0)
    wr = 0.5 * R * wr * r ** (N - 1)
    if N == 3:
        th, ph, ws = sphere_quadrature(n_theta, n_phi, R=1.0)
        dirs = sphere_points(th, ph, R=1.0)
        pts = r[:, None, None] * dirs[None, :, :]
        w = wr[:, None] * ws[None, :]
        return pts.reshape(-1, 3), w.ravel()
    if N == 2:
        t, wt = circle_quadrature(n_phi, R=1.0)
        dirs = np.stack([np.cos(t), np.sin(t)], axis=-1)
        pts = r[:, None, None] * dirs[None, :, :]
        w = wr[:, None] * wt[None, :]
        return pts.reshape(-1, 2), w.ravel()
    raise ValueError("ball quadrature implemented for N in {2, 3}")


def expand_on_sphere(f, l_max: int = 16, n_theta: int | None = None,
                     n_phi: int | None = None):
    """Project f(theta, phi) onto real harmonics up to l_max.

    Returns {(l, m): coefficient}; the rule is sized to integrate products
    of degree-l_max harmonics exactly.
    """
    n_theta = n_theta or (2 * l_max + 2)
    n_phi = n_phi or (4 * l_max + 4)
    th, ph, w = sphere_quadrature(n_theta, n_phi)
    vals = np.asarray(f(th, ph), dtype=np.float64)
    out = {}
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            y = RealSphericalHarmonic(l, m)
            out[(l, m)] = float(np.sum(w * vals * y.value(th, ph)))
    return out


# --------------------------------------------------------------------------
# sphere operators


def sphere_operator_B(R: float, coeffs, N: int = 3):
    """Apply Delta_{S_R} + (N-1)/R^2 in harmonic coefficient space.

    `coeffs` maps (l, m) -> c or is an iterable of [l, m, c] rows; degree-1
    coefficients are annihilated exactly since l(l+1) = N-1 there (N = 3).
    """
    if isinstance(coeffs, dict):
        items = coeffs.items()
        out: dict = {}
        for (l, m), c in items:
            out[(l, m)] = c * (-(l * (l + 1)) + (N - 1)) / R ** 2
        return out
    return [[l, m, c * (-(l * (l + 1)) + (N - 1)) / R ** 2]
            for l, m, c in coeffs]


def spectral_gap(R: float, l_max: int = 16, N: int = 3):
    """Smallest value of -(B h, h)/||h||^2 over mean/translation-free h.

    Minimized over harmonic degrees 2..l_max; returns (constant, argmin l).
    The eigenvalue formula gives (l(l+1) - (N-1)) / R^2.
    """
    best_l = min(range(2, l_max + 1),
                 key=lambda l: (l * (l + 1) - (N - 1)) / R ** 2)
    return (best_l * (best_l + 1) - (N - 1)) / R ** 2, best_l


def rigid_basis(R: float, N: int = 3):
    """Orthonormal basis of the rigid fields on the ball B_R.

    Translations |B_R|^{-1/2} e_l, then rotations
    c_R (x_i e_j - x_j e_i), c_R = sqrt((N+2) / (2 R^2 |B_R|)).
    Returns a list of callables mapping points (..., N) -> (..., N).
    """
    vol = BALL_VOLUME(N, R)
    c_rot = math.sqrt((N + 2) / (2.0 * R * R * vol))
    fields = []
    for l in range(N):
        e = np.zeros(N)
        e[l] = 1.0 / math.sqrt(vol)

        def trans(pts, e=e):
            pts = np.asarray(pts)
            return np.broadcast_to(e, pts.shape).copy()

        fields.append(trans)
    for i in range(N):
        for j in range(i + 1, N):
            def rot(pts, i=i, j=j):
                pts = np.asarray(pts, dtype=np.float64)
                out = np.zeros_like(pts)
                out[..., j] = c_rot * pts[..., i]
                out[..., i] = -c_rot * pts[..., j]
                return out

            fields.append(rot)
    return fields


def gram_matrix(fields, points, weights):
    vals = [np.asarray(f(points)) for f in fields]
    n = len(fields)
    g = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            g[a, b] = g[b, a] = float(np.sum(weights * np.sum(vals[a] * vals[b], axis=-1)))
    return g
