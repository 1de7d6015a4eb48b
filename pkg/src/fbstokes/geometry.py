"""Differential geometry of parametrized hypersurfaces.

A :class:`SurfacePatch` bundles a chart phi with its first and second
derivative evaluators (analytic or finite-difference).  From these,
:func:`geometry_at` assembles the moving frame, both fundamental forms,
Christoffel symbols, and the curvature scalar with the convention

    Delta_Gamma x = H(Gamma) n,

so the sphere of radius R with outward cofactor normal has
H = -(N-1)/R.  Chart orientation fixes the cofactor sign; the bundled
sphere charts are ordered so the cofactor normal points outward.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import spharm
from .errors import PoleProximityError, RankDeficiencyError
from .spharm import RealSphericalHarmonic, sphere_quadrature, sum_harmonics

__all__ = [
    "ChartScalarField",
    "GeometryAtPoint",
    "SphericalGraph",
    "SurfacePatch",
    "ambient_coordinate_field",
    "christoffel",
    "christoffel_direct",
    "closed_surface_identities",
    "compatibility_residual",
    "cylinder_patch",
    "frame_divergence_residual",
    "fundamental_forms",
    "geometry_at",
    "graph_patch",
    "laplace_beltrami",
    "laplace_beltrami_divergence_form",
    "mean_curvature",
    "plane_patch",
    "sphere_patch",
    "spherical_graph_mean_curvature",
    "spherical_graph_patch",
    "surface_from_json",
    "unit_normal",
]


# --------------------------------------------------------------------------
# patches


@dataclass
class SurfacePatch:
    """A chart theta -> phi(theta) in R^N with derivative evaluators.

    If dphi/d2phi are omitted they are built by central differences with
    step ``fd_step`` times the domain scale.
    """

    dim_ambient: int
    param_domain: tuple
    phi: object
    dphi: object = None
    d2phi: object = None
    fd_step: float = 1e-4
    deriv_mode: str = field(init=False)

    def __post_init__(self):
        self.deriv_mode = "analytic" if (self.dphi and self.d2phi) else "fd"
        scale = max(hi - lo for lo, hi in self.param_domain)
        h = self.fd_step * scale
        if self.dphi is None:
            self.dphi = _fd_jacobian(self.phi, self.dim_ambient, h)
        if self.d2phi is None:
            self.d2phi = _fd_hessian(self.phi, self.dim_ambient, h)

    @property
    def dim_param(self) -> int:
        return len(self.param_domain)


def _fd_jacobian(phi, n_amb, h):
    def dphi(theta):
        theta = np.asarray(theta, dtype=np.float64)
        cols = []
        for j in range(theta.size):
            e = np.zeros(theta.size)
            e[j] = h
            cols.append((np.asarray(phi(theta + e)) - np.asarray(phi(theta - e)))
                        / (2.0 * h))
        return np.stack(cols, axis=-1)
    return dphi


def _fd_hessian(phi, n_amb, h):
    def d2phi(theta):
        theta = np.asarray(theta, dtype=np.float64)
        k = theta.size
        out = np.empty((n_amb, k, k))
        f0 = np.asarray(phi(theta))
        for i in range(k):
            for j in range(i, k):
                ei = np.zeros(k); ei[i] = h
                ej = np.zeros(k); ej[j] = h
                if i == j:
                    val = (np.asarray(phi(theta + ei)) - 2.0 * f0
                           + np.asarray(phi(theta - ei))) / h ** 2
                else:
                    val = (np.asarray(phi(theta + ei + ej))
                           - np.asarray(phi(theta + ei - ej))
                           - np.asarray(phi(theta - ei + ej))
                           + np.asarray(phi(theta - ei - ej))) / (4.0 * h ** 2)
                out[:, i, j] = val
                out[:, j, i] = val
        return out
    return d2phi


def sphere_patch(R: float = 1.0, N: int = 3) -> SurfacePatch:
    """Sphere of radius R.  N = 3 uses the (colatitude, azimuth) chart,
    ordered so the cofactor normal is outward; N = 2 is the clockwise
    circle chart for the same reason."""
    if N == 3:
        def phi(t):
            th, ph = t
            return R * np.array([math.cos(ph) * math.sin(th),
                                 math.sin(ph) * math.sin(th),
                                 math.cos(th)])

        def dphi(t):
            th, ph = t
            st, ct = math.sin(th), math.cos(th)
            sp, cp = math.sin(ph), math.cos(ph)
            return R * np.array([[cp * ct, -sp * st],
                                 [sp * ct, cp * st],
                                 [-st, 0.0]])

        def d2phi(t):
            th, ph = t
            st, ct = math.sin(th), math.cos(th)
            sp, cp = math.sin(ph), math.cos(ph)
            out = np.empty((3, 2, 2))
            out[:, 0, 0] = R * np.array([-cp * st, -sp * st, -ct])
            out[:, 0, 1] = out[:, 1, 0] = R * np.array([-sp * ct, cp * ct, 0.0])
            out[:, 1, 1] = R * np.array([-cp * st, -sp * st, 0.0])
            return out

        return SurfacePatch(3, ((0.05, math.pi - 0.05), (0.0, 2 * math.pi)),
                            phi, dphi, d2phi)
    if N == 2:
        def phi2(t):
            return R * np.array([math.cos(t[0]), -math.sin(t[0])])

        def dphi2(t):
            return R * np.array([[-math.sin(t[0])], [-math.cos(t[0])]])

        def d2phi2(t):
            return R * np.array([[[-math.cos(t[0])]], [[math.sin(t[0])]]])

        return SurfacePatch(2, ((0.0, 2 * math.pi),), phi2, dphi2, d2phi2)
    raise ValueError("sphere patch implemented for N in {2, 3}")


def plane_patch(normal_axis: int = 2) -> SurfacePatch:
    def phi(t):
        out = np.zeros(3)
        k = 0
        for i in range(3):
            if i != normal_axis:
                out[i] = t[k]
                k += 1
        return out

    return SurfacePatch(3, ((-1.0, 1.0), (-1.0, 1.0)), phi)


def cylinder_patch(R: float = 1.0) -> SurfacePatch:
    """Cylinder of radius R about the z axis, chart (angle, height)."""
    def phi(t):
        return np.array([R * math.cos(t[0]), R * math.sin(t[0]), t[1]])

    def dphi(t):
        return np.array([[-R * math.sin(t[0]), 0.0],
                         [R * math.cos(t[0]), 0.0],
                         [0.0, 1.0]])

    def d2phi(t):
        out = np.zeros((3, 2, 2))
        out[0, 0, 0] = -R * math.cos(t[0])
        out[1, 0, 0] = -R * math.sin(t[0])
        return out

    return SurfacePatch(3, ((0.0, 2 * math.pi), (-1.0, 1.0)), phi, dphi, d2phi)


def graph_patch(h, grad_h=None, hess_h=None,
                domain=((-1.0, 1.0), (-1.0, 1.0))) -> SurfacePatch:
    """Graph x_3 = h(x_1, x_2) over a box."""
    def phi(t):
        return np.array([t[0], t[1], float(h(t))])

    if grad_h is not None and hess_h is not None:
        def dphi(t):
            g = np.asarray(grad_h(t), dtype=np.float64)
            return np.array([[1.0, 0.0], [0.0, 1.0], [g[0], g[1]]])

        def d2phi(t):
            hh = np.asarray(hess_h(t), dtype=np.float64)
            out = np.zeros((3, 2, 2))
            out[2] = hh
            return out

        return SurfacePatch(3, domain, phi, dphi, d2phi)
    return SurfacePatch(3, domain, phi)


# --------------------------------------------------------------------------
# frame, forms, curvature


@dataclass(frozen=True)
class GeometryAtPoint:
    theta: np.ndarray
    x: np.ndarray
    tau: np.ndarray          # (N-1, N) tangent rows
    n: np.ndarray
    G: np.ndarray
    Ginv: np.ndarray
    g: float
    L: np.ndarray
    christoffel: np.ndarray  # [k, i, j]
    H: float                 # trace(G^{-1} L), convention Delta x = H n
    H_mean: float            # H / (N-1)


def _cofactor_normal(dp):
    """Unnormalized cofactor normal of an N x (N-1) derivative matrix."""
    n_amb = dp.shape[0]
    out = np.empty(n_amb)
    for i in range(n_amb):
        minor = np.delete(dp, i, axis=0)
        out[i] = (-1.0) ** (n_amb + 1 + i) * np.linalg.det(minor)
    return out


def unit_normal(patch: SurfacePatch, theta):
    """Cofactor unit normal; raises on rank-deficient charts."""
    dp = np.asarray(patch.dphi(theta), dtype=np.float64)
    raw = _cofactor_normal(dp)
    nrm = np.linalg.norm(raw)
    col_scale = np.prod(np.linalg.norm(dp, axis=0))
    if nrm <= 1e-12 * max(col_scale, 1e-300):
        raise RankDeficiencyError(f"chart not an immersion at theta={theta}")
    return raw / nrm


def fundamental_forms(patch: SurfacePatch, theta):
    """(G, L, g, Ginv) at a chart point."""
    dp = np.asarray(patch.dphi(theta), dtype=np.float64)
    d2 = np.asarray(patch.d2phi(theta), dtype=np.float64)
    n = unit_normal(patch, theta)
    G = dp.T @ dp
    L = np.einsum("mij,m->ij", d2, n)
    g = float(np.linalg.det(G))
    Ginv = np.linalg.inv(G)
    return G, L, g, Ginv


def christoffel_direct(patch: SurfacePatch, theta):
    """Lambda^k_{ij} = <tau_ij, tau^k> straight from the chart derivatives."""
    dp = np.asarray(patch.dphi(theta), dtype=np.float64)
    d2 = np.asarray(patch.d2phi(theta), dtype=np.float64)
    G = dp.T @ dp
    Ginv = np.linalg.inv(G)
    tau_up = Ginv @ dp.T                        # rows tau^k
    return np.einsum("km,mij->kij", tau_up, d2)


def christoffel(patch: SurfacePatch, theta, metric_step: float | None = None):
    """Lambda^r_{ij} = 1/2 g^{rk} (d_i g_jk + d_j g_ki - d_k g_ij).

    The metric derivatives come from the chart's second derivatives in
    analytic mode, or from central differences of G with ``metric_step``
    otherwise.
    """
    theta = np.asarray(theta, dtype=np.float64)
    dp = np.asarray(patch.dphi(theta), dtype=np.float64)
    G = dp.T @ dp
    Ginv = np.linalg.inv(G)
    k = patch.dim_param
    dG = np.empty((k, k, k))
    if patch.deriv_mode == "analytic" and metric_step is None:
        d2 = np.asarray(patch.d2phi(theta), dtype=np.float64)
        # d_i g_jk = <tau_ij, tau_k> + <tau_j, tau_ik>
        t_d2 = np.einsum("mij,mk->ijk", d2, dp)
        for i in range(k):
            dG[i] = t_d2[i] + t_d2[i].T
    else:
        h = metric_step or patch.fd_step
        for i in range(k):
            e = np.zeros(k); e[i] = h
            dpp = np.asarray(patch.dphi(theta + e), dtype=np.float64)
            dpm = np.asarray(patch.dphi(theta - e), dtype=np.float64)
            dG[i] = (dpp.T @ dpp - dpm.T @ dpm) / (2.0 * h)
    lam = np.empty((k, k, k))
    for r in range(k):
        for i in range(k):
            for j in range(k):
                acc = 0.0
                for s in range(k):
                    acc += Ginv[r, s] * (dG[i][j, s] + dG[j][s, i] - dG[s][i, j])
                lam[r, i, j] = 0.5 * acc
    return lam


def geometry_at(patch: SurfacePatch, theta) -> GeometryAtPoint:
    theta = np.asarray(theta, dtype=np.float64)
    dp = np.asarray(patch.dphi(theta), dtype=np.float64)
    G, L, g, Ginv = fundamental_forms(patch, theta)
    n = unit_normal(patch, theta)
    lam = christoffel_direct(patch, theta)
    H = float(np.einsum("ij,ij->", Ginv, L))
    return GeometryAtPoint(theta=theta, x=np.asarray(patch.phi(theta)),
                           tau=dp.T, n=n, G=G, Ginv=Ginv, g=g, L=L,
                           christoffel=lam, H=H,
                           H_mean=H / (patch.dim_param))


# --------------------------------------------------------------------------
# scalar fields on a chart


@dataclass(frozen=True)
class ChartScalarField:
    """Scalar field on chart coordinates with analytic derivatives."""

    value: object
    grad: object
    hess: object

    @staticmethod
    def from_ambient(patch: SurfacePatch, f, grad_f, hess_f):
        """Restrict an ambient function to the chart by the chain rule."""
        def value(theta):
            return float(f(np.asarray(patch.phi(theta))))

        def grad(theta):
            x = np.asarray(patch.phi(theta))
            dp = np.asarray(patch.dphi(theta))
            return np.asarray(grad_f(x)) @ dp

        def hess(theta):
            x = np.asarray(patch.phi(theta))
            dp = np.asarray(patch.dphi(theta))
            d2 = np.asarray(patch.d2phi(theta))
            hf = np.asarray(hess_f(x))
            gf = np.asarray(grad_f(x))
            return dp.T @ hf @ dp + np.einsum("m,mij->ij", gf, d2)

        return ChartScalarField(value, grad, hess)

    @staticmethod
    def from_harmonic(y: RealSphericalHarmonic):
        """Y_{l,m} as a field on the (theta, phi) sphere chart."""
        def value(t):
            return float(y.value(t[0], t[1]))

        def grad(t):
            return np.array([y.d_theta(t[0], t[1]), y.d_phi(t[0], t[1])])

        def hess(t):
            tt = y.d2_theta(t[0], t[1])
            tp = y.d2_theta_phi(t[0], t[1])
            pp = y.d2_phi(t[0], t[1])
            return np.array([[tt, tp], [tp, pp]])

        return ChartScalarField(value, grad, hess)


def ambient_coordinate_field(patch: SurfacePatch, i: int) -> ChartScalarField:
    """The restriction of x_i to the surface."""
    n = patch.dim_ambient
    e = np.zeros(n); e[i] = 1.0
    return ChartScalarField.from_ambient(
        patch, lambda x: x[i], lambda x: e, lambda x: np.zeros((n, n)))


def laplace_beltrami(patch: SurfacePatch, f: ChartScalarField, theta) -> float:
    """g^{ij} d_i d_j f - g^{ik} Lambda^j_{ik} d_j f."""
    geo = geometry_at(patch, theta)
    h = np.asarray(f.hess(theta))
    gr = np.asarray(f.grad(theta))
    return float(np.einsum("ij,ij->", geo.Ginv, h)
                 - np.einsum("ik,jik,j->", geo.Ginv, geo.christoffel, gr))


def laplace_beltrami_divergence_form(patch: SurfacePatch, f: ChartScalarField,
                                     theta, step: float = 1e-5) -> float:
    """(1/sqrt g) d_i (sqrt g g^{ij} d_j f), flux derivatives by FD."""
    theta = np.asarray(theta, dtype=np.float64)
    k = patch.dim_param

    def flux(t):
        G_t, _, g_t, Ginv_t = fundamental_forms(patch, t)
        return math.sqrt(g_t) * (Ginv_t @ np.asarray(f.grad(t)))

    acc = 0.0
    for i in range(k):
        e = np.zeros(k); e[i] = step
        acc += (flux(theta + e)[i] - flux(theta - e)[i]) / (2.0 * step)
    _, _, g0, _ = fundamental_forms(patch, theta)
    return float(acc / math.sqrt(g0))


def mean_curvature(patch: SurfacePatch, theta):
    """(H, n) with H computed two ways and cross-checked.

    Route one applies the chart Laplacian to each ambient component of phi
    and projects on the normal; route two is trace(G^{-1} L).  Their
    difference is returned in the ``spread`` attribute of the result.
    """
    geo = geometry_at(patch, theta)
    lap_phi = np.empty(patch.dim_ambient)
    d2 = np.asarray(patch.d2phi(theta))
    dp = geo.tau.T
    for m in range(patch.dim_ambient):
        lap_phi[m] = (np.einsum("ij,ij->", geo.Ginv, d2[m])
                      - np.einsum("ik,jik,j->", geo.Ginv, geo.christoffel,
                                  dp[m]))
    h_proj = float(np.dot(lap_phi, geo.n))
    return h_proj, geo.n, abs(h_proj - geo.H)


def frame_divergence_residual(patch: SurfacePatch, theta,
                              step: float = 1e-5) -> float:
    """Residual of d_i(sqrt g g^{ij} tau_j) = sqrt g g^{ij} l_ij n,
    left side by central differences."""
    theta = np.asarray(theta, dtype=np.float64)
    k = patch.dim_param

    def w(t, i):
        dp = np.asarray(patch.dphi(t))
        G = dp.T @ dp
        Ginv = np.linalg.inv(G)
        return math.sqrt(np.linalg.det(G)) * (dp @ Ginv)[:, i]

    lhs = np.zeros(patch.dim_ambient)
    for i in range(k):
        e = np.zeros(k); e[i] = step
        lhs += (w(theta + e, i) - w(theta - e, i)) / (2.0 * step)
    geo = geometry_at(patch, theta)
    rhs = math.sqrt(geo.g) * geo.H * geo.n
    scale = max(float(np.linalg.norm(rhs)), 1.0)
    return float(np.linalg.norm(lhs - rhs)) / scale


# --------------------------------------------------------------------------
# spherical graphs r = r(phi, theta)


@dataclass(frozen=True)
class SphericalGraph:
    """Closed surface |x| = r(omega) over the unit sphere (N = 3).

    Evaluators take (phi, theta) in that order, phi the azimuth; every
    second derivative is supplied (or finite-differenced by the caller).
    """

    r: object
    r_phi: object
    r_theta: object
    r_phiphi: object
    r_phitheta: object
    r_thetatheta: object

    @staticmethod
    def from_harmonics(R: float, series):
        """r = R + sum of real harmonic terms [(l, m, coef), ...]."""
        bundle = sum_harmonics(series)

        return SphericalGraph(
            r=lambda p, t: R + bundle["value"](t, p),
            r_phi=lambda p, t: bundle["d_phi"](t, p),
            r_theta=lambda p, t: bundle["d_theta"](t, p),
            r_phiphi=lambda p, t: bundle["d2_phi"](t, p),
            r_phitheta=lambda p, t: bundle["d2_theta_phi"](t, p),
            r_thetatheta=lambda p, t: bundle["d2_theta"](t, p),
        )


def spherical_graph_patch(graph: SphericalGraph) -> SurfacePatch:
    """Chart (theta, phi) -> r(phi, theta) omega(theta, phi); outward
    cofactor normal."""
    def omega(th, ph):
        return np.array([math.cos(ph) * math.sin(th),
                         math.sin(ph) * math.sin(th),
                         math.cos(th)])

    def d_omega(th, ph):
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        d_th = np.array([cp * ct, sp * ct, -st])
        d_ph = np.array([-sp * st, cp * st, 0.0])
        return d_th, d_ph

    def phi_fn(t):
        th, ph = t
        return graph.r(ph, th) * omega(th, ph)

    def dphi_fn(t):
        th, ph = t
        w = omega(th, ph)
        d_th, d_ph = d_omega(th, ph)
        r = graph.r(ph, th)
        return np.stack([graph.r_theta(ph, th) * w + r * d_th,
                         graph.r_phi(ph, th) * w + r * d_ph], axis=-1)

    def d2phi_fn(t):
        th, ph = t
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        w = omega(th, ph)
        d_th, d_ph = d_omega(th, ph)
        w_thth = -w
        w_thph = np.array([-sp * ct, cp * ct, 0.0])
        w_phph = np.array([-cp * st, -sp * st, 0.0])
        r = graph.r(ph, th)
        rt, rp = graph.r_theta(ph, th), graph.r_phi(ph, th)
        rtt = graph.r_thetatheta(ph, th)
        rtp = graph.r_phitheta(ph, th)
        rpp = graph.r_phiphi(ph, th)
        out = np.empty((3, 2, 2))
        out[:, 0, 0] = rtt * w + 2.0 * rt * d_th + r * w_thth
        out[:, 0, 1] = out[:, 1, 0] = rtp * w + rt * d_ph + rp * d_th + r * w_thph
        out[:, 1, 1] = rpp * w + 2.0 * rp * d_ph + r * w_phph
        return out

    return SurfacePatch(3, ((0.05, math.pi - 0.05), (0.0, 2 * math.pi)),
                        phi_fn, dphi_fn, d2phi_fn)


def spherical_graph_mean_curvature(graph: SphericalGraph, phi: float,
                                   theta: float) -> float:
    """Doubled mean curvature of |x| = r(omega) in divergence form:

        H = (1/(r sin t)) [ d_phi( r_phi / (sin t W) )
                            + d_theta( sin t r_theta / W ) ] - 2/W,

    W = sqrt(r^2 + r_theta^2 + (r_phi / sin t)^2), outward normal.
    """
    st = math.sin(theta)
    if abs(st) < 1e-8:
        raise PoleProximityError("spherical graph formula needs sin(theta) != 0")
    ct = math.cos(theta)
    r = graph.r(phi, theta)
    rp = graph.r_phi(phi, theta)
    rt = graph.r_theta(phi, theta)
    rpp = graph.r_phiphi(phi, theta)
    rpt = graph.r_phitheta(phi, theta)
    rtt = graph.r_thetatheta(phi, theta)

    w2 = r * r + rt * rt + (rp / st) ** 2
    w = math.sqrt(w2)
    dw_dphi = (r * rp + rt * rpt + rp * rpp / st ** 2) / w
    dw_dtheta = (r * rt + rt * rtt + rp * rpt / st ** 2
                 - rp * rp * ct / st ** 3) / w

    term_phi = rpp / (st * w) - rp * dw_dphi / (st * w2)
    term_theta = (ct * rt / w + st * rtt / w - st * rt * dw_dtheta / w2)
    return (term_phi + term_theta) / (r * st) - 2.0 / w


# --------------------------------------------------------------------------
# integral identities and compatibility conditions


def closed_surface_identities(graph: SphericalGraph, n_theta: int = 48,
                              n_phi: int = 96):
    """Integrals over the closed surface that vanish by the divergence
    structure of Delta_Gamma:

        int Delta_Gamma x_i domega        (force balance)
        int (x_i Delta_Gamma x_j - x_j Delta_Gamma x_i) domega (torque)

    Both use Delta_Gamma x = H n with the pipeline H.  Returns the two
    maximal absolute values, normalized by surface area.
    """
    patch = spherical_graph_patch(graph)
    th, ph, w = sphere_quadrature(n_theta, n_phi)
    force = np.zeros(3)
    torque = np.zeros((3, 3))
    area = 0.0
    for t, p, wq in zip(th, ph, w):
        geo = geometry_at(patch, (t, p))
        # quadrature weight contains sin(theta); replace by chart area
        da = wq / math.sin(t) * math.sqrt(geo.g)
        hn = geo.H * geo.n
        force += da * hn
        torque += da * (np.outer(geo.x, hn) - np.outer(hn, geo.x))
        area += da
    return float(np.max(np.abs(force))) / area, float(np.max(np.abs(torque))) / area


def compatibility_residual(rho0, R: float, n_theta: int = 48, n_phi: int = 96):
    """Volume and barycenter compatibility sums for a height field on S_R.

        sum_{k=1}^{N}   C(N, k)   int (rho0/R)^k domega
        sum_{k=1}^{N+1} C(N+1, k) int y_i (rho0/R)^k domega

    `rho0` maps ambient points on S_R (shape (..., 3)) to heights; N = 3.
    """
    th, ph, w = sphere_quadrature(n_theta, n_phi, R=R)
    y = spharm.sphere_points(th, ph, R=R)
    rho = np.asarray(rho0(y), dtype=np.float64) / R
    vol = 0.0
    for k in range(1, 4):
        vol += math.comb(3, k) * float(np.sum(w * rho ** k))
    bary = np.zeros(3)
    for k in range(1, 5):
        bary += math.comb(4, k) * (w * rho ** k) @ y
    return vol, bary


# --------------------------------------------------------------------------
# JSON surface loading


def surface_from_json(doc) -> SurfacePatch:
    """Build a patch from a JSON description.

    kinds: {"kind": "sphere", "R": r}
           {"kind": "spherical_graph", "R": r, "r_series": [[l, m, c], ...]}
           {"kind": "graph", "h_series": [[i, j, c], ...],
            "domain": [[lo, hi], [lo, hi]]}
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    kind = doc.get("kind")
    if kind == "sphere":
        return sphere_patch(R=float(doc["R"]), N=int(doc.get("N", 3)))
    if kind == "spherical_graph":
        graph = SphericalGraph.from_harmonics(float(doc.get("R", 1.0)),
                                              doc["r_series"])
        return spherical_graph_patch(graph)
    if kind == "graph":
        series = [(int(i), int(j), float(c)) for i, j, c in doc["h_series"]]
        dom = tuple(tuple(map(float, pair)) for pair in
                    doc.get("domain", [[-1.0, 1.0], [-1.0, 1.0]]))

        def h(t):
            return sum(c * t[0] ** i * t[1] ** j for i, j, c in series)

        def grad_h(t):
            gx = sum(c * i * t[0] ** (i - 1) * t[1] ** j
                     for i, j, c in series if i > 0)
            gy = sum(c * j * t[0] ** i * t[1] ** (j - 1)
                     for i, j, c in series if j > 0)
            return np.array([gx, gy])

        def hess_h(t):
            xx = sum(c * i * (i - 1) * t[0] ** (i - 2) * t[1] ** j
                     for i, j, c in series if i > 1)
            xy = sum(c * i * j * t[0] ** (i - 1) * t[1] ** (j - 1)
                     for i, j, c in series if i > 0 and j > 0)
            yy = sum(c * j * (j - 1) * t[0] ** i * t[1] ** (j - 2)
                     for i, j, c in series if j > 1)
            return np.array([[xx, xy], [xy, yy]])

        return graph_patch(h, grad_h, hess_h, domain=dom)
    raise ValueError(f"unknown surface kind {kind!r}")
