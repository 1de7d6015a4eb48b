"""Whole-space resolvent and weak Laplace/Dirichlet solvers.

The resolvent solver is pure Fourier algebra at sampled frequencies:

    g    = i xi . f / (lambda + |xi|^2)
    gvec = (f + i xi g) / lambda
    u    = f / (lambda + mu |xi|^2)
           + (mu - 1) xi (xi . f) / ((lambda + mu |xi|^2)(lambda + |xi|^2))
    q    = 2 mu g - (i xi . f - lambda i xi . gvec) / |xi|^2

which satisfies lambda u + mu |xi|^2 u + mu xi (xi.u) + i xi q = f and
i xi . u = g.  The half-space weak Dirichlet problem is solved in physical
space through odd/even reflection on a periodic box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SupportTouchesBoundaryError
from .symbols import ResolventPoint

__all__ = [
    "WholeSpaceSolution",
    "solve_weak_dirichlet_halfspace",
    "solve_weak_laplace_wholespace",
    "solve_wholespace",
    "wholespace_residuals",
]


@dataclass(frozen=True)
class WholeSpaceSolution:
    """Evaluators for (u, g, gvec, q) at frequency samples xi != 0."""

    point: ResolventPoint
    f_hat: object  # callable xi -> (N,) complex

    def _parts(self, xi):
        xi = np.asarray(xi, dtype=np.float64)
        if np.all(xi == 0.0):
            raise ZeroDivisionError("whole-space formulas need |xi| > 0")
        lam, mu = self.point.lam, self.point.mu
        f = np.asarray(self.f_hat(xi), dtype=np.complex128)
        xi2 = float(np.dot(xi, xi))
        ixf = 1j * np.dot(xi, f)
        g = ixf / (lam + xi2)
        gvec = (f + 1j * xi * g) / lam
        u = f / (lam + mu * xi2) + (mu - 1.0) * xi * np.dot(xi, f) / (
            (lam + mu * xi2) * (lam + xi2))
        q = 2.0 * mu * g - (ixf - lam * 1j * np.dot(xi, gvec)) / xi2
        return f, u, g, gvec, q

    def u_hat(self, xi):
        return self._parts(xi)[1]

    def g_hat(self, xi):
        return self._parts(xi)[2]

    def gvec_hat(self, xi):
        return self._parts(xi)[3]

    def q_hat(self, xi):
        return self._parts(xi)[4]


def solve_wholespace(point: ResolventPoint, f_hat) -> WholeSpaceSolution:
    """Resolvent solution operator in Fourier variables."""
    return WholeSpaceSolution(point=point, f_hat=f_hat)


def wholespace_residuals(sol: WholeSpaceSolution, xi_samples) -> dict[str, float]:
    """Max normalized momentum/divergence residuals over xi samples."""
    lam, mu = sol.point.lam, sol.point.mu
    worst_mom = 0.0
    worst_div = 0.0
    for xi in xi_samples:
        xi = np.asarray(xi, dtype=np.float64)
        f, u, g, gvec, q = sol._parts(xi)
        xi2 = float(np.dot(xi, xi))
        mom = lam * u + mu * xi2 * u + mu * xi * np.dot(xi, u) + 1j * xi * q - f
        scale = max(float(np.max(np.abs(f))),
                    (abs(lam) + mu * xi2) * float(np.max(np.abs(u))), 1e-300)
        worst_mom = max(worst_mom, float(np.max(np.abs(mom))) / scale)
        div = 1j * np.dot(xi, u) - g
        dscale = max(abs(g), float(np.sqrt(xi2) * np.max(np.abs(u))), 1e-300)
        worst_div = max(worst_div, abs(div) / dscale)
    return {"momentum": worst_mom, "divergence": worst_div}


def solve_weak_laplace_wholespace(f_hat):
    """Return the evaluator u(xi) = -i xi . f(xi) / |xi|^2.

    Solves Delta u = div f in Fourier variables: -|xi|^2 u = i xi . f.
    """

    def u_hat(xi):
        xi = np.asarray(xi, dtype=np.float64)
        xi2 = float(np.dot(xi, xi))
        if xi2 == 0.0:
            raise ZeroDivisionError("xi = 0 not admissible")
        f = np.asarray(f_hat(xi), dtype=np.complex128)
        return -1j * np.dot(xi, f) / xi2

    return u_hat


@dataclass(frozen=True)
class HalfspaceGridSolution:
    """u on the upper half of the reflection box, plus grid metadata."""

    u: np.ndarray
    axes: tuple[np.ndarray, ...]
    h: float
    box_half: float


def solve_weak_dirichlet_halfspace(f, support_radius: float, center,
                                   n: int = 64) -> HalfspaceGridSolution:
    """Solve Delta u = div f in the half space, u = 0 on the boundary.

    `f` maps points (shape (..., N)) to vectors (shape (..., N)) and must
    be supported in the ball of `support_radius` around `center`, with
    center[N-1] > support_radius so the support stays off the boundary.
    Tangential components are extended oddly and the normal component
    evenly across x_N = 0, which makes div f odd and the Fourier-inverted
    u odd; the domain is a periodic box whose side is four support
    diameters.
    """
    center = np.asarray(center, dtype=np.float64)
    ndim = center.size
    if center[-1] <= support_radius:
        raise SupportTouchesBoundaryError(
            "support ball reaches x_N = 0; reflections would be non-smooth")
    box_half = 4.0 * support_radius + center[-1]
    axes = tuple(np.linspace(-box_half, box_half, n, endpoint=False)
                 for _ in range(ndim))
    h = axes[0][1] - axes[0][0]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1)

    # reflected evaluation: f^o for tangential components, f^e for normal
    mirror = pts.copy()
    mirror[..., -1] = np.abs(mirror[..., -1])
    vals = np.asarray(f(mirror), dtype=np.float64)
    sign = np.where(pts[..., -1] >= 0.0, 1.0, -1.0)
    ext = vals.copy()
    for j in range(ndim - 1):
        ext[..., j] *= sign          # odd tangential extension
    # normal component: even extension, no sign flip

    freqs = [2.0 * np.pi * np.fft.fftfreq(n, d=h) for _ in range(ndim)]
    kmesh = np.meshgrid(*freqs, indexing="ij")
    k2 = sum(k * k for k in kmesh)
    div_hat = np.zeros_like(k2, dtype=np.complex128)
    for j in range(ndim):
        div_hat += 1j * kmesh[j] * np.fft.fftn(ext[..., j])
    with np.errstate(divide="ignore", invalid="ignore"):
        u_hat = np.where(k2 > 0.0, -div_hat / k2, 0.0)
    u = np.real(np.fft.ifftn(u_hat))
    return HalfspaceGridSolution(u=u, axes=axes, h=float(h),
                                 box_half=float(box_half))
