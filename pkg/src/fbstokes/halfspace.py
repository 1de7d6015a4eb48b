"""Explicit solution formulas for the half-space model problems.

Solutions of the transformed systems are superpositions of the three decay
kernels e^{-A x_N}, e^{-B x_N} and M(x_N) = (e^{-Bx_N} - e^{-Ax_N})/(B-A);
a :class:`FourierProfile` stores the coefficients of each velocity
component and the pressure on that basis, so normal derivatives are exact
coefficient algebra:

    d/dx_N:  e^{-Ax} -> -A e^{-Ax},   e^{-Bx} -> -B e^{-Bx},
             M(x)    -> -e^{-Bx} - A M(x).

Sign bookkeeping.  With boundary data h_hat (traces hat h_j(xi', 0)) and
g = -h_hat, the assembled profiles satisfy

    lambda v_j + mu (A^2 - d_N^2) v_j + i xi_j theta = 0        (j < N),
    lambda v_N + mu (A^2 - d_N^2) v_N + d_N theta  = 0,
    sum_j i xi_j v_j + d_N v_N = 0,
    mu (d_N v_j + i xi_j v_N)|_0 = g_j,    (2 mu d_N v_N - theta)|_0 = g_N.

The surface-tension model couples the same solver (tangential data 0,
normal datum sigma A^2 h) to the height relation h = mu D(A,B)/E_kappa d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EKappaNearZeroError, SingularLopatinskiError
from .symbols import ResolventPoint, TangentialFrequency, compute_B, compute_B0

__all__ = [
    "BoundaryDatum",
    "FourierProfile",
    "VolevichResult",
    "apply_volevich_operator",
    "chebyshev_points",
    "neumann_residuals",
    "profile_from_json",
    "profile_to_json",
    "solve_lopatinski",
    "solve_neumann_model",
    "solve_pressure_auxiliary",
    "solve_surface_tension_model",
    "tension_residuals",
]

_SINGULAR_TOL = 1e-13


@dataclass(frozen=True)
class BoundaryDatum:
    """Boundary data in Fourier variables.

    ``g_hat`` holds the components g_j = -hat h_j(xi', 0); ``d_hat`` the
    scalar surface datum of the kinematic equation.
    """

    g_hat: np.ndarray
    d_hat: complex = 0.0

    def __post_init__(self):
        g = np.asarray(self.g_hat, dtype=np.complex128)
        if not np.all(np.isfinite(g)):
            raise ValueError("boundary datum must be finite")
        object.__setattr__(self, "g_hat", g)


@dataclass(frozen=True)
class FourierProfile:
    """Mode decomposition of one half-space solution.

    ``coef_expA`` has length N+1: entries 0..N-1 are the e^{-Ax_N}
    coefficients of v_1..v_N and entry N is the pressure coefficient
    (the pressure rides on e^{-Ax_N} only).  ``coef_expB`` and ``coef_M``
    hold the velocity coefficients of the other two kernels.
    """

    coef_expA: np.ndarray
    coef_expB: np.ndarray
    coef_M: np.ndarray
    freq: TangentialFrequency
    point: ResolventPoint
    h_hat: complex | None = None
    B: complex = field(init=False)

    def __post_init__(self):
        for name in ("coef_expA", "coef_expB", "coef_M"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=np.complex128))
        n = self.coef_expB.size
        if self.coef_expA.size != n + 1 or self.coef_M.size != n:
            raise ValueError("coefficient arrays have inconsistent lengths")
        object.__setattr__(self, "B", compute_B(self.point, self.freq))

    @property
    def n_components(self) -> int:
        return self.coef_expB.size

    def _kernels_at(self, x):
        x = np.asarray(x, dtype=np.float64)
        a, b = self.freq.A, self.B
        ea = np.exp(-a * x)
        eb = np.exp(-b * x)
        m = _kernels.kernel_M(x, complex(a), b)
        return ea, eb, m

    def velocity(self, x):
        """v_hat(x_N) for scalar or array x_N; shape (..., N)."""
        ea, eb, m = self._kernels_at(x)
        va = self.coef_expA[:-1]
        return (np.multiply.outer(ea, va)
                + np.multiply.outer(eb, self.coef_expB)
                + np.multiply.outer(m, self.coef_M))

    def pressure(self, x):
        ea, _, _ = self._kernels_at(x)
        return ea * self.coef_expA[-1]

    def d_velocity(self, x, order: int = 1):
        """Analytic d^order/dx_N^order of the velocity modes."""
        a_c, b_c, m_c = self._deriv_coefs(order)
        ea, eb, m = self._kernels_at(x)
        return (np.multiply.outer(ea, a_c)
                + np.multiply.outer(eb, b_c)
                + np.multiply.outer(m, m_c))

    def d_pressure(self, x, order: int = 1):
        ea, _, _ = self._kernels_at(x)
        return ea * (-self.freq.A) ** order * self.coef_expA[-1]

    def _deriv_coefs(self, order: int):
        a = self.freq.A
        b = self.B
        a_c = self.coef_expA[:-1].copy()
        b_c = self.coef_expB.copy()
        m_c = self.coef_M.copy()
        for _ in range(order):
            a_c, b_c, m_c = -a * a_c, -b * b_c - m_c, -a * m_c
        return a_c, b_c, m_c

    def divergence_coefficients(self):
        """Kernel-basis coefficients of sum_j i xi_j v_j + d_N v_N.

        All three vanish identically for every profile this module builds;
        returned for the coefficient-level divergence check.
        """
        xi = np.asarray(self.freq.xi_prime)
        a_c, b_c, m_c = self._deriv_coefs(1)
        n = self.n_components - 1
        div_a = 1j * np.dot(xi, self.coef_expA[:n]) + a_c[n]
        div_b = 1j * np.dot(xi, self.coef_expB[:n]) + b_c[n]
        div_m = 1j * np.dot(xi, self.coef_M[:n]) + m_c[n]
        return div_a, div_b, div_m

    def scale(self, c: complex) -> "FourierProfile":
        return FourierProfile(
            coef_expA=c * self.coef_expA, coef_expB=c * self.coef_expB,
            coef_M=c * self.coef_M, freq=self.freq, point=self.point,
            h_hat=None if self.h_hat is None else c * self.h_hat)

    def add(self, other: "FourierProfile") -> "FourierProfile":
        if other.freq != self.freq or other.point != self.point:
            raise ValueError("profiles live at different parameters")
        h = None
        if self.h_hat is not None and other.h_hat is not None:
            h = self.h_hat + other.h_hat
        return FourierProfile(
            coef_expA=self.coef_expA + other.coef_expA,
            coef_expB=self.coef_expB + other.coef_expB,
            coef_M=self.coef_M + other.coef_M,
            freq=self.freq, point=self.point, h_hat=h)


def chebyshev_points(n: int, upper: float) -> np.ndarray:
    """Chebyshev nodes mapped to [0, upper], decay-scale sampling."""
    k = np.arange(n)
    t = np.cos((2 * k + 1) * np.pi / (2 * n))
    return 0.5 * upper * (1.0 + t[::-1])


def solve_lopatinski(A: float, B: complex, mu: float,
                     rhs_tangential: complex, rhs_normal: complex):
    """Solve the 2x2 boundary system for (alpha_N, beta_N, omega).

        2 A^2 alpha_N + (A^2 + B^2) beta_N = rhs_tangential / mu
        (A^2 + B^2) alpha_N + 2 A B beta_N = A rhs_normal / mu

    with rhs_tangential = i xi'.g' and rhs_normal = g_N.  omega (the
    pressure amplitude) uses the closed form -(A+B)(2B i xi'.g' -
    (A^2+B^2) g_N)/D, which extends continuously to A = 0 where the raw
    expression mu (B^2 - A^2) alpha_N / A is 0/0.
    """
    d = complex(_kernels.symbol_D(np.float64(A), np.complex128(B)))
    det = (B - A) * d
    scale = (abs(A) + abs(B)) ** 4
    if abs(det) <= _SINGULAR_TOL * scale or scale == 0.0:
        raise SingularLopatinskiError(
            f"|(B-A) D| = {abs(det):.3e} below threshold at A={A}, B={B}")
    s = A * A + B * B
    beta_n = (s * rhs_tangential - 2.0 * A ** 3 * rhs_normal) / (mu * det)
    alpha_n = -(2.0 * A * B * rhs_tangential - s * A * rhs_normal) / (mu * det)
    omega = -(A + B) * (2.0 * B * rhs_tangential - s * rhs_normal) / d
    return alpha_n, beta_n, omega


def solve_neumann_model(point: ResolventPoint, freq: TangentialFrequency,
                        h_hat0) -> FourierProfile:
    """Traction-data model problem; returns the solution profile.

    ``h_hat0`` are the N boundary traces hat h_j(xi', 0); the stored datum
    follows the g = -h convention (see module docstring for the residual
    system the output satisfies).
    """
    h = np.asarray(h_hat0, dtype=np.complex128)
    n = h.size
    xi = np.asarray(freq.xi_prime, dtype=np.float64)
    if xi.size != n - 1:
        raise ValueError("xi' length must be N-1")
    A = freq.A
    B = compute_B(point, freq)
    mu = point.mu
    d = complex(_kernels.symbol_D(np.float64(A), np.complex128(B)))
    det = (B - A) * d
    if abs(det) <= _SINGULAR_TOL * (abs(A) + abs(B)) ** 4:
        raise SingularLopatinskiError(
            f"|(B-A) D| = {abs(det):.3e} below threshold")

    # internal right side: the mode formulas below produce boundary rows
    # equal to minus their argument, so feeding +h yields rows = -h = g
    gt = complex(1j * np.dot(xi, h[:-1]))   # i xi'.g' with g := h
    gn = complex(h[-1])
    s = A * A + B * B

    coef_expA = np.zeros(n + 1, dtype=np.complex128)
    coef_expB = np.zeros(n, dtype=np.complex128)
    coef_M = np.zeros(n, dtype=np.complex128)

    core = 2.0 * B * gt - s * gn
    for j in range(n - 1):
        ixj = 1j * xi[j]
        coef_expB[j] = (h[j] / (mu * B)
                        + ixj * ((3.0 * B - A) * gt - B * (B - A) * gn)
                        / (mu * d * B))
        coef_M[j] = -ixj * core / (mu * d)
    coef_expB[n - 1] = ((B - A) * gt + A * (A + B) * gn) / (mu * d)
    coef_M[n - 1] = A * core / (mu * d)
    coef_expA[n] = -(A + B) * core / d          # pressure amplitude omega

    return FourierProfile(coef_expA=coef_expA, coef_expB=coef_expB,
                          coef_M=coef_M, freq=freq, point=point)


def solve_surface_tension_model(point: ResolventPoint,
                                freq: TangentialFrequency,
                                d_hat: complex) -> FourierProfile:
    """Kinematic-data model problem with surface tension.

    The height amplitude is h = mu D(A,B) / E_kappa * d and the velocity /
    pressure profile is the traction solver driven by tangential data 0
    and normal datum sigma A^2 h.  The returned profile satisfies the
    homogeneous tangential rows, the normal-stress row
    2 mu d_N w_N - q = -sigma A^2 h at x_N = 0, and the kinematic row
    lambda h + i xi'.A_kappa h + w_N(0) = d.
    """
    A = freq.A
    B = compute_B(point, freq)
    mu, sigma = point.mu, point.sigma
    d_cubic = complex(_kernels.symbol_D(np.float64(A), np.complex128(B)))
    e_kappa = complex(_kernels.symbol_E(
        np.array([point.lam]), mu, sigma,
        np.array([freq.drift(point.a_kappa)]),
        np.array([A]), np.array([B]))[0])
    weight = (abs(point.lam) + A) * (np.sqrt(abs(point.lam)) + A) ** 3
    if abs(e_kappa) <= 1e-13 * max(weight, 1.0):
        raise EKappaNearZeroError(
            f"|E_kappa| = {abs(e_kappa):.3e} too small at lambda={point.lam}, A={A}")

    h_hat = mu * d_cubic * complex(d_hat) / e_kappa
    datum = np.zeros(len(freq.xi_prime) + 1, dtype=np.complex128)
    datum[-1] = sigma * A * A * h_hat
    profile = solve_neumann_model(point, freq, datum)
    return FourierProfile(coef_expA=profile.coef_expA,
                          coef_expB=profile.coef_expB,
                          coef_M=profile.coef_M,
                          freq=freq, point=point, h_hat=h_hat)


def solve_pressure_auxiliary(point: ResolventPoint, freq: TangentialFrequency,
                             rho_hat0: complex):
    """Boundary-trace lift g2(x_N) = e^{-B0 x_N} rho with B0^2 = lambda+A^2.

    Returns an evaluator; (lambda + A^2 - d_N^2) g2 = 0 holds identically
    because B0^2 = lambda + A^2 is a coefficient identity.
    """
    b0 = compute_B0(point, freq)

    def g2(x):
        return np.exp(-b0 * np.asarray(x, dtype=np.float64)) * rho_hat0

    g2.B0 = b0
    return g2


# --------------------------------------------------------------------------
# residual evaluation


def _momentum_residuals(profile: FourierProfile, x):
    """Interior residual rows at the sampled x_N, normalized.

    Rows j < N:  lambda v_j + mu (A^2 - d_N^2) v_j + i xi_j theta
    Row  N:      lambda v_N + mu (A^2 - d_N^2) v_N + d_N theta
    plus the divergence row  sum_j i xi_j v_j + d_N v_N.
    """
    lam, mu = profile.point.lam, profile.point.mu
    xi = np.asarray(profile.freq.xi_prime)
    A = profile.freq.A
    v = profile.velocity(x)
    d2v = profile.d_velocity(x, order=2)
    dv = profile.d_velocity(x, order=1)
    theta = profile.pressure(x)
    dtheta = profile.d_pressure(x, order=1)

    mom = lam * v + mu * (A * A * v - d2v)
    mom[..., :-1] += 1j * theta[..., None] * xi
    mom[..., -1] += dtheta
    div = np.einsum("j,...j->...", 1j * xi, v[..., :-1]) + dv[..., -1]

    scale = float(np.max(np.abs(v))) * (abs(lam) + mu * (abs(A) ** 2 + abs(profile.B) ** 2))
    scale = max(scale, 1e-300)
    return np.abs(mom) / scale, np.abs(div) / max(float(np.max(np.abs(dv))), 1e-300)


def neumann_residuals(profile: FourierProfile, h_hat0, x) -> dict[str, float]:
    """Max normalized residuals of the traction model on sampled x_N.

    Families: interior momentum, divergence (sampled and coefficient
    level), tangential boundary rows, normal-stress boundary row.
    """
    h = np.asarray(h_hat0, dtype=np.complex128)
    g = -h
    mu = profile.point.mu
    xi = np.asarray(profile.freq.xi_prime)
    mom, div = _momentum_residuals(profile, x)

    v0 = profile.velocity(0.0)
    dv0 = profile.d_velocity(0.0, order=1)
    th0 = profile.pressure(0.0)
    bc_scale = max(float(np.max(np.abs(g))),
                   mu * float(np.max(np.abs(dv0))), 1e-300)
    bc_tan = np.abs(mu * (dv0[:-1] + 1j * xi * v0[-1]) - g[:-1]) / bc_scale
    bc_nor = abs(2.0 * mu * dv0[-1] - th0[()] - g[-1]) / bc_scale

    da, db, dm = profile.divergence_coefficients()
    coef_scale = max(float(np.max(np.abs(profile.coef_expB))),
                     float(np.max(np.abs(profile.coef_M))), 1e-300)
    return {
        "momentum": float(np.max(mom)),
        "divergence": float(np.max(div)),
        "divergence_coefficients": float(max(abs(da), abs(db), abs(dm)) / coef_scale),
        "boundary_tangential": float(np.max(bc_tan)) if bc_tan.size else 0.0,
        "boundary_normal": float(bc_nor),
    }


def tension_residuals(profile: FourierProfile, d_hat: complex, x) -> dict[str, float]:
    """Residual families of the surface-tension model, including the
    kinematic row and the height relation h = mu D / E_kappa d."""
    if profile.h_hat is None:
        raise ValueError("profile carries no height amplitude")
    point, freq = profile.point, profile.freq
    mu, sigma = point.mu, point.sigma
    A = freq.A
    h = profile.h_hat
    mom, div = _momentum_residuals(profile, x)

    v0 = profile.velocity(0.0)
    dv0 = profile.d_velocity(0.0, order=1)
    q0 = profile.pressure(0.0)
    xi = np.asarray(freq.xi_prime)
    bc_scale = max(mu * float(np.max(np.abs(dv0))), abs(sigma * A * A * h), 1e-300)
    bc_tan = np.abs(mu * (dv0[:-1] + 1j * xi * v0[-1])) / bc_scale
    bc_nor = abs(2.0 * mu * dv0[-1] - q0[()] + sigma * A * A * h) / bc_scale

    kin_scale = max(abs(point.lam * h), abs(complex(d_hat)), abs(v0[-1]), 1e-300)
    drift = 1j * freq.drift(point.a_kappa)
    kin = abs((point.lam + drift) * h + v0[-1] - complex(d_hat)) / kin_scale

    # independent elimination: recover h from the assembled w_N(0) alone,
    # then reconstruct d; bypasses the stored height amplitude
    if sigma > 0.0 and A > 0.0:
        d_cubic = complex(_kernels.symbol_D(np.float64(A),
                                            np.complex128(profile.B)))
        h_rec = v0[-1] * mu * d_cubic / (sigma * A ** 3 * (A + profile.B))
        elim = abs((point.lam + drift) * h_rec + v0[-1]
                   - complex(d_hat)) / kin_scale
    else:
        elim = kin
    return {
        "momentum": float(np.max(mom)),
        "divergence": float(np.max(div)),
        "boundary_tangential": float(np.max(bc_tan)) if bc_tan.size else 0.0,
        "boundary_normal": float(bc_nor),
        "kinematic": float(kin),
        "height_elimination": float(elim),
    }


# --------------------------------------------------------------------------
# Volevich-type integral operators

_VOLEVICH_KINDS = ("L1", "L2", "L3", "L4", "L6", "L7")


def _smoothstep_cutoff(t):
    """C^2 bump: 1 on [0,1], 0 beyond 2, quintic smoothstep between."""
    t = np.abs(np.asarray(t, dtype=np.float64))
    s = np.clip(t - 1.0, 0.0, 1.0)
    return 1.0 - s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)


@dataclass(frozen=True)
class VolevichResult:
    field: np.ndarray
    kind: str
    y_nodes: np.ndarray
    y_weights: np.ndarray
    truncation: float
    n_panels: int


def _gauss_panels(upper: float, n_panels: int, per_panel: int = 10):
    """Composite Gauss-Legendre nodes/weights on [0, upper]."""
    x, w = np.polynomial.legendre.leggauss(per_panel)
    edges = np.linspace(0.0, upper, n_panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(half * (x + 1.0) + lo)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def apply_volevich_operator(kind: str, m, g, point: ResolventPoint,
                            freqs, x_grid, n_panels: int = 24,
                            cutoff=None) -> VolevichResult:
    """y_N-quadrature of one exponential boundary-layer kernel.

    kind selects the kernel applied to g(xi', y_N):

        L1: m lambda^{1/2} e^{-B(x+y)}      L2: m A e^{-B(x+y)}
        L3: m A^2 M(x+y)                    L4: m lambda^{1/2} A M(x+y)
        L6: phi(x) m e^{-A(x+y)} psi(y)     L7: phi(x) m A e^{-A(x+y)} psi(y)

    `m` is a callable (lam, xi') -> complex; `g` either a callable
    (xi', y_N array) -> array or an array of shape (n_freqs, n_y) sampled
    on the rule this routine builds.  The density is integrated on a
    composite Gauss-Legendre rule truncated at 40 / min Re B (L6/L7: at
    the cutoff support).  Returns the field on (freqs) x (x_grid) plus
    the rule metadata.
    """
    if kind not in _VOLEVICH_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}")
    freqs = list(freqs)
    if not freqs:
        raise ValueError("empty frequency grid")
    x_grid = np.asarray(x_grid, dtype=np.float64)
    lam = point.lam
    phi = cutoff if cutoff is not None else _smoothstep_cutoff

    b_vals = np.array([compute_B(point, f) for f in freqs])
    if kind in ("L6", "L7"):
        upper = 2.0
    else:
        upper = 40.0 / float(np.min(b_vals.real))
    y, w = _gauss_panels(upper, n_panels)
    if callable(g):
        g_vals = np.array([np.asarray(g(f, y), dtype=np.complex128) for f in freqs])
    else:
        g_vals = np.asarray(g, dtype=np.complex128)
        if g_vals.shape != (len(freqs), y.size):
            raise ValueError("sampled density has wrong shape for the rule")

    out = np.empty((len(freqs), x_grid.size), dtype=np.complex128)
    root_lam = np.sqrt(complex(lam))
    for i, f in enumerate(freqs):
        a = f.A
        b = b_vals[i]
        mval = m(lam, f)
        xy = x_grid[:, None] + y[None, :]
        if kind == "L1":
            ker = mval * root_lam * np.exp(-b * xy)
        elif kind == "L2":
            ker = mval * a * np.exp(-b * xy)
        elif kind == "L3":
            ker = mval * a * a * _kernels.kernel_M(xy, complex(a), b)
        elif kind == "L4":
            ker = mval * root_lam * a * _kernels.kernel_M(xy, complex(a), b)
        elif kind == "L6":
            ker = (phi(x_grid)[:, None] * mval * np.exp(-a * xy)
                   * phi(y)[None, :])
        else:  # L7
            ker = (phi(x_grid)[:, None] * mval * a * np.exp(-a * xy)
                   * phi(y)[None, :])
        out[i] = ker @ (w * g_vals[i])
    return VolevichResult(field=out, kind=kind, y_nodes=y, y_weights=w,
                          truncation=upper, n_panels=n_panels)


# --------------------------------------------------------------------------
# serialization


def _c2pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def profile_to_json(profile: FourierProfile) -> str:
    """Serialize a profile; complex entries become [re, im] pairs."""
    p, f = profile.point, profile.freq
    doc = {
        "lambda": _c2pair(p.lam),
        "mu": p.mu,
        "sigma": p.sigma,
        "a_kappa": list(p.a_kappa),
        "xi_prime": list(f.xi_prime),
        "coef_expA": [_c2pair(z) for z in profile.coef_expA],
        "coef_expB": [_c2pair(z) for z in profile.coef_expB],
        "coef_M": [_c2pair(z) for z in profile.coef_M],
        "h_hat": None if profile.h_hat is None else _c2pair(profile.h_hat),
    }
    return json.dumps(doc, sort_keys=True)


def profile_from_json(text: str) -> FourierProfile:
    doc = json.loads(text)
    point = ResolventPoint(lam=complex(*doc["lambda"]), mu=doc["mu"],
                           sigma=doc["sigma"], a_kappa=tuple(doc["a_kappa"]))
    freq = TangentialFrequency(xi_prime=tuple(doc["xi_prime"]))
    h = doc.get("h_hat")
    return FourierProfile(
        coef_expA=np.array([complex(*z) for z in doc["coef_expA"]]),
        coef_expB=np.array([complex(*z) for z in doc["coef_expB"]]),
        coef_M=np.array([complex(*z) for z in doc["coef_M"]]),
        freq=freq, point=point,
        h_hat=None if h is None else complex(*h))
