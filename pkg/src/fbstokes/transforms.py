"""Domain transforms and their Jacobian algebra.

Gradient convention: for a map increment Psi the stored gradient K has
K[i, j] = d Psi_j / d y_i.  The transform matrix V0 is defined through
(I + K)(I + V0) = I, and J = det(I + K) = 1 + J0.  With that convention
the transformed divergence reads

    div_x v = div_y u + V0 : grad u
            = J^{-1} ( div_y(J u) + div_y( J V0^T u ) ),

equivalently J^{-1} div_y( J (I + V0^T) u ), the Piola form.  Equality of
the two routes is the checkable identity this module exercises.  A unit
normal pushes forward along x = y + Psi as n_t = (I+V0) n / |...|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNormalError, DeltaViolationError

__all__ = [
    "DisplacementField",
    "TransformState",
    "area_derivative_check",
    "compute_V0_J",
    "hanzawa_map",
    "partial_lagrange_map",
    "pushforward_normal",
    "reynolds_transport_check",
    "smooth_cutoff",
    "transformed_divergence",
]


@dataclass(frozen=True)
class DisplacementField:
    """Transform increment Psi(y, t) with its derivative evaluators.

    grad_psi(y, t)[i, j] = d Psi_j / d y_i; hess_psi(y, t)[i, j, m] =
    d^2 Psi_m / d y_i d y_j (only needed by the nonlinear assembly).
    delta_bound is the declared sup bound on |grad Psi|.
    """

    psi: object
    grad_psi: object
    dt_psi: object = None
    hess_psi: object = None
    delta_bound: float = 0.5

    def check_delta(self, y, t=0.0) -> float:
        k = np.asarray(self.grad_psi(y, t), dtype=np.float64)
        norm = float(np.linalg.norm(k, ord=2))
        if norm > self.delta_bound:
            raise DeltaViolationError(
                f"|grad Psi| = {norm:.4f} exceeds delta = {self.delta_bound}")
        return norm


@dataclass(frozen=True)
class TransformState:
    grad_psi: np.ndarray
    V0: np.ndarray
    J: float

    @property
    def J0(self) -> float:
        return self.J - 1.0

    @property
    def inverse_identity_error(self) -> float:
        n = self.grad_psi.shape[0]
        return float(np.max(np.abs(
            (np.eye(n) + self.grad_psi) @ (np.eye(n) + self.V0) - np.eye(n))))


def compute_V0_J(grad_psi) -> TransformState:
    """V0 = (I + K)^{-1} - I by direct inversion, J = det(I + K)."""
    k = np.asarray(grad_psi, dtype=np.float64)
    n = k.shape[0]
    eye = np.eye(n)
    m = eye + k
    det = float(np.linalg.det(m))
    if not np.isfinite(det) or abs(det) < 1e-12:
        raise DeltaViolationError("I + grad Psi numerically singular")
    v0 = np.linalg.solve(m, eye) - eye
    return TransformState(grad_psi=k, V0=v0, J=det)


def neumann_series_V0(grad_psi, terms: int = 60) -> np.ndarray:
    """Truncated series sum_{k>=1} (-K)^k; cross-check of compute_V0_J
    for |K| <= 1/2."""
    k = np.asarray(grad_psi, dtype=np.float64)
    n = k.shape[0]
    acc = np.zeros((n, n))
    power = np.eye(n)
    for _ in range(terms):
        power = power @ (-k)
        acc = acc + power
    return acc


def hanzawa_map(field: DisplacementField, xi_t, y, t: float = 0.0):
    """x = y + Psi(y, t) + xi(t); checks the gradient smallness bound."""
    field.check_delta(y, t)
    return (np.asarray(y, dtype=np.float64)
            + np.asarray(field.psi(y, t), dtype=np.float64)
            + np.asarray(xi_t, dtype=np.float64))


def smooth_cutoff(radius: float):
    """C^2 radial bump: 1 on |y| <= radius, 0 beyond 2 radius."""
    def kappa(y):
        r = np.linalg.norm(np.asarray(y, dtype=np.float64), axis=-1) / radius
        s = np.clip(r - 1.0, 0.0, 1.0)
        return 1.0 - s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)

    kappa.radius = radius
    return kappa


def partial_lagrange_map(snapshots, kappa, y, t: float,
                         delta: float = 0.5):
    """x = y + int_0^t kappa(y) u(y, s) ds on stored history snapshots.

    `snapshots` is a sorted sequence of (time, velocity callable); the
    time integral is a composite trapezoid over the snapshots up to t.
    The map is the identity wherever kappa vanishes.
    """
    y = np.asarray(y, dtype=np.float64)
    times = [s for s, _ in snapshots if s <= t + 1e-14]
    if len(times) < 2:
        return y.copy()
    kv = float(kappa(y))
    acc = np.zeros_like(y)
    sup_track = 0.0
    prev_t, prev_u = snapshots[0]
    prev_val = np.asarray(prev_u(y), dtype=np.float64)
    for s, u in snapshots[1:]:
        if s > t + 1e-14:
            break
        val = np.asarray(u(y), dtype=np.float64)
        acc += 0.5 * (s - prev_t) * (prev_val + val)
        sup_track += (s - prev_t) * max(np.max(np.abs(prev_val)),
                                        np.max(np.abs(val))) * abs(kv)
        prev_t, prev_val = s, val
    if sup_track > delta * 10.0:
        raise DeltaViolationError(
            f"history integral {sup_track:.3f} far above delta = {delta}")
    return y + kv * acc


def transformed_divergence(u, grad_u, field: DisplacementField, y,
                           t: float = 0.0, step: float = 1e-4):
    """Both divergence forms at a point.

    form_a = div u + V0 : grad u                   (pointwise algebra)
    form_b = J^{-1} div( J (I + V0^T) u )          (Piola route, FD)

    grad_u follows the same convention as grad_psi:
    grad_u[i, j] = d u_j / d y_i.
    """
    y = np.asarray(y, dtype=np.float64)
    n = y.size

    def state(z):
        return compute_V0_J(field.grad_psi(z, t))

    st = state(y)
    gu = np.asarray(grad_u(y), dtype=np.float64)
    div_u = float(np.trace(gu))
    # V0 : grad u with index pattern sum_{jk} V0[j,k] d u_j / d y_k
    form_a = div_u + float(np.einsum("jk,kj->", st.V0, gu))

    def w_field(z):
        stz = state(z)
        uz = np.asarray(u(z), dtype=np.float64)
        return stz.J * (uz + stz.V0.T @ uz)

    div_w = 0.0
    for i in range(n):
        e = np.zeros(n); e[i] = step
        div_w += (w_field(y + e)[i] - w_field(y - e)[i]) / (2.0 * step)
    form_b = div_w / st.J
    return form_a, form_b


def pushforward_normal(state: TransformState, n) -> np.ndarray:
    """Unit normal of the image surface: (I + V0) n normalized."""
    n = np.asarray(n, dtype=np.float64)
    raw = (np.eye(n.size) + state.V0) @ n
    nrm = float(np.linalg.norm(raw))
    if nrm < 1e-14:
        raise DegenerateNormalError("pushed-forward normal vanished")
    return raw / nrm


def reynolds_transport_check(w, grad_w, y, t: float, dt_list):
    """Convergence record for dJ/dt = (div_x w) J along the flow
    x = y + t w(y).

    The right side is exact: div_x w = tr( Dw (I + t Dw)^{-1} ) evaluated
    at the flow point; the left side is a central difference of
    J(t) = det(I + t Dw), so the error decays at second order in dt.
    Returns (errors, fitted slope).
    """
    y = np.asarray(y, dtype=np.float64)
    dw = np.asarray(grad_w(y), dtype=np.float64).T   # rows d w_i / d y_j
    n = y.size
    eye = np.eye(n)

    def jac(s):
        return float(np.linalg.det(eye + s * dw))

    rhs = float(np.trace(dw @ np.linalg.inv(eye + t * dw))) * jac(t)
    errs = []
    for dt in dt_list:
        lhs = (jac(t + dt) - jac(t - dt)) / (2.0 * dt)
        errs.append(abs(lhs - rhs))
    errs = np.asarray(errs)
    dts = np.asarray(dt_list, dtype=np.float64)
    mask = errs > 0
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log(dts[mask]), np.log(errs[mask]), 1)[0])
    else:
        slope = float("inf")   # exactly quadratic J: central difference exact
    return errs, slope


def area_derivative_check(R0: float, t: float = 0.0, speed: float = 1.0,
                          N: int = 3, n_theta: int = 32, n_phi: int = 64,
                          dt: float = 1e-3):
    """Both sides of d|Gamma_t|/dt = -int H <n, phi_dot> on a sphere
    with radial speed.

    The area side differentiates the quadrature area of the moving sphere
    R(t) = R0 + t speed; the curvature side integrates the pipeline H and
    normal.  Returns (lhs, rhs, |lhs - rhs|).
    """
    from .geometry import geometry_at, sphere_patch
    from .spharm import sphere_quadrature

    def area(radius):
        if N == 3:
            th, ph, w = sphere_quadrature(n_theta, n_phi, R=radius)
            return float(np.sum(w))
        return 2.0 * np.pi * radius

    r_now = R0 + t * speed
    lhs = (area(r_now + dt * speed) - area(r_now - dt * speed)) / (2.0 * dt)

    patch = sphere_patch(R=r_now, N=N)
    if N == 3:
        th, ph, w = sphere_quadrature(n_theta, n_phi, R=1.0)
        rhs = 0.0
        for tt, pp, wq in zip(th, ph, w):
            geo = geometry_at(patch, (tt, pp))
            # phi_dot = speed * n for the radially moving sphere
            rhs -= wq * r_now ** 2 * geo.H * speed
    else:
        ts = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
        rhs = 0.0
        for tt in ts:
            geo = geometry_at(patch, (tt,))
            rhs -= (2.0 * np.pi * r_now / ts.size) * geo.H * speed
    return lhs, rhs, abs(lhs - rhs)
