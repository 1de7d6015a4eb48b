"""Scalar resolvent symbols and their bound estimates.

Everything revolves around the pair A = |xi'| and B = sqrt(lambda/mu + A^2)
(principal branch), the cubic D(A, B) = B^3 + A B^2 + 3 A^2 B - A^3 that
factors the boundary determinant (A^2+B^2)^2 - 4 A^3 B = (B - A) D(A, B),
the drift symbol E_kappa = mu (lambda + i xi'.A_kappa) D + sigma A^3 (A+B),
and the divided-difference kernel M(x) = (e^{-Bx} - e^{-Ax}) / (B - A).

Grid sweeps estimate the constants in the lower/upper bounds

    c (|lambda|^{1/2} + A)      <= Re B,
    |B|                         <= (|lambda|/mu)^{1/2} + A,
    c (|lambda|^{1/2} + A)^3    <= |D| <= 6 ((|lambda|/mu)^{1/2} + A)^3,
    c (|lambda|+A)(|lambda|^{1/2}+A)^3 <= |E_0|,

and the multiplier-class checker measures the derivative constants of a
symbol m(lambda, xi') of a given order and type by finite differences.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BranchCutError, EmptyGridError, FDStepError

__all__ = [
    "BoundEstimate",
    "MultiplierReport",
    "ResolventPoint",
    "SectorGrid",
    "SymbolValues",
    "TangentialFrequency",
    "compute_B",
    "compute_B0",
    "compute_D",
    "compute_E_kappa",
    "compute_M",
    "compute_symbols",
    "detL",
    "estimate_bound_constant",
    "find_lambda1",
    "sector_grid",
    "verify_multiplier_class",
]


# --------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class ResolventPoint:
    """A resolvent parameter (lambda, mu, sigma, A_kappa) with its sector.

    ``kappa_mode`` selects the admissible set: ``"sector"`` requires
    |arg lambda| <= pi - sector_angle and |lambda| >= lambda0, while
    ``"half-plane"`` requires Re lambda >= lambda0.
    """

    lam: complex
    mu: float = 1.0
    sigma: float = 1.0
    a_kappa: tuple[float, ...] = ()
    sector_angle: float = math.pi / 4
    lambda0: float = 1.0
    kappa_mode: str = "sector"

    def __post_init__(self):
        if not (self.mu > 0.0):
            raise ValueError("viscosity mu must be positive")
        if self.sigma < 0.0:
            raise ValueError("surface tension sigma must be nonnegative")
        if not (0.0 < self.sector_angle < math.pi / 2):
            raise ValueError("sector angle must lie in (0, pi/2)")
        if self.lambda0 <= 0.0:
            raise ValueError("lambda0 must be positive")
        if self.kappa_mode not in ("sector", "half-plane"):
            raise ValueError(f"unknown kappa_mode {self.kappa_mode!r}")
        object.__setattr__(self, "a_kappa", tuple(float(v) for v in self.a_kappa))
        lam = complex(self.lam)
        if self.kappa_mode == "sector":
            ok = (abs(lam) >= self.lambda0 * (1 - 1e-12)
                  and abs(np.angle(lam)) <= math.pi - self.sector_angle + 1e-12)
        else:
            ok = lam.real >= self.lambda0 * (1 - 1e-12)
        if not ok:
            raise ValueError(
                f"lambda={lam} outside the admissible set "
                f"({self.kappa_mode}, angle={self.sector_angle}, "
                f"lambda0={self.lambda0})")

    def in_sector(self, lam: complex) -> bool:
        if self.kappa_mode == "sector":
            return (abs(lam) >= self.lambda0 * (1 - 1e-12)
                    and abs(np.angle(lam)) <= math.pi - self.sector_angle + 1e-12)
        return lam.real >= self.lambda0 * (1 - 1e-12)


@dataclass(frozen=True)
class TangentialFrequency:
    """Tangential Fourier variable xi' with its modulus A."""

    xi_prime: tuple[float, ...]
    A: float = field(init=False)

    def __post_init__(self):
        xi = tuple(float(v) for v in self.xi_prime)
        object.__setattr__(self, "xi_prime", xi)
        object.__setattr__(self, "A", math.hypot(*xi) if xi else 0.0)

    def drift(self, a_kappa) -> float:
        """xi' . A_kappa; zero when the drift vector is absent."""
        if not a_kappa:
            return 0.0
        if len(a_kappa) != len(self.xi_prime):
            raise ValueError("drift vector and xi' have different lengths")
        return float(np.dot(self.xi_prime, a_kappa))


@dataclass(frozen=True)
class SymbolValues:
    A: float
    B: complex
    B0: complex
    D: complex
    E_kappa: complex
    detL: complex


# --------------------------------------------------------------------------
# pointwise symbols


def _check_branch(z) -> None:
    z = np.asarray(z, dtype=np.complex128)
    bad = (z.real <= 0.0) & (z.imag == 0.0)
    if np.any(bad):
        raise BranchCutError(
            "lambda/mu + A^2 is a nonpositive real; principal root undefined "
            "(parameter lies outside the admissible sector)")


def compute_B(point: ResolventPoint, freq: TangentialFrequency) -> complex:
    """B = sqrt(lambda/mu + A^2) on the principal branch, Re B > 0."""
    z = complex(point.lam) / point.mu + freq.A ** 2
    _check_branch(z)
    b = complex(_kernels.symbol_B(np.array([point.lam]),
                                  np.array([point.mu]),
                                  np.array([freq.A]))[0])
    return b


def compute_B0(point: ResolventPoint, freq: TangentialFrequency) -> complex:
    """B0 = sqrt(lambda + A^2) on the principal branch."""
    z = complex(point.lam) + freq.A ** 2
    _check_branch(z)
    return complex(_kernels.symbol_B0(np.array([point.lam]),
                                      np.array([freq.A]))[0])


def compute_D(A, B):
    """The cubic D(A, B); also equals B (lambda/mu + 4A^2) + A lambda/mu."""
    return complex(_kernels.symbol_D(np.asarray(A, dtype=np.float64),
                                     np.asarray(B, dtype=np.complex128)))


def detL(A, B):
    """Boundary determinant (A^2+B^2)^2 - 4 A^3 B."""
    return complex(_kernels.symbol_detL(np.asarray(A, dtype=np.float64),
                                        np.asarray(B, dtype=np.complex128)))


def compute_E_kappa(point: ResolventPoint, freq: TangentialFrequency) -> complex:
    b = compute_B(point, freq)
    return complex(_kernels.symbol_E(
        np.array([point.lam]), point.mu, point.sigma,
        np.array([freq.drift(point.a_kappa)]),
        np.array([freq.A]), np.array([b]))[0])


def compute_M(x_N, A, B):
    """Kernel M(x_N) = (e^{-B x_N} - e^{-A x_N}) / (B - A), x_N >= 0."""
    x = np.asarray(x_N, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("x_N must be nonnegative")
    out = _kernels.kernel_M(x, np.asarray(A, dtype=np.complex128),
                            np.asarray(B, dtype=np.complex128))
    if np.ndim(x_N) == 0:
        return complex(out)
    return out


def compute_symbols(point: ResolventPoint, freq: TangentialFrequency) -> SymbolValues:
    b = compute_B(point, freq)
    b0 = compute_B0(point, freq)
    d = compute_D(freq.A, b)
    e = complex(_kernels.symbol_E(
        np.array([point.lam]), point.mu, point.sigma,
        np.array([freq.drift(point.a_kappa)]),
        np.array([freq.A]), np.array([b]))[0])
    return SymbolValues(A=freq.A, B=b, B0=b0, D=d, E_kappa=e,
                        detL=detL(freq.A, b))


# --------------------------------------------------------------------------
# grids and bound constants


@dataclass(frozen=True)
class SectorGrid:
    """Flattened (lambda, A) product grid over a sector.

    lam and A are 1-d arrays of equal length; `shape` records the original
    (n_modulus, n_arg, n_A) layout so refinement studies can double each
    axis independently.
    """

    lam: np.ndarray
    A: np.ndarray
    shape: tuple[int, int, int]

    def __len__(self):
        return self.lam.size


def sector_grid(sector_angle: float = math.pi / 4,
                lambda0: float = 1.0,
                lambda_max: float | None = None,
                n_lambda: int = 24,
                n_arg: int = 9,
                a_min: float = 1e-3,
                a_max: float = 1e2,
                n_a: int = 24) -> SectorGrid:
    """Log-spaced |lambda| x uniform arg lambda x log-spaced A sampling of
    Sigma_{angle, lambda0} x (0, a_max]."""
    if lambda_max is None:
        lambda_max = 1e4 * lambda0
    mod = np.geomspace(lambda0, lambda_max, n_lambda)
    args = np.linspace(-(math.pi - sector_angle), math.pi - sector_angle, n_arg)
    amps = np.geomspace(a_min, a_max, n_a)
    lam = (mod[:, None] * np.exp(1j * args)[None, :]).ravel()
    lam_full = np.repeat(lam, n_a)
    a_full = np.tile(amps, lam.size)
    return SectorGrid(lam=lam_full, A=a_full, shape=(n_lambda, n_arg, n_a))


@dataclass(frozen=True)
class BoundEstimate:
    c_min: float
    c_max: float
    argmin_lam: complex
    argmin_A: float
    argmax_lam: complex
    argmax_A: float
    n_points: int
    grid_shape: tuple[int, int, int]


_NAMED_SYMBOLS = {
    "ReB": lambda lam, A, mu, sigma: _kernels.symbol_B(lam, mu, A).real,
    "absB": lambda lam, A, mu, sigma: np.abs(_kernels.symbol_B(lam, mu, A)),
    "absD": lambda lam, A, mu, sigma: np.abs(
        _kernels.symbol_D(A, _kernels.symbol_B(lam, mu, A))),
    "absE0": lambda lam, A, mu, sigma: np.abs(
        _kernels.symbol_E(lam, mu, sigma, np.zeros_like(A), A,
                          _kernels.symbol_B(lam, mu, A))),
}

_NAMED_WEIGHTS = {
    "sqrt_lam_plus_A": lambda lam, A, mu: np.sqrt(np.abs(lam)) + A,
    "sqrt_lam_over_mu_plus_A": lambda lam, A, mu: np.sqrt(np.abs(lam) / mu) + A,
    "sqrt_lam_over_mu_plus_A_cubed":
        lambda lam, A, mu: (np.sqrt(np.abs(lam) / mu) + A) ** 3,
    "sqrt_lam_plus_A_cubed": lambda lam, A, mu: (np.sqrt(np.abs(lam)) + A) ** 3,
    "E0_weight": lambda lam, A, mu:
        (np.abs(lam) + A) * (np.sqrt(np.abs(lam)) + A) ** 3,
}


def estimate_bound_constant(symbol, region: SectorGrid, normalizer,
                            mu: float = 1.0, sigma: float = 1.0) -> BoundEstimate:
    """Extremize |symbol| / normalizer over a parameter grid.

    `symbol` is either a key of the named table (``"ReB"``, ``"absB"``,
    ``"absD"``, ``"absE0"``) or a callable (lam, A, mu, sigma) -> array;
    `normalizer` likewise a named weight or callable (lam, A, mu) -> array,
    required strictly positive on the grid.
    """
    if len(region) == 0:
        raise EmptyGridError("bound estimate over an empty grid")
    sym = _NAMED_SYMBOLS[symbol] if isinstance(symbol, str) else symbol
    wgt = _NAMED_WEIGHTS[normalizer] if isinstance(normalizer, str) else normalizer
    values = np.asarray(sym(region.lam, region.A, mu, sigma), dtype=np.float64)
    weights = np.asarray(wgt(region.lam, region.A, mu), dtype=np.float64)
    if np.any(weights <= 0.0):
        raise ValueError("normalizer not strictly positive on the grid")
    ratio = values / weights
    i_min = int(np.argmin(ratio))
    i_max = int(np.argmax(ratio))
    return BoundEstimate(
        c_min=float(ratio[i_min]), c_max=float(ratio[i_max]),
        argmin_lam=complex(region.lam[i_min]), argmin_A=float(region.A[i_min]),
        argmax_lam=complex(region.lam[i_max]), argmax_A=float(region.A[i_max]),
        n_points=len(region), grid_shape=region.shape)


def find_lambda1(mu: float = 1.0, sigma: float = 1.0,
                 sector_angle: float = math.pi / 4,
                 threshold: float = 1e-3,
                 bracket: tuple[float, float] = (1e-3, 64.0),
                 grid_kwargs: dict | None = None,
                 n_iter: int = 40) -> float:
    """Bisect for the smallest sector threshold at which the grid minimum of
    |E_0| / ((|lambda|+A)(|lambda|^{1/2}+A)^3) clears `threshold`."""
    kwargs = dict(n_lambda=16, n_arg=9, a_min=1e-3, a_max=1e2, n_a=16)
    if grid_kwargs:
        kwargs.update(grid_kwargs)

    def grid_min(lam1: float) -> float:
        g = sector_grid(sector_angle=sector_angle, lambda0=lam1,
                        lambda_max=1e4 * lam1, **kwargs)
        est = estimate_bound_constant("absE0", g, "E0_weight", mu=mu, sigma=sigma)
        return est.c_min

    lo, hi = bracket
    if grid_min(lo) > threshold:
        return lo
    if grid_min(hi) <= threshold:
        raise ValueError("bracket does not contain an admissible lambda1")
    for _ in range(n_iter):
        mid = math.sqrt(lo * hi)
        if grid_min(mid) > threshold:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.01:
            break
    return hi


# --------------------------------------------------------------------------
# multiplier classes


@dataclass(frozen=True)
class MultiplierReport:
    order_s: float
    mtype: int
    constants: dict[tuple[int, ...], float]
    M: float
    fd_step: float
    max_richardson_disagreement: float


def _fd_partial(m, lam, xi_grid, alpha, step):
    """Central-difference d^alpha m / d xi^alpha on an array of xi' points."""
    if sum(alpha) == 0:
        return m(lam, xi_grid)
    # first nonzero direction, reduce multi-index recursively
    j = next(i for i, a in enumerate(alpha) if a > 0)
    reduced = tuple(a - 1 if i == j else a for i, a in enumerate(alpha))
    e = np.zeros(xi_grid.shape[1])
    e[j] = step
    up = _fd_partial(m, lam, xi_grid + e, reduced, step)
    dn = _fd_partial(m, lam, xi_grid - e, reduced, step)
    return (up - dn) / (2.0 * step)


def verify_multiplier_class(m, order_s: float, mtype: int, lam_grid, xi_grid,
                            max_deriv: int = 2, step: float = 1e-4,
                            richardson_tol: float = 0.25) -> MultiplierReport:
    """Estimate the derivative constants of a symbol on a grid.

    For every multi-index alpha' with |alpha'| <= max_deriv the constant

        C_alpha = max |d^alpha m| / w_alpha,
        w_alpha = (|lambda|^{1/2} + |xi'|)^{s - |alpha|}         (type 1)
                = (|lambda|^{1/2} + |xi'|)^s |xi'|^{-|alpha|}    (type 2)

    is measured with central differences of relative step `step`;
    M = max over alpha of C_alpha.  Derivatives are re-estimated at twice
    the step and the run aborts if the two levels disagree badly, which is
    the signature of the step being below the FD noise floor.
    """
    if max_deriv > 2:
        raise ValueError("finite differences supported up to order 2 only")
    if mtype not in (1, 2):
        raise ValueError("multiplier type must be 1 or 2")
    lam_grid = np.asarray(lam_grid, dtype=np.complex128).ravel()
    xi_grid = np.atleast_2d(np.asarray(xi_grid, dtype=np.float64))
    if lam_grid.size == 0 or xi_grid.size == 0:
        raise EmptyGridError("multiplier check on an empty grid")
    n_xi = xi_grid.shape[1]
    a = np.linalg.norm(xi_grid, axis=1)
    if mtype == 2 and np.any(a == 0.0):
        raise ValueError("type-2 grids must avoid xi' = 0")

    constants: dict[tuple[int, ...], float] = {}
    worst_disagreement = 0.0
    lam_b = lam_grid[:, None]
    root = np.sqrt(np.abs(lam_b))
    for total in range(max_deriv + 1):
        for alpha in itertools.product(range(total + 1), repeat=n_xi):
            if sum(alpha) != total:
                continue
            scale = step * (1.0 + a)
            # one shared absolute step per sweep keeps the stencil affine
            h = float(np.median(scale))
            d1 = _fd_partial(m, lam_b, xi_grid, alpha, h)
            if total > 0:
                d2 = _fd_partial(m, lam_b, xi_grid, alpha, 2.0 * h)
                denom = np.maximum(np.abs(d1), np.abs(d2))
                mask = denom > 1e-14
                if np.any(mask):
                    dis = np.abs(d1 - d2)[mask] / denom[mask]
                    med = float(np.median(dis))
                    worst_disagreement = max(worst_disagreement, med)
                    if med > richardson_tol:
                        raise FDStepError(
                            f"step {h:g} unreliable for alpha={alpha}: "
                            f"median Richardson disagreement {med:.3f}")
            if mtype == 1:
                w = (root + a[None, :]) ** (order_s - total)
            else:
                w = (root + a[None, :]) ** order_s * a[None, :] ** (-total)
            constants[alpha] = float(np.max(np.abs(d1) / w))
    return MultiplierReport(order_s=order_s, mtype=mtype, constants=constants,
                            M=max(constants.values()), fd_step=step,
                            max_richardson_disagreement=worst_disagreement)
