"""Pure-numpy implementations of the hot symbol kernels.

Same call surface as the compiled module `_symbols_cy`; the package picks
one of the two at import time (see `fbstokes._kernels`).  Everything here
is vectorized over flat arrays; callers handle shaping.
"""

import numpy as np

# Relative threshold below which the divided-difference kernel switches to
# its quadrature form to avoid catastrophic cancellation.
M_SWITCH = 1e-6

# 16-point Gauss-Legendre rule on [0, 1]; exact enough that the quadrature
# branch of kernel_M carries full double precision for |(B-A) x| <~ 1.
_GL16_T = np.array([
    0.005299532504175031, 0.0277124884633837, 0.06718439880608412,
    0.1222977958224985, 0.19106187779867811, 0.2709916111713863,
    0.35919822461037054, 0.4524937450811813, 0.5475062549188188,
    0.6408017753896295, 0.7290083888286136, 0.8089381222013219,
    0.8777022041775016, 0.9328156011939159, 0.9722875115366163,
    0.994700467495825,
])
_GL16_W = np.array([
    0.013576229705877019, 0.031126761969323853, 0.047579255841246296,
    0.062314485627767015, 0.07479799440828838, 0.08457825969750131,
    0.0913017075224618, 0.09472530522753429, 0.09472530522753429,
    0.0913017075224618, 0.08457825969750131, 0.07479799440828838,
    0.062314485627767015, 0.047579255841246296, 0.031126761969323853,
    0.013576229705877019,
])


def symbol_B(lam, mu, a):
    """Principal root of lambda/mu + a^2, real part >= 0."""
    lam = np.asarray(lam, dtype=np.complex128)
    mu = np.asarray(mu, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    return np.sqrt(lam / mu + a * a)


def symbol_B0(lam, a):
    """Principal root of lambda + a^2."""
    lam = np.asarray(lam, dtype=np.complex128)
    a = np.asarray(a, dtype=np.float64)
    return np.sqrt(lam + a * a)


def symbol_D(a, b):
    """Lopatinski cubic B^3 + A B^2 + 3 A^2 B - A^3."""
    a = np.asarray(a)
    b = np.asarray(b, dtype=np.complex128)
    return b * b * b + a * b * b + 3.0 * a * a * b - a * a * a


def symbol_detL(a, b):
    """(A^2 + B^2)^2 - 4 A^3 B, which factors as (B - A) D(A, B)."""
    a = np.asarray(a)
    b = np.asarray(b, dtype=np.complex128)
    s = a * a + b * b
    return s * s - 4.0 * a * a * a * b


def symbol_E(lam, mu, sigma, drift, a, b):
    """mu (lambda + i drift) D(A, B) + sigma A^3 (A + B).

    `drift` is the real scalar xi' . A_kappa evaluated per grid point.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.complex128)
    d = symbol_D(a, b)
    return mu * (lam + 1j * np.asarray(drift)) * d + sigma * a ** 3 * (a + b)


def kernel_M(x, a, b):
    """Divided-difference kernel (e^{-Bx} - e^{-Ax}) / (B - A).

    Near B = A the quotient is evaluated as the equivalent integral
    -x * int_0^1 e^{-(A + t (B-A)) x} dt by 16-point Gauss-Legendre,
    which is cancellation free.
    """
    x = np.asarray(x, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    x, a, b = np.broadcast_arrays(x, a, b)
    diff = b - a
    near = np.abs(diff) < M_SWITCH * (1.0 + np.abs(a) + np.abs(b))
    out = np.empty(x.shape, dtype=np.complex128)

    far = ~near
    if np.any(far):
        out[far] = (np.exp(-b[far] * x[far]) - np.exp(-a[far] * x[far])) / diff[far]
    if np.any(near):
        xn = x[near]
        an = a[near]
        dn = diff[near]
        acc = np.zeros(xn.shape, dtype=np.complex128)
        for t, w in zip(_GL16_T, _GL16_W):
            acc += w * np.exp(-(an + t * dn) * xn)
        out[near] = -xn * acc
    return out
