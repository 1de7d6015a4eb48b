# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled symbol kernels: resolvent root B, Lopatinski cubic D, det L,
the surface-tension symbol E, and the divided-difference kernel M.

Mirrors the call surface of `_symbols_py`; scalar loops here beat the
vectorized numpy fallback on the multi-million point sweep grids because
no temporaries are allocated.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex cexp(double complex)
    double cabs(double complex)

cdef double M_SWITCH = 1e-6

cdef double[16] GL16_T
cdef double[16] GL16_W
GL16_T = [
    0.005299532504175031, 0.0277124884633837, 0.06718439880608412,
    0.1222977958224985, 0.19106187779867811, 0.2709916111713863,
    0.35919822461037054, 0.4524937450811813, 0.5475062549188188,
    0.6408017753896295, 0.7290083888286136, 0.8089381222013219,
    0.8777022041775016, 0.9328156011939159, 0.9722875115366163,
    0.994700467495825,
]
GL16_W = [
    0.013576229705877019, 0.031126761969323853, 0.047579255841246296,
    0.062314485627767015, 0.07479799440828838, 0.08457825969750131,
    0.0913017075224618, 0.09472530522753429, 0.09472530522753429,
    0.0913017075224618, 0.08457825969750131, 0.07479799440828838,
    0.062314485627767015, 0.047579255841246296, 0.031126761969323853,
    0.013576229705877019,
]


cdef inline double complex _cubic(double a, double complex b) nogil:
    return b * b * b + a * b * b + 3.0 * a * a * b - a * a * a


def symbol_B(lam, mu, a):
    bc = np.broadcast_arrays(lam, mu, a)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] L = np.ascontiguousarray(bc[0], dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] M = np.ascontiguousarray(bc[1], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(bc[2], dtype=np.float64).ravel()
    cdef Py_ssize_t n = L.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = csqrt(L[i] / M[i] + A[i] * A[i])
    return out.reshape(np.broadcast(lam, mu, a).shape)


def symbol_B0(lam, a):
    bc = np.broadcast_arrays(lam, a)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] L = np.ascontiguousarray(bc[0], dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(bc[1], dtype=np.float64).ravel()
    cdef Py_ssize_t n = L.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = csqrt(L[i] + A[i] * A[i])
    return out.reshape(np.broadcast(lam, a).shape)


def symbol_D(a, b):
    bc = np.broadcast_arrays(a, b)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(bc[0], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B = np.ascontiguousarray(bc[1], dtype=np.complex128).ravel()
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _cubic(A[i], B[i])
    return out.reshape(np.broadcast(a, b).shape)


def symbol_detL(a, b):
    bc = np.broadcast_arrays(a, b)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(bc[0], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B = np.ascontiguousarray(bc[1], dtype=np.complex128).ravel()
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i
    cdef double complex s
    for i in range(n):
        s = A[i] * A[i] + B[i] * B[i]
        out[i] = s * s - 4.0 * A[i] * A[i] * A[i] * B[i]
    return out.reshape(np.broadcast(a, b).shape)


def symbol_E(lam, mu, sigma, drift, a, b):
    bc = np.broadcast_arrays(lam, drift, a, b)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] L = np.ascontiguousarray(bc[0], dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] DR = np.ascontiguousarray(bc[1], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(bc[2], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B = np.ascontiguousarray(bc[3], dtype=np.complex128).ravel()
    cdef double mu_c = mu
    cdef double sg_c = sigma
    cdef Py_ssize_t n = L.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = (mu_c * (L[i] + 1j * DR[i]) * _cubic(A[i], B[i])
                  + sg_c * A[i] * A[i] * A[i] * (A[i] + B[i]))
    return out.reshape(np.broadcast(lam, drift, a, b).shape)


def kernel_M(x, a, b):
    bc = np.broadcast_arrays(x, a, b)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] X = np.ascontiguousarray(bc[0], dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] A = np.ascontiguousarray(bc[1], dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B = np.ascontiguousarray(bc[2], dtype=np.complex128).ravel()
    cdef Py_ssize_t n = X.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i, k
    cdef double complex diff, acc
    for i in range(n):
        diff = B[i] - A[i]
        if cabs(diff) < M_SWITCH * (1.0 + cabs(A[i]) + cabs(B[i])):
            acc = 0.0
            for k in range(16):
                acc = acc + GL16_W[k] * cexp(-(A[i] + GL16_T[k] * diff) * X[i])
            out[i] = -X[i] * acc
        else:
            out[i] = (cexp(-B[i] * X[i]) - cexp(-A[i] * X[i])) / diff
    return out.reshape(np.broadcast(x, a, b).shape)
