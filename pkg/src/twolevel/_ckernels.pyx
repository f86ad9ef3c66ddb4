# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled transition-probability kernels.

Mirrors ``_pykernels`` operation for operation. Built without fast-math or
FMA contraction so each element is a fixed sequence of IEEE operations.
"""
from libc.math cimport sin, sqrt, fabs

# Resonant-limit guard for the bichromatic law, see twolevel.dynamics.
cdef double LIMIT_GUARD = 1e-8


cdef inline double _p1(double omega, double det, double tau) noexcept nogil:
    cdef double w2 = 4.0 * omega * omega + det * det
    cdef double env, s
    if w2 == 0.0:
        return 0.0
    env = 4.0 * omega * omega / w2
    s = sin(0.5 * tau * sqrt(w2))
    return env * s * s


cdef inline double _p2(double omega, double det, double tau) noexcept nogil:
    cdef double ad = fabs(det)
    cdef double u, s
    if ad == 0.0 or (ad * tau < LIMIT_GUARD and ad < LIMIT_GUARD * omega):
        u = omega * tau
    else:
        u = omega * sin(ad * tau) / ad
    s = sin(u)
    return s * s


def p1_points(const double[::1] omega, const double[::1] det,
              const double[::1] tau, double[::1] out):
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _p1(omega[i], det[i], tau[i])


def p2_points(const double[::1] omega, const double[::1] det,
              const double[::1] tau, double[::1] out):
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _p2(omega[i], det[i], tau[i])


def p1_grid(double omega, const double[::1] taus, const double[::1] dets,
            double[:, ::1] out):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t nx = taus.shape[0], ny = dets.shape[0]
    with nogil:
        for i in range(nx):
            for j in range(ny):
                out[i, j] = _p1(omega, dets[j], taus[i])


def p2_grid(double omega, const double[::1] taus, const double[::1] dets,
            double[:, ::1] out):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t nx = taus.shape[0], ny = dets.shape[0]
    with nogil:
        for i in range(nx):
            for j in range(ny):
                out[i, j] = _p2(omega, dets[j], taus[i])
