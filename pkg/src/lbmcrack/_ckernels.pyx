# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled grid kernels. Same contract and operation order as _pykernels."""

cimport cython


def equilibrium(const double[:, ::1] w, const double[:, ::1] wdot,
                double a0, double ak, double[:, :, ::1] out):
    cdef Py_ssize_t ny = w.shape[0], nx = w.shape[1], i, j
    cdef double akw
    for j in range(ny):
        for i in range(nx):
            out[0, j, i] = wdot[j, i] - a0 * w[j, i]
            akw = ak * w[j, i]
            out[1, j, i] = akw
            out[2, j, i] = akw
            out[3, j, i] = akw
            out[4, j, i] = akw


cdef inline double _post(const double[:, :, ::1] f, const double[:, :, ::1] feq,
                         double omega, Py_ssize_t a, Py_ssize_t j, Py_ssize_t i) nogil:
    return f[a, j, i] - omega * (f[a, j, i] - feq[a, j, i])


def stream_collide(const double[:, :, ::1] f, const double[:, :, ::1] feq,
                   const unsigned char[:, :, ::1] intact, double omega,
                   const double[:, ::1] w, double dt,
                   double[:, :, ::1] f_out, double[:, ::1] wdot_out,
                   double[:, ::1] w_out):
    cdef Py_ssize_t ny = w.shape[0], nx = w.shape[1]
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double v0, v1, v2, v3, v4, s
    with nogil:
        for j in range(ny):
            jm = j - 1 if j > 0 else ny - 1
            jp = j + 1 if j < ny - 1 else 0
            for i in range(nx):
                im = i - 1 if i > 0 else nx - 1
                ip = i + 1 if i < nx - 1 else 0
                # incoming along +x arrives from the -x neighbor, etc.
                v0 = _post(f, feq, omega, 0, j, i) if intact[0, j, i] else 0.0
                v1 = _post(f, feq, omega, 1, j, im) if intact[3, j, i] else 0.0
                v2 = _post(f, feq, omega, 2, jm, i) if intact[4, j, i] else 0.0
                v3 = _post(f, feq, omega, 3, j, ip) if intact[1, j, i] else 0.0
                v4 = _post(f, feq, omega, 4, jp, i) if intact[2, j, i] else 0.0
                f_out[0, j, i] = v0
                f_out[1, j, i] = v1
                f_out[2, j, i] = v2
                f_out[3, j, i] = v3
                f_out[4, j, i] = v4
                s = v0 + v1
                s = s + v2
                s = s + v3
                s = s + v4
                wdot_out[j, i] = s
                w_out[j, i] = w[j, i] + dt * s
