# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`lpcompact._kernels_py`."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, cos, sin

cnp.import_array()

ctypedef double complex cplx


cdef inline double _cabs(cplx z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double _powabs(cplx z, double p) nogil:
    cdef double a2 = z.real * z.real + z.imag * z.imag
    if p == 2.0:
        return a2
    if a2 == 0.0:
        return 0.0
    if p == 1.0:
        return sqrt(a2)
    if p == 3.0:
        return a2 * sqrt(a2)
    if p == 4.0:
        return a2 * a2
    return pow(a2, 0.5 * p)


cdef inline double _pow(double v, double p) nogil:
    # v >= 0
    if p == 1.0:
        return v
    if p == 2.0:
        return v * v
    if p == 3.0:
        return v * v * v
    if p == 4.0:
        return v * v * v * v
    return pow(v, p)


def tail_powers(const double[:, ::1] mod, double p):
    """Suffix sums S[k, m] = sum_{i >= m} mod[k, i]**p, Kahan-compensated."""
    cdef Py_ssize_t M = mod.shape[0], N = mod.shape[1]
    out_arr = np.zeros((M, N + 1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t k, i
    cdef double s, c, y, t, v
    with nogil:
        for k in range(M):
            s = 0.0
            c = 0.0
            for i in range(N - 1, -1, -1):
                y = _pow(mod[k, i], p) - c
                t = s + y
                c = (t - s) - y
                s = t
                out[k, i] = s
    return out_arr


def pnorm_dist_to(const cplx[:, ::1] X, const cplx[::1] x, double p, bint is_inf):
    """p-norm distance from every row of X to x."""
    cdef Py_ssize_t M = X.shape[0], N = X.shape[1]
    out_arr = np.empty(M, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, i
    cdef double s, a
    with nogil:
        for k in range(M):
            s = 0.0
            for i in range(N):
                a = _cabs(X[k, i] - x[i])
                if is_inf:
                    if a > s:
                        s = a
                else:
                    s += _pow(a, p)
            if is_inf or p == 1.0:
                out[k] = s
            elif p == 2.0:
                out[k] = sqrt(s)
            else:
                out[k] = pow(s, 1.0 / p)
    return out_arr


def joint_obj_grad(const cplx[:, :, ::1] T, const cplx[::1] x, double p):
    """g = sum_i |<T_i x, x>|^p and its gradient 2 dg/d(conj x).

    Terms with <T_i x, x> = 0 contribute a zero subgradient.
    """
    cdef Py_ssize_t N = T.shape[0], d = T.shape[1]
    grad_arr = np.zeros(d, dtype=np.complex128)
    cdef cplx[::1] grad = grad_arr
    cdef Py_ssize_t i, j, k
    cdef double g = 0.0, a, w
    cdef cplx z, tx, thx
    cdef cplx[64] Tx
    cdef cplx[64] THx
    if d > 64:
        raise ValueError("kernel supports d <= 64")
    with nogil:
        for i in range(N):
            z = 0.0
            for j in range(d):
                tx = 0.0
                thx = 0.0
                for k in range(d):
                    tx = tx + T[i, j, k] * x[k]
                    thx = thx + T[i, k, j].conjugate() * x[k]
                Tx[j] = tx
                THx[j] = thx
                z = z + x[j].conjugate() * tx
            a = _cabs(z)
            if a == 0.0:
                continue
            if p == 2.0:
                g += a * a
                w = 2.0
            else:
                g += pow(a, p)
                w = p * pow(a, p - 2.0)
            for j in range(d):
                grad[j] = grad[j] + w * (z.conjugate() * Tx[j] + z * THx[j])
    return g, grad_arr


def pair_obj_grad(const cplx[:, :, ::1] T, const cplx[::1] x, const cplx[::1] y, double p):
    """g = sum_i |<T_i x, y>|^p with 2 dg/d(conj x) and 2 dg/d(conj y)."""
    cdef Py_ssize_t N = T.shape[0], d = T.shape[1]
    gx_arr = np.zeros(d, dtype=np.complex128)
    gy_arr = np.zeros(d, dtype=np.complex128)
    cdef cplx[::1] gx = gx_arr
    cdef cplx[::1] gy = gy_arr
    cdef Py_ssize_t i, j, k
    cdef double g = 0.0, a, w
    cdef cplx c, tx
    cdef cplx[64] Tx
    if d > 64:
        raise ValueError("kernel supports d <= 64")
    with nogil:
        for i in range(N):
            c = 0.0
            for j in range(d):
                tx = 0.0
                for k in range(d):
                    tx = tx + T[i, j, k] * x[k]
                Tx[j] = tx
                c = c + y[j].conjugate() * tx
            a = _cabs(c)
            if a == 0.0:
                continue
            if p == 2.0:
                g += a * a
                w = 2.0
            else:
                g += pow(a, p)
                w = p * pow(a, p - 2.0)
            for j in range(d):
                gy[j] = gy[j] + w * c.conjugate() * Tx[j]
                # (T_i^H y)_j
                tx = 0.0
                for k in range(d):
                    tx = tx + T[i, k, j].conjugate() * y[k]
                gx[j] = gx[j] + w * c * tx
    return g, gx_arr, gy_arr


def grid_radius_d2(const cplx[:, :, ::1] T, double p, double t_lo, double t_hi, Py_ssize_t nt,
                   double f_lo, double f_hi, Py_ssize_t nf):
    """Max of sum_i |<T_i x, x>|^p over x = (cos t, e^{if} sin t) on a grid."""
    cdef Py_ssize_t N = T.shape[0]
    cdef Py_ssize_t a, b, i
    cdef double t, ct, st, g, best = -1.0, bt = t_lo, bf = f_lo
    cdef double dt = (t_hi - t_lo) / (nt - 1) if nt > 1 else 0.0
    cdef double df = (f_hi - f_lo) / (nf - 1) if nf > 1 else 0.0
    cdef cplx x2, z
    if T.shape[1] != 2:
        raise ValueError("grid oracle is for d = 2")
    phase_arr = np.exp(1j * (f_lo + np.arange(nf) * df))
    cdef cplx[::1] phase = phase_arr
    # per operator: z = A ct^2 + B ct x2 + C ct conj(x2) + D st^2
    coef_arr = np.empty((N, 4), dtype=np.complex128)
    cdef cplx[:, ::1] coef = coef_arr
    cdef cplx[:, ::1] row = np.empty((N, 3), dtype=np.complex128)
    for i in range(N):
        coef[i, 0] = T[i, 0, 0]
        coef[i, 1] = T[i, 0, 1]
        coef[i, 2] = T[i, 1, 0]
        coef[i, 3] = T[i, 1, 1]
    with nogil:
        for a in range(nt):
            t = t_lo + a * dt
            ct = cos(t)
            st = sin(t)
            for i in range(N):
                row[i, 0] = coef[i, 0] * (ct * ct) + coef[i, 3] * (st * st)
                row[i, 1] = coef[i, 1] * (ct * st)
                row[i, 2] = coef[i, 2] * (ct * st)
            for b in range(nf):
                x2 = phase[b]
                g = 0.0
                for i in range(N):
                    z = row[i, 0] + row[i, 1] * x2 + row[i, 2] * x2.conjugate()
                    g += _powabs(z, p)
                if g > best:
                    best = g
                    bt = t
                    bf = f_lo + b * df
    return best, bt, bf


def grid_pairnorm_d2(const cplx[:, :, ::1] T, double p, const double[::1] lo, const double[::1] hi,
                     const Py_ssize_t[::1] n):
    """Max of sum_i |<T_i x, y>|^p over a 4-parameter grid of unit pairs.

    x = (cos t1, e^{i f1} sin t1), y = (cos t2, e^{i f2} sin t2); the value is
    invariant under independent phases of x and y.
    """
    cdef Py_ssize_t N = T.shape[0]
    cdef Py_ssize_t a, b, c, e, i, ny
    cdef double st[4]
    cdef double best = -1.0, g
    cdef double[4] bp
    cdef Py_ssize_t[4] barg
    cdef cplx x1, x2, cc
    if T.shape[1] != 2:
        raise ValueError("grid oracle is for d = 2")
    if N > 64:
        raise ValueError("kernel supports N <= 64")
    for a in range(4):
        st[a] = (hi[a] - lo[a]) / (n[a] - 1) if n[a] > 1 else 0.0
        bp[a] = lo[a]
        barg[a] = 0
    # conj(y) for every (t2, f2), flattened
    t2 = lo[2] + np.arange(n[2]) * st[2]
    f2 = lo[3] + np.arange(n[3]) * st[3]
    ycon_arr = np.empty((n[2] * n[3], 2), dtype=np.complex128)
    ycon_arr[:, 0] = np.repeat(np.cos(t2), n[3])
    ycon_arr[:, 1] = np.conj(np.outer(np.sin(t2), np.exp(1j * f2)).reshape(-1))
    cdef cplx[:, ::1] ycon = ycon_arr
    cdef cplx[64] tx0
    cdef cplx[64] tx1
    ny = n[2] * n[3]
    with nogil:
        for a in range(n[0]):
            for b in range(n[1]):
                x1 = cos(lo[0] + a * st[0])
                x2.real = cos(lo[1] + b * st[1]) * sin(lo[0] + a * st[0])
                x2.imag = sin(lo[1] + b * st[1]) * sin(lo[0] + a * st[0])
                for i in range(N):
                    tx0[i] = T[i, 0, 0] * x1 + T[i, 0, 1] * x2
                    tx1[i] = T[i, 1, 0] * x1 + T[i, 1, 1] * x2
                for c in range(ny):
                    g = 0.0
                    for i in range(N):
                        cc = ycon[c, 0] * tx0[i] + ycon[c, 1] * tx1[i]
                        g += _powabs(cc, p)
                    if g > best:
                        best = g
                        barg[0] = a
                        barg[1] = b
                        barg[2] = c // n[3]
                        barg[3] = c % n[3]
    for a in range(4):
        bp[a] = lo[a] + barg[a] * st[a]
    return best, np.array([bp[0], bp[1], bp[2], bp[3]])
