"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import numpy as np

_CHUNK = 1 << 18


def tail_powers(mod, p):
    """Suffix sums S[k, m] = sum_{i >= m} mod[k, i]**p, Kahan-compensated.

    The loop runs over sequence positions; all members advance together.
    """
    mod = np.ascontiguousarray(mod, dtype=np.float64)
    M, N = mod.shape
    vals = mod if p == 1.0 else (mod * mod if p == 2.0 else mod**p)
    out = np.zeros((M, N + 1), dtype=np.float64)
    s = np.zeros(M)
    c = np.zeros(M)
    for i in range(N - 1, -1, -1):
        y = vals[:, i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[:, i] = s
    return out


def pnorm_dist_to(X, x, p, is_inf):
    diff = np.abs(np.asarray(X) - np.asarray(x)[None, :])
    if diff.shape[1] == 0:
        return np.zeros(diff.shape[0])
    if is_inf:
        return diff.max(axis=1)
    if p == 2.0:
        return np.sqrt((diff * diff).sum(axis=1))
    if p == 1.0:
        return diff.sum(axis=1)
    return (diff**p).sum(axis=1) ** (1.0 / p)


def _weights(z, p):
    a = np.abs(z)
    w = np.zeros_like(a)
    nz = a > 0
    if p == 2.0:
        w[nz] = 2.0
        g = float((a * a).sum())
    else:
        w[nz] = p * a[nz] ** (p - 2.0)
        g = float((a[nz] ** p).sum())
    return g, w


def joint_obj_grad(T, x, p):
    """g = sum_i |<T_i x, x>|^p and its gradient 2 dg/d(conj x)."""
    Tx = T @ x
    THx = np.conj(T).transpose(0, 2, 1) @ x
    z = Tx @ np.conj(x)
    g, w = _weights(z, p)
    grad = ((w * np.conj(z))[:, None] * Tx + (w * z)[:, None] * THx).sum(axis=0)
    return g, grad


def pair_obj_grad(T, x, y, p):
    """g = sum_i |<T_i x, y>|^p with 2 dg/d(conj x) and 2 dg/d(conj y)."""
    Tx = T @ x
    THy = np.conj(T).transpose(0, 2, 1) @ y
    c = Tx @ np.conj(y)
    g, w = _weights(c, p)
    gx = ((w * c)[:, None] * THy).sum(axis=0)
    gy = ((w * np.conj(c))[:, None] * Tx).sum(axis=0)
    return g, gx, gy


def _powabs(z, p):
    a2 = z.real * z.real + z.imag * z.imag
    if p == 2.0:
        return a2
    if p == 1.0:
        return np.sqrt(a2)
    return a2 ** (0.5 * p)


def grid_radius_d2(T, p, t_lo, t_hi, nt, f_lo, f_hi, nf):
    """Max of sum_i |<T_i x, x>|^p over x = (cos t, e^{if} sin t) on a grid."""
    if T.shape[1] != 2:
        raise ValueError("grid oracle is for d = 2")
    ts = np.linspace(t_lo, t_hi, nt) if nt > 1 else np.array([t_lo])
    fs = np.linspace(f_lo, f_hi, nf) if nf > 1 else np.array([f_lo])
    ct = np.cos(ts)[:, None]
    st = np.sin(ts)[:, None]
    x2 = np.exp(1j * fs)[None, :] * st
    g = np.zeros((ts.size, fs.size))
    for Ti in T:
        z = (Ti[0, 0] * ct * ct + Ti[0, 1] * ct * x2 + Ti[1, 0] * ct * np.conj(x2)
             + Ti[1, 1] * np.abs(x2) ** 2)
        g += _powabs(z, p)
    k = int(np.argmax(g))
    a, b = divmod(k, fs.size)
    return float(g[a, b]), float(ts[a]), float(fs[b])


def _unit_grid(t_lo, t_hi, nt, f_lo, f_hi, nf):
    ts = np.linspace(t_lo, t_hi, nt) if nt > 1 else np.array([t_lo])
    fs = np.linspace(f_lo, f_hi, nf) if nf > 1 else np.array([f_lo])
    tt, ff = np.meshgrid(ts, fs, indexing="ij")
    vecs = np.stack([np.cos(tt).astype(np.complex128), np.exp(1j * ff) * np.sin(tt)], axis=-1)
    return vecs.reshape(-1, 2), tt.reshape(-1), ff.reshape(-1)


def grid_pairnorm_d2(T, p, lo, hi, n):
    """Max of sum_i |<T_i x, y>|^p over a 4-parameter grid of unit pairs."""
    if T.shape[1] != 2:
        raise ValueError("grid oracle is for d = 2")
    X, t1, f1 = _unit_grid(lo[0], hi[0], int(n[0]), lo[1], hi[1], int(n[1]))
    Y, t2, f2 = _unit_grid(lo[2], hi[2], int(n[2]), lo[3], hi[3], int(n[3]))
    best = -1.0
    arg = (0, 0)
    step = max(1, _CHUNK // max(1, Y.shape[0]))
    for start in range(0, X.shape[0], step):
        Xc = X[start:start + step]
        g = np.zeros((Y.shape[0], Xc.shape[0]))
        for Ti in T:
            C = np.conj(Y) @ (Ti @ Xc.T)
            g += _powabs(C, p)
        k = int(np.argmax(g))
        a, b = divmod(k, Xc.shape[0])
        if g[a, b] > best:
            best = float(g[a, b])
            arg = (start + b, a)
    ix, iy = arg
    return best, np.array([t1[ix], f1[ix], t2[iy], f2[iy]])
