"""Hot per-site kernels with a numba path and a pure-numpy path.

Every public function here dispatches on :data:`topoforms._backend.BACKEND`.
The ``*_nb`` and ``*_np`` variants are importable directly so that tests and
the benchmark can compare them side by side.

Array conventions: sites are flattened to the last axis (``S``), component
axes come first.
"""
import numpy as np

from ._backend import USE_JIT, njit, prange


# ---------------------------------------------------------------- stencils

@njit
def _central_diff_nb(f, h, periodic):
    pre, n, post = f.shape
    out = np.empty_like(f)
    h2 = 2.0 * h
    for a in range(pre):
        for i in range(1, n - 1):
            for b in range(post):
                out[a, i, b] = (f[a, i + 1, b] - f[a, i - 1, b]) / h2
        for b in range(post):
            if periodic:
                out[a, 0, b] = (f[a, 1, b] - f[a, n - 1, b]) / h2
                out[a, n - 1, b] = (f[a, 0, b] - f[a, n - 2, b]) / h2
            else:
                out[a, 0, b] = (-3.0 * f[a, 0, b] + 4.0 * f[a, 1, b] - f[a, 2, b]) / h2
                out[a, n - 1, b] = (3.0 * f[a, n - 1, b] - 4.0 * f[a, n - 2, b]
                                    + f[a, n - 3, b]) / h2
    return out


def _central_diff_np(f, h, periodic):
    out = np.empty_like(f)
    h2 = 2.0 * h
    out[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / h2
    if periodic:
        out[:, 0] = (f[:, 1] - f[:, -1]) / h2
        out[:, -1] = (f[:, 0] - f[:, -2]) / h2
    else:
        out[:, 0] = (-3.0 * f[:, 0] + 4.0 * f[:, 1] - f[:, 2]) / h2
        out[:, -1] = (3.0 * f[:, -1] - 4.0 * f[:, -2] + f[:, -3]) / h2
    return out


def central_diff(f3, h, periodic):
    """Second-order derivative along the middle axis of a ``(pre, n, post)`` array."""
    f3 = np.ascontiguousarray(f3, dtype=np.float64)
    if USE_JIT:
        return _central_diff_nb(f3, float(h), bool(periodic))
    return _central_diff_np(f3, float(h), bool(periodic))


# ------------------------------------------------------------- reductions

@njit
def _pairwise_sum_nb(x):
    n = x.shape[0]
    if n == 0:
        return 0.0
    buf = x.copy()
    while n > 1:
        m = n // 2
        for i in range(m):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        if n % 2 == 1:
            buf[m] = buf[n - 1]
            n = m + 1
        else:
            n = m
    return buf[0]


def _pairwise_sum_np(x):
    n = x.shape[0]
    if n == 0:
        return 0.0
    buf = x.copy()
    while n > 1:
        m = n // 2
        buf[:m] = buf[0:2 * m:2] + buf[1:2 * m:2]
        if n % 2 == 1:
            buf[m] = buf[n - 1]
            n = m + 1
        else:
            n = m
    return float(buf[0])


def pairwise_sum(x):
    """Deterministic pairwise-tree sum; both backends give bit-identical results."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if USE_JIT:
        return float(_pairwise_sum_nb(x))
    return _pairwise_sum_np(x)


# ------------------------------------------------------- epsilon contractions

@njit(parallel=True)
def _eps_pair_contract_nb(F, perms, signs, scale):
    nlie = F.shape[0]
    nsite = F.shape[3]
    npm = perms.shape[0]
    half = perms.shape[1] // 2
    out = np.zeros(nsite)
    for s in prange(nsite):
        acc = 0.0
        for p in range(npm):
            t = 0.0
            for a in range(nlie):
                if half == 2:
                    t += F[a, perms[p, 0], perms[p, 1], s] * F[a, perms[p, 2], perms[p, 3], s]
                else:
                    t += F[a, perms[p, 0], perms[p, 1], s]
            acc += signs[p] * t
        out[s] = scale * acc
    return out


def _eps_pair_contract_np(F, perms, signs, scale):
    half = perms.shape[1] // 2
    acc = np.zeros(F.shape[3])
    for perm, sign in zip(perms, signs):
        if half == 2:
            t = np.einsum("as,as->s", F[:, perm[0], perm[1]], F[:, perm[2], perm[3]])
        else:
            t = F[:, perm[0], perm[1]].sum(axis=0)
        acc += sign * t
    return scale * acc


def eps_pair_contract(F, perms, signs, scale):
    """``scale * eps^{i1..id} F_{i1 i2} (F_{i3 i4})``, Lie index summed.

    ``F`` has shape ``(nlie, d, d, S)``; ``d`` is 2 (one factor) or 4 (two
    factors).
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    if USE_JIT:
        return _eps_pair_contract_nb(F, perms, signs, float(scale))
    return _eps_pair_contract_np(F, perms, signs, float(scale))


@njit(parallel=True)
def _cs_contract_nb(A, dA, f, perms, signs, lead, nout):
    nlie = A.shape[0]
    nsite = A.shape[2]
    npm = perms.shape[0]
    third = 1.0 / 3.0
    out = np.zeros((nout, nsite))
    for s in prange(nsite):
        for p in range(npm):
            i = perms[p, lead]
            j = perms[p, lead + 1]
            k = perms[p, lead + 2]
            t = 0.0
            for a in range(nlie):
                t += A[a, i, s] * dA[a, j, k, s]
            if nlie > 1:
                c3 = 0.0
                for a in range(nlie):
                    for b in range(nlie):
                        for c in range(nlie):
                            fabc = f[a, b, c]
                            if fabc != 0.0:
                                c3 += fabc * A[a, i, s] * A[b, j, s] * A[c, k, s]
                t += third * c3
            o = perms[p, 0] if lead == 1 else 0
            out[o, s] += signs[p] * t
    return out


def _cs_contract_np(A, dA, f, perms, signs, lead, nout):
    nlie = A.shape[0]
    out = np.zeros((nout, A.shape[2]))
    for perm, sign in zip(perms, signs):
        i, j, k = perm[lead], perm[lead + 1], perm[lead + 2]
        t = np.einsum("as,as->s", A[:, i], dA[:, j, k])
        if nlie > 1:
            t = t + np.einsum("abc,as,bs,cs->s", f, A[:, i], A[:, j], A[:, k],
                              optimize=True) / 3.0
        out[perm[0] if lead == 1 else 0] += sign * t
    return out


def cs_contract(A, dA, f, perms, signs, lead):
    """Chern-Simons contraction ``eps (A^a dA^a + 1/3 f_abc A^a A^b A^c)``.

    ``A``: ``(nlie, d, S)``; ``dA[a, j, k] = d_j A^a_k``: ``(nlie, d, d, S)``;
    ``f``: ``(nlie, nlie, nlie)``. With ``lead=1`` the first permutation slot
    is a free index and the result is a current of shape ``(d, S)``; with
    ``lead=0`` the result is a density of shape ``(1, S)``.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    dA = np.ascontiguousarray(dA, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    nout = A.shape[1] if lead == 1 else 1
    if USE_JIT:
        return _cs_contract_nb(A, dA, f, perms, signs, int(lead), nout)
    return _cs_contract_np(A, dA, f, perms, signs, int(lead), nout)


# ------------------------------------------------------------- quaternions

@njit(parallel=True)
def _quat_mul_nb(p, q):
    n = p.shape[1]
    out = np.empty((4, n))
    for s in prange(n):
        pw, px, py, pz = p[0, s], p[1, s], p[2, s], p[3, s]
        qw, qx, qy, qz = q[0, s], q[1, s], q[2, s], q[3, s]
        out[0, s] = pw * qw - px * qx - py * qy - pz * qz
        out[1, s] = pw * qx + px * qw + py * qz - pz * qy
        out[2, s] = pw * qy - px * qz + py * qw + pz * qx
        out[3, s] = pw * qz + px * qy - py * qx + pz * qw
    return out


def _quat_mul_np(p, q):
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ])


def quat_mul(p, q):
    """Hamilton product of two ``(4, S)`` quaternion arrays."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    if USE_JIT:
        return _quat_mul_nb(p, q)
    return _quat_mul_np(p, q)


@njit(parallel=True)
def _trace_cubed_nb(u, perms, signs):
    n = u.shape[2]
    npm = perms.shape[0]
    out = np.zeros(n)
    for s in prange(n):
        acc = 0.0
        for p in range(npm):
            i, j, k = perms[p, 0], perms[p, 1], perms[p, 2]
            aw, ax, ay, az = u[i, 0, s], u[i, 1, s], u[i, 2, s], u[i, 3, s]
            bw, bx, by, bz = u[j, 0, s], u[j, 1, s], u[j, 2, s], u[j, 3, s]
            cw, cx, cy, cz = u[k, 0, s], u[k, 1, s], u[k, 2, s], u[k, 3, s]
            # scalar part of (a b) c
            ew = aw * bw - ax * bx - ay * by - az * bz
            ex = aw * bx + ax * bw + ay * bz - az * by
            ey = aw * by - ax * bz + ay * bw + az * bx
            ez = aw * bz + ax * by - ay * bx + az * bw
            acc += signs[p] * (ew * cw - ex * cx - ey * cy - ez * cz)
        out[s] = 2.0 * acc
    return out


def _trace_cubed_np(u, perms, signs):
    acc = np.zeros(u.shape[2])
    for perm, sign in zip(perms, signs):
        e = _quat_mul_np(u[perm[0]], u[perm[1]])
        c = u[perm[2]]
        acc += sign * (e[0] * c[0] - e[1] * c[1] - e[2] * c[2] - e[3] * c[3])
    return 2.0 * acc


def trace_cubed(u, perms, signs):
    """``eps^{ijk} tr(L_i L_j L_k)`` for SU(2) matrices stored as quaternions.

    ``u`` has shape ``(3, 4, S)``: one quaternion per direction. The 2x2 trace
    of a quaternion is twice its scalar part.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    if USE_JIT:
        return _trace_cubed_nb(u, perms, signs)
    return _trace_cubed_np(u, perms, signs)
