# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Howell-form kernels over Z/M (mirrors howell_py exactly).

Entries are int64 and reduced into [0, M); M is small (a few hundred at
most), so products never approach the int64 range.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef i64 _gcd(i64 a, i64 b) noexcept:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a




cdef inline i64 _mod(i64 x, i64 M) noexcept:
    cdef i64 r = x % M
    if r < 0:
        r += M
    return r

cdef void _egcd(i64 a, i64 b, i64 *g, i64 *s, i64 *t) noexcept:
    cdef i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1, q, tmp
    while r1:
        q = r0 / r1
        tmp = r0 - q * r1; r0 = r1; r1 = tmp
        tmp = s0 - q * s1; s0 = s1; s1 = tmp
        tmp = t0 - q * t1; t0 = t1; t1 = tmp
    g[0] = r0; s[0] = s0; t[0] = t0


cdef i64 _unit_scale(i64 a, i64 M) noexcept:
    cdef i64 g = _gcd(a, M), m, v, gg, ss, tt, k, cand
    m = M / g
    _egcd((a / g) % m, m, &gg, &ss, &tt)
    v = ss % m
    if v < 0:
        v += m
    if v == 0:
        v = m
    for k in range(g + 1):
        cand = (v + k * m) % M
        if cand and _gcd(cand, M) == 1:
            return cand
    return 1  # unreachable


def howell_transform(mat, modulus):
    """Canonical Howell form H with transform T (H = T @ mat mod modulus)."""
    cdef i64 M = modulus
    if M <= 0:
        raise ValueError("modulus must be positive")
    a = np.asarray(mat, dtype=np.int64) % M
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    if M == 1:
        return (np.zeros((0, ncols), dtype=np.int64),
                np.zeros((0, nrows), dtype=np.int64))
    # workspace: rows of [row | transform]
    cdef cnp.ndarray[i64, ndim=2] work = np.zeros(
        (max(2 * nrows + 4, 4), ncols + nrows), dtype=np.int64)
    cdef i64[:, :] W = work
    cdef Py_ssize_t nwork = 0, i, j, col, w, npiv, cap
    for i in range(nrows):
        for j in range(ncols):
            W[nwork, j] = a[i, j]
        W[nwork, ncols + i] = 1
        nwork += 1

    piv_list = []  # (col, row-index in pivot storage)
    pivots = np.zeros((min(nrows, ncols) + ncols + 4, ncols + nrows),
                      dtype=np.int64)
    cdef i64[:, :] PV = pivots
    cdef Py_ssize_t npivots = 0
    cdef i64 pa, ob, g, s, t, u, q
    cdef Py_ssize_t total = ncols + nrows
    cdef cnp.ndarray[i64, ndim=2] tmprow = np.zeros((2, total), dtype=np.int64)
    cdef i64[:, :] TR = tmprow

    col = 0
    while nwork > 0 and col < ncols:
        # find first row with nonzero entry at col; combine the others in
        first = -1
        for i in range(nwork):
            if W[i, col] != 0:
                first = i
                break
        if first == -1:
            col += 1
            continue
        # move `first` into pivot slot by swapping with row 0 region:
        # accumulate into the pivot row
        if first != 0:
            for j in range(total):
                TR[0, j] = W[0, j]
                W[0, j] = W[first, j]
                W[first, j] = TR[0, j]
        i = 1
        while i < nwork:
            if W[i, col] == 0:
                i += 1
                continue
            pa = W[0, col]; ob = W[i, col]
            _egcd(pa, ob, &g, &s, &t)
            for j in range(total):
                TR[0, j] = _mod(s * W[0, j] + t * W[i, j], M)
                TR[1, j] = _mod((pa / g) * W[i, j] - (ob / g) * W[0, j], M)
            nonzero = False
            for j in range(total):
                W[0, j] = TR[0, j]
                W[i, j] = TR[1, j]
                if TR[1, j] != 0:
                    nonzero = True
            if not nonzero:
                # drop row i
                nwork -= 1
                for j in range(total):
                    W[i, j] = W[nwork, j]
            else:
                i += 1
        # normalize pivot to a divisor of M
        u = _unit_scale(W[0, col], M)
        if u != 1:
            for j in range(total):
                W[0, j] = _mod(u * W[0, j], M)
        g = W[0, col]
        # annihilator row
        if M / g > 1:
            q = M / g
            nonzero = False
            if nwork >= W.shape[0]:
                work = np.concatenate([work, np.zeros_like(work)])
                W = work
            for j in range(total):
                W[nwork, j] = _mod(q * W[0, j], M)
                if W[nwork, j] != 0:
                    nonzero = True
            if nonzero:
                nwork += 1
        # store pivot
        if npivots >= PV.shape[0]:
            pivots = np.concatenate([pivots, np.zeros_like(pivots)])
            PV = pivots
        for j in range(total):
            PV[npivots, j] = W[0, j]
        piv_list.append(col)
        npivots += 1
        # remove pivot row from work
        nwork -= 1
        for j in range(total):
            W[0, j] = W[nwork, j]
        col += 1

    # back-reduction
    cdef Py_ssize_t k2, j2, c2
    cdef i64 piv, q2
    for k2 in range(npivots):
        c2 = piv_list[k2]
        piv = PV[k2, c2]
        for j2 in range(k2):
            q2 = PV[j2, c2] / piv
            if q2:
                for j in range(total):
                    PV[j2, j] = _mod(PV[j2, j] - q2 * PV[k2, j], M)
    H = pivots[:npivots, :ncols].copy()
    T = pivots[:npivots, ncols:].copy()
    return H, T


def howell(mat, modulus):
    return howell_transform(mat, modulus)[0]


def solve_upper(H, modulus, target):
    cdef i64 M = modulus
    t = np.asarray(target, dtype=np.int64) % M
    cdef cnp.ndarray[i64, ndim=2] Ha = np.ascontiguousarray(H, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ta = np.ascontiguousarray(t)
    cdef Py_ssize_t nr = Ha.shape[0], nc = Ha.shape[1], i, j, lead, c
    coeffs = np.zeros(nr, dtype=np.int64)
    cdef i64[:] co = coeffs
    cdef i64[:, :] Hv = Ha
    cdef i64[:] tv = ta
    cdef i64 g, q
    if M == 1:
        return coeffs
    for i in range(nr):
        c = -1
        for j in range(nc):
            if Hv[i, j] != 0:
                c = j
                break
        lead = -1
        for j in range(nc):
            if tv[j] != 0:
                lead = j
                break
        if lead == -1:
            return coeffs
        if c == -1 or lead < c:
            return None
        g = Hv[i, c]
        if tv[c] % g:
            return None
        q = tv[c] / g
        co[i] = q
        if q:
            for j in range(nc):
                tv[j] = _mod(tv[j] - q * Hv[i, j], M)
    for j in range(nc):
        if tv[j] != 0:
            return None
    return coeffs
