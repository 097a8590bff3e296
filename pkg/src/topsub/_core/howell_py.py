"""Pure-Python Howell-form kernels over Z/M.

Reference implementation of the row-reduction primitives; the compiled
extension in ``howell_cy`` mirrors these semantics exactly.  Matrices are
``int64`` numpy arrays with entries reduced into ``[0, M)``.  The modulus M is
small (the lcm of the coordinate moduli of a code, at most a few hundred), so
intermediate products stay far below the int64 range.

The Howell form of a row span over Z/M is canonical: two generating sets of
the same span reduce to the identical matrix.  Beyond row echelon form it
satisfies the span-closure property (every span element whose leading entries
vanish is a combination of the later rows), which is what makes kernel and
quotient computations by block elimination correct over a non-field ring.
"""

from math import gcd

import numpy as np


def _egcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def _unit_scale(a, modulus):
    """A unit u mod `modulus` with u*a = gcd(a, modulus) mod `modulus`."""
    g = gcd(a, modulus)
    m = modulus // g
    # a/g is invertible mod m; lift the inverse to a unit mod `modulus`.
    _, v, _ = _egcd((a // g) % m, m)
    v %= m
    if v == 0:
        v = m  # happens only when m == 1
    for k in range(g + 1):
        cand = v + k * m
        if gcd(cand, modulus) == 1:
            return cand % modulus
    raise ArithmeticError("unit lifting failed")  # unreachable


def _leading(row):
    nz = np.flatnonzero(row)
    return int(nz[0]) if nz.size else -1


def howell_transform(mat, modulus):
    """Canonical Howell form H of the row span of `mat`, with transform T.

    Returns ``(H, T)`` with ``H = (T @ mat) % modulus``; H has no zero rows,
    pivots are divisors of `modulus`, entries above a pivot are reduced modulo
    that pivot, and rows are ordered by pivot column.
    """
    M = int(modulus)
    if M <= 0:
        raise ValueError("modulus must be positive")
    a = np.asarray(mat, dtype=np.int64) % M
    nrows, ncols = a.shape
    if M == 1:
        return (np.zeros((0, ncols), dtype=np.int64),
                np.zeros((0, nrows), dtype=np.int64))
    rows = [a[i].copy() for i in range(nrows)]
    trans = [np.zeros(nrows, dtype=np.int64) for _ in range(nrows)]
    for i in range(nrows):
        trans[i][i] = 1

    work = [(rows[i], trans[i]) for i in range(nrows) if rows[i].any()]
    pivots = []  # (col, row, trow)
    col = 0
    while work and col < ncols:
        hits = [wt for wt in work if wt[0][col] != 0]
        rest = [wt for wt in work if wt[0][col] == 0]
        if not hits:
            col += 1
            continue
        prow, ptr = hits[0]
        for orow, otr in hits[1:]:
            pa, ob = int(prow[col]), int(orow[col])
            g, s, t = _egcd(pa, ob)
            newp = (s * prow + t * orow) % M
            newt = (s * ptr + t * otr) % M
            newo = ((pa // g) * orow - (ob // g) * prow) % M
            newot = ((pa // g) * otr - (ob // g) * ptr) % M
            prow, ptr = newp, newt
            if newo.any():
                rest.append((newo, newot))
        u = _unit_scale(int(prow[col]), M)
        prow = (u * prow) % M
        ptr = (u * ptr) % M
        g = int(prow[col])
        ann = ((M // g) * prow) % M
        if ann.any():
            rest.append((ann, ((M // g) * ptr) % M))
        pivots.append((col, prow, ptr))
        work = rest
        col += 1

    # Reduce entries above each pivot into [0, pivot).
    for k in range(len(pivots)):
        c, prow, ptr = pivots[k]
        g = int(prow[c])
        for j in range(k):
            _, jrow, jtr = pivots[j]
            q = int(jrow[c]) // g
            if q:
                jrow -= q * prow
                jrow %= M
                jtr -= q * ptr
                jtr %= M

    if pivots:
        H = np.stack([p[1] for p in pivots])
        T = np.stack([p[2] for p in pivots])
    else:
        H = np.zeros((0, ncols), dtype=np.int64)
        T = np.zeros((0, nrows), dtype=np.int64)
    return H, T


def howell(mat, modulus):
    """Canonical Howell form of the row span of `mat` over Z/modulus."""
    return howell_transform(mat, modulus)[0]


def solve_upper(H, modulus, target):
    """Coefficients c with c @ H = target mod `modulus`, or None.

    `H` must be a Howell form as produced by :func:`howell`.
    """
    M = int(modulus)
    t = np.asarray(target, dtype=np.int64) % M
    if M == 1:
        return np.zeros(H.shape[0], dtype=np.int64)
    coeffs = np.zeros(H.shape[0], dtype=np.int64)
    for i in range(H.shape[0]):
        c = _leading(H[i])
        lead = _leading(t)
        if lead == -1:
            break
        if lead < c:
            return None
        g = int(H[i][c])
        if int(t[c]) % g:
            return None
        q = int(t[c]) // g
        coeffs[i] = q
        t = (t - q * H[i]) % M
    return coeffs if not t.any() else None
