"""Exact linear algebra over products of integer residue rings.

Vectors live in ``Z_{m_0} x ... x Z_{m_{n-1}}`` with per-coordinate moduli.
Internally every computation embeds such a vector into ``(Z_M)^n`` with
``M = lcm(m_i)`` by scaling coordinate ``i`` with ``M // m_i``; the embedding
is an injective homomorphism, so spans, kernels and membership transfer
faithfully.  The scaled matrices are reduced to canonical Howell form by the
kernels in :mod:`topsub._core`.

All arithmetic is exact; group orders are arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from ._core import howell, howell_transform, solve_upper


class ProfileMismatchError(ValueError):
    """Raised when vectors with different moduli profiles are combined."""


class SubgroupViolationError(ValueError):
    """Raised when a claimed subgroup relation does not hold."""


@dataclass(frozen=True)
class ModVector:
    """An element of a product of cyclic groups, coordinates always reduced."""

    coords: tuple
    moduli: tuple

    def __post_init__(self):
        if len(self.coords) != len(self.moduli):
            raise ProfileMismatchError("coords/moduli length mismatch")
        if any(m < 1 for m in self.moduli):
            raise ValueError("moduli must be positive")
        object.__setattr__(
            self, "coords",
            tuple(int(c) % int(m) for c, m in zip(self.coords, self.moduli)))
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))

    def __add__(self, other: "ModVector") -> "ModVector":
        self._check(other)
        return ModVector(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.moduli)

    def __sub__(self, other: "ModVector") -> "ModVector":
        self._check(other)
        return ModVector(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.moduli)

    def __mul__(self, k: int) -> "ModVector":
        return ModVector(tuple(k * a for a in self.coords), self.moduli)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        """Additive order of the element."""
        o = 1
        for c, m in zip(self.coords, self.moduli):
            if c:
                o = lcm(o, m // gcd(m, c))
        return o

    def _check(self, other: "ModVector"):
        if self.moduli != other.moduli:
            raise ProfileMismatchError("moduli profiles differ")


def zero_vector(moduli: Sequence[int]) -> ModVector:
    return ModVector((0,) * len(moduli), tuple(moduli))


def _scale_factors(moduli):
    M = lcm(*moduli) if moduli else 1
    return M, np.array([M // m for m in moduli], dtype=np.int64)


def _scaled_matrix(vectors, moduli):
    M, s = _scale_factors(moduli)
    if not vectors:
        return M, np.zeros((0, len(moduli)), dtype=np.int64)
    a = np.array([v.coords for v in vectors], dtype=np.int64)
    return M, (a * s) % M


class GroupBasis:
    """Canonical basis of an additive span in a product of residue rings.

    Two generating sets with equal spans produce identical bases (Howell
    canonicity), and `order` is the exact number of elements of the span.
    """

    def __init__(self, moduli, scaled_howell, M):
        self.moduli = tuple(int(m) for m in moduli)
        self._M = M
        self._H = scaled_howell
        _, s = _scale_factors(self.moduli) if self.moduli else (1, None)
        if scaled_howell.shape[0]:
            un = scaled_howell // s
            self.generators = tuple(
                ModVector(tuple(int(x) for x in row), self.moduli) for row in un)
        else:
            self.generators = ()
        order = 1
        for row in scaled_howell:
            nz = np.flatnonzero(row)
            order *= M // int(row[nz[0]])
        self.order = order

    def __eq__(self, other):
        return (isinstance(other, GroupBasis) and self.moduli == other.moduli
                and self._H.shape == other._H.shape
                and bool(np.array_equal(self._H, other._H)))

    def __hash__(self):
        return hash((self.moduli, self._H.tobytes()))

    def __repr__(self):
        return f"GroupBasis(rank={len(self.generators)}, order={self.order})"

    def contains(self, v: ModVector) -> bool:
        return solve_membership(v, self) is not None

    def row_orders(self):
        """Coefficient ranges: generator i has unique coefficients in [0, r_i)."""
        out = []
        for row in self._H:
            nz = np.flatnonzero(row)
            out.append(self._M // int(row[nz[0]]))
        return out


def canonical_basis(vectors: Iterable[ModVector],
                    moduli: Optional[Sequence[int]] = None) -> GroupBasis:
    """The unique canonical basis of the additive span of `vectors`."""
    vectors = list(vectors)
    if moduli is None:
        if not vectors:
            raise ValueError("moduli required for an empty generating set")
        moduli = vectors[0].moduli
    moduli = tuple(int(m) for m in moduli)
    for v in vectors:
        if v.moduli != moduli:
            raise ProfileMismatchError("moduli profiles differ")
    M, a = _scaled_matrix(vectors, moduli)
    return GroupBasis(moduli, howell(a, M), M)


def solve_membership(target: ModVector, basis: GroupBasis):
    """Coefficients over `basis.generators` reproducing `target`, else None."""
    if target.moduli != basis.moduli:
        raise ProfileMismatchError("moduli profiles differ")
    M, s = _scale_factors(basis.moduli)
    t = (np.array(target.coords, dtype=np.int64) * s) % M
    c = solve_upper(basis._H, M, t)
    return None if c is None else tuple(int(x) for x in c)


def quotient_order(big: GroupBasis, small: GroupBasis) -> int:
    """Exact index [big : small]; `small` must span a subgroup of `big`."""
    if big.moduli != small.moduli:
        raise ProfileMismatchError("moduli profiles differ")
    for g in small.generators:
        if not big.contains(g):
            raise SubgroupViolationError("small span is not inside big span")
    return big.order // small.order


def kernel(map_rows: Sequence[ModVector], domain_moduli: Sequence[int]) -> GroupBasis:
    """Kernel of ``x -> (sum_i x_i row_j[i] mod row_j modulus)_j``.

    Each map row is a ModVector whose uniform modulus is the modulus of that
    output coordinate; the domain is ``prod Z_{domain_moduli[i]}``.
    """
    domain_moduli = tuple(int(m) for m in domain_moduli)
    n = len(domain_moduli)
    if n == 0:
        return canonical_basis([], moduli=())
    rows = list(map_rows)
    for r in rows:
        if len(r.coords) != n:
            raise ProfileMismatchError("map row length does not match domain")
    out_moduli = [r.moduli[0] if r.moduli else 1 for r in rows]
    for r, om in zip(rows, out_moduli):
        for i, c in enumerate(r.coords):
            if (domain_moduli[i] * c) % om:
                raise ValueError(
                    "map is not well defined on the domain "
                    f"(coordinate {i}, output modulus {om})")
    M = lcm(*domain_moduli, *(out_moduli or [1]))
    k = len(rows)
    # Block matrix [image | tag]: row i is the image of the i-th domain
    # generator together with its (scaled) tag.  Howell rows with zero image
    # block carry kernel elements in their tags.
    mat = np.zeros((n, k + n), dtype=np.int64)
    for j, r in enumerate(rows):
        sj = M // out_moduli[j]
        for i in range(n):
            mat[i, j] = (sj * r.coords[i]) % M
    for i in range(n):
        mat[i, k + i] = M // domain_moduli[i]
    H = howell(mat, M)
    kers = []
    _, s = _scale_factors(domain_moduli)
    for row in H:
        if not row[:k].any():
            tags = row[k:] // s
            kers.append(ModVector(tuple(int(x) for x in tags), domain_moduli))
    return canonical_basis(kers, moduli=domain_moduli)


def express_in(vectors: Sequence[ModVector], target: ModVector):
    """Integer coefficients over the *given* vectors with ``sum c_i v_i = target``.

    Unlike :func:`solve_membership` the coefficients refer to the input list,
    not to a canonical basis.  Returns None when the target is outside the span.
    """
    if not vectors:
        return None if not target.is_zero() else ()
    moduli = target.moduli
    for v in vectors:
        if v.moduli != moduli:
            raise ProfileMismatchError("moduli profiles differ")
    M, a = _scaled_matrix(list(vectors), moduli)
    H, T = howell_transform(a, M)
    _, s = _scale_factors(moduli)
    t = (np.array(target.coords, dtype=np.int64) * s) % M
    c = solve_upper(H, M, t)
    if c is None:
        return None
    return tuple(int(x) for x in (c @ T) % M)


def span_sum(a: GroupBasis, b: GroupBasis) -> GroupBasis:
    if a.moduli != b.moduli:
        raise ProfileMismatchError("moduli profiles differ")
    return canonical_basis(list(a.generators) + list(b.generators), a.moduli)


def span_intersection(a: GroupBasis, b: GroupBasis) -> GroupBasis:
    """Canonical basis of the intersection of two spans."""
    if a.moduli != b.moduli:
        raise ProfileMismatchError("moduli profiles differ")
    ga, gb = list(a.generators), list(b.generators)
    if not ga or not gb:
        return canonical_basis([], a.moduli)
    # Kernel of (c, d) -> sum c_i ga_i - sum d_j gb_j, read off the c-part.
    n = len(ga) + len(gb)
    rows = []
    for coord in range(len(a.moduli)):
        coeffs = [g.coords[coord] for g in ga] + [-g.coords[coord] for g in gb]
        rows.append(ModVector(tuple(coeffs), (a.moduli[coord],) * n))
    M = lcm(*a.moduli)
    dom = (M,) * n
    ker = kernel(rows, dom)
    vecs = []
    for cv in ker.generators:
        acc = zero_vector(a.moduli)
        for ci, g in zip(cv.coords[:len(ga)], ga):
            acc = acc + ci * g
        vecs.append(acc)
    return canonical_basis(vecs, a.moduli)


def solve_linear(columns: Sequence[ModVector], rhs: ModVector):
    """Solve ``sum_j x_j col_j = rhs`` for integer unknowns; None if infeasible."""
    return express_in(columns, rhs)


def _snf_mod(mat, M):
    """Smith form of `mat` over Z/M: diagonal d with A ~ U diag(d) V.

    Returns ``(d, V, Vinv)`` where ``rowspan_{Z_M}(mat) = rowspan(diag(d) @ V)``
    and d entries divide M (0 is normalized to M, i.e. "no relation").
    Only the column transform is tracked; row operations are span-preserving.
    """
    from ._core.howell_py import _egcd, _unit_scale

    B = np.array(mat, dtype=np.int64) % M
    nr, nc = B.shape
    V = np.eye(nc, dtype=np.int64)
    Vinv = np.eye(nc, dtype=np.int64)
    # Invariant: rowspan(original) == rowspan(B @ V); Vinv = V^{-1} mod M.

    def colop_combine(c1, c2, s, t, u, v):
        # (col c1, col c2) <- (s*c1 + t*c2, u*c1 + v*c2) with sv - tu = +-1.
        det = s * v - t * u
        if det not in (1, -1):
            raise AssertionError("column op must be unimodular")
        b1, b2 = B[:, c1].copy(), B[:, c2].copy()
        B[:, c1], B[:, c2] = (s * b1 + t * b2) % M, (u * b1 + v * b2) % M
        # Columns transform by E on the right with block [[s, u], [t, v]] at
        # (c1, c2); the invariant rowspan(B @ V) needs V <- E^{-1} V.
        e1, e2 = V[c1].copy(), V[c2].copy()
        V[c1], V[c2] = (det * (v * e1 - u * e2)) % M, (det * (-t * e1 + s * e2)) % M
        f1, f2 = Vinv[:, c1].copy(), Vinv[:, c2].copy()
        Vinv[:, c1], Vinv[:, c2] = (s * f1 + t * f2) % M, (u * f1 + v * f2) % M

    def colswap(c1, c2):
        colop_combine(c1, c2, 0, 1, 1, 0)

    def normalize_pivot(k):
        u = _unit_scale(int(B[k, k]), M)
        if u != 1:
            B[k] = (u * B[k]) % M

    k = 0
    while k < min(nr, nc):
        sub = B[k:, k:]
        if not sub.any():
            break
        # Pick the nonzero entry with the smallest gcd with M as the pivot.
        gcds = np.gcd(sub, M)
        gcds[sub == 0] = M + 1
        bi, bj = np.unravel_index(int(np.argmin(gcds)), gcds.shape)
        bi, bj = bi + k, bj + k
        if bi != k:
            B[[k, bi]] = B[[bi, k]]
        if bj != k:
            colswap(k, bj)
        while True:
            normalize_pivot(k)
            piv = int(B[k, k])
            # gcd-combine away any row/column entry the pivot cannot clear;
            # each combine strictly decreases gcd(pivot, M), so this ends.
            dirty = False
            for i in range(k + 1, nr):
                if B[i, k] % piv:
                    a, b = piv, int(B[i, k])
                    g, s, t = _egcd(a, b)
                    rk, ri = B[k].copy(), B[i].copy()
                    B[k] = (s * rk + t * ri) % M
                    B[i] = ((a // g) * ri - (b // g) * rk) % M
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(k + 1, nc):
                if B[k, j] % piv:
                    a, b = piv, int(B[k, j])
                    g, s, t = _egcd(a, b)
                    colop_combine(k, j, s, t, -(b // g), a // g)
                    dirty = True
                    break
            if not dirty:
                break
        piv = int(B[k, k])
        # The pivot divides its row and column; plain reductions clear them
        # without touching column k or row k again.
        for i in range(k + 1, nr):
            q = int(B[i, k]) // piv
            if q:
                B[i] = (B[i] - q * B[k]) % M
        for j in range(k + 1, nc):
            q = int(B[k, j]) // piv
            if q:
                colop_combine(k, j, 1, 0, -q, 1)
        # Enforce the divisibility chain d_k | d_{k+1} | ...
        off = None
        rest = B[k + 1:, k + 1:]
        if rest.size:
            bad = (np.gcd(rest, M) % piv != 0) & (rest != 0)
            if bad.any():
                off = int(np.argwhere(bad.any(axis=0))[0][0]) + k + 1
        if off is not None:
            colop_combine(k, off, 1, 1, 0, 1)  # col k += col off
            continue
        k += 1
    diag = []
    for j in range(nc):
        d = int(B[j, j]) if j < min(nr, nc) else 0
        diag.append(gcd(d, M) if d else M)
    return diag, V % M, Vinv % M


class QuotientStructure:
    """Cyclic decomposition of big/small with coordinates and representatives."""

    def __init__(self, big: GroupBasis, small: GroupBasis):
        if big.moduli != small.moduli:
            raise ProfileMismatchError("moduli profiles differ")
        for g in small.generators:
            if not big.contains(g):
                raise SubgroupViolationError("small span is not inside big span")
        self.big = big
        self.small = small
        gens = list(big.generators)
        r = len(gens)
        M = lcm(*big.moduli) if big.moduli else 1
        if r == 0:
            self.orders, self._V, self._Vinv, self._M = (), None, None, M
            self._kept = ()
            self.reps = ()
            return
        # Relation lattice of the generator tuple modulo `small`.
        n = len(big.moduli)
        rows = []
        allv = gens + list(small.generators)
        for coord in range(n):
            coeffs = [v.coords[coord] for v in allv]
            rows.append(ModVector(tuple(coeffs), (big.moduli[coord],) * len(allv)))
        ker = kernel(rows, (M,) * len(allv))
        relmat = np.array([kv.coords[:r] for kv in ker.generators],
                          dtype=np.int64).reshape(-1, r)
        if relmat.shape[0] == 0:
            relmat = np.zeros((1, r), dtype=np.int64)
        diag, V, Vinv = _snf_mod(relmat, M)
        self._M, self._V, self._Vinv = M, V, Vinv
        kept = [k for k in range(r) if diag[k] > 1]
        self._kept = tuple(kept)
        self.orders = tuple(diag[k] for k in kept)
        reps = []
        for k in kept:
            acc = zero_vector(big.moduli)
            for j in range(r):
                acc = acc + int(V[k, j]) * gens[j]
            reps.append(acc)
        self.reps = tuple(reps)

    @property
    def order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def coords_of(self, v: ModVector):
        """Quotient coordinates of an element of the big span."""
        c = solve_membership(v, self.big)
        if c is None:
            raise SubgroupViolationError("element outside the big span")
        if not self.orders:
            return ()
        z = (np.array(c, dtype=np.int64) @ self._Vinv) % self._M
        return tuple(int(z[k]) % o for k, o in zip(self._kept, self.orders))

    def rep_of(self, coords) -> ModVector:
        acc = zero_vector(self.big.moduli)
        for c, rep in zip(coords, self.reps):
            acc = acc + int(c) * rep
        return acc


# -- matrix-level twins of the ModVector API (used by the code engine on
# whole generator matrices; semantics identical, no per-vector wrapping) --


def basis_from_matrix(mat, moduli) -> GroupBasis:
    """Canonical basis of the row span of an integer matrix."""
    moduli = tuple(int(m) for m in moduli)
    M, s = _scale_factors(moduli)
    a = (np.asarray(mat, dtype=np.int64) % np.array(moduli, dtype=np.int64)) * s % M
    return GroupBasis(moduli, howell(a, M), M)


def matrix_of(basis: GroupBasis):
    """Generators of a basis as an unscaled int64 matrix (rows)."""
    if not basis.generators:
        return np.zeros((0, len(basis.moduli)), dtype=np.int64)
    return np.array([g.coords for g in basis.generators], dtype=np.int64)


def kernel_from_matrix(a, out_moduli, domain_moduli):
    """Kernel generators (matrix rows) of ``x -> (x @ a.T) mod out_moduli``.

    `a` has one row per output coordinate and one column per domain
    coordinate; returns an int64 matrix whose rows generate the kernel
    subgroup of ``prod Z_{domain_moduli}``.
    """
    a = np.asarray(a, dtype=np.int64)
    domain_moduli = tuple(int(m) for m in domain_moduli)
    out_moduli = tuple(int(m) for m in out_moduli)
    n = len(domain_moduli)
    k = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    M = lcm(*domain_moduli, *(out_moduli or (1,)))
    mat = np.zeros((n, k + n), dtype=np.int64)
    if k:
        scale = np.array([M // m for m in out_moduli], dtype=np.int64)
        mat[:, :k] = (a.T % np.array(out_moduli, dtype=np.int64)) * scale % M
    dscale = np.array([M // m for m in domain_moduli], dtype=np.int64)
    mat[:, k:] = np.diag(dscale)
    H = howell(mat, M)
    rows = [row[k:] // dscale for row in H if not row[:k].any()]
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    return np.stack(rows)


def express_in_matrix(mat, moduli, target):
    """Like :func:`express_in` for a matrix of row vectors; target is a row."""
    mat = np.asarray(mat, dtype=np.int64)
    moduli = tuple(int(m) for m in moduli)
    M, s = _scale_factors(moduli)
    a = (mat % np.array(moduli, dtype=np.int64)) * s % M
    H, T = howell_transform(a, M)
    t = (np.asarray(target, dtype=np.int64) % np.array(moduli, dtype=np.int64)) * s % M
    c = solve_upper(H, M, t)
    if c is None:
        return None
    return np.asarray((c @ T) % M, dtype=np.int64)


def enumerate_span(basis: GroupBasis, limit: int = 1 << 20):
    """All span elements (unique coefficients per Howell row); test helper."""
    if basis.order > limit:
        raise ValueError("span too large to enumerate")
    out = [zero_vector(basis.moduli)]
    for g, r in zip(basis.generators, basis.row_orders()):
        cur = list(out)
        out = []
        acc_mult = [k * g for k in range(r)]
        for v in cur:
            for m in acc_mult:
                out.append(v + m)
    return out
