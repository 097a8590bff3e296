"""Abstract Abelian anyon theories: fusion group, statistics, braiding.

A theory is the data ``(prod_i Z_{N_i}, {t_i}, {p_ij})``: prime-power cyclic
orders, generator statistics ``theta(a_i) = e^{2 pi i t_i / N_i}`` stored as
the integers ``u_i = 2 t_i`` (half-integer t is allowed exactly when N_i is
even), and symmetric braiding exponents ``B(a_i, a_j) = e^{2 pi i p_ij / N_ij}``
with ``N_ij = gcd(N_i, N_j)`` and ``p_ii = floor(t_i)``.

Statistics extend to arbitrary elements through the full-braid identity
``B(a, b) = theta(ab) / theta(a) theta(b)``; the chiral central charge of a
modular theory is evaluated mod 8 from the Gauss sum with exact cyclotomic
arithmetic.  The twisted-quantum-double embedding realizes the theory inside
a stack of charge-flux layers and produces the generators to keep and the
generators to gauge out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Sequence

import itertools

from .pauli_core import PhaseRoot
from .ring_linalg import ModVector, canonical_basis, kernel


class InvalidTheoryError(ValueError):
    pass


class ModularityError(ValueError):
    """Raised when a chiral central charge is requested for a non-modular theory."""


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if p * p > n:
            return n > 1  # n itself is prime
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


@dataclass(frozen=True)
class AnyonTheoryData:
    """Defining data of an Abelian anyon theory."""

    orders: tuple
    two_t: tuple
    p: tuple

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        object.__setattr__(self, "orders", orders)
        for n in orders:
            if not _is_prime_power(n):
                raise InvalidTheoryError(
                    f"cyclic order {n} is not a prime power; split composite "
                    "factors into separate prime-power generators")
        m = len(orders)
        u = tuple(int(x) % (2 * n) for x, n in zip(self.two_t, orders))
        if len(u) != m:
            raise InvalidTheoryError("two_t length does not match orders")
        for n, ui in zip(orders, u):
            if n % 2 and ui % 2:
                raise InvalidTheoryError(
                    "half-integer statistics parameter requires an "
                    "even-order generator")
        object.__setattr__(self, "two_t", u)
        pm = tuple(tuple(int(x) for x in row) for row in self.p)
        if len(pm) != m or any(len(r) != m for r in pm):
            raise InvalidTheoryError("p must be an MxM matrix")
        norm = []
        for i in range(m):
            row = []
            for j in range(m):
                nij = gcd(orders[i], orders[j])
                if (pm[i][j] - pm[j][i]) % nij:
                    raise InvalidTheoryError("p matrix must be symmetric")
                row.append(pm[i][j] % nij)
            norm.append(tuple(row))
        for i in range(m):
            if norm[i][i] != (u[i] // 2) % orders[i]:
                raise InvalidTheoryError(
                    "diagonal p entries must equal floor(t_i) mod N_i")
        object.__setattr__(self, "p", tuple(norm))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def group_order(self) -> int:
        return prod(self.orders)

    def element(self, exponents) -> ModVector:
        return ModVector(tuple(exponents), self.orders)

    def elements(self):
        for exps in itertools.product(*[range(n) for n in self.orders]):
            yield ModVector(exps, self.orders)


def statistics_of(data: AnyonTheoryData, a) -> PhaseRoot:
    """Exchange statistics of an arbitrary element, via the braid identity."""
    m = _coords(data, a)
    theta = PhaseRoot(0, 1)
    for i, (ui, ni) in enumerate(zip(data.two_t, data.orders)):
        theta = theta * PhaseRoot(ui * m[i] * m[i], 2 * ni)
    for i in range(data.rank):
        for j in range(i + 1, data.rank):
            nij = gcd(data.orders[i], data.orders[j])
            theta = theta * PhaseRoot(data.p[i][j] * m[i] * m[j], nij)
    return theta


def braiding_of(data: AnyonTheoryData, a, b) -> PhaseRoot:
    """Full-braid phase ``theta(ab) / (theta(a) theta(b))``."""
    ma, mb = _coords(data, a), _coords(data, b)
    ab = tuple(x + y for x, y in zip(ma, mb))
    return (statistics_of(data, ab)
            * statistics_of(data, ma).conjugate()
            * statistics_of(data, mb).conjugate())


def _coords(data, a):
    if isinstance(a, ModVector):
        if a.moduli != data.orders:
            raise InvalidTheoryError("element does not belong to this theory")
        return a.coords
    return tuple(int(x) % n for x, n in zip(a, data.orders))


def transparent_subgroup(data: AnyonTheoryData):
    """Elements braiding trivially with everything (radical of the form)."""
    D = lcm(*data.orders, *(2 * n for n in data.orders))
    rows = []
    for j in range(data.rank):
        gen = tuple(1 if k == j else 0 for k in range(data.rank))
        coeffs = []
        for i in range(data.rank):
            unit = tuple(1 if k == i else 0 for k in range(data.rank))
            b = braiding_of(data, unit, gen)
            coeffs.append(b.exponent_mod(D))
        rows.append(ModVector(tuple(coeffs), (D,) * data.rank))
    ker = kernel(rows, data.orders)
    seen = set()
    out = []
    for coeffs in itertools.product(*[range(r) for r in ker.row_orders()]):
        acc = ModVector((0,) * data.rank, data.orders)
        for c, g in zip(coeffs, ker.generators):
            acc = acc + c * g
        if acc.coords not in seen:
            seen.add(acc.coords)
            out.append(acc)
    return sorted(out, key=lambda v: v.coords)


def is_modular(data: AnyonTheoryData) -> bool:
    return len(transparent_subgroup(data)) == 1


def is_lagrangian(data: AnyonTheoryData, subset) -> bool:
    """The three Lagrangian-subgroup properties, checked by enumeration."""
    elems = {tuple(_coords(data, s)) for s in subset}
    zero = (0,) * data.rank
    if zero not in elems:
        elems = elems | {zero}
    # (i) closed under fusion.
    for a in list(elems):
        for b in list(elems):
            ab = tuple((x + y) % n for x, y, n in zip(a, b, data.orders))
            if ab not in elems:
                return False
    # (ii) bosons with trivial mutual braiding.
    for a in elems:
        if not statistics_of(data, a).is_one():
            return False
        for b in elems:
            if not braiding_of(data, a, b).is_one():
                return False
    # (iii) everything outside braids nontrivially with some member.
    for out in data.elements():
        if out.coords in elems:
            continue
        if all(braiding_of(data, out, c).is_one() for c in elems):
            return False
    return True


# -- exact cyclotomic arithmetic for the Gauss sum ---------------------------


class _Cyclotomic:
    """Elements of Z[zeta_K] as integer coefficient lists over zeta^0..zeta^{K-1}."""

    def __init__(self, K, coeffs=None):
        self.K = K
        self.c = [0] * K if coeffs is None else list(coeffs)

    @staticmethod
    def root(K, num, den):
        z = _Cyclotomic(K)
        z.c[(num * (K // den)) % K] = 1
        return z

    def __add__(self, other):
        return _Cyclotomic(self.K, [a + b for a, b in zip(self.c, other.c)])

    def __mul__(self, other):
        if isinstance(other, int):
            return _Cyclotomic(self.K, [a * other for a in self.c])
        out = [0] * self.K
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                if b:
                    out[(i + j) % self.K] += a * b
        return _Cyclotomic(self.K, out)

    def equals(self, other) -> bool:
        diff = [a - b for a, b in zip(self.c, other.c)]
        return _poly_divisible_by_cyclotomic(diff, self.K)


def _cyclotomic_poly(n: int):
    """Coefficients (ascending) of the n-th cyclotomic polynomial over Z."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            phi_d = _cyclotomic_poly(d)
            poly = _poly_exact_div(poly, phi_d)
    return poly


def _poly_exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        coef = num[k + len(den) - 1] // den[-1]
        out[k] = coef
        for i, d in enumerate(den):
            num[k + i] -= coef * d
    assert all(x == 0 for x in num), "non-exact polynomial division"
    return out


def _poly_divisible_by_cyclotomic(coeffs, K) -> bool:
    phi = _cyclotomic_poly(K)
    rem = list(coeffs)
    for k in range(len(rem) - len(phi), -1, -1):
        q, r = divmod(rem[k + len(phi) - 1], phi[-1])
        if r:
            return False
        for i, d in enumerate(phi):
            rem[k + i] -= q * d
    return all(x == 0 for x in rem)


def _sqrt_cyclotomic(n: int, K: int) -> _Cyclotomic:
    """sqrt(n) as an element of Z[zeta_K] (K must contain the needed roots)."""
    out = _Cyclotomic(K)
    out.c[0] = 1
    for p in _prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out = out * (p ** (e // 2))
        if e % 2:
            if p == 2:
                rt = _Cyclotomic.root(K, 1, 8) + _Cyclotomic.root(K, -1, 8)
            else:
                g = _Cyclotomic(K)
                for x in range(p):
                    g = g + _Cyclotomic.root(K, x * x, p)
                if p % 4 == 1:
                    rt = g
                else:
                    rt = g * _Cyclotomic.root(K, -1, 4)  # -i * (i sqrt p)
            out = out * rt
    return out


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def central_charge_mod8(data: AnyonTheoryData) -> Fraction:
    """Chiral central charge c mod 8 from the Gauss sum, exactly.

    Requires a modular theory; compares the exact cyclotomic Gauss sum
    against ``sqrt(|A|) e^{2 pi i c / 8}`` for the sixteen half-integer
    candidates.
    """
    if not is_modular(data):
        raise ModularityError("central charge needs a modular theory")
    dens = [2 * n for n in data.orders]
    K = lcm(16, *dens)
    for p in _prime_factors(data.group_order):
        if p == 2:
            K = lcm(K, 8)
        else:
            K = lcm(K, 4 * p)
    total = _Cyclotomic(K)
    for a in data.elements():
        th = statistics_of(data, a)
        total = total + _Cyclotomic.root(K, th.num, th.den)
    root_a = _sqrt_cyclotomic(data.group_order, K)
    for k in range(16):
        cand = root_a * _Cyclotomic.root(K, k, 16)
        if total.equals(cand):
            return Fraction(k, 2)
    raise AssertionError("Gauss sum did not land on an eighth root of unity")


# -- twisted quantum double embedding ----------------------------------------


@dataclass(frozen=True)
class TqdEmbedding:
    """The theory realized inside a stack of charge-flux layers.

    Layer i carries a charge ``c_i`` and flux ``phi_i`` of order ``N_i`` with
    ``theta(phi_i) = e^{2 pi i n_i / N_i^2}`` and Aharonov-Bohm braiding
    ``B(phi_i, c_i) = e^{2 pi i / N_i}``.  Coordinates below are exponent
    vectors over ``(c_1, phi_1, c_2, phi_2, ...)``.
    """

    data: AnyonTheoryData
    n: tuple
    tqd_data: AnyonTheoryData
    kept: tuple        # a_i, the generators realizing the input theory
    gauged_out: tuple  # abar_i, the generators to gauge out

    def charge(self, i) -> tuple:
        v = [0] * (2 * self.data.rank)
        v[2 * i] = 1
        return tuple(v)

    def flux(self, i) -> tuple:
        v = [0] * (2 * self.data.rank)
        v[2 * i + 1] = 1
        return tuple(v)

    def flux_bar(self, i) -> tuple:
        v = [0] * (2 * self.data.rank)
        v[2 * i + 1] = -1 % self.data.orders[i]
        v[2 * i] = (2 * self.n[i] // self.data.orders[i]) % self.data.orders[i]
        return tuple(v)


def tqd_embedding(data: AnyonTheoryData) -> TqdEmbedding:
    orders = data.orders
    m = data.rank
    n = tuple((ni // 2) * (ui % 2) for ni, ui in zip(orders, data.two_t))
    tqd_orders = tuple(x for ni in orders for x in (ni, ni))
    tqd_u = tuple(x for ni, nn in zip(orders, n)
                  for x in (0, (2 * nn // ni) % (2 * ni)))
    pmat = [[0] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        pmat[2 * i][2 * i + 1] = 1
        pmat[2 * i + 1][2 * i] = 1
    tqd = AnyonTheoryData(tqd_orders, tqd_u, tuple(tuple(r) for r in pmat))

    kept, gauged = [], []
    for i in range(m):
        a = [0] * (2 * m)
        a[2 * i + 1] += 1
        for j in range(i + 1):
            nij = gcd(orders[i], orders[j])
            a[2 * j] += data.p[j][i] * orders[j] // nij
        kept.append(tuple(x % o for x, o in zip(a, tqd_orders)))
        ab = [0] * (2 * m)
        ab[2 * i + 1] -= 1
        ab[2 * i] += 2 * n[i] // orders[i]
        for j in range(i, m):
            nij = gcd(orders[i], orders[j])
            ab[2 * j] += data.p[i][j] * orders[j] // nij
        gauged.append(tuple(x % o for x, o in zip(ab, tqd_orders)))

    emb = TqdEmbedding(data, n, tqd, tuple(kept), tuple(gauged))
    _verify_embedding(emb)
    return emb


def _verify_embedding(emb: TqdEmbedding):
    """The kept generators reproduce the input data; abar braids trivially."""
    data, tqd = emb.data, emb.tqd_data
    for i, a in enumerate(emb.kept):
        th = statistics_of(tqd, a)
        want = PhaseRoot(data.two_t[i], 2 * data.orders[i])
        if th != want:
            raise AssertionError("embedding generator statistics mismatch")
        for j in range(i + 1, data.rank):
            nij = gcd(data.orders[i], data.orders[j])
            b = braiding_of(tqd, a, emb.kept[j])
            if b != PhaseRoot(data.p[i][j], nij):
                raise AssertionError("embedding generator braiding mismatch")
    for a in emb.kept:
        for ab in emb.gauged_out:
            if not braiding_of(tqd, a, ab).is_one():
                raise AssertionError("kept and gauged-out generators must "
                                     "braid trivially")


def theory_to_json_dict(data: AnyonTheoryData) -> dict:
    return {"orders": list(data.orders), "two_t": list(data.two_t),
            "p": [list(r) for r in data.p]}


def theory_from_json_dict(doc: dict) -> AnyonTheoryData:
    return AnyonTheoryData(tuple(doc["orders"]), tuple(doc["two_t"]),
                           tuple(tuple(r) for r in doc["p"]))
