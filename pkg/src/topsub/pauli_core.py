"""Generalized Pauli operators on mixed-dimension qudit systems.

An operator is kept in the normal form ``phase * prod_site X^x Z^z`` with the
X factor to the left of the Z factor on every site and exponents reduced into
``[0, d_site)``.  The global phase is a root of unity tracked as an integer
exponent modulo ``2 * lcm(dims)``, which is fine enough to express ``sqrt(w)``
on every site (needed for the Pauli Y of even-dimensional qudits).

Multiplication uses ``Z X = w X Z`` per site; all phase bookkeeping is exact
integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, lcm

from .ring_linalg import ModVector


class SystemMismatchError(ValueError):
    """Operators from different qudit systems cannot be combined."""


@dataclass(frozen=True)
class PhaseRoot:
    """The exact root of unity ``e^{2 pi i num / den}`` as a reduced fraction."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        n = self.num % self.den
        g = gcd(n, self.den)
        object.__setattr__(self, "num", n // g)
        object.__setattr__(self, "den", self.den // g)

    def __mul__(self, other: "PhaseRoot") -> "PhaseRoot":
        den = lcm(self.den, other.den)
        return PhaseRoot(self.num * (den // self.den)
                         + other.num * (den // other.den), den)

    def __pow__(self, k: int) -> "PhaseRoot":
        return PhaseRoot(self.num * k, self.den)

    def conjugate(self) -> "PhaseRoot":
        return PhaseRoot(-self.num, self.den)

    def is_one(self) -> bool:
        return self.num == 0

    def order(self) -> int:
        return self.den

    def exponent_mod(self, modulus: int) -> int:
        """This root as an exponent of ``e^{2 pi i / modulus}``."""
        if modulus % self.den:
            raise ValueError(f"{self} is not a {modulus}-th root of unity")
        return self.num * (modulus // self.den)

    def __repr__(self):
        if self.num == 0:
            return "1"
        if (self.num, self.den) == (1, 2):
            return "-1"
        if (self.num, self.den) == (1, 4):
            return "i"
        if (self.num, self.den) == (3, 4):
            return "-i"
        return f"e^(2*pi*i*{self.num}/{self.den})"


ONE = PhaseRoot(0, 1)
MINUS_ONE = PhaseRoot(1, 2)
I_PHASE = PhaseRoot(1, 4)


class QuditSystem:
    """An ordered collection of qudits with per-site dimensions."""

    def __init__(self, sites_with_dims):
        items = list(sites_with_dims)
        if len({s for s, _ in items}) != len(items):
            raise ValueError("duplicate site identifiers")
        for _, d in items:
            if d < 2:
                raise ValueError("qudit dimension must be at least 2")
        self.sites = tuple(s for s, _ in items)
        self.dim_of = {s: int(d) for s, d in items}
        self._index = {s: i for i, s in enumerate(self.sites)}
        dims = [d for _, d in items]
        self.lcm_dim = lcm(*dims) if dims else 1
        self.phase_modulus = 2 * self.lcm_dim
        # Interleaved (x, z) coordinate moduli for the symplectic image.
        self.symplectic_moduli = tuple(
            m for _, d in items for m in (d, d))

    def __eq__(self, other):
        return (isinstance(other, QuditSystem) and self.sites == other.sites
                and self.dim_of == other.dim_of)

    def __hash__(self):
        return hash((self.sites, tuple(sorted(
            (str(s), d) for s, d in self.dim_of.items()))))

    def index_of(self, site) -> int:
        return self._index[site]

    def identity(self) -> "PauliOperator":
        return PauliOperator(self, 0, {})

    def scalar(self, phase: PhaseRoot) -> "PauliOperator":
        return PauliOperator(self, phase.exponent_mod(self.phase_modulus), {})

    def x(self, site, k: int = 1) -> "PauliOperator":
        return PauliOperator(self, 0, {site: (k, 0)})

    def z(self, site, k: int = 1) -> "PauliOperator":
        return PauliOperator(self, 0, {site: (0, k)})

    def y(self, site) -> "PauliOperator":
        """``X^dagger Z^dagger`` with the extra sqrt(w) on even dimensions."""
        d = self.dim_of[site]
        pe = self.phase_modulus // (2 * d) if d % 2 == 0 else 0
        return PauliOperator(self, pe, {site: (-1, -1)})

    def from_vector(self, vec: ModVector, phase: PhaseRoot = ONE) -> "PauliOperator":
        if vec.moduli != self.symplectic_moduli:
            raise SystemMismatchError("vector does not match system profile")
        paulis = {}
        for i, s in enumerate(self.sites):
            x, z = vec.coords[2 * i], vec.coords[2 * i + 1]
            if x or z:
                paulis[s] = (x, z)
        return PauliOperator(self, phase.exponent_mod(self.phase_modulus), paulis)


class PauliOperator:
    """Normal-form generalized Pauli operator with an exact global phase."""

    __slots__ = ("system", "phase_exp", "paulis")

    def __init__(self, system: QuditSystem, phase_exp: int, paulis: dict):
        self.system = system
        self.phase_exp = phase_exp % system.phase_modulus
        clean = {}
        for s, (x, z) in paulis.items():
            d = system.dim_of[s]
            x, z = x % d, z % d
            if x or z:
                clean[s] = (x, z)
        self.paulis = clean

    @property
    def phase(self) -> PhaseRoot:
        return PhaseRoot(self.phase_exp, self.system.phase_modulus)

    @property
    def support(self):
        return frozenset(self.paulis)

    @property
    def weight(self) -> int:
        return len(self.paulis)

    def is_identity(self) -> bool:
        return not self.paulis and self.phase_exp == 0

    def scalar_part(self):
        """The PhaseRoot if the operator is a scalar, else None."""
        return self.phase if not self.paulis else None

    def __eq__(self, other):
        return (isinstance(other, PauliOperator) and self.system == other.system
                and self.phase_exp == other.phase_exp and self.paulis == other.paulis)

    def __hash__(self):
        return hash((self.phase_exp, tuple(sorted(
            (str(s), xz) for s, xz in self.paulis.items()))))

    def _check(self, other):
        if self.system != other.system:
            raise SystemMismatchError("operators live on different systems")

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        self._check(other)
        sysm = self.system
        pe = self.phase_exp + other.phase_exp
        out = dict(self.paulis)
        for s, (xq, zq) in other.paulis.items():
            d = sysm.dim_of[s]
            xp, zp = out.get(s, (0, 0))
            # Z^zp X^xq = w^{zp xq} X^xq Z^zp.
            pe += (sysm.phase_modulus // d) * (zp * xq)
            out[s] = (xp + xq, zp + zq)
        return PauliOperator(sysm, pe, out)

    def dagger(self) -> "PauliOperator":
        sysm = self.system
        pe = -self.phase_exp
        out = {}
        for s, (x, z) in self.paulis.items():
            d = sysm.dim_of[s]
            pe += (sysm.phase_modulus // d) * (x * z)
            out[s] = (-x, -z)
        return PauliOperator(sysm, pe, out)

    inverse = dagger

    def __pow__(self, k: int) -> "PauliOperator":
        if k < 0:
            return self.dagger() ** (-k)
        result = self.system.identity()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scaled(self, phase: PhaseRoot) -> "PauliOperator":
        return PauliOperator(
            self.system,
            self.phase_exp + phase.exponent_mod(self.system.phase_modulus),
            self.paulis)

    def commutator_phase(self, other: "PauliOperator") -> PhaseRoot:
        """Phase of ``P Q P^dagger Q^dagger``; bilinear and antisymmetric."""
        self._check(other)
        sysm = self.system
        num, den = 0, sysm.lcm_dim
        for s, (xp, zp) in self.paulis.items():
            if s in other.paulis:
                xq, zq = other.paulis[s]
                num += (den // sysm.dim_of[s]) * (zp * xq - xp * zq)
        return PhaseRoot(num, den)

    def operator_order(self) -> int:
        """Smallest k >= 1 with ``P^k`` equal to the identity, phase included."""
        k0 = 1
        for s, (x, z) in self.paulis.items():
            d = self.system.dim_of[s]
            k0 = lcm(k0, d // gcd(d, x, z))
        residual = (self ** k0).scalar_part()
        return k0 * residual.order()

    def to_vector(self) -> ModVector:
        sysm = self.system
        coords = []
        for s in sysm.sites:
            x, z = self.paulis.get(s, (0, 0))
            coords.extend((x, z))
        return ModVector(tuple(coords), sysm.symplectic_moduli)

    def translated(self, site_map) -> "PauliOperator":
        """Operator with every site s replaced by site_map(s); same exponents."""
        return PauliOperator(self.system, self.phase_exp,
                             {site_map(s): xz for s, xz in self.paulis.items()})

    def restricted_to(self, sites) -> "PauliOperator":
        """Truncation to a site subset; the phase is kept on the first factor."""
        keep = {s: xz for s, xz in self.paulis.items() if s in sites}
        return PauliOperator(self.system, self.phase_exp, keep)

    def render(self) -> str:
        """Exact, round-trippable text form, e.g. ``w^1_8 X3(0,1,eh) Z1(0,0,ev)``."""
        parts = []
        if self.phase_exp:
            parts.append(f"w^{self.phase_exp}_{self.system.phase_modulus}")
        for s in self.system.sites:
            if s in self.paulis:
                x, z = self.paulis[s]
                name = _site_str(s)
                if x:
                    parts.append(f"X{x}({name})")
                if z:
                    parts.append(f"Z{z}({name})")
        return " ".join(parts) if parts else "I"

    def __repr__(self):
        return f"Pauli[{self.render()}]"


def _site_str(site) -> str:
    if isinstance(site, tuple):
        return ",".join(str(p) for p in site)
    return str(site)


_TOKEN = re.compile(r"([XZ])(-?\d+)\(([^)]*)\)|w\^(-?\d+)_(\d+)|I")


def parse_operator(system: QuditSystem, text: str) -> PauliOperator:
    """Inverse of :meth:`PauliOperator.render`."""
    by_name = {_site_str(s): s for s in system.sites}
    pe = 0
    paulis = {}
    pos = 0
    for m in _TOKEN.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unparseable operator text: {text!r}")
        pos = m.end()
        if m.group(0) == "I":
            continue
        if m.group(4) is not None:
            num, den = int(m.group(4)), int(m.group(5))
            if system.phase_modulus % den:
                raise ValueError("phase root does not divide the system modulus")
            pe += num * (system.phase_modulus // den)
            continue
        kind, k, name = m.group(1), int(m.group(2)), m.group(3)
        site = by_name[name]
        x, z = paulis.get(site, (0, 0))
        paulis[site] = (x + k, z) if kind == "X" else (x, z + k)
    if text[pos:].strip():
        raise ValueError(f"unparseable operator text: {text!r}")
    return PauliOperator(system, pe, paulis)
