"""Subsystem-code analysis on a torus.

A :class:`TorusCode` is a lattice plus translation-invariant gauge templates
(and optional non-translation-invariant extra gauge operators).  The gauge
group is generated by every translate of every template, the extra operators,
and all roots of unity.  The analyzer computes, exactly:

* the gauge span (symplectic image of the gauge group, phases dropped),
* the stabilizer span: the center of the gauge group up to phases, i.e. the
  elements of the gauge span that commute with the whole gauge span,
* a consistent phase assignment for the stabilizer generators such that the
  generated operator group contains no nontrivial scalar,
* the subgroup of locally generated stabilizers for a given window,
* the bare logical span: everything commuting with the gauge group,
* the exact counting record dim(H)^2 = |S|^2 [G:S] [L:S].

Gauging out, gauge fixing, and cleaning of bare logicals / nonlocal
stabilizers round out the operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Optional, Sequence

import numpy as np

from . import ring_linalg as rl
from .lattice_model import GeneratorTemplate, Region, TorusLattice
from .pauli_core import PauliOperator, PhaseRoot
from .ring_linalg import GroupBasis, ModVector, QuotientStructure

DEFAULT_LOCAL_WINDOW = 3


class InvalidGaugeGroupError(Exception):
    """The generated group contains a forbidden scalar multiple of identity."""


class CleaningError(Exception):
    """An operator could not be cleaned off the requested region."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class TorusCode:
    lattice: TorusLattice
    gauge_templates: tuple
    extra_gauge: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gauge_templates", tuple(self.gauge_templates))
        object.__setattr__(self, "extra_gauge", tuple(self.extra_gauge))
        for t in self.gauge_templates:
            self.lattice.check_template(t)

    @property
    def is_translation_invariant(self) -> bool:
        return not self.extra_gauge

    def gauge_operators(self):
        """All instantiated gauge generators (deterministic order)."""
        ops = []
        for t in self.gauge_templates:
            ops.extend(self.lattice.all_translates(t))
        ops.extend(self.extra_gauge)
        return ops


@dataclass(frozen=True)
class CountingRecord:
    dim_H: int
    order_S: int
    index_G_over_S: int
    index_L_over_S: int
    identity_holds: bool


def _pairing_dual(mat, dims, Mc):
    """Row-wise symplectic dual: pairing(v, w) = (v @ dual(w)) mod Mc."""
    out = np.zeros_like(mat)
    scale = Mc // dims[0::2]  # one factor per site
    out[:, 0::2] = -mat[:, 1::2] * scale
    out[:, 1::2] = mat[:, 0::2] * scale
    return out % Mc


class CodeAnalysis:
    """All exact group data of a TorusCode; cached by :func:`analyze`."""

    def __init__(self, code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW):
        self.code = code
        self.window = window
        lat = code.lattice
        self.system = lat.system
        self.moduli = self.system.symplectic_moduli
        n = len(self.moduli)
        self._dims = np.array(self.moduli, dtype=np.int64)
        self.Mc = lat.system.lcm_dim
        self.degenerate = min(lat.Lx, lat.Ly) < 3

        ops = code.gauge_operators()
        if ops:
            gmat = np.array([op.to_vector().coords for op in ops], dtype=np.int64)
        else:
            gmat = np.zeros((0, n), dtype=np.int64)
        self.gauge = rl.basis_from_matrix(gmat, self.moduli)
        self._gauge_mat = rl.matrix_of(self.gauge)

        # Bare logical span: kernel of the pairing against the gauge span.
        dual = _pairing_dual(self._gauge_mat, self._dims, self.Mc)
        lker = rl.kernel_from_matrix(dual, (self.Mc,) * dual.shape[0], self.moduli)
        self.bare_logical = rl.basis_from_matrix(lker, self.moduli)

        # Stabilizer span: center of the gauge span.
        self.stabilizer = rl.span_intersection(self.gauge, self.bare_logical)
        self.stabilizer_phases = self._solve_stabilizer_phases()
        self.local_stabilizer = self._local_stabilizer_span(window)
        self.counting = self._counting()

    # -- phases -----------------------------------------------------------

    def op_from_vector(self, vec, phase=PhaseRoot(0, 1)) -> PauliOperator:
        if isinstance(vec, ModVector):
            return self.system.from_vector(vec, phase)
        return self.system.from_vector(
            ModVector(tuple(int(x) for x in vec), self.moduli), phase)

    def _solve_stabilizer_phases(self):
        """Phases making the stabilizer group scalar-free; canonical solution.

        Each relation among the (commuting) zero-phase representatives forces
        the product of assigned phases to cancel the scalar produced by the
        representatives.  The relation lattice is solved exactly; failure
        means no stabilizer group is consistent with the gauge group.
        """
        gens = list(self.stabilizer.generators)
        r = len(gens)
        if r == 0:
            return ()
        M = self.Mc
        smat = rl.matrix_of(self.stabilizer)
        # Relations: kernel of c -> sum c_j s_j over c in (Z_M)^r.
        relmat = rl.kernel_from_matrix(smat.T, self.moduli, (M,) * r)
        reps = [self.op_from_vector(g) for g in gens]
        pm = self.system.phase_modulus
        rhs = []
        for crow in relmat:
            acc = self.system.identity()
            for cj, rep in zip(crow, reps):
                if cj:
                    acc = acc * rep ** int(cj)
            scalar = acc.scalar_part()
            if scalar is None:
                raise AssertionError("relation did not produce a scalar")
            rhs.append(-scalar.exponent_mod(pm))
        if not rhs:
            return tuple(PhaseRoot(0, 1) for _ in gens)
        cols = [
            ModVector(tuple(int(c) for c in relmat[:, j]), (pm,) * len(rhs))
            for j in range(r)
        ]
        sol = rl.solve_linear(cols, ModVector(tuple(rhs), (pm,) * len(rhs)))
        if sol is None:
            raise InvalidGaugeGroupError(
                "no phase assignment avoids a nontrivial scalar in the "
                "stabilizer group")
        return tuple(PhaseRoot(int(p), pm) for p in sol)

    def stabilizer_operators(self):
        return [self.op_from_vector(g, ph) for g, ph
                in zip(self.stabilizer.generators, self.stabilizer_phases)]

    # -- local stabilizers --------------------------------------------------

    def _coords_in_box(self, x0, y0, w):
        lat = self.code.lattice
        idx = []
        for dy in range(w):
            for dx in range(w):
                x, y = lat.wrap(x0 + dx, y0 + dy)
                for name, _ in lat.cell_slots:
                    i = self.system.index_of((x, y, name))
                    idx.extend((2 * i, 2 * i + 1))
        return np.array(sorted(set(idx)), dtype=np.int64)

    def _span_supported_on(self, basis: GroupBasis, coord_idx):
        """Subspan of `basis` with support inside the given coordinate set."""
        mat = rl.matrix_of(basis)
        if mat.shape[0] == 0:
            return mat
        outside = np.setdiff1d(np.arange(mat.shape[1]), coord_idx)
        rows = mat[:, outside].T  # one output row per outside coordinate
        out_moduli = tuple(int(self._dims[i]) for i in outside)
        dom = tuple(g.order() for g in basis.generators)
        ker = rl.kernel_from_matrix(rows, out_moduli, dom)
        return (ker @ mat) % self._dims

    def _local_stabilizer_span(self, window: int) -> GroupBasis:
        lat = self.code.lattice
        w = min(window, lat.Lx, lat.Ly)
        base = self._span_supported_on(self.stabilizer, self._coords_in_box(0, 0, w))
        rows = []
        if self.code.is_translation_invariant:
            perms = _translation_perms(lat)
            for vec in base:
                for p in perms:
                    rows.append(vec[p])
        else:
            for (x, y) in lat.cells():
                block = self._span_supported_on(
                    self.stabilizer, self._coords_in_box(x, y, w))
                rows.extend(block)
        if not rows:
            return rl.basis_from_matrix(
                np.zeros((0, len(self.moduli)), dtype=np.int64), self.moduli)
        return rl.basis_from_matrix(np.stack(rows), self.moduli)

    # -- counting -----------------------------------------------------------

    def _counting(self) -> CountingRecord:
        dim_H = 1
        for s in self.system.sites:
            dim_H *= self.system.dim_of[s]
        order_S = self.stabilizer.order
        ig = rl.quotient_order(self.gauge, self.stabilizer)
        il = rl.quotient_order(self.bare_logical, self.stabilizer)
        holds = dim_H * dim_H == order_S * order_S * ig * il
        return CountingRecord(dim_H, order_S, ig, il, holds)

    # -- quotients ------------------------------------------------------------

    def nonlocal_stabilizer_structure(self):
        """Cyclic orders of S / S_local (empty when all stabilizers are local)."""
        return QuotientStructure(self.stabilizer, self.local_stabilizer).orders

    def pairing_exponent(self, v: ModVector, w: ModVector) -> int:
        a = np.array(v.coords, dtype=np.int64)
        b = np.array(w.coords, dtype=np.int64)
        dual = _pairing_dual(b[None, :], self._dims, self.Mc)[0]
        return int((a @ dual) % self.Mc)

    def commutes_with_gauge(self, op: PauliOperator) -> bool:
        v = np.array(op.to_vector().coords, dtype=np.int64)
        dual = _pairing_dual(self._gauge_mat, self._dims, self.Mc)
        return not ((dual @ v) % self.Mc).any()


def _translation_perms(lat: TorusLattice):
    """Coordinate permutations realizing all torus translations."""
    n = len(lat.system.sites)
    perms = []
    for dy in range(lat.Ly):
        for dx in range(lat.Lx):
            p = np.zeros(2 * n, dtype=np.int64)
            for i, (x, y, slot) in enumerate(lat.system.sites):
                j = lat.system.index_of((*lat.wrap(x + dx, y + dy), slot))
                p[2 * j] = 2 * i
                p[2 * j + 1] = 2 * i + 1
            perms.append(p)
    return perms


_ANALYSIS_CACHE: dict = {}


def analyze(code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW) -> CodeAnalysis:
    key = (id(code), window)
    got = _ANALYSIS_CACHE.get(key)
    if got is None or got.code is not code:
        got = CodeAnalysis(code, window)
        _ANALYSIS_CACHE[key] = got
    return got


def stabilizer_group(code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW):
    """Stabilizer span and its scalar-free phase assignment."""
    a = analyze(code, window)
    return a.stabilizer, a.stabilizer_phases


def local_stabilizer_group(code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW):
    return analyze(code, window).local_stabilizer


def bare_logical_group(code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW):
    return analyze(code, window).bare_logical


def counting_report(code: TorusCode, window: int = DEFAULT_LOCAL_WINDOW):
    return analyze(code, window).counting


def gauge_out(code: TorusCode, extra_templates: Sequence[GeneratorTemplate],
              name: Optional[str] = None) -> TorusCode:
    """Enlarge the gauge group by all translates of the given templates."""
    return TorusCode(
        code.lattice,
        code.gauge_templates + tuple(extra_templates),
        code.extra_gauge,
        name if name is not None else f"{code.name}+gauged_out")


def gauge_fix(code: TorusCode, fixed: Sequence[PauliOperator],
              name: Optional[str] = None) -> TorusCode:
    """Replace the gauge group by the centralizer of `fixed` inside it.

    `fixed` must be mutually commuting members of the gauge group; it joins
    the stabilizer group of the result.
    """
    a = analyze(code)
    ops = list(fixed)
    for i, f in enumerate(ops):
        if not a.gauge.contains(f.to_vector()):
            raise PreconditionError(f"operator {i} is not in the gauge group")
        for g in ops[i + 1:]:
            if not f.commutator_phase(g).is_one():
                raise PreconditionError("gauge-fixed set must be Abelian")
    gmat = a._gauge_mat
    if gmat.shape[0] == 0 or not ops:
        return code
    fmat = np.array([f.to_vector().coords for f in ops], dtype=np.int64)
    dual = _pairing_dual(fmat, a._dims, a.Mc)
    rows = (gmat @ dual.T) % a.Mc  # pairing of each gauge gen with each f
    dom = tuple(g.order() for g in a.gauge.generators)
    ker = rl.kernel_from_matrix(rows.T, (a.Mc,) * len(ops), dom)
    cent = (ker @ gmat) % a._dims
    cb = rl.basis_from_matrix(cent, a.moduli)
    extra = tuple(a.op_from_vector(g) for g in cb.generators)
    return TorusCode(code.lattice, (), extra,
                     name if name is not None else f"{code.name}+gauge_fixed")


def clean_operator(code: TorusCode, op: PauliOperator, region: Region,
                   window: int = DEFAULT_LOCAL_WINDOW) -> PauliOperator:
    """Multiply `op` by local stabilizers so its support avoids `region`.

    `op` must commute with every gauge generator (a bare logical operator or
    a stabilizer); the region must leave room for a strip of width `window`.
    """
    a = analyze(code, window)
    if not a.commutes_with_gauge(op):
        raise PreconditionError("operator does not commute with the gauge group")
    lat = code.lattice
    if region.cells != frozenset(lat.cells()) and not (
            _has_clear_band(region, lat.Lx, window, axis=0)
            and _has_clear_band(region, lat.Ly, window, axis=1)):
        # The cleaning argument needs a meridian and an equator strip of
        # width `window` that avoid the region.  Cleaning off the whole torus
        # (membership in the local stabilizer span) is still allowed.
        raise PreconditionError("region too large for cleaning")
    region_sites = region.sites()
    region_idx = sorted(
        j for s in region_sites
        for j in (2 * a.system.index_of(s), 2 * a.system.index_of(s) + 1))
    if not region_idx:
        return op
    v = np.array(op.to_vector().coords, dtype=np.int64)
    smat = rl.matrix_of(a.local_stabilizer)
    if smat.shape[0] == 0:
        if v[region_idx].any():
            raise CleaningError("no local stabilizers available for cleaning")
        return op
    target = v[region_idx]
    trunc = smat[:, region_idx]
    sub_moduli = tuple(int(a._dims[i]) for i in region_idx)
    coeffs = rl.express_in_matrix(trunc, sub_moduli, target)
    if coeffs is None:
        raise CleaningError(
            "operator cannot be cleaned off the region with the current window")
    out = op
    for c, g in zip(coeffs, a.local_stabilizer.generators):
        c = int(c)
        if c:
            out = out * a.op_from_vector(g) ** (-c)
    if any(s in region_sites for s in out.support):
        raise AssertionError("cleaning left support on the region")
    return out


def _has_clear_band(region: Region, period: int, width: int, axis: int) -> bool:
    occupied = {c[axis] for c in region.cells}
    for start in range(period):
        if all((start + d) % period not in occupied for d in range(width)):
            return True
    return False
