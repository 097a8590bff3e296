"""Anyon extraction from a concrete torus code.

Anyon classes are the nonlocal bare-logical classes: the quotient of the
strings supported on a canonical horizontal strip by the locally generated
stabilizers.  Statistics come from the three-arm junction relation
``W1 W2^dag W3 = theta W3 W2^dag W1`` evaluated exactly; braiding from the
single crossing of a horizontal and a vertical closed string.  Every phase is
an exact root of unity.

Conventions: the horizontal cycle (gamma) lives on the rows ``y in [0, w)``,
the vertical cycle (gamma') on the columns ``x in [0, w)``, crossing at the
origin cell.  Junction arms are axis aligned and meet in a disk at the
origin; arm dressings are solved as linear systems over the ring so that all
three arms show the exact same commutation pattern with the gauge generators
supported inside the junction disk.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import ring_linalg as rl
from .code_engine import CodeAnalysis, TorusCode, analyze
from .lattice_model import Region
from .pauli_core import PauliOperator, PhaseRoot
from .ring_linalg import ModVector, QuotientStructure


class ExtractionError(Exception):
    pass


class TorusTooSmallError(ExtractionError):
    def __init__(self, minimum, message=""):
        self.minimum = minimum
        super().__init__(message or f"torus too small; need at least {minimum}")


@dataclass
class StringOperator:
    op: PauliOperator
    path: str
    label: tuple


@dataclass
class ExtractedAnyon:
    label: tuple
    order: int
    theta: PhaseRoot
    detectable: bool
    transparent: bool
    representative: StringOperator


class AnyonLab:
    """Extraction state for one analyzed code (cached per code and window)."""

    def __init__(self, code: TorusCode, window: Optional[int] = None):
        self.analysis = analyze(code) if window is None else analyze(code, window)
        a = self.analysis
        lat = code.lattice
        self.code = code
        self.Mc = a.Mc
        if min(lat.Lx, lat.Ly) < 4:
            raise TorusTooSmallError(4, "anyon extraction needs at least a 4x4 torus")

        self.strip_width = self._pick_strip_width()
        w = self.strip_width
        self.gamma = self._strip_quotient(self._strip_coords(axis=0, width=w))
        self.gamma_prime = self._strip_quotient(self._strip_coords(axis=1, width=w))
        full = QuotientStructure(a.bare_logical, a.local_stabilizer)
        if self.gamma.order * self.gamma_prime.order != full.order:
            raise TorusTooSmallError(
                2 * w + 2,
                "strip classes do not factor the nonlocal classes; "
                "the torus is too small for this window")
        self._gauge_ops = self._instantiated_gauge()
        self._vertical_match_cache = {}
        self._theta_cache = {}

    # -- geometry -----------------------------------------------------------

    def _pick_strip_width(self) -> int:
        """Smallest strip width whose classes factor the nonlocal quotient."""
        a = self.analysis
        lat = self.code.lattice
        full = QuotientStructure(a.bare_logical, a.local_stabilizer)
        limit = min(a.window, lat.Lx - 2, lat.Ly - 2)
        for w in range(1, max(limit, 1) + 1):
            g = self._strip_quotient(self._strip_coords(axis=0, width=w))
            gp = self._strip_quotient(self._strip_coords(axis=1, width=w))
            if g.order * gp.order == full.order:
                return w
        return max(limit, 1)

    def _strip_coords(self, axis: int, width: int):
        lat = self.code.lattice
        if axis == 0:
            cells = [(x, y) for x in range(lat.Lx) for y in range(width)]
        else:
            cells = [(x, y) for x in range(width) for y in range(lat.Ly)]
        idx = []
        for (x, y) in cells:
            for name, _ in lat.cell_slots:
                i = self.analysis.system.index_of((x % lat.Lx, y % lat.Ly, name))
                idx.extend((2 * i, 2 * i + 1))
        return np.array(sorted(set(idx)), dtype=np.int64)

    def _strip_quotient(self, coord_idx) -> QuotientStructure:
        a = self.analysis
        strip_mat = a._span_supported_on(a.bare_logical, coord_idx)
        strip = rl.basis_from_matrix(strip_mat, a.moduli)
        trivial = rl.span_intersection(strip, a.local_stabilizer)
        return QuotientStructure(strip, trivial)

    def _instantiated_gauge(self):
        """(operator, base cell) for every gauge generator instance."""
        lat = self.code.lattice
        out = []
        for t in self.code.gauge_templates:
            for cell in lat.cells():
                out.append((lat.instantiate(t, cell), cell))
        for op in self.code.extra_gauge:
            cells = sorted({(s[0], s[1]) for s in op.support})
            out.append((op, cells[0] if cells else (0, 0)))
        return out

    def _cells_within(self, center, radius):
        lat = self.code.lattice
        cx, cy = center
        return {
            lat.wrap(cx + dx, cy + dy)
            for dx in range(-radius, radius + 1)
            for dy in range(-radius, radius + 1)
        }

    def _gens_inside(self, cells):
        return [op for op, _ in self._gauge_ops
                if op.support and {(s[0], s[1]) for s in op.support} <= cells]

    def _disk_coord_idx(self, cells):
        a = self.analysis
        idx = []
        for (x, y) in cells:
            for name, _ in self.code.lattice.cell_slots:
                i = a.system.index_of((x, y, name))
                idx.extend((2 * i, 2 * i + 1))
        return np.array(sorted(set(idx)), dtype=np.int64)

    # -- patterns and dressings ----------------------------------------------

    def _pattern(self, op: PauliOperator, gens):
        return tuple(
            g.commutator_phase(op).exponent_mod(self.Mc) for g in gens)

    def _solve_dressing(self, disk_idx, gens, target, randomize=None):
        """Local Pauli D on the disk with ``Phi_g(D) = target_g``; None if none.

        `target` is a tuple of phase exponents mod Mc, one per generator.
        """
        target = tuple(-t for t in target)  # solve via Phi_D(g) = -Phi_g(D)
        a = self.analysis
        if not gens:
            return a.system.identity()
        gmat = np.array([g.to_vector().coords for g in gens], dtype=np.int64)
        from .code_engine import _pairing_dual

        dual = _pairing_dual(gmat, a._dims, self.Mc)  # Phi_D(g) = D . dual(g)
        rows = dual[:, disk_idx].T  # row per disk coordinate
        nm = (self.Mc,) * len(gens)
        coeffs = rl.express_in_matrix(rows, nm, np.array(target, dtype=np.int64))
        if coeffs is None:
            return None
        vec = np.zeros(len(a.moduli), dtype=np.int64)
        vec[disk_idx] = coeffs % a._dims[disk_idx]
        if randomize is not None:
            ker = rl.kernel_from_matrix(
                rows.T, nm, tuple(int(m) for m in a._dims[disk_idx]))
            if ker.shape[0]:
                pick = randomize.randrange(ker.shape[0])
                mult = randomize.randrange(1, self.Mc + 1)
                vec[disk_idx] = (vec[disk_idx] + mult * ker[pick]) % a._dims[disk_idx]
        return a.op_from_vector(vec)

    # -- class representatives ------------------------------------------------

    def horizontal_rep(self, label) -> PauliOperator:
        return self.analysis.op_from_vector(self.gamma.rep_of(label))

    def vertical_rep(self, vlabel) -> PauliOperator:
        return self.analysis.op_from_vector(self.gamma_prime.rep_of(vlabel))

    def labels(self):
        """All fusion-group labels in deterministic order."""
        return list(itertools.product(*[range(o) for o in self.gamma.orders]))

    def fusion_orders(self):
        return self.gamma.orders

    def class_order(self, label) -> int:
        out = 1
        for c, o in zip(label, self.gamma.orders):
            if c:
                from math import gcd, lcm

                out = lcm(out, o // gcd(o, c))
        return out

    # -- junction ---------------------------------------------------------------

    def _junction_geometry(self):
        """Arm column/row windows, checked generators, dressing coordinates.

        The three arms enter a junction at the origin: from the right along
        the horizontal strip, from the left, and from below along the
        vertical strip (counterclockwise order right, left, below).  The
        checked generators sit fully inside the junction disk and away from
        every arm's far cut, so their commutation pattern sees only the
        junction endpoint; dressings live on the (w+1)x(w+1) corner block,
        too small to transport an anyon between arm ends.
        """
        lat = self.code.lattice
        w = self.strip_width
        xa = lat.Lx // 3
        right_cols = frozenset(range(0, xa + 1))
        left_cols = frozenset(range(xa + 2, lat.Lx))
        # Vertical arm entering the junction from below (rows yb..Ly-1); the
        # counterclockwise triple (right, left, below) fixes the orientation
        # frame and with it the sign of theta, verified by the charge-flux
        # composite of a toric-code layer having statistics e^{+2 pi i / N}.
        yb = lat.Ly // 2
        low_rows = frozenset(range(yb, lat.Ly))
        strip_rows = set(range(w))
        strip_cols = set(range(w))
        # Dressing block: the (w+1)x(w+1) cells meeting at the origin corner.
        dress_cells = {lat.wrap(dx, dy)
                       for dx in range(-1, w) for dy in range(-1, w)}
        # Generators with support on both sides of an arm's far cut see the
        # far endpoint and are excluded; the rest touching the dressing block
        # watch only the junction endpoint plus anything a dressing could
        # hide inside the block.
        cuts = [
            (0, lat.wrap(xa, 0)[0], lat.wrap(xa + 1, 0)[0]),
            (0, lat.wrap(xa + 1, 0)[0], lat.wrap(xa + 2, 0)[0]),
            (1, lat.wrap(0, yb - 1)[1], lat.wrap(0, yb)[1]),
        ]  # far cuts of the right, left, and below arm respectively

        def straddles(cells):
            for axis, lo, hi in cuts:
                vals = {c[axis] for c in cells}
                if lo in vals and hi in vals:
                    return True
            return False

        gens = []
        for op, _ in self._gauge_ops:
            cells = {(s[0], s[1]) for s in op.support}
            if cells & dress_cells and not straddles(cells):
                gens.append(op)
        dress_idx = self._disk_coord_idx(dress_cells)
        return right_cols, left_cols, low_rows, gens, dress_idx

    def _arm(self, op: PauliOperator, cols=None, rows=None) -> PauliOperator:
        if cols is not None:
            return op.restricted_to({s for s in op.support if s[0] in cols})
        return op.restricted_to({s for s in op.support if s[1] in rows})

    def match_vertical(self, label):
        """Vertical class carrying the same anyon, found by junction matching."""
        label = tuple(label)
        if label in self._vertical_match_cache:
            return self._vertical_match_cache[label]
        right_cols, _, low_rows, gens, dress_idx = self._junction_geometry()
        arm_r = self._arm(self.horizontal_rep(label), cols=right_cols)
        base = self._pattern(arm_r, gens)
        matches = []
        for vlabel in itertools.product(*[range(o) for o in self.gamma_prime.orders]):
            arm_d = self._arm(self.vertical_rep(vlabel), rows=low_rows)
            diff = tuple(
                (b - p) % self.Mc
                for b, p in zip(base, self._pattern(arm_d, gens)))
            if self._solve_dressing(dress_idx, gens, diff) is not None:
                matches.append(vlabel)
        if len(matches) != 1:
            raise ExtractionError(
                f"junction matching found {len(matches)} vertical classes for "
                f"{label}; the torus or window is too small")
        self._vertical_match_cache[label] = matches[0]
        return matches[0]

    def exchange_statistics(self, label, rng=None) -> PhaseRoot:
        """Exchange phase theta from the counterclockwise three-arm junction."""
        label = tuple(label)
        if not any(label):
            return PhaseRoot(0, 1)
        if rng is None and label in self._theta_cache:
            return self._theta_cache[label]
        right_cols, left_cols, low_rows, gens, dress_idx = self._junction_geometry()
        rep = self.horizontal_rep(label)
        arm_r = self._arm(rep, cols=right_cols)
        # The complementary half carries the inverse anyon at its junction
        # end; its dagger moves the same anyon into the junction.
        arm_l = self._arm(rep, cols=left_cols).dagger()
        base = self._pattern(arm_r, gens)
        diff_l = tuple(
            (b - p) % self.Mc for b, p in zip(base, self._pattern(arm_l, gens)))
        d2 = self._solve_dressing(dress_idx, gens, diff_l, randomize=rng)
        if d2 is None:
            raise ExtractionError("left junction arm cannot be dressed")
        vlabel = self.match_vertical(label)
        arm_d = self._arm(self.vertical_rep(vlabel), rows=low_rows)
        diff_d = tuple(
            (b - p) % self.Mc for b, p in zip(base, self._pattern(arm_d, gens)))
        d3 = self._solve_dressing(dress_idx, gens, diff_d, randomize=rng)
        if d3 is None:
            raise ExtractionError("junction matching failed for the vertical arm")
        w1 = arm_r
        w2 = arm_l * d2
        w3 = arm_d * d3
        # Counterclockwise triple (right at angle 0, left at pi, below at
        # 3 pi/2): W1 W2^dag W3 = theta W3 W2^dag W1 collapses to a pairing
        # combination of the three (dressed) arms; template phases cancel.
        theta = (w1.commutator_phase(w3)
                 * w1.commutator_phase(w2).conjugate()
                 * w2.commutator_phase(w3).conjugate())
        if rng is None:
            self._theta_cache[label] = theta
        return theta

    # -- braiding and classification ------------------------------------------

    def braiding_phase(self, label_a, label_b) -> PhaseRoot:
        """Full-braid phase from the single crossing of the two closed strings."""
        wa = self.horizontal_rep(tuple(label_a))
        vb = self.match_vertical(tuple(label_b))
        wb = self.vertical_rep(vb)
        return wa.commutator_phase(wb)

    def is_transparent(self, label) -> bool:
        gens = [tuple(1 if i == j else 0 for j in range(len(self.gamma.orders)))
                for i in range(len(self.gamma.orders))]
        return all(self.braiding_phase(label, g).is_one() for g in gens)

    def is_detectable(self, label) -> bool:
        """True when every local endpoint dressing violates some stabilizer.

        Same geometry as the junction: the truncated string's endpoint
        pattern is taken against the local stabilizer generators watching the
        corner block, and a reproducing Pauli is sought on the block.
        """
        label = tuple(label)
        if not any(label):
            return False
        a = self.analysis
        lat = self.code.lattice
        w = self.strip_width
        xa = lat.Lx // 3
        rep = self.horizontal_rep(label)
        arm = self._arm(rep, cols=set(range(0, xa + 1)))
        dress_cells = {lat.wrap(dx, dy)
                       for dx in range(-1, w) for dy in range(-1, w)}
        lo, hi = lat.wrap(xa, 0)[0], lat.wrap(xa + 1, 0)[0]
        stabs = []
        for g, _ in self._local_stab_instances():
            op = a.op_from_vector(g)
            cells = {(s[0], s[1]) for s in op.support}
            cols = {c[0] for c in cells}
            if cells & dress_cells and not (lo in cols and hi in cols):
                stabs.append(op)
        if not stabs:
            return False
        dress_idx = self._disk_coord_idx(dress_cells)
        target = self._pattern(arm, stabs)
        return self._solve_dressing(dress_idx, stabs, target) is None

    def _local_stab_instances(self):
        """Window-supported stabilizer generators with their anchor cells."""
        a = self.analysis
        lat = self.code.lattice
        w = min(a.window, lat.Lx, lat.Ly)
        base = a._span_supported_on(a.stabilizer, a._coords_in_box(0, 0, w))
        out = []
        from .code_engine import _translation_perms

        if self.code.is_translation_invariant:
            perms = _translation_perms(lat)
            cells = lat.cells()
            for vec in base:
                for p, cell in zip(perms, [(dx, dy) for dy in range(lat.Ly)
                                           for dx in range(lat.Lx)]):
                    out.append((ModVector(tuple(int(v) for v in vec[p]),
                                          a.moduli), cell))
        else:
            for (x, y) in lat.cells():
                block = a._span_supported_on(
                    a.stabilizer, a._coords_in_box(x, y, w))
                for vec in block:
                    out.append((ModVector(tuple(int(v) for v in vec), a.moduli),
                                (x, y)))
        return out

    # -- assembled report -------------------------------------------------------

    def extract(self):
        out = []
        for label in self.labels():
            if not any(label):
                continue
            theta = self.exchange_statistics(label)
            transparent = self.is_transparent(label)
            detectable = self.is_detectable(label)
            rep = StringOperator(self.horizontal_rep(label), "gamma", label)
            out.append(ExtractedAnyon(
                label, self.class_order(label), theta, detectable,
                transparent, rep))
        return out

    def translation_invariant_labels(self) -> bool:
        """One-cell translates of every generator rep stay in their class."""
        lat = self.code.lattice
        a = self.analysis
        for i in range(len(self.gamma.orders)):
            label = tuple(1 if j == i else 0 for j in range(len(self.gamma.orders)))
            rep = self.horizontal_rep(label)
            shifted = lat.translate_op(rep, 1, 0)
            prod = shifted * rep.dagger()
            if not a.local_stabilizer.contains(prod.to_vector()):
                return False
        return True


_LAB_CACHE: dict = {}


def lab_for(code: TorusCode, window: Optional[int] = None) -> AnyonLab:
    key = (id(code), window)
    got = _LAB_CACHE.get(key)
    if got is None or got.code is not code:
        got = AnyonLab(code, window)
        _LAB_CACHE[key] = got
    return got


def extract_anyons(code: TorusCode, window: Optional[int] = None):
    return lab_for(code, window).extract()


def exchange_statistics(code: TorusCode, anyon: ExtractedAnyon) -> PhaseRoot:
    return lab_for(code).exchange_statistics(anyon.label)


def braiding_phase(code: TorusCode, a: ExtractedAnyon, b: ExtractedAnyon) -> PhaseRoot:
    return lab_for(code).braiding_phase(a.label, b.label)


def classify_anyon(code: TorusCode, a: ExtractedAnyon):
    lab = lab_for(code)
    return lab.is_detectable(a.label), lab.is_transparent(a.label)
