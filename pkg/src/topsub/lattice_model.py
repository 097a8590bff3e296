"""Torus geometry, unit-cell slots, and translation-invariant templates.

Sites are ``(x, y, slot)`` triples on an Lx x Ly torus of unit cells; each
cell carries the same ordered list of qudit slots.  A generator template is a
finite list of relative terms; instantiating it at a base cell wraps offsets
periodically.  Regions are sets of unit cells (all slots included) with the
strip/disk constructors used by cleaning and anyon extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .pauli_core import ONE, PauliOperator, PhaseRoot, QuditSystem

DEFAULT_TEMPLATE_WINDOW = 3


@dataclass(frozen=True)
class TemplateTerm:
    dx: int
    dy: int
    slot: str
    x: int
    z: int


@dataclass(frozen=True)
class GeneratorTemplate:
    """Relative Pauli pattern placed at every unit cell of the torus."""

    terms: tuple
    phase: PhaseRoot = ONE
    name: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "terms",
            tuple(t if isinstance(t, TemplateTerm) else TemplateTerm(*t)
                  for t in self.terms))

    def diameter(self) -> int:
        if not self.terms:
            return 0
        xs = [t.dx for t in self.terms]
        ys = [t.dy for t in self.terms]
        return max(max(xs) - min(xs), max(ys) - min(ys)) + 1

    def shifted(self, dx: int, dy: int) -> "GeneratorTemplate":
        return GeneratorTemplate(
            tuple(TemplateTerm(t.dx + dx, t.dy + dy, t.slot, t.x, t.z)
                  for t in self.terms), self.phase, self.name)

    def inverse_name(self) -> str:
        return f"{self.name}^-1" if self.name else ""


class TorusLattice:
    """Unit cells on a periodic Lx x Ly grid, each with the same qudit slots."""

    def __init__(self, Lx: int, Ly: int, cell_slots: Sequence[tuple],
                 template_window: int = DEFAULT_TEMPLATE_WINDOW):
        if Lx < 2 or Ly < 2:
            raise ValueError("torus must be at least 2 cells in each direction")
        self.Lx, self.Ly = int(Lx), int(Ly)
        self.cell_slots = tuple((str(n), int(d)) for n, d in cell_slots)
        self.slot_dims = dict(self.cell_slots)
        self.template_window = template_window
        sites = [(x, y, name)
                 for y in range(Ly) for x in range(Lx)
                 for name, _ in self.cell_slots]
        self.system = QuditSystem(
            [(s, self.slot_dims[s[2]]) for s in sites])

    @property
    def n_qudits(self) -> int:
        return self.Lx * self.Ly * len(self.cell_slots)

    def wrap(self, x: int, y: int):
        return x % self.Lx, y % self.Ly

    def cells(self):
        return [(x, y) for y in range(self.Ly) for x in range(self.Lx)]

    def check_template(self, t: GeneratorTemplate):
        for term in t.terms:
            if term.slot not in self.slot_dims:
                raise KeyError(f"unknown slot {term.slot!r}")
        if t.diameter() > self.template_window:
            raise ValueError(
                f"template diameter {t.diameter()} exceeds window "
                f"{self.template_window}")

    def instantiate(self, t: GeneratorTemplate, base) -> PauliOperator:
        """The template shifted to `base` with periodic wrapping."""
        self.check_template(t)
        bx, by = base
        op = self.system.scalar(t.phase)
        acc = {}
        for term in t.terms:
            site = (*self.wrap(bx + term.dx, by + term.dy), term.slot)
            x0, z0 = acc.get(site, (0, 0))
            acc[site] = (x0 + term.x, z0 + term.z)
        return PauliOperator(self.system, op.phase_exp, acc)

    def all_translates(self, t: GeneratorTemplate):
        """One instantiation per unit cell, row-major order."""
        return [self.instantiate(t, c) for c in self.cells()]

    def translate_op(self, op: PauliOperator, dx: int, dy: int) -> PauliOperator:
        return op.translated(
            lambda s: (*self.wrap(s[0] + dx, s[1] + dy), s[2]))


@dataclass(frozen=True)
class Region:
    """A set of unit cells of a torus (every slot of each cell included)."""

    lattice: TorusLattice
    cells: frozenset

    @staticmethod
    def from_cells(lattice: TorusLattice, cells: Iterable) -> "Region":
        return Region(lattice, frozenset(lattice.wrap(x, y) for x, y in cells))

    @staticmethod
    def horizontal_strip(lattice: TorusLattice, y0: int, width: int) -> "Region":
        return Region.from_cells(
            lattice, [(x, y0 + dy) for x in range(lattice.Lx) for dy in range(width)])

    @staticmethod
    def vertical_strip(lattice: TorusLattice, x0: int, width: int) -> "Region":
        return Region.from_cells(
            lattice, [(x0 + dx, y) for y in range(lattice.Ly) for dx in range(width)])

    @staticmethod
    def disk(lattice: TorusLattice, center, radius: int) -> "Region":
        cx, cy = center
        return Region.from_cells(
            lattice,
            [(cx + dx, cy + dy)
             for dx in range(-radius, radius + 1)
             for dy in range(-radius, radius + 1)])

    def union(self, other: "Region") -> "Region":
        return Region(self.lattice, self.cells | other.cells)

    def complement(self) -> "Region":
        return Region(self.lattice,
                      frozenset(self.lattice.cells()) - self.cells)

    def sites(self):
        return frozenset(
            (x, y, name) for (x, y) in self.cells
            for name, _ in self.lattice.cell_slots)

    def linear_size(self) -> int:
        """Side of the smallest wrapped bounding box containing the region."""
        if not self.cells:
            return 0
        lat = self.lattice
        return max(_extent([c[0] for c in self.cells], lat.Lx),
                   _extent([c[1] for c in self.cells], lat.Ly))


def _extent(values, period):
    """Length of the shortest periodic interval covering `values`."""
    vs = sorted(set(values))
    k = len(vs)
    if k == 0:
        return 0
    if k == period:
        return period
    best = period
    for i in range(k):
        gap = (vs[(i + 1) % k] - vs[i]) % period
        if gap == 0:
            gap = period  # single residue class
        best = min(best, period - gap + 1)
    return best


def lattice_to_json(lattice: TorusLattice, templates) -> str:
    doc = {
        "Lx": lattice.Lx,
        "Ly": lattice.Ly,
        "slots": [{"name": n, "dim": d} for n, d in lattice.cell_slots],
        "templates": [
            {
                "phase": {"num": t.phase.num, "den": t.phase.den},
                "terms": [
                    {"dx": term.dx, "dy": term.dy, "slot": term.slot,
                     "x": term.x, "z": term.z}
                    for term in t.terms
                ],
            }
            for t in templates
        ],
    }
    return json.dumps(doc, indent=2)


def lattice_from_json(text: str, template_window: Optional[int] = None):
    doc = json.loads(text)
    slots = [(s["name"], s["dim"]) for s in doc["slots"]]
    templates = [
        GeneratorTemplate(
            tuple(TemplateTerm(t["dx"], t["dy"], t["slot"], t["x"], t["z"])
                  for t in tpl["terms"]),
            PhaseRoot(tpl["phase"]["num"], tpl["phase"]["den"]))
        for tpl in doc["templates"]
    ]
    window = template_window
    if window is None:
        window = max([DEFAULT_TEMPLATE_WINDOW] + [t.diameter() for t in templates])
    lattice = TorusLattice(doc["Lx"], doc["Ly"], slots, template_window=window)
    return lattice, templates
