"""Concrete torus codes: charge-flux stabilizer layers, gauged-out subsystem
codes, and the named catalog.

Lattice conventions (square lattice, one unit cell per vertex):

* slot ``e{i}h`` is the horizontal edge pointing +x from the cell's vertex,
  ``e{i}v`` the vertical edge pointing +y, ``p{i}`` the plaquette whose
  lower-left corner is the cell's vertex (present for half-twist layers).
* charges move along the direct lattice: a ``c^k`` step to the right is
  ``Z^k`` on the horizontal edge, upward is ``Z^k`` on the vertical edge.
* fluxes move along the dual lattice: an ``m^k`` step to the right is
  ``X^k`` on the vertical edge of the next cell, upward is ``X^{-k}`` on the
  horizontal edge of the cell above.

A layer with trivial twist (n_i = 0) is the usual toric-code layer on
``N_i``-dimensional edge qudits.  A half-twist layer (n_i = N_i/2) lives on
``N_i^2``-dimensional edge and plaquette qudits: its flux is the composite
``e^{N_i/2} m`` of the underlying ``Z_{N_i^2}`` toric code, the plaquette
term carries an ``X`` on its plaquette qudit, the edge term binds the
``e^{N^2/2} m^N`` boson to ``Z^{+-N}`` plaquette charges, and the alternative
flux's short strings carry ``Z^{-+1}`` plaquette factors so that they commute
with every stabilizer.  These assignments are forced (up to convention) by
requiring commutation; the round-trip tests pin them down.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .anyon_theory import AnyonTheoryData, tqd_embedding
from .code_engine import TorusCode
from .lattice_model import GeneratorTemplate, TemplateTerm, TorusLattice
from .pauli_core import PhaseRoot


class UnknownCatalogCodeError(KeyError):
    pass


@dataclass(frozen=True)
class LayerSpec:
    index: int
    N: int
    n: int

    @property
    def dim(self) -> int:
        return self.N if self.n == 0 else self.N * self.N

    @property
    def eh(self) -> str:
        return f"e{self.index}h"

    @property
    def ev(self) -> str:
        return f"e{self.index}v"

    @property
    def plaq(self) -> str:
        return f"p{self.index}"

    def slots(self):
        out = [(self.eh, self.dim), (self.ev, self.dim)]
        if self.n:
            out.append((self.plaq, self.dim))
        return out


def _layers(data: AnyonTheoryData):
    emb = tqd_embedding(data)
    return [LayerSpec(i, data.orders[i], emb.n[i]) for i in range(data.rank)], emb


def _astuple(t):
    return (t.dx, t.dy, t.slot, t.x, t.z) if isinstance(t, TemplateTerm) else t


def _merge(*term_lists):
    acc = {}
    for terms in term_lists:
        for t in terms:
            t = _astuple(t)
            key = (t[0], t[1], t[2])
            x, z = acc.get(key, (0, 0))
            acc[key] = (x + t[3], z + t[4])
    return tuple(TemplateTerm(k[0], k[1], k[2], x, z)
                 for k, (x, z) in sorted(acc.items(), key=lambda kv: str(kv[0]))
                 if (x, z) != (0, 0))


def _scale(terms, k: int):
    return [(t[0], t[1], t[2], k * t[3], k * t[4])
            for t in (_astuple(q) for q in terms)]


class LayerStrings:
    """Short-string and stabilizer term lists for one layer.

    For a half-twist layer the plaquette dressings of the alternative-flux
    and charge segments are not fixed by convention alone: they are solved
    once per qudit dimension as the unique (up to stabilizer attachments)
    local correction that commutes with the plaquette, edge, and
    plaquette-charge stabilizers while leaving the segment's commutation
    pattern with the vertex stabilizers untouched.
    """

    def __init__(self, spec: LayerSpec):
        self.spec = spec
        N, n = spec.N, spec.n
        eh, ev, pq = spec.eh, spec.ev, spec.plaq
        if n == 0:
            self.charge_r = [(0, 0, eh, 0, 1)]
            self.charge_u = [(0, 0, ev, 0, 1)]
            self.flux_r = [(1, 0, ev, 1, 0)]
            self.flux_u = [(0, 1, eh, -1, 0)]
            self.fluxbar_r = [(1, 0, ev, -1, 0)]
            self.fluxbar_u = [(0, 1, eh, 1, 0)]
        else:
            solved = _half_twist_strings(N)
            rename = {"eh": eh, "ev": ev, "p": pq}
            for key in ("charge_r", "charge_u", "fluxbar_r", "fluxbar_u",
                        "flux_r", "flux_u"):
                setattr(self, key, [(dx, dy, rename[s], x, z)
                                    for dx, dy, s, x, z in solved[key]])

    def plaquette(self):
        eh, ev = self.spec.eh, self.spec.ev
        terms = [(0, 0, eh, 0, 1), (1, 0, ev, 0, 1),
                 (0, 1, eh, 0, -1), (0, 0, ev, 0, -1)]
        if self.spec.n:
            terms.append((0, 0, self.spec.plaq, 0, -1))
        return terms

    def vertex(self):
        """The flux loop around a vertex (dressed when the layer is twisted)."""
        terms = [(0, 0, self.spec.eh, 1, 0), (-1, 0, self.spec.eh, -1, 0),
                 (0, 0, self.spec.ev, 1, 0), (0, -1, self.spec.ev, -1, 0)]
        if self.spec.n:
            terms.append((0, 0, self.spec.plaq, 0, self.spec.n))
        return terms

    def edge_stabilizer(self, direction: str):
        """Half-twist layers: boson short string bound to plaquette charges."""
        N = self.spec.N
        eh, ev, pq = self.spec.eh, self.spec.ev, self.spec.plaq
        if direction == "r":
            return [(0, 0, eh, 0, N * N // 2), (1, 0, ev, N, 0),
                    (0, 0, pq, N, 0), (1, 0, pq, -N, 0)]
        return [(0, 0, ev, 0, N * N // 2), (0, 1, eh, -N, 0),
                (0, 0, pq, N, 0), (0, 1, pq, -N, 0)]

    def plaquette_charge(self):
        return [(0, 0, self.spec.plaq, 0, self.spec.N)]


def _half_twist_scratch(N: int):
    D = N * N
    lat = TorusLattice(6, 6, [("eh", D), ("ev", D), ("p", D)])

    def tpl(terms, name):
        return GeneratorTemplate(_merge(terms), name=name)

    vertex = tpl([(0, 0, "eh", 1, 0), (-1, 0, "eh", -1, 0),
                  (0, 0, "ev", 1, 0), (0, -1, "ev", -1, 0),
                  (0, 0, "p", 0, N // 2)], "vertex")
    plaq = tpl([(0, 0, "eh", 0, 1), (1, 0, "ev", 0, 1),
                (0, 1, "eh", 0, -1), (0, 0, "ev", 0, -1),
                (0, 0, "p", 0, -1)], "plaquette")
    edge_r = tpl([(0, 0, "eh", 0, D // 2), (1, 0, "ev", N, 0),
                  (0, 0, "p", N, 0), (1, 0, "p", -N, 0)], "edge_r")
    edge_u = tpl([(0, 0, "ev", 0, D // 2), (0, 1, "eh", -N, 0),
                  (0, 0, "p", N, 0), (0, 1, "p", -N, 0)], "edge_u")
    zn = tpl([(0, 0, "p", 0, N)], "plaq_charge")
    return lat, [vertex, plaq, edge_r, edge_u, zn]


_HALF_TWIST_CACHE: dict = {}


def _half_twist_strings(N: int):
    """Solve the dressed short-string segments of a half-twist layer.

    The bare flux segment ``Z^{N/2} X^{+-1}`` and charge segment ``Z^N`` are
    corrected by a local attachment so that they commute with every
    translate of the plaquette term, edge term, and plaquette charge, while
    their commutation pattern with the vertex terms (their anyon content) is
    unchanged.  The attachment is solved exactly over the ring.
    """
    if N in _HALF_TWIST_CACHE:
        return _HALF_TWIST_CACHE[N]
    if N % 2:
        raise ValueError("half-twist layers need an even order")
    D = N * N
    lat, stab_templates = _half_twist_scratch(N)
    vertex, others = stab_templates[0], stab_templates[1:]
    half = N // 2
    bare = {
        "flux_r": [(0, 0, "eh", 0, half), (1, 0, "ev", 1, 0)],
        "flux_u": [(0, 0, "ev", 0, half), (0, 1, "eh", -1, 0)],
        "fluxbar_r": [(0, 0, "eh", 0, half), (1, 0, "ev", -1, 0)],
        "fluxbar_u": [(0, 0, "ev", 0, half), (0, 1, "eh", 1, 0)],
        "charge_r": [(0, 0, "eh", 0, N)],
        "charge_u": [(0, 0, "ev", 0, N)],
    }
    solved = {}
    for key, terms in bare.items():
        solved[key] = _solve_attachment(lat, terms, [vertex], others)
    _HALF_TWIST_CACHE[N] = solved
    return solved


def _solve_attachment(lat: TorusLattice, bare_terms, keep_pattern, cancel):
    """Bare segment plus a local attachment commuting with `cancel` templates.

    Returns template terms (centered at the base cell) for the dressed
    segment.  The attachment leaves the commutation pattern against the
    `keep_pattern` templates exactly as it is for the bare segment, which
    pins the segment's anyon content.
    """
    import numpy as np

    from . import ring_linalg as rl
    from .code_engine import _pairing_dual

    base = lat.instantiate(GeneratorTemplate(_merge(bare_terms)), (0, 0))
    system = lat.system
    moduli = system.symplectic_moduli
    dims = np.array(moduli, dtype=np.int64)
    Mc = system.lcm_dim
    watchers = []
    targets = []
    for t in cancel:
        for cell in lat.cells():
            op = lat.instantiate(t, cell)
            watchers.append(op)
            # Phi_w(base * d) = 0 needs Phi_d(w) = +Phi_w(base) (antisymmetry).
            targets.append(op.commutator_phase(base).exponent_mod(Mc))
    for t in keep_pattern:
        for cell in lat.cells():
            op = lat.instantiate(t, cell)
            watchers.append(op)
            targets.append(0)
    # Attachment support: the 2x3 block of cells around the segment.
    cells = [(dx, dy) for dx in (-1, 0, 1, 2) for dy in (-1, 0, 1)]
    idx = []
    for (x, y) in cells:
        for name, _ in lat.cell_slots:
            i = system.index_of((*lat.wrap(x, y), name))
            idx.extend((2 * i, 2 * i + 1))
    idx = np.array(sorted(set(idx)), dtype=np.int64)
    wmat = np.array([w.to_vector().coords for w in watchers], dtype=np.int64)
    dual = _pairing_dual(wmat, dims, Mc)
    rows = dual[:, idx].T
    sol = rl.express_in_matrix(rows, (Mc,) * len(watchers),
                               np.array(targets, dtype=np.int64))
    if sol is None:
        raise AssertionError(
            "no local attachment exists for a half-twist segment; "
            "the layer conventions are inconsistent")
    vec = np.zeros(len(moduli), dtype=np.int64)
    vec[idx] = sol % dims[idx]
    dressed = base * system.from_vector(
        rl.ModVector(tuple(int(v) for v in vec), moduli))
    terms = []
    for (x, y, slot), (xe, ze) in sorted(
            dressed.paulis.items(), key=lambda kv: str(kv[0])):
        dx = (x + lat.Lx // 2) % lat.Lx - lat.Lx // 2
        dy = (y + lat.Ly // 2) % lat.Ly - lat.Ly // 2
        terms.append((dx, dy, slot, xe, ze))
    return terms


def _tqd_layer_templates(spec: LayerSpec):
    s = LayerStrings(spec)
    name = f"L{spec.index}"
    out = [
        GeneratorTemplate(_merge(s.vertex()), name=f"{name}_vertex"),
        GeneratorTemplate(_merge(s.plaquette()), name=f"{name}_plaquette"),
    ]
    if spec.n:
        out.append(GeneratorTemplate(
            _merge(s.edge_stabilizer("r")), name=f"{name}_edge_h"))
        out.append(GeneratorTemplate(
            _merge(s.edge_stabilizer("u")), name=f"{name}_edge_v"))
        out.append(GeneratorTemplate(
            _merge(s.plaquette_charge()), name=f"{name}_plaq_charge"))
    return out


def _gauged_out_templates(data: AnyonTheoryData, specs, emb):
    """Per layer: the plaquette term, the abar short strings, Z^N charges."""
    strings = [LayerStrings(sp) for sp in specs]
    out = []
    for i, sp in enumerate(specs):
        s = strings[i]
        abar_r, abar_u = list(s.fluxbar_r), list(s.fluxbar_u)
        for j in range(i, data.rank):
            nij = gcd(data.orders[i], data.orders[j])
            k = data.p[i][j] * data.orders[j] // nij
            if k % data.orders[j]:
                abar_r += _scale(strings[j].charge_r, k)
                abar_u += _scale(strings[j].charge_u, k)
        name = f"L{i}"
        out.append(GeneratorTemplate(
            _merge(s.plaquette()), name=f"{name}_plaquette"))
        out.append(GeneratorTemplate(_merge(abar_r), name=f"{name}_abar_h"))
        out.append(GeneratorTemplate(_merge(abar_u), name=f"{name}_abar_v"))
        if sp.n:
            out.append(GeneratorTemplate(
                _merge(s.plaquette_charge()), name=f"{name}_plaq_charge"))
    return out


def kept_string_templates(data: AnyonTheoryData):
    """Short strings of the kept generators a_i (horizontal and vertical)."""
    specs, emb = _layers(data)
    strings = [LayerStrings(sp) for sp in specs]
    out = []
    for i in range(data.rank):
        a_r, a_u = list(strings[i].flux_r), list(strings[i].flux_u)
        for j in range(i + 1):
            nij = gcd(data.orders[i], data.orders[j])
            k = data.p[j][i] * data.orders[j] // nij
            if k % data.orders[j]:
                a_r += _scale(strings[j].charge_r, k)
                a_u += _scale(strings[j].charge_u, k)
        out.append((GeneratorTemplate(_merge(a_r), name=f"L{i}_a_h"),
                    GeneratorTemplate(_merge(a_u), name=f"L{i}_a_v")))
    return out


def _lattice_for(data: AnyonTheoryData, Lx: int, Ly: int) -> TorusLattice:
    specs, _ = _layers(data)
    slots = [s for sp in specs for s in sp.slots()]
    return TorusLattice(Lx, Ly, slots)


def build_tqd_stabilizer_code(data: AnyonTheoryData, Lx: int,
                              Ly: Optional[int] = None) -> TorusCode:
    """The layered stabilizer code whose anyons contain the requested theory."""
    Ly = Lx if Ly is None else Ly
    specs, _ = _layers(data)
    lattice = _lattice_for(data, Lx, Ly)
    templates = [t for sp in specs for t in _tqd_layer_templates(sp)]
    return TorusCode(lattice, templates, name=_theory_name("tqd", data))


def build_subsystem_code(data: AnyonTheoryData, Lx: int,
                         Ly: Optional[int] = None) -> TorusCode:
    """The subsystem code obtained by gauging out the alternative fluxes.

    The gauge group is generated by the plaquette stabilizers, the short
    strings of the gauged-out generators (with their charge dressing), and
    the plaquette-qudit charges of half-twist layers; its extracted anyon
    theory is the input data.
    """
    Ly = Lx if Ly is None else Ly
    specs, emb = _layers(data)
    lattice = _lattice_for(data, Lx, Ly)
    templates = _gauged_out_templates(data, specs, emb)
    return TorusCode(lattice, templates, name=_theory_name("sub", data))


def _theory_name(kind: str, data: AnyonTheoryData) -> str:
    orders = "x".join(str(n) for n in data.orders)
    u = ",".join(str(x) for x in data.two_t)
    return f"{kind}[{orders};u={u}]"


# -- single-site Clifford F and the hexagonal presentation -------------------


def apply_clifford_f(code: TorusCode, slot_names) -> TorusCode:
    """Conjugate all templates by F (X -> Z, Z -> X^dagger) on given slots.

    Template phases are reset; gauge groups contain all roots of unity, so
    the gauge span is unaffected by this choice.
    """
    slot_names = set(slot_names)
    new_templates = []
    for t in code.gauge_templates:
        terms = []
        for term in t.terms:
            if term.slot in slot_names:
                terms.append(TemplateTerm(term.dx, term.dy, term.slot,
                                          -term.z, term.x))
            else:
                terms.append(term)
        new_templates.append(GeneratorTemplate(
            _merge([(t.dx, t.dy, t.slot, t.x, t.z) for t in terms]),
            name=t.name))
    return TorusCode(code.lattice, new_templates, code.extra_gauge,
                     name=f"{code.name}+F")


def rename_slots(code: TorusCode, mapping) -> TorusCode:
    lattice = code.lattice
    new_slots = [(mapping.get(n, n), d) for n, d in lattice.cell_slots]
    new_lat = TorusLattice(lattice.Lx, lattice.Ly, new_slots,
                           template_window=lattice.template_window)
    new_templates = [
        GeneratorTemplate(
            tuple(TemplateTerm(t.dx, t.dy, mapping.get(t.slot, t.slot),
                               t.x, t.z) for t in tpl.terms),
            tpl.phase, tpl.name)
        for tpl in code.gauge_templates
    ]
    return TorusCode(new_lat, new_templates, name=code.name)


def honeycomb_code(N: int, Lx: int, Ly: Optional[int] = None,
                   name: Optional[str] = None) -> TorusCode:
    """The two-body hexagonal code with XX, YY, ZZ edge gauge generators.

    Slot ``a`` holds the horizontal-edge qudits and slot ``b`` the
    vertical-edge qudits of the square-lattice presentation; the negative
    slope, positive slope, and vertical hexagonal edges carry the XX, YY and
    ZZ terms.  Equals the F-conjugated gauged-out toric code.
    """
    Ly = Lx if Ly is None else Ly
    lattice = TorusLattice(Lx, Ly, [("a", N), ("b", N)])
    xx = GeneratorTemplate(
        [(0, 0, "a", 1, 0), (1, 0, "b", 1, 0)], name="x_edge")
    yy = GeneratorTemplate(
        [(1, 0, "b", 1, 1), (0, 1, "a", 1, 1)], name="y_edge")
    zz = GeneratorTemplate(
        [(0, 0, "b", 0, 1), (0, 1, "a", 0, 1)], name="z_edge")
    return TorusCode(lattice, [xx, yy, zz],
                     name=name or f"z{N}_1_honeycomb")


# -- named catalog ------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameter: Optional[int]
    theory: AnyonTheoryData
    logical_index: int
    description: str


def _catalog_theories(name: str, parameter: Optional[int]):
    if name == "z2_0":
        return AnyonTheoryData((2,), (0,), ((0,),)), 1
    if name == "chiral_semion":
        return AnyonTheoryData((2,), (1,), ((0,),)), 4
    if name == "z2_1_honeycomb":
        return AnyonTheoryData((2,), (2,), ((1,),)), 1
    if name == "zN_1":
        N = parameter
        if N is None or not 2 <= N <= 9:
            raise UnknownCatalogCodeError("zN_1 needs a parameter N in 2..9")
        logical = N * N if N % 2 else (N // 2) ** 2
        return AnyonTheoryData((N,), (2,), ((1,),)), logical
    if name == "z4_1":
        return AnyonTheoryData((4,), (2,), ((1,),)), 4
    if name == "three_fermion":
        return AnyonTheoryData((2, 2), (2, 2), ((1, 1), (1, 1))), 16
    if name == "zp_zp2":
        p = parameter
        if p not in (2, 3, 5):
            raise UnknownCatalogCodeError("zp_zp2 needs parameter p in {2,3,5}")
        return (AnyonTheoryData((p, p * p), (0, 0), ((0, 1), (1, 0))),
                p ** 4)
    raise UnknownCatalogCodeError(f"unknown catalog code {name!r}")


CATALOG_NAMES = ("z4_1", "chiral_semion", "z2_0", "z2_1_honeycomb", "zN_1",
                 "three_fermion", "zp_zp2")


def catalog_get(name: str, Lx: int, Ly: Optional[int] = None,
                parameter: Optional[int] = None):
    """A catalog code in its paper-native presentation, with expectations."""
    Ly = Lx if Ly is None else Ly
    theory, logical = _catalog_theories(name, parameter)
    entry = CatalogEntry(name, parameter, theory, logical,
                         _CATALOG_DESCRIPTIONS[name])
    if name in ("z4_1", "z2_1_honeycomb", "zN_1"):
        N = theory.orders[0]
        code = honeycomb_code(N, Lx, Ly, name=name if name != "zN_1"
                              else f"z{N}_1")
        return code, entry
    code = build_subsystem_code(theory, Lx, Ly)
    code = TorusCode(code.lattice, code.gauge_templates, code.extra_gauge,
                     name=name if parameter is None else f"{name}[{parameter}]")
    return code, entry


_CATALOG_DESCRIPTIONS = {
    "z4_1": "hexagonal two-body code with a degenerate-braiding semion theory",
    "chiral_semion": "square-lattice code carrying the chiral semion theory",
    "z2_0": "gauged-out toric code with a single transparent boson",
    "z2_1_honeycomb": "honeycomb-model gauge group; transparent fermion only",
    "zN_1": "generalized honeycomb code, anyons Z_N with quadratic statistics",
    "three_fermion": "two-qubit-per-edge code with three mutually braiding fermions",
    "zp_zp2": "mixed-dimension code with Z_p x Z_{p^2} fusion and one "
              "transparent subgroup",
}
