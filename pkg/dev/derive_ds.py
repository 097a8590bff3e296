"""Dev: derive the half-twist (generalized double-semion) layer templates.

Start from the Z_{N^2} toric code plus Z-initialized plaquette ancillas,
adjoin the bound-boson strings C_e, and read the stabilizer group of the
resulting subsystem code; its window-local generators are the layer's
stabilizer templates.
"""

import sys

import numpy as np

from topsub.code_engine import TorusCode, analyze
from topsub.lattice_model import GeneratorTemplate, TorusLattice
from topsub.anyon_lab import AnyonLab
import topsub.ring_linalg as rl


def helper_code(N, L, sa=1, sb=1):
    D = N * N
    lat = TorusLattice(L, L, [("eh", D), ("ev", D), ("p", D)])
    a_v = GeneratorTemplate(
        [(0, 0, "eh", 1, 0), (-1, 0, "eh", -1, 0),
         (0, 0, "ev", 1, 0), (0, -1, "ev", -1, 0)], name="A_v")
    b_p = GeneratorTemplate(
        [(0, 0, "eh", 0, 1), (1, 0, "ev", 0, 1),
         (0, 1, "eh", 0, -1), (0, 0, "ev", 0, -1)], name="B_p")
    anc = GeneratorTemplate([(0, 0, "p", 0, 1)], name="Z_p")
    c_h = GeneratorTemplate(
        [(0, 0, "eh", 0, D // 2), (1, 0, "ev", N * sa, 0),
         (0, 0, "p", N * sb, 0), (1, 0, "p", -N * sb, 0)], name="C_h")
    c_v = GeneratorTemplate(
        [(0, 0, "ev", 0, D // 2), (0, 1, "eh", -N * sa, 0),
         (0, 0, "p", N * sb, 0), (0, 1, "p", -N * sb, 0)], name="C_v")
    return TorusCode(lat, [a_v, b_p, anc, c_h, c_v], name=f"helper{N}")


def main(N, L):
    code = helper_code(N, L)
    lat = code.lattice
    # C mutual commutation check
    ops = {}
    for t in code.gauge_templates:
        ops[t.name] = lat.instantiate(t, (0, 0))
    for na in ("C_h", "C_v"):
        for nb in ("C_h", "C_v"):
            tb = [t for t in code.gauge_templates if t.name == nb][0]
            for cell in lat.cells():
                ph = ops[na].commutator_phase(lat.instantiate(tb, cell))
                if not ph.is_one():
                    print("C noncommute:", na, nb, cell, ph)
    a = analyze(code)
    c = a.counting
    print("counting:", c)
    import math
    print("N_S in N-units:", math.log(c.order_S, N))
    # window-local stabilizer generators at the base cell
    base = a._span_supported_on(a.stabilizer, a._coords_in_box(0, 0, 3))
    print("local stab gens in 3x3 window:", base.shape)
    for row in base:
        op = a.op_from_vector(rl.ModVector(tuple(int(x) for x in row), a.moduli))
        print("  ", op.render())


if __name__ == "__main__":
    main(int(sys.argv[1]), int(sys.argv[2]))
