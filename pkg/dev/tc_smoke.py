"""Dev smoke test: Z_N toric code through the analyzer."""

import sys

from topsub.code_engine import TorusCode, analyze
from topsub.lattice_model import GeneratorTemplate, TorusLattice


def tc_templates(N):
    a_v = GeneratorTemplate(
        [(0, 0, "eh", 1, 0), (-1, 0, "eh", -1, 0),
         (0, 0, "ev", 1, 0), (0, -1, "ev", -1, 0)], name="A_v")
    b_p = GeneratorTemplate(
        [(0, 0, "eh", 0, 1), (1, 0, "ev", 0, 1),
         (0, 1, "eh", 0, -1), (0, 0, "ev", 0, -1)], name="B_p")
    return [a_v, b_p]


def tc_code(N, L):
    lat = TorusLattice(L, L, [("eh", N), ("ev", N)])
    return TorusCode(lat, tc_templates(N), name=f"z{N}_tc")


if __name__ == "__main__":
    N, L = int(sys.argv[1]), int(sys.argv[2])
    code = tc_code(N, L)
    a = analyze(code)
    c = a.counting
    print("dim_H", c.dim_H, "|S|", c.order_S, "[G:S]", c.index_G_over_S,
          "[L:S]", c.index_L_over_S, "identity", c.identity_holds)
    print("S/Slocal:", a.nonlocal_stabilizer_structure())
    print("phases:", a.stabilizer_phases[:6])
