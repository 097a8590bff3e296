"""Dev: validate the builders against known ground truth."""

import sys

from topsub.anyon_lab import AnyonLab
from topsub.anyon_theory import AnyonTheoryData, statistics_of, braiding_of
from topsub.code_builder import build_subsystem_code, build_tqd_stabilizer_code
from topsub.code_engine import analyze


def show(code, window=3, extract=True):
    a = analyze(code, window)
    c = a.counting
    print(f"== {code.name}: dim_H={c.dim_H} |S|={c.order_S} "
          f"[G:S]={c.index_G_over_S} [L:S]={c.index_L_over_S} "
          f"identity={c.identity_holds}")
    print("   nonlocal stab classes:", a.nonlocal_stabilizer_structure())
    if not extract:
        return
    lab = AnyonLab(code)
    print("   fusion:", lab.fusion_orders())
    for label in lab.labels():
        if not any(label):
            continue
        th = lab.exchange_statistics(label)
        print(f"   {label}: theta={th} det={lab.is_detectable(label)} "
              f"transp={lab.is_transparent(label)}")


if __name__ == "__main__":
    which = sys.argv[1]
    L = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    if which == "ds":
        data = AnyonTheoryData((2,), (1,), ((0,),))
        show(build_tqd_stabilizer_code(data, L))
    elif which == "tc2":
        data = AnyonTheoryData((2,), (0,), ((0,),))
        show(build_tqd_stabilizer_code(data, L))
    elif which == "tc3":
        data = AnyonTheoryData((3,), (2,), ((1,),))
        show(build_tqd_stabilizer_code(data, L))
    elif which == "semion":
        data = AnyonTheoryData((2,), (1,), ((0,),))
        show(build_subsystem_code(data, L))
    elif which == "z2_0":
        data = AnyonTheoryData((2,), (0,), ((0,),))
        show(build_subsystem_code(data, L))
    elif which == "z4_1":
        data = AnyonTheoryData((4,), (2,), ((1,),))
        show(build_subsystem_code(data, L))
    elif which == "3f":
        data = AnyonTheoryData((2, 2), (2, 2), ((1, 1), (1, 1)))
        show(build_subsystem_code(data, L))
    elif which == "z3z9":
        data = AnyonTheoryData((3, 9), (0, 0), ((0, 1), (1, 0)))
        show(build_subsystem_code(data, L))
