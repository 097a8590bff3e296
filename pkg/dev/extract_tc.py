"""Dev: extract the anyon data of the Z_N toric code and print it."""

import sys

sys.path.insert(0, "dev")
from tc_smoke import tc_code

from topsub.anyon_lab import AnyonLab


def main(N, L):
    code = tc_code(N, L)
    lab = AnyonLab(code)
    print("strip width:", lab.strip_width)
    print("fusion orders:", lab.fusion_orders())
    print("gamma' orders:", lab.gamma_prime.orders)
    for label in lab.labels():
        if not any(label):
            continue
        th = lab.exchange_statistics(label)
        det = lab.is_detectable(label)
        tr = lab.is_transparent(label)
        vm = lab.match_vertical(label)
        print(f"label {label} -> vmatch {vm} theta {th} "
              f"detectable={det} transparent={tr}")
    gens = [tuple(1 if i == j else 0 for j in range(len(lab.fusion_orders())))
            for i in range(len(lab.fusion_orders()))]
    for a in gens:
        for b in gens:
            print(f"B({a},{b}) = {lab.braiding_phase(a, b)}")
    print("translation invariant:", lab.translation_invariant_labels())


if __name__ == "__main__":
    main(int(sys.argv[1]), int(sys.argv[2]))
