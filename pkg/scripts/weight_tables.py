"""Weight-space dimensions of V (x) V(Gamma) for sl2 at level K, two ways.

For each lattice point gamma, every weight reached by basis tensors of total
depth <= --depth is listed with its direct count (filtering the product basis)
and its generating-function count (Verma character x colored partitions).

    python scripts/weight_tables.py --level 1 --depth 3
"""

from __future__ import annotations

import argparse

from toroidal.action import ToroidalModule, weight_space
from toroidal.affine import AffineModule
from toroidal.algebra import load_algebra
from toroidal.linear import fmt_scalar


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="sl2")
    ap.add_argument("--level", default="1")
    ap.add_argument("--weight", type=int, default=0)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    table = load_algebra(args.algebra)
    M = AffineModule(table, (args.weight,) * table.rank, args.level, 0, depth=4)
    tm = ToroidalModule(M, 2)
    L = tm.lattice
    bad = 0
    for g in (L.zero(), L.d(1), L.add(L.d(1), L.delta(1))):
        seen = []
        for key in tm.basis(args.depth, [g], zero_modes=args.depth):
            w = tm.weight(key)
            if w not in seen:
                seen.append(w)
        print(f"\ngamma = {g}")
        print(f"{'h':>6} {'K_1,K_2':>10} {'d_1,d_2':>10} {'direct':>7} {'genfn':>6}")
        for w in sorted(seen, key=lambda w: (-w.d[-1], [-x for x in w.h])):
            ws = weight_space(tm, w, 4, 4)
            bad += ws.dim_direct != ws.dim_generating
            print(f"{','.join(map(fmt_scalar, w.h)):>6} {','.join(map(fmt_scalar, w.k)):>10} "
                  f"{','.join(map(fmt_scalar, w.d)):>10} {ws.dim_direct:>7} {ws.dim_generating:>6}"
                  f"{'' if ws.certified else '  (uncertified)'}")
    print(f"\n{bad} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
