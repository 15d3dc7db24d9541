"""Nilpotency degrees of real root vectors on v_hw (x) e^0 (x) 1 for sl2.

Prints the smallest l with pi(X(+-beta) (x) t^m)^l v = 0, both in the Verma
module and modulo its maximal submodule (the integrable quotient when the
highest weight is dominant), for m in a small window.

    python scripts/nilpotency_table.py --weight 0 --window 1
"""

from __future__ import annotations

import argparse
import itertools

from toroidal.action import ToroidalModule, nilpotency_probe
from toroidal.affine import AffineModule
from toroidal.algebra import load_algebra


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weight", type=int, default=0)
    ap.add_argument("--level", default="1")
    ap.add_argument("--window", type=int, default=1)
    ap.add_argument("--cap", type=int, default=5)
    args = ap.parse_args()
    M = AffineModule(load_algebra("sl2"), (args.weight,), args.level, 0, depth=4)
    tm = ToroidalModule(M, 2)
    v = {((), (tm.lattice.zero(), ())): 1}
    rng = range(-args.window, args.window + 1)
    print(f"{'root':>6} {'m':>8} {'Verma':>6} {'quotient':>9}")
    for sign, m in itertools.product((1, -1), itertools.product(rng, repeat=2)):
        x = {("g", ("X", (sign,)), m): 1}
        fmt = lambda d: "-" if d is None else str(d)
        dv = nilpotency_probe(tm, x, v, cap=args.cap)
        dq = nilpotency_probe(tm, x, v, cap=args.cap, quotient=True)
        print(f"{'+b' if sign > 0 else '-b':>6} {str(m):>8} {fmt(dv):>6} {fmt(dq):>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
