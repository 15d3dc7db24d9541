"""Run every verification sweep at acceptance size and write JSON reports.

    python scripts/run_sweeps.py --out reports/
    python scripts/run_sweeps.py --only fock,action --window 1

Each report is written as <suite>.json; a summary line per report goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from toroidal.action import ToroidalModule, verify_intertwiner, verify_k_bounds, verify_toroidal_relations
from toroidal.affine import AffineModule, verify_affine_relations
from toroidal.algebra import load_algebra, verify_algebra
from toroidal.fock import Lattice, verify_fock_identities
from toroidal.toroidal import Toroidal, verify_toroidal_algebra

STAGES = ("algebra", "affine", "fock", "toroidal", "action", "sector")


def run(stage: str, window: int):
    sl2 = load_algebra("sl2")
    M = AffineModule(sl2, (0,), 1, 0, depth=4)
    tm = ToroidalModule(M, 2)
    L = tm.lattice
    if stage == "algebra":
        return [verify_algebra(load_algebra(n)) for n in ("sl2", "sl3", "osp(1|2)")]
    if stage == "affine":
        return [verify_affine_relations(M, 3, M.basis(4, 4))]
    if stage == "fock":
        return [verify_fock_identities(Lattice(n), 4, window=2, full=True) for n in (2, 3)]
    if stage == "toroidal":
        return [verify_toroidal_algebra(Toroidal(t, n), window=1)
                for t, n in ((sl2, 2), (sl2, 3), (load_algebra("osp(1|2)"), 2))]
    if stage == "action":
        sample = tm.basis(3, [L.zero(), L.d(1)], zero_modes=1)
        to = ToroidalModule(AffineModule(load_algebra("osp(1|2)"), (1,), 1, 0, depth=2), 2)
        return [
            verify_toroidal_relations(tm, window, sample),
            verify_k_bounds(tm, window, sample),
            verify_toroidal_relations(to, 1, to.basis(2, to.gammas(1))),
        ]
    tm3 = ToroidalModule(M, 3)
    reps = [verify_intertwiner(tm, lam, window, tm.basis(3, tm.gammas(sector=lam))) for lam in ((0,), (1,), (2,))]
    reps.append(verify_intertwiner(tm3, (1, 1), 1, tm3.basis(2, tm3.gammas(sector=(1, 1)))))
    return reps


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--only", default=",".join(STAGES))
    ap.add_argument("--window", type=int, default=2)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for stage in args.only.split(","):
        t0 = time.time()
        for rep in run(stage.strip(), args.window):
            ok &= rep.ok
            name = rep.suite.replace(":", "_").replace("|", "").replace("(", "").replace(")", "")
            (args.out / f"{name}.json").write_text(rep.to_json() + "\n")
            print(f"{rep.summary().splitlines()[0]}  [{time.time() - t0:.1f}s]", flush=True)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
