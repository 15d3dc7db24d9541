"""Regenerate the shipped algebra tables in src/toroidal/data/.

sl(N) tables come from matrix commutators of elementary matrices with the
trace form.  osp(1|2) is written from its defining brackets; its signs were
fixed by requiring super Jacobi and form invariance (checked on load).

    python scripts/generate_tables.py
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "toroidal" / "data"


def _sym(s):
    if s[0] == "H":
        return f"H{s[1]}"
    return "X(" + ",".join(str(c) for c in s[1]) + ")"


def _fmt(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def sl_table(N: int) -> str:
    l = N - 1

    def E(i, j):
        return {(i, j): 1}

    def mul(a, b):
        out = {}
        for (i, j), x in a.items():
            for (k, m), y in b.items():
                if j == k:
                    out[(i, m)] = out.get((i, m), 0) + x * y
        return {k: v for k, v in out.items() if v}

    def comm(a, b):
        out = dict(mul(a, b))
        for k, v in mul(b, a).items():
            out[k] = out.get(k, 0) - v
        return {k: v for k, v in out.items() if v}

    def trace(a):
        return sum(v for (i, j), v in a.items() if i == j)

    basis = {}
    for i in range(l):
        basis[("H", i + 1)] = {(i, i): 1, (i + 1, i + 1): -1}
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            lo, hi = min(i, j), max(i, j)
            coords = tuple((1 if i < j else -1) if lo <= k < hi else 0 for k in range(l))
            basis[("X", coords)] = E(i, j)
    index = {}
    for s, m in basis.items():
        if s[0] == "X":
            (k,) = m
            index[k] = s

    def decompose(m):
        out = {}
        diag = [m.get((i, i), 0) for i in range(N)]
        acc = 0
        for k in range(l):
            acc += diag[k]
            if acc:
                out[("H", k + 1)] = acc
        for k, v in m.items():
            if k[0] != k[1]:
                out[index[k]] = v
        return out

    syms = sorted(basis)
    lines = [f"# sl({N}) Chevalley basis from elementary matrices, trace form",
             f"name sl{N}", f"rank {l}"]
    for i in range(l):
        lines.append(f"cartan H{i + 1}")
    for s in syms:
        if s[0] == "X":
            lines.append(f"root {_sym(s)} even sigma 1")
    for a in syms:
        for b in syms:
            t = decompose(comm(basis[a], basis[b]))
            if t:
                rhs = " + ".join(f"{_fmt(c)} {_sym(k)}" for k, c in sorted(t.items()))
                lines.append(f"bracket {_sym(a)} {_sym(b)} -> {rhs}")
    for a in syms:
        for b in syms:
            v = trace(mul(basis[a], basis[b]))
            if v:
                lines.append(f"form {_sym(a)} {_sym(b)} = {_fmt(v)}")
    return "\n".join(lines) + "\n"


def osp12_table() -> str:
    # h = H1, e = X(2), f = X(-2) even; x = X(1), y = X(-1) odd.
    # simple system {alpha}: Delta_1^- = {-alpha}, so sigma_{-alpha} = -1.
    h, e, f, x, y = ("H", 1), ("X", (2,)), ("X", (-2,)), ("X", (1,)), ("X", (-1,))
    parity = {h: 0, e: 0, f: 0, x: 1, y: 1}
    half = Fraction(1, 2)
    br = {
        (h, e): {e: 2}, (h, f): {f: -2}, (h, x): {x: 1}, (h, y): {y: -1},
        (e, f): {h: 1}, (e, y): {x: -1}, (f, x): {y: -1},
        (x, x): {e: 1}, (y, y): {f: -1}, (x, y): {h: half},
    }
    full = {}
    for (a, b), t in br.items():
        full[(a, b)] = t
        s = -(-1) ** (parity[a] * parity[b])
        full[(b, a)] = {k: s * v for k, v in t.items()}
    form = {(h, h): 2, (e, f): 1, (f, e): 1, (x, y): 1, (y, x): -1}
    lines = ["# osp(1|2) = B(0,1): even sl2 span {H1, X(2), X(-2)}, odd {X(1), X(-1)}",
             "name osp(1|2)", "rank 1", "cartan H1",
             "root X(2) even sigma 1", "root X(-2) even sigma 1",
             "root X(1) odd sigma 1", "root X(-1) odd sigma -1"]
    for (a, b), t in sorted(full.items()):
        rhs = " + ".join(f"{_fmt(c)} {_sym(k)}" for k, c in sorted(t.items()))
        lines.append(f"bracket {_sym(a)} {_sym(b)} -> {rhs}")
    for (a, b), v in sorted(form.items()):
        lines.append(f"form {_sym(a)} {_sym(b)} = {_fmt(v)}")
    return "\n".join(lines) + "\n"


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "sl2.txt").write_text(sl_table(2))
    (DATA / "sl3.txt").write_text(sl_table(3))
    (DATA / "osp12.txt").write_text(osp12_table())
    print(f"wrote tables to {DATA}")


if __name__ == "__main__":
    main()
