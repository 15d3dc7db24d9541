"""The toroidal Lie superalgebra g (x) A + Omega_A/d_A + D as explicit data.

Symbols:

* ``("g", s, m)``  the loop element s (x) t^m, s an algebra basis symbol and
  m an n-tuple of integers;
* ``("K", i, m)``  t^m K_i, 1 <= i <= n;
* ``("d", i)``     the derivation d_i.

Elements are dicts symbol -> scalar in canonical form: for m != 0 the
coefficient of t^m K_j vanishes, j the largest index with m_j != 0 (the
relation sum_i m_i t^m K_i = 0 is used to eliminate it).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import defects
from .algebra import AlgebraTable, sym_str
from .linear import Q, add_into, add_term, inverse, norm
from .report import Report


class ToroidalError(ValueError):
    pass


def sym_name(sym) -> str:
    kind = sym[0]
    if kind == "g":
        return f"{sym_str(sym[1])}t^{list(sym[2])}"
    if kind == "K":
        return f"t^{list(sym[2])}K{sym[1]}"
    return f"d{sym[1]}"


def elem_str(terms: dict) -> str:
    if not terms:
        return "0"
    return " + ".join(f"{c}*{sym_name(s)}" for s, c in sorted(terms.items(), key=lambda kv: repr(kv[0])))


def _gauge_index(m) -> int:
    """1-based largest index with m_j != 0 (0 when m = 0)."""
    for j in range(len(m), 0, -1):
        if m[j - 1]:
            return j
    return 0


@dataclass(frozen=True)
class ToroidalWeight:
    """A functional on h + span K_i + span d_i: values on H(i), K_i and d_i."""

    h: tuple
    k: tuple
    d: tuple

    def __add__(self, other: "ToroidalWeight") -> "ToroidalWeight":
        return ToroidalWeight(
            tuple(a + b for a, b in zip(self.h, other.h)),
            tuple(a + b for a, b in zip(self.k, other.k)),
            tuple(a + b for a, b in zip(self.d, other.d)),
        )


@dataclass(eq=False)
class Toroidal:
    table: AlgebraTable
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ToroidalError("need n >= 2")

    # -- symbols ----------------------------------------------------------

    def g(self, s, m) -> dict:
        return {("g", s, tuple(m)): 1}

    def K(self, i: int, m) -> dict:
        return self.canonical({("K", i, tuple(m)): 1})

    def d(self, i: int) -> dict:
        return {("d", i): 1}

    def parity(self, sym) -> int:
        return self.table.parity[sym[1]] if sym[0] == "g" else 0

    def element_parity(self, terms: dict):
        ps = {self.parity(s) for s in terms}
        return ps.pop() if len(ps) == 1 else None

    def canonical(self, terms: dict) -> dict:
        out: dict = {}
        for sym, c in terms.items():
            if sym[0] != "K":
                add_term(out, sym, c)
                continue
            _, i, m = sym
            j = _gauge_index(m)
            if j == 0 or i != j:
                add_term(out, sym, c)
                continue
            # t^m K_j = -(1/m_j) sum_{i != j} m_i t^m K_i
            for ii in range(1, self.n + 1):
                if ii != j and m[ii - 1]:
                    add_term(out, ("K", ii, m), Q(-c * m[ii - 1], m[j - 1]))
        return {s: norm(c) for s, c in out.items()}

    def symbols_in_window(self, window: int) -> list:
        """Canonical basis symbols with every t-exponent in [-window, window]."""
        rng = range(-window, window + 1)
        ms = list(itertools.product(rng, repeat=self.n))
        out = [("g", s, m) for m in ms for s in self.table.symbols]
        for m in ms:
            j = _gauge_index(m)
            out += [("K", i, m) for i in range(1, self.n + 1) if j == 0 or i != j]
        out += [("d", i) for i in range(1, self.n + 1)]
        return out

    # -- bracket ----------------------------------------------------------

    def bracket_symbols(self, s1, s2) -> dict:
        k1, k2 = s1[0], s2[0]
        if k1 == "g" and k2 == "g":
            _, x, m = s1
            _, y, k = s2
            mk = tuple(a + b for a, b in zip(m, k))
            out = {("g", s, mk): c for s, c in self.table.bracket_terms(x, y).items()}
            f = self.table.form_value(x, y)
            if f:
                for i in range(1, self.n + 1):
                    if m[i - 1]:
                        add_term(out, ("K", i, mk), f * m[i - 1])
            return self.canonical(out)
        if k1 == "d" and k2 == "d":
            return {}
        if k1 == "d":
            m = s2[2]
            c = m[s1[1] - 1]
            return {s2: c} if c else {}
        if k2 == "d":
            m = s1[2]
            c = m[s2[1] - 1]
            return {s1: -c} if c else {}
        return {}  # Omega is central

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for s1, c1 in x.items():
            for s2, c2 in y.items():
                add_into(out, self.bracket_symbols(s1, s2), c1 * c2)
        return {s: norm(c) for s, c in out.items()}

    # -- grading ----------------------------------------------------------

    def weight_of(self, terms) -> ToroidalWeight:
        if isinstance(terms, tuple):
            terms = {terms: 1}
        ws = {self._symbol_weight(s) for s in terms}
        if len(ws) != 1:
            raise ToroidalError("weight_of needs a nonzero homogeneous element")
        return ws.pop()

    def _symbol_weight(self, sym) -> ToroidalWeight:
        zero_k = (0,) * self.n
        if sym[0] == "d":
            return ToroidalWeight((0,) * self.table.rank, zero_k, (0,) * self.n)
        m = tuple(sym[2])
        if sym[0] == "g" and sym[1][0] == "X":
            h = tuple(norm(v) for v in self.table.weight_values(sym[1][1]))
        else:
            h = (0,) * self.table.rank
        return ToroidalWeight(h, zero_k, m)

    # -- automorphisms ----------------------------------------------------

    def _lambda_coords(self, lam) -> tuple:
        lam = tuple(lam)
        r = self.n - 1
        if len(lam) == 2 * r:
            if any(lam[:r]):
                raise ToroidalError("lambda must lie in span{d_1..d_{n-1}}; got delta-coordinates")
            return lam[r:]
        if len(lam) == r:
            return lam
        raise ToroidalError(f"lambda needs {r} d-coordinates")

    def b_lambda(self, lam, terms: dict) -> dict:
        """The automorphism B_lambda with e_i -> e_i + (lambda, delta_i) e_n."""
        ks = self._lambda_coords(lam)
        n = self.n
        out: dict = {}
        for sym, c in terms.items():
            if sym[0] == "d":
                i = sym[1]
                if i < n:
                    add_term(out, sym, c)
                else:
                    add_term(out, ("d", n), c)
                    for j in range(1, n):
                        add_term(out, ("d", j), -ks[j - 1] * c)
                continue
            m = sym[2]
            lm = sum(k * x for k, x in zip(ks, m))  # (lambda, delta_m)
            mm = m[:-1] + (m[-1] + lm,)
            if sym[0] == "g":
                add_term(out, ("g", sym[1], mm), c)
                continue
            i = sym[1]
            add_term(out, ("K", i, mm), c)
            if i < n:
                coef = lm if "intertwiner.b_lambda" in defects.active else ks[i - 1]
                add_term(out, ("K", n, mm), coef * c)
        return self.canonical(out)

    def b_lambda_matrix(self, lam) -> list:
        ks = self._lambda_coords(lam)
        B = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
        for i, k in enumerate(ks):
            B[i][self.n - 1] = k
        return B

    def gl_action(self, B, terms: dict) -> dict:
        """Action of an integer matrix B with det +-1, rows b_i = B e_i.

        t^m -> t^{Bm} with (Bm)_k = sum_i b_ik m_i, t^m K_i -> sum_k b_ik
        t^{Bm} K_k, and d_i -> sum_j ((B^T)^{-1})_ij d_j.
        """
        n = self.n
        Cinv = inverse([[B[j][i] for j in range(n)] for i in range(n)])
        out: dict = {}
        for sym, c in terms.items():
            if sym[0] == "d":
                i = sym[1]
                for j in range(n):
                    add_term(out, ("d", j + 1), Cinv[i - 1][j] * c)
                continue
            m = sym[2]
            bm = tuple(sum(B[i][k] * m[i] for i in range(n)) for k in range(n))
            if sym[0] == "g":
                add_term(out, ("g", sym[1], bm), c)
                continue
            i = sym[1]
            for k in range(n):
                add_term(out, ("K", k + 1, bm), B[i - 1][k] * c)
        return self.canonical(out)


def toroidal_bracket(tor: Toroidal, x: dict, y: dict) -> dict:
    return tor.bracket(x, y)


def b_lambda_auto(tor: Toroidal, lam, x: dict) -> dict:
    return tor.b_lambda(lam, x)


def weight_of(tor: Toroidal, x) -> ToroidalWeight:
    return tor.weight_of(x)


def verify_toroidal_algebra(tor: Toroidal, window: int = 1, samples: int = 4000, seed: int = 0,
                            lambdas=None) -> Report:
    """Super Jacobi on sampled triples, cocycle antisymmetry, weight additivity,
    B_lambda o B_{-lambda} = id and bracket preservation by B_lambda."""
    rep = Report(f"toroidal:{tor.table.name}:n={tor.n}")
    syms = tor.symbols_in_window(window)
    rng = random.Random(seed)
    for s1, s2 in itertools.combinations_with_replacement(syms, 2):
        p = tor.parity(s1) * tor.parity(s2)
        a = tor.bracket_symbols(s1, s2)
        b = tor.bracket_symbols(s2, s1)
        total = dict(a)
        add_into(total, b, 1 if not p else -1)
        rep.count("super-antisymmetry")
        if total:
            rep.fail("super-antisymmetry", f"{sym_name(s1)}, {sym_name(s2)}", elem_str(total))
        if a:
            rep.count("weight-additivity")
            try:
                w = tor.weight_of(a)
            except ToroidalError:
                rep.fail("weight-additivity", f"{sym_name(s1)}, {sym_name(s2)}", "inhomogeneous")
                continue
            if w != tor._symbol_weight(s1) + tor._symbol_weight(s2):
                rep.fail("weight-additivity", f"{sym_name(s1)}, {sym_name(s2)}")
    for _ in range(samples):
        x, y, z = (rng.choice(syms) for _ in range(3))
        px, py = tor.parity(x), tor.parity(y)
        X, Y, Z = {x: 1}, {y: 1}, {z: 1}
        lhs = tor.bracket(tor.bracket(X, Y), Z)
        rhs = tor.bracket(X, tor.bracket(Y, Z))
        add_into(rhs, tor.bracket(Y, tor.bracket(X, Z)), -1 if not (px and py) else 1)
        rep.count("super-jacobi")
        if lhs != {k: norm(v) for k, v in rhs.items()}:
            rep.fail("super-jacobi", f"{sym_name(x)}, {sym_name(y)}, {sym_name(z)}")
    if lambdas is None:
        lambdas = [tuple(int(i == 0) for i in range(tor.n - 1)),
                   tuple(2 * int(i == 0) for i in range(tor.n - 1))]
        if tor.n > 2:
            lambdas.append(tuple(1 for _ in range(tor.n - 1)))
    for lam in lambdas:
        neg = tuple(-k for k in lam)
        for s in syms:
            rep.count("b-lambda-inverse")
            back = tor.b_lambda(neg, tor.b_lambda(lam, {s: 1}))
            if back != tor.canonical({s: 1}):
                rep.fail("b-lambda-inverse", f"lambda={lam} {sym_name(s)}", elem_str(back))
            rep.count("b-lambda-matrix")
            if tor.b_lambda(lam, {s: 1}) != tor.gl_action(tor.b_lambda_matrix(lam), {s: 1}):
                rep.fail("b-lambda-matrix", f"lambda={lam} {sym_name(s)}")
        for _ in range(samples // 4):
            x, y = rng.choice(syms), rng.choice(syms)
            lhs = tor.b_lambda(lam, tor.bracket({x: 1}, {y: 1}))
            rhs = tor.bracket(tor.b_lambda(lam, {x: 1}), tor.b_lambda(lam, {y: 1}))
            rep.count("b-lambda-automorphism")
            if lhs != rhs:
                rep.fail("b-lambda-automorphism", f"lambda={lam} {sym_name(x)}, {sym_name(y)}")
    return rep
