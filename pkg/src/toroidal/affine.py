"""The affine superalgebra g_aff and truncated Verma modules over it.

Generators are ``(symbol, k)`` for x (x) t_n^k with ``symbol`` an algebra
basis symbol, plus the central element ``KN`` and the degree derivation
``DBAR``.  A Verma module vector is a dict from PBW monomials (sorted tuples
of negative generators) to scalars; the empty monomial is the highest-weight
vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import defects
from .algebra import AlgebraTable, sym_str
from .linear import Q, Scalar, add_into, add_term, norm, nullspace, row_reduce
from .report import Report

KN = ("K",)
DBAR = ("dbar",)


class AffineError(ValueError):
    pass


def gen_str(g) -> str:
    if g == KN:
        return "K_n"
    if g == DBAR:
        return "dbar_n"
    return f"{sym_str(g[0])}[{g[1]}]"


def mono_str(mono) -> str:
    return " ".join(gen_str(g) for g in mono) + " v" if mono else "v"


def affine_bracket(table: AlgebraTable, g1, g2) -> dict:
    """[x (x) t^m, y (x) t^k] = [x,y] (x) t^{m+k} + (x,y) m delta_{m+k,0} K_n."""
    if g1 == KN or g2 == KN:
        return {}
    if g1 == DBAR and g2 == DBAR:
        return {}
    if g1 == DBAR:
        return {g2: g2[1]} if g2[1] else {}
    if g2 == DBAR:
        return {g1: -g1[1]} if g1[1] else {}
    (x, m), (y, k) = g1, g2
    out = {(s, m + k): c for s, c in table.bracket_terms(x, y).items()}
    if m + k == 0 and m:
        mm = m + 1 if "affine.central" in defects.active else m
        add_term(out, KN, table.form_value(x, y) * mm)
    return out


def generator_parity(table: AlgebraTable, g) -> int:
    if g == KN or g == DBAR:
        return 0
    return table.parity[g[0]]


@dataclass(eq=False)
class AffineModule:
    """Verma module M(lambda, K, P) for g_aff, with enumeration caps.

    ``weight`` lists lambda(H(i)); ``level`` is the scalar K by which K_n acts
    and ``P`` the dbar_n eigenvalue on the highest-weight vector.  ``depth``
    caps the t_n-depth of enumerated bases and ``zero_modes`` caps the number
    of degree-0 factors; neither cap affects individual operator applications.
    """

    table: AlgebraTable
    weight: tuple
    level: Scalar = 1
    P: Scalar = 0
    depth: int = 4
    zero_modes: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)
    _epoch: int = field(default=-1, repr=False)

    def __post_init__(self):
        self.weight = tuple(norm(Q(w)) for w in self.weight)
        self.level = norm(Q(self.level))
        self.P = norm(Q(self.P))
        if self.level == 0:
            raise AffineError("level K must be nonzero")
        if len(self.weight) != self.table.rank:
            raise AffineError(f"highest weight needs {self.table.rank} entries")
        if self.depth < 0:
            raise AffineError("depth cap must be >= 0")
        if self.zero_modes is None:
            self.zero_modes = self.depth
        syms = self.table.symbols
        self._order = {s: i for i, s in enumerate(syms)}
        self._neg_roots = tuple(
            s for s in syms if s[0] == "X" and sum(s[1]) < 0
        )

    # -- generators -------------------------------------------------------

    def is_negative(self, g) -> bool:
        if g == KN or g == DBAR:
            return False
        s, k = g
        return k < 0 or (k == 0 and s[0] == "X" and sum(s[1]) < 0)

    def parity(self, g) -> int:
        return generator_parity(self.table, g)

    def root_of(self, g) -> tuple:
        if g == KN or g == DBAR or g[0][0] == "H":
            return (0,) * self.table.rank
        return g[0][1]

    def mono_offset(self, mono) -> tuple:
        r = [0] * self.table.rank
        for g in mono:
            if g[0][0] == "X":
                for i, c in enumerate(g[0][1]):
                    r[i] += c
        return tuple(r)

    @staticmethod
    def mono_depth(mono) -> int:
        return -sum(g[1] for g in mono)

    def h_weight(self, mono) -> tuple:
        off = self.table.weight_values(self.mono_offset(mono))
        return tuple(norm(a + b) for a, b in zip(self.weight, off))

    def dbar_eigenvalue(self, mono):
        return norm(self.P - self.mono_depth(mono))

    def _key(self, g):
        return (g[1], self._order[g[0]])

    # -- action -----------------------------------------------------------

    def _check_epoch(self):
        if self._epoch != defects.epoch:
            self._cache.clear()
            self._epoch = defects.epoch

    def act_mono(self, g, mono) -> dict:
        self._check_epoch()
        key = (g, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._act(g, mono)
        self._cache[key] = out
        return out

    def _act(self, g, mono) -> dict:
        if g == KN:
            return {mono: self.level}
        if g == DBAR:
            v = self.dbar_eigenvalue(mono)
            return {mono: v} if v else {}
        neg = self.is_negative(g)
        if not mono:
            if neg:
                return {(g,): 1}
            s, k = g
            if k == 0 and s[0] == "H":
                lam = self.weight[s[1] - 1]
                return {(): lam} if lam else {}
            return {}
        y, rest = mono[0], mono[1:]
        if neg:
            kg, ky = self._key(g), self._key(y)
            if kg < ky or (g == y and not self.parity(g)):
                return {(g,) + mono: 1}
            if g == y:
                # odd x: x x = [x, x] / 2
                half = {h: Q(c, 2) for h, c in affine_bracket(self.table, g, g).items()}
                return self.act_vec_gens(half, rest)
        sign = -1 if self.parity(g) and self.parity(y) else 1
        out: dict = {}
        inner = self.act_mono(g, rest)
        for m, c in inner.items():
            add_into(out, self.act_mono(y, m), sign * c)
        add_into(out, self.act_vec_gens(affine_bracket(self.table, g, y), rest))
        return out

    def act_vec_gens(self, gens: dict, mono) -> dict:
        out: dict = {}
        for h, c in gens.items():
            add_into(out, self.act_mono(h, mono), c)
        return out

    def act(self, g, vec: dict) -> dict:
        """Apply one generator to a vector (dict monomial -> scalar)."""
        out: dict = {}
        for m, c in vec.items():
            add_into(out, self.act_mono(g, m), c)
        return {k: norm(v) for k, v in out.items()}

    def act_word(self, word, vec: dict) -> dict:
        """Apply generators right to left: word = (g1, ..., gr) gives g1 ... gr v."""
        for g in reversed(word):
            vec = self.act(g, vec)
        return vec

    def highest(self) -> dict:
        return {(): 1}

    def positive_bound(self, vec: dict) -> int:
        """Every positive-degree generator x_k with k above this kills ``vec``."""
        return max((self.mono_depth(m) for m in vec), default=-1)

    # -- bases ------------------------------------------------------------

    def negative_generators(self, max_depth: int):
        gens = []
        for k in range(-max_depth, 1):
            for s in self.table.symbols:
                g = (s, k)
                if self.is_negative(g):
                    gens.append(g)
        return sorted(gens, key=self._key)

    def basis(self, depth: int | None = None, zero_modes: int | None = None) -> list:
        """PBW monomials of t-depth <= depth with <= zero_modes degree-0 factors."""
        D = self.depth if depth is None else depth
        Z = self.zero_modes if zero_modes is None else zero_modes
        gens = self.negative_generators(D)
        out = []

        def rec(start, d, z, acc):
            out.append(tuple(acc))
            for j in range(start, len(gens)):
                g = gens[j]
                dg = -g[1]
                if d + dg > D or (dg == 0 and z + 1 > Z):
                    continue
                nxt = j + 1 if self.parity(g) else j
                acc.append(g)
                rec(nxt, d + dg, z + (dg == 0), acc)
                acc.pop()

        rec(0, 0, 0, [])
        return sorted(out, key=lambda m: (self.mono_depth(m), len(m), [self._key(g) for g in m]))

    def weight_space(self, offset, depth: int) -> list:
        """All PBW monomials with root offset ``offset`` and t-depth ``depth``."""
        offset = tuple(offset)
        loops = [g for g in self.negative_generators(depth) if g[1] < 0]
        zeros = sorted(((s, 0) for s in self._neg_roots), key=self._key)
        out = []

        def zero_part(start, remaining, acc):
            if not any(remaining):
                out.append(tuple(sorted(acc, key=self._key)))
                return
            if any(c > 0 for c in remaining):
                return
            for j in range(start, len(zeros)):
                g = zeros[j]
                root = g[0][1]
                nxt = tuple(a - b for a, b in zip(remaining, root))
                if any(c > 0 for c in nxt):
                    continue
                acc.append(g)
                zero_part(j + 1 if self.parity(g) else j, nxt, acc)
                acc.pop()

        def loop_part(start, d, acc):
            if d == depth:
                rem = list(offset)
                for g in acc:
                    for i, c in enumerate(self.root_of(g)):
                        rem[i] -= c
                zero_part(0, tuple(rem), list(acc))
                return
            for j in range(start, len(loops)):
                g = loops[j]
                dg = -g[1]
                if d + dg > depth:
                    continue
                acc.append(g)
                loop_part(j + 1 if self.parity(g) else j, d + dg, acc)
                acc.pop()

        loop_part(0, 0, [])
        return sorted(set(out), key=lambda m: [self._key(g) for g in m])

    # -- irreducible quotient ---------------------------------------------

    def raising_generators(self) -> list:
        """Chevalley raising generators of g_aff: X_0(alpha_i) and X_1(-theta)."""
        gens = [(("X", a), 0) for a in self.table.simple_roots]
        theta = self.table.highest_root
        gens.append((("X", tuple(-c for c in theta)), 1))
        return gens

    def _gen_shift(self, g):
        return self.root_of(g), g[1]

    def quotient_functionals(self, offset, depth: int) -> tuple:
        """(basis, rows): rows are functionals whose common kernel is the
        maximal submodule restricted to the (offset, depth) weight space."""
        key = ("qf", tuple(offset), depth)
        self._check_epoch()
        if key in self._cache:
            return self._cache[key]
        basis = self.weight_space(offset, depth)
        if not basis:
            self._cache[key] = (basis, [])
            return self._cache[key]
        if depth == 0 and not any(offset):
            res = (basis, [[1]])
            self._cache[key] = res
            return res
        rows = []
        for g in self.raising_generators():
            root, k = self._gen_shift(g)
            t_off = tuple(a + b for a, b in zip(offset, root))
            t_depth = depth - k
            if t_depth < 0:
                continue
            t_basis, t_rows = self.quotient_functionals(t_off, t_depth)
            if not t_basis or not t_rows:
                continue
            idx = {m: i for i, m in enumerate(t_basis)}
            images = [self.act_mono(g, m) for m in basis]
            for fr in t_rows:
                rows.append([
                    sum(fr[idx[mm]] * c for mm, c in img.items()) for img in images
                ])
        red, _ = row_reduce(rows) if rows else ([], [])
        res = (basis, [[norm(x) for x in r] for r in red])
        self._cache[key] = res
        return res

    def irreducible_dim(self, offset, depth: int) -> int:
        return len(self.quotient_functionals(offset, depth)[1])

    def is_zero_in_quotient(self, vec: dict) -> bool:
        """True iff ``vec`` lies in the maximal proper submodule."""
        groups: dict = {}
        for m, c in vec.items():
            groups.setdefault((self.mono_offset(m), self.mono_depth(m)), {})[m] = c
        for (off, d), part in groups.items():
            basis, rows = self.quotient_functionals(off, d)
            idx = {m: i for i, m in enumerate(basis)}
            for r in rows:
                if sum(r[idx[m]] * c for m, c in part.items()):
                    return False
        return True

    def singular_vectors(self, offset, depth: int) -> list:
        """Basis of vectors in the weight space killed by every raising generator."""
        basis = self.weight_space(offset, depth)
        index = {}
        cols = []
        for m in basis:
            col = {}
            for g in self.raising_generators():
                for mm, c in self.act_mono(g, m).items():
                    key = (g, mm)
                    if key not in index:
                        index[key] = len(index)
                    col[index[key]] = c
            cols.append(col)
        mat = [[cols[j].get(i, 0) for j in range(len(basis))] for i in range(len(index))]
        null = nullspace(mat, len(basis))
        return [{basis[j]: c for j, c in enumerate(v) if c} for v in null]


def build_highest_weight_module(table, weight, level=1, P=0, depth=4, zero_modes=None) -> AffineModule:
    return AffineModule(table, tuple(weight), level, P, depth, zero_modes)


# ---------------------------------------------------------------------------
# relations A(1)-A(3), written from the Chevalley data independently of the
# straightening bracket


def relation_rhs(table: AlgebraTable, g1, g2) -> dict:
    if KN in (g1, g2):
        return {}
    if g1 == DBAR or g2 == DBAR:
        if g1 == g2:
            return {}
        sign, g = (1, g2) if g1 == DBAR else (-1, g1)
        return {g: sign * g[1]} if g[1] else {}
    (x, m), (y, k) = g1, g2
    if x[0] == "X" and y[0] == "X":
        a, b = x[1], y[1]
        s = tuple(p + q for p, q in zip(a, b))
        if any(s):
            if not table.is_root(s):
                return {}
            N = table.bracket_terms(x, y).get(("X", s), 0)
            return {(("X", s), m + k): N} if N else {}
        out = {(h, m + k): table.sigma[a] * c for h, c in table.coroot(a).items()}
        if m + k == 0 and m:
            add_term(out, KN, table.form_value(x, y) * m)
        return out
    if x[0] == "H" and y[0] == "X":
        val = table.weight_values(y[1])[x[1] - 1]
        return {(y, m + k): val} if val else {}
    if x[0] == "X" and y[0] == "H":
        val = table.weight_values(x[1])[y[1] - 1]
        return {(x, m + k): -val} if val else {}
    out = {}
    if m + k == 0 and m:
        add_term(out, KN, table.form_value(x, y) * m)
    return out


def affine_generators(table: AlgebraTable, window: int) -> list:
    gens = [(s, k) for k in range(-window, window + 1) for s in table.symbols]
    return gens + [KN, DBAR]


def verify_affine_relations(module: AffineModule, window: int, sample=None) -> Report:
    """Check [g1,g2] v = g1 g2 v - (-1)^{|g1||g2|} g2 g1 v on every sample vector."""
    table = module.table
    rep = Report(f"affine:{table.name}")
    if sample is None:
        sample = module.basis()
    gens = affine_generators(table, window)
    for v in sample:
        vec = {v: 1} if isinstance(v, tuple) else v
        label = mono_str(v) if isinstance(v, tuple) else "vector"
        one = {g: module.act(g, vec) for g in gens}
        for g1, g2 in itertools.combinations_with_replacement(gens, 2):
            p = generator_parity(table, g1) * generator_parity(table, g2)
            lhs = {}
            for m, c in one[g2].items():
                add_into(lhs, module.act_mono(g1, m), c)
            for m, c in one[g1].items():
                add_into(lhs, module.act_mono(g2, m), -c if not p else c)
            rhs = module.act_vec_gens(relation_rhs(table, g1, g2), v) if isinstance(v, tuple) else {}
            if not isinstance(v, tuple):
                for h, c in relation_rhs(table, g1, g2).items():
                    add_into(rhs, module.act(h, vec), c)
            rep.count(_relation_name(g1, g2))
            if {k: norm(x) for k, x in lhs.items()} != {k: norm(x) for k, x in rhs.items()}:
                rep.fail(_relation_name(g1, g2), f"[{gen_str(g1)}, {gen_str(g2)}] on {label}")
    for v in sample:
        if isinstance(v, tuple):
            rep.count("level")
            if module.act_mono(KN, v) != {v: module.level}:
                rep.fail("level", mono_str(v))
    return rep


def _relation_name(g1, g2) -> str:
    if KN in (g1, g2) or DBAR in (g1, g2):
        return "A(central/derivation)"
    x, y = g1[0], g2[0]
    if x[0] == "X" and y[0] == "X":
        return "A(1)"
    if x[0] == "H" and y[0] == "H":
        return "A(3)"
    return "A(2)"


def verma_character(table: AlgebraTable, max_depth: int, min_height: int = -6) -> dict:
    """Weight multiplicities of a Verma module from the product formula.

    Coefficients of prod over negative generators g of (1 - e^{wt g})^{-1}
    (even) or (1 + e^{wt g}) (odd), keyed by (root offset, depth).  Exact
    for depth <= ``max_depth`` and root height >= ``min_height``.
    """
    rank = table.rank
    theta_ht = sum(table.highest_root)
    # loop factors raise the height by at most depth * theta_ht in total
    floor = min_height - max_depth * theta_ht
    factors = []
    for k in range(0, max_depth + 1):
        for s in table.symbols:
            if k == 0 and not (s[0] == "X" and sum(s[1]) < 0):
                continue
            root = s[1] if s[0] == "X" else (0,) * rank
            factors.append((root, k, table.parity[s]))

    def ok(off, d):
        return d <= max_depth and sum(off) >= floor

    series = {((0,) * rank, 0): 1}
    for root, k, odd in factors:
        new = dict(series)
        frontier = series
        while frontier:
            nxt: dict = {}
            for (off, d), c in frontier.items():
                key = (tuple(a + b for a, b in zip(off, root)), d + k)
                if ok(*key):
                    nxt[key] = nxt.get(key, 0) + c
            for key, c in nxt.items():
                new[key] = new.get(key, 0) + c
            frontier = {} if odd else nxt
        series = new
    return {k: v for k, v in series.items() if sum(k[0]) >= min_height}
