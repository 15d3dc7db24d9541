"""Finite-dimensional basic classical Lie (super)algebras as structure tables.

Basis symbols are ``("H", i)`` for the Cartan basis (1-based) and
``("X", coords)`` for root vectors, with ``coords`` the root written in the
simple-root basis.  Tuples compare totally, which fixes the canonical order
of sparse terms.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources

from .linear import add_into, determinant, fmt_scalar, norm, parse_scalar, rank, solve
from .report import Report

SHIPPED = {"sl2": "sl2.txt", "sl3": "sl3.txt", "osp(1|2)": "osp12.txt"}


class AlgebraError(ValueError):
    pass


def sym_str(s) -> str:
    if s[0] == "H":
        return f"H{s[1]}"
    return "X(" + ",".join(str(c) for c in s[1]) + ")"


_SYM_RE = re.compile(r"^(?:H(\d+)|X\((-?\d+(?:,-?\d+)*)\))$")


def parse_sym(tok: str):
    m = _SYM_RE.match(tok)
    if not m:
        raise AlgebraError(f"bad basis symbol {tok!r}")
    if m.group(1) is not None:
        return ("H", int(m.group(1)))
    return ("X", tuple(int(c) for c in m.group(2).split(",")))


@dataclass(frozen=True)
class Root:
    coords: tuple[int, ...]
    parity: int
    norm: Fraction

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def positive(self) -> bool:
        return self.height > 0


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    """Structure constants, parities, sigma signs and invariant form."""

    name: str
    rank: int
    parity: dict  # symbol -> 0 | 1
    brackets: dict  # (symbol, symbol) -> {symbol: scalar}
    form: dict  # (symbol, symbol) -> scalar
    sigma: dict  # root coords -> +1 | -1
    source: str = field(default="", repr=False)

    # -- basic data -------------------------------------------------------

    @cached_property
    def symbols(self) -> tuple:
        return tuple(sorted(self.parity))

    @cached_property
    def cartan(self) -> tuple:
        return tuple(s for s in self.symbols if s[0] == "H")

    @cached_property
    def root_coords(self) -> tuple:
        return tuple(s[1] for s in self.symbols if s[0] == "X")

    @cached_property
    def is_super(self) -> bool:
        return any(self.parity.values())

    def bracket_terms(self, a, b) -> dict:
        return self.brackets.get((a, b), {})

    def form_value(self, a, b):
        return self.form.get((a, b), 0)

    def is_root(self, coords) -> bool:
        return ("X", tuple(coords)) in self.parity

    # -- derived Cartan data ----------------------------------------------

    def root_value(self, coords, i: int):
        """alpha(H(i)) read off from [H(i), X(alpha)]."""
        x = ("X", tuple(coords))
        return self.bracket_terms(("H", i), x).get(x, 0)

    @cached_property
    def simple_root_values(self) -> tuple:
        """Row j: alpha_j(H(1..l)) for the j-th simple root."""
        rows = []
        for e in self.simple_roots:
            if not self.is_root(e):
                raise AlgebraError(f"{self.name}: simple root {e} missing from the table")
            rows.append(tuple(self.root_value(e, i) for i in range(1, self.rank + 1)))
        return tuple(rows)

    def weight_values(self, coords) -> tuple:
        """(sum c_j alpha_j)(H(i)) for i = 1..l."""
        rows = self.simple_root_values
        return tuple(
            norm(sum(c * rows[j][i] for j, c in enumerate(coords))) for i in range(self.rank)
        )

    @cached_property
    def gram(self) -> list:
        return [[self.form_value(a, b) for b in self.cartan] for a in self.cartan]

    def coroot(self, coords) -> dict:
        """H(alpha) as {("H", i): c}: the element with (H, H(alpha)) = alpha(H)."""
        vals = self.weight_values(coords)
        sol = solve(self.gram, list(vals))
        if sol is None:
            raise AlgebraError("form on h is degenerate")
        return {("H", i + 1): c for i, c in enumerate(sol) if c}

    def pairing(self, a, b):
        """(alpha, beta) = (H(alpha), H(beta)) for root-lattice coordinates."""
        ha, hb = self.coroot(a), self.coroot(b)
        return norm(sum(ca * cb * self.form_value(x, y) for x, ca in ha.items() for y, cb in hb.items()))

    @cached_property
    def roots(self) -> tuple:
        out = []
        for c in self.root_coords:
            out.append(Root(c, self.parity[("X", c)], self.pairing(c, c)))
        return tuple(out)

    @cached_property
    def highest_root(self) -> tuple:
        """Maximal even root theta (largest height among even roots)."""
        even = [r for r in self.roots if r.parity == 0]
        return max(even, key=lambda r: (r.height, r.coords)).coords

    @cached_property
    def simple_roots(self) -> tuple:
        return tuple(tuple(int(k == j) for k in range(self.rank)) for j in range(self.rank))

    def element(self, terms) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def basis_element(self, s) -> "AlgebraElement":
        if s not in self.parity:
            raise AlgebraError(f"{sym_str(s)} is not a basis symbol of {self.name}")
        return AlgebraElement(self, {s: 1})

    def X(self, *coords) -> "AlgebraElement":
        return self.basis_element(("X", tuple(coords)))

    def H(self, i: int) -> "AlgebraElement":
        return self.basis_element(("H", i))

    def to_text(self) -> str:
        lines = [f"name {self.name}", f"rank {self.rank}"]
        for s in self.cartan:
            lines.append(f"cartan {sym_str(s)}")
        for c in self.root_coords:
            par = "odd" if self.parity[("X", c)] else "even"
            lines.append(f"root {sym_str(('X', c))} {par} sigma {self.sigma[c]}")
        for (a, b), t in sorted(self.brackets.items()):
            if t:
                rhs = " + ".join(f"{fmt_scalar(v)} {sym_str(k)}" for k, v in sorted(t.items()))
                lines.append(f"bracket {sym_str(a)} {sym_str(b)} -> {rhs}")
        for (a, b), v in sorted(self.form.items()):
            if v:
                lines.append(f"form {sym_str(a)} {sym_str(b)} = {fmt_scalar(v)}")
        return "\n".join(lines) + "\n"


class AlgebraElement:
    """Sparse combination of basis symbols of one table."""

    __slots__ = ("table", "terms")

    def __init__(self, table: AlgebraTable, terms):
        self.table = table
        self.terms = {k: norm(v) for k, v in terms.items() if v}

    def parity(self):
        ps = {self.table.parity[s] for s in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def _check(self, other):
        if other.table is not self.table:
            raise AlgebraError(f"mixed algebras {self.table.name} and {other.table.name}")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.table, add_into(dict(self.terms), other.terms))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.table, add_into(dict(self.terms), other.terms, -1))

    def __mul__(self, s):
        return AlgebraElement(self.table, {k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.table is other.table and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{fmt_scalar(c)}*{sym_str(s)}" for s, c in sorted(self.terms.items()))


def bracket_terms(table: AlgebraTable, x: dict, y: dict) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            add_into(out, table.bracket_terms(a, b), ca * cb)
    return out


def form_terms(table: AlgebraTable, x: dict, y: dict):
    return norm(sum(ca * cb * table.form_value(a, b) for a, ca in x.items() for b, cb in y.items()))


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    return AlgebraElement(x.table, bracket_terms(x.table, x.terms, y.terms))


def invariant_form(x: AlgebraElement, y: AlgebraElement):
    x._check(y)
    return form_terms(x.table, x.terms, y.terms)


# ---------------------------------------------------------------------------
# parsing


def parse_table(text: str, source: str = "<string>") -> AlgebraTable:
    """Parse the plain-text table format; structural errors raise immediately."""
    name = None
    rank_ = None
    parity: dict = {}
    sigma: dict = {}
    brackets: dict = {}
    form: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            head = parts[0]
            if head == "name":
                name = " ".join(parts[1:])
            elif head == "rank":
                rank_ = int(parts[1])
            elif head == "cartan":
                s = parse_sym(parts[1])
                if s[0] != "H":
                    raise AlgebraError("cartan line needs an H symbol")
                parity[s] = 0
            elif head == "root":
                s = parse_sym(parts[1])
                if s[0] != "X" or parts[2] not in ("even", "odd") or parts[3] != "sigma":
                    raise AlgebraError("expected: root X(..) even|odd sigma +-1")
                parity[s] = int(parts[2] == "odd")
                sigma[s[1]] = int(parts[4])
            elif head == "bracket":
                a, b = parse_sym(parts[1]), parse_sym(parts[2])
                if parts[3] != "->":
                    raise AlgebraError("expected '->'")
                rhs = " ".join(parts[4:]).split("+")
                t: dict = {}
                for chunk in rhs:
                    c, s = chunk.split()
                    add_into(t, {parse_sym(s): parse_scalar(c)})
                if (a, b) in brackets:
                    raise AlgebraError(f"duplicate bracket {parts[1]} {parts[2]}")
                brackets[(a, b)] = t
            elif head == "form":
                a, b = parse_sym(parts[1]), parse_sym(parts[2])
                if parts[3] != "=":
                    raise AlgebraError("expected '='")
                form[(a, b)] = parse_scalar(parts[4])
            else:
                raise AlgebraError(f"unknown directive {head!r}")
        except (IndexError, ValueError) as exc:
            raise AlgebraError(f"{source}:{lineno}: malformed line {raw.strip()!r}: {exc}") from None
    if name is None or rank_ is None:
        raise AlgebraError(f"{source}: missing name or rank header")
    for (a, b), t in brackets.items():
        for s in (a, b, *t):
            if s not in parity:
                raise AlgebraError(f"{source}: bracket uses undeclared symbol {sym_str(s)}")
    for a, b in form:
        for s in (a, b):
            if s not in parity:
                raise AlgebraError(f"{source}: form uses undeclared symbol {sym_str(s)}")
    if sorted(s[1] for s in parity if s[0] == "H") != list(range(1, rank_ + 1)):
        raise AlgebraError(f"{source}: Cartan symbols must be H1..H{rank_}")
    for s in parity:
        if s[0] == "X" and len(s[1]) != rank_:
            raise AlgebraError(f"{source}: root {sym_str(s)} has wrong length")
    return AlgebraTable(name, rank_, parity, brackets, form, sigma, source)


def load_algebra(name: str, verify: bool = True) -> AlgebraTable:
    """Load a shipped table by name, or a user table from a file path."""
    if name in SHIPPED:
        text = resources.files("toroidal").joinpath("data", SHIPPED[name]).read_text()
        src = SHIPPED[name]
    else:
        try:
            with open(name) as fh:
                text = fh.read()
        except OSError:
            raise AlgebraError(
                f"unknown algebra {name!r} (shipped: {', '.join(SHIPPED)})"
            ) from None
        src = name
    table = parse_table(text, src)
    if verify:
        rep = verify_algebra(table)
        if not rep.ok:
            v = rep.violations[0]
            raise AlgebraError(f"{src}: {v.check} fails at {v.witness}: {v.detail}")
    return table


# ---------------------------------------------------------------------------
# verification


def _string_r(table: AlgebraTable, a, b) -> int:
    """Largest r with b - j*a a root for j = 1..r."""
    r = 0
    while True:
        c = tuple(y - (r + 1) * x for x, y in zip(a, b))
        if not table.is_root(c):
            return r
        r += 1


def verify_algebra(table: AlgebraTable) -> Report:
    """Exhaustively check the super Lie algebra, form and Chevalley axioms."""
    rep = Report("algebra:" + table.name)
    syms = table.symbols
    par = table.parity
    S = lambda s: sym_str(s)  # noqa: E731

    for a, b in itertools.product(syms, syms):
        t = table.bracket_terms(a, b)
        rep.count("parity")
        for s in t:
            if par[s] != (par[a] + par[b]) % 2:
                rep.fail("parity", f"({S(a)},{S(b)})", f"term {S(s)} has wrong parity")
        rep.count("antisymmetry")
        sign = -((-1) ** (par[a] * par[b]))
        other = {k: sign * v for k, v in table.bracket_terms(b, a).items()}
        if dict(t) != other:
            rep.fail("antisymmetry", f"({S(a)},{S(b)})", f"{t} vs {other}")

    for a, b, c in itertools.product(syms, syms, syms):
        rep.count("jacobi")
        lhs = bracket_terms(table, table.bracket_terms(a, b), {c: 1})
        rhs = bracket_terms(table, {a: 1}, table.bracket_terms(b, c))
        add_into(rhs, bracket_terms(table, {b: 1}, table.bracket_terms(a, c)), -((-1) ** (par[a] * par[b])))
        if lhs != rhs:
            rep.fail("jacobi", f"({S(a)},{S(b)},{S(c)})", f"lhs {lhs} rhs {rhs}")
        rep.count("form-invariance")
        l = form_terms(table, table.bracket_terms(a, b), {c: 1})
        r = form_terms(table, {a: 1}, table.bracket_terms(b, c))
        if l != r:
            rep.fail("form-invariance", f"({S(a)},{S(b)},{S(c)})", f"{l} != {r}")

    for a, b in itertools.product(syms, syms):
        rep.count("form-supersymmetry")
        if table.form_value(a, b) != (-1) ** (par[a] * par[b]) * table.form_value(b, a):
            rep.fail("form-supersymmetry", f"({S(a)},{S(b)})", "")
        rep.count("form-even")
        if par[a] != par[b] and table.form_value(a, b):
            rep.fail("form-even", f"({S(a)},{S(b)})", "nonzero across parities")

    rep.count("form-nondegenerate")
    full = [[table.form_value(a, b) for b in syms] for a in syms]
    if rank(full) != len(syms):
        rep.fail("form-nondegenerate", table.name, "form is degenerate on g")
    rep.count("form-h-rank")
    if determinant(table.gram) == 0:
        rep.fail("form-h-rank", table.name, "form restricted to h is degenerate")
        return rep

    # (b): Cartan acts diagonally with the root as eigenvalue
    for i, hi in enumerate(table.cartan, 1):
        for hj in table.cartan:
            rep.count("chevalley-b")
            if table.bracket_terms(hi, hj):
                rep.fail("chevalley-b", f"({S(hi)},{S(hj)})", "Cartan not abelian")
        for c in table.root_coords:
            rep.count("chevalley-b")
            x = ("X", c)
            t = table.bracket_terms(hi, x)
            if set(t) - {x} or t.get(x, 0) != table.weight_values(c)[i - 1]:
                rep.fail("chevalley-b", f"({S(hi)},{S(x)})", f"got {t}")

    for c in table.root_coords:
        x = ("X", c)
        neg = tuple(-v for v in c)
        rep.count("root-negation")
        if not table.is_root(neg):
            rep.fail("root-negation", S(x), "-alpha is not a root")
            continue
        rep.count("sigma")
        want = -1 if (par[x] == 1 and sum(c) < 0) else 1
        if table.sigma.get(c) != want:
            rep.fail("sigma", S(x), f"sigma {table.sigma.get(c)} expected {want}")
        rep.count("chevalley-c")
        t = table.bracket_terms(x, ("X", neg))
        expect = {k: v * table.sigma.get(c, 1) for k, v in table.coroot(c).items()}
        if dict(t) != expect:
            rep.fail("chevalley-c", f"({S(x)},{S(('X', neg))})", f"got {t} want {expect}")
        rep.count("root-norm")
        lin = sum(
            ci * cj * table.pairing(ei, ej)
            for ei, ci in zip(table.simple_roots, c)
            for ej, cj in zip(table.simple_roots, c)
            if ci and cj
        )
        if norm(lin) != table.pairing(c, c):
            rep.fail("root-norm", S(x), f"{lin} != {table.pairing(c, c)}")

    for a, b in itertools.product(table.root_coords, table.root_coords):
        s = tuple(p + q for p, q in zip(a, b))
        if not any(s):
            continue
        xa, xb = ("X", a), ("X", b)
        t = table.bracket_terms(xa, xb)
        rep.count("chevalley-d1")
        if not table.is_root(s):
            if t:
                rep.fail("chevalley-d1", f"({S(xa)},{S(xb)})", "nonzero but a+b is not a root")
            continue
        if set(t) - {("X", s)} or Fraction(t.get(("X", s), 0)).denominator != 1:
            rep.fail("chevalley-d1", f"({S(xa)},{S(xb)})", f"got {t}")
            continue
        N = t.get(("X", s), 0)
        na, nb = table.pairing(a, a), table.pairing(b, b)
        if na or nb:
            rep.count("chevalley-d2")
            r = _string_r(table, a, b)
            if abs(N) != r + 1:
                rep.fail("chevalley-d2", f"({S(xa)},{S(xb)})", f"|N|={abs(N)} but r+1={r + 1}")
        else:
            rep.count("chevalley-d3")
            hb = table.coroot(a)
            val = sum(cv * table.weight_values(b)[k[1] - 1] for k, cv in hb.items())
            if abs(N) != abs(val):
                rep.fail("chevalley-d3", f"({S(xa)},{S(xb)})", f"|N|={abs(N)} but |b(H(a))|={abs(val)}")

    rep.count("normalization")
    th = table.highest_root
    if table.pairing(th, th) != 2:
        rep.fail("normalization", sym_str(("X", th)), f"(theta,theta) = {table.pairing(th, th)}")
    return rep


def perturbed(table: AlgebraTable, a, b, sym, delta) -> AlgebraTable:
    """Copy of ``table`` with one ordered structure constant shifted (defect injection)."""
    br = {k: dict(v) for k, v in table.brackets.items()}
    t = br.setdefault((a, b), {})
    add_into(t, {sym: delta})
    return AlgebraTable(table.name + "*", table.rank, table.parity, br, table.form, table.sigma)
