"""Lattice Fock space V(Gamma, M) and Q-vertex operators, computed exactly.

Gamma has basis delta_1..delta_r, d_1..d_r (r = n - 1) with the hyperbolic
pairing <delta_i, d_j> = delta_ij.  A lattice element is an integer tuple of
length 2r: the delta-part followed by the d-part.  Heisenberg modes use the
same index set: index i < r is delta_{i+1}, index r + i is d_{i+1}.

A Fock basis monomial is ``(gamma, creators)`` where ``creators`` is a sorted
tuple of ``(index, k)`` meaning a(-k), k >= 1, with repetition.  Fock vectors
are dicts monomial -> scalar.  On V(Gamma) only delta-creators occur; the full
V(Gamma, b) allows d-creators as well.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from . import defects
from .linear import Q, add_into, add_term, norm
from .report import Report


class FockError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """Gamma for n toroidal variables (rank 2(n-1), hyperbolic, Q isotropic)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise FockError("need n >= 2 toroidal variables")

    @property
    def r(self) -> int:
        return self.n - 1

    @property
    def dim(self) -> int:
        return 2 * self.r

    def zero(self) -> tuple:
        return (0,) * self.dim

    def delta(self, i: int) -> tuple:
        """delta_i, 1-based."""
        return tuple(int(k == i - 1) for k in range(self.dim))

    def d(self, i: int) -> tuple:
        return tuple(int(k == self.r + i - 1) for k in range(self.dim))

    def element(self, deltas=(), ds=()) -> tuple:
        deltas = tuple(deltas) + (0,) * (self.r - len(deltas))
        ds = tuple(ds) + (0,) * (self.r - len(ds))
        return deltas + ds

    def delta_m(self, m) -> tuple:
        """delta_{m_} = sum_i m_i delta_i for the first n-1 entries of m."""
        return tuple(m[: self.r]) + (0,) * self.r

    def pair(self, a, b) -> int:
        r = self.r
        return sum(a[i] * b[r + i] + a[r + i] * b[i] for i in range(r))

    def in_Q(self, a) -> bool:
        return not any(a[self.r :])

    def pairing_matrix(self) -> list:
        basis = [tuple(int(k == j) for k in range(self.dim)) for j in range(self.dim)]
        return [[self.pair(a, b) for b in basis] for a in basis]

    def add(self, a, b) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, a, s) -> tuple:
        return tuple(s * x for x in a)

    def mode_name(self, idx: int) -> str:
        return f"delta{idx + 1}" if idx < self.r else f"d{idx - self.r + 1}"


def vacuum(lattice: Lattice, gamma=None) -> dict:
    """e^gamma (x) 1."""
    g = lattice.zero() if gamma is None else tuple(gamma)
    return {(g, ()): 1}


def degree(mono) -> int:
    """Heisenberg degree sum(k) of the creation part."""
    return sum(k for _, k in mono[1])


def max_degree(terms: dict) -> int:
    return max((degree(m) for m in terms), default=0)


def l0_eigenvalue(lattice: Lattice, mono):
    g = mono[0]
    return -(Q(lattice.pair(g, g), 2) + degree(mono))


# ---------------------------------------------------------------------------
# creator polynomials: dict sorted-tuple -> scalar


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            add_term(out, tuple(sorted(a + b)), ca * cb)
    return out


def _mode_poly(a, k: int) -> dict:
    """a(-k) as a creator polynomial (k >= 1)."""
    return {((i, k),): c for i, c in enumerate(a) if c}


@lru_cache(maxsize=None)
def _schur(a: tuple, p: int) -> tuple:
    if p < 0:
        return ()
    if p == 0:
        return (((), 1),)
    # p S_p = sum_{k=1..p} a(-k) S_{p-k}
    acc: dict = {}
    for k in range(1, p + 1):
        add_into(acc, _poly_mul(_mode_poly(a, k), dict(_schur(a, p - k))))
    return tuple(sorted((m, norm(Q(c) / p)) for m, c in acc.items()))


def schur_operator(p: int, a) -> dict:
    """S_p(a): degree-p coefficient of exp(sum_{k>0} a(-k) z^k / k)."""
    return dict(_schur(tuple(a), p))


def _apply_creators(poly: dict, terms: dict) -> dict:
    out: dict = {}
    for (g, u), c in terms.items():
        for m, cm in poly.items():
            add_term(out, (g, tuple(sorted(u + m)) if m else u), c * cm)
    return out


def _annihilate(lattice: Lattice, a, m: int, terms: dict) -> dict:
    """a(m), m > 0: derivation with b(-k) -> delta_{mk} m <a, b>."""
    r = lattice.r
    f = 1 if "fock.annihilator" in defects.active else m
    out: dict = {}
    for (g, u), c in terms.items():
        seen = set()
        for pos, (idx, k) in enumerate(u):
            if k != m or (idx, k) in seen:
                continue
            seen.add((idx, k))
            # <a, e_idx>: a delta-mode pairs with the d-part of a and vice versa
            w = a[idx + r] if idx < r else a[idx - r]
            if not w:
                continue
            mult = u.count((idx, k))
            rest = u[:pos] + u[pos + 1 :]
            add_term(out, (g, rest), c * f * w * mult)
    return out


def heisenberg_act(lattice: Lattice, a, m: int, terms: dict) -> dict:
    """Action of a(m) (a in p = C (x) Gamma) on a Fock vector."""
    a = tuple(a)
    if m < 0:
        return _apply_creators(_mode_poly(a, -m), terms)
    if m == 0:
        out: dict = {}
        for (g, u), c in terms.items():
            add_term(out, (g, u), c * lattice.pair(g, a))
        return out
    return _annihilate(lattice, a, m, terms)


def central_act(terms: dict) -> dict:
    """c acts as the identity."""
    return dict(terms)


def _exp_plus_series(lattice: Lattice, a, u) -> list:
    """[P_q u for q = 0..deg u] as creator dicts, P_q the z^{-q} coefficient
    of exp T_+(a, z)."""
    key = (lattice.n, a, u)
    hit = _PCACHE.get(key)
    if hit is None:
        hit = _PCACHE[key] = _exp_plus_uncached(lattice, a, u)
    return hit


_PCACHE: dict = {}


def _exp_plus_uncached(lattice: Lattice, a, u) -> list:
    # T_+ is a sum of derivations sending each creator b(-k) to a scalar, so
    # exp T_+ maps prod b_j(-k_j) to prod (b_j(-k_j) - <a, b_j> z^{-k_j});
    # expand per distinct creator with a binomial count
    r = lattice.r
    D = sum(k for _, k in u)
    P = [dict() for _ in range(D + 1)]
    P[0][()] = 1
    for x, mult in Counter(u).items():
        idx, k = x
        w = a[idx + r] if idx < r else a[idx - r]
        picks = range(mult + 1) if w else (0,)
        nxt = [dict() for _ in range(D + 1)]
        for q, Pq in enumerate(P):
            for rest, c in Pq.items():
                for j in picks:
                    add_term(nxt[q + k * j], rest + (x,) * (mult - j), c * comb(mult, j) * (-w) ** j)
        P = nxt
    return [{tuple(sorted(k)): v for k, v in Pq.items() if v} for Pq in P]


def _vertex_creators(lattice: Lattice, a: tuple, s: int, u: tuple) -> dict:
    """Creator part of X_m(a)(e^gamma (x) u) with s = m + (gamma, a); the
    lattice part is always e^{gamma + a}, so gamma enters only through s."""
    if s > sum(k for _, k in u):
        return {}
    r = lattice.r
    if any(idx >= r for idx, _ in u):
        series = _exp_plus_series(lattice, a, u)
    else:
        series = ({u: 1},)
    out: dict = {}
    for q, Pq in enumerate(series):
        p = q - s
        if p < 0 or not Pq:
            continue
        S = _schur(a, p)
        for uu, c in Pq.items():
            for mm, cm in S:
                add_term(out, tuple(sorted(uu + mm)) if mm else uu, c * cm)
    return {k: v for k, v in out.items() if v}


def vertex_mono(lattice: Lattice, a: tuple, m: int, mono) -> dict:
    """X_m(a) on one basis monomial; ``a`` must lie in Q."""
    g, u = mono
    target = tuple(x + y for x, y in zip(g, a))
    img = _vertex_creators(lattice, tuple(a), m + lattice.pair(a, g), u)
    return {(target, uu): c for uu, c in img.items()}


def vertex_bound(lattice: Lattice, a, terms: dict) -> int:
    """Largest m with X_m(a) possibly nonzero on ``terms`` (annihilation bound)."""
    return max((degree(mono) - lattice.pair(a, mono[0]) for mono in terms), default=-(10**9))


def vertex_creators(lattice: Lattice, a: tuple, s: int, u: tuple) -> dict:
    """Cached creator part of X_m(a)(e^gamma (x) u) with s = m + (gamma, a)."""
    key = (lattice.n, a, s, u)
    img = _VCACHE.get(key)
    if img is None:
        img = _VCACHE[key] = _vertex_creators(lattice, a, s, u)
    return img


def vertex_coefficient_act(lattice: Lattice, a, m: int, terms: dict) -> dict:
    """X_m(a) v: the z^{-m} coefficient of the vertex operator X(a, z)."""
    a = tuple(a)
    if not lattice.in_Q(a):
        raise FockError(f"vertex operators are only defined for a in Q, got {a}")
    out: dict = {}
    n = lattice.n
    r = n - 1
    ad = a[:r]
    get = _VCACHE.get
    for (g, u), c in terms.items():
        # a in Q pairs only with the d-part of gamma
        s = m + sum(x * y for x, y in zip(ad, g[r:]))
        img = get((n, a, s, u))
        if img is None:
            img = vertex_creators(lattice, a, s, u)
        if not img:
            continue
        target = tuple(x + y for x, y in zip(g, a))
        for uu, cu in img.items():
            k = (target, uu)
            v = out.get(k, 0) + c * cu
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


_VCACHE: dict = {}


def t_operator_act(lattice: Lattice, h, a, k: int, terms: dict) -> dict:
    """T^h_k(a) v, the z^{-k-1} coefficient of h^-(z) X(a,z) + X(a,z) h^+(z)."""
    h, a = tuple(h), tuple(a)
    if not lattice.in_Q(a):
        raise FockError(f"vertex operators are only defined for a in Q, got {a}")
    out: dict = {}
    for mono, c in terms.items():
        add_into(out, _t_cached(lattice, h, a, k, mono), c)
    return out


_TCACHE: dict = {}


def _t_cached(lattice, h, a, k, mono):
    key = (lattice.n, h, a, k, mono)
    r = _TCACHE.get(key)
    if r is not None:
        return r
    v = {mono: 1}
    out: dict = {}
    D = degree(mono)
    # j >= 0: X_{k-j}(a) h(j) v, h(j) v = 0 once j exceeds the degree
    for j in range(0, D + 1):
        hv = heisenberg_act(lattice, h, j, v)
        if hv:
            add_into(out, vertex_coefficient_act(lattice, a, k - j, hv))
    # j < 0: h(j) X_{k-j}(a) v, X_{k-j} v = 0 when k - j > D - (a, gamma)
    top = D - lattice.pair(a, mono[0])
    for j in range(-1, k - top - 1, -1):
        xv = vertex_coefficient_act(lattice, a, k - j, v)
        if xv:
            add_into(out, heisenberg_act(lattice, h, j, xv))
    _TCACHE[key] = out
    return out


def l0_act(lattice: Lattice, terms: dict) -> dict:
    out: dict = {}
    for mono, c in terms.items():
        add_term(out, mono, c * l0_eigenvalue(lattice, mono))
    return {k: norm(v) for k, v in out.items()}


def clear_caches() -> None:
    _VCACHE.clear()
    _TCACHE.clear()
    _PCACHE.clear()
    _schur.cache_clear()


defects.register_cache(clear_caches)


# ---------------------------------------------------------------------------
# bases


def creator_monomials(lattice: Lattice, depth: int, full: bool = False):
    """All creator tuples of Heisenberg degree <= depth.

    ``full`` selects V(Gamma, b) (delta- and d-modes); otherwise V(Gamma)
    (delta-modes only).
    """
    nmodes = lattice.dim if full else lattice.r
    parts = [(i, k) for k in range(1, depth + 1) for i in range(nmodes)]
    out = [()]

    def rec(start, remaining, acc):
        for j in range(start, len(parts)):
            i, k = parts[j]
            if k <= remaining:
                nxt = acc + ((i, k),)
                out.append(tuple(sorted(nxt)))
                rec(j, remaining - k, nxt)

    rec(0, depth, ())
    return sorted(set(out), key=lambda u: (sum(k for _, k in u), u))


def lattice_box(lattice: Lattice, radius: int) -> list:
    rng = range(-radius, radius + 1)
    return [tuple(c) for c in itertools.product(rng, repeat=lattice.dim)]


def fock_basis(lattice: Lattice, gammas, depth: int, full: bool = False) -> list:
    us = creator_monomials(lattice, depth, full)
    return [(tuple(g), u) for g in gammas for u in us]


def colored_partition_counts(colors: int, upto: int) -> list:
    """Coefficients of prod_k (1 - q^k)^(-colors), by polynomial multiplication."""
    series = [1] + [0] * upto
    for k in range(1, upto + 1):
        for _ in range(colors):
            for d in range(k, upto + 1):
                series[d] += series[d - k]
    return series


def mono_str(lattice: Lattice, mono) -> str:
    g, u = mono
    parts = []
    for i, c in enumerate(g):
        if c:
            parts.append(f"{c}*{lattice.mode_name(i)}")
    gs = "+".join(parts) or "0"
    us = "".join(f" {lattice.mode_name(i)}(-{k})" for i, k in u)
    return f"e^[{gs}] x{us or ' 1'}"


def sample_gammas(lattice: Lattice) -> list:
    """Lattice points used by the identity sweeps: 0, +-d_1 and points pairing
    nontrivially and with both signs against the Q-labels of sample_roots."""
    L = lattice
    if L.r == 1:
        pts = [L.zero(), L.delta(1), L.scale(L.delta(1), -1), L.d(1), L.scale(L.d(1), -1),
               L.add(L.delta(1), L.d(1)), L.add(L.scale(L.d(1), 2), L.scale(L.delta(1), -1))]
    else:
        pts = [L.zero(), L.delta(1), L.d(1), L.scale(L.d(1), -1), L.d(2),
               L.add(L.d(1), L.scale(L.d(2), -1)), L.add(L.delta(2), L.d(2))]
    return sorted(set(pts))


def sample_roots(lattice: Lattice) -> list:
    """Q-vectors used as vertex-operator labels in the sweeps."""
    L = lattice
    if L.r == 1:
        return [L.delta(1), L.scale(L.delta(1), -1), L.scale(L.delta(1), 2)]
    return [L.delta(1), L.scale(L.delta(2), -1), L.add(L.delta(1), L.delta(2))]


def _eq(a: dict, b: dict) -> bool:
    return {k: norm(v) for k, v in a.items() if v} == {k: norm(v) for k, v in b.items() if v}


def verify_fock_identities(
    lattice: Lattice, depth: int = 4, window: int = 2, gammas=None, full: bool = False, roots=None
) -> Report:
    """Commutator, derivative, product and Schur-expansion identities for
    Q-vertex operators on every basis monomial of Heisenberg degree <= depth.

    ``full`` sweeps V(Gamma, b) (delta- and d-creators), which is needed for
    d-modes to act inside the space; V(Gamma) is the delta-only subspace.
    """
    rep = Report(f"fock:n={lattice.n}")
    gammas = sample_gammas(lattice) if gammas is None else gammas
    basis = fock_basis(lattice, gammas, depth, full)
    roots = sample_roots(lattice) if roots is None else [tuple(a) for a in roots]
    modes = [tuple(int(k == j) for k in range(lattice.dim)) for j in range(lattice.dim)]
    X = lambda a, m, v: vertex_coefficient_act(lattice, a, m, v)
    for mono in basis:
        v = {mono: 1}
        wit = mono_str(lattice, mono)
        for a in roots:
            top = vertex_bound(lattice, a, v)
            ms = range(top - window - 1, top + 2)
            xs = {m: X(a, m, v) for m in range(top - 2 * window - 3, top + window + 3)}
            for m in ms:
                # [b(k), X_m(a)] = <b, a> X_{m+k}(a)
                for b in modes:
                    for k in range(-window, window + 1):
                        lhs = heisenberg_act(lattice, b, k, xs[m])
                        add_into(lhs, X(a, m, heisenberg_act(lattice, b, k, v)), -1)
                        rhs = {key: c * lattice.pair(b, a) for key, c in xs[m + k].items()}
                        rep.count("heisenberg-commutator")
                        if not _eq(lhs, rhs):
                            rep.fail("heisenberg-commutator", wit, f"b={b} k={k} a={a} m={m}")
                # T^a_m(a) = -m X_m(a)
                rep.count("t-derivative")
                t = t_operator_act(lattice, a, a, m, v)
                if not _eq(t, {key: -m * c for key, c in xs[m].items()}):
                    rep.fail("t-derivative", wit, f"a={a} m={m}")
                # -m X_m(a) = sum_j a(j) X_{m-j}(a); a(j) commutes with X(a, z)
                conv: dict = {}
                deg = max_degree(v)
                # a pairs trivially with the delta-creators of X(a), so a(j) vanishes for j > deg v
                for j in range(m - top, deg + 2):
                    xv = X(a, m - j, v)
                    if xv:
                        add_into(conv, heisenberg_act(lattice, a, j, xv))
                rep.count("log-derivative")
                if not _eq(conv, {key: -m * c for key, c in xs[m].items()}):
                    rep.fail("log-derivative", wit, f"a={a} m={m}")
                # [L0, X_m(a)] = m X_m(a)
                lhs = l0_act(lattice, xs[m])
                add_into(lhs, X(a, m, l0_act(lattice, v)), -1)
                rep.count("l0-grading")
                if not _eq(lhs, {key: m * c for key, c in xs[m].items()}):
                    rep.fail("l0-grading", wit, f"a={a} m={m}")
                for ib, b in enumerate(roots):
                    topb = vertex_bound(lattice, b, v)
                    # commutator is antisymmetric in (a, b): unordered pairs suffice
                    for k in range(topb - window, topb + 2) if ib >= roots.index(a) else ():
                        xb = X(b, k, v)
                        lhs = X(a, m, xb)
                        add_into(lhs, X(b, k, xs[m]), -1)
                        rep.count("vertex-commute")
                        if not _eq(lhs, {}):
                            rep.fail("vertex-commute", wit, f"a={a} m={m} b={b} k={k}")
                    # X(a, z) X(b, z) = X(a + b, z), componentwise
                    s = lattice.add(a, b)
                    prod: dict = {}
                    # X_j(a) sees only the creators of v, so j <= vertex_bound(a, v); one extra term kept
                    for j in range(m - topb, top + 2):
                        xb = X(b, m - j, v)
                        if xb:
                            add_into(prod, X(a, j, xb))
                    rep.count("vertex-product")
                    if not _eq(prod, X(s, m, v)):
                        rep.fail("vertex-product", wit, f"a={a} b={b} m={m}")
        for m in range(-window, window + 1):
            rep.count("zero-vertex")
            if not _eq(X(lattice.zero(), m, v), v if m == 0 else {}):
                rep.fail("zero-vertex", wit, f"m={m}")
    # three-case Schur expansion on e^gamma (x) 1, |coords| <= 3
    rng = range(-3, 4)
    for g in itertools.product(rng, repeat=lattice.dim):
        if lattice.dim > 2 and sum(abs(c) for c in g) > 3:
            continue
        v = vacuum(lattice, g)
        for a in roots:
            ag = lattice.pair(a, g)
            for m in range(-ag - window - 1, -ag + window + 2):
                got = X(a, m, v)
                s = m + ag
                if s > 0:
                    want = {}
                elif s == 0:
                    want = vacuum(lattice, lattice.add(g, a))
                else:
                    want = {(lattice.add(g, a), u): c for u, c in schur_operator(-s, a).items()}
                rep.count("schur-cases")
                if not _eq(got, want):
                    rep.fail("schur-cases", f"e^{g}", f"a={a} m={m}")
    return rep
