"""The toroidal module V (x) V(Gamma): the action map, its verifiers, the
sector intertwiner, weight spaces, nilpotency probes and lifted module maps.

A tensor vector is a dict ``(affine_mono, fock_mono) -> scalar``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import defects
from .affine import AffineModule, affine_generators, gen_str, mono_str as amono_str, verma_character
from .fock import (
    Lattice,
    colored_partition_counts,
    creator_monomials,
    degree,
    l0_eigenvalue,
    mono_str as fmono_str,
    t_operator_act,
    vertex_bound,
    vertex_coefficient_act,
    vertex_creators,
)
from .linear import Q, add_into, add_term, norm, solve
from .report import Report
from .toroidal import Toroidal, ToroidalError, ToroidalWeight, elem_str, sym_name


class ActionError(ValueError):
    pass


def tensor(avec: dict, fvec: dict) -> dict:
    out: dict = {}
    for a, ca in avec.items():
        for f, cf in fvec.items():
            add_term(out, (a, f), ca * cf)
    return out


def tensor_str(lattice: Lattice, key) -> str:
    a, f = key
    return f"{amono_str(a)} (x) {fmono_str(lattice, f)}"


def vec_str(lattice: Lattice, v: dict, limit: int = 4) -> str:
    items = sorted(v.items(), key=lambda kv: repr(kv[0]))[:limit]
    s = " + ".join(f"{c}*[{tensor_str(lattice, k)}]" for k, c in items)
    return s + (" + ..." if len(v) > limit else "") if s else "0"


def clean(v: dict) -> dict:
    return {k: norm(c) for k, c in v.items() if c}


@dataclass(eq=False)
class ToroidalModule:
    """V (x) V(Gamma) for a restricted module V of nonzero level."""

    module: AffineModule
    n: int
    full_fock: bool = False
    _cache: dict = field(default_factory=dict, repr=False)
    _epoch: int = field(default=-1, repr=False)

    def __post_init__(self):
        if self.module.level == 0:
            raise ActionError("the action needs a nonzero level K")
        self.lattice = Lattice(self.n)
        self.tor = Toroidal(self.module.table, self.n)

    @property
    def K(self):
        return self.module.level

    # -- the action map ---------------------------------------------------

    def k_range(self, sym, key) -> tuple:
        """[lo, hi] containing every k with X_k (x) X_{m_n - k}(delta_m) nonzero on key."""
        a, f = key
        m = sym[2]
        delta = self.lattice.delta_m(m)
        lo = m[-1] - vertex_bound(self.lattice, delta, {f: 1})
        hi = AffineModule.mono_depth(a)
        return lo, hi

    def _pi_g(self, sym, key, ks=None) -> dict:
        a, f = key
        g, u = f
        _, s, m = sym
        L = self.lattice
        r = L.r
        delta = m[:r] + (0,) * r
        # X_{m_n - k}(delta) e^g (x) u = e^{g + delta} (x) (creators depending on m_n - k + (g, delta)),
        # zero once m_n - k + (g, delta) exceeds deg u; x_k a = 0 once k exceeds the depth of a
        shift = m[-1] + sum(x * y for x, y in zip(m[:r], g[r:]))
        if ks is None:
            ks = range(shift - sum(k for _, k in u), 1 - sum(k for _, k in a))
        target = tuple(x + y for x, y in zip(g, delta))
        out: dict = {}
        get = out.get
        act = self.module.act_mono
        for k in ks:
            av = act((s, k), a)
            if not av:
                continue
            img = vertex_creators(L, delta, shift - k, u)
            if not img:
                continue
            for b, cb in av.items():
                for uu, cu in img.items():
                    kk = (b, (target, uu))
                    out[kk] = get(kk, 0) + cb * cu
        return {kk: c for kk, c in out.items() if c}

    def _pi_symbol(self, sym, key) -> dict:
        a, f = key
        kind = sym[0]
        L = self.lattice
        if kind == "g":
            return self._pi_g(sym, key)
        if kind == "K":
            _, i, m = sym
            delta = L.delta_m(m)
            if i < self.n:
                if "action.central" in defects.active:
                    return {}
                fv = t_operator_act(L, L.delta(i), delta, m[-1], {f: 1})
            else:
                fv = vertex_coefficient_act(L, delta, m[-1], {f: 1})
            return {(a, ff): self.K * c for ff, c in fv.items()}
        i = sym[1]
        if i < self.n:
            c = f[0][i - 1]  # d_i(0) acts by (gamma, d_i)
        else:
            c = self.module.dbar_eigenvalue(a) + l0_eigenvalue(L, f)
        c = norm(c)
        return {key: c} if c else {}

    def _check_epoch(self):
        if self._epoch != defects.epoch:
            self._cache.clear()
            self._epoch = defects.epoch

    def pi_key(self, sym, key) -> dict:
        self._check_epoch()
        ck = (sym, key)
        hit = self._cache.get(ck)
        if hit is None:
            hit = self._cache[ck] = self._pi_symbol(sym, key)
        return hit

    def pi_symbol(self, sym, v: dict) -> dict:
        out: dict = {}
        for key, c in v.items():
            img = self.pi_key(sym, key)
            if img:
                add_into(out, img, c)
        return out

    def pi(self, x: dict, v: dict) -> dict:
        """pi(x) v for a toroidal element x (dict symbol -> scalar)."""
        out: dict = {}
        for sym, c in self.tor.canonical(x).items():
            add_into(out, self.pi_symbol(sym, v), c)
        return clean(out)

    def pi_act(self, x, v: dict) -> dict:
        if isinstance(x, tuple):
            x = {x: 1}
        return self.pi(x, v)

    # -- bases ------------------------------------------------------------

    def gammas(self, radius: int = 1, sector=None) -> list:
        """Sample lattice points: the d-part in [-radius, radius]^(n-1) (or the
        given sector) with delta-part 0 and +-delta_1."""
        L = self.lattice
        r = L.r
        if sector is None:
            dparts = list(itertools.product(range(-radius, radius + 1), repeat=r))
        else:
            dparts = [tuple(sector)]
        out = []
        for dp in dparts:
            for dl in ((0,) * r, L.delta(1)[:r]):
                out.append(tuple(dl) + tuple(dp))
        return out

    def basis(self, depth: int, gammas, zero_modes: int = 1) -> list:
        """Basis tensors with affine t-depth + Fock degree <= depth."""
        amonos = self.module.basis(depth, zero_modes)
        fus = creator_monomials(self.lattice, depth, self.full_fock)
        out = []
        for a in amonos:
            da = AffineModule.mono_depth(a)
            for g in gammas:
                for u in fus:
                    if da + sum(k for _, k in u) <= depth:
                        out.append((a, (tuple(g), u)))
        return out

    # -- grading ----------------------------------------------------------

    def weight(self, key) -> ToroidalWeight:
        """Eigenvalues of H(i), t^0 K_i and d_i on a basis tensor."""
        a, f = key
        g = f[0]
        r = self.n - 1
        h = self.module.h_weight(a)
        k = tuple(norm(self.K * g[r + i]) for i in range(r)) + (self.K,)
        d = tuple(g[:r]) + (norm(self.module.dbar_eigenvalue(a) + l0_eigenvalue(self.lattice, f)),)
        return ToroidalWeight(h, k, d)

    def sector_of(self, key) -> tuple:
        return tuple(key[1][0][self.n - 1 :])

    def sector_decompose(self, v: dict) -> dict:
        out: dict = {}
        for key, c in v.items():
            out.setdefault(self.sector_of(key), {})[key] = c
        return out


# ---------------------------------------------------------------------------
# the homomorphism sweep


def _pair_ok(tm: ToroidalModule, s1, s2, bracket, v, one, rows) -> tuple:
    sign = -1 if tm.tor.parity(s1) * tm.tor.parity(s2) else 1
    # pi(s1)pi(s2)v -+ pi(s2)pi(s1)v - pi([s1, s2])v
    diff: dict = {}
    get = diff.get
    for a, b, scale in ((s1, s2, 1), (s2, s1, -sign)):
        for key, row, c in rows[b]:
            img = row.get(a)
            if img is None:
                img = row[a] = tm.pi_key(a, key)
            c = c * scale
            for k2, c2 in img.items():
                diff[k2] = get(k2, 0) + c * c2
    for sym, c in bracket.items():
        img = one[sym] if sym in one else tm.pi_symbol(sym, v)
        for k2, c2 in img.items():
            diff[k2] = get(k2, 0) - c * c2
    diff = {k: c for k, c in diff.items() if c}
    return not diff, diff


def verify_toroidal_relations(tm: ToroidalModule, window: int, sample, symbols=None) -> Report:
    """pi(x)pi(y)v -+ pi(y)pi(x)v = pi([x,y])v for all unordered symbol pairs
    with exponents in the window and every sample basis tensor."""
    tor = tm.tor
    rep = Report(f"action:{tor.table.name}:n={tm.n}")
    syms = tor.symbols_in_window(window) if symbols is None else symbols
    brackets = {}
    for s1, s2 in itertools.combinations_with_replacement(syms, 2):
        brackets[(s1, s2)] = tor.bracket_symbols(s1, s2)
    tm._check_epoch()
    for key in sample:
        v = {key: 1}
        one = {s: tm.pi_key(s, key) for s in syms}
        # per-tensor rows of symbol images, so inner lookups hash only the symbol
        row_of: dict = {}
        rows = {s: [(k, row_of.setdefault(k, {}), c) for k, c in one[s].items()] for s in syms}
        for (s1, s2), br in brackets.items():
            ok, diff = _pair_ok(tm, s1, s2, br, v, one, rows)
            check = _relation_kind(s1, s2)
            rep.count(check)
            if not ok:
                rep.fail(check, f"[{sym_name(s1)}, {sym_name(s2)}] on {tensor_str(tm.lattice, key)}",
                         vec_str(tm.lattice, clean(diff)))
    return rep


def _relation_kind(s1, s2) -> str:
    kinds = {s1[0], s2[0]}
    if "d" in kinds:
        return "derivation"
    if "K" in kinds:
        return "central"
    return "loop-loop"


def verify_k_bounds(tm: ToroidalModule, window: int, sample, extra: int = 2) -> Report:
    """Every term of the k-sum outside the computed bounds vanishes."""
    rep = Report(f"k-bounds:{tm.tor.table.name}:n={tm.n}")
    syms = [s for s in tm.tor.symbols_in_window(window) if s[0] == "g"]
    for key in sample:
        for s in syms:
            lo, hi = tm.k_range(s, key)
            ks = list(range(lo - extra, lo)) + list(range(hi + 1, hi + 1 + extra))
            rep.count("k-sum-finite")
            if clean(tm._pi_g(s, key, ks)):
                rep.fail("k-sum-finite", f"{sym_name(s)} on {tensor_str(tm.lattice, key)}")
    return rep


def verify_derivations(tm: ToroidalModule, sample) -> Report:
    """pi(d_i) is diagonal on basis tensors with the eigenvalues of weight()."""
    rep = Report(f"derivations:{tm.tor.table.name}:n={tm.n}")
    for key in sample:
        w = tm.weight(key)
        for i in range(1, tm.n + 1):
            rep.count("d-eigenvalue")
            got = tm.pi_symbol(("d", i), {key: 1})
            want = {key: w.d[i - 1]} if w.d[i - 1] else {}
            if clean(got) != want:
                rep.fail("d-eigenvalue", f"d{i} on {tensor_str(tm.lattice, key)}")
    return rep


def verify_sector_stability(tm: ToroidalModule, window: int, sample) -> Report:
    rep = Report(f"sectors:{tm.tor.table.name}:n={tm.n}")
    syms = tm.tor.symbols_in_window(window)
    for key in sample:
        sec = tm.sector_of(key)
        for s in syms:
            rep.count("sector-stable")
            img = tm.pi_key(s, key)
            if any(tm.sector_of(k) != sec for k in img):
                rep.fail("sector-stable", f"{sym_name(s)} on {tensor_str(tm.lattice, key)}")
    return rep


# ---------------------------------------------------------------------------
# the sector intertwiner


def _lambda_d(tm: ToroidalModule, lam) -> tuple:
    try:
        return tm.tor._lambda_coords(lam)
    except ToroidalError as e:
        raise ActionError(str(e)) from None


def phi_intertwiner(tm: ToroidalModule, lam, v: dict) -> dict:
    """v (x) e^{lambda + delta} (x) u -> v (x) e^{delta} (x) u on the lambda-sector."""
    ks = _lambda_d(tm, lam)
    r = tm.n - 1
    out: dict = {}
    for (a, (g, u)), c in v.items():
        if tuple(g[r:]) != tuple(ks):
            raise ActionError(f"vector component e^{g} is not in the sector of lambda={ks}")
        out[(a, (tuple(g[:r]) + (0,) * r, u))] = c
    return out


def verify_intertwiner(tm: ToroidalModule, lam, window: int, sample, symbols=None) -> Report:
    """phi o pi_lambda(x) = pi_0(B_lambda x) o phi on every sample tensor."""
    ks = _lambda_d(tm, lam)
    rep = Report(f"intertwiner:{tm.tor.table.name}:n={tm.n}:lambda={list(ks)}")
    syms = tm.tor.symbols_in_window(window) if symbols is None else symbols
    images = {s: tm.tor.b_lambda(ks, {s: 1}) for s in syms}
    for key in sample:
        v = {key: 1}
        pv = phi_intertwiner(tm, ks, v)
        for s in syms:
            lhs = phi_intertwiner(tm, ks, tm.pi_key(s, key))
            rhs = tm.pi(images[s], pv)
            check = "intertwine-" + _relation_kind(s, s)
            rep.count(check)
            if clean(lhs) != rhs:
                rep.fail(check, f"{sym_name(s)} on {tensor_str(tm.lattice, key)}",
                         f"B_lambda x = {elem_str(images[s])}")
        # d_n eigenvalue P - (lambda, delta_m) - sum l_i on phi-side labels
        a, (g, u) = key
        r = tm.n - 1
        want = tm.module.P - AffineModule.mono_depth(a) - sum(x * y for x, y in zip(ks, g[:r])) - degree(key[1])
        rep.count("dn-eigenvalue")
        got = tm.pi_symbol(("d", tm.n), v)
        if clean(got) != ({key: norm(want)} if want else {}):
            rep.fail("dn-eigenvalue", tensor_str(tm.lattice, key))
    return rep


# ---------------------------------------------------------------------------
# weight spaces


@dataclass
class WeightSpace:
    weight: ToroidalWeight
    basis: list
    dim_direct: int
    dim_generating: int
    certified: bool
    note: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)


def _solve_offset(table, h_shift) -> tuple | None:
    """Root-lattice offset beta with beta(H(i)) = h_shift[i] (Cartan matrix solve)."""
    A = [[table.weight_values(tuple(int(k == j) for k in range(table.rank)))[i] for j in range(table.rank)]
         for i in range(table.rank)]
    sol = solve(A, list(h_shift))
    if sol is None or any(Q(x).denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def weight_space(tm: ToroidalModule, w: ToroidalWeight, depth_cap: int = 4, fock_cap: int = 4,
                 zero_cap: int | None = None) -> WeightSpace:
    """All basis tensors of weight w, enumerated two ways.

    Direct: filter the capped product basis by weight.  Generating: affine
    multiplicities from the Verma product formula times colored partition
    counts for the Fock factor.  Certified when the weight's total depth is
    within both caps and the zero-mode cap covers the needed zero modes.
    """
    M = tm.module
    table = M.table
    L = tm.lattice
    r = tm.n - 1
    K = tm.K
    note = ""
    # gamma is fixed by the d_i (i < n) and K_i eigenvalues
    if tuple(w.k[-1:]) != (K,):
        return WeightSpace(w, [], 0, 0, True, "K_n eigenvalue differs from the level")
    dpart = []
    for i in range(r):
        x = Q(w.k[i]) / K
        if x.denominator != 1:
            return WeightSpace(w, [], 0, 0, True, "K_i eigenvalue not in K*Z")
        dpart.append(int(x))
    gamma = tuple(w.d[:r]) + tuple(dpart)
    shift = tuple(Q(a) - b for a, b in zip(w.h, M.weight))
    offset = _solve_offset(table, shift)
    if offset is None:
        return WeightSpace(w, [], 0, 0, True, "h-weight not in lambda + root lattice")
    s = Q(M.P) - Q(L.pair(gamma, gamma), 2) - Q(w.d[-1])
    if s.denominator != 1 or s < 0:
        return WeightSpace(w, [], 0, 0, True, "d_n eigenvalue out of range")
    s = int(s)
    theta_ht = sum(table.highest_root)
    need_zero = max(0, -sum(offset) + s * theta_ht)
    Z = need_zero if zero_cap is None else zero_cap
    certified = s <= depth_cap and s <= fock_cap and Z >= need_zero
    if not certified:
        note = f"total depth {s} vs caps ({depth_cap}, {fock_cap}, zero modes {Z}/{need_zero})"
    # direct enumeration over the capped product basis
    D = min(s, depth_cap)
    amonos = [a for a in M.basis(D, Z) if M.mono_offset(a) == offset]
    fus = creator_monomials(L, min(s, fock_cap), tm.full_fock)
    basis = []
    for a in amonos:
        da = AffineModule.mono_depth(a)
        for u in fus:
            if da + sum(k for _, k in u) == s:
                key = (a, (gamma, u))
                if tm.weight(key) == w:
                    basis.append(key)
    # generating-function count
    colors = L.dim if tm.full_fock else r
    parts = colored_partition_counts(colors, s)
    ch = verma_character(table, s, min_height=sum(offset))
    gen = sum(ch.get((offset, da), 0) * parts[s - da] for da in range(s + 1))
    return WeightSpace(w, basis, len(basis), gen, certified, note)


# ---------------------------------------------------------------------------
# nilpotency probes (Lie algebra case)


def nilpotency_probe(tm: ToroidalModule, x: dict, v: dict, cap: int = 8, quotient: bool = False):
    """Smallest l <= cap with pi(x)^l v = 0, or None when it exceeds the cap.

    ``quotient`` tests vanishing modulo the maximal proper submodule of the
    affine factor, i.e. in L(lambda) (x) V(Gamma) instead of the Verma module.
    """
    if tm.module.table.is_super:
        raise ActionError(
            "integrability probes are defined for Lie algebras only; super integrable modules are mostly trivial"
        )
    w = v
    for l in range(0, cap + 1):
        if is_zero(tm, w, quotient):
            return l
        w = tm.pi(x, w)
    return None


def is_zero(tm: ToroidalModule, v: dict, quotient: bool = False) -> bool:
    v = clean(v)
    if not v:
        return True
    if not quotient:
        return False
    by_fock: dict = {}
    for (a, f), c in v.items():
        by_fock.setdefault(f, {})[a] = c
    return all(tm.module.is_zero_in_quotient(part) for part in by_fock.values())


# ---------------------------------------------------------------------------
# lifted module maps


@dataclass
class ModuleMap:
    """A linear map V -> W given on PBW monomials of V."""

    source: AffineModule
    target: AffineModule
    on_mono: object  # callable mono -> dict

    def __call__(self, vec: dict) -> dict:
        out: dict = {}
        for m, c in vec.items():
            add_into(out, self.on_mono(m), c)
        return out


def identity_map(M: AffineModule) -> ModuleMap:
    return ModuleMap(M, M, lambda m: {m: 1})


def scalar_map(M: AffineModule, c) -> ModuleMap:
    return ModuleMap(M, M, lambda m: {m: c})


def submodule_inclusion(M: AffineModule, singular: dict) -> ModuleMap:
    """M(mu) -> M(lambda) sending v_mu to a singular vector of M(lambda)."""
    keys = list(singular)
    off = M.mono_offset(keys[0])
    dep = AffineModule.mono_depth(keys[0])
    mu = tuple(norm(x) for x in M.h_weight(keys[0]))
    src = AffineModule(M.table, mu, M.level, M.P - dep, M.depth, M.zero_modes)
    for k in keys:
        if M.mono_offset(k) != off or AffineModule.mono_depth(k) != dep:
            raise ActionError("singular vector must be homogeneous")
    return ModuleMap(src, M, lambda m: M.act_word(m, dict(singular)))


def check_module_map(f: ModuleMap, window: int, sample) -> Report:
    """f(g v) = g f(v) for every affine generator with |degree| <= window."""
    rep = Report("module-map")
    gens = affine_generators(f.source.table, window)
    for m in sample:
        fv = f({m: 1})
        for g in gens:
            rep.count("equivariance")
            lhs = clean(f(f.source.act(g, {m: 1})))
            rhs = clean(f.target.act(g, fv))
            if lhs != rhs:
                rep.fail("equivariance", f"{gen_str(g)} on {amono_str(m)}")
    return rep


def lift_module_map(f: ModuleMap, tv: ToroidalModule, tw: ToroidalModule, window: int = 1, sample=None):
    """The tensor map f~(v (x) e^gamma (x) u) = f(v) (x) e^gamma (x) u, after an
    equivariance spot-check of f on generators and sample monomials."""
    if sample is None:
        sample = f.source.basis(2, 1)
    rep = check_module_map(f, window, sample)
    if not rep.ok:
        raise ActionError(f"not a module map: {rep.violations[0].witness}")

    def lifted(v: dict) -> dict:
        out: dict = {}
        for (a, fm), c in v.items():
            for b, cb in f({a: 1}).items():
                add_term(out, (b, fm), c * cb)
        return clean(out)

    return lifted


def verify_lifted_map(lifted, tv: ToroidalModule, tw: ToroidalModule, window: int, sample, symbols=None) -> Report:
    rep = Report(f"lifted-map:{tv.tor.table.name}:n={tv.n}")
    syms = tv.tor.symbols_in_window(window) if symbols is None else symbols
    for key in sample:
        fv = lifted({key: 1})
        for s in syms:
            rep.count("commutes-with-pi")
            lhs = lifted(tv.pi_key(s, key))
            rhs = tw.pi_symbol(s, fv)
            if lhs != clean(rhs):
                rep.fail("commutes-with-pi", f"{sym_name(s)} on {tensor_str(tv.lattice, key)}")
    return rep
