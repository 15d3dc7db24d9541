from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from toroidal import defects
from toroidal.fock import (
    FockError,
    Lattice,
    colored_partition_counts,
    creator_monomials,
    heisenberg_act,
    l0_act,
    schur_operator,
    t_operator_act,
    vacuum,
    vertex_coefficient_act,
    verify_fock_identities,
)
from toroidal.linear import add_into

L2 = Lattice(2)
L3 = Lattice(3)


def test_lattice_pairing_is_hyperbolic():
    assert L3.pairing_matrix() == [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ]
    assert L3.pair(L3.delta(1), L3.delta(2)) == 0
    with pytest.raises(FockError):
        Lattice(1)


def test_annihilator_pairs_with_creator():
    v = {(L2.zero(), ((1, 2),)): 1}  # e^0 (x) d_1(-2)
    # b(-k) -> delta_{mk} m <a, b>: factor 2 <delta_1, d_1> = 2
    assert heisenberg_act(L2, L2.delta(1), 2, v) == {(L2.zero(), ()): 2}


def test_zero_mode_reads_lattice_label():
    assert heisenberg_act(L2, L2.delta(1), 0, vacuum(L2, L2.d(1))) == vacuum(L2, L2.d(1))


def test_annihilator_kills_vacuum():
    assert heisenberg_act(L2, L2.delta(1), 3, vacuum(L2, (2, 1))) == {}


def test_schur_operators():
    d = L2.delta(1)
    assert schur_operator(0, d) == {(): 1}
    assert schur_operator(-3, d) == {}
    assert schur_operator(2, d) == {((0, 1), (0, 1)): Fraction(1, 2), ((0, 2),): Fraction(1, 2)}


@pytest.mark.parametrize("g", [(0, 0), (0, 1), (0, -2), (1, 3), (-1, -1)])
@pytest.mark.parametrize("m", range(-4, 4))
def test_three_case_vertex_expansion(g, m):
    d = L2.delta(1)
    s = m + L2.pair(d, g)
    got = vertex_coefficient_act(L2, d, m, vacuum(L2, g))
    target = L2.add(g, d)
    if s > 0:
        assert got == {}
    elif s == 0:
        assert got == vacuum(L2, target)
    else:
        assert got == {(target, u): c for u, c in schur_operator(-s, d).items()}


def test_vertex_operator_rejects_d_labels():
    with pytest.raises(FockError):
        vertex_coefficient_act(L2, L2.d(1), 0, vacuum(L2))


def test_l0_eigenvalues():
    g = (1, 2)
    assert l0_act(L2, vacuum(L2, g)) == {(g, ()): -2}
    v = {(L2.zero(), ((0, 3),)): 1}
    assert l0_act(L2, v) == {(L2.zero(), ((0, 3),)): -3}


def test_t_operator_on_vacuum_vanishes():
    # T^{delta_1}_0(delta_1) e^0 = -0 * X_0(delta_1) e^0
    d = L2.delta(1)
    assert t_operator_act(L2, d, d, 0, vacuum(L2)) == {}


@pytest.mark.parametrize("k", range(-3, 2))
def test_t_operator_is_derivative(k):
    d = L3.add(L3.delta(1), L3.delta(2))
    for u in creator_monomials(L3, 2, full=True):
        v = {(L3.d(1), u): 1}
        t = t_operator_act(L3, d, d, k, v)
        x = vertex_coefficient_act(L3, d, k, v)
        assert t == {key: -k * c for key, c in x.items() if k}


def test_t_operator_vanishes_high_on_vacuum():
    h, a = L3.delta(1), L3.delta(2)
    v = vacuum(L3, L3.zero())
    for k in range(1, 4):
        assert t_operator_act(L3, h, a, k, v) == {}


def test_zero_vertex_operator_is_identity_mode():
    v = {((0, 1), ((0, 2), (1, 1))): 3}
    assert vertex_coefficient_act(L2, L2.zero(), 0, v) == v
    assert vertex_coefficient_act(L2, L2.zero(), 1, v) == {}


# -- brute-force oracle: expand each exponential factor by factor ------------


def oracle_vertex(lattice, a, m, mono):
    g, u = mono
    deg = sum(k for _, k in u)
    series = {0: {mono: 1}}
    # exp T_+ : annihilators a(k), k = 1..deg
    for k in range(1, deg + 1):
        out = {}
        for p, v in series.items():
            cur = dict(v)
            for j in range(deg // k + 1):
                if not cur:
                    break
                coef = Fraction(-1, k) ** j / factorial(j)
                add_into(out.setdefault(p - k * j, {}), {kk: c * coef for kk, c in cur.items()})
                cur = heisenberg_act(lattice, a, k, cur)
        series = out
    # e^a z^{a(0)}
    shifted = {}
    for p, v in series.items():
        for (gg, uu), c in v.items():
            add_into(shifted.setdefault(p + lattice.pair(a, gg), {}), {(lattice.add(gg, a), uu): c})
    series = shifted
    # exp T_- : creators a(-k) z^k / k, keep only what can reach z^{-m}
    top = max([-m - p for p in series] + [0])
    for k in range(1, top + 1):
        out = {}
        for p, v in series.items():
            cur = dict(v)
            j = 0
            while p + k * j <= -m:
                coef = Fraction(1, k) ** j / factorial(j)
                add_into(out.setdefault(p + k * j, {}), {kk: c * coef for kk, c in cur.items()})
                cur = heisenberg_act(lattice, a, -k, cur)
                j += 1
        series = out
    res = series.get(-m, {})
    return {k: v for k, v in res.items() if v}


monos = st.builds(
    lambda g, u: (g, u),
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.sampled_from(creator_monomials(L2, 3, full=True)),
)


@settings(max_examples=60, deadline=None)
@given(monos, st.integers(-4, 4), st.sampled_from([(1, 0), (-1, 0), (2, 0)]))
def test_vertex_matches_series_oracle(mono, m, a):
    got = vertex_coefficient_act(L2, a, m, {mono: 1})
    assert got == oracle_vertex(L2, a, m, mono)


def test_identity_sweep_depth_two():
    for lat in (L2, L3):
        rep = verify_fock_identities(lat, 2, window=1)
        assert rep.ok, rep.summary()


def test_identity_sweep_full_fock_n2():
    rep = verify_fock_identities(L2, 3, window=1, full=True)
    assert rep.ok, rep.summary()


def test_annihilator_defect_detected():
    # the defect only shows for modes a(m) with m >= 2
    with defects.injected("fock.annihilator"):
        rep = verify_fock_identities(L2, 2, window=2)
    assert "heisenberg-commutator" in rep.failures_by_check()


def test_fock_character():
    # one color per delta_i on V(Gamma)
    for lat, colors in ((L2, 1), (L3, 2)):
        counts = [0] * 6
        for u in creator_monomials(lat, 5):
            counts[sum(k for _, k in u)] += 1
        assert counts == colored_partition_counts(colors, 5)
