import pytest

from toroidal import defects
from toroidal.action import (
    ActionError,
    ToroidalModule,
    check_module_map,
    identity_map,
    is_zero,
    lift_module_map,
    nilpotency_probe,
    phi_intertwiner,
    scalar_map,
    submodule_inclusion,
    tensor,
    verify_derivations,
    verify_intertwiner,
    verify_k_bounds,
    verify_lifted_map,
    verify_sector_stability,
    verify_toroidal_relations,
    weight_space,
)
from toroidal.affine import AffineError, AffineModule
from toroidal.fock import _apply_creators, schur_operator
from toroidal.linear import add_into
from toroidal.toroidal import ToroidalWeight

E, F, H = ("X", (1,)), ("X", (-1,)), ("H", 1)


def vac(tm, gamma=None, u=()):
    g = tm.lattice.zero() if gamma is None else tuple(gamma)
    return {((), (g, u)): 1}


def test_level_zero_rejected(sl2):
    # the affine factor already refuses level 0; the action repeats the guard
    with pytest.raises(AffineError):
        AffineModule(sl2, (0,), 0, 0, depth=2)
    M = AffineModule(sl2, (0,), 1, 0, depth=2)
    M.level = 0
    with pytest.raises(ActionError):
        ToroidalModule(M, 2)


def test_central_kn_mode_zero_acts_by_level(sl2):
    tm = ToroidalModule(AffineModule(sl2, (1,), 3, 0, depth=3), 2)
    for key in tm.basis(2, tm.gammas(1)):
        assert tm.pi_act(("K", 2, (0, 0)), {key: 1}) == {key: 3}


def test_dn_eigenvalue_on_sector_vectors(sl2):
    tm = ToroidalModule(AffineModule(sl2, (0,), 1, 5, depth=3), 2)
    L = tm.lattice
    # v_hw (x) e^{lambda + delta} (x) a(-1) a(-2), lambda = 2 d_1, delta = -delta_1
    gamma = L.add(L.scale(L.d(1), 2), L.scale(L.delta(1), -1))
    u = ((0, 1), (0, 2))
    v = vac(tm, gamma, u)
    # (lambda, delta) with delta = -delta_1 on the lambda side: P - (lambda, delta) - 3
    lam_delta = L.pair(L.scale(L.d(1), 2), L.scale(L.delta(1), -1))
    assert tm.pi_act(("d", 2), v) == {next(iter(v)): 5 - lam_delta - 3}
    assert tm.pi_act(("d", 1), v) == {next(iter(v)): -1}


@pytest.mark.parametrize("m", [(1, 0), (-1, 2), (2, -1), (0, 3)])
@pytest.mark.parametrize("s", [E, F, H])
def test_root_vector_action_on_vacuum_matches_schur_formula(tm2, s, m):
    # pi(x t^m)(v (x) e^gamma (x) 1) = sum_k x_k v (x) e^{gamma + delta_m} (x) S_{k - m_n - (gamma, delta_m)} 1
    L = tm2.lattice
    gamma = L.add(L.d(1), L.delta(1))
    v = vac(tm2, gamma)
    dm = L.delta_m(m)
    want: dict = {}
    for k in range(-12, 13):
        av = tm2.module.act_mono((s, k), ())
        p = k - m[-1] - L.pair(gamma, dm)
        if not av or p < 0:
            continue
        fv = _apply_creators(schur_operator(p, dm), {(L.add(gamma, dm), ()): 1})
        add_into(want, tensor(av, fv))
    assert tm2.pi_act(("g", s, m), v) == {k: c for k, c in want.items() if c}


def test_k_sum_bounds_are_tight_enough(tm2):
    rep = verify_k_bounds(tm2, 1, tm2.basis(2, tm2.gammas(1)))
    assert rep.ok and rep.checked > 0


def test_derivations_diagonal(tm3):
    rep = verify_derivations(tm3, tm3.basis(2, tm3.gammas(1)))
    assert rep.ok, rep.summary()


def test_small_homomorphism_sweep(tm2):
    rep = verify_toroidal_relations(tm2, 1, tm2.basis(2, tm2.gammas(1)))
    assert rep.ok, rep.summary()
    assert rep.checked > 10000


def test_osp_odd_pairs(osp):
    tm = ToroidalModule(AffineModule(osp, (1,), 1, 0, depth=2), 2)
    odd = [s for s in tm.tor.symbols_in_window(1) if tm.tor.parity(s) == 1]
    assert odd
    rep = verify_toroidal_relations(tm, 1, tm.basis(1, tm.gammas(0)), symbols=odd)
    assert rep.ok, rep.summary()
    assert "loop-loop" in rep.counts


def test_n3_spot_sweep(tm3):
    syms = [s for s in tm3.tor.symbols_in_window(1) if s[0] != "g" or s[1] != H]
    rep = verify_toroidal_relations(tm3, 1, tm3.basis(1, [tm3.lattice.zero()]), symbols=syms)
    assert rep.ok, rep.summary()


def test_dropping_central_assignment_is_detected(tm2):
    syms = tm2.tor.symbols_in_window(1)
    with defects.injected("action.central"):
        rep = verify_toroidal_relations(tm2, 1, tm2.basis(1, tm2.gammas(0)), symbols=syms)
    assert not rep.ok
    assert verify_toroidal_relations(tm2, 1, tm2.basis(1, tm2.gammas(0)), symbols=syms).ok


def test_sector_stability_and_decompose(tm2):
    assert verify_sector_stability(tm2, 1, tm2.basis(2, tm2.gammas(1))).ok
    L = tm2.lattice
    a = vac(tm2, L.d(1))
    b = vac(tm2, L.add(L.d(1), L.delta(1)))
    c = vac(tm2, L.scale(L.d(1), -1))
    parts = tm2.sector_decompose({**a, **b})
    assert list(parts) == [(1,)]
    parts = tm2.sector_decompose({**a, **c})
    assert set(parts) == {(1,), (-1,)}
    merged: dict = {}
    for p in parts.values():
        add_into(merged, p)
    assert merged == {**a, **c}


def test_phi_relabels_sector(tm2):
    L = tm2.lattice
    v = vac(tm2, L.add(L.scale(L.d(1), 2), L.delta(1)))
    assert phi_intertwiner(tm2, (2,), v) == vac(tm2, L.delta(1))
    assert phi_intertwiner(tm2, (0,), vac(tm2)) == vac(tm2)
    with pytest.raises(ActionError):
        phi_intertwiner(tm2, (1,), v)
    with pytest.raises(ActionError):
        phi_intertwiner(tm2, (1, 0), v)


@pytest.mark.parametrize("lam", [(0,), (1,), (-2,)])
def test_intertwiner_small(tm2, lam):
    sample = tm2.basis(2, tm2.gammas(sector=lam))
    rep = verify_intertwiner(tm2, lam, 1, sample)
    assert rep.ok, rep.summary()


def test_intertwiner_detects_printed_coefficient(tm3):
    sample = tm3.basis(1, tm3.gammas(sector=(1, 1)))
    with defects.injected("intertwiner.b_lambda"):
        rep = verify_intertwiner(tm3, (1, 1), 1, sample)
    assert not rep.ok


def test_top_weight_space(tm2):
    w = tm2.weight(next(iter(vac(tm2))))
    assert w == ToroidalWeight((0,), (0, 1), (0, 0))
    ws = weight_space(tm2, w)
    assert ws.dim == ws.dim_generating == 1 and ws.certified


@pytest.mark.parametrize("h,dn", [(0, -1), (-2, -1), (2, -1), (0, -2), (-2, -3)])
def test_weight_space_two_counts_agree(tm2, h, dn):
    ws = weight_space(tm2, ToroidalWeight((h,), (0, 1), (0, dn)))
    assert ws.certified
    assert ws.dim_direct == ws.dim_generating
    for key in ws.basis:
        assert tm2.weight(key) == ws.weight


def test_weight_space_depth_one_values(tm2):
    # d_n = -1, h = 0: one affine step of depth 1 or one Fock creator
    ws = weight_space(tm2, ToroidalWeight((0,), (0, 1), (0, -1)))
    assert ws.dim == 3  # h_{-1}v, f_0 e_{-1} v, v (x) d_1(-1)


def test_weight_space_uncertified_is_flagged(tm2):
    ws = weight_space(tm2, ToroidalWeight((0,), (0, 1), (0, -6)), depth_cap=2, fock_cap=2)
    assert not ws.certified and ws.note


def test_weight_space_empty_cases(tm2):
    assert weight_space(tm2, ToroidalWeight((1,), (0, 1), (0, 0))).dim == 0
    assert weight_space(tm2, ToroidalWeight((0,), (0, 2), (0, 0))).dim == 0
    assert weight_space(tm2, ToroidalWeight((0,), (0, 1), (0, 1))).dim == 0


def test_nilpotency_probes(tm2):
    v = vac(tm2)
    assert nilpotency_probe(tm2, {("g", E, (0, 0)): 1}, v) == 1
    assert nilpotency_probe(tm2, {("g", F, (0, 0)): 1}, v, cap=4) is None
    assert nilpotency_probe(tm2, {("g", F, (0, 0)): 1}, v, cap=4, quotient=True) == 1
    # with lambda(H) = 1 the quotient keeps f_0 v and kills f_0^2 v
    tm1 = ToroidalModule(AffineModule(tm2.module.table, (1,), 1, 0, depth=3), 2)
    assert nilpotency_probe(tm1, {("g", F, (0, 0)): 1}, v, cap=4, quotient=True) == 2


def test_nilpotency_rejects_super(osp):
    tm = ToroidalModule(AffineModule(osp, (0,), 1, 0, depth=2), 2)
    with pytest.raises(ActionError, match="Lie algebras only"):
        nilpotency_probe(tm, {("g", ("X", (1,)), (0, 0)): 1}, vac(tm))


def test_is_zero_in_quotient(tm2):
    v = tm2.pi_act(("g", F, (0, 0)), vac(tm2))
    assert not is_zero(tm2, v)
    assert is_zero(tm2, v, quotient=True)


def test_module_maps(verma):
    assert check_module_map(identity_map(verma), 1, verma.basis(2, 1)).ok
    assert check_module_map(scalar_map(verma, 3), 1, verma.basis(2, 1)).ok
    sing = verma.singular_vectors((-1,), 0)
    f = submodule_inclusion(verma, sing[0])
    assert check_module_map(f, 1, f.source.basis(2, 1)).ok


def test_lifted_inclusion_commutes(verma):
    sing = verma.singular_vectors((-1,), 0)
    f = submodule_inclusion(verma, sing[0])
    tv, tw = ToroidalModule(f.source, 2), ToroidalModule(verma, 2)
    lifted = lift_module_map(f, tv, tw)
    rep = verify_lifted_map(lifted, tv, tw, 1, tv.basis(1, tv.gammas(1)))
    assert rep.ok, rep.summary()


def test_lift_rejects_non_module_map(verma):
    from toroidal.action import ModuleMap

    # sends every monomial to v_hw: not equivariant
    bad = ModuleMap(verma, verma, lambda m: {(): 1})
    tm = ToroidalModule(verma, 2)
    with pytest.raises(ActionError):
        lift_module_map(bad, tm, tm)
