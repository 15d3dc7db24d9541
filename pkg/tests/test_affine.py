import pytest
from hypothesis import given, settings, strategies as st

from toroidal import defects
from toroidal.affine import (
    DBAR,
    KN,
    AffineError,
    AffineModule,
    affine_bracket,
    build_highest_weight_module,
    verify_affine_relations,
    verma_character,
)
from toroidal.fock import colored_partition_counts

E, F, H = ("X", (1,)), ("X", (-1,)), ("H", 1)


def test_bracket_with_central_term(sl2):
    assert affine_bracket(sl2, (E, 1), (F, -1)) == {(H, 0): 1, KN: 1}


def test_center_and_derivation(sl2):
    assert affine_bracket(sl2, KN, (E, 5)) == {}
    assert affine_bracket(sl2, DBAR, (E, 3)) == {(E, 3): 3}
    assert affine_bracket(sl2, (E, 3), DBAR) == {(E, 3): -3}


def test_level_zero_rejected(sl2):
    with pytest.raises(AffineError):
        build_highest_weight_module(sl2, (0,), level=0)


def test_depth_zero_weight_zero_space(verma):
    assert verma.weight_space((0,), 0) == [()]
    assert verma.weight_space((-2,), 0) == [((F, 0), (F, 0))]


def test_depth_one_weight_zero_space(verma):
    space = verma.weight_space((0,), 1)
    assert sorted(space) == sorted([((H, -1),), ((E, -1), (F, 0))])


def test_highest_weight_vector_annihilated(sl2, sl3, osp):
    for t in (sl2, sl3, osp):
        M = AffineModule(t, (1,) * t.rank, 2, 0, depth=2)
        for k in range(1, 4):
            for s in t.symbols:
                assert M.act_mono((s, k), ()) == {}
        for a in t.simple_roots:
            assert M.act_mono((("X", a), 0), ()) == {}


def test_level_and_cartan_on_highest_weight(sl2):
    M = AffineModule(sl2, (3,), 5, 0)
    assert M.act(KN, {(): 1}) == {(): 5}
    assert M.act((H, 0), {(): 1}) == {(): 3}


def test_straightening_step_against_bracket(verma):
    # f_1 e_{-1} v = [f_1, e_{-1}] v = (-h_0 + (f, e) K) v
    v = verma.act((E, -1), {(): 1})
    out = verma.act((F, 1), v)
    assert out == {(): 1}


def test_straightening_step_nonzero_weight(sl2):
    M = AffineModule(sl2, (2,), 3, 0)
    v = M.act((E, -1), {(): 1})
    # [f_1, e_{-1}] = -h_0 + K, acting by -2 + 3
    assert M.act((F, 1), v) == {(): 1}


def test_odd_square_uses_half_bracket(osp):
    M = AffineModule(osp, (1,), 1, 0, depth=2)
    y = ("X", (-1,))
    once = M.act((y, -1), {(): 1})
    twice = M.act((y, -1), once)
    half = {k: v / 2 for k, v in affine_bracket(osp, (y, -1), (y, -1)).items()}
    want = {}
    for g, c in half.items():
        for m, cm in M.act(g, {(): 1}).items():
            want[m] = want.get(m, 0) + c * cm
    assert twice == {m: c for m, c in want.items() if c}


def test_relations_sl2_small(verma):
    rep = verify_affine_relations(verma, 2, verma.basis(2, 2))
    assert rep.ok, rep.summary()


def test_relations_osp_includes_odd_pairs(osp):
    M = AffineModule(osp, (1,), 1, 0, depth=2)
    rep = verify_affine_relations(M, 2, M.basis(2, 1))
    assert rep.ok, rep.summary()
    assert rep.counts["A(1)"] > 0


def test_relations_sl3(sl3):
    M = AffineModule(sl3, (1, 0), 1, 0, depth=1)
    assert verify_affine_relations(M, 1, M.basis(1, 1)).ok


def test_central_defect_detected(verma):
    with defects.injected("affine.central"):
        rep = verify_affine_relations(verma, 1, verma.basis(1, 1))
    assert not rep.ok
    assert "A(1)" in rep.failures_by_check() or "A(3)" in rep.failures_by_check()


@pytest.mark.parametrize("name,weight", [("sl2", (0,)), ("sl3", (1, 0)), ("osp(1|2)", (1,))])
def test_character_matches_enumeration(name, weight):
    from toroidal.algebra import load_algebra

    t = load_algebra(name)
    M = AffineModule(t, weight, 1, 0, depth=3)
    ch = verma_character(t, 3, min_height=-4)
    assert ch
    for (off, d), mult in ch.items():
        assert len(M.weight_space(off, d)) == mult


def test_irreducible_vacuum_module_is_partition_counted(verma):
    # L(Lambda_0) for sl2 at level 1: the weight-0 strings have dims p(d)
    parts = colored_partition_counts(1, 5)
    assert [verma.irreducible_dim((0,), d) for d in range(6)] == parts


def test_singular_vectors_of_vacuum_module(verma):
    assert verma.singular_vectors((-1,), 0) == [{((F, 0),): 1}]
    assert verma.singular_vectors((2,), 2) == [{((E, -1), (E, -1)): 1}]
    assert verma.singular_vectors((0,), 1) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(1, 4), st.sampled_from([E, F, H]))
def test_restrictedness(verma, depth, extra, sym):
    for mono in verma.basis(depth, 1):
        if AffineModule.mono_depth(mono) == depth:
            assert verma.act_mono((sym, depth + extra), mono) == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.sampled_from([E, F, H]))
def test_grading_shift(verma, k, sym):
    for mono in verma.basis(2, 1):
        for out in verma.act_mono((sym, k), mono):
            assert AffineModule.mono_depth(out) == AffineModule.mono_depth(mono) - k
            shift = sym[1] if sym[0] == "X" else (0,)
            assert verma.mono_offset(out) == tuple(a + b for a, b in zip(verma.mono_offset(mono), shift))


def test_level_acts_on_basis(verma):
    for mono in verma.basis(3, 1):
        assert verma.act_mono(KN, mono) == {mono: 1}
