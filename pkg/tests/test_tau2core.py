import pytest

from tau2pf.clock import ChainSpace, Operator, build_X
from tau2pf.tau2core import (RapiditySet, Tau2Model, build_monodromy, build_site_L,
                             core_checks, hamiltonian_explicit)


def test_rapidity_validation():
    with pytest.raises(ValueError):
        RapiditySet.build(2, 1, [[0, 1, 0, 2]])
    with pytest.raises(ValueError):
        RapiditySet.build(2, 1, [[0, 0, 0, 2], [0, 1, 0, 3]])


def test_boundary_values(hand_rap):
    f = hand_rap.field
    assert hand_rap.b(-1) == f.one and hand_rap.b(-2) == f.one
    assert hand_rap.c(-1) == f.zero and hand_rap.a(-1) == f.zero and hand_rap.d(-1) == f.zero


def test_site_L_without_d_is_constant():
    rap = RapiditySet.build(3, 1, [[1, 2, 3, 0], [2, 5, 1, 0]])
    blk = build_site_L(rap, 1)
    const, tco = blk.entry(0, 0)
    assert const == Operator.identity(blk.alpha_p.space, rap.field) * 10
    assert tco.is_zero()


def test_site_L_hand_values_n2():
    rap = RapiditySet.build(2, 1, [[1, 1, 3, 5], [1, 1, 3, 5]])
    blk = build_site_L(rap, 1)
    X = build_X(ChainSpace(2, 1), rap.field, 1)
    const, tco = blk.entry(1, 1)
    assert const == X * -1
    assert tco == Operator.identity(X.space, rap.field) * 9


def test_triangular_split(make_rap):
    blk = build_site_L(make_rap(3, 2, 1), 2)
    assert blk.plus[0][1].is_zero()
    assert blk.minus[1][0].is_zero()


def test_single_site_monodromy_is_site_block(make_rap):
    rap = make_rap(3, 1, 4)
    M = build_monodromy(rap, 1, 1)
    blk = build_site_L(rap, 1)
    for r in range(2):
        for c in range(2):
            assert M[r][c] == blk.polynomial(r, c)


def test_hand_hamiltonian(hand_rap):
    model = Tau2Model(hand_rap)
    assert model.H == model.X1 * -6
    assert model.A0 == hand_rap.field.one


@pytest.mark.parametrize("N,L", [(2, 3), (3, 3)])
def test_transfer_matrix_structure(make_rap, N, L):
    model = Tau2Model(make_rap(N, L, 2))
    assert model.tau2.degree == L
    for m in range(L + 1):
        for n in range(m + 1, L + 1):
            assert (model.A(m) @ model.A(n) - model.A(n) @ model.A(m)).is_zero()
    assert hamiltonian_explicit(model.rap) == model.H


def test_A_split_full_vs_hatted(make_rap):
    model = Tau2Model(make_rap(3, 3, 5))
    s1 = model.sites[1]
    for l in range(model.L + 1):
        rhs = (s1.alpha_p @ model.A_hat(l) + s1.alpha_m @ model.A_hat(l - 1)
               + s1.beta_m @ model.C_hat(l - 1))
        assert model.A(l) == rhs


@pytest.mark.parametrize("backend", ["exact", "float"])
def test_core_checks_pass(make_rap, backend):
    res = core_checks(make_rap(3, 2, 0, backend))
    assert res and all(r.passed for r in res), [r.line() for r in res if not r.passed]
