import pytest

from tau2pf.clock import build_X, build_Z
from tau2pf.parafermions import (SScalars, closed_form_check, commutator_R_check, gamma_closed,
                                 gamma_iterate, hmn_check, mu_nu_check, proof_step_checks,
                                 q0_check, q_sequence, recursion_check, s_scalars,
                                 truncation_check)
from tau2pf.tau2core import Tau2Model


def failures(results):
    return [r.line() for r in results if not r.passed]


def test_hand_gamma_family(hand_rap):
    model = Tau2Model(hand_rap)
    f = model.field
    Z = build_Z(model.space, f, 1)
    X = build_X(model.space, f, 1)
    gam = gamma_iterate(model, 2)
    assert gam[0] == Z.inverse_monomial()
    assert gam[1] == Z @ X * -6
    assert gam[2] == gam[0] * 36


def test_hand_s_scalars(hand_rap):
    s = s_scalars(hand_rap)
    assert [x.rational() for x in s.values] == [1, -36]
    assert not failures(s.checks)


def test_hand_truncation(hand_rap):
    res = truncation_check(hand_rap)
    assert not failures(res)
    assert all(r.residual == 0.0 for r in res)


def test_q_sequence_starts_with_inverse_A0(make_rap):
    model = Tau2Model(make_rap(2, 2, 3))
    q = q_sequence(model, 4)
    assert q[0] == model.identity * (model.field.one / model.A0)


@pytest.mark.parametrize("N,L", [(2, 2), (3, 2), (2, 3)])
def test_exact_identity_families(make_rap, N, L):
    model = Tau2Model(make_rap(N, L, 11))
    NL = N * L
    res = (proof_step_checks(model) + recursion_check(model, NL) + closed_form_check(model)
           + mu_nu_check(model, NL) + hmn_check(model, 2) + q0_check(model, 2 * L)
           + commutator_R_check(model) + truncation_check(model))
    assert not failures(res)


def test_closed_form_both_orderings(make_rap):
    model = Tau2Model(make_rap(3, 2, 1))
    gam = gamma_iterate(model, 6)
    for l in range(1, 7):
        assert gamma_closed(model, l, "right") == gam[l]
        assert gamma_closed(model, l, "left") == gam[l]
    with pytest.raises(ValueError):
        gamma_closed(model, 0)


def test_wrong_s_breaks_truncation(make_rap):
    # the truncation check is not vacuous: perturbing one s_l makes it fail
    model = Tau2Model(make_rap(2, 2, 0))
    s = s_scalars(model)
    bad = SScalars([s[0], s[1] + model.field.one, s[2]], [])
    res = truncation_check(model, 1, bad)
    failed = [r for r in res if r.name == "truncation" and not r.passed]
    assert failed and "nonzero entry" in failed[0].detail


@pytest.mark.parametrize("N,L", [(3, 2), (2, 3)])
def test_float_backend_relative_residuals(make_rap, N, L):
    model = Tau2Model(make_rap(N, L, 2, backend="float"))
    res = truncation_check(model) + mu_nu_check(model, N * L) + s_scalars(model).checks
    assert not failures(res)
