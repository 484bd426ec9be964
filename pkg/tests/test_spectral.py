import numpy as np
import pytest

from tau2pf.errors import DegeneracyError, SingularModelError
from tau2pf.spectral import (b54_residual, companion_and_roots, companion_matrix,
                             hatted_gamma, labeled_eigenbasis, lagrange_pinv, lambda_values,
                             mu_roots, noise_amplification, pinv_checks, spectral_suite)
from tau2pf.tau2core import Tau2Model


def test_hand_companion_and_roots():
    comp = companion_and_roots([1, -36], 2)
    assert np.allclose(comp.matrix, [[0, 1], [36, 0]], atol=1e-12)
    assert abs(comp.roots[0] - 6) < 1e-12
    assert all(c.passed for c in comp.checks)


def test_hand_pinv_rows():
    rows = lagrange_pinv([(0, 0, 6.0), (1, 0, -6.0)])
    assert np.allclose(rows[(0, 0)], [0.5, 1 / 12], atol=1e-12)
    assert np.allclose(rows[(1, 0)], [0.5, -1 / 12], atol=1e-12)


def test_lagrange_property_random_nodes():
    rng = np.random.default_rng(3)
    nodes = list(rng.normal(size=6) + 1j * rng.normal(size=6))
    rows = lagrange_pinv(nodes)
    assert all(c.passed for c in pinv_checks(rows, nodes))


def test_degenerate_and_singular_roots():
    with pytest.raises(DegeneracyError):
        mu_roots([1, -2, 1])
    with pytest.raises(SingularModelError):
        mu_roots([1, 1, 0])
    with pytest.raises(SingularModelError):
        companion_matrix([0, 1], 2)


def test_hand_spectrum(hand_rap):
    spec = labeled_eigenbasis(hand_rap)
    assert sorted(spec.labels) == [(0,), (1,)]
    table, checks = lambda_values(hand_rap, spec)
    assert all(c.passed for c in checks)
    for entry in table.values():
        assert abs(entry["lambda4"] - 1) < 1e-12


@pytest.mark.parametrize("N,L", [(2, 2), (3, 2), (2, 3)])
def test_spectral_suite(make_rap, N, L):
    spec, checks = spectral_suite(Tau2Model(make_rap(N, L, 1)))
    assert len(spec.index) == N ** L
    assert all(c.passed for c in checks), [c.line() for c in checks if not c.passed]


def test_raising_operator_sum_vs_factored(make_rap):
    model = Tau2Model(make_rap(2, 2, 0))
    spec = labeled_eigenbasis(model)
    for p in range(2):
        for k in range(2):
            a = hatted_gamma(model, spec, p, k, "sum")
            b = hatted_gamma(model, spec, p, k, "factored")
            assert np.allclose(a, b, atol=1e-9)


def test_amplification_is_reported(make_rap):
    spec = labeled_eigenbasis(Tau2Model(make_rap(2, 3, 5)))
    assert noise_amplification(spec) > 1e6


def test_b54_residual(make_rap):
    model = Tau2Model(make_rap(3, 2, 2))
    spec = labeled_eigenbasis(model)
    max_abs, max_rel, count = b54_residual(model, spec)
    assert count == 2 * 3 * 3
    assert max_abs < 1e-8
    with pytest.raises(ValueError):
        b54_residual(model, spec, 1, 1)
