import numpy as np
import pytest

from tau2pf.errors import ConfigError
from tau2pf.fendley import (build_h, exclusion_sum, exclusion_tuples, factorized_pinv,
                            fendley_rapidities, limit_checks, phi_operators,
                            phi_shift_decomposition, u_roots_check)
from tau2pf.parafermions import gamma_iterate
from tau2pf.spectral import labeled_eigenbasis, lagrange_pinv
from tau2pf.tau2core import Tau2Model


def limit_rap(N, L, seed=0, backend="exact"):
    import random
    from fractions import Fraction
    rng = random.Random(seed)

    def v():
        return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
    return fendley_rapidities(N, L, [v() for _ in range(2 * L)], [v() for _ in range(2 * L)],
                              backend)


def test_single_site_h():
    rap = fendley_rapidities(3, 1, [1, 1], [2, 5])
    model = Tau2Model(rap)
    (h1,) = build_h(model)
    assert h1 == model.X1 * 10


def test_tuple_count():
    assert exclusion_tuples(3, 2) == [(1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5)]
    with pytest.raises(ValueError):
        exclusion_tuples(3, 4)


def test_special_cases():
    model = Tau2Model(limit_rap(2, 3, 1))
    h = build_h(model)
    assert exclusion_sum(model, 0) == model.identity
    assert exclusion_sum(model, 3) == h[0] @ h[2] @ h[4]


@pytest.mark.parametrize("N,L", [(2, 3), (3, 2)])
def test_limit_identities(N, L):
    res = limit_checks(limit_rap(N, L, 4))
    assert all(r.passed for r in res), [r.line() for r in res if not r.passed]


def test_non_limit_rejected(make_rap):
    with pytest.raises(ConfigError):
        build_h(Tau2Model(make_rap(2, 2, 0)))


def test_u_roots_and_phi(make_rap):
    model = Tau2Model(limit_rap(2, 2, 2))
    spec = labeled_eigenbasis(model)
    assert all(c.passed for c in u_roots_check(model, spec))
    rep = phi_shift_decomposition(model, spec)
    assert all(c.passed for c in rep["checks"])
    ref = lagrange_pinv(spec.companion.nodes)
    for key, row in factorized_pinv(spec.roots, 2).items():
        assert np.allclose(row, ref[key], atol=1e-10)


def test_phi_single_site():
    model = Tau2Model(fendley_rapidities(2, 1, [1, 1], [2, 3]))
    spec = labeled_eigenbasis(model)
    phi = phi_operators(model, spec.roots, 2)
    gam = gamma_iterate(model, 1)
    assert np.allclose(phi[(0, 0)], gam[0].to_complex() / 2)
    assert np.allclose(phi[(0, 1)], gam[1].to_complex() / 2)
