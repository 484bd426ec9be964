import random
from fractions import Fraction

import pytest

from tau2pf.scalars import CyclotomicField
from tau2pf.tau2core import Tau2Model
from tau2pf import ybe
from tau2pf.ybe import RMatrix, build_R, verify_exchange_relations, verify_site_ybe


def rnd(rng):
    return Fraction(rng.choice([-4, -3, -2, -1, 1, 2, 3, 4]), rng.randint(1, 4))


def test_R_entries_n2():
    F = CyclotomicField(2)
    R = build_R(2, 1, F)
    # omega = -1, t_q / t_r = 1/2
    assert R(0, 0, 0, 0) == F("3/2") and R(1, 1, 1, 1) == F("3/2")
    assert R(1, 0, 1, 0) == F("1/2")
    assert R(0, 1, 0, 1) == F("-1/2")
    assert R(0, 1, 1, 0) == F(2)
    assert R(1, 0, 0, 1) == F(1)
    assert R(0, 0, 1, 1) == F.zero
    assert len(R.as_table()) == 4


def test_R_rejects_zero_parameter():
    F = CyclotomicField(3)
    with pytest.raises(ValueError):
        RMatrix(F.zero, F.one, F)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_site_ybe_random(N):
    rng = random.Random(N)
    F = CyclotomicField(N)
    for _ in range(5):
        p = [rnd(rng) for _ in range(4)]
        p2 = [rnd(rng) for _ in range(4)]
        res = verify_site_ybe(p, p2, rnd(rng), rnd(rng), F)
        assert len(res) == 16 and all(r.passed for r in res)


def test_site_ybe_detects_wrong_R(monkeypatch):
    F = CyclotomicField(3)
    orig = RMatrix.__init__

    def skewed(self, t_r, t_q, field):
        orig(self, t_r, t_q, field)
        self.entries[(0, 1, 1, 0)] = self.entries[(0, 1, 1, 0)] * 2

    monkeypatch.setattr(ybe.RMatrix, "__init__", skewed)
    res = verify_site_ybe([1, 2, 3, 4], [2, 1, -1, 3], 2, 5, F)
    assert any(not r.passed for r in res)


@pytest.mark.parametrize("N,L", [(2, 2), (3, 2)])
def test_exchange_relations(make_rap, N, L):
    res = verify_exchange_relations(Tau2Model(make_rap(N, L, 6)))
    assert res and all(r.passed for r in res), [r.line() for r in res if not r.passed]
