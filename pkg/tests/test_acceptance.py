"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line that is echoed after the pytest
run.  ``python tests/test_acceptance.py`` runs the same checks without pytest.
"""

import functools
import math
import os
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))
from conftest import ACCEPTANCE_LINES  # noqa: E402

from tau2pf import fendley as fd  # noqa: E402
from tau2pf import parafermions as pf  # noqa: E402
from tau2pf.cli import seeded_rapidities  # noqa: E402
from tau2pf.clock import build_X, build_Z  # noqa: E402
from tau2pf.scalars import CyclotomicField  # noqa: E402
from tau2pf.spectral import (b54_residual, companion_and_roots, labeled_eigenbasis,  # noqa: E402
                             lagrange_pinv, lambda_values, spectral_suite)
from tau2pf.tau2core import RapiditySet, Tau2Model  # noqa: E402
from tau2pf.ybe import verify_exchange_relations, verify_site_ybe  # noqa: E402

EXACT_SIZES = [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2)]
SEEDS = [0, 1, 2]
EXACT_BUDGET = 120.0
SPECTRAL_SIZES = [(2, 2), (2, 3), (3, 2)]
SPECTRAL_BUDGET = 60.0


@functools.lru_cache(maxsize=None)
def model(N, L, seed):
    return Tau2Model(seeded_rapidities(seed, 5, N, L))


def record(num, title, failures, extra=""):
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {num}: {title}"
    if extra:
        line += f" ({extra})"
    if failures:
        line += " :: " + "; ".join(failures[:5])
    ACCEPTANCE_LINES[num] = line
    print(line)
    return not failures


def bad(results, where, tol=0.0):
    return [f"{where} {r.line()}" for r in results if not r.passed or r.residual > tol]


def over_exact(check, budget=EXACT_BUDGET):
    """Run ``check(model) -> failures`` on every exact instance, timing each."""
    failures, slowest = [], 0.0
    for N, L in EXACT_SIZES:
        for seed in SEEDS:
            t0 = time.perf_counter()
            failures += check(model(N, L, seed), f"N={N} L={L} seed={seed}:")
            dt = time.perf_counter() - t0
            slowest = max(slowest, dt)
            if dt > budget:
                failures.append(f"N={N} L={L} seed={seed}: {dt:.1f}s over budget")
    return failures, f"{len(EXACT_SIZES) * len(SEEDS)} instances, slowest {slowest:.1f}s"


def test_criterion_1_mu_nu():
    failures, note = over_exact(lambda m, w: bad(pf.mu_nu_check(m, m.N * m.L), w))
    assert record(1, "t nu_j == mu_{j-1} exactly, j = 1..NL", failures, note)


def test_criterion_2_truncation():
    failures, note = over_exact(lambda m, w: bad(pf.truncation_check(m, m.N), w))
    assert record(2, "truncation sum vanishes exactly, j = 0..N", failures, note)


def test_criterion_3_closed_form():
    failures, note = over_exact(lambda m, w: bad(pf.closed_form_check(m, m.N * m.L), w))
    assert record(3, "closed form (both orderings) equals iteration exactly", failures, note)


def test_criterion_4_s_scalars():
    def check(m, w):
        s = pf.s_scalars(m)
        out = bad(s.checks, w)
        names = {r.name for r in s.checks}
        if not {"s_scalar", "s_product"} <= names or (m.N > 1 and "s_vanish" not in names):
            out.append(f"{w} missing s checks")
        return out
    failures, note = over_exact(check)
    assert record(4, "off-residue sums vanish and s_j sums are scalar, exactly", failures, note)


def _rnd(rng):
    return Fraction(rng.choice([k for k in range(-5, 6) if k]), rng.randint(1, 5))


def test_criterion_5_ybe():
    failures = []
    for N in (2, 3, 4):
        rng = random.Random(100 + N)
        F = CyclotomicField(N)
        for i in range(20):
            p = [_rnd(rng) for _ in range(4)]
            p2 = [_rnd(rng) for _ in range(4)]
            failures += bad(verify_site_ybe(p, p2, _rnd(rng), _rnd(rng), F), f"N={N} sample={i}:")
    ex, note = over_exact(lambda m, w: bad(verify_exchange_relations(m), w))
    failures += ex
    assert record(5, "site YBE (20 samples per N) and monodromy exchange relations exact",
                  failures, note)


def test_criterion_6_fendley():
    failures = []
    for N, L in [(2, 3), (3, 2)]:
        for seed in SEEDS:
            base = seeded_rapidities(seed, 5, N, L).points
            pts = [(0, 1, p[2], p[3]) for p in base]
            m = Tau2Model(RapiditySet.build(N, L, pts))
            res = [r for r in fd.limit_checks(m) if r.name in ("exclusion_A", "H_fendley")]
            failures += bad(res, f"N={N} L={L} seed={seed}:")
            ms = {r.indices.get("m") for r in res if r.name == "exclusion_A"}
            if ms != set(range(L + 1)):
                failures.append(f"N={N} L={L}: m coverage {sorted(ms)}")
    assert record(6, "exclusion sums equal A_m and H == -sum h, exactly", failures)


# criterion 7: stated tolerance per check name
SPECTRAL_TOL = {"spol_factorization": 1e-9, "labels_unique": 0.0, "raising": 1e-8,
                "annihilation": 1e-8, "lambda_1_vs_2": 1e-8, "lambda_1_vs_4": 1e-8,
                "lambda_2_vs_4": 1e-8, "q_spectral": 1e-8, "q_negative": 1e-8}


def test_criterion_7_spectral():
    failures, slowest = [], 0.0
    for N, L in SPECTRAL_SIZES:
        for seed in SEEDS:
            where = f"N={N} L={L} seed={seed}:"
            t0 = time.perf_counter()
            spec, checks = spectral_suite(model(N, L, seed))
            dt = time.perf_counter() - t0
            slowest = max(slowest, dt)
            if dt > SPECTRAL_BUDGET:
                failures.append(f"{where} {dt:.1f}s over budget")
            for name, tol in SPECTRAL_TOL.items():
                sel = [r for r in checks if r.name == name]
                if not sel:
                    failures.append(f"{where} no {name} check")
                failures += bad(sel, where, tol)
            if len(set(spec.labels)) != N ** L:
                failures.append(f"{where} labels not unique")
    note = f"{len(SPECTRAL_SIZES) * len(SEEDS)} instances, slowest {slowest:.1f}s"
    assert record(7, "spectral factorisation, labels, raising, Lambda and q identities",
                  failures, note)


def test_criterion_8_b54_report():
    failures, parts = [], []
    for N, L in [(2, 2), (3, 2)]:
        m = model(N, L, 0)
        max_abs, max_rel, count = b54_residual(m, labeled_eigenbasis(m))
        if not (math.isfinite(max_abs) and count > 0):
            failures.append(f"N={N} L={L}: no residual emitted")
        flag = "within" if max_abs <= 1e-8 else "ABOVE"
        parts.append(f"N={N} L={L} max residual {max_abs:.2e} {flag} 1e-8 over {count}")
    # report only: the residual is printed but never gates
    assert record(8, "conjecture residual reported (non-gating)", failures, "; ".join(parts))


def test_criterion_9_hand_values():
    failures = []
    rap = RapiditySet.build(2, 1, [[0, 1, 0, 2], [0, 1, 0, 3]])
    m = Tau2Model(rap)
    Z = build_Z(m.space, m.field, 1)
    X = build_X(m.space, m.field, 1)
    gam = pf.gamma_iterate(m, 2)
    if m.H != X * -6:
        failures.append("H != -6X")
    if gam[1] != Z @ X * -6:
        failures.append("Gamma_1 != -6ZX")
    if gam[2] != gam[0] * 36:
        failures.append("Gamma_2 != 36 Gamma_0")
    s = [x.rational() for x in pf.s_scalars(m).values]
    if s != [1, -36]:
        failures.append(f"s = {s}")
    comp = companion_and_roots([1, -36], 2)
    if not np.allclose(comp.matrix, [[0, 1], [36, 0]], rtol=0, atol=1e-12):
        failures.append("companion matrix")
    spec = labeled_eigenbasis(m)
    if abs(spec.roots[0] - 6) > 1e-12:
        failures.append(f"r_1 = {spec.roots[0]}")
    rows = lagrange_pinv(spec.companion.nodes)
    if not np.allclose(rows[(0, 0)], [0.5, 1 / 12], atol=1e-12):
        failures.append("pinv row (0,0)")
    table, _ = lambda_values(m, spec)
    if any(abs(e["lambda4"] - 1) > 1e-12 for e in table.values()):
        failures.append("Lambda != 1")
    assert record(9, "N=2, L=1 worked instance", failures)


if __name__ == "__main__":
    ok = True
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                ok = False
    sys.exit(0 if ok else 1)
