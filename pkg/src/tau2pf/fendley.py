"""The limit a_j = 0, b_j = 1: h-operators, exclusion-rule expansion of the
transfer matrix, and the shift-operator decomposition of the raising operators.

Products in the exclusion sum multiply in ascending site order.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .checks import bool_check, scalar_check, zero_check
from .clock import Operator, build_X, build_Z
from .errors import ConfigError, DegeneracyError
from .spectral import DEGENERACY_GAP, hatted_gamma, lagrange_pinv, mu_roots
from .tau2core import RapiditySet, Tau2Model


def fendley_rapidities(N, L, c, d, backend="exact"):
    """RapiditySet with a_j = 0, b_j = 1 and the given c_j, d_j (length 2L each)."""
    if len(c) != 2 * L or len(d) != 2 * L:
        raise ConfigError("c/d", f"need {2 * L} values of c and d")
    return RapiditySet.build(N, L, [(0, 1, cj, dj) for cj, dj in zip(c, d)], backend)


def is_limit(rap):
    f = rap.field
    return all(rap.a(j) == f.zero and rap.b(j) == f.one for j in range(2 * rap.L))


def _model(rap_or_model):
    return rap_or_model if isinstance(rap_or_model, Tau2Model) else Tau2Model(rap_or_model)


def h_couplings(rap):
    """Scalar prefactors of h_1 .. h_{2L-1}."""
    out = []
    for i in range(1, 2 * rap.L):
        j = (i + 1) // 2
        if i % 2:
            out.append(rap.d(2 * j - 2) * rap.d(2 * j - 1))
        else:
            out.append(rap.c(2 * j - 1) * rap.c(2 * j))
    return out


def build_h(model):
    """h_{2j-1} = d_{2j-2} d_{2j-1} X_j and h_{2j} = c_{2j-1} c_{2j} Z_j Z_{j+1}^{-1}."""
    model = _model(model)
    rap, space, f = model.rap, model.space, model.field
    if not is_limit(rap):
        raise ConfigError("rapidities", "h-operators need a_j = 0 and b_j = 1 for all j")
    coup = h_couplings(rap)
    h = []
    for i in range(1, 2 * model.L):
        j = (i + 1) // 2
        if i % 2:
            op = build_X(space, f, j)
        else:
            op = build_Z(space, f, j) @ build_Z(space, f, j + 1).inverse_monomial()
        h.append(op * coup[i - 1])
    return h


def exclusion_tuples(L, m):
    """Index tuples i_1 < ... < i_m in 1..2L-1 with neighbours at least two apart."""
    if not 0 <= m <= L:
        raise ValueError(f"m must lie in 0..{L}, got {m}")
    return [t for t in itertools.combinations(range(1, 2 * L), m)
            if all(b - a >= 2 for a, b in zip(t, t[1:]))]


def exclusion_sum(model, m, h=None):
    """A_m as the sum of ascending ordered products of h over exclusion tuples."""
    model = _model(model)
    h = build_h(model) if h is None else h
    total = Operator.zero(model.space, model.field)
    for tup in exclusion_tuples(model.L, m):
        prod = model.identity
        for i in tup:
            prod = prod @ h[i - 1]
        total = total + prod
    return total


def limit_checks(rap, tol=1e-10):
    """h-algebra, exclusion expansion of every A_m, and H == -sum h."""
    model = _model(rap)
    f = model.field
    t = 0.0 if f.exact else tol
    h = build_h(model)
    w = model.omega
    winv = f.one / w
    out = []
    for i in range(len(h)):
        for k in range(i + 1, len(h)):
            hk = h[i] @ h[k]
            kh = h[k] @ h[i]
            if k == i + 1:
                out.append(zero_check("h_algebra", hk - kh * winv, t, i=i + 1, k=k + 1,
                                      form="omega_commute"))
            else:
                out.append(zero_check("h_algebra", hk - kh, t, i=i + 1, k=k + 1, form="commute"))
    for i, (hi, cp) in enumerate(zip(h, h_couplings(model.rap))):
        out.append(zero_check("h_algebra", hi ** model.N - model.identity * cp ** model.N, t,
                              i=i + 1, form="power"))
    for m in range(model.L + 1):
        n_terms = len(exclusion_tuples(model.L, m))
        out.append(bool_check("exclusion_A", n_terms == comb(2 * model.L - m, m),
                              f"{n_terms} tuples", m=m, form="count"))
        out.append(zero_check("exclusion_A", exclusion_sum(model, m, h) - model.A(m), t, m=m))
    neg = Operator.zero(model.space, f)
    for hi in h:
        neg = neg - hi
    out.append(zero_check("H_fendley", model.H - neg, t))
    return out


def exclusion_s_polynomial(rap):
    """Coefficients (-1)^l E_l, E_l = sum over exclusion tuples of prod coupling^N.

    The roots of sum_l (-1)^l E_l mu^{L-l} are the u_k = r_k^N of the limit model.
    """
    coup = [complex(x) ** rap.N for x in h_couplings(rap)]
    return [(-1) ** l * sum(np.prod([coup[i - 1] for i in tup]) for tup in exclusion_tuples(rap.L, l))
            for l in range(rap.L + 1)]


def u_roots_check(rap, spectrum=None, tol=1e-10):
    """u_k from the exclusion polynomial against the general engine's mu-roots."""
    from .parafermions import s_scalars
    model = _model(rap)
    u = mu_roots(exclusion_s_polynomial(model.rap))
    mu = spectrum.companion.mu if spectrum is not None else mu_roots(s_scalars(model).values)
    worst = 0.0
    for x in u:
        worst = max(worst, min(abs(x - y) for y in mu) / max(1.0, abs(x)))
    for y in mu:
        worst = max(worst, min(abs(x - y) for x in u) / max(1.0, abs(y)))
    return [scalar_check("u_roots", worst, tol)]


def vandermonde_X(roots, N):
    """X_{l,k} = (r_k^N)^l."""
    u = np.asarray(roots, dtype=complex) ** N
    return np.vander(u, len(u), increasing=True).T


def factorized_pinv(roots, N, gap=DEGENERACY_GAP):
    """P^{-1}_{(p,k), lN+q} = (1/N) (X^{-1})_{k,l} (r_k w^p)^{-q}."""
    roots = np.asarray(roots, dtype=complex)
    L = len(roots)
    u = roots ** N
    for a, b in itertools.combinations(range(L), 2):
        if abs(u[a] - u[b]) <= gap * max(abs(u[a]), abs(u[b])):
            raise DegeneracyError("coincident r_k^N")
    Xinv = np.linalg.inv(vandermonde_X(roots, N))
    w = np.exp(2j * np.pi / N)
    rows = {}
    for k in range(L):
        for p in range(N):
            row = np.zeros(N * L, dtype=complex)
            for l in range(L):
                for q in range(N):
                    row[l * N + q] = Xinv[k, l] * (roots[k] * w ** p) ** (-q) / N
            rows[(p, k)] = row
    return rows


def phi_operators(model, roots, N):
    """Phi_k^{(s)} = (1/N) sum_l (X^{-1})_{k,l} Gamma_{lN+s}, dense; keyed (k, s)."""
    from .parafermions import gamma_iterate
    model = _model(model)
    L = len(roots)
    gam = [g.to_complex() for g in gamma_iterate(model, N * L - 1).ops]
    Xinv = np.linalg.inv(vandermonde_X(roots, N))
    return {(k, s): sum(Xinv[k, l] * gam[l * N + s] for l in range(L)) / N
            for k in range(L) for s in range(N)}


def phi_shift_decomposition(model, spectrum, tol=1e-10):
    """Factorised P^{-1} against the Lagrange rows, and Gamma-hat rebuilt from Phi.

    Returns a dict with the Phi operators, the factorised rows and the checks.
    Operator residuals are relative to sum_j |P^{-1}_{ij}| ||Gamma_j||, the
    scale of the underlying coefficient sum.
    """
    model = _model(model)
    N, L = spectrum.N, spectrum.L
    roots = spectrum.roots
    rows = factorized_pinv(roots, N)
    ref = lagrange_pinv(spectrum.companion.nodes)
    worst = max(np.max(np.abs(rows[key] - ref[key])) / max(1.0, np.max(np.abs(ref[key])))
                for key in ref)
    checks = [scalar_check("pinv_factorized", worst, tol)]
    unity = sum(rows.values())
    e0 = np.zeros_like(unity)
    e0[0] = 1.0
    scale = max(1.0, float(np.max(sum(np.abs(r) for r in rows.values()))))
    checks.append(scalar_check("pinv_factorized", np.max(np.abs(unity - e0)) / scale, tol,
                               form="unity"))

    phi = phi_operators(model, roots, N)
    from .parafermions import gamma_iterate
    norms = [np.linalg.norm(g.to_complex(), 2) for g in gamma_iterate(model, N * L - 1).ops]
    w = spectrum.omega
    worst = 0.0
    for k in range(L):
        for p in range(N):
            G = hatted_gamma(model, spectrum, p, k, method="sum")
            rebuilt = sum((roots[k] * w ** p) ** (-s) * phi[(k, s)] for s in range(N))
            scale = max(1.0, float(np.dot(np.abs(ref[(p, k)]), norms)))
            worst = max(worst, np.max(np.abs(G - rebuilt)) / scale)
    checks.append(scalar_check("phi_decomposition", worst, tol))
    return {"phi": phi, "pinv": rows, "checks": checks}
