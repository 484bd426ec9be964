"""The Gamma_j family, its closed form, and the mu/nu and truncation identities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .checks import CheckResult, bool_check, zero_check
from .clock import Operator, commutator
from .errors import ConsistencyError
from .tau2core import OperatorPolynomial, Tau2Model


def _model(rap_or_model):
    return rap_or_model if isinstance(rap_or_model, Tau2Model) else Tau2Model(rap_or_model)


@dataclass
class GammaFamily:
    ops: list
    provenance: list = field(default_factory=list)

    def __getitem__(self, j):
        return self.ops[j]

    def __len__(self):
        return len(self.ops)


def gamma_iterate(rap, count):
    """Gamma_0 .. Gamma_count by repeated scaled commutators with H."""
    model = _model(rap)
    cache = model.__dict__.setdefault("_gamma_cache", [model.Gamma0])
    scale = model.field.one / (model.omega ** -1 - 1)
    while len(cache) <= count:
        g = cache[-1]
        cache.append(commutator(model.H, g) * scale)
    ops = cache[: count + 1]
    return GammaFamily(list(ops), ["iterated"] * len(ops))


def q_sequence(rap, count):
    """q_0 .. q_count, the coefficients of A(t)^{-1} in powers of omega t."""
    model = _model(rap)
    cache = model.__dict__.setdefault("_q_cache", [])
    inv_a0 = model.field.one / model.A0
    if not cache:
        cache.append(model.identity * inv_a0)
    while len(cache) <= count:
        l = len(cache)
        acc = model.zero
        for n in range(1, min(l, model.L) + 1):
            term = model.A(n) @ cache[l - n]
            acc = acc + term if n % 2 == 1 else acc - term
        cache.append(acc * inv_a0)
    return cache[: count + 1]


def q_at(model, l):
    """q_l with q_l = 0 for all l < 0."""
    if l < 0:
        return model.zero
    return q_sequence(model, l)[l]


def R_operators(rap):
    """R_0 .. R_{L-1}; R_m = 0 for m >= L."""
    model = _model(rap)
    cached = model.__dict__.get("_R_cache")
    if cached is None:
        left = model.Gamma0 @ model.sites[1].alpha_m
        right = model.X1 * model.d0a1
        cached = [left @ model.A_hat(m) - right @ model.C_hat(m) for m in range(model.L)]
        model.__dict__["_R_cache"] = cached
    return cached


def R_at(model, m):
    if 0 <= m < model.L:
        return R_operators(model)[m]
    return model.zero


def gamma_closed(rap, l, side="right"):
    """Gamma_l (l >= 1) from R_m and q_l; ``side`` picks the operator ordering."""
    if l < 1:
        raise ValueError("the closed form only covers l >= 1")
    model = _model(rap)
    acc = model.zero
    for m in range(min(l - 1, model.L - 1) + 1):
        if side == "right":
            term = R_at(model, m) @ q_at(model, l - 1 - m)
        elif side == "left":
            term = q_at(model, l - 1 - m) @ R_at(model, m)
        else:
            raise ValueError(f"side must be 'right' or 'left', got {side!r}")
        acc = acc + term if m % 2 == 0 else acc - term
    pref = model.omega ** l if side == "right" else model.omega
    return acc * pref


def _tol(model, tol):
    return 0.0 if model.field.exact else tol


def closed_form_check(rap, l_max=None, tol=1e-8):
    model = _model(rap)
    l_max = model.N * model.L if l_max is None else l_max
    gam = gamma_iterate(model, l_max)
    out = []
    for l in range(1, l_max + 1):
        for side in ("right", "left"):
            out.append(zero_check(f"gamma_closed_{side}",
                                  gamma_closed(model, l, side) - gam[l], _tol(model, tol),
                                  scale=gam[l], l=l))
    return out


def mu_nu_polys(model, j):
    """mu_j and nu_j as polynomials in u = -omega t."""
    g = gamma_iterate(model, j)[j]
    tau = model.tau2
    gt = OperatorPolynomial([g @ c for c in tau.coeffs])
    tg = OperatorPolynomial([c @ g for c in tau.coeffs])
    return gt - tg, gt * model.omega - tg


def mu_nu_check(rap, j_max, tol=1e-8):
    """t nu_j == mu_{j-1} coefficientwise, for 1 <= j <= j_max.

    In the u basis t = -omega^{-1} u, so the coefficient of u^l in t nu_j is
    omega^{-1} A_{l-1} Gamma_j - Gamma_j A_{l-1}; l runs over 0..L+1.
    """
    model = _model(rap)
    gam = gamma_iterate(model, j_max)
    winv = model.omega ** -1
    out = []
    for j in range(1, j_max + 1):
        for l in range(0, model.L + 2):
            lhs, scale = model.zero, 0.0
            if l >= 1:
                a = model.A(l - 1)
                lhs = a @ gam[j] * winv - gam[j] @ a
                if not model.field.exact:
                    scale = a.max_abs() * gam[j].max_abs()
            rhs = gam[j - 1] @ model.A(l) - model.A(l) @ gam[j - 1]
            if not model.field.exact:
                scale = max(scale, model.A(l).max_abs() * gam[j - 1].max_abs())
            out.append(zero_check("mu_nu", lhs - rhs, _tol(model, tol), scale=scale, j=j, l=l))
    return out


def hmn_check(rap, j_max, tol=1e-8):
    """H-commutator ladder of the mu_j and nu_j sequences."""
    model = _model(rap)
    H = model.H
    factor = model.omega ** -1 - 1
    out = []
    polys = [mu_nu_polys(model, j) for j in range(j_max + 2)]
    for j in range(j_max + 1):
        for k, name in enumerate(("hmn_mu", "hmn_nu")):
            p, p_next = polys[j][k], polys[j + 1][k]
            lhs = (H @ p) - (p @ H)
            out.append(zero_check(name, lhs - p_next * factor, _tol(model, tol), scale=lhs, j=j))
    return out


def recursion_check(rap, j_max, tol=1e-8):
    """Gamma_j A_1 - A_1 Gamma_j == (omega^{-1} - 1) A_0 Gamma_{j+1}."""
    model = _model(rap)
    gam = gamma_iterate(model, j_max + 1)
    factor = (model.omega ** -1 - 1) * model.A0
    out = []
    for j in range(j_max + 1):
        rhs = gam[j + 1] * factor
        out.append(zero_check("gamma_recursion", commutator(gam[j], model.A(1)) - rhs,
                              _tol(model, tol), scale=rhs, j=j))
    return out


def q0_check(rap, l_max, tol=1e-8):
    """sum_n (-1)^n A_n q_{l-n} == delta_{l,0} for 0 <= l <= l_max."""
    model = _model(rap)
    out = []
    for l in range(l_max + 1):
        acc = model.identity * (-1) if l == 0 else model.zero
        terms = []
        for n in range(0, min(l, model.L) + 1):
            term = model.A(n) @ q_at(model, l - n)
            terms.append(term)
            acc = acc + term if n % 2 == 0 else acc - term
        out.append(zero_check("q0", acc, _tol(model, tol), scale=terms, l=l))
    return out


def commutator_R_check(rap, tol=1e-8):
    """Both forms of [A_1, R_m] for 0 <= m <= L-1."""
    model = _model(rap)
    w, A0 = model.omega, model.A0
    one = model.field.one
    out = []
    for m in range(model.L):
        lhs = commutator(model.A(1), R_at(model, m))
        rhs1 = (R_at(model, 0) @ model.A(m + 1) - R_at(model, m + 1) * A0) * ((one - w ** -1) * w)
        rhs2 = (model.A(m + 1) @ R_at(model, 0) - R_at(model, m + 1) * A0) * (one - w ** -1)
        out.append(zero_check("comR1", lhs - rhs1, _tol(model, tol), scale=[lhs, rhs1], m=m))
        out.append(zero_check("comR2", lhs - rhs2, _tol(model, tol), scale=[lhs, rhs2], m=m))
    return out


def proof_step_checks(rap, tol=1e-8):
    """Site-1 splitting identities used in the derivations."""
    model = _model(rap)
    t = _tol(model, tol)
    w, one = model.omega, model.field.one
    s1 = model.sites[1]
    G0, X1, da = model.Gamma0, model.X1, model.d0a1
    am, bm = s1.alpha_m, s1.beta_m
    gam = gamma_iterate(model, 1)
    out = []
    out.append(zero_check("gamma1", gam[1] * model.A0 -
                          (G0 @ am @ model.A_hat(0) - X1 @ model.C_hat(0) * da) * w, t))
    out.append(zero_check("commu", bm @ X1 - X1 @ bm * w, t, which="beta_X"))
    out.append(zero_check("commu", am @ G0 - G0 @ am * w, t, which="alpha_Gamma0"))
    out.append(zero_check("beta", bm @ G0 @ am - G0 @ am @ bm * w -
                          am @ X1 * ((one - w) * da), t))
    out.append(zero_check("comb", bm @ G0 - G0 @ bm + X1 * ((w - one) * da), t))
    ap = s1.alpha_p
    a_plus = ap.entry(0, 0)
    for l in range(model.L + 1):
        out.append(zero_check("A_split", model.A(l) - (
            ap @ model.A_hat(l) + am @ model.A_hat(l - 1) + bm @ model.C_hat(l - 1)), t, l=l))
    out.append(zero_check("A1_split", model.H * (-model.A0) - (
        ap @ model.A_hat(1) + am @ model.A_hat(0) + bm @ model.C_hat(0)), t))
    inv_a0 = one / model.A0
    for l in range(1, model.L + 2):
        lhs = G0 @ model.A(l) - model.A(l) @ G0
        rhs = (G0 @ am @ model.A_hat(l - 1) - X1 @ model.C_hat(l - 1) * da) * (one - w)
        out.append(zero_check("eq48a", lhs - rhs, t, scale=[lhs, rhs], l=l))
        lhs_b = model.A(l - 1) @ gam[1] * (w ** -1) - gam[1] @ model.A(l - 1)
        Ah, Ch = model.A_hat, model.C_hat
        bracket = (G0 @ (ap @ Ah(0)) @ am @ Ah(l - 1) * (one - w)
                   + (bm @ G0 @ am - G0 @ am @ bm * w) @ Ah(0) @ Ch(l - 2)
                   + X1 @ (Ch(0) @ Ah(l - 1) * w - Ah(l - 1) @ Ch(0)) * (a_plus * da)
                   + am @ X1 @ (Ch(0) @ Ah(l - 2) * w - Ah(l - 2) @ Ch(0)) * da)
        out.append(zero_check("eq48b", lhs_b - bracket * inv_a0, t, scale=lhs_b, l=l))
        out.append(zero_check("eq48b", lhs_b - lhs, t, scale=lhs, l=l, form="equal_48a"))
    return out


@dataclass
class SScalars:
    values: list
    checks: list

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)


def _a_products(model):
    """Memoised ordered products A_{l_1} ... A_{l_k} keyed by index tuples."""
    memo = model.__dict__.setdefault("_aprod_cache", {(): model.identity})

    def get(key):
        if key not in memo:
            memo[key] = get(key[:-1]) @ model.A(key[-1])
        return memo[key]
    return get


def s_scalars(rap, tol=1e-8):
    """s_0 .. s_L from the N-fold sum, with the scalar and vanishing checks.

    The N-fold sum runs over all index tuples (l_1, ..., l_N) in [0, L]^N.
    Independently, the product prod_n tau_2(omega^n t) is formed as a
    polynomial and compared with sum_j s_j t^{Nj}.
    """
    model = _model(rap)
    N, L, f = model.N, model.L, model.field
    t = _tol(model, tol)
    prod = _a_products(model)
    sums, mags = {}, {}
    for ls in itertools.product(range(L + 1), repeat=N):
        weight = f.omega_power(sum((i + 1) * l for i, l in enumerate(ls)))
        m = sum(ls)
        term = prod(ls) * weight
        sums[m] = sums[m] + term if m in sums else term
        if not f.exact:
            mags[m] = max(mags.get(m, 0.0), term.max_abs())
    checks, values = [], []
    for m in range(N * L + 1):
        if m % N:
            checks.append(zero_check("s_vanish", sums[m], t, scale=mags.get(m), m=m))
            continue
        j = m // N
        op = sums[m] * (-1) ** (j * N)
        val = op.entry(0, 0)
        res = zero_check("s_scalar", op - model.identity * val, t, scale=mags.get(m), j=j)
        checks.append(res)
        if model.field.exact and not res.passed:
            raise ConsistencyError(f"s_{j} sum is not proportional to the identity")
        values.append(val)
    poly = None
    for n in range(N):
        p = model.tau2.rescale(f.omega_power(n))
        poly = p if poly is None else poly @ p
    target = [model.zero] * (N * L + 1)
    for j, v in enumerate(values):
        target[N * j] = model.identity * (v * (-1) ** (N * j))
    checks.append(zero_check("s_product", poly - OperatorPolynomial(target), t, scale=poly))
    if values[0] != model.A0 ** N and model.field.exact:
        raise ConsistencyError("s_0 differs from A_0^N")
    return SScalars(values, checks)


def truncation_check(rap, j_max=None, s=None, tol=1e-8):
    """sum_l s_l Gamma_{NL - lN + j} == 0 for 0 <= j <= j_max (default N).

    Every j is checked against the iterated family.  For j = 0 the sum is
    also rebuilt from its two-part split (the all-L term plus the R_m q
    expansion), the inner sum is collapsed with the q-recursion, and the two
    surviving pieces are checked to cancel.  For j > 0 the closed form of
    Gamma is used as a second route.
    """
    model = _model(rap)
    N, L, f = model.N, model.L, model.field
    j_max = N if j_max is None else j_max
    t = _tol(model, tol)
    s = s or s_scalars(model, tol)
    NL = N * L
    gam = gamma_iterate(model, NL + j_max)
    out = []
    for j in range(j_max + 1):
        K, terms = model.zero, []
        for l in range(L + 1):
            terms.append(gam[NL - l * N + j] * s[l])
            K = K + terms[-1]
        out.append(zero_check("truncation", K, t, scale=terms, j=j))
        if j > 0:
            Kc, terms = model.zero, []
            for l in range(L + 1):
                terms.append(gamma_closed(model, NL - l * N + j, "right") * s[l])
                Kc = Kc + terms[-1]
            out.append(zero_check("truncation_closed", Kc, t, scale=terms, j=j))

    # ingredients of the j = 0 cancellation
    top_alpha = model.identity
    for j in range(2, L + 1):
        top_alpha = top_alpha @ model.sites[j].alpha_m
    out.append(zero_check("hat_top", model.C_hat(L - 1), t, which="C_hat"))
    out.append(zero_check("hat_top", model.A_hat(L - 1) - top_alpha, t, which="A_hat"))
    out.append(zero_check("R_top", R_at(model, L - 1) - model.Gamma0 @ model.A(L), t))

    K0, k_terms = model.zero, []
    for l in range(L + 1):
        k_terms.append(gam[NL - l * N] * s[l])
        K0 = K0 + k_terms[-1]
    AL = model.A(L)
    part1 = model.Gamma0 @ (AL ** N) * (f.omega_power(N * (N + 1) * L // 2) * (-1) ** (N * L))
    prod = _a_products(model)
    rq_memo = {}
    split = model.zero
    for ls in itertools.product(range(L + 1), repeat=N):
        if all(l == L for l in ls):
            continue
        total = sum(ls)
        weight = f.omega_power(sum(i * l for i, l in enumerate(ls)))
        for m in range(L):
            k = NL - m - total - 1
            if k < 0:
                continue
            if (m, k) not in rq_memo:
                rq_memo[m, k] = R_at(model, m) @ q_at(model, k)
            term = rq_memo[m, k] @ prod(ls) * (weight * (-1) ** (m + total))
            split = split + term
    out.append(zero_check("K_split", K0 - (part1 + split), t, scale=[part1, split] + k_terms))
    collapsed = model.zero
    for ls in itertools.product(range(L + 1), repeat=N - 1):
        for m in range(L):
            if m + sum(ls) != NL - 1:
                continue
            weight = f.omega_power(sum((i + 1) * l for i, l in enumerate(ls)))
            collapsed = collapsed + R_at(model, m) @ prod(ls) * (weight * (-1) ** (m + sum(ls)))
    out.append(zero_check("K_collapse", split - collapsed, t, scale=[split, collapsed] + k_terms))
    part2 = model.Gamma0 @ (AL ** N) * (f.omega_power(N * (N - 1) * L // 2) * (-1) ** (N * L - 1))
    out.append(zero_check("K_collapse", collapsed - part2, t, scale=part2, form="closed"))
    out.append(zero_check("K_cancel", part1 + part2, t, scale=part1))
    return out
