"""Spectral machinery on the float backend.

Companion matrix and its roots, Lagrange (Vandermonde-inverse) rows, the
labeled eigenbasis of H, cyclic raising operators, the Lambda constants and
the four-term conjecture residual.

Gauge conventions: r_k is the principal N-th root of the k-th root mu_k of
the s-polynomial, roots are ordered by (|mu|, arg mu); right eigenvectors are
unit-normalised with their first non-negligible component real positive;
left eigenvectors are the rows of the inverse eigenvector matrix.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.optimize import linear_sum_assignment

from .checks import CheckResult, scalar_check
from .errors import DegeneracyError, LabelingError, SingularModelError
from .parafermions import R_operators, gamma_iterate, q_sequence, s_scalars
from .tau2core import Tau2Model

DEGENERACY_GAP = 1e-7
LABEL_TOL = 1e-6
MP_DPS = 50


def _model(rap_or_model):
    return rap_or_model if isinstance(rap_or_model, Tau2Model) else Tau2Model(rap_or_model)


def _omega(N):
    return cmath.exp(2j * cmath.pi / N)


def companion_matrix(s, N):
    """NL x NL matrix with ones on the superdiagonal and last row -s_{L-j}/s_0 at column jN."""
    s = [complex(x) for x in s]
    L = len(s) - 1
    n = N * L
    if s[0] == 0:
        raise SingularModelError("s_0 vanishes")
    H = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        H[i, i + 1] = 1.0
    for j in range(L):
        H[n - 1, j * N] = -s[L - j] / s[0]
    return H


def mu_roots(s, gap=DEGENERACY_GAP):
    """Roots of s_0 mu^L + s_1 mu^{L-1} + ... + s_L via companion eigenvalues."""
    s = np.array([complex(x) for x in s])
    L = len(s) - 1
    C = np.zeros((L, L), dtype=complex)
    C[0, :] = -s[1:] / s[0]
    if L > 1:
        C[1:, :-1] = np.eye(L - 1)
    mu = np.linalg.eigvals(C)
    if np.any(np.abs(mu) == 0) or np.any(np.abs(mu) < 1e-300):
        raise SingularModelError("zero root in the s-polynomial")
    mu = np.array(sorted(mu, key=lambda z: (round(abs(z), 12), cmath.phase(z))))
    for a, b in itertools.combinations(range(L), 2):
        if abs(mu[a] - mu[b]) <= gap * max(abs(mu[a]), abs(mu[b])):
            raise DegeneracyError(f"roots mu_{a} and mu_{b} coincide within {gap:g}")
    return mu


@dataclass
class CompanionData:
    matrix: np.ndarray
    mu: np.ndarray
    roots: np.ndarray
    nodes: list          # [(p, k, lambda)] with lambda = r_k omega^p
    checks: list = field(default_factory=list)


def companion_and_roots(s, N, gap=DEGENERACY_GAP, tol=1e-9):
    """Companion matrix, roots r_k, and the eigen-structure checks."""
    s = [complex(x) for x in s]
    L = len(s) - 1
    Hc = companion_matrix(s, N)
    mu = mu_roots(s, gap)
    r = np.array([mu_k ** (1.0 / N) for mu_k in mu])
    w = _omega(N)
    nodes = [(p, k, r[k] * w ** p) for k in range(L) for p in range(N)]
    checks = []

    # factorisation s_0 prod (lambda^N - r^N) against the s coefficients
    poly = np.array([s[0]])
    for k in range(L):
        poly = np.convolve(poly, np.array([1.0, -r[k] ** N]))
    scale = max(abs(x) for x in s)
    checks.append(scalar_check("spol_factorization",
                               np.max(np.abs(poly - np.array(s))) / scale, tol))

    ev = np.linalg.eigvals(Hc)
    lam = np.array([z for _, _, z in nodes])
    cost = np.abs(ev[:, None] - lam[None, :])
    rows, cols = linear_sum_assignment(cost)
    rscale = max(1.0, float(np.max(np.abs(lam))))
    checks.append(scalar_check("companion_spectrum", cost[rows, cols].max() / rscale, tol))
    worst = 0.0
    for _, _, z in nodes:
        v = z ** np.arange(N * L)
        scale = max(max(1.0, abs(z)) * np.linalg.norm(v), float(np.abs(Hc[-1]) @ np.abs(v)))
        worst = max(worst, np.linalg.norm(Hc @ v - z * v) / scale)
    checks.append(scalar_check("vandermonde_eigvec", worst, tol))
    return CompanionData(Hc, mu, r, nodes, checks)


def lagrange_pinv(nodes, gap=DEGENERACY_GAP, tol=1e-9):
    """Rows of P^{-1}: coefficients (low degree first) of the Lagrange polynomials.

    ``nodes`` is a list of complex values or of (p, k, value) triples; the
    returned dict is keyed by position in ``nodes`` (or by (p, k)).
    """
    keyed = [((n[0], n[1]), complex(n[2])) if isinstance(n, tuple) else (i, complex(n))
             for i, n in enumerate(nodes)]
    vals = np.array([v for _, v in keyed])
    n = len(vals)
    for a, b in itertools.combinations(range(n), 2):
        if abs(vals[a] - vals[b]) <= gap * max(abs(vals[a]), abs(vals[b])):
            raise DegeneracyError("coincident interpolation nodes")
    rows = {}
    for i, (key, lam) in enumerate(keyed):
        others = np.delete(vals, i)
        coeffs = np.poly(others)[::-1] if n > 1 else np.array([1.0 + 0j])
        rows[key] = coeffs / np.prod(lam - others)
    return rows


def pinv_checks(rows, nodes, tol=1e-9):
    """P^{-1} P == 1 and sum_i f_i == 1.

    Each entry of P^{-1} P is a sum sum_j f_{i,j} lambda^j; its error is
    measured relative to sum_j |f_{i,j} lambda^j|, the scale at which the
    monomial sum cancels.
    """
    keyed = [((n[0], n[1]), complex(n[2])) if isinstance(n, tuple) else (i, complex(n))
             for i, n in enumerate(nodes)]
    worst = 0.0
    for key, _ in keyed:
        row = rows[key]
        for key2, lam2 in keyed:
            terms = row * lam2 ** np.arange(len(row))
            err = abs(terms.sum() - (1.0 if key == key2 else 0.0))
            worst = max(worst, err / max(1.0, np.sum(np.abs(terms))))
    total = sum(rows.values())
    unity = np.zeros_like(total)
    unity[0] = 1.0
    scale = max(1.0, float(np.max(sum(np.abs(r) for r in rows.values()))))
    return [scalar_check("pinv_lagrange", worst, tol, form="delta"),
            scalar_check("pinv_lagrange", np.max(np.abs(total - unity)) / scale, tol, form="unity")]


@dataclass
class SpectrumData:
    N: int
    L: int
    A0: complex
    companion: CompanionData
    roots: np.ndarray
    energies: np.ndarray
    right: np.ndarray            # columns are right eigenvectors
    left: np.ndarray             # rows are left eigenvectors (left @ right = I)
    labels: list                 # labels[i] = (n_1, ..., n_L) of column i
    index: dict                  # label -> column
    pinv: dict                   # (p, k) -> P^{-1} row
    ops: dict                    # dense float copies of the operators in use
    checks: list = field(default_factory=list)

    @property
    def omega(self):
        return _omega(self.N)

    def state(self, label):
        return self.index[tuple(x % self.N for x in label)]

    def element(self, op, bra_label, ket_label):
        """<bra| op |ket> with biorthonormal left/right vectors."""
        return self.left[self.state(bra_label)] @ op @ self.right[:, self.state(ket_label)]


def _dense(op):
    return op.to_complex()


def _gauge(V):
    V = V / np.linalg.norm(V, axis=0)
    for i in range(V.shape[1]):
        col = V[:, i]
        j = int(np.argmax(np.abs(col) > 1e-8 * np.max(np.abs(col))))
        V[:, i] = col * (abs(col[j]) / col[j])
    return V


def labeled_eigenbasis(rap, gap=DEGENERACY_GAP, label_tol=LABEL_TOL, tol=1e-8):
    """Diagonalise H and label each eigenvector by its mode digits {n_i}."""
    model = _model(rap)
    N, L = model.N, model.L
    w = _omega(N)
    svals = s_scalars(model).values
    comp = companion_and_roots(svals, N, gap)
    r = comp.roots
    A = [_dense(model.A(l)) for l in range(L + 1)]
    A0 = complex(model.A0)
    H = _dense(model.H)
    E, V = np.linalg.eig(H)
    V = _gauge(V)
    U = np.linalg.inv(V)
    checks = list(comp.checks)
    checks.append(scalar_check("biorthonormal",
                               np.max(np.abs(U @ V - np.eye(len(E)))), tol))

    cands = [(k, n, r[k] * w ** (n + 1)) for k in range(L) for n in range(N)]
    labels, index = [], {}
    fact_worst = 0.0
    for i in range(len(E)):
        v, u = V[:, i], U[i]
        a = np.array([u @ A[l] @ v for l in range(L + 1)])
        coeffs_t = a * (-w) ** np.arange(L + 1)        # polynomial in t, low first
        troots = np.roots(coeffs_t[::-1])
        digits = [None] * L
        for tr in troots:
            z = 1.0 / tr
            dist = [(abs(z - c) / abs(c), k, n) for k, n, c in cands]
            dist.sort()
            if dist[0][0] > label_tol:
                raise LabelingError(f"eigenvector {i}: root {z} matches no r_k omega^n")
            if len(dist) > 1 and dist[1][0] <= label_tol:
                raise LabelingError(f"eigenvector {i}: ambiguous label for root {z}")
            _, k, n = dist[0]
            if digits[k] is not None:
                raise LabelingError(f"eigenvector {i}: mode {k} matched twice")
            digits[k] = n
        if any(d is None for d in digits):
            raise LabelingError(f"eigenvector {i}: incomplete label")
        lab = tuple(digits)
        # eigenvalue polynomial versus A_0 prod (1 - r omega^{n+1} t)
        expect = np.array([A0])
        for k in range(L):
            expect = np.convolve(expect, np.array([1.0, -r[k] * w ** (lab[k] + 1)]))
        fact_worst = max(fact_worst, np.max(np.abs(expect - coeffs_t)) /
                         max(1.0, np.max(np.abs(coeffs_t))))
        labels.append(lab)
        index[lab] = i
    checks.append(scalar_check("labels_unique", 0.0 if len(index) == N ** L else 1.0, 0.0))
    checks.append(scalar_check("H_eigenvalue", fact_worst, tol, form="tau2_factorization"))
    worst = 0.0
    for i, lab in enumerate(labels):
        e = -sum(w ** lab[k] * r[k] for k in range(L))
        worst = max(worst, np.linalg.norm(H @ V[:, i] - e * V[:, i]) / max(1.0, abs(e)))
    checks.append(scalar_check("H_eigenvalue", worst, tol))
    if len(index) != N ** L:
        raise LabelingError("labels are not unique")

    pinv = lagrange_pinv(comp.nodes, gap)
    checks += pinv_checks(pinv, comp.nodes)
    ops = {"H": H, "A": A}
    return SpectrumData(N, L, A0, comp, r, E, V, U, labels, index, pinv, ops, checks)


def omega_weight(spec, digits, k):
    """Omega_k on a state: 1 / [A_0 prod_{i != k} (1 - u_i/u_k)], u_i = r_i omega^{n_i}."""
    w = spec.omega
    u = [spec.roots[i] * w ** digits[i] for i in range(spec.L)]
    den = spec.A0
    for i in range(spec.L):
        if i != k:
            den *= 1 - u[i] / u[k]
    return 1.0 / den


def q_spectral_check(rap, spec, tol=1e-8):
    """<u|q_m|v> == sum_l Omega_l u_l^m for 0 <= m <= 2L; the sum vanishes for -L < m < 0.

    Residuals are relative to the largest single term of the sum.
    """
    model = _model(rap)
    L, w = spec.L, spec.omega
    qs = [_dense(q) for q in q_sequence(model, 2 * L)]
    worst, worst_neg = 0.0, 0.0
    for i, lab in enumerate(spec.labels):
        v, u = spec.right[:, i], spec.left[i]
        modes = [spec.roots[l] * w ** lab[l] for l in range(L)]
        weights = [omega_weight(spec, lab, l) for l in range(L)]
        for m in range(-L + 1, 2 * L + 1):
            terms = [weights[l] * modes[l] ** m for l in range(L)]
            scale = max(abs(x) for x in terms)
            pred = sum(terms)
            if m < 0:
                worst_neg = max(worst_neg, abs(pred) / scale)
            else:
                worst = max(worst, abs(u @ qs[m] @ v - pred) / scale)
    return [scalar_check("q_spectral", worst, tol),
            scalar_check("q_negative", worst_neg, tol)]


def q_inverse_check(rap, tol=1e-10):
    """Q(t) A(t) == 1 through order t^{2L} on dense float copies."""
    model = _model(rap)
    L = model.L
    qs = [_dense(q) for q in q_sequence(model, 2 * L)]
    A = [_dense(model.A(l)) for l in range(L + 1)]
    dim = A[0].shape[0]
    worst = 0.0
    for m in range(2 * L + 1):
        acc = -np.eye(dim) if m == 0 else np.zeros((dim, dim), dtype=complex)
        for l in range(min(m, L) + 1):
            acc = acc + (-1) ** l * A[l] @ qs[m - l]
        scale = max(1.0, max(np.max(np.abs(A[l] @ qs[m - l])) for l in range(min(m, L) + 1)))
        worst = max(worst, np.max(np.abs(acc)) / scale)
    return [scalar_check("Q_inverse", worst, tol)]


def gamma_dense(model, count):
    return [_dense(g) for g in gamma_iterate(model, count).ops]


def hatted_gamma(rap, spec, p, k, method="factored", dps=MP_DPS):
    """Cyclic raising operator Gamma-hat_{p,k} = sum_j P^{-1}_{(p,k), j} Gamma_j.

    With Gamma_j = D^j Gamma_0, D = (w^{-1} - 1)^{-1} [H, .], the sum is the
    Lagrange polynomial f_{p,k}(D) applied to Gamma_0.  ``method="factored"``
    applies the product form prod_{i != (p,k)} (D - lambda_i)/(lambda_{pk} - lambda_i)
    one factor at a time; ``method="sum"`` evaluates the coefficient sum
    literally in double precision.

    f_{p,k} is large away from the nodes, so rounding in H or Gamma_0 at
    non-node transition frequencies is magnified (see noise_amplification).
    For exact models the factored product is therefore evaluated with
    ``dps`` significant digits from the exact operators and high-precision
    roots, and only the result is rounded to complex128.
    """
    model = _model(rap)
    p = p % spec.N
    if method == "sum":
        key = ("gamma_dense",)
        if key not in spec.ops:
            spec.ops[key] = gamma_dense(model, spec.N * spec.L - 1)
        gam = spec.ops[key]
        row = spec.pinv[(p, k)]
        return sum(row[j] * gam[j] for j in range(len(gam)))
    if method != "factored":
        raise ValueError(f"unknown method {method!r}")
    if model.field.exact and dps:
        return _hatted_gamma_mp(model, spec, p, k, dps)
    H = spec.ops["H"]
    c = 1.0 / (1.0 / spec.omega - 1.0)
    lam = spec.roots[k] * spec.omega ** p
    G = _dense(model.Gamma0)
    for (p2, k2, z) in spec.companion.nodes:
        if (p2, k2) == (p, k):
            continue
        G = (c * (H @ G - G @ H) - z * G) / (lam - z)
    return G


def _mp_cyc(x, w):
    return sum(mpmath.mpf(c.numerator) / c.denominator * w[k] for k, c in enumerate(x.coeffs) if c)


def _mp_operator(op, w):
    out = np.full(op.num.shape[1:], mpmath.mpc(0), dtype=object)
    for k in range(op.num.shape[0]):
        if op.num[k].any():
            out = out + op.num[k].astype(object) * w[k]
    return out / op.den


def _mp_data(model, spec, dps):
    key = ("mp", dps)
    if key not in spec.ops:
        N = spec.N
        with mpmath.workdps(dps):
            w = [mpmath.expjpi(mpmath.mpf(2 * k) / N) for k in range(max(N, model.field.degree))]
            svals = [_mp_cyc(x, w) for x in s_scalars(model).values]
            mu = mpmath.polyroots(svals, maxsteps=200, extraprec=4 * dps)
            mu = mu if isinstance(mu, list) else [mu]
            # align with the double-precision ordering
            order = [min(range(len(mu)), key=lambda i: abs(complex(mu[i]) - m))
                     for m in spec.companion.mu]
            r = [mu[i] ** (mpmath.mpf(1) / N) for i in order]
            nodes = {(p, k): r[k] * w[p % N] for k in range(spec.L) for p in range(N)}
            spec.ops[key] = {"H": _mp_operator(model.H, w), "G0": _mp_operator(model.Gamma0, w),
                             "c": 1 / (1 / w[1] - 1), "nodes": nodes}
    return spec.ops[key]


def _hatted_gamma_mp(model, spec, p, k, dps):
    d = _mp_data(model, spec, dps)
    with mpmath.workdps(dps):
        H, G, c = d["H"], d["G0"], d["c"]
        lam = d["nodes"][(p, k)]
        for key, z in d["nodes"].items():
            if key != (p, k):
                G = (c * (H @ G - G @ H) - z * G) / (lam - z)
        return np.array([[complex(x) for x in row] for row in G])


def raising_checks(rap, spec, tol=1e-8):
    """Right raising / annihilation and left lowering actions of every Gamma-hat.

    Residual norms (on unit right vectors, and left vectors scaled by their
    norm) are relative to max(1, max_{p,k} ||Gamma-hat_{p,k}||).  A common
    scale is used because individual Gamma-hat can vanish identically when
    all their Lambda are zero.
    """
    N, L = spec.N, spec.L
    worst = {"raising": 0.0, "annihilation": 0.0, "lowering_left": 0.0}
    ops = {(p, k): hatted_gamma(rap, spec, p, k) for k in range(L) for p in range(N)}
    scale = max([1.0] + [np.linalg.norm(G, 2) for G in ops.values()])
    lam_direct = {}
    for (p, k), G in ops.items():
        for lab in spec.labels:
            i = spec.index[lab]
            out = G @ spec.right[:, i]
            if lab[k] == (p - 1) % N:
                tgt = list(lab)
                tgt[k] = p
                j = spec.state(tgt)
                lam = spec.left[j] @ out
                lam_direct[(p, k, lab)] = lam
                res = np.linalg.norm(out - lam * spec.right[:, j])
                worst["raising"] = max(worst["raising"], res / scale)
            else:
                worst["annihilation"] = max(worst["annihilation"], np.linalg.norm(out) / scale)
            u = spec.left[i]
            lout = u @ G
            if lab[k] == p:
                src = list(lab)
                src[k] = p - 1
                j = spec.state(src)
                lout = lout - (lout @ spec.right[:, j]) * spec.left[j]
            worst["lowering_left"] = max(worst["lowering_left"],
                                         np.linalg.norm(lout) / (scale * np.linalg.norm(u)))
    spec.ops["lambda_direct"] = lam_direct
    amp = noise_amplification(spec)
    out = [scalar_check(name, val, tol) for name, val in worst.items()]
    for r in out:
        r.detail = f"off-node amplification {amp:.2g}"
    return out


def noise_amplification(spec):
    """max |f_{p,k}(z)| over transition frequencies z = (E_a - E_b)/(w^{-1} - 1)
    that are not interpolation nodes: the factor by which rounding noise in
    Gamma_0 is magnified in Gamma-hat."""
    E = spec.energies
    D = (E[:, None] - E[None, :]) / (1.0 / spec.omega - 1.0)
    nodes = np.array([z for _, _, z in spec.companion.nodes])
    near = np.min(np.abs(D[..., None] - nodes), axis=-1)
    off = D[near > 1e-6 * max(1.0, np.abs(D).max())]
    if off.size == 0:
        return 0.0
    amp = 0.0
    for (p, k, lam) in spec.companion.nodes:
        f = np.ones_like(off)
        for (p2, k2, z) in spec.companion.nodes:
            if (p2, k2) != (p, k):
                f = f * (off - z) / (lam - z)
        amp = max(amp, float(np.max(np.abs(f))))
    return amp


def _Y(spec, R, z):
    return sum((-1) ** m * R[m] * z ** (-m) for m in range(len(R)))


def lambda_values(rap, spec, tol=1e-8):
    """Lambda_{p,k}({n_i}) four ways plus the Y selection rule.

    Returns (table, checks); table maps (p, k, source digits) to a dict of
    the four evaluations.  Deviations are relative to |Lambda| (floored at 1).
    """
    model = _model(rap)
    N, L, w = spec.N, spec.L, spec.omega
    R = [_dense(x) for x in R_operators(model)]
    G0 = _dense(model.Gamma0)
    table = {}
    for k in range(L):
        rk = spec.roots[k]
        for p in range(N):
            for lab in spec.labels:
                if lab[k] != (p - 1) % N:
                    continue
                tgt = list(lab)
                tgt[k] = p
                tgt = tuple(tgt)
                pre = 1.0 / (rk * w ** (p - 1))
                # Omega evaluated with the mode digit shifted as in the raising formulas
                om_p = omega_weight(spec, tgt, k)
                om_pm1 = omega_weight(spec, lab, k)
                l1 = pre * om_p * spec.element(_Y(spec, R, rk * w ** p), tgt, lab)
                l2 = pre * om_pm1 * spec.element(_Y(spec, R, rk * w ** (p - 1)), tgt, lab)
                l3 = pre / spec.A0 * spec.element(R[0], tgt, lab)
                l4 = spec.element(G0, tgt, lab)
                table[(p, k, lab)] = {"lambda1": l1, "lambda2": l2, "lambda3": l3, "lambda4": l4}

    def dev(a, b):
        return max((abs(v[a] - v[b]) / max(1.0, abs(v[b])) for v in table.values()), default=0.0)

    checks = [scalar_check("lambda_1_vs_2", dev("lambda1", "lambda2"), tol),
              scalar_check("lambda_1_vs_4", dev("lambda1", "lambda4"), tol),
              scalar_check("lambda_2_vs_4", dev("lambda2", "lambda4"), tol),
              scalar_check("lambda_3_vs_4", dev("lambda3", "lambda4"), tol)]
    direct = spec.ops.get("lambda_direct")
    if direct:
        worst = max(abs(direct[key] - table[key]["lambda4"]) / max(1.0, abs(table[key]["lambda4"]))
                    for key in table)
        checks.append(scalar_check("raising", worst, tol, form="direct_vs_lambda4"))

    # selection rule of Y at z = omega^{n_k} r_k
    worst = 0.0
    for k in range(L):
        for lab in spec.labels:
            z = spec.roots[k] * w ** lab[k]
            Y = _Y(spec, R, z)
            col = spec.left @ Y @ spec.right[:, spec.index[lab]]
            allowed = list(lab)
            allowed[k] += 1
            ok = spec.state(allowed)
            terms = sum(abs(z) ** (-m) * np.abs(R[m]).max() for m in range(len(R)))
            scale = max(1.0, abs(col[ok]), terms)
            mask = np.ones(len(col), dtype=bool)
            mask[ok] = False
            worst = max(worst, float(np.max(np.abs(col[mask]), initial=0.0)) / scale)
    checks.append(scalar_check("Y_selection", worst, tol))
    return table, checks


def b54_residual(rap, spec, k=None, l=None):
    """Four-term Gamma_0 matrix-element combination over all mode pairs.

    A conjecture check: returns (max_abs, max_rel, count) and never raises on
    a large residual.  An explicit pair with k == l is rejected.
    """
    if k is not None and k == l:
        raise ValueError("the four-term combination needs two distinct modes")
    if spec.L < 2:
        raise ValueError("needs at least two modes (L >= 2)")
    model = _model(rap)
    N, L, w = spec.N, spec.L, spec.omega
    G0 = _dense(model.Gamma0)
    r = spec.roots
    pairs = [(k, l)] if k is not None else [(a, b) for a in range(L) for b in range(L) if a != b]
    max_abs, max_rel, count = 0.0, 0.0, 0
    for a, b in pairs:
        others = [i for i in range(L) if i not in (a, b)]
        for p, q in itertools.product(range(N), repeat=2):
            for bg in itertools.product(range(N), repeat=len(others)):
                def lab(np_, nq):
                    d = [0] * L
                    for i, v in zip(others, bg):
                        d[i] = v
                    d[a], d[b] = np_ % N, nq % N
                    return tuple(d)
                SA, SB, SC, SD = lab(p, q), lab(p - 1, q), lab(p, q - 1), lab(p - 1, q - 1)
                t1 = (r[a] * w ** (p - 1) - r[b] * w ** q) * \
                    spec.element(G0, SA, SB) * spec.element(G0, SB, SD)
                t2 = (r[b] * w ** (q - 1) - r[a] * w ** p) * \
                    spec.element(G0, SA, SC) * spec.element(G0, SC, SD)
                res = abs(t1 + t2)
                max_abs = max(max_abs, res)
                max_rel = max(max_rel, res / max(abs(t1), abs(t2), 1e-300))
                count += 1
    return max_abs, max_rel, count


def b54_check(rap, spec, tol=1e-8):
    max_abs, max_rel, count = b54_residual(rap, spec)
    res = scalar_check("b54", max_abs, tol)
    res.detail = f"max_rel={max_rel:.3g} over {count} configurations"
    return [res]


def spectral_suite(rap, tol=1e-8, gap=DEGENERACY_GAP):
    """All spectral checks for one model; returns (spectrum, checks)."""
    model = _model(rap)
    spec = labeled_eigenbasis(model, gap=gap, tol=tol)
    checks = list(spec.checks)
    checks += q_inverse_check(model)
    checks += q_spectral_check(model, spec, tol)
    checks += raising_checks(model, spec, tol)
    _, lam_checks = lambda_values(model, spec, tol)
    checks += lam_checks
    if model.L >= 2:
        checks += b54_check(model, spec, tol)
    return spec, checks
