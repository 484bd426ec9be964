"""Six-vertex R-matrix, the site-level Yang-Baxter relation and its
monodromy consequences (A/C exchange relations)."""

from __future__ import annotations

import itertools

from .checks import zero_check
from .clock import ChainSpace, Operator
from .tau2core import RapiditySet, Tau2Model, build_site_L


class RMatrix:
    """R(rq)_{n,m}^{n',m'} on auxiliary labels n, m, n', m' in {0, 1}."""

    def __init__(self, t_r, t_q, field):
        if t_r == field.zero or t_q == field.zero:
            raise ValueError("spectral parameters must be nonzero")
        self.t_r, self.t_q, self.field = t_r, t_q, field
        w = field.omega()
        one = field.one
        ratio = t_q / t_r
        diag = one - ratio / w
        self.entries = {
            (0, 0, 0, 0): diag,
            (1, 1, 1, 1): diag,
            (1, 0, 1, 0): one - ratio,
            (0, 1, 0, 1): (one - ratio) / w,
            (0, 1, 1, 0): one - one / w,
            (1, 0, 0, 1): (one - one / w) * ratio,
        }

    def __call__(self, n, m, n2, m2):
        return self.entries.get((n, m, n2, m2), self.field.zero)

    def as_table(self):
        """4x4 nested list, rows (n, m), columns (n', m'), both ordered 00,01,10,11."""
        keys = list(itertools.product((0, 1), repeat=2))
        return [[self(n, m, n2, m2) for (n2, m2) in keys] for (n, m) in keys]


def build_R(t_r, t_q, field):
    return RMatrix(field(t_r), field(t_q), field)


def site_L_matrix(p, p2, t, field):
    """2x2 array of N x N operators L(t) for rapidities p (even slot), p2 (odd slot)."""
    rap = RapiditySet(field.N, 1, field, (tuple(p), tuple(p2)))
    space = ChainSpace(field.N, 1)
    blk = build_site_L(rap, 1, space)
    u = -field.omega() * field(t)
    return [[blk.plus[r][c] + blk.minus[r][c] * u for c in range(2)] for r in range(2)]


def verify_site_ybe(p, p2, t_r, t_q, field, tol=1e-10):
    """Residual of the RLL = LLR relation on one site, by explicit contraction.

    LHS[(n1,m1),(n3,m3)] = sum R_{n1 m1}^{n2 m2} L^r_{n2 n3} L^q_{m2 m3}
    RHS[(n1,m1),(n3,m3)] = sum L^q_{m1 m2} L^r_{n1 n2} R_{n2 m2}^{n3 m3}
    """
    R = build_R(t_r, t_q, field)
    Lr = site_L_matrix(p, p2, t_r, field)
    Lq = site_L_matrix(p, p2, t_q, field)
    space = Lr[0][0].space
    out = []
    for n1, m1, n3, m3 in itertools.product((0, 1), repeat=4):
        diff = Operator.zero(space, field)
        for n2, m2 in itertools.product((0, 1), repeat=2):
            r_left = R(n1, m1, n2, m2)
            if r_left != field.zero:
                diff = diff + (Lr[n2][n3] @ Lq[m2][m3]) * r_left
            r_right = R(n2, m2, n3, m3)
            if r_right != field.zero:
                diff = diff - (Lq[m1][m2] @ Lr[n1][n2]) * r_right
        out.append(zero_check("site_ybe", diff, 0.0 if field.exact else tol,
                              n1=n1, m1=m1, n3=n3, m3=m3))
    return out


def _bivariate_zero(terms, space, field):
    """Collect {(i, j): Operator} sums; returns the list of nonzero-candidates."""
    acc = {}
    for key, op in terms:
        acc[key] = acc[key] + op if key in acc else op
    return acc


def ybeac_check(A, C, field, tol=1e-8, label="hatted"):
    """Exchange relation between A and C entries of a monodromy.

    Multiplied through by y and written in u = -omega t, it reads
    w^{-1}(u_y - u_x) A(u_y) C(u_x) + (1 - w^{-1}) u_y C(u_y) A(u_x)
        - (u_y - w^{-1} u_x) C(u_x) A(u_y) = 0,
    checked coefficient by coefficient of u_y^i u_x^j.
    """
    w = field.omega()
    wi = field.one / w
    one = field.one
    terms = []
    for i, Ai in enumerate(A.coeffs):
        for j, Cj in enumerate(C.coeffs):
            AC = Ai @ Cj
            CA = Cj @ Ai
            terms += [((i + 1, j), AC * wi), ((i, j + 1), AC * (-wi)),
                      ((i + 1, j), CA * (-one)), ((i, j + 1), CA * wi)]
    for i, Ci in enumerate(C.coeffs):
        for j, Aj in enumerate(A.coeffs):
            terms.append(((i + 1, j), (Ci @ Aj) * (one - wi)))
    acc = _bivariate_zero(terms, A.space, field)
    t = 0.0 if field.exact else tol
    return [zero_check("ybeac", op, t, i=i, j=j, monodromy=label)
            for (i, j), op in sorted(acc.items())]


def verify_exchange_relations(rap, tol=1e-8):
    """Exchange relations of the hatted (sites 2..L) and full monodromies."""
    model = rap if isinstance(rap, Tau2Model) else Tau2Model(rap)
    f = model.field
    t = 0.0 if f.exact else tol
    w, one = model.omega, f.one
    out = []
    for label, M in (("hatted", model.hatted), ("full", model.monodromy)):
        A, C = M[0][0], M[1][0]
        out += ybeac_check(A, C, f, tol, label)
        for m, n in itertools.combinations_with_replacement(range(len(A.coeffs)), 2):
            out.append(zero_check("AA_commute", A[m] @ A[n] - A[n] @ A[m], t,
                                  m=m, n=n, monodromy=label))
        for m, n in itertools.combinations_with_replacement(range(len(C.coeffs)), 2):
            out.append(zero_check("CC_commute", C[m] @ C[n] - C[n] @ C[m], t,
                                  m=m, n=n, monodromy=label))
    Ah, Ch = model.A_hat, model.C_hat
    for l in range(model.L + 1):
        lhs = Ah(l) @ Ch(0) - Ch(0) @ Ah(l) * w
        out.append(zero_check("yb1", lhs - Ch(l) @ Ah(0) * (one - w), t, l=l, form="CA"))
        out.append(zero_check("yb1", lhs - Ah(0) @ Ch(l) * (one - w), t, l=l, form="AC"))
    for l in range(model.L):
        lhs = Ah(1) @ Ch(l) - Ch(l) @ Ah(1)
        f1 = (Ch(l + 1) @ Ah(0) - Ch(0) @ Ah(l + 1)) * (one - w)
        f2 = Ah(l + 1) @ Ch(0) - Ch(0) @ Ah(l + 1)
        f3 = (Ah(l + 1) @ Ch(0) - Ah(0) @ Ch(l + 1)) * (one - one / w)
        out.append(zero_check("yb2", lhs - f1, t, l=l))
        out.append(zero_check("yb3", f1 - f2, t, l=l, form="intermediate"))
        out.append(zero_check("yb3", f2 - f3, t, l=l))
    return out
