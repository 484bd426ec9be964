"""Site L-matrices, monodromy, transfer-matrix coefficients and Hamiltonian.

Every polynomial in the spectral variable t is stored in the variable
``u = -omega * t``: an :class:`OperatorPolynomial` with coefficients
``[P_0, ..., P_K]`` means ``sum_l P_l (-omega t)**l``.  With this choice the
site matrix is ``L_j = L_j^+ + u L_j^-`` and the coefficients of the
transfer matrix are the operators A_l directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .clock import ChainSpace, Operator, build_X, build_Z
from .scalars import make_field


@dataclass(frozen=True)
class RapiditySet:
    """2L rapidity four-tuples (a_j, b_j, c_j, d_j), j = 0..2L-1.

    Indices -1 and -2 return the fixed open-boundary values
    c = 0, a_{-1} = d_{-1} = 0, b = 1.  a_{-2} and d_{-2} only ever multiply
    a vanishing factor and are returned as 0.
    """

    N: int
    L: int
    field: object
    points: tuple

    def __post_init__(self):
        if len(self.points) != 2 * self.L:
            raise ValueError(f"expected {2 * self.L} rapidity points, got {len(self.points)}")
        pts = tuple(tuple(self.field(x) for x in p) for p in self.points)
        for p in pts:
            if len(p) != 4:
                raise ValueError("each rapidity point needs four components")
        if any(p[1] == 0 for p in pts):
            raise ValueError("b_j must be nonzero")
        object.__setattr__(self, "points", pts)

    @classmethod
    def build(cls, N, L, points, backend="exact"):
        field = make_field(N, backend)
        return cls(N, L, field, tuple(tuple(field(x) for x in p) for p in points))

    def _get(self, j, slot):
        if j >= 0:
            return self.points[j][slot]
        if j in (-1, -2):
            return self.field.one if slot == 1 else self.field.zero
        raise IndexError(j)

    def a(self, j):
        return self._get(j, 0)

    def b(self, j):
        return self._get(j, 1)

    def c(self, j):
        return self._get(j, 2)

    def d(self, j):
        return self._get(j, 3)

    def with_field(self, field):
        """Same rapidities in another backend (exact -> float embedding)."""
        pts = tuple(tuple(field(complex(x)) if not field.exact else field(x) for x in p)
                    for p in self.points)
        return RapiditySet(self.N, self.L, field, pts)

    def to_json(self):
        return {"N": self.N, "L": self.L,
                "points": [[self.field.to_json(x) for x in p] for p in self.points]}


class OperatorPolynomial:
    """Polynomial in u = -omega t with Operator coefficients."""

    def __init__(self, coeffs, space=None, field=None):
        coeffs = list(coeffs)
        if not coeffs:
            if space is None:
                raise ValueError("empty polynomial needs a space")
            coeffs = [Operator.zero(space, field)]
        self.space = coeffs[0].space
        self.field = coeffs[0].field
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def degree(self):
        if len(self.coeffs) == 1 and self.coeffs[0].is_zero():
            return -1
        return len(self.coeffs) - 1

    def coeff(self, l):
        if 0 <= l < len(self.coeffs):
            return self.coeffs[l]
        return Operator.zero(self.space, self.field)

    def __getitem__(self, l):
        return self.coeff(l)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return OperatorPolynomial([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return OperatorPolynomial([self.coeff(k) - other.coeff(k) for k in range(n)])

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return OperatorPolynomial([c @ other for c in self.coeffs])
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            for j, q in enumerate(other.coeffs):
                if q.is_zero():
                    continue
                term = p @ q
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        zero = Operator.zero(self.space, self.field)
        return OperatorPolynomial([zero if c is None else c for c in out])

    def __rmatmul__(self, op):
        return OperatorPolynomial([op @ c for c in self.coeffs])

    def __mul__(self, scalar):
        return OperatorPolynomial([c * scalar for c in self.coeffs])

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by u**k."""
        zero = Operator.zero(self.space, self.field)
        return OperatorPolynomial([zero] * k + list(self.coeffs))

    def rescale(self, factor):
        """Substitute u -> factor * u."""
        out, f = [], self.field.one
        for c in self.coeffs:
            out.append(c * f)
            f = f * factor
        return OperatorPolynomial(out)

    def is_zero(self, tol=None):
        return all(c.is_zero(tol) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(k) == other.coeff(k) for k in range(n))

    __hash__ = None

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"OperatorPolynomial(degree={self.degree}, {self.space!r})"


@dataclass
class SiteLBlock:
    """Triangular split L_j = L_j^+ + u L_j^- of one site matrix."""

    j: int
    alpha_p: Operator
    beta_p: Operator
    gamma_p: Operator
    alpha_m: Operator
    beta_m: Operator
    gamma_m: Operator

    @property
    def plus(self):
        z = Operator.zero(self.alpha_p.space, self.alpha_p.field)
        return [[self.alpha_p, z], [self.beta_p, self.gamma_p]]

    @property
    def minus(self):
        z = Operator.zero(self.alpha_p.space, self.alpha_p.field)
        return [[self.alpha_m, self.beta_m], [z, self.gamma_m]]

    def entry(self, r, c):
        """(constant part, coefficient of t) of block L_j(r, c)."""
        field = self.alpha_p.field
        return self.plus[r][c], self.minus[r][c] * (-field.omega())

    def polynomial(self, r, c):
        return OperatorPolynomial([self.plus[r][c], self.minus[r][c]])


def build_site_L(rap, j, space=None):
    """Site matrix L_j for 1 <= j <= L, split into its triangular parts."""
    if not 1 <= j <= rap.L:
        raise ValueError(f"site {j} out of range 1..{rap.L}")
    space = space or ChainSpace(rap.N, rap.L)
    f = rap.field
    w = f.omega()
    one = Operator.identity(space, f)
    X = build_X(space, f, j)
    Z = build_Z(space, f, j)
    Zi = Z.inverse_monomial()
    e, o = 2 * j - 2, 2 * j - 1
    a0, b0, c0, d0 = rap.a(e), rap.b(e), rap.c(e), rap.d(e)
    a1, b1, c1, d1 = rap.a(o), rap.b(o), rap.c(o), rap.d(o)
    return SiteLBlock(
        j=j,
        alpha_p=one * (b0 * b1),
        beta_p=Zi @ (one * (c0 * b1) - X * (w * a0 * d1)),
        gamma_p=X * (w * a0 * a1),
        alpha_m=X * (d0 * d1),
        beta_m=Z @ (one * (b0 * c1) - X * (d0 * a1)),
        gamma_m=one * (c0 * c1),
    )


def boundary_L0(rap):
    """The j = 0 boundary factor as a 2x2 array of scalars (plus, minus parts).

    The X_0 terms of L_0 carry a_{-1} or d_{-1} and vanish identically, so
    L_0 involves no operator on the chain.
    """
    f = rap.field
    w = f.omega()
    plus = [[rap.b(-2) * rap.b(-1), f.zero],
            [rap.c(-2) * rap.b(-1), w * rap.a(-2) * rap.a(-1)]]
    minus = [[rap.d(-2) * rap.d(-1), rap.b(-2) * rap.c(-1)],
             [f.zero, rap.c(-2) * rap.c(-1)]]
    # X- and Z-dependent pieces: -omega a_{-2} d_{-1} and d_{-2} a_{-1}
    assert rap.a(-2) * rap.d(-1) == f.zero and rap.d(-2) * rap.a(-1) == f.zero
    assert minus[0][0] == f.zero
    return plus, minus


def _identity_monodromy(space, field):
    one = Operator.identity(space, field)
    zero = Operator.zero(space, field)
    return [[OperatorPolynomial([one]), OperatorPolynomial([zero])],
            [OperatorPolynomial([zero]), OperatorPolynomial([one])]]


def matmul_2x2(P, Q):
    return [[P[r][0] @ Q[0][c] + P[r][1] @ Q[1][c] for c in range(2)] for r in range(2)]


def build_monodromy(rap, first, last, space=None, sites=None, allow_empty=False):
    """Ordered product L_first ... L_last as a 2x2 array of polynomials.

    ``allow_empty`` returns the identity for first == last + 1 (the hatted
    monodromy of a one-site chain).
    """
    space = space or ChainSpace(rap.N, rap.L)
    if allow_empty and first == last + 1:
        return _identity_monodromy(space, rap.field)
    if not (1 <= first <= last <= rap.L):
        raise ValueError(f"invalid site range {first}..{last}")
    M = None
    for j in range(first, last + 1):
        blk = sites[j] if sites else build_site_L(rap, j, space)
        S = [[blk.polynomial(r, c) for c in range(2)] for r in range(2)]
        M = S if M is None else matmul_2x2(M, S)
    return M


def tau2_poly(rap, monodromy=None):
    """tau_2(t) = trace(L_0 * prod_{j=1}^L L_j) as an OperatorPolynomial.

    The boundary factor projects onto the A entry.
    """
    M = monodromy or build_monodromy(rap, 1, rap.L)
    plus, minus = boundary_L0(rap)
    out = None
    for r in range(2):
        for c in range(2):
            for scalar, shift in ((plus[r][c], 0), (minus[r][c], 1)):
                if scalar == rap.field.zero:
                    continue
                term = (M[c][r] * scalar).shift(shift)
                out = term if out is None else out + term
    return out


class Tau2Model:
    """Lazily cached derived objects for one rapidity set."""

    def __init__(self, rap):
        self.rap = rap
        self.N, self.L, self.field = rap.N, rap.L, rap.field
        self.space = ChainSpace(rap.N, rap.L)
        self.omega = self.field.omega()
        self._gammas = None

    @cached_property
    def identity(self):
        return Operator.identity(self.space, self.field)

    @cached_property
    def zero(self):
        return Operator.zero(self.space, self.field)

    @cached_property
    def sites(self):
        return {j: build_site_L(self.rap, j, self.space) for j in range(1, self.L + 1)}

    @cached_property
    def monodromy(self):
        return build_monodromy(self.rap, 1, self.L, self.space, self.sites)

    @cached_property
    def hatted(self):
        """Monodromy of sites 2..L (identity when L == 1)."""
        return build_monodromy(self.rap, 2, self.L, self.space, self.sites, allow_empty=True)

    @cached_property
    def tau2(self):
        return tau2_poly(self.rap, self.monodromy)

    def A(self, l):
        return self.tau2.coeff(l)

    def A_hat(self, l):
        return self.hatted[0][0].coeff(l) if l >= 0 else self.zero

    def C_hat(self, l):
        return self.hatted[1][0].coeff(l) if l >= 0 else self.zero

    @cached_property
    def A0(self):
        """A_0 as a scalar: the product of all b_j."""
        v = self.field.one
        for j in range(2 * self.L):
            v = v * self.rap.b(j)
        return v

    @cached_property
    def H(self):
        return self.A(1) * (-(self.field.one / self.A0))

    @cached_property
    def Gamma0(self):
        return build_Z(self.space, self.field, 1).inverse_monomial()

    @cached_property
    def X1(self):
        return build_X(self.space, self.field, 1)

    @property
    def d0a1(self):
        return self.rap.d(0) * self.rap.a(1)


def hamiltonian(rap, model=None):
    """H = -A_1 / A_0."""
    model = model or Tau2Model(rap)
    return model.H


def hamiltonian_explicit(rap, sites=None):
    """The Hamiltonian assembled site by site from the triangular blocks."""
    space = ChainSpace(rap.N, rap.L)
    sites = sites or {j: build_site_L(rap, j, space) for j in range(1, rap.L + 1)}
    one = rap.field.one
    inv_alpha = {j: one / s.alpha_p.entry(0, 0) for j, s in sites.items()}
    total = Operator.zero(space, rap.field)
    for j in range(1, rap.L + 1):
        sj = sites[j]
        total = total + sj.alpha_m * inv_alpha[j]
        left = sj.beta_m * inv_alpha[j]
        chain = Operator.identity(space, rap.field)
        for m in range(j + 1, rap.L + 1):
            sm = sites[m]
            total = total + left @ chain @ (sm.beta_p * inv_alpha[m])
            chain = chain @ (sm.gamma_p * inv_alpha[m])
    return -total


def rational_points(points):
    """Parse nested lists of numbers/strings into Fractions."""
    return tuple(tuple(Fraction(x) if isinstance(x, (str, int, Fraction)) else x for x in p)
                 for p in points)


def site_L_direct(rap, j, space=None):
    """Entries of L_j written out directly as (constant, t-coefficient) pairs."""
    space = space or ChainSpace(rap.N, rap.L)
    f = rap.field
    w = f.omega()
    one = Operator.identity(space, f)
    zero = Operator.zero(space, f)
    X, Z = build_X(space, f, j), build_Z(space, f, j)
    Zi = Z.inverse_monomial()
    e, o = 2 * j - 2, 2 * j - 1
    a0, b0, c0, d0 = rap.a(e), rap.b(e), rap.c(e), rap.d(e)
    a1, b1, c1, d1 = rap.a(o), rap.b(o), rap.c(o), rap.d(o)
    return {
        (0, 0): (one * (b0 * b1), X * (-w * d0 * d1)),
        (0, 1): (zero, (Z @ (one * (b0 * c1) - X * (d0 * a1))) * (-w)),
        (1, 0): (Zi @ (one * (c0 * b1) - X * (w * a0 * d1)), zero),
        (1, 1): (X * (w * a0 * a1), one * (-w * c0 * c1)),
    }


def core_checks(rap, tol=1e-8):
    """Structural identities of the clock algebra, site matrices and transfer matrix."""
    from .checks import bool_check, zero_check
    model = rap if isinstance(rap, Tau2Model) else Tau2Model(rap)
    rap, space, f = model.rap, model.space, model.field
    t = 0.0 if f.exact else tol
    w = model.omega
    one = model.identity
    out = []
    for j in range(1, model.L + 1):
        Z, X = build_Z(space, f, j), build_X(space, f, j)
        out.append(zero_check("weyl_relation", Z @ X - X @ Z * w, t, site=j))
        out.append(zero_check("weyl_relation", Z ** model.N - one, t, site=j, form="Z^N"))
        out.append(zero_check("weyl_relation", X ** model.N - one, t, site=j, form="X^N"))
        blk = model.sites[j]
        direct = site_L_direct(rap, j, space)
        for (r, c), (const, tco) in direct.items():
            got_c, got_t = blk.entry(r, c)
            out.append(zero_check("L_split", got_c - const, t, site=j, r=r, c=c, part="const"))
            out.append(zero_check("L_split", got_t - tco, t, site=j, r=r, c=c, part="t"))
    out.append(zero_check("A0_scalar", model.A(0) - one * model.A0, t))
    prod_d, xs = f.one, one
    for j in range(2 * model.L):
        prod_d = prod_d * rap.d(j)
    for j in range(1, model.L + 1):
        xs = xs @ build_X(space, f, j)
    out.append(zero_check("AL_product", model.A(model.L) - xs * prod_d, t))
    out.append(bool_check("A_degree", model.tau2.degree == model.L,
                          f"degree {model.tau2.degree}"))
    for m in range(model.L + 1):
        for n in range(m + 1, model.L + 1):
            out.append(zero_check("A_commute", model.A(m) @ model.A(n) - model.A(n) @ model.A(m),
                                  t, m=m, n=n))
    out.append(zero_check("H_explicit", hamiltonian_explicit(rap) - model.H, t))
    return out
