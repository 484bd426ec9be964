"""Chain spaces, linear operators and the clock generators Z_j, X_j.

Basis states of the chain are digit strings (sigma_1, ..., sigma_L) with
sigma_1 the most significant digit of the basis index.

Operators have two storage backends chosen by the scalar field:

* exact: an integer tensor ``num[k, row, col]`` plus one positive common
  denominator ``den``; the operator is ``sum_k num[k] * omega**k / den``
  with ``k < deg Phi_N``.  Products are integer matrix products followed by
  reduction modulo Phi_N, which keeps exact runs fast without per-entry
  rational objects.  The representation is normalised (gcd 1, den > 0),
  so equality is structural.
* float: a dense complex128 matrix; entries below ``FLOAT_DROP`` in
  magnitude are dropped after every product.

Both expose a sparse column-major view through :meth:`Operator.entries`.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import BackendMismatchError, NotMonomialError, SpaceMismatchError
from .scalars import Cyc

FLOAT_DROP = 1e-14


class ChainSpace:
    """N-state clock chain of L sites with dim = N**L."""

    def __init__(self, N, L):
        if N < 2:
            raise ValueError("N must be at least 2")
        if L < 1:
            raise ValueError("L must be at least 1")
        self.N = N
        self.L = L
        self.dim = N ** L

    def __eq__(self, other):
        return isinstance(other, ChainSpace) and (self.N, self.L) == (other.N, other.L)

    def __hash__(self):
        return hash((self.N, self.L))

    def __repr__(self):
        return f"ChainSpace(N={self.N}, L={self.L})"

    def digits(self, index):
        """Digit string (sigma_1, ..., sigma_L) of a basis index."""
        out = []
        for _ in range(self.L):
            index, r = divmod(index, self.N)
            out.append(r)
        return tuple(reversed(out))

    def index(self, digits):
        if len(digits) != self.L:
            raise ValueError("wrong number of digits")
        idx = 0
        for s in digits:
            idx = idx * self.N + (s % self.N)
        return idx

    def _site_stride(self, j):
        if not 1 <= j <= self.L:
            raise ValueError(f"site {j} out of range 1..{self.L}")
        return self.N ** (self.L - j)

    def to_json(self):
        return {"N": self.N, "L": self.L, "dim": self.dim, "ordering": "sigma_1 most significant"}


class Operator:
    """Linear operator on a :class:`ChainSpace`.  Use the module factories."""

    __slots__ = ("space", "field")

    # -- construction -----------------------------------------------------
    @staticmethod
    def zero(space, field):
        if field.exact:
            deg = field.degree
            return ExactOperator(space, field,
                                 np.zeros((deg, space.dim, space.dim), dtype=object) * 0, 1)
        return FloatOperator(space, field, np.zeros((space.dim, space.dim), dtype=complex))

    @staticmethod
    def identity(space, field):
        return Operator.from_entries(space, field, [(i, i, 1) for i in range(space.dim)])

    @staticmethod
    def scalar(space, field, value):
        return Operator.identity(space, field) * value

    @staticmethod
    def from_entries(space, field, triplets):
        """Build from (row, col, value) triplets; repeated positions accumulate."""
        if field.exact:
            deg = field.degree
            vals = []
            den = 1
            for r, c, v in triplets:
                v = field(v)
                vals.append((r, c, v))
                for q in v.coeffs:
                    den = den * q.denominator // math.gcd(den, q.denominator)
            num = np.zeros((deg, space.dim, space.dim), dtype=object) * 0
            for r, c, v in vals:
                for k, q in enumerate(v.coeffs):
                    if q:
                        num[k, r, c] += q.numerator * (den // q.denominator)
            return ExactOperator(space, field, num, den)
        mat = np.zeros((space.dim, space.dim), dtype=complex)
        for r, c, v in triplets:
            mat[r, c] += field(v)
        return FloatOperator(space, field, mat)

    @staticmethod
    def from_dense(space, field, rows):
        return Operator.from_entries(
            space, field,
            [(r, c, v) for r, row in enumerate(rows) for c, v in enumerate(row)])

    @staticmethod
    def from_json(obj, field):
        space = ChainSpace(obj["space"]["N"], obj["space"]["L"])
        return Operator.from_entries(
            space, field, [(r, c, field.from_json(v)) for r, c, v in obj["entries"]])

    # -- shared behaviour ---------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatchError(f"{self.space!r} vs {other.space!r}")
        if other.field != self.field:
            raise BackendMismatchError(f"{self.field!r} vs {other.field!r}")

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        return self * scalar

    def __truediv__(self, scalar):
        return self * (self.field.one / self.field(scalar))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers: use inverse_monomial")
        out = Operator.identity(self.space, self.field)
        for _ in range(k):
            out = out @ self
        return out

    def entries(self):
        """Nonzero (row, col, value) triplets in column-major order."""
        raise NotImplementedError

    def columns(self):
        """Mapping col -> list of (row, value) for nonzero entries."""
        cols = {}
        for r, c, v in self.entries():
            cols.setdefault(c, []).append((r, v))
        return cols

    @property
    def nnz(self):
        return sum(1 for _ in self.entries())

    def to_dense(self):
        """Row-major list of lists of field scalars (oracle-friendly)."""
        n = self.space.dim
        rows = [[self.field.zero] * n for _ in range(n)]
        for r, c, v in self.entries():
            rows[r][c] = v
        return rows

    def is_monomial(self):
        cols = self.columns()
        if len(cols) != self.space.dim or any(len(v) != 1 for v in cols.values()):
            return False
        return len({rv[0][0] for rv in cols.values()}) == self.space.dim

    def inverse_monomial(self):
        if not self.is_monomial():
            raise NotMonomialError("operator is not monomial")
        one = self.field.one
        return Operator.from_entries(
            self.space, self.field, [(c, r, one / v) for r, c, v in self.entries()])

    def scalar_value(self):
        """Return c if the operator equals c * identity, else None."""
        c = self.entry(0, 0)
        if self == Operator.scalar(self.space, self.field, c):
            return c
        return None

    def to_json(self):
        return {"space": self.space.to_json(),
                "backend": "exact" if self.field.exact else "float",
                "N": self.field.N,
                "entries": [[r, c, self.field.to_json(v)] for r, c, v in self.entries()]}


class ExactOperator(Operator):
    __slots__ = ("num", "den")

    def __init__(self, space, field, num, den):
        self.space = space
        self.field = field
        self.num = num
        self.den = den
        self._normalize()

    def _normalize(self):
        flat = [int(x) for x in self.num.ravel() if x]
        if not flat:
            self.den = 1
            return
        g = math.gcd(self.den, *flat)
        if self.den < 0:
            g = -g
        if g != 1:
            self.num = self.num // g
            self.den //= g

    def _reduce(self, stack):
        """Reduce a list of coefficient matrices (powers of omega) modulo Phi_N."""
        deg, phi = self.field.degree, self.field.phi
        for k in range(len(stack) - 1, deg - 1, -1):
            top = stack[k]
            for i in range(deg):
                if phi[i]:
                    stack[k - deg + i] = stack[k - deg + i] - phi[i] * top
        out = np.empty((deg,) + stack[0].shape, dtype=object)
        for k in range(deg):
            out[k] = stack[k]
        return out

    def __add__(self, other):
        self._check(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        num = self.num * (den // self.den) + other.num * (den // other.den)
        return ExactOperator(self.space, self.field, num, den)

    def __neg__(self):
        return ExactOperator(self.space, self.field, -self.num, self.den)

    def __matmul__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        deg = self.field.degree
        a_nz = [k for k in range(deg) if self.num[k].any()]
        b_nz = [k for k in range(deg) if other.num[k].any()]
        zero = np.zeros((self.space.dim, self.space.dim), dtype=object) * 0
        stack = [zero] * (2 * deg - 1)
        for i in a_nz:
            for j in b_nz:
                stack[i + j] = stack[i + j] + self.num[i].dot(other.num[j])
        return ExactOperator(self.space, self.field, self._reduce(stack),
                             self.den * other.den)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            raise TypeError("use @ for operator products")
        try:
            s = self.field(scalar)
        except BackendMismatchError:
            raise
        sden = 1
        for q in s.coeffs:
            sden = sden * q.denominator // math.gcd(sden, q.denominator)
        sint = [int(q * sden) for q in s.coeffs]
        stack = [np.zeros(self.num.shape[1:], dtype=object) * 0
                 for _ in range(2 * self.field.degree - 1)]
        for i, c in enumerate(sint):
            if c:
                for k in range(self.field.degree):
                    stack[i + k] = stack[i + k] + c * self.num[k]
        return ExactOperator(self.space, self.field, self._reduce(stack), self.den * sden)

    def __eq__(self, other):
        if not isinstance(other, ExactOperator):
            return NotImplemented
        self._check(other)
        return self.den == other.den and np.array_equal(self.num, other.num)

    __hash__ = None

    def is_zero(self, tol=None):
        return not self.num.any()

    def entry(self, r, c):
        return self.field.from_poly([Fraction(int(self.num[k, r, c]), self.den)
                                     for k in range(self.field.degree)])

    def entries(self):
        nz = np.zeros(self.num.shape[1:], dtype=bool)
        for k in range(self.field.degree):
            nz |= (self.num[k] != 0)
        cols, rows = np.nonzero(nz.T)
        for c, r in zip(cols.tolist(), rows.tolist()):
            yield r, c, self.entry(r, c)

    def to_complex(self):
        w = self.field._omega_c
        out = np.zeros(self.num.shape[1:], dtype=complex)
        for k in range(self.field.degree):
            if self.num[k].any():
                real = np.array([[float(Fraction(int(x), self.den)) for x in row]
                                 for row in self.num[k]], dtype=float)
                out += real * w ** k
        return out

    def max_abs(self):
        return float(np.abs(self.to_complex()).max()) if not self.is_zero() else 0.0

    def first_nonzero(self):
        for r, c, v in self.entries():
            return r, c, v
        return None

    def __repr__(self):
        return f"ExactOperator({self.space!r}, nnz={self.nnz})"


class FloatOperator(Operator):
    __slots__ = ("mat",)

    def __init__(self, space, field, mat):
        self.space = space
        self.field = field
        self.mat = mat

    def _drop(self, mat):
        mat[np.abs(mat) < FLOAT_DROP] = 0
        return FloatOperator(self.space, self.field, mat)

    def __add__(self, other):
        self._check(other)
        return FloatOperator(self.space, self.field, self.mat + other.mat)

    def __neg__(self):
        return FloatOperator(self.space, self.field, -self.mat)

    def __matmul__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        return self._drop(self.mat @ other.mat)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            raise TypeError("use @ for operator products")
        return FloatOperator(self.space, self.field, self.mat * self.field(scalar))

    def __eq__(self, other):
        if not isinstance(other, FloatOperator):
            return NotImplemented
        self._check(other)
        return np.array_equal(self.mat, other.mat)

    __hash__ = None

    def is_zero(self, tol=0.0):
        return self.max_abs() <= tol

    def entry(self, r, c):
        return complex(self.mat[r, c])

    def entries(self):
        cols, rows = np.nonzero(self.mat.T)
        for c, r in zip(cols.tolist(), rows.tolist()):
            yield r, c, complex(self.mat[r, c])

    def to_complex(self):
        return self.mat.copy()

    def max_abs(self):
        return float(np.abs(self.mat).max()) if self.mat.size else 0.0

    def first_nonzero(self):
        if self.max_abs() == 0.0:
            return None
        r, c = np.unravel_index(np.argmax(np.abs(self.mat)), self.mat.shape)
        return int(r), int(c), complex(self.mat[r, c])

    def __repr__(self):
        return f"FloatOperator({self.space!r})"


def to_float(op, float_field):
    """Numeric embedding of an operator into the float backend."""
    return FloatOperator(op.space, float_field, op.to_complex())


def commutator(a, b):
    return a @ b - b @ a


def build_Z(space, field, j):
    """Diagonal clock operator with entry omega**sigma_j."""
    stride = space._site_stride(j)
    return Operator.from_entries(
        space, field,
        [(i, i, field.omega_power((i // stride) % space.N)) for i in range(space.dim)])


def build_X(space, field, j):
    """Cyclic shift sigma_j -> sigma_j + 1 (mod N) acting on kets."""
    stride = space._site_stride(j)
    N = space.N
    triplets = []
    for col in range(space.dim):
        s = (col // stride) % N
        row = col + (((s + 1) % N) - s) * stride
        triplets.append((row, col, 1))
    return Operator.from_entries(space, field, triplets)


def op_algebra(a, b, op):
    """Functional front end: add, sub, mul, scalar_mul, inverse_of_monomial.

    For ``scalar_mul`` ``b`` is the scalar; for ``inverse_of_monomial`` it is
    ignored.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a @ b
    if op == "scalar_mul":
        return a * b
    if op == "inverse_of_monomial":
        return a.inverse_monomial()
    raise ValueError(f"unknown op {op!r}")
