"""Scalar backends: exact elements of Q(omega_N) and complex floats.

Both backends expose the same small interface (``omega``, ``zero``, ``one``,
coercion by calling the field, ``embed`` into the complex numbers), so the
operator code above them is backend-agnostic.

The exact field is realised as Q[x]/Phi_N(x) with ``x`` standing for the
principal root ``exp(2*pi*i/N)``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import BackendMismatchError, CapacityError

MAX_CYCLOTOMIC_DEGREE = 64


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_divmod(num, den):
    """Long division over Q; ``den`` must have a nonzero leading coefficient."""
    num = [Fraction(c) for c in num]
    den = _trim(den)
    lead = Fraction(den[-1])
    if len(num) < len(den):
        return [Fraction(0)], _trim(num)
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / lead
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return _trim(quot), _trim(num[: len(den) - 1] or [Fraction(0)])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N):
    """Integer coefficients of Phi_N, lowest degree first.

    Computed as (x^N - 1) divided by Phi_d for every proper divisor d of N.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return (-1, 1)
    p = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            q, r = _poly_divmod(p, cyclotomic_polynomial(d))
            assert all(c == 0 for c in r)
            p = q
    assert all(c.denominator == 1 for c in p)
    return tuple(int(c) for c in p)


def _poly_inverse_mod(a, m):
    """Inverse of ``a`` in Q[x]/(m) by the extended Euclidean algorithm."""
    r0, r1 = _trim([Fraction(c) for c in m]), _trim([Fraction(c) for c in a])
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while not (len(r1) == 1 and r1[0] == 0):
        q, r = _poly_divmod(r0, r1)
        qs = _poly_mul(q, s1)
        width = max(len(s0), len(qs))
        s_new = [(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)
                 for i in range(width)]
        r0, r1 = r1, r
        s0, s1 = s1, _trim(s_new)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo Phi_N")
    g = r0[0]
    return [c / g for c in s0]


# ---------------------------------------------------------------------------
# exact backend
# ---------------------------------------------------------------------------

class CyclotomicField:
    """The field Q(omega_N) with omega_N = exp(2 pi i / N)."""

    exact = True

    def __init__(self, N, max_degree=MAX_CYCLOTOMIC_DEGREE):
        if N < 2:
            raise ValueError("N must be at least 2")
        phi = cyclotomic_polynomial(N)
        if len(phi) - 1 > max_degree:
            raise CapacityError(
                f"deg Phi_{N} = {len(phi) - 1} exceeds bound {max_degree}")
        self.N = N
        self.phi = phi
        self.degree = len(phi) - 1
        self.zero = Cyc(self, (Fraction(0),) * self.degree)
        self.one = self(1)
        self._omega_c = cmath.exp(2j * cmath.pi / N)

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("cyclotomic", self.N))

    def __call__(self, x):
        if isinstance(x, Cyc):
            if x.field != self:
                raise BackendMismatchError(f"{x.field!r} element used in {self!r}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, (int, Fraction)):
            return Cyc(self, (Fraction(x),) + (Fraction(0),) * (self.degree - 1))
        raise BackendMismatchError(f"cannot coerce {type(x).__name__} into {self!r}")

    def from_poly(self, coeffs):
        """Reduce an arbitrary polynomial in omega modulo Phi_N."""
        return Cyc(self, self.reduce(coeffs))

    def reduce(self, coeffs):
        c = [Fraction(v) for v in coeffs]
        deg, phi = self.degree, self.phi
        for k in range(len(c) - 1, deg - 1, -1):
            top = c[k]
            if top:
                for i in range(deg):
                    c[k - deg + i] -= top * phi[i]
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        return tuple(c)

    def omega(self):
        return self.from_poly([0, 1])

    def omega_power(self, k):
        return self.from_poly([0] * (k % self.N) + [1])

    def embed(self, x):
        """Numeric value of an exact element (principal embedding)."""
        return self(x).__complex__()

    def random_rational(self, rng, num_bound, den_bound, nonzero=True):
        choices = [n for n in range(-num_bound, num_bound + 1) if n or not nonzero]
        return self(Fraction(rng.choice(choices), rng.randint(1, den_bound)))

    def to_json(self, x):
        return {"coeffs": [str(c) for c in self(x).coeffs]}

    def from_json(self, obj):
        return Cyc(self, self.reduce(obj["coeffs"]))


class Cyc:
    """Immutable element of a :class:`CyclotomicField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.field != self.field:
                raise BackendMismatchError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field.from_poly(_poly_mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(omega)")
        return Cyc(self.field, self.field.reduce(
            _poly_inverse_mod(list(self.coeffs), self.field.phi)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, complex) else None
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field.N, self.coeffs))

    def __complex__(self):
        w = self.field._omega_c
        return complex(sum(float(c) * w ** k for k, c in enumerate(self.coeffs)))

    def rational(self):
        """The value as a Fraction if the element lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c})*w^{k}")
        return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# float backend
# ---------------------------------------------------------------------------

class ComplexField:
    """Double-precision complex numbers carrying the same N as the exact field."""

    exact = False

    def __init__(self, N):
        if N < 2:
            raise ValueError("N must be at least 2")
        self.N = N
        self.zero = 0j
        self.one = 1 + 0j

    def __repr__(self):
        return f"ComplexField({self.N})"

    def __eq__(self, other):
        return isinstance(other, ComplexField) and other.N == self.N

    def __hash__(self):
        return hash(("complex", self.N))

    def __call__(self, x):
        if isinstance(x, Cyc):
            raise BackendMismatchError("exact element passed to the float backend")
        if isinstance(x, str):
            x = Fraction(x)
        return complex(x)

    def omega(self):
        return cmath.exp(2j * cmath.pi / self.N)

    def omega_power(self, k):
        return cmath.exp(2j * cmath.pi * (k % self.N) / self.N)

    def embed(self, x):
        return complex(x)

    def random_rational(self, rng, num_bound, den_bound, nonzero=True):
        choices = [n for n in range(-num_bound, num_bound + 1) if n or not nonzero]
        return complex(Fraction(rng.choice(choices), rng.randint(1, den_bound)))

    def to_json(self, x):
        x = complex(x)
        return [x.real, x.imag]

    def from_json(self, obj):
        return complex(obj[0], obj[1])


def make_field(N, backend="exact"):
    if backend == "exact":
        return CyclotomicField(N)
    if backend == "float":
        return ComplexField(N)
    raise ValueError(f"unknown backend {backend!r}")


def omega(N, backend="exact"):
    """Canonical primitive N-th root of unity in the requested backend."""
    return make_field(N, backend).omega()


def field_arith(a, b, op):
    """Apply one of add/sub/mul/div to two scalars of the same backend."""
    if isinstance(a, Cyc) != isinstance(b, Cyc):
        raise BackendMismatchError("exact and float scalars cannot be mixed")
    if isinstance(a, Cyc) and a.field != b.field:
        raise BackendMismatchError("elements of different cyclotomic fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if (b.is_zero() if isinstance(b, Cyc) else b == 0):
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def is_zero(x, tol=0.0):
    if isinstance(x, Cyc):
        return x.is_zero()
    return abs(x) <= tol


def lcm(a, b):
    return a * b // math.gcd(a, b)
