"""Coefficient fields: the 5th cyclotomic field Q(zeta) and prime fields F_p, p = 1 mod 5.

Two representations live here.

* ``CyclotomicElement`` / ``ModularElement`` are the user-facing field elements
  with operator overloading.
* Integer 4-tuples ``(c0, c1, c2, c3)`` meaning ``c0 + c1*z + c2*z^2 + c3*z^3``
  are the raw ring elements of Z[zeta] used inside the elimination kernels.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = [
    "FieldMismatchError",
    "CyclotomicElement",
    "CyclotomicField",
    "ModularElement",
    "ModularField",
    "DEFAULT_PRIMES",
    "power_to_basis",
    "zadd",
    "zsub",
    "zmul",
    "zconj",
    "znorm",
    "zdiv_exact",
    "zis_zero",
    "ZERO",
    "ONE",
]

# The three largest primes below 2**26 with p = 1 (mod 5); products of two
# residues are exact in float64, which the compiled rank kernel relies on.
DEFAULT_PRIMES = (67108721, 67108661, 67108511)


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


# ---------------------------------------------------------------------------
# Z[zeta] on 4-tuples (basis 1, z, z^2, z^3 with z^4 = -1 - z - z^2 - z^3)

ZERO = (0, 0, 0, 0)
ONE = (1, 0, 0, 0)


def power_to_basis(c):
    """Reduce coefficients of ``z^0 .. z^k`` (any length) to the 4-term basis."""
    folded = [0, 0, 0, 0, 0]
    for e, x in enumerate(c):
        folded[e % 5] += x
    t = folded[4]
    return (folded[0] - t, folded[1] - t, folded[2] - t, folded[3] - t)


def zis_zero(a):
    return not (a[0] or a[1] or a[2] or a[3])


def zadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def zsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def zmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
    c4 = a1 * b3 + a2 * b2 + a3 * b1
    c5 = a2 * b3 + a3 * b2
    c6 = a3 * b3
    # z^5 = 1, z^6 = z, then fold z^4
    c0 += c5
    c1 += c6
    return (c0 - c4, c1 - c4, c2 - c4, c3 - c4)


def zconj(a, j):
    """Galois conjugate under z -> z^j (j in 1..4)."""
    out = [0, 0, 0, 0, 0]
    for e in range(4):
        out[(e * j) % 5] += a[e]
    return power_to_basis(out)


def znorm(a):
    """Field norm to Q; returns a plain number."""
    p = a
    for j in (2, 3, 4):
        p = zmul(p, zconj(a, j))
    assert not (p[1] or p[2] or p[3]), "norm must be rational"
    return p[0]


def zdiv_exact(a, b):
    """Exact quotient a / b in Z[zeta]; raises ArithmeticError if b does not divide a."""
    co = zconj(b, 2)
    co = zmul(co, zconj(b, 3))
    co = zmul(co, zconj(b, 4))
    n = zmul(b, co)[0]
    num = zmul(a, co)
    q = []
    for x in num:
        d, r = divmod(x, n)
        if r:
            raise ArithmeticError("inexact division in Z[zeta]")
        q.append(d)
    return tuple(q)


# ---------------------------------------------------------------------------
# exact field Q(zeta)


class CyclotomicElement:
    """Element of Q(zeta), zeta a primitive 5th root of unity."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0, 0, 0, 0)):
        if len(coeffs) != 4:
            coeffs = power_to_basis(coeffs)
        self.coeffs = tuple(Fraction(x) for x in coeffs)

    @classmethod
    def zeta(cls, power=1):
        c = [0, 0, 0, 0, 0]
        c[power % 5] = 1
        return cls(power_to_basis(c))

    field = property(lambda self: CyclotomicField())

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement((other, 0, 0, 0))
        if isinstance(other, ModularElement):
            raise FieldMismatchError("cannot mix exact and modular elements")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(zadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(zsub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(zmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def norm(self):
        return Fraction(znorm(self.coeffs))

    def conjugate(self, j):
        return CyclotomicElement(zconj(self.coeffs, j))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        co = self.conjugate(2) * self.conjugate(3) * self.conjugate(4)
        n = (self * co).coeffs[0]
        return CyclotomicElement(tuple(x / n for x in co.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicElement((1, 0, 0, 0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self):
        return not any(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Q(z5)", self.coeffs))

    def __repr__(self):
        terms = []
        for e, x in enumerate(self.coeffs):
            if x:
                terms.append(f"{x}" if e == 0 else f"{x}*z^{e}")
        return " + ".join(terms) or "0"


class CyclotomicField:
    """The exact coefficient field Q(zeta_5)."""

    mode = "exact"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField)

    def __hash__(self):
        return hash("Q(z5)")

    def __repr__(self):
        return "CyclotomicField()"

    def __call__(self, value):
        if isinstance(value, CyclotomicElement):
            return value
        if isinstance(value, tuple):
            return CyclotomicElement(value)
        return CyclotomicElement((value, 0, 0, 0))

    def zeta(self, power=1):
        return CyclotomicElement.zeta(power)

    def describe(self):
        return {"mode": "exact", "field": "Q(zeta_5)"}


# ---------------------------------------------------------------------------
# prime fields


@lru_cache(maxsize=None)
def _fifth_root(p):
    if p % 5 != 1:
        raise ValueError(f"prime {p} is not 1 mod 5; no 5th root of unity")
    e = (p - 1) // 5
    g = 2
    while True:
        r = pow(g, e, p)
        if r != 1:
            return r
        g += 1


class ModularField:
    """F_p with a fixed primitive 5th root of unity as the image of zeta."""

    mode = "modular"
    __slots__ = ("p", "root", "_zpow")

    def __init__(self, p, root=None):
        self.p = int(p)
        self.root = _fifth_root(self.p) if root is None else int(root) % self.p
        if pow(self.root, 5, self.p) != 1 or self.root == 1:
            raise ValueError("root is not a primitive 5th root of unity")
        self._zpow = tuple(pow(self.root, e, self.p) for e in range(5))

    def __eq__(self, other):
        return isinstance(other, ModularField) and (self.p, self.root) == (other.p, other.root)

    def __hash__(self):
        return hash((self.p, self.root))

    def __repr__(self):
        return f"ModularField(p={self.p}, root={self.root})"

    def __call__(self, value):
        if isinstance(value, ModularElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to another prime field")
            return value
        if isinstance(value, tuple):
            return ModularElement(self.from_zz(value), self)
        return ModularElement(int(value) % self.p, self)

    def zeta(self, power=1):
        return ModularElement(self._zpow[power % 5], self)

    def zeta_power(self, e):
        return self._zpow[e % 5]

    def from_zz(self, a):
        """Image of an integer 4-tuple of Z[zeta] (or Fractions) in F_p."""
        p, z = self.p, self._zpow
        total = 0
        for e, x in enumerate(a):
            if isinstance(x, Fraction):
                x = x.numerator * pow(x.denominator, -1, p)
            total += (x % p) * z[e]
        return total % p

    def describe(self):
        return {"mode": "modular", "prime": self.p, "root": self.root}


class ModularElement:
    """Residue in F_p; carries its field, mixing fields is an error."""

    __slots__ = ("value", "field")

    def __init__(self, value, field):
        self.value = value % field.p
        self.field = field

    def _coerce(self, other):
        if isinstance(other, ModularElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, CyclotomicElement):
            raise FieldMismatchError("cannot mix exact and modular elements")
        return NotImplemented

    def _new(self, v):
        return ModularElement(v, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __neg__(self):
        return self._new(-self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("zero has no inverse")
        return self._new(pow(self.value, -1, self.field.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self._new(o).inverse()

    def __pow__(self, n):
        return self._new(pow(self.value, n, self.field.p))

    def is_zero(self):
        return self.value == 0

    def __eq__(self, other):
        o = self._coerce(other)
        return False if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"
