"""Coefficient fields: rationals, Gaussian rationals and prime fields."""
from __future__ import annotations

from fractions import Fraction


def _frac_to_json(q: Fraction):
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def _frac_from_json(v) -> Fraction:
    if isinstance(v, bool):
        raise ValueError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"not a rational: {v!r}")


class GaussQ:
    """a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _lift(self, other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussQ(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def inverse(self) -> "GaussQ":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussQ zero")
        return GaussQ(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"({self.re}+{self.im}i)"


class Fp:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _lift(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return Fp(self.v + o.v, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __sub__(self, other):
        o = self._lift(other)
        return Fp(self.v - o.v, self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return Fp(self.v * o.v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise ZeroDivisionError("Fp zero")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        return isinstance(other, Fp) and other.p == self.p and other.v == self.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Base class for coefficient fields."""

    name = "field"

    def __init__(self):
        self.zero = self.coerce(0)
        self.one = self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def inv(self, c):
        return self.one / c

    def conj(self, c):
        return c

    def to_json(self, c):
        raise NotImplementedError

    def from_json(self, v):
        raise NotImplementedError

    def describe(self):
        return self.name


class Rationals(Field):
    name = "QQ"

    def coerce(self, x):
        if isinstance(x, GaussQ):
            if x.im != 0:
                raise ValueError(f"{x!r} is not rational")
            return x.re
        return Fraction(x)

    def to_json(self, c):
        return _frac_to_json(c)

    def from_json(self, v):
        return _frac_from_json(v)


class GaussianRationals(Field):
    name = "QQ(i)"

    def coerce(self, x):
        if isinstance(x, GaussQ):
            return x
        return GaussQ(x, 0)

    def conj(self, c):
        return c.conj()

    def to_json(self, c):
        if c.im == 0:
            return _frac_to_json(c.re)
        return [_frac_to_json(c.re), _frac_to_json(c.im)]

    def from_json(self, v):
        if isinstance(v, list):
            if len(v) != 2:
                raise ValueError(f"Gaussian rational needs [re, im], got {v!r}")
            return GaussQ(_frac_from_json(v[0]), _frac_from_json(v[1]))
        return GaussQ(_frac_from_json(v), 0)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"
        super().__init__()

    def coerce(self, x):
        if isinstance(x, Fp):
            return x
        if isinstance(x, Fraction):
            return Fp(x.numerator, self.p) / Fp(x.denominator, self.p)
        return Fp(int(x), self.p)

    def to_json(self, c):
        return c.v

    def from_json(self, v):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"not an element of {self.name}: {v!r}")
        return Fp(v, self.p)


QQ = Rationals()
QQI = GaussianRationals()


def field_from_name(name: str) -> Field:
    if name == "QQ":
        return QQ
    if name in ("QQ(i)", "QQI"):
        return QQI
    if name.startswith("GF(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    raise ValueError(f"unknown coefficient field {name!r}")
