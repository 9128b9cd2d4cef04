"""Exact scalar arithmetic over Q, Q(w) and F_p with a cube root of unity.

Three coefficient modes are supported, all exact:

* ``q``      -- rationals (``fractions.Fraction``),
* ``qw``     -- the cyclotomic field Q(w), w^2 + w + 1 = 0, stored as pairs
  (a, b) of rationals meaning a + b*w,
* ``fp:<p>`` -- the prime field F_p for p == 1 (mod 3), which contains a
  designated primitive cube root of unity w_p.

A :class:`FieldMode` does arithmetic on *raw* values (Fraction, pair, int);
polynomials store raw values for speed.  :class:`CoeffElement` is the
user-facing wrapper with operators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, ModeMismatch, WrongMode, ZeroInput


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldMode:
    """Arithmetic on raw coefficient values for one of the three modes."""

    kind = "?"

    def key(self):
        return (self.kind,)

    def __eq__(self, other):
        return isinstance(other, FieldMode) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name

    # subclasses provide: name, zero, one, add, sub, mul, neg, inv, is_zero,
    # from_int, has_omega, omega, to_str, parse hooks

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc = self.one
        base = a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def eq(self, a, b):
        return a == b

    def element(self, raw) -> "CoeffElement":
        return CoeffElement(self, raw)

    def from_fraction(self, fr: Fraction):
        return self.div(self.from_int(fr.numerator), self.from_int(fr.denominator))


class QMode(FieldMode):
    kind = "q"
    name = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def has_omega(self):
        return False

    def omega(self):
        raise WrongMode("Q contains no primitive cube root of unity")

    def to_str(self, a):
        return str(a)


class QOmegaMode(FieldMode):
    """Q(w) with w^2 = -1 - w; raw values are (a, b) pairs of Fractions."""

    kind = "qw"
    name = "qw"
    zero = (Fraction(0), Fraction(0))
    one = (Fraction(1), Fraction(0))

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def mul(self, x, y):
        a, b = x
        c, d = y
        bd = b * d
        return (a * c - bd, a * d + b * c - bd)

    def neg(self, x):
        return (-x[0], -x[1])

    def norm(self, x):
        a, b = x
        return a * a - a * b + b * b

    def inv(self, x):
        n = self.norm(x)
        if n == 0:
            raise DivisionByZero("inverse of 0")
        a, b = x
        return ((a - b) / n, -b / n)

    def is_zero(self, x):
        return x[0] == 0 and x[1] == 0

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def has_omega(self):
        return True

    def omega(self):
        return (Fraction(0), Fraction(1))

    def to_str(self, x):
        a, b = x
        if b == 0:
            return str(a)
        if a == 0:
            if b == 1:
                return "w"
            if b == -1:
                return "-w"
            return f"{b}*w"
        ws = "w" if b == 1 else ("-w" if b == -1 else f"{b}*w")
        sign = "+" if b > 0 else ""
        return f"({a}{sign}{ws})"


class FpMode(FieldMode):
    """F_p with p prime, p == 1 mod 3; raw values are ints in [0, p)."""

    kind = "fp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise WrongMode(f"{p} is not prime")
        if p % 3 != 1:
            raise WrongMode(f"{p} is not congruent to 1 mod 3")
        self.p = p
        self.name = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p
        self._omega = self._find_omega()

    def key(self):
        return (self.kind, self.p)

    def _find_omega(self) -> int:
        e = (self.p - 1) // 3
        c = 2
        while True:
            w = pow(c, e, self.p)
            if w != 1:
                assert (w * w + w + 1) % self.p == 0
                return w
            c += 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def has_omega(self):
        return True

    def omega(self):
        return self._omega

    def to_str(self, a):
        return str(a)


Q = QMode()
QW = QOmegaMode()


@lru_cache(maxsize=None)
def fp_mode(p: int) -> FpMode:
    return FpMode(p)


DEFAULT_PRIME = 10009


def field_by_name(name: str) -> FieldMode:
    """Resolve a CLI-style field tag: ``q``, ``qw`` or ``fp:<p>``."""
    if name == "q":
        return Q
    if name == "qw":
        return QW
    if name.startswith("fp:"):
        return fp_mode(int(name[3:]))
    raise WrongMode(f"unknown field mode {name!r}")


class CoeffElement:
    """A scalar in one of the three modes; immutable, exact."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldMode, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, CoeffElement):
            if other.field != self.field:
                raise ModeMismatch(f"{self.field} vs {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        return CoeffElement(self.field, self.field.add(self.raw, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        return CoeffElement(self.field, self.field.sub(self.raw, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        return CoeffElement(self.field, self.field.sub(r, self.raw))

    def __mul__(self, other):
        r = self._coerce(other)
        return CoeffElement(self.field, self.field.mul(self.raw, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if self.field.is_zero(r):
            raise DivisionByZero("division by zero")
        return CoeffElement(self.field, self.field.div(self.raw, r))

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if self.field.is_zero(self.raw):
            raise DivisionByZero("division by zero")
        return CoeffElement(self.field, self.field.div(r, self.raw))

    def __neg__(self):
        return CoeffElement(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        return CoeffElement(self.field, self.field.pow(self.raw, n))

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of 0")
        return CoeffElement(self.field, self.field.inv(self.raw))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.raw == self._coerce(other)
        if not isinstance(other, CoeffElement):
            return NotImplemented
        return self.field == other.field and self.raw == other.raw

    def __hash__(self):
        return hash((self.field.key(), self.raw))

    def __repr__(self):
        return f"{self.field.to_str(self.raw)}"


def omega(field: FieldMode) -> CoeffElement:
    return CoeffElement(field, field.omega())


def convert(x: CoeffElement, target: FieldMode) -> CoeffElement:
    """Coerce Q -> Q(w) -> F_p; lossy directions raise.

    Reduction into F_p requires every denominator to be invertible mod p.
    """
    f = x.field
    if f == target:
        return x
    if f.kind == "q":
        if target.kind == "qw":
            return CoeffElement(target, (x.raw, Fraction(0)))
        if target.kind == "fp":
            return CoeffElement(target, _frac_mod(x.raw, target.p))
    if f.kind == "qw" and target.kind == "fp":
        a, b = x.raw
        return CoeffElement(
            target,
            (_frac_mod(a, target.p) + _frac_mod(b, target.p) * target.omega()) % target.p,
        )
    raise ModeMismatch(f"no coercion from {f} to {target}")


def _frac_mod(fr: Fraction, p: int) -> int:
    den = fr.denominator % p
    if den == 0:
        raise ModeMismatch(f"denominator {fr.denominator} not invertible mod {p}")
    return fr.numerator % p * pow(den, p - 2, p) % p


def cube_test_scalar(c: CoeffElement) -> bool:
    """True iff c is a nonzero cube in F_p, i.e. c^((p-1)/3) = 1."""
    if c.field.kind != "fp":
        raise WrongMode("cube test is defined in Fp mode only")
    if c.is_zero():
        raise ZeroInput("cube test on 0")
    p = c.field.p
    return pow(c.raw, (p - 1) // 3, p) == 1
