"""Exact scalars: rationals, the cyclotomic field Q(zeta_p), and prime fields.

Rationals are plain :class:`fractions.Fraction` values. Elements of
Q(zeta_p) are stored in the power basis 1, z, ..., z^(p-2) and reduced
eagerly, so ``==`` is a coefficient comparison.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidConductor, ParseError

Rational = Fraction

#: Largest conductor accepted by :func:`check_conductor`.
MAX_CONDUCTOR = 31


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_conductor(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not is_prime(p):
        raise InvalidConductor(f"conductor must be an odd prime, got {p!r}")
    if p > MAX_CONDUCTOR:
        raise InvalidConductor(f"conductor {p} exceeds the configured bound {MAX_CONDUCTOR}")
    return p


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ParseError(f"not a rational: {x!r}") from None
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def exact_div(a, b):
    """a / b without ever producing a float."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    if isinstance(b, int):
        b = Fraction(b)
    return a / b


def rational_str(x) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Q(zeta_p)
# ---------------------------------------------------------------------------

def _reduce(p: int, raw) -> tuple:
    """Fold exponents mod p, then eliminate z^(p-1) = -(1 + z + ... + z^(p-2))."""
    acc = [Fraction(0)] * p
    for k, c in enumerate(raw):
        if c:
            acc[k % p] += c
    top = acc[p - 1]
    if top:
        return tuple(c - top for c in acc[: p - 1])
    return tuple(acc[: p - 1])


class CyclotomicNumber:
    """An element of Q(zeta_p), p an odd prime.

    >>> z = zeta(7)
    >>> z ** 7 == 1
    True
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        check_conductor(p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", _reduce(p, [as_rational(c) for c in coeffs]))

    @classmethod
    def _raw(cls, p, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    def __reduce__(self):
        return (CyclotomicNumber._raw, (self.p, self.coeffs))

    @classmethod
    def from_rational(cls, p, value):
        v = as_rational(value)
        return cls._raw(check_conductor(p), (v,) + (Fraction(0),) * (p - 2))

    # coercion -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.p != self.p:
                raise ValueError(f"mixing Q(zeta_{self.p}) and Q(zeta_{other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.p, other)
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber._raw(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber._raw(self.p, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.p, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        lhs = [(i, c) for i, c in enumerate(self.coeffs) if c]
        rhs = [(j, c) for j, c in enumerate(o.coeffs) if c]
        acc = [Fraction(0)] * p
        for i, a in lhs:
            for j, b in rhs:
                k = i + j
                if k >= p:
                    k -= p
                acc[k] += a * b
        top = acc[p - 1]
        if top:
            return CyclotomicNumber._raw(p, tuple(c - top for c in acc[: p - 1]))
        return CyclotomicNumber._raw(p, tuple(acc[: p - 1]))

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "CyclotomicNumber":
        """Galois conjugate z -> z^k (k prime to p)."""
        p = self.p
        if k % p == 0:
            raise ValueError("k must be prime to p")
        raw = [Fraction(0)] * p
        for i, c in enumerate(self.coeffs):
            if c:
                raw[(i * k) % p] += c
        return CyclotomicNumber._raw(p, _reduce(p, raw))

    def norm(self) -> Fraction:
        prod = self
        for k in range(2, self.p):
            prod = prod * self.conjugate(k)
        return prod.coeffs[0]

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        nz = [(i, c) for i, c in enumerate(self.coeffs) if c]
        if len(nz) == 1:
            i, c = nz[0]
            raw = [Fraction(0)] * self.p
            raw[(-i) % self.p] = 1 / c
            return CyclotomicNumber._raw(self.p, _reduce(self.p, raw))
        cofactor = CyclotomicNumber.from_rational(self.p, 1)
        for k in range(2, self.p):
            cofactor = cofactor * self.conjugate(k)
        n = (self * cofactor).coeffs[0]
        return cofactor * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicNumber.from_rational(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CyclotomicNumber({self.p}, {render_cyclotomic(self)!r})"

    def __str__(self):
        return render_cyclotomic(self)


def cyclo_normalize(p: int, raw) -> CyclotomicNumber:
    """Canonical element of Q(zeta_p) for a raw coefficient vector of any length.

    ``raw[k]`` is the coefficient of z^k; exponents are taken mod p.
    """
    return CyclotomicNumber(p, raw)


def zeta(p: int, k: int = 1) -> CyclotomicNumber:
    raw = [0] * p
    raw[k % p] = 1
    return CyclotomicNumber(p, raw)


def is_root_of_unity(x) -> int | None:
    """Multiplicative order of ``x`` if it is a root of unity, else None.

    In Q(zeta_p) the roots of unity are exactly +-z^k, so the possible
    orders are 1, 2, p and 2p.
    """
    if isinstance(x, (int, Fraction)):
        return {1: 1, -1: 2}.get(x)
    if not x:
        return None
    p = x.p
    for k in range(p):
        zk = zeta(p, k)
        if x == zk:
            return 1 if k == 0 else p
        if x == -zk:
            return 2 if k == 0 else 2 * p
    return None


_CYCLO_TERM = re.compile(
    r"""\s*(?P<sign>[+\-−])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<z>z(?:\s*\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def render_cyclotomic(x) -> str:
    """``a0 + a1*z + a2*z^2 + ...`` with zero terms dropped."""
    if isinstance(x, (int, Fraction)):
        return rational_str(x)
    parts = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        mag = rational_str(abs(c))
        if k == 0:
            body = mag
        else:
            zpow = "z" if k == 1 else f"z^{k}"
            body = zpow if abs(c) == 1 else f"{mag}*{zpow}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_cyclotomic(text: str, p: int) -> CyclotomicNumber:
    """Inverse of :func:`render_cyclotomic`; any exponent of z is accepted."""
    check_conductor(p)
    raw = [Fraction(0)] * p
    pos = 0
    s = text.strip()
    if not s:
        raise ParseError("empty cyclotomic literal", 0)
    first = True
    while pos < len(s):
        m = _CYCLO_TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("z") is None):
            raise ParseError(f"bad cyclotomic term in {text!r}", pos)
        if not first and m.group("sign") is None:
            raise ParseError(f"missing operator in {text!r}", pos)
        if m.group("star") and m.group("z") is None:
            raise ParseError(f"dangling '*' in {text!r}", pos)
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") in ("-", "−"):
            coef = -coef
        k = 0
        if m.group("z"):
            k = int(m.group("exp")) if m.group("exp") else 1
        raw[k % p] += coef
        pos = m.end()
        first = False
    return CyclotomicNumber(p, raw)


# ---------------------------------------------------------------------------
# F_q
# ---------------------------------------------------------------------------

class PrimeFieldElement:
    __slots__ = ("q", "value")

    def __init__(self, q: int, value):
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        if isinstance(value, Fraction):
            if value.denominator % q == 0:
                raise ZeroDivisionError(f"{value} has no reduction mod {q}")
            value = value.numerator * pow(value.denominator, -1, q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "value", value % q)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeFieldElement is immutable")

    def __reduce__(self):
        return (PrimeFieldElement, (self.q, self.value))

    def _v(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.q != self.q:
                raise ValueError(f"mixing F_{self.q} and F_{other.q}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return PrimeFieldElement(self.q, other).value
        return None

    def __add__(self, other):
        v = self._v(other)
        return NotImplemented if v is None else PrimeFieldElement(self.q, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._v(other)
        return NotImplemented if v is None else PrimeFieldElement(self.q, self.value - v)

    def __rsub__(self, other):
        v = self._v(other)
        return NotImplemented if v is None else PrimeFieldElement(self.q, v - self.value)

    def __mul__(self, other):
        v = self._v(other)
        return NotImplemented if v is None else PrimeFieldElement(self.q, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(self.q, -self.value)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.q}")
        return PrimeFieldElement(self.q, pow(self.value, -1, self.q))

    def __truediv__(self, other):
        v = self._v(other)
        if v is None:
            return NotImplemented
        return self * PrimeFieldElement(self.q, v).inverse()

    def __rtruediv__(self, other):
        v = self._v(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.q, v) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(self.q, pow(self.value, n, self.q))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        v = self._v(other)
        if v is None:
            return NotImplemented
        return self.value == v % self.q

    def __hash__(self):
        return hash((self.q, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.q})({self.value})"
