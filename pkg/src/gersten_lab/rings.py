"""Effective discrete valuation rings and their residue fields.

Two rings are supported:

* ``Z@p``: the integers localized at a prime ``p`` (uniformizer ``p``,
  residue field ``F_p``);
* ``Q[t]@t``: rational polynomials localized at ``t`` (uniformizer ``t``,
  residue field ``Q``).

Ring elements are plain backend values (``fmpq``/``Fraction``) or
:class:`RationalFunction` instances, so matrices can use ordinary operators.
The ring objects supply everything the operators cannot: valuation, unit
test, residue map, exact division and canonical string forms.
"""

from __future__ import annotations

import ast
import functools
import math
import re

from gersten_lab import _backend
from gersten_lab._backend import Poly, Q
from gersten_lab.errors import (
    NotInRing,
    NotInvertible,
    NotPrime,
    ParseError,
    UnknownRingKind,
)

INFINITY = math.inf

_ONE_POLY = Poly([1])
_ZERO_POLY = Poly([])


def _order_at_zero(p) -> int:
    """Largest k with t^k dividing the non-zero polynomial p."""
    k = 0
    while p[k] == 0:
        k += 1
    return k


def _poly_to_str(p, var="t") -> str:
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Q(coeffs[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class RationalFunction:
    """An element of Q(t) in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_poly")

    def __init__(self, num, den=None, *, _reduced=False):
        if not isinstance(num, type(_ONE_POLY)):
            num = Poly([num]) if not isinstance(num, (list, tuple)) else Poly(list(num))
        if den is None:
            self.num, self.den, self._poly = num, _ONE_POLY, True
            return
        if not isinstance(den, type(_ONE_POLY)):
            den = Poly([den]) if not isinstance(den, (list, tuple)) else Poly(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = _ONE_POLY
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
                lc = Q(den[den.degree()])
                if lc != 1:
                    num = num * (1 / lc)
                    den = den * (1 / lc)
        self.num = num
        self.den = den
        self._poly = den.degree() == 0

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, type(Q(0)))):
            return RationalFunction(Poly([other]))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._poly and other._poly:
            return RationalFunction(self.num + other.num)
        # Henrici: only the common part of the denominators can cancel
        d1, d2 = self.den, other.den
        g = d1.gcd(d2)
        if g.degree() == 0:
            return RationalFunction(self.num * d2 + other.num * d1, d1 * d2, _reduced=True)
        e1, e2 = d1 // g, d2 // g
        t = self.num * e2 + other.num * e1
        if not t:
            return RationalFunction(t)
        h = t.gcd(g)
        return RationalFunction(t // h, e1 * (d2 // h), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._poly and other._poly:
            return RationalFunction(self.num * other.num)
        if not self.num or not other.num:
            return RationalFunction(self.num * other.num)
        # cancel crosswise before multiplying
        g1, g2 = self.num.gcd(other.den), other.num.gcd(self.den)
        return RationalFunction(
            (self.num // g1) * (other.num // g2), (self.den // g2) * (other.den // g1), _reduced=True,
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalFunction(_ONE_POLY)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))

    def __str__(self):
        if self._poly:
            return _poly_to_str(self.num)
        return f"({_poly_to_str(self.num)})/({_poly_to_str(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self})"


class _Domain:
    """Shared surface used by :class:`gersten_lab.matrix.Matrix`."""

    tag = "B"
    is_field = False

    def canon(self, x):
        return x

    def is_zero(self, x) -> bool:
        return not x

    def div(self, x, y):
        """x / y in the fraction field (no membership check)."""
        return x / y


class PrimeField(_Domain):
    """The residue field F_p, elements are ints in [0, p)."""

    tag = "residue"
    is_field = True

    def __init__(self, p: int):
        self.p = p
        self.zero = 0
        self.one = 1
        self.name = f"F_{p}"

    def canon(self, x):
        return int(x) % self.p

    def coerce(self, x):
        return int(x) % self.p

    def inverse(self, x):
        if x % self.p == 0:
            raise NotInvertible("zero has no inverse in the residue field")
        return pow(int(x), -1, self.p)

    def div(self, x, y):
        return x * self.inverse(y) % self.p

    def pivot_key(self, x):
        return 0

    def format(self, x) -> str:
        return str(x % self.p)

    def parse(self, s: str):
        try:
            return int(str(s).strip()) % self.p
        except ValueError as exc:
            raise ParseError(f"not an element of {self.name}: {s!r}") from exc

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class RationalField(_Domain):
    """The residue field Q of Q[t]@t."""

    tag = "residue"
    is_field = True
    name = "Q"

    def __init__(self):
        self.zero = Q(0)
        self.one = Q(1)

    def coerce(self, x):
        return Q(x)

    def inverse(self, x):
        if x == 0:
            raise NotInvertible("zero has no inverse in the residue field")
        return 1 / Q(x)

    def pivot_key(self, x):
        return 0

    def format(self, x) -> str:
        return str(Q(x))

    def parse(self, s: str):
        return _parse_rational(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _parse_rational(s: str):
    m = _RATIONAL_RE.match(str(s))
    if not m:
        raise ParseError(f"not a rational number: {s!r}")
    num = int(m.group(1))
    den = int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {s!r}")
    return Q(num, den)


class DVR(_Domain):
    """Common interface of the effective discrete valuation rings."""

    spec: str
    g: object
    residue_field: _Domain

    def valuation(self, a):
        """Largest v with g^v dividing a; ``math.inf`` for zero."""
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        return bool(a) and self.valuation(a) == 0

    def pivot_key(self, a):
        return self.valuation(a)

    def g_power(self, v: int):
        return self.g ** v

    def unit_part(self, a):
        """The unit u with a = u * g^v."""
        return a / self.g_power(self.valuation(a))

    def inverse(self, a):
        if not self.is_unit(a):
            raise NotInvertible(f"{self.format(a)} is not a unit of {self.spec}")
        return 1 / a

    def divide(self, a, b):
        """Exact quotient a / b inside the ring; requires v(b) <= v(a)."""
        if not b:
            raise ZeroDivisionError("division by zero")
        if a and self.valuation(a) < self.valuation(b):
            raise NotInRing(f"{self.format(a)} is not divisible by {self.format(b)} in {self.spec}")
        return a / b

    def divides(self, b, a) -> bool:
        if not a:
            return True
        if not b:
            return False
        return self.valuation(b) <= self.valuation(a)

    def element(self, x):
        a = self.coerce(x)
        if not self.contains(a):
            raise NotInRing(f"{x!r} is not in {self.spec}")
        return a

    def __eq__(self, other):
        return isinstance(other, DVR) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"make_ring({self.spec!r})"

    def __str__(self):
        return self.spec


class LocalizedIntegers(DVR):
    """Z localized at the prime p."""

    def __init__(self, p: int):
        self.p = p
        self.spec = f"Z@{p}"
        self.name = self.spec
        self.zero = Q(0)
        self.one = Q(1)
        self.g = Q(p)
        self.residue_field = PrimeField(p)

    def coerce(self, x):
        return Q(x)

    def contains(self, a) -> bool:
        return _backend.denominator(Q(a)) % self.p != 0

    def valuation(self, a):
        if not a:
            return INFINITY
        n = abs(_backend.numerator(a))
        d = _backend.denominator(a)
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return v

    def residue(self, a):
        if not self.contains(a):
            raise NotInRing(f"{a} is not in {self.spec}")
        n = _backend.numerator(a)
        d = _backend.denominator(a)
        return n * pow(d, -1, self.p) % self.p

    def lift(self, c):
        return Q(int(c) % self.p)

    def format(self, a) -> str:
        return str(Q(a))

    def parse(self, s: str):
        a = _parse_rational(s)
        if not self.contains(a):
            raise ParseError(f"{s!r} is not in {self.spec}")
        return a

    def random_unit(self, rng):
        while True:
            n = rng.randint(1, 4 * self.p)
            if n % self.p:
                break
        if rng.random() < 0.5:
            n = -n
        d = 1
        if rng.random() < 0.25:
            while True:
                d = rng.randint(2, 2 * self.p + 1)
                if d % self.p:
                    break
        return Q(n, d)


class LocalizedPolynomials(DVR):
    """Q[t] localized at the prime ideal (t)."""

    spec = "Q[t]@t"
    name = "Q[t]@t"

    def __init__(self):
        self.zero = RationalFunction(_ZERO_POLY)
        self.one = RationalFunction(_ONE_POLY)
        self.g = RationalFunction(Poly([0, 1]))
        self.residue_field = RationalField()

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(Poly([Q(x)]))

    def contains(self, a) -> bool:
        return a.den[0] != 0

    def valuation(self, a):
        if not a:
            return INFINITY
        return _order_at_zero(a.num) - _order_at_zero(a.den)

    def g_power(self, v: int):
        return RationalFunction(Poly([0] * v + [1]))

    def residue(self, a):
        if not self.contains(a):
            raise NotInRing(f"{a} is not in {self.spec}")
        return Q(a.num[0]) / Q(a.den[0])

    def lift(self, c):
        return RationalFunction(Poly([Q(c)]))

    def format(self, a) -> str:
        return str(a)

    def parse(self, s: str):
        a = _parse_rational_function(str(s))
        if not self.contains(a):
            raise ParseError(f"{s!r} is not in {self.spec}")
        return a

    def random_unit(self, rng):
        def unit_poly():
            c0 = rng.choice([-3, -2, -1, 1, 2, 3])
            rest = [rng.randint(-2, 2) for _ in range(rng.randint(0, 2))]
            return Poly([c0] + rest)

        num = unit_poly()
        if rng.random() < 0.2:
            return RationalFunction(num, unit_poly())
        return RationalFunction(num)


_PARSE_OPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _parse_rational_function(s: str) -> RationalFunction:
    try:
        tree = ast.parse(s.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {s!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RationalFunction(Poly([node.value]))
        if isinstance(node, ast.Name) and node.id == "t":
            return RationalFunction(Poly([0, 1]))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError(f"non-integer exponent in {s!r}")
                return ev(node.left) ** node.right.value
            op = _PARSE_OPS.get(type(node.op))
            if op is not None:
                try:
                    return op(ev(node.left), ev(node.right))
                except ZeroDivisionError as exc:
                    raise ParseError(f"division by zero in {s!r}") from exc
        raise ParseError(f"unsupported syntax in {s!r}")

    return ev(tree)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@functools.lru_cache(maxsize=None)
def make_ring(spec: str) -> DVR:
    """Build a ring from its descriptor string ``"Z@<prime>"`` or ``"Q[t]@t"``."""
    s = spec.strip()
    if s.replace(" ", "") == "Q[t]@t":
        return LocalizedPolynomials()
    m = re.fullmatch(r"Z@(\d+)", s)
    if m:
        p = int(m.group(1))
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return LocalizedIntegers(p)
    raise UnknownRingKind(f"unknown ring descriptor {spec!r}")


def valuation(ring: DVR, a):
    return ring.valuation(a)


def is_unit(ring: DVR, a) -> bool:
    return ring.is_unit(a)


def residue(ring: DVR, a):
    return ring.residue(a)


def lift(ring: DVR, c):
    return ring.lift(c)


def random_element(ring: DVR, rng, max_val: int = 3, zero_prob: float = 0.15):
    """unit * g^v with v uniform in [0, max_val]; zero with probability ``zero_prob``."""
    if rng.random() < zero_prob:
        return ring.zero
    v = rng.randint(0, max_val)
    return ring.random_unit(rng) * ring.g_power(v)
