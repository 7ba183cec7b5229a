"""Dense univariate polynomials over Q in pure Python.

Only the subset of the ``flint.fmpq_poly`` interface that
:mod:`gersten_lab.rings` uses is provided, so the two are interchangeable.
"""

from __future__ import annotations

from fractions import Fraction


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class QPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, QPoly):
            self._c = coeffs._c
        elif isinstance(coeffs, (int, Fraction)):
            self._c = _trim([Fraction(coeffs)])
        else:
            self._c = _trim(Fraction(c) for c in coeffs)

    @classmethod
    def _raw(cls, coeffs):
        p = cls.__new__(cls)
        p._c = _trim(coeffs)
        return p

    def coeffs(self):
        return list(self._c)

    def degree(self):
        return len(self._c) - 1

    def __getitem__(self, i):
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly(other)
        return isinstance(other, QPoly) and self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __neg__(self):
        return QPoly._raw(-c for c in self._c)

    def __add__(self, other):
        other = other if isinstance(other, QPoly) else QPoly(other)
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = other if isinstance(other, QPoly) else QPoly(other)
        return self + (-other)

    def __rsub__(self, other):
        return QPoly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly._raw(c * other for c in self._c)
        a, b = self._c, other._c
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly._raw(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        db = other.degree()
        lead = other._c[-1]
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            c = rem[-1] / lead
            quot[shift] = c
            for j, y in enumerate(other._c):
                rem[shift + j] -= c * y
            rem = list(_trim(rem))
        return QPoly._raw(quot), QPoly._raw(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        return self * (1 / self._c[-1]) if self else self

    def gcd(self, other):
        # monic remainders keep the coefficients from blowing up
        a, b = self.monic(), other.monic()
        while b:
            a, b = b, (a % b).monic()
        return a

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"QPoly({[str(c) for c in self._c]})"
