"""Exact scalars in multi-quadratic extensions of the Gaussian rationals.

A :class:`RadScalar` is a finite sum ``sum_m (a_m + b_m i) * sqrt(m)`` over
squarefree positive radicands ``m``, with rational ``a_m, b_m``.  Every matrix
entry used by the catalog (``sqrt(2)``, ``sqrt(3) i``, ``3/(4 sqrt(11))``, ...)
lives in this representation, and equality is structural because zero
coefficients are never stored.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Tuple, Union

# Fraction is kept in lowest terms with a positive denominator, and zero is 0/1.
Rational = Fraction

Coeff = Tuple[Fraction, Fraction]
ScalarLike = Union["RadScalar", int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def is_squarefree(m: int) -> bool:
    if m < 1:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def squarefree_split(n: int) -> Tuple[int, int]:
    """Return ``(c, d)`` with ``n == c*c*d`` and ``d`` squarefree, by trial division."""
    if n < 1:
        raise ValueError(f"radicand must be a positive integer, got {n}")
    c, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        c *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    return c, d * n


def _prime_factor(m: int) -> int:
    p = 2
    while p * p <= m:
        if m % p == 0:
            return p
        p += 1
    return m


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class RadScalar:
    """Exact element of Q(i, sqrt(m1), ..., sqrt(mk)).

    ``terms`` maps a squarefree radicand to its Gaussian-rational coefficient
    ``(re, im)``.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, value: ScalarLike = 0):
        if isinstance(value, RadScalar):
            self._terms = value._terms
        else:
            q = as_rational(value)
            self._terms = {1: (q, _ZERO)} if q else {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, Coeff]) -> "RadScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, object, object]]) -> "RadScalar":
        """Build from ``(radicand, re, im)`` triples; radicands need not be squarefree."""
        acc: Dict[int, list] = {}
        for m, re, im in terms:
            c, d = squarefree_split(int(m))
            slot = acc.setdefault(d, [_ZERO, _ZERO])
            slot[0] += c * as_rational(re)
            slot[1] += c * as_rational(im)
        return cls._raw({m: (re, im) for m, (re, im) in acc.items() if re or im})

    @classmethod
    def sqrt(cls, n: ScalarLike) -> "RadScalar":
        """Exact square root of a nonnegative rational."""
        q = as_rational(n)
        if q < 0:
            return cls.sqrt(-q) * I
        if not q:
            return cls(0)
        # sqrt(p/q) = sqrt(p*q)/q
        c, d = squarefree_split(q.numerator * q.denominator)
        return cls._raw({d: (Fraction(c, q.denominator), _ZERO)})

    @classmethod
    def gaussian(cls, re: object = 0, im: object = 0) -> "RadScalar":
        re, im = as_rational(re), as_rational(im)
        return cls._raw({1: (re, im)} if (re or im) else {})

    @property
    def terms(self) -> Dict[int, Coeff]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_rational(self) -> bool:
        t = self._terms
        return not t or (len(t) == 1 and 1 in t and not t[1][1])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms[1][0] if self._terms else _ZERO

    def is_real(self) -> bool:
        return all(not im for _, im in self._terms.values())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: ScalarLike) -> "RadScalar":
        if not isinstance(other, RadScalar):
            try:
                other = RadScalar(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, (re, im) in other._terms.items():
            cur = out.get(m)
            if cur is None:
                out[m] = (re, im)
            else:
                nre, nim = cur[0] + re, cur[1] + im
                if nre or nim:
                    out[m] = (nre, nim)
                else:
                    del out[m]
        return RadScalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "RadScalar":
        return RadScalar._raw({m: (-re, -im) for m, (re, im) in self._terms.items()})

    def __sub__(self, other: ScalarLike) -> "RadScalar":
        if not isinstance(other, RadScalar):
            try:
                other = RadScalar(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "RadScalar":
        return RadScalar(other) - self

    def __mul__(self, other: ScalarLike) -> "RadScalar":
        if not isinstance(other, RadScalar):
            try:
                q = as_rational(other)
            except TypeError:
                return NotImplemented
            if not q:
                return ZERO
            return RadScalar._raw({m: (re * q, im * q) for m, (re, im) in self._terms.items()})
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        out: Dict[int, list] = {}
        for m1, (r1, i1) in a.items():
            for m2, (r2, i2) in b.items():
                if m1 == m2:
                    g, m = m1, 1
                elif m1 == 1 or m2 == 1:
                    g, m = 1, m1 * m2
                else:
                    # m1, m2 squarefree: sqrt(m1 m2) = g sqrt(m1 m2 / g^2)
                    g = math.gcd(m1, m2)
                    m = (m1 // g) * (m2 // g)
                re = r1 * r2 - i1 * i2
                im = r1 * i2 + i1 * r2
                if g != 1:
                    re, im = re * g, im * g
                slot = out.get(m)
                if slot is None:
                    out[m] = [re, im]
                else:
                    slot[0] += re
                    slot[1] += im
        return RadScalar._raw({m: (re, im) for m, (re, im) in out.items() if re or im})

    __rmul__ = __mul__

    def conjugate(self) -> "RadScalar":
        """Complex conjugate (radicands are positive, so only ``i`` flips)."""
        return RadScalar._raw({m: (re, -im) for m, (re, im) in self._terms.items()})

    def galois_flip(self, p: int) -> "RadScalar":
        """Apply the automorphism sqrt(p) -> -sqrt(p) for a prime ``p``."""
        return RadScalar._raw(
            {m: ((-re, -im) if m % p == 0 else (re, im)) for m, (re, im) in self._terms.items()}
        )

    def inverse(self) -> "RadScalar":
        """Multiplicative inverse by rationalising one prime at a time.

        Multiplying by the conjugate under ``sqrt(p) -> -sqrt(p)`` yields an
        element fixed by that automorphism, so the prime ``p`` disappears from
        every radicand.  Once only the radicand 1 remains we invert in Q(i).
        """
        if not self._terms:
            raise ZeroDivisionError("inverse of zero RadScalar")
        num = ONE
        den = self
        while True:
            rads = [m for m in den._terms if m != 1]
            if not rads:
                break
            conj = den.galois_flip(_prime_factor(min(rads)))
            num = num * conj
            den = den * conj
        x, y = den._terms[1]
        norm = x * x + y * y
        return num * RadScalar._raw({1: (x / norm, -y / norm)})

    def __truediv__(self, other: ScalarLike) -> "RadScalar":
        if not isinstance(other, RadScalar):
            q = as_rational(other)
            if not q:
                raise ZeroDivisionError("division of RadScalar by zero")
            return self * (1 / q)
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> "RadScalar":
        return RadScalar(other) * self.inverse()

    def __pow__(self, n: int) -> "RadScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RadScalar):
            return self._terms == other._terms
        try:
            return self._terms == RadScalar(other)._terms  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- conversions ----------------------------------------------------------

    def __complex__(self) -> complex:
        return self.to_float()

    def to_float(self) -> complex:
        re_sum = 0.0
        im_sum = 0.0
        for m, (re, im) in self._terms.items():
            s = 1.0 if m == 1 else math.sqrt(m)
            re_sum += float(re) * s
            im_sum += float(im) * s
        return complex(re_sum, im_sum)

    def to_json(self) -> list:
        return [
            {"rad": m, "re": str(re), "im": str(im)}
            for m, (re, im) in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data: list) -> "RadScalar":
        terms = []
        for item in data:
            m = int(item["rad"])
            if not is_squarefree(m):
                raise ValueError(f"radicand {m} is not squarefree")
            terms.append((m, Fraction(item["re"]), Fraction(item["im"])))
        return cls.from_terms(terms)

    def __repr__(self) -> str:
        return f"RadScalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, (re, im) in sorted(self._terms.items()):
            if re and im:
                coeff = f"({re}{'+' if im > 0 else '-'}{abs(im)}i)"
            elif im:
                coeff = f"{im}i"
            else:
                coeff = str(re)
            parts.append(coeff if m == 1 else f"{coeff}*sqrt({m})")
        return " + ".join(parts)


ZERO = RadScalar(0)
ONE = RadScalar(1)
I = RadScalar.gaussian(0, 1)


def scalar(x: ScalarLike) -> RadScalar:
    return x if isinstance(x, RadScalar) else RadScalar(x)


def sqrt(n: ScalarLike) -> RadScalar:
    return RadScalar.sqrt(n)


def scalar_mul(a: RadScalar, b: RadScalar) -> RadScalar:
    return a * b


def scalar_inv(a: RadScalar) -> RadScalar:
    return a.inverse()


def to_float(a: RadScalar) -> complex:
    return a.to_float()
