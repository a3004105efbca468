"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored as coefficient vectors of length phi(n) in the power
basis 1, z, ..., z^(phi(n)-1), reduced modulo the n-th cyclotomic
polynomial, so equality is a tuple comparison.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Optional, Union

from gmpy2 import mpq

__all__ = [
    "CycNumber",
    "FieldMismatchError",
    "cyclotomic_polynomial",
    "divisors",
    "euler_phi",
    "lcm",
]

_ZERO = mpq(0)
_ONE = mpq(1)


class FieldMismatchError(ValueError):
    """Operands live in different cyclotomic fields."""


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, den monic; lowest degree first
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        if c:
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


class _FieldData:
    """Per-order tables: Phi_n and z^k in the power basis for every k mod n."""

    def __init__(self, n: int):
        self.n = n
        self.phi_poly = cyclotomic_polynomial(n)
        self.dim = len(self.phi_poly) - 1
        d = self.dim
        # x^d = -sum_m p_m x^m (mod Phi_n)
        self.fold = tuple((m, -p) for m, p in enumerate(self.phi_poly[:-1]) if p)
        powers: list[tuple[int, ...]] = []
        vec = [0] * d
        vec[0] = 1
        for _ in range(n):
            powers.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for m, p in self.fold:
                    vec[m] += top * p
        self.powers = powers
        self.mul = _compile_mul(d, self.fold)

    def reduce(self, acc: list) -> list:
        """Fold a coefficient list of any length down to degree < d, in place."""
        d = self.dim
        fold = self.fold
        for k in range(len(acc) - 1, d - 1, -1):
            c = acc[k]
            if c:
                base = k - d
                for m, p in fold:
                    acc[base + m] += c * p
        del acc[d:]
        return acc


def _compile_mul(d: int, fold: tuple) -> Callable:
    """Straight-line product of two length-d vectors followed by the fold.

    Unrolled source runs several times faster than the nested loop in CPython.
    """
    if d == 1:
        return lambda a, b: (a[0] * b[0],)
    names_a = ", ".join(f"a{i}" for i in range(d))
    names_b = ", ".join(f"b{i}" for i in range(d))
    lines = ["def mul(a, b):", f"    {names_a}, = a", f"    {names_b}, = b"]
    for k in range(2 * d - 1):
        terms = " + ".join(f"a{i}*b{k - i}" for i in range(d) if 0 <= k - i < d)
        lines.append(f"    r{k} = {terms}")
    for k in range(2 * d - 2, d - 1, -1):
        for m, p in fold:
            if p == 1:
                lines.append(f"    r{k - d + m} += r{k}")
            elif p == -1:
                lines.append(f"    r{k - d + m} -= r{k}")
            else:
                lines.append(f"    r{k - d + m} += {p}*r{k}")
    lines.append("    return (" + ", ".join(f"r{i}" for i in range(d)) + ",)")
    namespace: dict = {}
    exec("\n".join(lines), namespace)
    return namespace["mul"]


@lru_cache(maxsize=None)
def _field(n: int) -> _FieldData:
    return _FieldData(n)


def _split(value) -> tuple[int, int]:
    """(numerator, denominator) of an int, Fraction or mpq."""
    if isinstance(value, int):
        return value, 1
    if isinstance(value, Fraction):
        return value.numerator, value.denominator
    q = mpq(value)
    return int(q.numerator), int(q.denominator)


def _normalized(order: int, nums, den: int) -> "CycNumber":
    if den != 1:
        if den < 0:
            nums = [-x for x in nums]
            den = -den
        g = gcd(den, *nums)
        if g != 1:
            nums = [x // g for x in nums]
            den //= g
    return CycNumber._raw(order, tuple(nums), den)


class CycNumber:
    """An element of Q(zeta_n) in canonical reduced form.

    Stored as integer numerators over one positive common denominator, in
    lowest terms; ``coeffs`` exposes the rational coefficients.

    >>> z = CycNumber.zeta(9)
    >>> z**4 * z**5 == CycNumber.one(9)
    True
    """

    __slots__ = ("order", "nums", "den", "_hash")

    def __init__(self, order: int, coeffs: Iterable = ()):
        data = _field(order)
        pairs = [_split(c) for c in coeffs]
        den = 1
        for _, q in pairs:
            den = den * q // gcd(den, q)
        nums = [p * (den // q) for p, q in pairs]
        if len(nums) > data.dim:
            acc = [0] * data.dim
            for k, c in enumerate(nums):
                if c:
                    for i, p in enumerate(data.powers[k % order]):
                        if p:
                            acc[i] += c * p
            nums = acc
        else:
            nums += [0] * (data.dim - len(nums))
        obj = _normalized(order, nums, den)
        self.order = order
        self.nums = obj.nums
        self.den = obj.den
        self._hash = None

    @classmethod
    def _raw(cls, order: int, nums: tuple, den: int = 1) -> "CycNumber":
        obj = cls.__new__(cls)
        obj.order = order
        obj.nums = nums
        obj.den = den
        obj._hash = None
        return obj

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.nums)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "CycNumber":
        return cls._raw(n, (0,) * _field(n).dim)

    @classmethod
    def one(cls, n: int) -> "CycNumber":
        return cls.rational(n, 1)

    @classmethod
    def rational(cls, n: int, value) -> "CycNumber":
        d = _field(n).dim
        p, q = _split(value)
        return _normalized(n, (p,) + (0,) * (d - 1), q)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycNumber":
        """The root of unity zeta_n^k."""
        return cls._raw(n, _field(n).powers[k % n])

    # structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNumber):
            return self.order == other.order and self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.nums, self.den))
        return self._hash

    def _coerce(self, other) -> "CycNumber":
        if isinstance(other, CycNumber):
            if other.order != self.order:
                raise FieldMismatchError(
                    f"cannot combine Q(zeta_{self.order}) and Q(zeta_{other.order});"
                    " embed both into a common field first"
                )
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(_ONE):
            return CycNumber.rational(self.order, other)
        raise TypeError(f"unsupported operand {other!r}")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "CycNumber":
        o = other if type(other) is CycNumber and other.order == self.order else self._coerce(other)
        if self.den == 1 and o.den == 1:
            return CycNumber._raw(self.order, tuple([a + b for a, b in zip(self.nums, o.nums)]))
        den = self.den * o.den // gcd(self.den, o.den)
        fa, fb = den // self.den, den // o.den
        return _normalized(self.order, [a * fa + b * fb for a, b in zip(self.nums, o.nums)], den)

    __radd__ = __add__

    def __sub__(self, other) -> "CycNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycNumber":
        return self._coerce(other) - self

    def __neg__(self) -> "CycNumber":
        return CycNumber._raw(self.order, tuple([-a for a in self.nums]), self.den)

    def _scale(self, p: int, q: int) -> "CycNumber":
        nums = [a * p for a in self.nums]
        if q == 1 and self.den == 1:
            return CycNumber._raw(self.order, tuple(nums))
        return _normalized(self.order, nums, self.den * q)

    def __mul__(self, other) -> "CycNumber":
        if type(other) is not CycNumber:
            if isinstance(other, (int, Fraction)):
                return self._scale(*_split(other))
            return NotImplemented
        if other.order != self.order:
            self._coerce(other)
        a, b = self.nums, other.nums
        if not any(b[1:]):
            return self._scale(b[0], other.den)
        if not any(a[1:]):
            return other._scale(a[0], self.den)
        acc = _field(self.order).mul(a, b)
        den = self.den * other.den
        if den == 1:
            return CycNumber._raw(self.order, acc)
        return _normalized(self.order, acc, den)

    __rmul__ = __mul__

    def mul_zeta(self, k: int) -> "CycNumber":
        """Multiply by zeta_n^k (cheap shift)."""
        n = self.order
        k %= n
        if k == 0:
            return self
        acc = [0] * k + list(self.nums)
        _field(n).reduce(acc)
        return CycNumber._raw(n, tuple(acc), self.den)

    def inverse(self) -> "CycNumber":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        n = self.order
        modulus = [mpq(c) for c in cyclotomic_polynomial(n)]
        a = _trim([mpq(x, self.den) for x in self.nums])
        # invariant: s * x == r (mod modulus)
        r0, r1 = modulus, a
        s0, s1 = [_ZERO], [_ONE]
        while len(r1) > 1:
            q, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _trim(_qpoly_sub(s0, _qpoly_mul(q, s1)))
        c = r1[0]
        return CycNumber(n, [x / c for x in s1])

    def __truediv__(self, other) -> "CycNumber":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "CycNumber":
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "CycNumber":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNumber.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # roots of unity -------------------------------------------------------
    def root_exponent(self) -> Optional[int]:
        """k with self == zeta_n^k, or None when self is not an n-th root of unity."""
        if self.den != 1:
            return None
        for k, p in enumerate(_field(self.order).powers):
            if p == self.nums:
                return k
        return None

    def root_order(self) -> Optional[int]:
        """Smallest N with self**N == 1, searched among divisors of lcm(2, n)."""
        if self.is_zero():
            return None
        one = CycNumber.one(self.order)
        bound = lcm(2, self.order)
        for d in divisors(bound):
            if self**d == one:
                return d
        return None

    def embed(self, m: int) -> "CycNumber":
        """The same element written in Q(zeta_m); requires order | m."""
        n = self.order
        if m % n:
            raise FieldMismatchError(f"Q(zeta_{n}) does not embed in Q(zeta_{m})")
        if m == n:
            return self
        step = m // n
        coeffs = [0] * (step * len(self.nums))
        for i, c in enumerate(self.nums):
            coeffs[i * step] = Fraction(c, self.den)
        return CycNumber(m, coeffs)

    # printing -------------------------------------------------------------
    def __repr__(self) -> str:
        return f"CycNumber({self.order}, {self.to_literal()!r})"

    def __str__(self) -> str:
        return self.to_literal()

    def to_literal(self, symbol: Optional[str] = None) -> str:
        """Render in the scalar literal grammar; `symbol` defaults to z<n>."""
        sym = symbol or f"z{self.order}"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            num = str(mag)
            if k == 0:
                body = num
            else:
                mono = sym if k == 1 else f"{sym}^{k}"
                body = mono if mag == 1 else f"{num}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _trim(p: list) -> list:
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _qpoly_mul(a: list, b: list) -> list:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a: list, b: list) -> list:
    size = max(len(a), len(b))
    a = a + [_ZERO] * (size - len(a))
    b = b + [_ZERO] * (size - len(b))
    return [x - y for x, y in zip(a, b)]


def _qpoly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    den = _trim(list(den))
    lead = den[-1]
    if len(num) < len(den):
        return [_ZERO], _trim(num)
    q = [_ZERO] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1] / lead
        q[shift] = c
        if c:
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    return _trim(q), _trim(num[: len(den) - 1] or [_ZERO])
