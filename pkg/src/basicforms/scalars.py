"""Exact scalars: rational functions in one formal parameter.

The coefficient field for everything symbolic in this package is Q(a), the
field of rational functions in a single formal parameter ``a`` with rational
coefficients.  Plain rationals embed as constant functions, so code that never
mentions ``a`` pays only a small bookkeeping cost over raw ``Fraction``.

A :class:`Scalar` is stored as a pair of univariate polynomials (numerator,
denominator) over ``Fraction``, kept coprime with a monic denominator, so
structural equality is field equality.  No floats ever enter a ``Scalar``;
numeric evaluation happens only through :meth:`Scalar.evaluate`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

PARAM_NAME = "a"

ScalarLike = Union["Scalar", int, Fraction]

# Univariate polynomials over Fraction: tuple of coefficients, low degree
# first, no trailing zeros.  () is the zero polynomial.
Coeffs = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class UnboundParameterError(ValueError):
    """Raised when a numeric evaluation needs a value for the parameter."""


def _trim(coeffs: Sequence[Fraction]) -> Coeffs:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _uadd(p: Coeffs, q: Coeffs) -> Coeffs:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _uneg(p: Coeffs) -> Coeffs:
    return tuple(-c for c in p)

def _umul(p: Coeffs, q: Coeffs) -> Coeffs:
    if not p or not q:
        return ()
    if p == (_ONE,):
        return q
    if q == (_ONE,):
        return p
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _uscale(p: Coeffs, c: Fraction) -> Coeffs:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def _udivmod(p: Coeffs, q: Coeffs) -> tuple[Coeffs, Coeffs]:
    """Euclidean division of univariate polynomials, q nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [_ZERO] * max(len(p) - dq, 0)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = c / lead
        quo[i - dq] = f
        for j in range(dq + 1):
            rem[i - dq + j] -= f * q[j]
    return _trim(quo), _trim(rem)


def _ugcd(p: Coeffs, q: Coeffs) -> Coeffs:
    """Monic gcd; gcd(0, 0) = 0."""
    while q:
        p, q = q, _udivmod(p, q)[1]
    if not p:
        return ()
    return _uscale(p, 1 / p[-1])


def _ueval_fraction(p: Coeffs, value: Fraction) -> Fraction:
    acc = _ZERO
    for c in reversed(p):
        acc = acc * value + c
    return acc


def _ueval_float(p: Coeffs, value: float) -> float:
    acc = 0.0
    for c in reversed(p):
        acc = acc * value + float(c)
    return acc


def _ustr(p: Coeffs) -> str:
    """Render a univariate polynomial in the parameter, highest degree first."""
    if not p:
        return "0"
    parts: list[str] = []
    for d in range(len(p) - 1, -1, -1):
        c = p[d]
        if c == 0:
            continue
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            var = PARAM_NAME if d == 1 else f"{PARAM_NAME}^{d}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


class Scalar:
    """An element of Q(a), immutable and hashable.

    Use :meth:`of` to coerce ints and Fractions, :meth:`parameter` for ``a``
    itself.  Arithmetic operators accept plain ints and Fractions on either
    side.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num: Coeffs, den: Coeffs = (_ONE,)):
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise ZeroDivisionError("scalar with zero denominator")
        if not num:
            den = (_ONE,)
        elif den != (_ONE,):
            g = _ugcd(num, den)
            if len(g) > 1 or g[0] != 1:
                num = _udivmod(num, g)[0]
                den = _udivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = _uscale(num, 1 / lead)
                den = _uscale(den, 1 / lead)
        self._num = num
        self._den = den

    @staticmethod
    def of(value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            f = Fraction(value)
            return Scalar((f,) if f != 0 else ())
        raise TypeError(f"cannot coerce {type(value).__name__} to Scalar")

    @staticmethod
    def parameter() -> "Scalar":
        return Scalar((_ZERO, _ONE))

    @property
    def is_zero(self) -> bool:
        return not self._num

    @property
    def is_one(self) -> bool:
        return self._num == (_ONE,) and self._den == (_ONE,)

    @property
    def is_rational(self) -> bool:
        """True when the value is a plain rational (no dependence on a)."""
        return len(self._num) <= 1 and self._den == (_ONE,)

    @property
    def uses_parameter(self) -> bool:
        return len(self._num) > 1 or len(self._den) > 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise UnboundParameterError(f"scalar {self} depends on the parameter")
        return self._num[0] if self._num else _ZERO

    def sign(self) -> int:
        """Sign of the leading numerator coefficient (denominator is monic)."""
        if not self._num:
            return 0
        return 1 if self._num[-1] > 0 else -1

    def denominator(self) -> "Scalar":
        """The monic denominator as a scalar (1 unless the value is a true ratio)."""
        return Scalar(self._den)

    def __add__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.of(other)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        if self._den == (_ONE,) and o._den == (_ONE,):
            return Scalar(_uadd(self._num, o._num))
        num = _uadd(_umul(self._num, o._den), _umul(o._num, self._den))
        return Scalar(num, _umul(self._den, o._den))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(_uneg(self._num), self._den)

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self + (-Scalar.of(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.of(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.of(other)
        if self.is_zero or o.is_one:
            return self
        if o.is_zero or self.is_one:
            return o
        return Scalar(_umul(self._num, o._num), _umul(self._den, o._den))

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.of(other)
        if o.is_zero:
            raise ZeroDivisionError("scalar division by zero")
        if self.is_zero or o.is_one:
            return self
        return Scalar(_umul(self._num, o._den), _umul(self._den, o._num))

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return Scalar.of(other) / self

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return Scalar.of(1) / self ** (-exponent)
        out = Scalar.of(1)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.as_fraction())
        return hash((self._num, self._den))

    def bind(self, value: Fraction) -> "Scalar":
        """Substitute an exact rational for the parameter.

        Raises ZeroDivisionError if the denominator vanishes at ``value``.
        """
        value = Fraction(value)
        den = _ueval_fraction(self._den, value)
        if den == 0:
            raise ZeroDivisionError(
                f"denominator of {self} vanishes at {PARAM_NAME} = {value}"
            )
        return Scalar.of(_ueval_fraction(self._num, value) / den)

    def evaluate(self, bind_a: float | None = None) -> float:
        """Numeric value; ``bind_a`` is required when the scalar uses ``a``."""
        if self.uses_parameter:
            if bind_a is None:
                raise UnboundParameterError(
                    f"scalar {self} needs a numeric value for '{PARAM_NAME}'"
                )
            return _ueval_float(self._num, bind_a) / _ueval_float(self._den, bind_a)
        return float(self.as_fraction())

    def __str__(self) -> str:
        num = _ustr(self._num)
        if self._den == (_ONE,):
            return num
        den = _ustr(self._den)
        num_part = num if _is_atom(num) else f"({num})"
        den_part = den if _is_simple_atom(den) else f"({den})"
        return f"{num_part}/{den_part}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _is_atom(text: str) -> bool:
    """True when the string needs no parentheses as a numerator."""
    return not any(ch in text for ch in " +") or text.lstrip("-").isdigit()


def _is_simple_atom(text: str) -> bool:
    """True when the string needs no parentheses as a denominator."""
    return text.isdigit() or text == PARAM_NAME


ZERO = Scalar.of(0)
ONE = Scalar.of(1)
PARAM = Scalar.parameter()
