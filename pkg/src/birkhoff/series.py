"""Coefficient rings: exact Laurent polynomials in pi, precision-tracked
truncated Laurent series, and rational functions in t.

Coefficient sequences are int64 arrays of shape (length, m) over a
``FieldSpec``.  A ``LaurentSeries`` stores the coefficients for exponents
``start .. prec-1``; everything at or beyond ``prec`` is unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import ConfigError, DivisionByZero, FieldMismatch, PrecisionExhausted
from .ff import FieldSpec, FqElem, format_coeffs

INF = math.inf

Coeff = Union[FqElem, int]


def _empty(field: FieldSpec) -> np.ndarray:
    return np.zeros((0, field.m), dtype=np.int64)


def _as_arr(field: FieldSpec, c: Coeff) -> np.ndarray:
    return field.arr(field(c))


class LaurentPoly:
    """Exact finite Laurent polynomial sum c_e * var^e.

    ``low`` is the exponent of ``coeffs[0]``; both ends of ``coeffs`` are
    nonzero, and the zero polynomial has no coefficients at all.
    """

    __slots__ = ("field", "low", "coeffs")

    def __init__(self, field: FieldSpec, low: int, coeffs: np.ndarray):
        nz = np.flatnonzero(coeffs.any(axis=1)) if len(coeffs) else ()
        if len(nz) == 0:
            self.field, self.low, self.coeffs = field, 0, _empty(field)
            return
        self.field = field
        self.low = int(low + nz[0])
        self.coeffs = coeffs[nz[0] : nz[-1] + 1]

    # constructors
    @classmethod
    def zero(cls, field: FieldSpec) -> "LaurentPoly":
        return cls(field, 0, _empty(field))

    @classmethod
    def constant(cls, field: FieldSpec, c: Coeff) -> "LaurentPoly":
        return cls(field, 0, _as_arr(field, c).reshape(1, -1))

    @classmethod
    def one(cls, field: FieldSpec) -> "LaurentPoly":
        return cls.constant(field, 1)

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: Coeff = 1) -> "LaurentPoly":
        return cls(field, e, _as_arr(field, c).reshape(1, -1))

    @classmethod
    def from_terms(cls, field: FieldSpec, terms: Mapping[int, Coeff]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items()}
        if not terms:
            return cls.zero(field)
        lo, hi = min(terms), max(terms)
        arr = np.zeros((hi - lo + 1, field.m), dtype=np.int64)
        for e, c in terms.items():
            arr[e - lo] = _as_arr(field, c)
        return cls(field, lo, arr)

    # inspection
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __bool__(self):
        return not self.is_zero()

    @property
    def val(self):
        return INF if self.is_zero() else self.low

    @property
    def degree(self):
        """Largest exponent present; -inf for zero."""
        return -INF if self.is_zero() else self.low + len(self.coeffs) - 1

    def coeff(self, e: int) -> FqElem:
        i = e - self.low
        if 0 <= i < len(self.coeffs):
            return self.field.elem(self.coeffs[i])
        return self.field.zero

    def terms(self) -> dict[int, FqElem]:
        return {
            self.low + i: self.field.elem(row)
            for i, row in enumerate(self.coeffs)
            if row.any()
        }

    def in_R(self) -> bool:
        return self.is_zero() or self.degree <= 0

    def in_O(self) -> bool:
        return self.is_zero() or self.low >= 0

    def is_constant(self) -> bool:
        return self.is_zero() or (self.low == 0 and len(self.coeffs) == 1)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def leading(self) -> FqElem:
        """Coefficient of the largest exponent (polynomial leading term)."""
        return self.field.elem(self.coeffs[-1])

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, FqElem)):
            return LaurentPoly.constant(self.field, other)
        return NotImplemented

    def _addsub(self, other, sign):
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        lo = min(self.low, other.low)
        hi = max(self.degree, other.degree)
        arr = np.zeros((hi - lo + 1, self.field.m), dtype=np.int64)
        arr[self.low - lo : self.low - lo + len(self.coeffs)] += self.coeffs
        o = other.low - lo
        if sign > 0:
            arr[o : o + len(other.coeffs)] += other.coeffs
        else:
            arr[o : o + len(other.coeffs)] -= other.coeffs
        return LaurentPoly(self.field, lo, arr % self.field.p)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._addsub(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._addsub(self, -1)

    def __neg__(self):
        return LaurentPoly(self.field, self.low, (-self.coeffs) % self.field.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero(self.field)
        return LaurentPoly(
            self.field, self.low + other.low, self.field.convolve(self.coeffs, other.coeffs)
        )

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = self.field(c)
        return LaurentPoly(self.field, self.low, self.field.v_scale(self.coeffs, self.field.arr(c)))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var^k."""
        if self.is_zero():
            return self
        return LaurentPoly(self.field, self.low + k, self.coeffs)

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit c*var^e of the Laurent polynomial ring."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if not self.is_monomial():
            raise ArithmeticError("only monomials are invertible Laurent polynomials")
        c = self.field.inv_arr(self.coeffs[0])
        return LaurentPoly(self.field, -self.low, c.reshape(1, -1))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = LaurentPoly.one(self.field), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FqElem)):
            other = LaurentPoly.constant(self.field, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.low == other.low
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.field, self.low, self.coeffs.tobytes()))

    # conversion
    def to_series(self, prec: int) -> "LaurentSeries":
        """Truncate to a series known up to (excluding) exponent ``prec``."""
        if self.is_zero() or self.low >= prec:
            return LaurentSeries.zero(self.field, prec)
        return LaurentSeries(self.field, self.low, self.coeffs[: prec - self.low], prec)

    def truncate(self, lo=-INF, hi=INF) -> "LaurentPoly":
        """Keep the terms with lo <= exponent < hi."""
        if self.is_zero():
            return self
        a = max(0, lo - self.low) if lo != -INF else 0
        b = len(self.coeffs) if hi == INF else max(0, min(len(self.coeffs), hi - self.low))
        if a >= b:
            return LaurentPoly.zero(self.field)
        return LaurentPoly(self.field, self.low + a, self.coeffs[a:b])

    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, row in enumerate(self.coeffs):
            if not row.any():
                continue
            e = self.low + i
            c = format_coeffs(row)
            if self.field.m > 1 and ("+" in c):
                c = f"({c})"
            if e == 0:
                parts.append(c)
                continue
            mono = var if e == 1 else f"{var}^{e}"
            parts.append(mono if c == "1" else f"{c}*{mono}")
        return " + ".join(parts)

    def __str__(self):
        return self.format("x")

    def __repr__(self):
        return f"LaurentPoly({self})"


class LaurentSeries:
    """Truncated Laurent series with exact precision bookkeeping.

    A series whose known coefficients all vanish is *zero to precision*: its
    valuation is only known to be at least ``prec``.
    """

    __slots__ = ("field", "start", "coeffs", "prec")

    def __init__(self, field: FieldSpec, start: int, coeffs: np.ndarray, prec: int):
        n = prec - start
        if n <= 0 or len(coeffs) == 0:
            nz = ()
        else:
            if len(coeffs) > n:
                coeffs = coeffs[:n]
            nz = np.flatnonzero(coeffs.any(axis=1))
        self.field = field
        self.prec = int(prec)
        if len(nz) == 0:
            self.start = self.prec
            self.coeffs = _empty(field)
            return
        k = int(nz[0])
        self.start = int(start + k)
        c = coeffs[k:]
        if len(c) < prec - self.start:
            pad = np.zeros((prec - self.start - len(c), field.m), dtype=np.int64)
            c = np.concatenate([c, pad])
        self.coeffs = c

    @classmethod
    def zero(cls, field: FieldSpec, prec: int) -> "LaurentSeries":
        return cls(field, prec, _empty(field), prec)

    def is_zero_to_precision(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def val(self) -> int:
        if self.is_zero_to_precision():
            raise PrecisionExhausted(f"series is zero to precision {self.prec}")
        return self.start

    def coeff(self, e: int) -> FqElem:
        if e >= self.prec:
            raise PrecisionExhausted(f"coefficient {e} beyond precision {self.prec}")
        i = e - self.start
        if 0 <= i < len(self.coeffs):
            return self.field.elem(self.coeffs[i])
        return self.field.zero

    def relative_precision(self) -> int:
        return self.prec - self.start

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, (LaurentSeries, LaurentPoly)):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, FqElem)):
            return LaurentPoly.constant(self.field, other)
        return NotImplemented

    def _addsub(self, other, sign):
        if isinstance(other, LaurentPoly):
            other_prec, other_start = self.prec, (other.low if other else self.prec)
            ocoeffs = other.coeffs
        else:
            other_prec, other_start, ocoeffs = other.prec, other.start, other.coeffs
        prec = min(self.prec, other_prec)
        lo = min(self.start, other_start, prec)
        arr = np.zeros((prec - lo, self.field.m), dtype=np.int64)
        a = self.coeffs[: max(0, prec - self.start)]
        arr[self.start - lo : self.start - lo + len(a)] += a
        b = ocoeffs[: max(0, prec - other_start)]
        if sign > 0:
            arr[other_start - lo : other_start - lo + len(b)] += b
        else:
            arr[other_start - lo : other_start - lo + len(b)] -= b
        return LaurentSeries(self.field, lo, arr % self.field.p, prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentSeries(self.field, self.start, (-self.coeffs) % self.field.p, self.prec)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if isinstance(other, LaurentPoly):
            if other.is_zero():
                return other
            prec = other.low + self.prec
            start = other.low + self.start
            c = f.convolve(other.coeffs[: prec - start], self.coeffs)
            return LaurentSeries(f, start, c, prec)
        prec = min(self.start + other.prec, other.start + self.prec)
        start = self.start + other.start
        a = self.coeffs[: prec - start]
        b = other.coeffs[: prec - start]
        return LaurentSeries(f, start, f.convolve(a, b), prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero_to_precision():
            raise PrecisionExhausted("cannot invert a series that is zero to precision")
        f = self.field
        v, r = self.start, self.prec - self.start
        return LaurentSeries(f, -v, _unit_inverse(f, self.coeffs, r), self.prec - 2 * v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, LaurentPoly):
            if other.is_zero():
                raise DivisionByZero("division by exact zero")
            other = other.to_series(other.low + self.relative_precision() + 1)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.start == other.start
            and self.prec == other.prec
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def truncated(self) -> LaurentPoly:
        """The known part as an exact Laurent polynomial."""
        return LaurentPoly(self.field, self.start, self.coeffs)

    def agrees_with(self, other) -> bool:
        """True when the difference vanishes up to the common precision."""
        d = self - other
        return d.is_zero_to_precision()

    def __repr__(self):
        body = self.truncated().format("x")
        return f"LaurentSeries({body} + O(x^{self.prec}))"


def _unit_inverse(field: FieldSpec, u: np.ndarray, r: int) -> np.ndarray:
    """First r coefficients of 1/u for a unit power series u (u[0] != 0)."""
    y = field.inv_arr(u[0]).reshape(1, -1)
    two = field.arr(field(2))
    n = 1
    while n < r:
        n = min(2 * n, r)
        uy = field.convolve(u[:n], y)[:n]
        e = (-uy) % field.p
        e[0] = (e[0] + two) % field.p
        y = field.convolve(y, e)[:n]
    return y[:r]


Series = Union[LaurentPoly, LaurentSeries]


def val_of(x: Series):
    """Valuation; +inf for exact zero; PrecisionExhausted if unknown."""
    return x.val


def split_integral(x: Series) -> tuple[LaurentPoly, Series]:
    """Split x = P + h with P in F_q[pi^-1] (exponents <= 0) and h in pi*O."""
    if isinstance(x, LaurentPoly):
        return x.truncate(hi=1), x.truncate(lo=1)
    if x.prec < 1:
        raise PrecisionExhausted(f"need precision >= 1 to split, have {x.prec}")
    P = LaurentPoly(x.field, x.start, x.coeffs[: max(0, 1 - x.start)])
    if x.start >= 1:
        h = x
    else:
        h = LaurentSeries(x.field, 1, x.coeffs[1 - x.start :], x.prec)
    return P, h


def series_arith(op: str, x: LaurentSeries, y: LaurentSeries | None = None) -> LaurentSeries:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown operation {op!r}")


# --- polynomials in t and rational functions --------------------------------

def _poly_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    f = a.field
    if b.is_zero():
        raise DivisionByZero("polynomial division by zero")
    db = b.degree
    inv_lead = f.inv_arr(b.coeffs[-1])
    bc = b.coeffs if b.low == 0 else np.concatenate(
        [np.zeros((b.low, f.m), dtype=np.int64), b.coeffs]
    )
    if a.is_zero() or a.degree < db:
        return LaurentPoly.zero(f), a
    r = np.zeros((a.degree + 1, f.m), dtype=np.int64)
    r[a.low :] = a.coeffs
    q = np.zeros((a.degree - db + 1, f.m), dtype=np.int64)
    for k in range(a.degree - db, -1, -1):
        top = r[k + db]
        if not top.any():
            continue
        c = f.v_mul(top, inv_lead)
        q[k] = c
        r[k : k + db + 1] = (r[k : k + db + 1] - f.v_scale(bc, c)) % f.p
    return LaurentPoly(f, 0, q), LaurentPoly(f, 0, r[:db] if db > 0 else _empty(f))


def _poly_monic(a: LaurentPoly) -> LaurentPoly:
    return a.scale(a.leading().inverse())


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    while not b.is_zero():
        a, b = b, _poly_divmod(a, b)[1]
    return a if a.is_zero() else _poly_monic(a)


def _taylor_shift(a: LaurentPoly, c: FqElem) -> LaurentPoly:
    """a(c + pi) as a polynomial in pi."""
    f = a.field
    lin = LaurentPoly.from_terms(f, {0: c, 1: 1})
    out = LaurentPoly.zero(f)
    for e in range(int(a.degree), -1, -1):
        out = out * lin + LaurentPoly.constant(f, a.coeff(e))
    return out


def _reverse_at_infinity(a: LaurentPoly) -> LaurentPoly:
    """a(t) with t = 1/pi, as a Laurent polynomial in pi (exponents <= 0)."""
    return LaurentPoly(a.field, -int(a.degree), a.coeffs[::-1])


@dataclass(frozen=True)
class Place:
    """A degree-1 place of F_q(t): t - a for ``a`` in F_q, or infinity (a is None)."""

    a: FqElem | None = None

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.a is None

    def sort_key(self):
        return (1, 0) if self.a is None else (0, self.a.index())

    def uniformizer(self, field: FieldSpec) -> "RatFun":
        t = RatFun.t(field)
        return RatFun.one(field) / t if self.a is None else t - RatFun.constant(field, self.a)

    def lift(self, x: LaurentPoly) -> "RatFun":
        """Image in F_q(t) of a Laurent polynomial in this place's uniformizer."""
        f = x.field
        if x.is_zero():
            return RatFun.zero(f)
        pi = self.uniformizer(f)
        pinv = RatFun.one(f) / pi
        out = RatFun.zero(f)
        for e, c in x.terms().items():
            base = pi if e >= 0 else pinv
            out = out + (base ** abs(e)) * RatFun.constant(f, c)
        return out

    def __str__(self):
        return "inf" if self.a is None else f"a={self.a}"


class RatFun:
    """Reduced fraction num/den of polynomials in t; den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, _canonical=False):
        f = num.field
        if den is None:
            den = LaurentPoly.one(f)
        if num.low < 0 or (den.low < 0 and not den.is_zero()):
            raise ValueError("numerator and denominator must be polynomials in t")
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = LaurentPoly.one(f)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = _poly_divmod(num, g)[0]
                    den = _poly_divmod(den, g)[0]
                lead_inv = den.leading().inverse()
                num, den = num.scale(lead_inv), den.scale(lead_inv)
        self.num, self.den = num, den

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def zero(cls, field):
        return cls(LaurentPoly.zero(field), _canonical=True)

    @classmethod
    def one(cls, field):
        return cls(LaurentPoly.one(field), _canonical=True)

    @classmethod
    def constant(cls, field, c):
        return cls(LaurentPoly.constant(field, c), _canonical=True)

    @classmethod
    def t(cls, field):
        return cls(LaurentPoly.monomial(field, 1), _canonical=True)

    @classmethod
    def from_poly(cls, p: LaurentPoly):
        return cls(p, _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.is_constant()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, FqElem)):
            return RatFun.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFun.zero(self.field)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun(self.num**e, self.den**e, _canonical=True)

    def __eq__(self, other):
        if isinstance(other, (int, FqElem)):
            other = RatFun.constant(self.field, other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def val_at(self, place: Place):
        """Order of vanishing at the place (+inf for zero)."""
        if self.is_zero():
            return INF
        if place.is_infinite:
            return int(self.den.degree - self.num.degree)
        return _order_at(self.num, place.a) - _order_at(self.den, place.a)

    def expand(self, place: Place, prec: int) -> LaurentSeries:
        return expand_at_place(self, place, prec)

    def format(self) -> str:
        if self.den.degree == 0:
            return self.num.format("t") if self.num.is_monomial() or self.num.is_zero() else f"({self.num.format('t')})"
        return f"({self.num.format('t')})/({self.den.format('t')})"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RatFun({self})"


def _order_at(a: LaurentPoly, c: FqElem) -> int:
    if a.is_zero():
        return INF
    return int(_taylor_shift(a, c).low)


def _local_parts(x: RatFun, place: Place) -> tuple[LaurentPoly, LaurentPoly]:
    if place.is_infinite:
        return _reverse_at_infinity(x.num), _reverse_at_infinity(x.den)
    return _taylor_shift(x.num, place.a), _taylor_shift(x.den, place.a)


def expand_at_place(x: RatFun, place: Place, prec: int) -> LaurentSeries:
    """Laurent expansion of x in the place's uniformizer, exact below ``prec``."""
    if not isinstance(place, Place):
        raise ConfigError(f"unsupported place {place!r}")
    if place.a is not None and place.a.field != x.field:
        raise FieldMismatch("place and function live over different fields")
    f = x.field
    if x.is_zero():
        return LaurentSeries.zero(f, prec)
    num, den = _local_parts(x, place)
    v = num.low - den.low
    r = prec - v
    if r <= 0:
        return LaurentSeries.zero(f, prec)
    inv = LaurentSeries(f, -den.low, _unit_inverse(f, den.coeffs, r), -den.low + r)
    return inv * num
