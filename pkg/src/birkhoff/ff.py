"""Finite fields F_q, q = p^m, realised as F_p[a]/(modulus).

Elements are canonical coefficient vectors.  Besides the scalar ``FqElem``
value type, ``FieldSpec`` exposes vectorised kernels operating on integer
arrays whose last axis holds the m coefficients of an element; the series and
linear-algebra code is written against those kernels.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, DivisionByZero, FieldMismatch

MAX_P = 2**16
MAX_M = 8

# Conway polynomials, ascending coefficients.
DEFAULT_MODULI = {
    4: (2, 2, (1, 1, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (2, 2, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),
    25: (5, 2, (2, 4, 1)),
    27: (3, 3, (1, 2, 0, 1)),
    32: (2, 5, (1, 0, 1, 0, 0, 1)),
    49: (7, 2, (3, 6, 1)),
    64: (2, 6, (1, 1, 0, 1, 1, 0, 1)),
}


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


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, or raise ConfigError."""
    if q < 2:
        raise ConfigError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1 or not is_prime(p):
        raise ConfigError(f"q={q} is not a prime power")
    return p, m


# --- small polynomial helpers over F_p (lists, ascending) -------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _ptrim(list(a))
    inv_lead = pow(f[-1], p - 2, p)
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, f, p)


def _ppowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result, base = [1], _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: list[int], p: int) -> bool:
    # Rabin's test: f | a^(p^m) - a and gcd(f, a^(p^(m/r)) - a) = 1 for primes r | m.
    m = len(f) - 1
    frob = [[0, 1]]
    for _ in range(m):
        frob.append(_ppowmod(frob[-1], p, f, p))

    def minus_a(poly):
        poly = list(poly) + [0] * max(0, 2 - len(poly))
        poly[1] = (poly[1] - 1) % p
        return _ptrim(poly)

    if minus_a(frob[m]):
        return False
    for r in _prime_factors(m):
        g = _pgcd(f, minus_a(frob[m // r]), p)
        if len(g) > 1:
            return False
    return True


class FieldSpec:
    """The field F_p[a]/(modulus); validated on construction."""

    __slots__ = ("p", "m", "modulus", "q", "_pow", "_t3", "_mul_basis", "_hash")

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            elif p**m in DEFAULT_MODULI and DEFAULT_MODULI[p**m][:2] == (p, m):
                modulus = DEFAULT_MODULI[p**m][2]
            else:
                raise ConfigError(f"no default modulus for q={p}^{m}; pass modulus=")
        self.p = int(p)
        self.m = int(m)
        self.modulus = tuple(int(c) for c in modulus)
        ff_validate(self)
        self.q = self.p**self.m
        self._hash = hash((self.p, self.m, self.modulus))
        self._build_tables()

    @classmethod
    def from_q(cls, q: int, modulus: Sequence[int] | None = None) -> "FieldSpec":
        p, m = prime_power(q)
        return cls(p, m, modulus)

    def _build_tables(self):
        p, m = self.p, self.m
        f = list(self.modulus)
        # a^e mod f for e = 0 .. 2m-2
        powers = []
        for e in range(2 * m - 1):
            v = _ppowmod([0, 1], e, f, p) if m > 1 else ([1] if e == 0 else [])
            row = v + [0] * (m - len(v))
            powers.append(row[:m])
        self._pow = np.array(powers, dtype=np.int64).reshape(2 * m - 1, m)
        idx = np.add.outer(np.arange(m), np.arange(m))
        self._t3 = self._pow[idx]  # (m, m, m): a^(i+j)
        self._mul_basis = self._t3  # row s of mult-by-a^k is a^(s+k)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.m == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    def header(self) -> str:
        s = f"field p={self.p} m={self.m}"
        if self.m > 1:
            s += " modulus=" + ",".join(str(c) for c in self.modulus)
        return s

    # --- scalar constructors ---------------------------------------------

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = [0] * self.m
            coeffs[0] = int(value) % self.p
            return FqElem(self, tuple(coeffs))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            raise ConfigError(f"too many coefficients for {self!r}")
        coeffs += [0] * (self.m - len(coeffs))
        return FqElem(self, tuple(coeffs))

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, (0,) * self.m)

    @property
    def one(self) -> "FqElem":
        return self(1)

    def gen(self) -> "FqElem":
        if self.m == 1:
            raise ConfigError("prime field has no generator symbol 'a'")
        return self([0, 1])

    def from_index(self, k: int) -> "FqElem":
        """Element whose coefficient digits are the base-p digits of k."""
        digits = []
        for _ in range(self.m):
            digits.append(k % self.p)
            k //= self.p
        return FqElem(self, tuple(digits))

    def elements(self) -> Iterator["FqElem"]:
        for k in range(self.q):
            yield self.from_index(k)

    def random(self, rng, nonzero: bool = False) -> "FqElem":
        lo = 1 if nonzero else 0
        return self.from_index(rng.randrange(lo, self.q))

    # --- vectorised kernels on arrays with trailing axis m ----------------

    def arr(self, elem: "FqElem") -> np.ndarray:
        return np.array(elem.coeffs, dtype=np.int64)

    def elem(self, a: np.ndarray) -> "FqElem":
        return FqElem(self, tuple(int(c) for c in a))

    def v_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of broadcastable element arrays."""
        if self.m == 1:
            return a * b % self.p
        out = np.einsum("...i,...j,ijk->...k", a, b, self._t3)
        return out % self.p

    def v_scale(self, a: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Multiply every element of array ``a`` by the single element ``c``."""
        if self.m == 1:
            return a * int(c[0]) % self.p
        mat = np.tensordot(c, self._mul_basis, axes=([0], [1])) % self.p
        return a @ mat % self.p

    def mul_matrices(self, a: np.ndarray) -> np.ndarray:
        """Matrices of F_p-linear multiplication (row-vector convention).

        ``x @ mul_matrices(c)`` equals the coefficient vector of ``x*c``.
        """
        return np.tensordot(a, self._mul_basis, axes=([-1], [1])) % self.p

    def convolve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of two coefficient sequences of shapes (La, m), (Lb, m)."""
        la, lb = len(a), len(b)
        if la == 0 or lb == 0:
            return np.zeros((0, self.m), dtype=np.int64)
        p, m = self.p, self.m
        if m == 1:
            return (np.convolve(a[:, 0], b[:, 0]) % p).reshape(-1, 1)
        w = 2 * m - 1
        fa = np.zeros((la, w), dtype=np.int64)
        fa[:, :m] = a
        fb = np.zeros((lb, w), dtype=np.int64)
        fb[:, :m] = b
        c = np.convolve(fa.ravel(), fb.ravel()) % p
        full = c[: (la + lb - 1) * w].reshape(la + lb - 1, w)
        return (full[:, :m] + full[:, m:] @ self._pow[m:]) % p

    def inv_arr(self, c: np.ndarray) -> np.ndarray:
        return np.array(_inverse(self, tuple(int(x) for x in c)), dtype=np.int64)


@lru_cache(maxsize=65536)
def _inverse(field: FieldSpec, coeffs: tuple[int, ...]) -> tuple[int, ...]:
    if not any(coeffs):
        raise DivisionByZero("inverse of zero in F_q")
    p = field.p
    if field.m == 1:
        return (pow(coeffs[0], p - 2, p),)
    r = _ppowmod(list(coeffs), field.q - 2, list(field.modulus), p)
    return tuple(r + [0] * (field.m - len(r)))


class FqElem:
    """An element of F_q in canonical coefficient form."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other) -> "FqElem":
        if isinstance(other, (int, np.integer)):
            return self.field(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FqElem(self.field, tuple((x + y) % p for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FqElem(self.field, tuple((x - y) % p for x, y in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple(-x % p for x in self.coeffs))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.m == 1:
            return FqElem(f, (self.coeffs[0] * other.coeffs[0] % f.p,))
        return f.elem(f.v_mul(f.arr(self), f.arr(other)))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        return FqElem(self.field, _inverse(self.field, self.coeffs))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self == self.field(other)
        return isinstance(other, FqElem) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def index(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def __int__(self):
        if self.field.m != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.coeffs[0]

    def __str__(self):
        return format_coeffs(self.coeffs)

    def __repr__(self):
        return f"FqElem({self})"


def format_coeffs(coeffs: Sequence[int]) -> str:
    """Entry-syntax text of an element: an integer, or a polynomial in ``a``."""
    if len(coeffs) == 1:
        return str(coeffs[0])
    parts = []
    for e, c in enumerate(coeffs):
        if not c:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            mono = "a" if e == 1 else f"a^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts) if parts else "0"


def ff_arith(op: str, x: FqElem, y: FqElem | None = None) -> FqElem:
    """Dispatch one of add/sub/mul/neg."""
    if op == "neg":
        return -x
    if y is None:
        raise TypeError(f"{op} needs two operands")
    if x.field != y.field:
        raise FieldMismatch(f"{x.field!r} vs {y.field!r}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def ff_inv(x: FqElem) -> FqElem:
    return x.inverse()


def ff_validate(spec: FieldSpec) -> None:
    """Raise ConfigError unless p is prime and the modulus is monic irreducible of degree m."""
    p, m, f = spec.p, spec.m, list(spec.modulus)
    if not is_prime(p):
        raise ConfigError(f"p={p} is not prime")
    if p > MAX_P:
        raise ConfigError(f"p={p} exceeds the supported bound 2^16")
    if not 1 <= m <= MAX_M:
        raise ConfigError(f"m={m} outside the supported range 1..{MAX_M}")
    if len(f) != m + 1:
        raise ConfigError(f"modulus must have m+1={m + 1} coefficients, got {len(f)}")
    if any(not 0 <= c < p for c in f):
        raise ConfigError(f"modulus coefficients must lie in [0, {p})")
    if f[-1] != 1:
        raise ConfigError("modulus is not monic")
    if m == 1:
        return
    if not _is_irreducible(f, p):
        raise ConfigError(f"modulus {f} is reducible over F_{p}")
