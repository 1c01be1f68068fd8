"""n x n matrices over the three coefficient flavours, with the group-element
constructors used by the reduction and seeded random generators.

Conventions: row vectors act on the right, B is upper triangular, T is
diagonal, and the simple root alpha_i is t_i / t_{i+1}.  Public constructor
indices (``make_elementary``, ``make_flip``, ``minor``) are 1-based to match
the usual matrix notation; everything else is 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    FlavorMismatch,
    NonUnitDeterminant,
    SingularInput,
    SizeMismatch,
)
from .ff import FieldSpec
from .series import INF, LaurentPoly, LaurentSeries, RatFun

LAURENT = "laurent"
SERIES = "series"
RATIONAL = "rational"


def is_exact_zero(x) -> bool:
    if isinstance(x, (LaurentPoly, RatFun)):
        return x.is_zero()
    return False


def _flavor_of(x) -> str:
    if isinstance(x, LaurentPoly):
        return LAURENT
    if isinstance(x, LaurentSeries):
        return SERIES
    if isinstance(x, RatFun):
        return RATIONAL
    raise FlavorMismatch(f"unsupported entry type {type(x).__name__}")


def _zero(field: FieldSpec, flavor: str):
    return RatFun.zero(field) if flavor == RATIONAL else LaurentPoly.zero(field)


def _one(field: FieldSpec, flavor: str):
    return RatFun.one(field) if flavor == RATIONAL else LaurentPoly.one(field)


def _combine_flavors(a: str, b: str) -> str:
    if a == b:
        return a
    if {a, b} == {LAURENT, SERIES}:
        return SERIES
    raise FlavorMismatch(f"cannot combine {a} and {b} matrices")


class MatG:
    """Square matrix whose entries share one field and one ring flavour.

    Series-flavoured matrices may hold exact ``LaurentPoly`` entries (exact
    zeros in particular) next to truncated series.
    """

    __slots__ = ("field", "flavor", "rows")

    def __init__(self, rows: Iterable[Sequence], field: FieldSpec | None = None, flavor: str | None = None):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise SizeMismatch("matrix must be square")
        flavors = {_flavor_of(x) for r in rows for x in r}
        if flavor is None:
            if not flavors:
                raise SizeMismatch("empty matrix needs an explicit flavor")
            flavor = None
            for fl in sorted(flavors):
                flavor = fl if flavor is None else _combine_flavors(flavor, fl)
        elif flavors - {flavor} and not (flavor == SERIES and flavors <= {SERIES, LAURENT}):
            raise FlavorMismatch(f"entries {flavors} do not fit flavor {flavor}")
        if field is None:
            field = rows[0][0].field
        self.field, self.flavor, self.rows = field, flavor, rows

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def entries(self):
        for r in self.rows:
            yield from r

    def __eq__(self, other):
        if not isinstance(other, MatG):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(_fmt(x) for x in r) for r in self.rows)
        return f"MatG[{self.flavor}]([{body}])"

    def __matmul__(self, other: "MatG") -> "MatG":
        return mat_mul(self, other)

    def transpose(self) -> "MatG":
        return MatG(zip(*self.rows), self.field, self.flavor)

    def map(self, fn) -> "MatG":
        return MatG([[fn(x) for x in r] for r in self.rows], self.field)

    def to_series(self, prec: int) -> "MatG":
        if self.flavor != LAURENT:
            raise FlavorMismatch("only Laurent-polynomial matrices truncate to series")
        # exact zeros stay exact: they are known to every precision
        return MatG([[x if x.is_zero() else x.to_series(prec) for x in r] for r in self.rows], self.field, SERIES)

    def det(self):
        return det(self)


def _fmt(x) -> str:
    if isinstance(x, LaurentSeries):
        return repr(x)
    return str(x)


def mat_mul(A: MatG, B: MatG) -> MatG:
    if A.n != B.n:
        raise SizeMismatch(f"{A.n}x{A.n} times {B.n}x{B.n}")
    flavor = _combine_flavors(A.flavor, B.flavor)
    n, z = A.n, _zero(A.field, flavor)
    cols = list(zip(*B.rows))
    out = []
    for row in A.rows:
        new = []
        for col in cols:
            acc = None
            for a, b in zip(row, col):
                if is_exact_zero(a) or is_exact_zero(b):
                    continue
                prod = a * b
                acc = prod if acc is None else acc + prod
            new.append(z if acc is None else acc)
        out.append(new)
    return MatG(out, A.field, flavor)


def _minor0(rows, ridx: tuple[int, ...], cidx: tuple[int, ...], memo: dict):
    """Laplace expansion along the first listed row, memoised on column sets."""
    key = (len(ridx), cidx)
    if key in memo:
        return memo[key]
    if len(ridx) == 0:
        return None  # multiplicative identity marker
    r = ridx[0]
    acc = None
    for pos, c in enumerate(cidx):
        a = rows[r][c]
        if is_exact_zero(a):
            continue
        sub = _minor0(rows, ridx[1:], cidx[:pos] + cidx[pos + 1 :], memo)
        if sub is _ZERO_MARK or (sub is not None and is_exact_zero(sub)):
            continue
        term = a if sub is None else a * sub
        if pos % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        acc = _ZERO_MARK
    memo[key] = acc
    return acc


class _ZeroMark:
    pass


_ZERO_MARK = _ZeroMark()


def minor0(A: MatG, rows: Sequence[int], cols: Sequence[int], memo: dict | None = None):
    """Minor on 0-based row/column index lists (rows in increasing order)."""
    if len(rows) != len(cols):
        raise SizeMismatch("minor needs equally many rows and columns")
    if memo is None:
        memo = {}
    v = _minor0(A.rows, tuple(rows), tuple(cols), memo)
    if v is None:
        return _one(A.field, A.flavor)
    if v is _ZERO_MARK:
        return _zero(A.field, A.flavor)
    return v


def minor(A: MatG, rows: Iterable[int], cols: Iterable[int]):
    """Minor with 1-based row and column indices."""
    return minor0(A, sorted(r - 1 for r in rows), sorted(c - 1 for c in cols))


def det(A: MatG):
    idx = tuple(range(A.n))
    return minor0(A, idx, idx)


def bottom_minors(A: MatG, j: int) -> list:
    """All j x j minors of the bottom j rows, columns in lexicographic order."""
    n = A.n
    rows = tuple(range(n - j, n))
    memo: dict = {}
    return [minor0(A, rows, cols, memo) for cols in combinations(range(n), j)]


def adjugate(A: MatG) -> MatG:
    n = A.n
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rs = tuple(r for r in range(n) if r != j)
            cs = tuple(c for c in range(n) if c != i)
            m = minor0(A, rs, cs) if n > 1 else _one(A.field, A.flavor)
            out[i][j] = -m if (i + j) % 2 else m
    return MatG(out, A.field, A.flavor)


def exact_inverse(A: MatG, gamma: bool = False) -> MatG:
    """Exact inverse of a Laurent-polynomial or rational matrix.

    With ``gamma=True`` the determinant must be a nonzero constant, so an
    inverse of a matrix over F_q[pi^-1] stays over F_q[pi^-1].
    """
    if A.flavor == SERIES:
        raise FlavorMismatch("exact_inverse needs an exact flavor")
    d = det(A)
    if d.is_zero():
        raise SingularInput("matrix is singular")
    if gamma and not d.is_constant():
        raise NonUnitDeterminant(f"determinant {d} is not in F_q^x")
    if A.flavor == LAURENT:
        if not d.is_monomial():
            raise NonUnitDeterminant(f"determinant {d} is not a unit of F_q[pi, 1/pi]")
    dinv = d.inverse()
    adj = adjugate(A)
    return MatG([[x * dinv for x in r] for r in adj.rows], A.field, A.flavor)


# --- constructors ----------------------------------------------------------

def identity(n: int, field: FieldSpec, flavor: str = LAURENT) -> MatG:
    z, o = _zero(field, flavor), _one(field, flavor)
    return MatG([[o if i == j else z for j in range(n)] for i in range(n)], field, flavor)


def diag(entries: Sequence, field: FieldSpec | None = None) -> MatG:
    field = field or entries[0].field
    flavor = _flavor_of(entries[0])
    z = _zero(field, flavor)
    n = len(entries)
    return MatG([[entries[i] if i == j else z for j in range(n)] for i in range(n)], field)


def make_elementary(n: int, i: int, j: int, x, field: FieldSpec | None = None) -> MatG:
    """u_(i,j)(x) = I + x E_ij, 1-based (i, j), i != j."""
    if i == j:
        raise IndexError("elementary matrix needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"index ({i}, {j}) outside 1..{n}")
    field = field or x.field
    flavor = _flavor_of(x)
    rows = [list(r) for r in identity(n, field, flavor).rows]
    rows[i - 1][j - 1] = x
    return MatG(rows, field, flavor)


def make_permutation(n: int, perm: Sequence[int], field: FieldSpec, flavor: str = LAURENT) -> MatG:
    """Row i carries a 1 in column perm[i] (0-based permutation list)."""
    if sorted(perm) != list(range(n)):
        raise IndexError(f"{perm} is not a permutation of 0..{n - 1}")
    z, o = _zero(field, flavor), _one(field, flavor)
    return MatG([[o if perm[i] == j else z for j in range(n)] for i in range(n)], field, flavor)


def make_pi_eta(eta: Sequence[int], field: FieldSpec) -> MatG:
    return diag([LaurentPoly.monomial(field, int(e)) for e in eta], field)


def make_flip(n: int, i: int, field: FieldSpec, flavor: str = LAURENT) -> MatG:
    """The block [[0, 1], [-1, 0]] at rows/cols (i, i+1), 1-based, det 1."""
    if not 1 <= i < n:
        raise IndexError(f"flip index {i} outside 1..{n - 1}")
    rows = [list(r) for r in identity(n, field, flavor).rows]
    o, z = _one(field, flavor), _zero(field, flavor)
    a, b = i - 1, i
    rows[a][a], rows[a][b] = z, o
    rows[b][a], rows[b][b] = -o, z
    return MatG(rows, field, flavor)


@dataclass(frozen=True)
class Cocharacter:
    """Integer cocharacter of the diagonal torus of GL(n)."""

    eta: tuple[int, ...]

    def __init__(self, eta: Iterable[int]):
        object.__setattr__(self, "eta", tuple(int(e) for e in eta))

    def is_antidominant(self) -> bool:
        return all(a <= b for a, b in zip(self.eta, self.eta[1:]))

    def __iter__(self):
        return iter(self.eta)

    def __len__(self):
        return len(self.eta)

    def __getitem__(self, i):
        return self.eta[i]

    def tolist(self) -> list[int]:
        return list(self.eta)


# --- membership predicates ---------------------------------------------------

def is_gamma(A: MatG) -> bool:
    """Entries in F_q[pi^-1] and determinant in F_q^x."""
    if A.flavor != LAURENT:
        return False
    if not all(x.in_R() for x in A.entries()):
        return False
    d = det(A)
    return not d.is_zero() and d.is_constant()


def is_integral_unit(A: MatG) -> bool:
    """Membership in GL(n, O) for a Laurent-polynomial matrix."""
    if A.flavor != LAURENT:
        return False
    if not all(x.in_O() for x in A.entries()):
        return False
    return det(A).val == 0


def exponent_span(A: MatG) -> int:
    """max entry exponent - min entry exponent over nonzero entries."""
    lows = [x.low for x in A.entries() if not x.is_zero()]
    highs = [x.degree for x in A.entries() if not x.is_zero()]
    if not lows:
        return 0
    return int(max(highs) - min(lows))


# --- seeded generators ---------------------------------------------------------

def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _random_poly(field: FieldSpec, rng: random.Random, exps: range) -> LaurentPoly:
    return LaurentPoly.from_terms(field, {e: field.random(rng) for e in exps})


def _draw(n, field, rng, degree_bound, side):
    kind = rng.randrange(3)
    if kind == 2 and n == 1:
        kind = 1  # no elementary matrices in GL(1)
    if kind == 0:
        perm = list(range(n))
        rng.shuffle(perm)
        return make_permutation(n, perm, field)
    if kind == 1:
        if side == "O":
            units = []
            for _ in range(n):
                u = LaurentPoly.constant(field, field.random(rng, nonzero=True))
                units.append(u + _random_poly(field, rng, range(1, degree_bound + 1)))
        else:
            units = [LaurentPoly.constant(field, field.random(rng, nonzero=True)) for _ in range(n)]
        return diag(units, field)
    i = rng.randrange(n)
    j = rng.randrange(n - 1)
    j += j >= i
    exps = range(-degree_bound, 1) if side == "R" else range(0, degree_bound + 1)
    return make_elementary(n, i + 1, j + 1, _random_poly(field, rng, exps), field)


def random_gamma(n: int, field: FieldSpec, seed, degree_bound: int = 3, factors: int = 6) -> MatG:
    """Product of ``factors`` random generators of GL(n, F_q[pi^-1]).

    Each draw is a permutation, a diagonal matrix over F_q^x, or an
    elementary matrix with an entry of pi^-1-degree at most ``degree_bound``.
    """
    if factors < 1 or degree_bound < 0:
        raise ValueError("need factors >= 1 and degree_bound >= 0")
    rng = _rng(seed)
    A = _draw(n, field, rng, degree_bound, "R")
    for _ in range(factors - 1):
        A = A @ _draw(n, field, rng, degree_bound, "R")
    return A


def random_k(n: int, field: FieldSpec, seed, degree_bound: int = 3, factors: int = 6) -> MatG:
    """Product of ``factors`` random generators of GL(n, O) with polynomial entries."""
    if factors < 1 or degree_bound < 0:
        raise ValueError("need factors >= 1 and degree_bound >= 0")
    rng = _rng(seed)
    A = _draw(n, field, rng, degree_bound, "O")
    for _ in range(factors - 1):
        A = A @ _draw(n, field, rng, degree_bound, "O")
    return A


def inverse_norm_bound(A: MatG) -> int:
    """Exponent e with max |entries of A^-1| = q^e, from exact minors."""
    d = det(A)
    if d.is_zero():
        raise SingularInput("matrix is singular")
    adj = adjugate(A)
    e = max((-x.val for x in adj.entries() if not x.is_zero()), default=-INF)
    return int(e + d.val)
