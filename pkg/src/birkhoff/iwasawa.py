"""Iwasawa decomposition g = t n k over F_q((pi)) and the Levi projections.

The decomposition works by right column operations in GL(n, O): rows are
processed bottom-up, the entry of minimal valuation in the active columns
is moved to the diagonal, and the rest of the row is cleared.  What is left
is an upper-triangular b = t n with g = b k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PrecisionExhausted, SingularInput
from .matgl import SERIES, MatG, is_exact_zero
from .series import INF, LaurentPoly, LaurentSeries


@dataclass
class IwasawaDecomp:
    """g = t n k with b = t n upper triangular.

    ``t_vals`` is the valuation vector of the torus part, i.e. the image of
    g in T(F)/T(O) = Z^n.
    """

    t_vals: tuple[int, ...]
    b: list[list] = field(repr=False)
    k: MatG | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.t_vals)

    @property
    def t(self) -> list:
        return [self.b[i][i] for i in range(self.n)]

    @property
    def t_units(self) -> list[LaurentSeries]:
        return [_shift(self.b[i][i], -v) for i, v in enumerate(self.t_vals)]

    @property
    def n_part(self) -> MatG:
        n = self.n
        rows = []
        for i in range(n):
            inv = self.b[i][i].inverse()
            rows.append([
                LaurentPoly.one(inv.field) if j == i
                else LaurentPoly.zero(inv.field) if j < i or is_exact_zero(self.b[i][j])
                else self.b[i][j] * inv
                for j in range(n)
            ])
        return MatG(rows, flavor=SERIES)

    def ratio(self, i: int, j: int):
        """b_ij / b_jj, which equals alpha_ij(t) * n_ij."""
        x = self.b[i][j]
        if is_exact_zero(x):
            return x
        return x / self.b[j][j]


def _shift(x: LaurentSeries, k: int) -> LaurentSeries:
    return LaurentSeries(x.field, x.start + k, x.coeffs, x.prec + k)


def _as_series_rows(g: MatG) -> list[list]:
    if g.flavor not in (SERIES,):
        raise TypeError("iwasawa_decompose works on series-flavoured matrices")
    return [list(r) for r in g.rows]


def choose_pivot(row: Sequence, cols: Iterable[int]) -> int:
    """Column of minimal valuation (smallest index on ties).

    Raises PrecisionExhausted when a coordinate that is zero to precision
    could still undercut the best known valuation.
    """
    best_v, best_c = INF, None
    unresolved = INF
    for c in cols:
        x = row[c]
        if is_exact_zero(x):
            continue
        if isinstance(x, LaurentSeries) and x.is_zero_to_precision():
            unresolved = min(unresolved, x.prec)
            continue
        v = x.val
        if v < best_v:
            best_v, best_c = v, c
    if best_c is None:
        if unresolved < INF:
            raise PrecisionExhausted("pivot row is zero to working precision")
        raise SingularInput("matrix is singular")
    if unresolved <= best_v:
        raise PrecisionExhausted("pivot valuation undetermined at working precision")
    return best_c


def triangularize(b: list[list], k: list[list] | None = None, rows: range | None = None) -> list[int]:
    """In-place right reduction of ``b`` to upper-triangular form.

    ``k`` (optional) receives the matching left factor so that
    b_in = b_out * k_out when k starts as the identity.  Returns the
    diagonal valuations.
    """
    n = len(b)
    for r in reversed(range(n) if rows is None else rows):
        c = choose_pivot(b[r], range(r + 1))
        if c != r:
            for i in range(r + 1):
                b[i][c], b[i][r] = b[i][r], b[i][c]
            if k is not None:
                k[c], k[r] = k[r], k[c]
        clear_row(b, r, range(r), k)
    return [b[i][i].val for i in range(n)]


def clear_row(b: list[list], r: int, cols: Iterable[int], k: list[list] | None = None) -> None:
    """Zero b[r][j] for j in cols using column r as pivot (val(b[r][r]) minimal)."""
    pivot_inv = None
    zero = LaurentPoly.zero(b[r][r].field)
    for j in cols:
        x = b[r][j]
        if is_exact_zero(x):
            continue
        if pivot_inv is None:
            pivot_inv = b[r][r].inverse()
        c = x * pivot_inv
        for i in range(r):
            if not is_exact_zero(b[i][r]):
                b[i][j] = b[i][j] - c * b[i][r]
        b[r][j] = zero
        if k is not None:
            k[r] = [kr + c * kj if not is_exact_zero(kj) else kr for kr, kj in zip(k[r], k[j])]


def iwasawa_decompose(g: MatG, want_k: bool = False) -> IwasawaDecomp:
    """Decompose a series-flavoured invertible g as t n k."""
    b = _as_series_rows(g)
    k = None
    if want_k:
        f = g.field
        k = [[LaurentPoly.one(f) if i == j else LaurentPoly.zero(f) for j in range(g.n)] for i in range(g.n)]
    t_vals = triangularize(b, k)
    kmat = MatG(k, g.field, SERIES) if want_k else None
    return IwasawaDecomp(tuple(t_vals), b, kmat)


# --- parabolic / Levi data ---------------------------------------------------

@dataclass(frozen=True)
class ParabolicSpec:
    """Standard parabolic P_D of GL(n), D a set of simple-root indices (1-based)."""

    n: int
    D: frozenset

    def __init__(self, n: int, D: Iterable[int] = ()):
        D = frozenset(int(i) for i in D)
        if any(not 1 <= i < n for i in D):
            raise ValueError(f"simple-root indices must lie in 1..{n - 1}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "D", D)

    def blocks(self) -> list[range]:
        """Consecutive index blocks of the Levi factor L_D (0-based)."""
        out, start = [], 0
        for i in range(1, self.n):
            if i not in self.D:
                out.append(range(start, i))
                start = i
        out.append(range(start, self.n))
        return out


def _block_reduce(b: list[list], rows: range) -> None:
    """Right column operations making rows ``rows`` vanish left of the block.

    Pivots are taken in order of global minimal valuation over the block's
    rows, so the diagonal block is left in general (non-triangular) form.
    """
    lo, hi = rows.start, rows.stop
    active = list(range(hi))
    pending = list(rows)
    slot = hi - 1
    while pending:
        best = None
        for r in pending:
            try:
                c = choose_pivot(b[r], active)
            except SingularInput:
                continue
            v = b[r][c].val
            if best is None or v < best[0]:
                best = (v, r, c)
        if best is None:
            raise SingularInput("matrix is singular")
        _, r, c = best
        if c != slot:
            for i in range(hi):
                b[i][c], b[i][slot] = b[i][slot], b[i][c]
        zero = LaurentPoly.zero(b[r][slot].field)
        inv = b[r][slot].inverse()
        for j in active:
            if j == slot or is_exact_zero(b[r][j]):
                continue
            coef = b[r][j] * inv
            for i in range(hi):
                if i != r and not is_exact_zero(b[i][slot]):
                    b[i][j] = b[i][j] - coef * b[i][slot]
            b[r][j] = zero
        active.remove(slot)
        pending.remove(r)
        slot -= 1
    assert slot == lo - 1


def phi_project(g: MatG, D: ParabolicSpec | Iterable[int]) -> list[MatG]:
    """Levi part of g = l u k for the parabolic P_D, one matrix per block.

    Each block is a representative of its coset modulo L_D(O).
    """
    if not isinstance(D, ParabolicSpec):
        D = ParabolicSpec(g.n, D)
    b = _as_series_rows(g)
    for blk in reversed(D.blocks()):
        _block_reduce(b, blk)
    return [MatG([[b[i][j] for j in blk] for i in blk], g.field, SERIES) for blk in D.blocks()]


def phi_torus(g: MatG) -> tuple[int, ...]:
    """Image of g in T(F)/T(O) = Z^n (the valuation vector of the torus part)."""
    return iwasawa_decompose(g).t_vals


def omega_member(g: MatG) -> bool:
    """|alpha_i(Phi(g))| >= 1 for all simple roots, i.e. t_vals nondecreasing."""
    tv = phi_torus(g)
    return all(a <= b for a, b in zip(tv, tv[1:]))
