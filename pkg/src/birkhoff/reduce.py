"""Reduction of g in GL(n, F_q((pi))) to gamma * pi^eta * k.

Phase 1 left-multiplies by flip * u_(i,i+1)(S) in Gamma = GL(n, F_q[pi^-1])
until the Iwasawa torus part is antidominant; every such move strictly lowers
one wedge-power potential N_j and leaves the others alone.  Phase 2 strips
the unipotent part root by root with u_ij(-P), P the polar part of
alpha_ij(t) * n_ij.  The engine runs on truncated series, but each move is
an exact Laurent polynomial, so gamma^-1 is accumulated exactly and the
final witness is checked with exact arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import PotentialStall, PrecisionExhausted, SingularInput, WitnessCheckFailed
from .ff import FieldSpec
from .iwasawa import iwasawa_decompose, triangularize
from .localnorm import pairing
from .matgl import (
    LAURENT,
    RATIONAL,
    SERIES,
    Cocharacter,
    MatG,
    det,
    exponent_span,
    is_exact_zero,
    make_elementary,
    make_flip,
    mat_mul,
)
from .series import LaurentPoly, LaurentSeries, Place, RatFun, split_integral

log = logging.getLogger(__name__)

MAX_PRECISION = 4096
FLIP_SHIFT = "flip-shift"
UNIPOTENT_SHIFT = "unipotent-shift"


class _AlreadyInOmega:
    def __repr__(self):
        return "AlreadyInOmega"


AlreadyInOmega = _AlreadyInOmega()


@dataclass(frozen=True)
class Move:
    """A left multiplier in Gamma.

    flip-shift (i, S): flip_(i,i+1) * u_(i,i+1)(S).
    unipotent-shift (i, j, P): u_ij(-P).
    Indices are 0-based rows.
    """

    kind: str
    i: int
    j: int
    poly: LaurentPoly

    def matrix(self, n: int) -> MatG:
        f = self.poly.field
        if self.kind == FLIP_SHIFT:
            return mat_mul(make_flip(n, self.i + 1, f), make_elementary(n, self.i + 1, self.i + 2, self.poly, f))
        return make_elementary(n, self.i + 1, self.j + 1, -self.poly, f)

    def apply_rows(self, rows: list[list], lift: Callable = lambda x: x) -> None:
        """Left-multiply the matrix held as a list of rows, in place."""
        i, j = self.i, self.j
        c = lift(self.poly)
        if self.kind == FLIP_SHIFT:
            upper = rows[i + 1]
            lower = [_neg(x) for x in _axpy(rows[i], rows[i + 1], c)]
            rows[i], rows[i + 1] = upper, lower
        else:
            rows[i] = _axpy(rows[i], rows[j], _neg(c))

    def apply_inverse_columns(self, cols_of: list[list], lift: Callable = lambda x: x) -> None:
        """Right-multiply by the inverse move; ``cols_of`` is the matrix transposed."""
        i, j = self.i, self.j
        c = lift(self.poly)
        if self.kind == FLIP_SHIFT:
            # (flip u(S))^-1 = u(-S) flip^-1
            cols_of[i + 1] = _axpy(cols_of[i + 1], cols_of[i], _neg(c))
            cols_of[i], cols_of[i + 1] = cols_of[i + 1], [_neg(x) for x in cols_of[i]]
        else:
            cols_of[j] = _axpy(cols_of[j], cols_of[i], c)


def _neg(x):
    return x if is_exact_zero(x) else -x


def _axpy(a: Sequence, b: Sequence, s) -> list:
    """a + s*b entrywise, keeping exact zeros exact."""
    if is_exact_zero(s):
        return list(a)
    out = []
    for x, y in zip(a, b):
        if is_exact_zero(y):
            out.append(x)
        elif is_exact_zero(x):
            out.append(s * y)
        else:
            out.append(x + s * y)
    return out


@dataclass
class Witness:
    """g = gamma * pi^eta * k with gamma in Gamma and k in GL(n, O)."""

    gamma: MatG
    eta: Cocharacter
    k: MatG
    trace: list[Move] = field(default_factory=list)
    place: Place | None = None
    precision: int = 0
    retries: int = 0
    phase1_steps: int = 0


# --- exact input adapters ------------------------------------------------------

class _LaurentInput:
    place = None

    def __init__(self, g: MatG):
        self.g = g
        self.field = g.field

    def series(self, prec: int) -> list[list]:
        return [[x if x.is_zero() else x.to_series(prec) for x in r] for r in self.g.rows]

    def lift(self, x: LaurentPoly):
        return x

    def val(self, x):
        return x.val

    def in_R(self, x) -> bool:
        return x.in_R()

    def pi_power(self, e: int):
        return LaurentPoly.monomial(self.field, e)

    def default_precision(self) -> int:
        return 4 * exponent_span(self.g) + 16


class _RationalInput:
    def __init__(self, g: MatG, place: Place):
        self.g = g
        self.field = g.field
        self.place = place
        self._pi = place.uniformizer(g.field)

    def series(self, prec: int) -> list[list]:
        zero = LaurentPoly.zero(self.field)
        return [[zero if x.is_zero() else x.expand(self.place, prec) for x in r] for r in self.g.rows]

    def lift(self, x: LaurentPoly):
        return self.place.lift(x)

    def val(self, x):
        return x.val_at(self.place)

    def in_R(self, x) -> bool:
        if x.is_zero():
            return True
        if self.place.is_infinite:
            return x.is_poly()
        if x.num.degree > x.den.degree:
            return False
        d = int(x.den.degree)
        return x.den == (self._pi**d).num

    def pi_power(self, e: int):
        return self._pi**e

    def default_precision(self) -> int:
        vals = [self.val(x) for x in self.g.entries() if not x.is_zero()]
        spread = [int(x.num.degree + x.den.degree) for x in self.g.entries() if not x.is_zero()]
        return 4 * (max(vals) - min(vals) + max(spread)) + 16


def _adapter(g: MatG, place: Place | None):
    if g.flavor == LAURENT:
        if place is not None and not place.is_infinite:
            raise ValueError("Laurent-polynomial input is already local; omit place")
        return _LaurentInput(g)
    if g.flavor == RATIONAL:
        return _RationalInput(g, place if place is not None else Place.infinity())
    raise TypeError("local_reduce needs an exact matrix (Laurent or rational)")


# --- phases on series --------------------------------------------------------

def _offending_root(t_vals: Sequence[int]) -> int | None:
    for i in reversed(range(len(t_vals) - 1)):
        if t_vals[i] > t_vals[i + 1]:
            return i
    return None


def _potentials(t_vals: Sequence[int]) -> list[int]:
    n = len(t_vals)
    return [-pairing(j, t_vals) for j in range(1, n + 1)]


def _flip_shift_for(b: list[list], i: int) -> Move:
    x = b[i][i + 1]
    f = b[i + 1][i + 1].field
    if is_exact_zero(x):
        S = LaurentPoly.zero(f)
    else:
        P, _ = split_integral(x / b[i + 1][i + 1])
        S = -P
    return Move(FLIP_SHIFT, i, i + 1, S)


def phase1_step(g: MatG):
    """One norm-decreasing move, or ``AlreadyInOmega``.

    Returns (move, g') with g' = move.matrix * g.
    """
    iw = iwasawa_decompose(g)
    i = _offending_root(iw.t_vals)
    if i is None:
        return AlreadyInOmega
    move = _flip_shift_for(iw.b, i)
    rows = [list(r) for r in g.rows]
    move.apply_rows(rows)
    return move, MatG(rows, g.field, SERIES)


def _step_cap(t_vals: Sequence[int], inv_bound: int) -> int:
    n = len(t_vals)
    total = sum(_potentials(t_vals))
    return total + inv_bound * n * (n + 1) // 2 + n + 8


class _Engine:
    """Series state plus the exact accumulated left factor gamma^-1."""

    def __init__(self, rows: list[list], field: FieldSpec, inv_bound: int):
        self.g = rows
        self.field = field
        self.n = len(rows)
        one, zero = LaurentPoly.one(field), LaurentPoly.zero(field)
        self.ginv = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]
        self.trace: list[Move] = []
        self.inv_bound = inv_bound
        self.phase1_steps = 0

    def apply(self, move: Move, b: list[list] | None = None) -> None:
        move.apply_rows(self.g)
        move.apply_rows(self.ginv)
        if b is not None:
            move.apply_rows(b)
        self.trace.append(move)

    def phase1(self) -> None:
        b = [list(r) for r in self.g]
        t_vals = triangularize(b)
        cap = _step_cap(t_vals, self.inv_bound)
        steps = 0
        while True:
            i = _offending_root(t_vals)
            if i is None:
                break
            move = _flip_shift_for(b, i)
            before = _potentials(t_vals)
            self.apply(move, b)
            # rows > i+1 untouched; restore triangular shape on rows i, i+1
            t_vals = triangularize(b, rows=range(i, i + 2))
            after = _potentials(t_vals)
            jj = self.n - i - 2  # potential N_{n-i} in 1-based terms
            changed = [j for j in range(self.n) if before[j] != after[j]]
            if changed != [jj] or after[jj] >= before[jj]:
                raise PotentialStall(
                    f"move at root {i + 1} changed potentials {before} -> {after}"
                )
            steps += 1
            if steps > cap:
                raise PotentialStall(f"phase 1 exceeded {cap} steps")
        self.phase1_steps = steps

    def phase2(self) -> tuple[int, ...]:
        n = self.n
        roots = [(i, i + h) for h in range(1, n) for i in range(n - h)]
        passes = 0
        while True:
            iw = iwasawa_decompose(MatG(self.g, self.field, SERIES))
            t_vals, b = iw.t_vals, iw.b
            if _offending_root(t_vals) is not None:
                raise PotentialStall("phase 2 left the antidominant domain")
            if _unipotent_integral(b, t_vals):
                return t_vals
            if passes == max(1, n - 1):
                raise PotentialStall(f"phase 2 needed more than {n - 1} passes")
            passes += 1
            for i, j in roots:
                x = b[i][j]
                if is_exact_zero(x):
                    continue
                P, _ = split_integral(x / b[j][j])
                if P.is_zero():
                    continue
                self.apply(Move(UNIPOTENT_SHIFT, i, j, P), b)


def _unipotent_integral(b: list[list], t_vals: Sequence[int]) -> bool:
    """n = t^-1 b lies in N(O), i.e. val(b_ij) >= val(b_ii) for i < j."""
    n = len(b)
    for i in range(n):
        for j in range(i + 1, n):
            x = b[i][j]
            if is_exact_zero(x):
                continue
            if x.start >= t_vals[i]:
                continue
            if x.is_zero_to_precision():
                raise PrecisionExhausted("cannot decide integrality of the unipotent part")
            return False
    return True


def phase1(g: MatG) -> tuple[list[Move], MatG]:
    """Move a series-flavoured g into Omega; returns the moves and the result."""
    moves = []
    while True:
        r = phase1_step(g)
        if r is AlreadyInOmega:
            return moves, g
        move, g = r
        moves.append(move)


def phase2(g: MatG) -> tuple[list[Move], Cocharacter]:
    """Strip the unipotent part of g in Omega; returns the moves and eta."""
    eng = _Engine([list(r) for r in g.rows], g.field, 0)
    eta = eng.phase2()
    return eng.trace, Cocharacter(eta)


# --- exact witness -------------------------------------------------------------

def _det_val_and_bound(inp) -> tuple[int, int]:
    d = det(inp.g)
    if d.is_zero():
        raise SingularInput("matrix is singular")
    entries = [inp.val(x) for x in inp.g.entries() if not x.is_zero()]
    n = inp.g.n
    # val(adj_ij) >= (n-1) * min val(g), so |g^-1| <= q^((1-n) min val + val det)
    return int(inp.val(d)), int(-(n - 1) * min(entries) + inp.val(d))


def _assemble(inp, eng: _Engine, eta: Sequence[int]) -> Witness:
    f, n = inp.field, eng.n
    lift = inp.lift
    ginv = MatG([[lift(x) for x in r] for r in eng.ginv], f)
    pis = [inp.pi_power(-e) for e in eta]
    prod = mat_mul(ginv, inp.g)
    k = MatG([[pis[i] * x for x in prod.rows[i]] for i in range(n)], f)
    one, zero = lift(LaurentPoly.one(f)), lift(LaurentPoly.zero(f))
    cols = [[one if i == j else zero for i in range(n)] for j in range(n)]
    for move in eng.trace:
        move.apply_inverse_columns(cols, lift)
    gamma = MatG(list(zip(*cols)), f)
    return Witness(gamma, Cocharacter(eta), k, list(eng.trace), inp.place)


def local_reduce(g: MatG, precision: int | None = None, place: Place | None = None) -> Witness:
    """Factor g = gamma * pi^eta * k with eta antidominant.

    ``g`` holds exact Laurent polynomials in pi, or rational functions in t
    read at ``place`` (default infinity, uniformizer 1/t).  Working
    precision starts at ``precision`` (default from the exponent spread of g)
    and doubles on PrecisionExhausted up to 4096.
    """
    inp = _adapter(g, place)
    _, inv_bound = _det_val_and_bound(inp)
    W = precision if precision is not None else inp.default_precision()
    retries = 0
    while True:
        try:
            eng = _Engine(inp.series(W), inp.field, inv_bound)
            eng.phase1()
            eta = eng.phase2()
            break
        except PrecisionExhausted as exc:
            if W >= MAX_PRECISION:
                raise PrecisionExhausted(f"gave up at working precision {W}: {exc}") from exc
            log.debug("precision %d exhausted (%s); retrying", W, exc)
            W = min(2 * W, MAX_PRECISION)
            retries += 1
    w = _assemble(inp, eng, eta)
    w.precision, w.retries, w.phase1_steps = W, retries, eng.phase1_steps
    if not verify_witness(g, w):
        raise WitnessCheckFailed(f"reduction produced an invalid witness for eta={list(eta)}")
    return w


def eta_of(g: MatG, precision: int | None = None, place: Place | None = None) -> Cocharacter:
    return local_reduce(g, precision, place).eta


def verify_witness(g: MatG, w: Witness) -> bool:
    """Exact check of g = gamma pi^eta k, gamma in Gamma, k in GL(n, O), eta antidominant."""
    try:
        inp = _adapter(g, w.place)
    except (TypeError, ValueError):
        return False
    n = g.n
    if len(w.eta) != n or w.gamma.n != n or w.k.n != n:
        return False
    if not w.eta.is_antidominant():
        return False
    if w.gamma.flavor != g.flavor or w.k.flavor != g.flavor:
        return False
    if not all(inp.in_R(x) for x in w.gamma.entries()):
        return False
    dg = det(w.gamma)
    if dg.is_zero() or not dg.is_constant():
        return False
    if not all(x.is_zero() or inp.val(x) >= 0 for x in w.k.entries()):
        return False
    dk = det(w.k)
    if dk.is_zero() or inp.val(dk) != 0:
        return False
    pis = [inp.pi_power(e) for e in w.eta]
    middle = MatG([[x * pis[j] for j, x in enumerate(r)] for r in w.gamma.rows], g.field)
    return mat_mul(middle, w.k) == g
