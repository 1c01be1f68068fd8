"""Sup-norms on local vector spaces and the wedge-power data of GL(n).

A norm value ||x|| = q^e is represented by the integer exponent e alone
(``-inf`` for the zero vector).  For GL(n) the j-th fundamental
representation is the j-th exterior power; its lowest-weight vector
e_{n-j+1} ^ ... ^ e_n maps under g to the vector of j x j minors taken from
the bottom j rows of g.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Sequence

from .errors import PrecisionExhausted
from .matgl import Cocharacter, MatG, bottom_minors
from .series import LaurentPoly, LaurentSeries

NEG_INF = -math.inf


def vec_norm(v: Sequence) -> float | int:
    """Norm exponent max(-val) over the coordinates of v."""
    best = NEG_INF
    bounds = []
    for x in v:
        if isinstance(x, LaurentSeries):
            if x.is_zero_to_precision():
                bounds.append(-x.prec)
                continue
            best = max(best, -x.start)
        else:
            if not x.is_zero():
                best = max(best, -x.val)
    for b in bounds:
        # an unresolved coordinate has exponent <= b
        if b > best:
            raise PrecisionExhausted("norm undetermined at the available precision")
    return best


def c_g_bound(g: MatG):
    """Exponent of C_g = sup |g_ij|; ||x g|| <= C_g ||x|| for every x."""
    return vec_norm(list(g.entries()))


def fundamental_image(g: MatG, j: int) -> list:
    """v_j rho_j(g): the j x j minors of the bottom j rows, lexicographic columns."""
    if not 1 <= j <= g.n:
        raise IndexError(f"j={j} outside 1..{g.n}")
    return bottom_minors(g, j)


def n_potential(g: MatG, j: int):
    return vec_norm(fundamental_image(g, j))


def pairing(j: int, eta) -> int:
    """<mu_j, eta> = eta_{n-j+1} + ... + eta_n."""
    eta = tuple(eta)
    return sum(eta[len(eta) - j :]) if j else 0


def wedge_torus_image(v: Sequence, mu: Cocharacter, j: int) -> list:
    """v rho_j(pi^mu): scales the e_S coordinate by pi^(sum of mu over S)."""
    n = len(mu)
    out = []
    for x, cols in zip(v, combinations(range(n), j)):
        out.append(x.shift(sum(mu[c] for c in cols)) if isinstance(x, LaurentPoly) else _shift_series(x, sum(mu[c] for c in cols)))
    return out


def _shift_series(x: LaurentSeries, k: int) -> LaurentSeries:
    return LaurentSeries(x.field, x.start + k, x.coeffs, x.prec + k)


def fundamental_inequality_check(v: Sequence, mu: Cocharacter, j: int) -> bool:
    """Evaluate ||v rho_j(pi^mu)|| / ||v|| >= ||v_j rho_j(pi^mu)|| / ||v_j||."""
    lhs = vec_norm(wedge_torus_image(v, mu, j)) - vec_norm(v)
    rhs = -pairing(j, mu)
    return lhs >= rhs
