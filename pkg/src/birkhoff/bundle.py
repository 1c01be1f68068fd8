"""Vector bundles on P^1 given by a transition matrix at infinity.

The matrix g glues the trivial bundle over Spec F_q[t] to the trivial one
over the formal disk at infinity (uniformizer pi = 1/t).  Its splitting type
comes from the local reduction at infinity; ``h0`` counts global sections by
plain linear algebra and serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import OracleMismatch, SingularInput
from .matgl import LAURENT, RATIONAL, Cocharacter, MatG, adjugate, det
from .reduce import eta_of
from .series import Place

_INF_PLACE = Place.infinity()


@dataclass(frozen=True)
class BundleSpec:
    """Transition matrix: Laurent polynomials in pi = 1/t, or rational functions of t."""

    g: MatG

    def __post_init__(self):
        if self.g.flavor not in (LAURENT, RATIONAL):
            raise TypeError("bundle transition matrices must be exact")
        if det(self.g).is_zero():
            raise SingularInput("transition matrix is singular")

    @property
    def n(self) -> int:
        return self.g.n

    def val(self, x) -> int | float:
        return x.val if self.g.flavor == LAURENT else x.val_at(_INF_PLACE)


def _as_spec(b) -> BundleSpec:
    return b if isinstance(b, BundleSpec) else BundleSpec(b)


def splitting_type(b: BundleSpec | MatG) -> Cocharacter:
    """Degrees (d_1 <= ... <= d_n) with the bundle isomorphic to the sum of O(d_i)."""
    b = _as_spec(b)
    place = None if b.g.flavor == LAURENT else _INF_PLACE
    return eta_of(b.g, place=place)


def _norm_exp(b: BundleSpec, entries: Iterable) -> int:
    return int(max(-b.val(x) for x in entries if not x.is_zero()))


def norm_bounds(b: BundleSpec) -> tuple[int, int]:
    """(c(g), c(g^-1)): exponents of the largest entry norms of g and g^-1 at infinity."""
    d = det(b.g)
    c_inv = _norm_exp(b, adjugate(b.g).entries()) + b.val(d)
    return _norm_exp(b, b.g.entries()), int(c_inv)


def _coeff_rows(b: BundleSpec, lo: int, hi: int) -> np.ndarray:
    """Coefficients of every entry at exponents lo..hi, shape (n, n, hi-lo+1, m)."""
    f, n = b.g.field, b.n
    out = np.zeros((n, n, max(0, hi - lo + 1), f.m), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            x = b.g.rows[i][j]
            if x.is_zero():
                continue
            if b.g.flavor == RATIONAL:
                x = x.expand(_INF_PLACE, hi + 1)
                src_lo, arr = x.start, x.coeffs
            else:
                src_lo, arr = x.low, x.coeffs
            a, z = max(lo, src_lo), min(hi, src_lo + len(arr) - 1)
            if a <= z:
                out[i, j, a - lo : z - lo + 1] = arr[a - src_lo : z - src_lo + 1]
    return out


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            A[mask] = (A[mask] - np.outer(col[mask], A[r])) % p
        r += 1
    return r


def h0(b: BundleSpec | MatG, m: int) -> int:
    """dim_Fq of {f in F_q[t]^n : val_inf((f g)_j) >= -m for all j}."""
    b = _as_spec(b)
    f, n = b.g.field, b.n
    _, c_inv = norm_bounds(b)
    D = m + c_inv  # f = (f g) g^-1 forces deg f_i <= m + c(g^-1)
    if D < 0:
        return 0
    lo_g = min(int(b.val(x)) for x in b.g.entries() if not x.is_zero())
    # f_i = sum_d c_{i,d} pi^-d; (f g)_j has exponents >= lo_g - D
    e_lo, e_hi = lo_g - D, -m - 1
    if e_hi < e_lo:
        return n * (D + 1)
    coeffs = _coeff_rows(b, e_lo, e_hi + D)
    n_e = e_hi - e_lo + 1
    # A[(i,d), (j,e)] = coeff of pi^(e+d) in g_ij
    A = np.zeros((n, D + 1, n, n_e, f.m), dtype=np.int64)
    for d in range(D + 1):
        A[:, d] = coeffs[:, :, d : d + n_e]
    unknowns, eqs = n * (D + 1), n * n_e
    A = A.reshape(unknowns, eqs, f.m)
    if f.m == 1:
        rank = rank_mod_p(A[:, :, 0], f.p)
        return unknowns - rank
    big = f.mul_matrices(A)  # (unknowns, eqs, m, m)
    big = big.transpose(0, 2, 1, 3).reshape(unknowns * f.m, eqs * f.m)
    return unknowns - rank_mod_p(big, f.p) // f.m


def closed_form_h0(eta: Iterable[int], m: int) -> int:
    return sum(max(0, e + m + 1) for e in eta)


def default_m_range(b: BundleSpec | MatG) -> range:
    b = _as_spec(b)
    B = max(norm_bounds(b)) + b.n
    return range(-B, B + 1)


def fit_profile(profile: dict[int, int], n: int, degree: int | None = None) -> Cocharacter:
    """The nondecreasing eta with h0(m) = sum max(0, eta_i + m + 1) on the profile.

    Summands below the window are pinned by ``degree`` (the sum of eta) when
    there is exactly one of them; ambiguity raises OracleMismatch.
    """
    ms = sorted(profile)
    if not ms or ms != list(range(ms[0], ms[-1] + 1)):
        raise OracleMismatch("profile must cover a contiguous range of twists")
    lo, hi = ms[0], ms[-1]
    # first difference: #{i : eta_i >= -m}; second difference: #{i : eta_i = -m}
    delta = {m: profile[m] - profile[m - 1] for m in ms[1:]}
    eta: list[int] = []
    above = delta[lo + 1] if hi > lo else 0
    if above == 1:
        eta.append(profile[lo] - lo - 1)
    elif above > 1 and profile[lo] == 0:
        eta.extend([-lo - 1] * above)
    elif above > 1 or profile[lo] != 0:
        raise OracleMismatch("twist range too narrow to resolve the largest degrees")
    for m in range(lo + 2, hi + 1):
        cnt = delta[m] - delta[m - 1]
        if cnt < 0:
            raise OracleMismatch(f"negative multiplicity at twist {m}")
        eta.extend([-m] * cnt)
    below = n - (delta[hi] if hi > lo else 0)
    if below < 0:
        raise OracleMismatch(f"profile has more than {n} summands")
    if below == 1 and degree is not None:
        eta.append(degree - sum(eta))
    elif below:
        raise OracleMismatch("twist range too narrow to resolve the smallest degrees")
    eta.sort()
    if len(eta) != n or (degree is not None and sum(eta) != degree):
        raise OracleMismatch("no multiset of degrees fits the profile")
    for m in ms:
        if closed_form_h0(eta, m) != profile[m]:
            raise OracleMismatch(f"no multiset fits h0 at twist {m}")
    return Cocharacter(eta)


def h0_profile(b: BundleSpec | MatG, m_range: Iterable[int] | None = None) -> dict[int, int]:
    b = _as_spec(b)
    ms = list(m_range) if m_range is not None else list(default_m_range(b))
    return {m: h0(b, m) for m in ms}


def splitting_from_h0(b: BundleSpec | MatG, m_range: Iterable[int] | None = None) -> Cocharacter:
    """Splitting type read off the section dimensions alone."""
    b = _as_spec(b)
    degree = int(b.val(det(b.g)))
    return fit_profile(h0_profile(b, m_range), b.n, degree)
