"""Seeded randomized property suites.

Each suite returns a ``SuiteReport`` with per-check violation counts; the
CLI ``selftest`` command and the acceptance tests both run these.  Cases are
seeded from strings like ``"<seed>:<n>:<q>:<case>"`` through
``random.Random``, so every case is reproducible on its own.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .adele import global_reduce, random_adele
from .bundle import splitting_from_h0, splitting_type
from .errors import PotentialStall
from .ff import FieldSpec
from .iwasawa import iwasawa_decompose, omega_member, phi_project, phi_torus
from .localnorm import c_g_bound, fundamental_inequality_check, n_potential, vec_norm
from .matgl import MatG, det, make_pi_eta, mat_mul, random_gamma, random_k
from .reduce import FLIP_SHIFT, local_reduce, verify_witness
from .series import LaurentPoly, Place

LOCAL_NS = (2, 3, 4)
LOCAL_QS = (2, 3, 4, 5, 9)


@dataclass
class SuiteReport:
    suite: str
    cases: int = 0
    checks: dict[str, int] = field(default_factory=dict)
    violations: dict[str, int] = field(default_factory=dict)
    stats: dict[str, float] = field(default_factory=dict)
    examples: list[str] = field(default_factory=list)

    def record(self, check: str, ok: bool, detail: str = "") -> None:
        self.checks[check] = self.checks.get(check, 0) + 1
        self.violations.setdefault(check, 0)
        if not ok:
            self.violations[check] += 1
            if len(self.examples) < 10:
                self.examples.append(f"{check}: {detail}")

    @property
    def ok(self) -> bool:
        return self.cases > 0 and not any(self.violations.values())

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "checks": self.checks,
            "violations": self.violations,
            "stats": self.stats,
            "examples": self.examples,
            "ok": self.ok,
        }


def _rng(*parts) -> random.Random:
    return random.Random(":".join(str(p) for p in parts))


def round_trip_instance(n: int, f: FieldSpec, rng: random.Random, eta_range=(-5, 5), degree=3, factors=6):
    """(eta, g) with g = gamma pi^eta k from the seeded generators."""
    eta = sorted(rng.randint(*eta_range) for _ in range(n))
    gamma = random_gamma(n, f, rng.getrandbits(64), degree, factors)
    k = random_k(n, f, rng.getrandbits(64), degree, factors)
    return eta, mat_mul(mat_mul(gamma, make_pi_eta(eta, f)), k)


def _potentials_exact(g: MatG) -> list[int]:
    return [n_potential(g, j) for j in range(1, g.n + 1)]


def check_phase1_trace(g: MatG, w, report: SuiteReport) -> None:
    """Replay the phase-1 moves exactly and check the potential contract."""
    cur = g
    before = _potentials_exact(cur)
    for move in w.trace[: w.phase1_steps]:
        if move.kind != FLIP_SHIFT:
            report.record("phase1_contract", False, f"unexpected move {move}")
            return
        cur = mat_mul(move.matrix(g.n), cur)
        after = _potentials_exact(cur)
        changed = [j for j in range(g.n) if after[j] != before[j]]
        good = len(changed) == 1 and after[changed[0]] <= before[changed[0]] - 1
        report.record("phase1_contract", good, f"{before} -> {after}")
        before = after
    report.record("phase1_omega", omega_member(cur.to_series(w.precision)), "phase-1 output outside Omega")


def reduction_suite(
    cases: int,
    seed: int = 0,
    ns: Sequence[int] = LOCAL_NS,
    qs: Sequence[int] = LOCAL_QS,
    precision: int | None = None,
    check_phase1: bool = True,
) -> SuiteReport:
    """Round-trip eta recovery, exact witnesses and the phase-1 contract."""
    rep = SuiteReport("reduction")
    reduce_time = 0.0
    steps = retries = stalls = 0
    for n in ns:
        for q in qs:
            f = FieldSpec.from_q(q)
            for c in range(cases):
                rng = _rng(seed, n, q, c)
                eta, g = round_trip_instance(n, f, rng)
                t0 = time.perf_counter()
                try:
                    w = local_reduce(g, precision=precision)
                except PotentialStall as exc:
                    stalls += 1
                    rep.record("eta", False, f"n={n} q={q} case={c}: {exc}")
                    rep.cases += 1
                    continue
                reduce_time += time.perf_counter() - t0
                rep.cases += 1
                rep.record("eta", w.eta.tolist() == eta, f"n={n} q={q} case={c}: {w.eta.tolist()} != {eta}")
                rep.record("witness", verify_witness(g, w), f"n={n} q={q} case={c}")
                steps += w.phase1_steps
                retries += w.retries
                if check_phase1:
                    check_phase1_trace(g, w, rep)
    rep.stats.update(reduce_seconds=round(reduce_time, 3), phase1_steps=steps, retries=retries, stalls=stalls)
    return rep


def _random_vec(f: FieldSpec, rng: random.Random, size: int, exps=range(-4, 5), nonzero=True) -> list[LaurentPoly]:
    while True:
        v = [
            LaurentPoly.from_terms(f, {e: f.random(rng) for e in exps if rng.random() < 0.4})
            for _ in range(size)
        ]
        if not nonzero or any(not x.is_zero() for x in v):
            return v


def _vec_mat(v: Sequence, g: MatG) -> list:
    out = []
    for j in range(g.n):
        s = LaurentPoly.zero(g.field)
        for i, x in enumerate(v):
            if not x.is_zero() and not g.rows[i][j].is_zero():
                s = s + x * g.rows[i][j]
        out.append(s)
    return out


def norms_suite(cases: int, seed: int = 0, qs: Sequence[int] = LOCAL_QS) -> SuiteReport:
    """K-invariance, ultrametric, homogeneity, C_g bound, R-vectors, fundamental inequality."""
    from math import comb

    rep = SuiteReport("norms")
    for c in range(cases):
        rng = _rng(seed, "norms", c)
        f = FieldSpec.from_q(rng.choice(qs))
        n = rng.randint(2, 4)
        x, y = _random_vec(f, rng, n), _random_vec(f, rng, n, nonzero=False)
        k = random_k(n, f, rng.getrandbits(64), 2, 4)
        nx = vec_norm(x)
        rep.record("k_invariance", vec_norm(_vec_mat(x, k)) == nx, f"case {c}")
        s = [a + b for a, b in zip(x, y)]
        rep.record("ultrametric", vec_norm(s) <= max(nx, vec_norm(y)), f"case {c}")
        lam = _random_vec(f, rng, 1)[0]
        rep.record("homogeneity", vec_norm([lam * a for a in x]) == -lam.val + nx, f"case {c}")
        while True:
            g = MatG([_random_vec(f, rng, n, range(-3, 4), nonzero=False) for _ in range(n)], f)
            if not det(g).is_zero():
                break
        rep.record("cg_bound", vec_norm(_vec_mat(x, g)) <= c_g_bound(g) + nx, f"case {c}")
        r = _random_vec(f, rng, n, range(-4, 1))
        rep.record("R_vectors", vec_norm(r) >= 0, f"case {c}")
        j = rng.randint(1, n)
        v = _random_vec(f, rng, comb(n, j))
        mu = sorted(rng.randint(-5, 5) for _ in range(n))
        rep.record("fundamental_inequality", fundamental_inequality_check(v, mu, j), f"case {c} j={j} mu={mu}")
        rep.cases += 1
    return rep


def random_exact_matrix(n: int, f: FieldSpec, rng: random.Random, exps=range(-3, 4), density=0.35) -> MatG:
    """Random invertible matrix of Laurent polynomials with exponents in ``exps``."""
    while True:
        g = MatG([_random_vec(f, rng, n, exps, nonzero=False) for _ in range(n)], f)
        if not det(g).is_zero():
            return g


def bundle_suite(cases: int, seed: int = 0, ns: Sequence[int] = (2, 3), qs: Sequence[int] = LOCAL_QS) -> SuiteReport:
    """Splitting type from the reduction against the section-count oracle."""
    rep = SuiteReport("bundle")
    for n in ns:
        for q in qs:
            f = FieldSpec.from_q(q)
            for c in range(cases):
                g = random_exact_matrix(n, f, _rng(seed, "bundle", n, q, c))
                a, b = splitting_type(g), splitting_from_h0(g)
                rep.record("oracle_agreement", a == b, f"n={n} q={q} case={c}: {a.tolist()} vs {b.tolist()}")
                rep.cases += 1
    return rep


def global_suite(
    cases: int, seed: int = 0, ns: Sequence[int] = (1, 2, 3), qs: Sequence[int] = (3, 5), max_places: int = 3
) -> SuiteReport:
    """Adelic round trip and peel-order independence."""
    rep = SuiteReport("global")
    for c in range(cases):
        rng = _rng(seed, "global", c)
        n, q = rng.choice(ns), rng.choice(qs)
        f = FieldSpec(q)
        places = [Place(a) for a in rng.sample(list(f.elements()), rng.randint(0, max_places))]
        eta = sorted(rng.randint(-4, 4) for _ in range(n))
        A = random_adele(n, f, eta, places, rng.getrandbits(64))
        got, _ = global_reduce(A, witness=True)
        rep.record("global_eta", got.tolist() == eta, f"case {c}: {got.tolist()} != {eta}")
        fin = A.finite_support
        for perm in itertools.permutations(fin):
            if list(perm) == fin:
                continue
            other = global_reduce(A, order=list(perm))
            rep.record("peel_order", other == got, f"case {c} order {[str(v) for v in perm]}")
        rep.cases += 1
    return rep


def phi_suite(cases: int, seed: int = 0, ns: Sequence[int] = (3, 4), qs: Sequence[int] = LOCAL_QS, prec: int = 48) -> SuiteReport:
    """Levi projections compose: the torus image equals the two-step route for every D."""
    rep = SuiteReport("phi")
    for c in range(cases):
        rng = _rng(seed, "phi", c)
        n, f = rng.choice(ns), FieldSpec.from_q(rng.choice(qs))
        g = random_exact_matrix(n, f, rng).to_series(prec)
        direct = phi_torus(g)
        for r in range(n):
            for D in itertools.combinations(range(1, n), r):
                blocks = phi_project(g, D)
                two_step = tuple(v for b in blocks for v in iwasawa_decompose(b).t_vals)
                rep.record("phi_transitivity", two_step == direct, f"case {c} D={D}: {two_step} vs {direct}")
        rep.cases += 1
    return rep


SUITES = {
    "norms": norms_suite,
    "reduction": reduction_suite,
    "bundle": bundle_suite,
    "global": global_suite,
}
