"""The acceptance criteria as callable checks.

Each check returns a ``Criterion`` with the measured value, its threshold and
a verdict.  ``fast`` runs the corpus with n <= 3; ``full`` with n <= 6.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Dict, List

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import DEFAULT, Tolerances
from .corpus import (SEED, random_blaschke, random_complex, random_mobius, random_point,
                     random_unimodular)
from .disk import (BlaschkeProduct, MobiusTransform, blaschke_compose, blaschke_sharp,
                   phi, zn_equivalence_test)
from .isomorphism import certificate_unitary, decide_spatial_iso, verify_spatial_iso
from .model_space import (clark_basis, clark_system, conjugate, eval_fn, inner_product,
                          kernel, make_space, norm)
from .realize import JordanSpec, realize_2x2, realize_inflation, realize_jordan, \
    realize_normal, realize_rank_one
from .tto import (Symbol, clark_operator, compressed_shift, csym_defect, rank_one_tto,
                  tto_basis, tto_from_symbol, tto_membership, analytic_normal_defect,
                  reduce_analytic_symbol, min_normalised_singular)


@dataclasses.dataclass
class Criterion:
    name: str
    measured: object
    threshold: str
    passed: bool

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: measured={self.measured} threshold={self.threshold}"

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _max(values) -> float:
    return float(max(values, default=0.0))


def check_dim_tto(rng, nmax, tol) -> Criterion:
    ranks: Dict[int, List[int]] = {}
    worst_gap = math.inf
    ok = True
    for n in range(1, nmax + 1):
        for _ in range(5):
            space = make_space(random_blaschke(rng, n))
            pts = [random_point(rng, 0.8) for _ in range(2 * n + 3)]
            mats = [rank_one_tto(space, "K_CK", p).matrix for p in pts]
            V = np.stack([m.ravel() / np.linalg.norm(m) for m in mats], axis=1)
            s = np.linalg.svd(V, compute_uv=False)
            rank = int(np.sum(s > s[0] * 1e-10))
            gap = s[2 * n - 2] / s[2 * n - 1] if s.size > 2 * n - 1 and s[2 * n - 1] > 0 else math.inf
            worst_gap = min(worst_gap, gap)
            basis_ok = min_normalised_singular([b.matrix for b in tto_basis(space, tol)]) > 1e-8
            ranks.setdefault(n, []).append(rank)
            ok &= rank == 2 * n - 1 and gap > 1e6 and len(tto_basis(space, tol)) == 2 * n - 1 and basis_ok
    measured = {"ranks": {str(n): sorted(set(r)) for n, r in ranks.items()}, "min_gap": float(worst_gap)}
    return Criterion("dim_TTO", measured, "rank = 2n-1, gap > 1e6", bool(ok))


def check_csym(rng, nmax, tol) -> Criterion:
    defects = []
    for i in range(50):
        n = 1 + i % nmax
        space = make_space(random_blaschke(rng, n))
        deg = int(rng.integers(0, n + 1))
        sym = Symbol.from_coeffs(random_complex(rng, 2 * deg + 1), -deg)
        defects.append(csym_defect(space, tto_from_symbol(space, sym)))
    worst = _max(defects)
    return Criterion("csym_defect_max", worst, "< 1e-10", worst < 1e-10)


def check_kernels(rng, nmax, tol) -> Criterion:
    rep, nrm, pair = [], [], []
    for i in range(100):
        n = 1 + i % nmax
        space = make_space(random_blaschke(rng, n))
        lam = random_point(rng, 0.9)
        f = random_complex(rng, n)
        K = kernel(space, lam)
        rep.append(abs(inner_product(space, f, K) - eval_fn(space, f, lam)))
        theta = space.theta
        nrm.append(abs(norm(space, K) ** 2 - (1 - abs(theta(lam)) ** 2) / (1 - abs(lam) ** 2)))
        pair.append(abs(inner_product(space, conjugate(space, K), K) - theta.derivative(lam)))
    measured = {"reproducing": _max(rep), "norm": _max(nrm), "pairing": _max(pair)}
    ok = max(measured.values()) < 1e-9
    return Criterion("kernel_identities", measured, "each < 1e-9", ok)


def check_clark(rng, nmax, tol) -> Criterion:
    uni, eig, wsum, pars = [], [], [], []
    for i in range(4 * nmax):
        n = 1 + i % nmax
        space = make_space(random_blaschke(rng, n, zero_at_origin=True))
        alpha = random_unimodular(rng)
        U = clark_operator(space, alpha, tol).matrix
        system = clark_system(space, alpha, tol)
        K = clark_basis(space, system)
        uni.append(np.linalg.norm(U @ U.conj().T - np.eye(n)))
        eig.append(_max(np.linalg.norm(U @ K[:, j] - system.points[j] * K[:, j]) for j in range(n)))
        wsum.append(abs(np.sum(system.weights) - 1))
        f, g = random_complex(rng, n), random_complex(rng, n)
        fz, gz = eval_fn(space, f, system.points), eval_fn(space, g, system.points)
        pars.append(abs(inner_product(space, f, g) - np.sum(system.weights * fz * np.conj(gz))))
    measured = {"unitarity": _max(uni), "eigenpair": _max(eig), "weight_sum": _max(wsum),
                "parseval": _max(pars)}
    ok = (measured["unitarity"] < 1e-10 and measured["eigenpair"] < 1e-9
          and measured["weight_sum"] < 1e-9 and measured["parseval"] < 1e-9)
    return Criterion("clark", measured, "unitary < 1e-10; others < 1e-9", ok)


def check_commutation(rng, nmax, tol) -> Criterion:
    resid = []
    for i in range(20):
        n = 1 + i % nmax
        space = make_space(random_blaschke(rng, n, zero_at_origin=True))
        U = clark_operator(space, random_unimodular(rng), tol).matrix
        coeffs = random_complex(rng, n)
        A = np.zeros_like(U)
        for c in coeffs[::-1]:
            A = A @ U + c * np.eye(n)
        resid.append(tto_membership(space, A, tol))
    z2 = make_space(BlaschkeProduct.power(2))
    Az = compressed_shift(z2).matrix
    product = tto_membership(z2, Az @ Az.conj().T, tol)
    measured = {"max_membership": _max(resid), "product_counterexample": product}
    ok = measured["max_membership"] < 1e-7 and product > 1e-2
    return Criterion("commutation_membership", measured, "< 1e-7; product > 1e-2", ok)


def check_spatial_iso(rng, nmax, tol) -> Criterion:
    worst, found = 0.0, 0
    for i in range(30):
        n = 1 + i % min(5, nmax)
        B = random_blaschke(rng, n)
        sharp = bool(i % 2)
        base = blaschke_sharp(B) if sharp else B
        target = blaschke_compose(base, pre=random_mobius(rng), post=random_mobius(rng), tol=tol)
        cert = decide_spatial_iso(B, target, tol)
        if cert is None:
            worst = math.inf
            continue
        found += 1
        U, _ = certificate_unitary(B, cert, tol=tol)
        worst = max(worst, verify_spatial_iso(U, tol))
    negative = decide_spatial_iso(BlaschkeProduct.power(3),
                                  BlaschkeProduct.from_zeros([0.1, 0.2, 0.3]), tol)
    measured = {"certified": found, "max_residual": worst, "negative_pair_empty": negative is None}
    ok = found == 30 and worst < 1e-7 and negative is None
    return Criterion("spatial_iso_round_trip", measured, "30/30, residual < 1e-7", ok)


def _zn_corpus(rng, nmax):
    """(B, expected) pairs: both constructions of the corollary and negatives."""
    out = []
    top = max(2, min(nmax, 5))
    for i in range(20):
        n = 2 + i % (top - 1)
        kind = i % 4
        psi = random_mobius(rng)
        if kind == 0:  # equidistant on a hyperbolic circle
            r = 0.2 + 0.5 * rng.random()
            rot = random_unimodular(rng)
            zeros = [psi(r * rot * np.exp(2j * np.pi * k / n)) for k in range(n)]
            out.append((BlaschkeProduct.from_zeros(zeros), True))
        elif kind == 1:  # one repeated zero
            out.append((BlaschkeProduct.from_zeros([random_point(rng)] * n), True))
        elif kind == 2:  # generic zeros
            out.append((random_blaschke(rng, n), n == 2))
        else:  # equidistant circle with one zero pushed off
            r = 0.3 + 0.4 * rng.random()
            zeros = [psi(r * np.exp(2j * np.pi * k / n)) for k in range(n)]
            zeros[0] = psi(0.9 * r)
            out.append((BlaschkeProduct.from_zeros(zeros), n == 2))
    return out


def check_zn(rng, nmax, tol) -> Criterion:
    agree, expected_ok = 0, 0
    corpus = _zn_corpus(rng, nmax)
    for B, expected in corpus:
        geometric = zn_equivalence_test(B, tol)
        algebraic = decide_spatial_iso(BlaschkeProduct.power(B.order), B, tol) is not None
        agree += geometric == algebraic
        expected_ok += geometric == expected
    measured = {"agree": agree, "cases": len(corpus), "match_construction": expected_ok}
    ok = agree == len(corpus) and expected_ok == len(corpus)
    return Criterion("zn_corollary", measured, "all cases agree", ok)


def check_rank_one(rng, nmax, tol) -> Criterion:
    pairing, resid, branches = [], [], set()
    for n in range(2, max(2, nmax) + 1):
        u = random_complex(rng, n)
        w = random_complex(rng, n)
        perp = w - np.vdot(u, w) / np.vdot(u, u) * u
        cases = [(u, 2.5j * u), (u, perp), (u, w)]
        for a, b in cases:
            R = realize_rank_one(n, a, b, tol)
            branches.add(R.extras["branch"])
            pairing.append(abs(R.extras["kernel_pairing"] - R.extras["t"]))
            resid.append(R.residual / (np.linalg.norm(a) * np.linalg.norm(b)))
    measured = {"pairing": _max(pairing), "transport": _max(resid), "branches": sorted(branches)}
    ok = measured["pairing"] < 1e-10 and measured["transport"] < 1e-9 and len(branches) == 3
    return Criterion("rank_one", measured, "pairing < 1e-10, transport < 1e-9", ok)


def _invariants(A) -> np.ndarray:
    return np.concatenate([[np.trace(A), np.linalg.det(A), np.linalg.norm(A)],
                           np.linalg.svd(A, compute_uv=False)])


def check_2x2(rng, nmax, tol) -> Criterion:
    worst, member = 0.0, 0.0
    for _ in range(20):
        T = random_complex(rng, 2, 2)
        for B in (BlaschkeProduct.power(2), random_blaschke(rng, 2)):
            R = realize_2x2(T, B, tol)
            A = R.operator.matrix
            worst = max(worst, float(np.max(np.abs(_invariants(A) - _invariants(T)))))
            member = max(member, tto_membership(R.operator.space, A, tol))
    measured = {"invariant_gap": worst, "membership": member}
    return Criterion("realize_2x2", measured, "< 1e-8", worst < 1e-8 and member < 1e-7)


def _spectrum_gap(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def check_normal(rng, nmax, tol) -> Criterion:
    normal, spec, member = 0.0, 0.0, 0.0
    for n in range(2, max(2, min(5, nmax)) + 1):
        for rep in range(3):
            eigs = random_complex(rng, n)
            if rep == 2:
                eigs[-1] = eigs[0]
            theta = random_blaschke(rng, n, zero_at_origin=True)
            R = realize_normal(eigs, theta, random_unimodular(rng), tol)
            A = R.operator.matrix
            normal = max(normal, float(np.linalg.norm(A @ A.conj().T - A.conj().T @ A)))
            spec = max(spec, _spectrum_gap(np.linalg.eigvals(A), eigs))
            member = max(member, tto_membership(R.operator.space, A, tol))
    measured = {"normality": normal, "spectrum": spec, "membership": member}
    ok = normal < 1e-9 and spec < 1e-8 and member < 1e-7
    return Criterion("realize_normal", measured, "normality < 1e-9, spectrum < 1e-8", ok)


def check_inflation(rng, nmax, tol) -> Criterion:
    worst = 0.0
    for n, k in ((2, 2), (3, 2), (2, 3)):
        psi = Symbol.from_coeffs(random_complex(rng, 2 * n - 1), -(n - 1))
        R = realize_inflation(psi, random_blaschke(rng, k), tol)
        worst = max(worst, R.extras["kron_residual"])
    return Criterion("inflation", worst, "< 1e-8", worst < 1e-8)


def _random_spec(rng, dmax) -> JordanSpec:
    d = int(rng.integers(1, dmax + 1))
    sizes = []
    while sum(sizes) < d:
        sizes.append(int(rng.integers(1, d - sum(sizes) + 1)))
    pool = random_complex(rng, max(1, len(sizes) // 2 + 1))
    return JordanSpec(tuple((pool[rng.integers(pool.size)], s) for s in sizes))


def check_jordan(rng, nmax, tol) -> Criterion:
    dmax = 8 if nmax >= 6 else 4
    worst, support_ok, member = 0.0, True, 0.0
    for i in range(10):
        spec = _random_spec(rng, dmax)
        if i == 0:  # guarantee a repeated eigenvalue across blocks
            spec = JordanSpec(((1.0, 2), (1.0, min(3, dmax - 2) or 1)))
        R = realize_jordan(spec, tol=tol)
        worst = max(worst, R.extras["jordan_residual"], R.residual)
        support_ok &= R.operator.symbol.support[1] <= 0
        member = max(member, tto_membership(R.operator.space, R.operator, tol))
    measured = {"similarity": worst, "coanalytic": bool(support_ok), "membership": member}
    return Criterion("jordan", measured, "< 1e-7, support <= 0",
                     worst < 1e-7 and support_ok and member < 1e-7)


def check_analytic(rng, nmax, tol) -> Criterion:
    slack, gap_ok, ident = -math.inf, True, 0.0
    for i in range(20):
        n = 1 + i % nmax
        space = make_space(random_blaschke(rng, n, zero_at_origin=(i % 3 == 0)))
        deg = int(rng.integers(1, n + 2))
        samples = Symbol.from_coeffs(random_complex(rng, deg + 1))(space.nodes)
        g = reduce_analytic_symbol(space, samples)
        adj, fwd = analytic_normal_defect(space, g, tol)
        t0 = abs(space.theta(0j))
        slack = max(slack, adj - t0 * fwd)
        ident = max(ident, abs(adj - t0 * fwd))
        if fwd > 1e-9 and t0 < 1:
            gap_ok &= adj < fwd
    measured = {"max_slack": slack, "identity_gap": ident, "strict": bool(gap_ok)}
    return Criterion("analytic_non_normality", measured, "adj <= |theta(0)| fwd + 1e-9",
                     slack <= 1e-9 and gap_ok)


CHECKS: Dict[str, Callable] = {
    "dim_TTO": check_dim_tto,
    "csym_defect_max": check_csym,
    "kernel_identities": check_kernels,
    "clark": check_clark,
    "commutation_membership": check_commutation,
    "spatial_iso_round_trip": check_spatial_iso,
    "zn_corollary": check_zn,
    "rank_one": check_rank_one,
    "realize_2x2": check_2x2,
    "realize_normal": check_normal,
    "inflation": check_inflation,
    "jordan": check_jordan,
    "analytic_non_normality": check_analytic,
}


def run_check(name: str, level: str = "full", seed: int = SEED,
              tol: Tolerances = DEFAULT) -> Criterion:
    nmax = 6 if level == "full" else 3
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    try:
        return CHECKS[name](rng, nmax, tol)
    except Exception as exc:  # a crash is a failed criterion, not a crashed report
        return Criterion(name, f"error: {type(exc).__name__}: {exc}", "no error", False)


def run_all(level: str = "full", seed: int = SEED, tol: Tolerances = DEFAULT) -> List[Criterion]:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    return sorted((run_check(name, level, seed, tol) for name in CHECKS), key=lambda c: c.name)
