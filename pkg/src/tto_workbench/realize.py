"""Constructive realisations of matrices as truncated Toeplitz operators.

Each routine returns a ``Realization``: a Blaschke product, an operator in
its truncated Toeplitz space, and a witness X with ``X T X^-1`` equal to that
operator (X unitary for the unitary-equivalence constructions, invertible
for the Jordan construction).
"""

from __future__ import annotations

import dataclasses
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import schur, toeplitz
from scipy.optimize import least_squares

from .config import DEFAULT, Tolerances
from .disk import BlaschkeProduct, phi
from .exceptions import InvalidInput, NumericalFailure
from .model_space import (ModelSpace, clark_basis, clark_system, conjugation_matrix,
                          conjugate, kernel, make_space, takagi_factor)
from .tto import Operator, Symbol, tto_basis, tto_from_samples, tto_from_symbol, tensor


@dataclasses.dataclass(frozen=True)
class JordanSpec:
    blocks: Tuple[Tuple[complex, int], ...]

    def __post_init__(self):
        blocks = tuple((complex(mu), int(d)) for mu, d in self.blocks)
        if not blocks or any(d < 1 for _, d in blocks):
            raise InvalidInput("Jordan blocks need positive sizes")
        object.__setattr__(self, "blocks", blocks)

    @property
    def size(self) -> int:
        return sum(d for _, d in self.blocks)

    def matrix(self) -> np.ndarray:
        """Block-diagonal Jordan form, ones on the superdiagonal."""
        J = np.zeros((self.size, self.size), dtype=complex)
        k = 0
        for mu, d in self.blocks:
            J[k:k + d, k:k + d] = mu * np.eye(d) + np.eye(d, k=1)
            k += d
        return J


@dataclasses.dataclass(frozen=True, eq=False)
class Realization:
    theta: BlaschkeProduct
    operator: Operator
    witness: np.ndarray
    witness_kind: str
    residual: float
    source: np.ndarray = dataclasses.field(repr=False)
    extras: Dict[str, object] = dataclasses.field(default_factory=dict)


def _realization(theta, op, witness, kind, source, tol, **extras) -> Realization:
    X = np.asarray(witness, dtype=complex)
    inv = X.conj().T if kind == "unitary" else np.linalg.inv(X)
    residual = float(np.linalg.norm(X @ source @ inv - op.matrix))
    if residual > tol.realization * max(1.0, np.linalg.norm(source)):
        raise NumericalFailure(f"realisation residual {residual:.2e}")
    return Realization(theta, op, X, kind, residual, np.asarray(source), dict(extras))


# ---------------------------------------------------------------------------
# Rank one
# ---------------------------------------------------------------------------

def _complete(frame: np.ndarray) -> np.ndarray:
    """Unitary whose leading columns are the orthonormal ``frame``."""
    n, k = frame.shape
    Q, _ = np.linalg.qr(np.hstack([frame, np.eye(n, dtype=complex)]))
    Q = Q[:, :n].copy()
    Q[:, :k] = frame
    return Q


def _pair_frame(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    r = g - np.vdot(f, g) * f
    nr = np.linalg.norm(r)
    if nr < 1e-12 or f.size == 1:
        return f[:, None]
    return np.stack([f, r / nr], axis=1)


def pairing_unitary(f1, g1, f2, g2, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Unitary U with ``U f1 = f2`` and ``U g1 = g2`` for unit vectors with equal pairings."""
    f1, g1, f2, g2 = (np.asarray(x, dtype=complex).ravel() for x in (f1, g1, f2, g2))
    if len({f1.size, g1.size, f2.size, g2.size}) != 1:
        raise InvalidInput("vectors must share one dimension")
    for x in (f1, g1, f2, g2):
        if abs(np.linalg.norm(x) - 1) > tol.input_check:
            raise InvalidInput("pairing_unitary needs unit vectors")
    if abs(np.vdot(g1, f1) - np.vdot(g2, f2)) > tol.input_check:
        raise InvalidInput("pairings <f1, g1> and <f2, g2> differ")
    F1, F2 = _pair_frame(f1, g1), _pair_frame(f2, g2)
    if F1.shape != F2.shape:
        # one pair is parallel up to rounding; use the single-vector frames
        F1, F2 = f1[:, None], f2[:, None]
    return _complete(F2) @ _complete(F1).conj().T


def realize_rank_one(n: int, u, v, tol: Tolerances = DEFAULT) -> Realization:
    """Realise ``u (x) v`` as a multiple of a rank-one truncated Toeplitz operator."""
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if n < 2 or u.size != n or v.size != n:
        raise InvalidInput("realize_rank_one needs n >= 2 and vectors of length n")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise InvalidInput("u and v must be nonzero")
    uh, vh = u / nu, v / nv
    p = np.vdot(vh, uh)
    t = float(min(abs(p), 1.0))
    phase = p / abs(p) if abs(p) > 0 else 1.0
    g1 = phase * vh
    scale = nu * nv * phase
    if t < 1e-12:
        branch, theta, lam = "orthogonal", BlaschkeProduct.power(n), 0j
    elif t > 1 - 1e-12:
        branch, theta, lam = "parallel", BlaschkeProduct.power(n), 1 + 0j
    else:
        zeros = [0j] + [t ** (1.0 / (n - 1))] * (n - 1)
        branch = "interior"
        theta, lam = BlaschkeProduct(float((-1) ** (n - 1)), zeros), 0j
    space = make_space(theta)
    K = kernel(space, lam).coeffs
    k = K / np.linalg.norm(K)
    ck = conjugate(space, k).coeffs
    if branch == "parallel":
        g1 = uh
    W = pairing_unitary(uh, g1, k, ck, tol)
    op = Operator(scale * tensor(k, ck), space)
    return _realization(theta, op, W, "unitary", np.outer(u, v.conj()), tol,
                        branch=branch, t=t, lam=lam,
                        kernel_pairing=complex(np.vdot(ck, k)))


# ---------------------------------------------------------------------------
# 2 x 2
# ---------------------------------------------------------------------------

def _u2(x) -> np.ndarray:
    th, al, be = x
    c, s = math.cos(th), math.sin(th)
    R = np.array([[c, -s], [s, c]], dtype=complex)
    return np.diag([1, np.exp(1j * al)]) @ R @ np.diag([1, np.exp(1j * be)])


def _asym(x, R) -> np.ndarray:
    V = _u2(x)
    S = V @ R @ V.conj().T
    d = S[0, 1] - S[1, 0]
    return np.array([d.real, d.imag])


def symmetrize_2x2(T, tol: Tolerances = DEFAULT) -> Tuple[np.ndarray, np.ndarray]:
    """``(S, U)`` with ``S = U T U*`` complex symmetric."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (2, 2):
        raise InvalidInput("symmetrize_2x2 needs a 2x2 matrix")
    scale = max(1.0, np.linalg.norm(T))
    if abs(T[0, 1] - T[1, 0]) <= 1e-14 * scale:
        return T.copy(), np.eye(2, dtype=complex)
    Rm, Z = schur(T, output="complex")
    g = np.linspace(0, 1, 16, endpoint=False)
    th, al, be = (x.ravel() for x in np.meshgrid(g * np.pi, g * 2 * np.pi, g * 2 * np.pi,
                                                 indexing="ij"))
    c, s = np.cos(th), np.sin(th)
    V = np.empty((th.size, 2, 2), dtype=complex)
    V[:, 0, 0], V[:, 0, 1] = c, -s * np.exp(1j * be)
    V[:, 1, 0], V[:, 1, 1] = s * np.exp(1j * al), c * np.exp(1j * (al + be))
    S = V @ Rm @ np.conj(np.transpose(V, (0, 2, 1)))
    cost = np.abs(S[:, 0, 1] - S[:, 1, 0]) ** 2
    order = np.argsort(cost, kind="stable")
    starts = np.stack([th, al, be], axis=1)
    for i in order[:8]:
        sol = least_squares(_asym, starts[i], args=(Rm,), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        V = _u2(sol.x)
        U = V @ Z.conj().T
        S = U @ T @ U.conj().T
        if abs(S[0, 1] - S[1, 0]) <= 1e-8 * scale:
            S = (S + S.T) / 2
            return S, U
    raise NumericalFailure("could not symmetrise the 2x2 matrix")


def realize_2x2(T, B: Optional[BlaschkeProduct] = None,
                tol: Tolerances = DEFAULT) -> Realization:
    """Unitarily equivalent truncated Toeplitz operator on ``K_B`` (default z^2)."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (2, 2):
        raise InvalidInput("realize_2x2 needs a 2x2 matrix")
    B = B if B is not None else BlaschkeProduct.power(2)
    if B.order != 2:
        raise InvalidInput("realize_2x2 needs an order-2 Blaschke product")
    space = make_space(B)
    W = takagi_factor(conjugation_matrix(space), tol)
    S, V = symmetrize_2x2(T, tol)
    target = np.array([S[0, 0], S[0, 1], S[1, 1]])
    for radius in (tol.basis_radius, 0.5 * (1 + tol.basis_radius)):
        basis = tto_basis(space, dataclasses.replace(tol, basis_radius=radius))
        sym = [W.conj().T @ b.matrix @ W for b in basis]
        G = np.array([[s[0, 0], s[0, 1], s[1, 1]] for s in sym]).T
        if np.linalg.cond(G) < 1e10:
            break
    else:
        raise NumericalFailure("coefficient system for the 2x2 realisation is singular")
    coef = np.linalg.solve(G, target)
    A = sum(c * b.matrix for c, b in zip(coef, basis))
    X = W @ V
    return _realization(B, Operator(A, space), X, "unitary", T, tol,
                        coefficients=coef, symmetric_form=S)


# ---------------------------------------------------------------------------
# Normal
# ---------------------------------------------------------------------------

def _sort_eigs(eigs: np.ndarray) -> np.ndarray:
    return np.array(sorted(range(eigs.size),
                           key=lambda i: (-abs(eigs[i]), np.mod(np.angle(eigs[i]), 2 * np.pi))))


def realize_normal(eigs, theta: BlaschkeProduct, alpha=1.0,
                   tol: Tolerances = DEFAULT) -> Realization:
    """``p(U_alpha)`` with p interpolating the eigenvalues at the Clark points."""
    eigs = np.asarray(eigs, dtype=complex).ravel()
    if eigs.size != theta.order:
        raise InvalidInput("need one eigenvalue per dimension")
    space = make_space(theta)
    system = clark_system(space, alpha, tol)
    K = clark_basis(space, system)
    order = _sort_eigs(eigs)
    vals = eigs[order]
    A = (K * vals) @ K.conj().T
    P = np.eye(eigs.size)[:, order]
    X = K @ P.T
    vander = np.vander(system.points, eigs.size, increasing=True)
    poly = np.linalg.solve(vander, vals)
    return _realization(theta, Operator(A, space), X, "unitary", np.diag(eigs), tol,
                        clark_points=system.points, polynomial=poly, alpha=system.alpha)


# ---------------------------------------------------------------------------
# Inflation
# ---------------------------------------------------------------------------

def realize_inflation(psi: Symbol, B: BlaschkeProduct, tol: Tolerances = DEFAULT) -> Realization:
    """Compression of ``psi(B)`` on ``K_{B^n}`` against ``T(psi) (x) I_k``.

    n is one more than the largest exponent magnitude of ``psi``.
    """
    lo, hi = psi.support
    n = max(abs(lo), abs(hi)) + 1
    k = B.order
    theta = BlaschkeProduct(B.constant ** n, tuple(B.zeros) * n)
    space = make_space(theta)
    Bz = B(space.nodes)
    op = Operator(tto_from_samples(space, psi(Bz)), space)
    col = [psi.laurent.get(m, 0) for m in range(n)]
    row = [psi.laurent.get(-m, 0) for m in range(n)]
    target = np.kron(toeplitz(col, row), np.eye(k))
    family = np.vstack([Bz ** j * space.table[:k] for j in range(n)])
    gram = family @ family.conj().T / space.quad_points
    err = float(np.max(np.abs(gram - np.eye(n * k))))
    if err > 1e-10:
        raise NumericalFailure(f"inflation basis not orthonormal ({err:.2e})")
    # columns: coordinates of B^j e_i, ordered (j, i)
    X = space.project_samples(family).T
    return _realization(theta, op, X, "unitary", target, tol, n=n, k=k,
                        kron_residual=float(np.linalg.norm(X.conj().T @ op.matrix @ X - target)))


# ---------------------------------------------------------------------------
# Jordan
# ---------------------------------------------------------------------------

def hermite_coefficients(nodes: Sequence[complex], values: Sequence[complex],
                         sizes: Sequence[int]) -> np.ndarray:
    """Coefficients (increasing powers) of q with q(w_i) = mu_i, q'(w_i) = 1, higher = 0."""
    d = sum(sizes)
    rows, rhs = [], []
    for w, mu, m in zip(nodes, values, sizes):
        for order in range(m):
            row = np.zeros(d, dtype=complex)
            for p in range(order, d):
                row[p] = math.perm(p, order) * w ** (p - order)
            rows.append(row)
            rhs.append(mu if order == 0 else (1.0 if order == 1 else 0.0))
    return np.linalg.solve(np.array(rows), np.array(rhs, dtype=complex))


def block_bases(space: ModelSpace, zeros: Sequence[complex], sizes: Sequence[int]
                ) -> List[np.ndarray]:
    """Coordinates of ``k_z phi_z^(j-1)``, one orthonormal block per zero."""
    out = []
    z = space.nodes
    for a, m in zip(zeros, sizes):
        k = np.sqrt(1 - abs(a) ** 2) / (1 - np.conj(a) * z)
        f = phi(a)(z)
        samples = np.array([k * f ** j for j in range(m)])
        out.append(space.project_samples(samples).T)
    return out


def coanalytic_shift_block(a: complex, m: int) -> np.ndarray:
    """Matrix of the compressed ``conj(z)`` on one block basis.

    Equals ``g(N)`` for ``g(w) = (w + conj a)/(1 + a w)`` and N the upper shift;
    upper bidiagonal only when a = 0.
    """
    N = np.eye(m, k=1)
    out = np.conj(a) * np.eye(m, dtype=complex)
    P = np.eye(m)
    for j in range(1, m):
        P = P @ N
        out = out + (1 - abs(a) ** 2) * (-a) ** (j - 1) * P
    return out


def realize_jordan(spec: JordanSpec, zeros: Optional[Sequence[complex]] = None,
                   tol: Tolerances = DEFAULT) -> Realization:
    """A co-analytic truncated Toeplitz operator with the given Jordan form."""
    if not isinstance(spec, JordanSpec):
        spec = JordanSpec(tuple(spec))
    r = len(spec.blocks)
    given = zeros is not None
    attempts = [list(zeros)] if given else [
        [0.4 * np.exp(2j * np.pi * i / r) for i in range(r)],
        [0.3 * np.exp(2j * np.pi * (i + 0.5) / r) for i in range(r)],
    ]
    last = None
    for zs in attempts:
        zs = [complex(z) for z in zs]
        if len(zs) != r:
            raise InvalidInput("need one zero per Jordan block")
        if any(not abs(z) < 1 for z in zs):
            raise InvalidInput("zeros must lie in the open disk")
        if any(abs(zs[i] - zs[j]) < 1e-12 for i in range(r) for j in range(i)):
            raise InvalidInput("zeros must be distinct")
        try:
            return _jordan_once(spec, zs, tol)
        except NumericalFailure as exc:
            last = exc
    raise last


def _jordan_once(spec: JordanSpec, zs: List[complex], tol: Tolerances) -> Realization:
    sizes = [d for _, d in spec.blocks]
    mus = [mu for mu, _ in spec.blocks]
    theta = BlaschkeProduct(1.0, tuple(z for z, d in zip(zs, sizes) for _ in range(d)))
    space = make_space(theta)
    q = hermite_coefficients([np.conj(z) for z in zs], mus, sizes)
    symbol = Symbol({-p: c for p, c in enumerate(q)})
    op = tto_from_symbol(space, symbol)
    cols = []
    for X, mu, d in zip(block_bases(space, zs, sizes), mus, sizes):
        Nt = X.conj().T @ (op.matrix - mu * np.eye(space.dim)) @ X
        chain = [np.eye(d)[:, -1]]
        for _ in range(d - 1):
            chain.append(Nt @ chain[-1])
        cols.append(X @ np.stack(chain[::-1], axis=1))
    S = np.hstack(cols)
    cond = float(np.linalg.cond(S))
    if cond > 1e8:
        raise NumericalFailure(f"similarity is ill-conditioned (cond {cond:.2e})")
    J = spec.matrix()
    jordan_residual = float(np.linalg.norm(np.linalg.solve(S, op.matrix @ S) - J))
    return _realization(theta, op, S, "similarity", J, tol, zeros=zs, hermite=q,
                        cond=cond, jordan_residual=jordan_residual)


def coanalytic_similarity(theta_zeros: Sequence[complex], sizes: Sequence[int],
                          tol: Tolerances = DEFAULT) -> Tuple[np.ndarray, float]:
    """Invertible Y with ``Y A_{conj z}^m Y^-1`` analytic for every m.

    With S the block bases and R the block-wise flip, Y = S^-H R S^-1.
    Returns Y and the largest relative distance of a conjugated power of
    ``A_{conj z}`` to the span of the powers of ``A_z``.
    """
    theta = BlaschkeProduct(1.0, tuple(z for z, d in zip(theta_zeros, sizes) for _ in range(d)))
    space = make_space(theta)
    S = np.hstack(block_bases(space, theta_zeros, sizes))
    R = np.zeros_like(S)
    k = 0
    for d in sizes:
        R[k:k + d, k:k + d] = np.eye(d)[::-1]
        k += d
    Sinv = np.linalg.inv(S)
    Y = Sinv.conj().T @ R @ Sinv
    Yinv = np.linalg.inv(Y)
    n = space.dim
    Az = tto_from_symbol(space, Symbol.monomial(1)).matrix
    analytic = np.stack([np.linalg.matrix_power(Az, j).ravel() for j in range(n)], axis=1)
    Q, _ = np.linalg.qr(analytic)
    Ab = Az.conj().T
    worst = 0.0
    for m in range(n):
        C = (Y @ np.linalg.matrix_power(Ab, m) @ Yinv).ravel()
        res = C - Q @ (Q.conj().T @ C)
        worst = max(worst, float(np.linalg.norm(res) / np.linalg.norm(C)))
    return Y, worst


__all__ = [
    "JordanSpec", "Realization", "pairing_unitary", "realize_rank_one", "symmetrize_2x2",
    "realize_2x2", "realize_normal", "realize_inflation", "hermite_coefficients",
    "block_bases", "coanalytic_shift_block", "realize_jordan", "coanalytic_similarity",
]
