"""Truncated Toeplitz operators as matrices in the Takenaka-Malmquist basis.

``A_phi f = P(phi f)`` has entries ``<phi e_j, e_i>``; symbols are Laurent
polynomials on the circle (``Symbol``) or, for transported symbols such as
``g o psi``, arbitrary grid samples.  Membership in the space of truncated
Toeplitz operators is tested against the spanning family of rank-one
operators ``K_lam (x) CK_lam``.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT, Tolerances
from .exceptions import InvalidInput, NumericalFailure
from .model_space import (FunctionVec, ModelSpace, _coeffs, clark_basis, clark_system,
                          conjugate, conjugation_matrix, kernel, project)


@dataclasses.dataclass(frozen=True)
class Symbol:
    """Laurent polynomial ``sum a_m z**m`` restricted to the circle."""

    laurent: Dict[int, complex]

    def __post_init__(self):
        clean = {int(m): complex(c) for m, c in dict(self.laurent).items() if c != 0}
        object.__setattr__(self, "laurent", clean)

    @classmethod
    def monomial(cls, m: int, c=1.0) -> "Symbol":
        return cls({m: c})

    @classmethod
    def from_coeffs(cls, coeffs, lowest: int = 0) -> "Symbol":
        """Coefficients listed from exponent ``lowest`` upward."""
        return cls({lowest + k: c for k, c in enumerate(coeffs)})

    @property
    def support(self) -> Tuple[int, int]:
        if not self.laurent:
            return (0, 0)
        return (min(self.laurent), max(self.laurent))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for m, c in self.laurent.items():
            out = out + c * z ** m
        return out

    def conj(self) -> "Symbol":
        """Boundary conjugate: ``conj(z**m) = z**-m`` on the circle."""
        return Symbol({-m: np.conj(c) for m, c in self.laurent.items()})

    def sharp(self) -> "Symbol":
        """``conj(phi(conj z))``: coefficients conjugated, exponents kept."""
        return Symbol({m: np.conj(c) for m, c in self.laurent.items()})

    def __add__(self, other: "Symbol") -> "Symbol":
        out = dict(self.laurent)
        for m, c in other.laurent.items():
            out[m] = out.get(m, 0) + c
        return Symbol(out)

    def scale(self, s) -> "Symbol":
        return Symbol({m: s * c for m, c in self.laurent.items()})


@dataclasses.dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    space: ModelSpace = dataclasses.field(repr=False)
    symbol: Optional[Symbol] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.space.dim
        if m.shape != (n, n):
            raise InvalidInput(f"operator must be {n}x{n}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def H(self) -> "Operator":
        sym = self.symbol.conj() if self.symbol is not None else None
        return Operator(self.matrix.conj().T, self.space, sym)


class RankOneKind(str, enum.Enum):
    K_CK = "K_CK"
    CK_K = "CK_K"
    Kb_Kb = "Kb_Kb"


def _matrix(A) -> np.ndarray:
    return A.matrix if isinstance(A, Operator) else np.asarray(A, dtype=complex)


def tto_from_samples(space: ModelSpace, values: np.ndarray) -> np.ndarray:
    """Matrix of the compression of multiplication by grid samples ``values``."""
    values = np.asarray(values, dtype=complex)
    if values.shape != (space.quad_points,):
        raise InvalidInput(f"need {space.quad_points} symbol samples")
    T = space.table
    return (T.conj() * values) @ T.T / space.quad_points


def tto_from_symbol(space: ModelSpace, phi: Symbol) -> Operator:
    return Operator(tto_from_samples(space, phi(space.nodes)), space, phi)


def compressed_shift(space: ModelSpace) -> Operator:
    return tto_from_symbol(space, Symbol.monomial(1))


def tensor(f, g) -> np.ndarray:
    """Matrix of ``h -> <h, g> f``."""
    f = f.coeffs if isinstance(f, FunctionVec) else np.asarray(f, dtype=complex)
    g = g.coeffs if isinstance(g, FunctionVec) else np.asarray(g, dtype=complex)
    return np.outer(f, g.conj())


def rank_one_tto(space: ModelSpace, kind, lam) -> Operator:
    kind = RankOneKind(kind)
    lam = complex(lam)
    if kind is RankOneKind.Kb_Kb:
        if abs(abs(lam) - 1.0) > 1e-12:
            raise InvalidInput("Kb_Kb needs |lam| = 1")
        K = kernel(space, lam / abs(lam))
        return Operator(tensor(K, K), space)
    if not abs(lam) < 1.0:
        raise InvalidInput(f"{kind.value} needs |lam| < 1")
    K = kernel(space, lam)
    CK = conjugate(space, K)
    if kind is RankOneKind.K_CK:
        return Operator(tensor(K, CK), space)
    return Operator(tensor(CK, K), space)


def basis_points(n: int, radius: float, phase: float = 0.0) -> np.ndarray:
    m = 2 * n - 1
    return radius * np.exp(1j * (2 * np.pi * np.arange(m) / m + phase))


def _family(space: ModelSpace, points) -> List[np.ndarray]:
    return [rank_one_tto(space, RankOneKind.K_CK, p).matrix for p in points]


def _stack(mats) -> np.ndarray:
    return np.stack([np.asarray(m).ravel() for m in mats], axis=1)


def min_normalised_singular(mats) -> float:
    V = _stack(mats)
    V = V / np.linalg.norm(V, axis=0)
    return float(np.linalg.svd(V, compute_uv=False)[-1])


def tto_basis(space: ModelSpace, tol: Tolerances = DEFAULT) -> List[Operator]:
    """``2n - 1`` rank-one operators spanning the truncated Toeplitz operators."""
    key = ("basis", tol.basis_radius)
    if key not in space._cache:
        n = space.dim
        # zeros bunched away from 0 make circles about 0 poor; recentre on their mean
        c = complex(np.mean(space.theta.zeros))
        centred = basis_points(n, tol.basis_radius)
        centred = (centred + c) / (1 + np.conj(c) * centred)
        for pts in (basis_points(n, tol.basis_radius),
                    basis_points(n, 0.5 * (1 + tol.basis_radius), np.pi / (2 * n - 1)),
                    centred):
            mats = _family(space, pts)
            if min_normalised_singular(mats) >= 1e-8:
                break
        else:
            raise NumericalFailure("rank-one family is numerically dependent")
        space._cache[key] = [Operator(m, space) for m in mats]
    return space._cache[key]


def _span_basis(space: ModelSpace, tol: Tolerances) -> np.ndarray:
    key = ("span", tol.basis_radius)
    if key not in space._cache:
        Q, _ = np.linalg.qr(_stack([B.matrix for B in tto_basis(space, tol)]))
        space._cache[key] = Q
    return space._cache[key]


def tto_membership(space: ModelSpace, A, tol: Tolerances = DEFAULT) -> float:
    """Relative Frobenius distance from A to the span of ``tto_basis``."""
    a = _matrix(A)
    if a.shape != (space.dim, space.dim):
        raise InvalidInput("dimension mismatch")
    size = np.linalg.norm(a)
    if size == 0:
        return 0.0
    v = a.ravel()
    Q = _span_basis(space, tol)
    r = v - Q @ (Q.conj().T @ v)
    return float(np.linalg.norm(r) / size)


def tto_coordinates(space: ModelSpace, A, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Least-squares coefficients of A in ``tto_basis``."""
    V = _stack([B.matrix for B in tto_basis(space, tol)])
    return np.linalg.lstsq(V, _matrix(A).ravel(), rcond=None)[0]


def clark_operator(space: ModelSpace, alpha, tol: Tolerances = DEFAULT) -> Operator:
    """``U f = A_z f + alpha <f, conj(z) theta> 1``; needs theta(0) = 0."""
    clark_system(space, alpha, tol)  # validates theta(0) and alpha
    alpha = complex(alpha) / abs(alpha)
    one = project(space, np.ones(space.quad_points)).coeffs
    tail = project(space, np.conj(space.nodes) * space.theta_nodes).coeffs
    U = compressed_shift(space).matrix + alpha * np.outer(one, tail.conj())
    return Operator(U, space)


def csym_defect(space: ModelSpace, A) -> float:
    """``||CAC - A*||_F / max(1, ||A||_F)``; CAC has matrix ``M conj(A) conj(M)``."""
    a = _matrix(A)
    M = conjugation_matrix(space)
    cac = M @ a.conj() @ M.conj()
    return float(np.linalg.norm(cac - a.conj().T) / max(1.0, np.linalg.norm(a)))


def commutant_membership_check(space: ModelSpace, A, alpha,
                               tol: Tolerances = DEFAULT) -> Tuple[float, float]:
    a = _matrix(A)
    U = clark_operator(space, alpha, tol).matrix
    return float(np.linalg.norm(a @ U - U @ a)), tto_membership(space, a, tol)


def clark_functional_calculus(space: ModelSpace, alpha, values,
                              tol: Tolerances = DEFAULT) -> np.ndarray:
    """``f(U_alpha)`` where ``values[j] = f(zeta_j)`` at the sorted Clark points."""
    system = clark_system(space, alpha, tol)
    K = clark_basis(space, system)
    values = np.asarray(values, dtype=complex)
    if values.shape != (space.dim,):
        raise InvalidInput("need one value per Clark point")
    return (K * values) @ K.conj().T


def reduce_analytic_symbol(space: ModelSpace, samples) -> FunctionVec:
    """Reduce an analytic symbol to ``g`` with ``z g`` in the space.

    Projecting onto the space and subtracting the multiple of ``K_0`` that
    kills the value at 0 changes ``A_phi`` only by a multiple of I.
    """
    phi = project(space, samples).coeffs
    K0 = kernel(space, 0j).coeffs
    phi = phi - (np.vdot(K0, phi) / np.vdot(K0, K0)) * K0
    g = project(space, space.samples(phi) * np.conj(space.nodes))
    return g


def analytic_normal_defect(space: ModelSpace, g,
                           tol: Tolerances = DEFAULT) -> Tuple[float, float]:
    """``(||A_phi* K_0||, ||A_phi K_0||)`` for the analytic symbol ``phi = z g``."""
    gv = _coeffs(space, g)
    phi_samples = space.nodes * space.samples(gv)
    phi = project(space, phi_samples).coeffs
    leak = np.sqrt(max(np.mean(np.abs(phi_samples) ** 2) - np.vdot(phi, phi).real, 0.0))
    if leak > max(tol.membership, tol.membership * np.linalg.norm(gv)):
        raise InvalidInput("z g is not in the model space")
    A = tto_from_samples(space, phi_samples)
    K0 = kernel(space, 0j).coeffs
    return float(np.linalg.norm(A.conj().T @ K0)), float(np.linalg.norm(A @ K0))


__all__ = [
    "Symbol", "Operator", "RankOneKind", "tto_from_samples", "tto_from_symbol",
    "compressed_shift", "tensor", "rank_one_tto", "basis_points", "min_normalised_singular",
    "tto_basis", "tto_membership", "tto_coordinates", "clark_operator", "csym_defect",
    "commutant_membership_check", "clark_functional_calculus", "reduce_analytic_symbol",
    "analytic_normal_defect",
]
