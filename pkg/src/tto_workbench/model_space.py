"""Coordinates on the model space of a finite Blaschke product.

Functions in the space are stored by their coefficients in the
Takenaka-Malmquist orthonormal basis built from the zero list of theta (in
the given order).  Integrals over the circle use the M-point trapezoidal
rule; every integrand met here is a rational function with poles at the
reflected zeros, so the rule converges geometrically.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from . import kernels
from .config import DEFAULT, Tolerances, min_quad_points
from .disk import BlaschkeProduct, level_set
from .exceptions import InvalidInput, NumericalFailure

_MAX_QUAD = 1 << 16


def default_quad_points(theta: BlaschkeProduct) -> int:
    """Smallest power of two meeting the floor and resolving the zeros.

    Quadrature error decays like ``r**M`` with r the largest zero modulus,
    so zeros near the circle need more nodes than the fixed floor gives.
    """
    m = min_quad_points(theta.order)
    r = max(abs(a) for a in theta.zeros)
    if r > 0:
        need = 40.0 / -math.log(r)
        m = max(m, need)
    return int(min(_MAX_QUAD, 1 << math.ceil(math.log2(m))))


@dataclasses.dataclass(frozen=True, eq=False)
class ModelSpace:
    theta: BlaschkeProduct
    quad_points: int
    nodes: np.ndarray = dataclasses.field(repr=False)
    table: np.ndarray = dataclasses.field(repr=False)        # e_k(nodes), shape (n, M)
    theta_nodes: np.ndarray = dataclasses.field(repr=False)  # theta(nodes)
    _cache: dict = dataclasses.field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.theta.order

    def basis_at(self, z) -> np.ndarray:
        """Basis values at arbitrary points, shape ``(n, len(z))``."""
        return kernels.tm_table(self.theta.zeros, np.atleast_1d(np.asarray(z, dtype=complex)))

    def integrate(self, samples: np.ndarray) -> complex:
        """Normalised arc-length integral of grid samples."""
        return complex(np.mean(samples))

    def samples(self, f) -> np.ndarray:
        """Boundary values of ``f`` on the quadrature grid."""
        return _coeffs(self, f) @ self.table

    def project_samples(self, samples: np.ndarray) -> np.ndarray:
        """Coefficients ``<g, e_k>`` of grid samples (several rows allowed)."""
        return np.asarray(samples) @ self.table.conj().T / self.quad_points

    def with_theta(self, theta: BlaschkeProduct) -> "ModelSpace":
        """Same zeros, new unimodular constant; coordinates are unchanged."""
        if not np.array_equal(np.array(theta.zeros), np.array(self.theta.zeros)):
            raise InvalidInput("with_theta only changes the constant")
        return ModelSpace(theta, self.quad_points, self.nodes, self.table,
                          theta.constant / self.theta.constant * self.theta_nodes)


@dataclasses.dataclass(frozen=True)
class FunctionVec:
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).ravel())

    def __len__(self):
        return self.coeffs.size


@dataclasses.dataclass(frozen=True)
class ClarkSystem:
    alpha: complex
    points: np.ndarray
    weights: np.ndarray


def _coeffs(space: ModelSpace, f) -> np.ndarray:
    c = f.coeffs if isinstance(f, FunctionVec) else np.asarray(f, dtype=complex).ravel()
    if c.size != space.dim:
        raise InvalidInput(f"expected {space.dim} coefficients, got {c.size}")
    return c


def make_space(theta: BlaschkeProduct, quad_points: Optional[int] = None,
               tol: Tolerances = DEFAULT) -> ModelSpace:
    """Build the space, its quadrature grid and the cached basis table."""
    floor = min_quad_points(theta.order)
    if quad_points is None:
        quad_points = default_quad_points(theta)
    quad_points = int(quad_points)
    if quad_points < floor:
        raise InvalidInput(f"quad_points must be >= {floor} for dim {theta.order}")
    nodes = np.exp(2j * np.pi * np.arange(quad_points) / quad_points)
    table = kernels.tm_table(theta.zeros, nodes)
    space = ModelSpace(theta, quad_points, nodes, table, theta(nodes))
    gram = table @ table.conj().T / quad_points
    err = np.max(np.abs(gram - np.eye(theta.order)))
    if err > 1e-10:
        raise NumericalFailure(f"basis Gram error {err:.2e}; increase quad_points")
    return space


def inner_product(space: ModelSpace, f, g) -> complex:
    """``<f, g>``, linear in f and conjugate-linear in g."""
    return complex(np.vdot(_coeffs(space, g), _coeffs(space, f)))


def norm(space: ModelSpace, f) -> float:
    return float(np.linalg.norm(_coeffs(space, f)))


def eval_fn(space: ModelSpace, f, z):
    """Point values of f; ``z`` may be a scalar or an array in the closed disk."""
    c = _coeffs(space, f)
    if np.isscalar(z):
        return complex(c @ space.basis_at(z)[:, 0])
    z = np.asarray(z, dtype=complex)
    return (c @ space.basis_at(z.ravel())).reshape(z.shape)


def kernel(space: ModelSpace, lam) -> FunctionVec:
    """Reproducing kernel at ``lam``; boundary points are allowed."""
    lam = complex(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise InvalidInput("kernel point must satisfy |lam| <= 1")
    return FunctionVec(np.conj(space.basis_at(lam)[:, 0]))


def conjugation_matrix(space: ModelSpace) -> np.ndarray:
    """``M[i, j] = <C e_j, e_i>``; coordinates of Cf are ``M @ conj(f)``."""
    if "conj" not in space._cache:
        ce = np.conj(space.nodes * space.table) * space.theta_nodes
        space._cache["conj"] = space.project_samples(ce).T
    return space._cache["conj"]


def conjugate(space: ModelSpace, f) -> FunctionVec:
    """``Cf = conj(z f) theta`` on the circle."""
    return FunctionVec(conjugation_matrix(space) @ np.conj(_coeffs(space, f)))


def project(space: ModelSpace, boundary_samples) -> FunctionVec:
    """Orthogonal projection of a function given by its grid samples."""
    s = np.asarray(boundary_samples, dtype=complex).ravel()
    if s.size != space.quad_points:
        raise InvalidInput(f"need {space.quad_points} samples, got {s.size}")
    return FunctionVec(space.project_samples(s))


def project_function(space: ModelSpace, func) -> FunctionVec:
    """Projection of a callable evaluated on the quadrature grid."""
    return project(space, func(space.nodes))


def _split_degenerate(values: np.ndarray, tol: float):
    groups, start = [], 0
    for i in range(1, values.size + 1):
        if i == values.size or values[i] - values[i - 1] > tol:
            groups.append(slice(start, i))
            start = i
    return groups


def takagi_factor(M, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Unitary W with ``M = W @ W.T`` for a symmetric unitary M.

    Writing M = X + iY with X, Y real symmetric, unitarity forces XY = YX, so
    one real orthogonal Q diagonalises both; then Q.T M Q = diag(e^{it}) and
    W = Q diag(e^{it/2}).  Columns of W are the coordinates of a C-real
    orthonormal basis when M is a conjugation matrix.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n):
        raise InvalidInput("takagi_factor needs a square matrix")
    if np.max(np.abs(M - M.T), initial=0.0) > tol.input_check:
        raise InvalidInput("matrix is not symmetric")
    if np.max(np.abs(M @ M.conj().T - np.eye(n)), initial=0.0) > tol.input_check:
        raise InvalidInput("matrix is not unitary")
    X, Y = M.real, M.imag
    X, Y = (X + X.T) / 2, (Y + Y.T) / 2
    vals, Q = np.linalg.eigh(X)
    for sl in _split_degenerate(vals, 1e-8):
        if sl.stop - sl.start > 1:
            block = Q[:, sl]
            _, R = np.linalg.eigh(block.T @ Y @ block)
            Q[:, sl] = block @ R
    d = np.diag(Q.T @ M @ Q)
    W = Q * np.sqrt(d / np.abs(d))
    err = np.max(np.abs(W @ W.T - M))
    if err > 1e-9:
        raise NumericalFailure(f"Takagi residual {err:.2e}")
    return W


def clark_system(space: ModelSpace, alpha, tol: Tolerances = DEFAULT) -> ClarkSystem:
    """Points of ``theta = alpha`` on the circle and their Clark weights.

    Points are sorted by argument in [0, 2pi); weights are 1/|theta'|.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > tol.unimodular:
        raise InvalidInput("alpha must be unimodular")
    if abs(space.theta(0j)) > tol.unimodular:
        raise InvalidInput("clark_system requires theta(0) = 0")
    alpha = alpha / abs(alpha)
    pts = np.array(level_set(space.theta, alpha, tol))
    pts = pts[np.argsort(np.mod(np.angle(pts), 2 * np.pi), kind="stable")]
    if pts.size > 1:
        gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(pts.size)
        if np.min(gaps) < 1e-8:
            raise NumericalFailure("Clark points are not simple")
    weights = 1.0 / np.abs(space.theta.derivative(pts))
    return ClarkSystem(alpha, pts, weights)


def clark_basis(space: ModelSpace, system: ClarkSystem) -> np.ndarray:
    """Columns are the normalised boundary kernels at the Clark points."""
    return np.conj(space.basis_at(system.points)) * np.sqrt(system.weights)


def basis_change(source: ModelSpace, target: ModelSpace) -> np.ndarray:
    """Matrix of the identity map between two coordinatisations of one space.

    Used when two Blaschke products agree as functions up to a unimodular
    constant but list their zeros in a different order.
    """
    if source.dim != target.dim:
        raise InvalidInput("dimension mismatch")
    vals = kernels.tm_table(source.theta.zeros, target.nodes)
    G = target.project_samples(vals).T
    err = np.max(np.abs(G.conj().T @ G - np.eye(source.dim)))
    if err > 1e-8:
        raise NumericalFailure(f"spaces differ: basis change not unitary ({err:.2e})")
    return G


__all__ = [
    "ModelSpace", "FunctionVec", "ClarkSystem", "default_quad_points", "make_space",
    "inner_product", "norm", "eval_fn", "kernel", "conjugation_matrix", "conjugate",
    "project", "project_function", "takagi_factor", "clark_system", "clark_basis",
    "basis_change",
]
