"""Unitaries between model spaces and the spatial-isomorphism decision.

Three building blocks carry the truncated Toeplitz operators of one space
onto those of another: a change of variables ``f -> sqrt(psi') f o psi``, the
Crofoot multiplier ``sqrt(1-|a|^2)/(1 - conj(a) theta)``, and the linear map
``JC`` onto the space of the reflected product.  A certificate from
``decide_orbit`` is turned into the composite unitary and checked by
transporting the spanning family in both directions.
"""

from __future__ import annotations

import cmath
import dataclasses
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import kernels
from .config import DEFAULT, Tolerances
from .disk import (BlaschkeProduct, Certificate, MobiusTransform, blaschke_compose,
                   blaschke_sharp, decide_orbit, mobius_inverse, orbit_invariants, phi,
                   verify_certificate)
from .exceptions import InvalidInput, NumericalFailure
from .model_space import (ModelSpace, basis_change, conjugation_matrix, default_quad_points,
                          make_space)
from .tto import tto_basis, tto_membership


@dataclasses.dataclass(frozen=True, eq=False)
class UnitaryMap:
    matrix: np.ndarray
    domain: ModelSpace = dataclasses.field(repr=False)
    codomain: ModelSpace = dataclasses.field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise InvalidInput("matrix shape does not match the spaces")
        object.__setattr__(self, "matrix", m)

    def unitarity_defect(self) -> float:
        n = self.matrix.shape[1]
        return float(np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(n)))

    def then(self, other: "UnitaryMap") -> "UnitaryMap":
        """``other o self``."""
        return UnitaryMap(other.matrix @ self.matrix, self.domain, other.codomain)

    def transport(self, A) -> np.ndarray:
        return self.matrix @ np.asarray(A) @ self.matrix.conj().T


def _checked(U: UnitaryMap, tol: Tolerances, what: str) -> UnitaryMap:
    err = U.unitarity_defect()
    if err > tol.unitary:
        raise NumericalFailure(f"{what} unitarity defect {err:.2e}")
    return U


def _space(theta: BlaschkeProduct, quad_points: Optional[int]) -> ModelSpace:
    m = default_quad_points(theta)
    return make_space(theta, max(m, quad_points or 0))


def sqrt_derivative(psi: MobiusTransform, z):
    """The analytic branch ``sqrt(eta) sqrt(1-|a|^2)/(1 - conj(a) z)``."""
    return cmath.sqrt(psi.eta) * np.sqrt(1 - abs(psi.a) ** 2) / (1 - np.conj(psi.a) * z)


def unitary_cov(theta: BlaschkeProduct, psi: MobiusTransform,
                quad_points: Optional[int] = None, tol: Tolerances = DEFAULT) -> UnitaryMap:
    """``f -> sqrt(psi') (f o psi)`` from K_theta onto K_{theta o psi}."""
    domain = _space(theta, quad_points)
    codomain = _space(blaschke_compose(theta, pre=psi, tol=tol), quad_points)
    z = codomain.nodes
    vals = kernels.tm_table(theta.zeros, psi(z)) * sqrt_derivative(psi, z)
    U = UnitaryMap(codomain.project_samples(vals).T, domain, codomain)
    return _checked(U, tol, "change of variables")


def unitary_crofoot(theta: BlaschkeProduct, a, quad_points: Optional[int] = None,
                    tol: Tolerances = DEFAULT) -> UnitaryMap:
    """Multiplication by ``sqrt(1-|a|^2)/(1 - conj(a) theta)`` onto K_{phi_a o theta}."""
    a = complex(a)
    if not abs(a) < 1:
        raise InvalidInput("Crofoot parameter needs |a| < 1")
    domain = _space(theta, quad_points)
    codomain = _space(blaschke_compose(theta, post=phi(a), tol=tol), quad_points)
    z = codomain.nodes
    mult = np.sqrt(1 - abs(a) ** 2) / (1 - np.conj(a) * theta(z))
    vals = kernels.tm_table(theta.zeros, z) * mult
    U = UnitaryMap(codomain.project_samples(vals).T, domain, codomain)
    return _checked(U, tol, "Crofoot")


def unitary_sharp(theta: BlaschkeProduct, quad_points: Optional[int] = None,
                  tol: Tolerances = DEFAULT) -> UnitaryMap:
    """The linear unitary ``JC`` from K_theta onto K_{theta#}.

    J sends ``e_k`` to the basis function ``e_k#`` of the reflected product and
    conjugates coefficients, so JC has matrix ``conj(M)``.
    """
    domain = _space(theta, quad_points)
    codomain = _space(blaschke_sharp(theta), domain.quad_points)
    U = UnitaryMap(conjugation_matrix(domain).conj(), domain, codomain)
    return _checked(U, tol, "sharp")


def identity_map(space: ModelSpace) -> UnitaryMap:
    return UnitaryMap(np.eye(space.dim, dtype=complex), space, space)


def certificate_unitary(theta1: BlaschkeProduct, cert: Certificate,
                        quad_points: Optional[int] = None,
                        tol: Tolerances = DEFAULT) -> Tuple[UnitaryMap, BlaschkeProduct]:
    """Unitary from K_theta1 onto K_theta2 for ``theta1 = post o theta2' o pre``.

    Steps: change of variables by ``pre^-1``, Crofoot with the disk part of
    ``post^-1``, its rotation (no change of coordinates), then ``JC`` when
    the certificate is sharp.  Returns the map and the realised theta2.
    """
    U = identity_map(_space(theta1, quad_points))
    cur = theta1
    pre_inv = mobius_inverse(cert.pre)
    if not (pre_inv.a == 0 and pre_inv.eta == 1):
        step = unitary_cov(cur, pre_inv, quad_points, tol)
        U, cur = U.then(step), step.codomain.theta
    post_inv = mobius_inverse(cert.post)
    if post_inv.a != 0:
        step = unitary_crofoot(cur, post_inv.a, quad_points, tol)
        U, cur = U.then(step), step.codomain.theta
    if post_inv.eta != 1:
        cur = BlaschkeProduct(post_inv.eta * cur.constant, cur.zeros)
        U = UnitaryMap(U.matrix, U.domain, U.codomain.with_theta(cur))
    if cert.sharp:
        step = unitary_sharp(cur, U.codomain.quad_points, tol)
        U = UnitaryMap(step.matrix @ U.matrix, U.domain, step.codomain)
        cur = step.codomain.theta
    return _checked(U, tol, "certificate"), cur


def verify_spatial_iso(U: UnitaryMap, tol: Tolerances = DEFAULT) -> float:
    """Largest membership residual of the spanning families moved both ways."""
    fwd = max(tto_membership(U.codomain, U.transport(B.matrix), tol)
              for B in tto_basis(U.domain, tol))
    Uh = U.matrix.conj().T
    back = max(tto_membership(U.domain, Uh @ B.matrix @ U.matrix, tol)
               for B in tto_basis(U.codomain, tol))
    return float(max(fwd, back))


def onto(U: UnitaryMap, theta2: BlaschkeProduct, tol: Tolerances = DEFAULT) -> UnitaryMap:
    """Re-express the codomain coordinates in the basis of ``theta2``'s zero list."""
    target = _space(theta2, U.codomain.quad_points)
    G = basis_change(U.codomain, target)
    return UnitaryMap(G @ U.matrix, U.domain, target)


def decide_spatial_iso(theta1: BlaschkeProduct, theta2: BlaschkeProduct,
                       tol: Tolerances = DEFAULT) -> Optional[Certificate]:
    """Certificate for ``T_theta1 ~ T_theta2``, or None.

    A returned certificate has passed both the orbit residual and the
    transport check of its unitary.
    """
    found = decide_orbit(theta1, theta2, tol)
    cert = None
    if found is not None:
        cert = Certificate(found[0], found[1], False)
    else:
        found = decide_orbit(theta1, blaschke_sharp(theta2), tol)
        if found is not None:
            cert = Certificate(found[0], found[1], True)
    if cert is None:
        return None
    U, _ = certificate_unitary(theta1, cert, tol=tol)
    residual = verify_spatial_iso(U, tol)
    if residual >= tol.membership:
        raise NumericalFailure(f"orbit certificate found but transport residual {residual:.2e}")
    return cert


def iso_diagnostics(theta1: BlaschkeProduct, theta2: BlaschkeProduct,
                    tol: Tolerances = DEFAULT) -> Dict[str, object]:
    """Invariants explaining a negative decision."""
    inv1 = orbit_invariants(theta1, tol)
    inv2 = orbit_invariants(theta2, tol)
    out: Dict[str, object] = {
        "order": [theta1.order, theta2.order],
        "critical_distances_theta1": inv1,
        "critical_distances_theta2": inv2,
    }
    if theta1.order != theta2.order:
        out["mismatch"] = "order"
    elif len(inv1) == len(inv2):
        out["max_invariant_gap"] = max((abs(x - y) for x, y in zip(inv1, inv2)), default=0.0)
    return out


def certificate_residual(theta1: BlaschkeProduct, theta2: BlaschkeProduct,
                         cert: Certificate, tol: Tolerances = DEFAULT) -> Dict[str, float]:
    """Orbit residual and, when it passes, the transport residual."""
    orbit = verify_certificate(theta1, theta2, cert, tol)
    out = {"orbit_residual": orbit}
    if orbit < tol.certificate:
        U, _ = certificate_unitary(theta1, cert, tol=tol)
        out["transport_residual"] = verify_spatial_iso(U, tol)
    return out


__all__ = [
    "UnitaryMap", "sqrt_derivative", "unitary_cov", "unitary_crofoot", "unitary_sharp",
    "identity_map", "certificate_unitary", "verify_spatial_iso", "onto",
    "decide_spatial_iso", "iso_diagnostics", "certificate_residual",
]
