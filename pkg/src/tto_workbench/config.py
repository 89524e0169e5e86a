"""Numerical tolerances shared across the workbench.

Every threshold used by a decision or a verification lives here so that the
CLI (``--tol``) and the ``TTO_TOL`` environment variable can override them in
one place.
"""

from __future__ import annotations

import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Tolerances:
    cluster: float = 1e-7          # given points closer than this coincide
    cluster_link: float = 0.05     # candidate radius for split multiple roots
    multiplicity: float = 1e-12     # relative derivative test for a multiple root
    root_residual: float = 1e-10   # |B(z) - w| accepted after polishing
    unimodular: float = 1e-8       # |eta| = 1, |constant| = 1 checks
    certificate: float = 1e-8      # sup-norm residual of an orbit certificate
    membership: float = 1e-7       # relative distance to span T_Theta
    unitary: float = 1e-9          # ||U*U - I||_F
    realization: float = 1e-7      # witness residual of a Realization
    input_check: float = 1e-8      # symmetric/unitary preconditions
    basis_radius: float = 0.3      # sample radius for the rank-one basis
    centroid_iters: int = 200
    centroid_step: float = 0.5
    boundary_grid: int = 256
    interior_samples: int = 32

    def with_tol(self, tol: float) -> "Tolerances":
        """Override the decision thresholds (membership, iso verification)."""
        return dataclasses.replace(self, membership=tol)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _from_env() -> Tolerances:
    raw = os.environ.get("TTO_TOL")
    if not raw:
        return Tolerances()
    return Tolerances().with_tol(float(raw))


DEFAULT = _from_env()


def min_quad_points(dim: int) -> int:
    return max(256, 8 * (2 * dim + 1))
