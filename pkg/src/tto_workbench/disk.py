"""Disk automorphisms, finite Blaschke products and hyperbolic geometry.

Conventions: a disk automorphism is stored as ``(eta, a)`` and acts by
``z -> eta (z - a) / (1 - conj(a) z)``; a Blaschke product is a unimodular
constant times the product of those factors over its zeros (with
repetition).  ``decide_orbit`` answers whether ``B1 = psi1 o B2 o psi2`` for
some automorphisms and returns the pair when it does.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .config import DEFAULT, Tolerances
from .exceptions import InvalidInput, NumericalFailure


def _c(z) -> complex:
    return complex(z)


# ---------------------------------------------------------------------------
# Mobius transforms
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class MobiusTransform:
    eta: complex = 1 + 0j
    a: complex = 0j

    def __post_init__(self):
        eta, a = _c(self.eta), _c(self.a)
        if not abs(abs(eta) - 1.0) < DEFAULT.unimodular:
            raise InvalidInput(f"eta must be unimodular, got |eta|={abs(eta)!r}")
        if not abs(a) < 1.0:
            raise InvalidInput(f"|a| must be < 1, got {abs(a)!r}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "a", a)

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1 + 0j, 0j)

    @classmethod
    def rotation(cls, eta) -> "MobiusTransform":
        return cls(eta, 0j)

    @property
    def is_rotation(self) -> bool:
        return self.a == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex) if not np.isscalar(z) else _c(z)
        return self.eta * (z - self.a) / (1 - self.a.conjugate() * z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex) if not np.isscalar(z) else _c(z)
        return self.eta * (1 - abs(self.a) ** 2) / (1 - self.a.conjugate() * z) ** 2

    def matrix(self) -> np.ndarray:
        """2x2 matrix ``[[A, B], [C, D]]`` with psi(z) = (Az + B)/(Cz + D)."""
        eta, a = self.eta, self.a
        return np.array([[eta, -eta * a], [-a.conjugate(), 1.0]], dtype=complex)


def mobius_from_matrix(m: np.ndarray, tol: float = 1e-6) -> Optional[MobiusTransform]:
    """Read a linear fractional map back as a disk automorphism.

    Returns None when the map does not preserve the disk (to ``tol``).
    """
    A, B, C, D = (complex(x) for x in np.asarray(m, dtype=complex).ravel())
    scale = max(abs(A), abs(B), abs(C), abs(D))
    if scale == 0 or abs(D) < 1e-14 * scale:
        return None
    eta, b, c = A / D, B / D, C / D
    a = -c.conjugate()
    if abs(abs(eta) - 1.0) > tol or abs(a) >= 1.0:
        return None
    if abs(b + eta * a) > tol:
        return None
    return MobiusTransform(eta / abs(eta), a)


def mobius_eval(psi: MobiusTransform, z) -> complex:
    return psi(z)


def mobius_compose(psi1: MobiusTransform, psi2: MobiusTransform) -> MobiusTransform:
    """The automorphism ``z -> psi1(psi2(z))``."""
    out = mobius_from_matrix(psi1.matrix() @ psi2.matrix(), tol=1e-8)
    if out is None:  # cannot happen for valid inputs
        raise NumericalFailure("composition left Aut(D)")
    return out


def mobius_inverse(psi: MobiusTransform) -> MobiusTransform:
    return MobiusTransform(psi.eta.conjugate(), -psi.eta * psi.a)


def phi(a) -> MobiusTransform:
    """The involution-free factor ``(z - a)/(1 - conj(a) z)``."""
    return MobiusTransform(1 + 0j, a)


# ---------------------------------------------------------------------------
# Blaschke products
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class BlaschkeProduct:
    constant: complex
    zeros: Tuple[complex, ...]

    def __post_init__(self):
        const = _c(self.constant)
        zeros = tuple(_c(z) for z in self.zeros)
        if not zeros:
            raise InvalidInput("a Blaschke product needs at least one zero")
        if not abs(abs(const) - 1.0) < DEFAULT.unimodular:
            raise InvalidInput(f"constant must be unimodular, got |c|={abs(const)!r}")
        if any(not abs(z) < 1.0 for z in zeros):
            raise InvalidInput("every zero must lie in the open unit disk")
        object.__setattr__(self, "constant", const)
        object.__setattr__(self, "zeros", zeros)

    @classmethod
    def from_zeros(cls, zeros: Sequence, constant=1 + 0j) -> "BlaschkeProduct":
        return cls(constant, tuple(zeros))

    @classmethod
    def power(cls, n: int, constant=1 + 0j) -> "BlaschkeProduct":
        """``constant * z**n``."""
        return cls(constant, (0j,) * n)

    @property
    def order(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        if np.isscalar(z):
            return complex(kernels.blaschke_grid(self.zeros, self.constant, np.array([z]))[0])
        return kernels.blaschke_grid(self.zeros, self.constant, z)

    def derivative(self, z):
        if np.isscalar(z):
            _, d = kernels.blaschke_grid(self.zeros, self.constant, np.array([z]), True)
            return complex(d[0])
        return kernels.blaschke_grid(self.zeros, self.constant, z, True)[1]

    def as_mobius(self) -> MobiusTransform:
        if self.order != 1:
            raise InvalidInput("only order-1 products are automorphisms")
        return MobiusTransform(self.constant, self.zeros[0])

    def numerator_denominator(self) -> Tuple[np.ndarray, np.ndarray]:
        """Polynomials ``c prod(z - a)`` and ``prod(1 - conj(a) z)``, highest first."""
        num = self.constant * np.poly(np.array(self.zeros))
        den = np.array([1.0 + 0j])
        for a in self.zeros:
            den = np.polymul(den, np.array([-a.conjugate(), 1.0]))
        return num, den


def blaschke_eval(B: BlaschkeProduct, z, with_derivative: bool = False):
    if with_derivative:
        return B(z), B.derivative(z)
    return B(z)


def blaschke_sharp(B: BlaschkeProduct) -> BlaschkeProduct:
    """``B#(z) = conj(B(conj z))``."""
    return BlaschkeProduct(B.constant.conjugate(), tuple(z.conjugate() for z in B.zeros))


def _match_constant(zeros, target_value: complex, at: complex, tol: float) -> complex:
    base = complex(kernels.blaschke_grid(zeros, 1.0, np.array([at]))[0])
    const = target_value / base
    if abs(abs(const) - 1.0) > tol:
        raise NumericalFailure(f"recovered constant is not unimodular: |c|={abs(const)!r}")
    return const / abs(const)


def blaschke_compose(B: BlaschkeProduct,
                     pre: Optional[MobiusTransform] = None,
                     post: Optional[MobiusTransform] = None,
                     tol: Tolerances = DEFAULT) -> BlaschkeProduct:
    """The Blaschke product ``post o B o pre``."""
    if pre is None and post is None:
        raise InvalidInput("need at least one of pre/post")
    probe = 1 + 0j
    if pre is not None:
        inv = mobius_inverse(pre)
        zeros = [inv(a) for a in B.zeros]
        value = B(pre(probe))
        B = BlaschkeProduct(_match_constant(zeros, value, probe, tol.unimodular), zeros)
    if post is not None:
        if post.a == 0:
            return BlaschkeProduct(post.eta * B.constant, B.zeros)
        zeros = level_set(B, post.a, tol)
        value = post(B(probe))
        B = BlaschkeProduct(_match_constant(zeros, value, probe, tol.unimodular), zeros)
    return B


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------

def _validate_cluster(poly: np.ndarray, members: Sequence[complex], rel_tol: float
                      ) -> Optional[complex]:
    """Centre of an m-fold root of ``poly`` near ``members``, or None.

    The mean is polished by Newton on the (m-1)th derivative, where an m-fold
    root is simple.  The cluster is accepted when every derivative of order
    below m vanishes there to ``rel_tol`` relative to its absolute-coefficient
    bound.
    """
    m = len(members)
    p = complex(sum(members) / m)
    f = np.polyder(poly, m - 1) if m > 1 else poly
    df = np.polyder(f)
    for _ in range(8):
        d = np.polyval(df, p)
        if d == 0:
            break
        step = np.polyval(f, p) / d
        if not abs(step) < 0.1:
            return None
        p = p - step
        if abs(step) < 1e-17:
            break
    for j in range(m):
        dj = np.polyder(poly, j) if j else poly
        # coefficient scale, not |dj|(|p|): near 0 the latter is itself rounding noise
        bound = np.sum(np.abs(dj))
        if abs(np.polyval(dj, p)) > rel_tol * bound:
            return None
    return complex(p)


def _split_largest_gap(idx: List[int], pts: List[complex]) -> List[List[int]]:
    """Cut the longest edge of the minimum spanning tree of ``pts[idx]``."""
    in_tree, rest, edges = [idx[0]], list(idx[1:]), []
    while rest:
        d, i, j = min((abs(pts[i] - pts[j]), i, j) for i in in_tree for j in rest)
        edges.append((d, i, j))
        in_tree.append(j)
        rest.remove(j)
    cut = max(edges)
    adj = {i: set() for i in idx}
    for e in edges:
        if e is not cut:
            adj[e[1]].add(e[2])
            adj[e[2]].add(e[1])
    side, stack = {idx[0]}, [idx[0]]
    while stack:
        for k in adj[stack.pop()]:
            if k not in side:
                side.add(k)
                stack.append(k)
    return [[i for i in idx if i in side], [i for i in idx if i not in side]]


def _resolve_multiple_roots(poly: np.ndarray, roots: Sequence[complex],
                            tol: Tolerances = DEFAULT,
                            accept: Optional[Callable[[complex], bool]] = None
                            ) -> List[complex]:
    """Replace each numerically split multiple root by its polished centre.

    Companion eigenvalues split an m-fold root by about eps**(1/m) times a
    conditioning factor, which for m >= 3 can exceed any sensible fixed
    distance.  Candidate clusters are the single-linkage components at
    ``tol.cluster_link``; a candidate that fails ``_validate_cluster`` is
    split at its widest gap and retried.  ``accept`` can veto a centre, e.g.
    when it misses the caller's residual bound.
    """
    pts = [complex(r) for r in roots]
    out = list(pts)
    comps, seen = [], set()
    for i in range(len(pts)):
        if i in seen:
            continue
        comp, stack = [], [i]
        seen.add(i)
        while stack:
            k = stack.pop()
            comp.append(k)
            for j in range(len(pts)):
                if j not in seen and abs(pts[j] - pts[k]) < tol.cluster_link:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    while comps:
        idx = comps.pop()
        if len(idx) == 1:
            continue
        centre = _validate_cluster(poly, [pts[i] for i in idx], tol.multiplicity)
        if centre is not None and accept is not None and not accept(centre):
            centre = None
        if centre is None:
            comps.extend(_split_largest_gap(idx, pts))
        else:
            for i in idx:
                out[i] = centre
    return out


def level_set(B: BlaschkeProduct, w, tol: Tolerances = DEFAULT) -> List[complex]:
    """All n solutions of ``B(z) = w`` (with multiplicity)."""
    w = complex(w)
    if abs(w) > 1.0 + 1e-12:
        raise InvalidInput("level_set needs |w| <= 1")
    num, den = B.numerator_denominator()
    poly = np.polysub(num, w * den)
    roots = [complex(z) for z in np.roots(poly)]
    on_circle = abs(abs(w) - 1.0) < 1e-12
    if not on_circle:
        roots = _resolve_multiple_roots(
            poly, roots, tol, accept=lambda c: abs(B(c) - w) <= tol.root_residual)
    polished = []
    for z in roots:
        if roots.count(z) == 1:
            der = B.derivative(z)
            if abs(der) > 1e-8:
                z = z - (B(z) - w) / der
        if on_circle:
            z = z / abs(z)
        polished.append(complex(z))
    if len(polished) != B.order:
        raise NumericalFailure(f"expected {B.order} roots, found {len(polished)}")
    worst = max(abs(B(z) - w) for z in polished)
    if worst > tol.root_residual:
        raise NumericalFailure(f"level-set residual {worst:.3e} exceeds tolerance")
    return polished


def critical_points(B: BlaschkeProduct, tol: Tolerances = DEFAULT) -> List[complex]:
    """The n - 1 zeros of B' in the open disk, with multiplicity."""
    n = B.order
    if n < 2:
        raise InvalidInput("critical points need order >= 2")
    num, den = B.numerator_denominator()
    top = np.polysub(np.polymul(np.polyder(num), den), np.polymul(num, np.polyder(den)))
    # negligible leading terms only carry roots near infinity
    big = np.max(np.abs(top))
    lead = np.argmax(np.abs(top) > 1e-14 * big)
    top = top[lead:]
    inside = [complex(z) for z in np.roots(top) if abs(z) < 1.0]
    if len(inside) != n - 1:
        raise NumericalFailure(f"expected {n - 1} critical points in D, found {len(inside)}")
    resolved = _resolve_multiple_roots(top, inside, tol)
    zeros = np.asarray(B.zeros, dtype=complex)
    out = []
    for z in resolved:
        if resolved.count(z) == 1:
            z = _polish_simple_critical(zeros, z)
        out.append(complex(z))
    return _snap_to_multiple_zeros(B, out)


def _snap_to_multiple_zeros(B: BlaschkeProduct, crit: List[complex],
                            radius: float = 1e-6) -> List[complex]:
    """An m-fold zero of B is an exact (m-1)-fold critical point; use it verbatim.

    The log-derivative polish cannot reach these points (they sit on its
    poles), and near the circle the raw polynomial roots are off by ~1e-9.
    """
    crit = list(crit)
    for a, m in distinct_with_multiplicity(list(B.zeros), 1e-12):
        if m < 2:
            continue
        near = sorted(range(len(crit)), key=lambda i: abs(crit[i] - a))[:m - 1]
        if all(abs(crit[i] - a) < radius for i in near):
            # merged clusters move as a whole so multiplicities survive
            moved = {crit[i] for i in near}
            crit = [complex(a) if z in moved else z for z in crit]
    return crit


def _polish_simple_critical(zeros: np.ndarray, z: complex, iters: int = 8) -> complex:
    """Newton on B'/B = sum (1-|a|^2)/((z-a)(1-conj(a) z)).

    The sum is far better conditioned than the expanded numerator of B'
    near the boundary.  Points at a zero of B are left unchanged.
    """
    w = 1.0 - np.abs(zeros) ** 2
    ac = np.conj(zeros)
    start = z
    for _ in range(iters):
        p = (z - zeros) * (1.0 - ac * z)
        if np.min(np.abs(p)) < 1e-12:
            return start
        g = np.sum(w / p)
        dg = -np.sum(w * (1.0 - 2.0 * ac * z + ac * zeros) / p ** 2)
        if dg == 0:
            break
        step = g / dg
        if not abs(step) < 1e-2:
            return start
        z = z - step
        if abs(step) < 1e-16:
            break
    return complex(z) if abs(z) < 1.0 else start


def distinct_with_multiplicity(points: Sequence[complex], tol: float = 1e-9
                               ) -> List[Tuple[complex, int]]:
    """Group already-merged points; sorted by (real, imag)."""
    out: List[List] = []
    for p in sorted(points, key=lambda z: (z.real, z.imag)):
        for entry in out:
            if abs(entry[0] - p) <= tol:
                entry[1] += 1
                break
        else:
            out.append([p, 1])
    return [(p, m) for p, m in out]


# ---------------------------------------------------------------------------
# Hyperbolic geometry
# ---------------------------------------------------------------------------

def hyperbolic_distance(z1, z2) -> float:
    """Poincare distance with ``rho(0, z) = log((1 + |z|)/(1 - |z|))``."""
    z1, z2 = sorted((complex(z1), complex(z2)), key=lambda z: (z.real, z.imag))
    r = abs(z2 - z1) / abs(1 - z1.conjugate() * z2)
    return 2.0 * math.atanh(min(r, 1.0))


def schwarz_pick_invariant(B: BlaschkeProduct, lam) -> float:
    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise InvalidInput("lambda must lie in the open disk")
    val, der = B(lam), B.derivative(lam)
    return abs(der) * (1 - abs(lam) ** 2) / (1 - abs(val) ** 2)


def hyperbolic_centroid(points: Sequence[complex], tol: Tolerances = DEFAULT) -> complex:
    """Minimiser of the sum of squared hyperbolic distances.

    Damped gradient iteration.  At the current centre c the points are moved
    to the origin by phi_c and their logarithms (rays of hyperbolic length
    rho) are averaged.  The averaged log is scaled by the damping
    ``tol.centroid_step`` over the mean curvature factor
    ``(1 + rho coth rho) / 4``; far-apart points make the objective stiff
    transversally and an unscaled step oscillates.  A step that does not
    decrease the objective is halved.
    """
    pts = [complex(p) for p in points]

    def objective(c):
        return sum(hyperbolic_distance(c, p) ** 2 for p in pts)

    c = sum(pts) / len(pts)
    value = objective(c)
    for _ in range(tol.centroid_iters):
        move = phi(c)
        logs, stiff = [], []
        for p in pts:
            w = move(p)
            r = abs(w)
            rho = hyperbolic_distance(0, w)
            logs.append(0j if r == 0 else rho * w / r)
            stiff.append(1.0 if rho < 1e-8 else rho / math.tanh(rho))
        v = sum(logs) / len(logs)
        length = abs(v)
        if length < 1e-12:
            return c
        scale = tol.centroid_step * 4.0 / (1.0 + sum(stiff) / len(stiff))
        back = mobius_inverse(move)
        for _ in range(40):
            step = scale * length
            cand = back(math.tanh(step / 2.0) * v / length)
            cand_value = objective(cand)
            if cand_value <= value * (1 + 1e-12):
                break
            scale *= 0.5
        else:
            return c
        c, value = cand, cand_value
    raise NumericalFailure("hyperbolic centroid did not converge")


def zn_equivalence_test(B: BlaschkeProduct, tol: Tolerances = DEFAULT,
                        geometry_tol: float = 1e-7) -> bool:
    """True iff T_{z^n} and T_B are spatially isomorphic (zero geometry test)."""
    n = B.order
    groups = distinct_with_multiplicity(list(B.zeros), tol=tol.cluster)
    if len(groups) == 1:
        return True
    if len(groups) != n:
        return False
    c = hyperbolic_centroid(B.zeros, tol)
    centred = [phi(c)(z) for z in B.zeros]
    radii = [abs(w) for w in centred]
    if max(radii) - min(radii) > geometry_tol * max(1.0, max(radii)):
        return False
    angles = sorted(cmath.phase(w) % (2 * math.pi) for w in centred)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    return max(abs(g - 2 * math.pi / n) for g in gaps) < geometry_tol


# ---------------------------------------------------------------------------
# Orbit decision
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Certificate:
    """Witness that ``theta1 = post o theta2' o pre``; theta2' is theta2# when sharp."""
    post: MobiusTransform
    pre: MobiusTransform
    sharp: bool = False


def verification_grid(tol: Tolerances = DEFAULT) -> np.ndarray:
    """Boundary points plus a fixed pseudo-random set of interior points."""
    m = tol.boundary_grid
    boundary = np.exp(2j * np.pi * np.arange(m) / m)
    rng = np.random.default_rng(20100801)
    r = 0.95 * np.sqrt(rng.random(tol.interior_samples))
    interior = r * np.exp(2j * np.pi * rng.random(tol.interior_samples))
    return np.concatenate([boundary, interior])


def orbit_residual(B1: BlaschkeProduct, B2: BlaschkeProduct,
                   post: MobiusTransform, pre: MobiusTransform,
                   tol: Tolerances = DEFAULT) -> float:
    """Sup-norm of ``B1 - post o B2 o pre`` on the verification grid."""
    z = verification_grid(tol)
    return float(np.max(np.abs(B1(z) - post(B2(pre(z))))))


def verify_certificate(B1: BlaschkeProduct, B2: BlaschkeProduct, cert: Certificate,
                       tol: Tolerances = DEFAULT) -> float:
    target = blaschke_sharp(B2) if cert.sharp else B2
    return orbit_residual(B1, target, cert.post, cert.pre, tol)


def _normalise_power(B: BlaschkeProduct, p: complex) -> Tuple[MobiusTransform, MobiusTransform, complex]:
    """For B with a single critical point p: ``phi_b o B o phi_p^{-1} = eta z^n``."""
    b = B(p)
    inner = mobius_inverse(phi(p))
    outer = phi(b)
    eta = complex(outer(B(inner(1 + 0j))))
    return outer, inner, eta / abs(eta)


def _fit_three_point(u: Sequence[complex], v: Sequence[complex]) -> Optional[MobiusTransform]:
    """Linear fractional map with u_k -> v_k, returned only if it is in Aut(D)."""
    def to_01inf(p):
        p1, p2, p3 = p
        return np.array([[p2 - p3, -p1 * (p2 - p3)], [p2 - p1, -p3 * (p2 - p1)]], dtype=complex)

    mu, mv = to_01inf(u), to_01inf(v)
    if abs(np.linalg.det(mu)) < 1e-14 or abs(np.linalg.det(mv)) < 1e-14:
        return None
    mv_inv = np.array([[mv[1, 1], -mv[0, 1]], [-mv[1, 0], mv[0, 0]]])
    return mobius_from_matrix(mv_inv @ mu)


def _pick_spread_points(B: BlaschkeProduct, count: int = 3, candidates: int = 24) -> np.ndarray:
    w = np.exp(2j * np.pi * (np.arange(candidates) + 0.5) / candidates)
    vals = B(w)
    chosen = [0]
    while len(chosen) < count:
        dist = np.min(np.abs(vals[:, None] - vals[chosen][None, :]), axis=1)
        chosen.append(int(np.argmax(dist)))
    return w[chosen]


def decide_orbit(B1: BlaschkeProduct, B2: BlaschkeProduct, tol: Tolerances = DEFAULT
                 ) -> Optional[Tuple[MobiusTransform, MobiusTransform]]:
    """Find ``(psi1, psi2)`` with ``B1 = psi1 o B2 o psi2``, or None.

    Critical points of B1 are the psi2-preimages of those of B2, so a pair of
    distinct critical points of B1 pins psi2 down once matched with an
    equidistant pair of B2; psi1 then follows from three value pairs.  Every
    returned pair has passed ``orbit_residual < tol.certificate``.
    """
    n = B1.order
    if B2.order != n:
        return None

    def accept(post, pre):
        if orbit_residual(B1, B2, post, pre, tol) < tol.certificate:
            return post, pre
        return None

    if n == 1:
        post = mobius_compose(B1.as_mobius(), mobius_inverse(B2.as_mobius()))
        return accept(post, MobiusTransform.identity())

    crit1 = distinct_with_multiplicity(critical_points(B1, tol))
    crit2 = distinct_with_multiplicity(critical_points(B2, tol))
    if sorted(m for _, m in crit1) != sorted(m for _, m in crit2):
        return None

    if len(crit1) == 1:
        out1, in1, eta1 = _normalise_power(B1, crit1[0][0])
        out2, in2, eta2 = _normalise_power(B2, crit2[0][0])
        # B_k = out_k^-1 o (eta_k z^n) o in_k^-1 and eta1 z^n = (eta1/eta2) eta2 z^n
        post = mobius_compose(mobius_inverse(out1),
                              mobius_compose(MobiusTransform.rotation(eta1 / eta2), out2))
        pre = mobius_compose(in2, mobius_inverse(in1))
        return accept(post, pre)

    # anchor on the most separated pair: close pairs give an ill-conditioned rotation
    pairs = [(i, j) for i in range(len(crit1)) for j in range(i + 1, len(crit1))]
    i, j = max(pairs, key=lambda ij: hyperbolic_distance(crit1[ij[0]][0], crit1[ij[1]][0]))
    (c, mc), (c2, mc2) = crit1[i], crit1[j]
    target = hyperbolic_distance(c, c2)
    for d, md in crit2:
        for d2, md2 in crit2:
            if d2 == d or md != mc or md2 != mc2:
                continue
            if abs(hyperbolic_distance(d, d2) - target) > 1e-6 * max(1.0, target):
                continue
            wc, wd = phi(c)(c2), phi(d)(d2)
            rot = wd / wc
            pre = mobius_compose(mobius_inverse(phi(d)),
                                 mobius_compose(MobiusTransform.rotation(rot / abs(rot)), phi(c)))
            pre_inv = mobius_inverse(pre)
            w = _pick_spread_points(B2)
            post = _fit_three_point(B2(w), B1(pre_inv(w)))
            if post is None:
                continue
            found = accept(post, pre)
            if found is not None:
                return found
    return None


def orbit_invariants(B: BlaschkeProduct, tol: Tolerances = DEFAULT) -> List[float]:
    """Sorted pairwise hyperbolic distances between critical points."""
    if B.order < 2:
        return []
    crit = critical_points(B, tol)
    return sorted(hyperbolic_distance(p, q) for i, p in enumerate(crit) for q in crit[i + 1:])


__all__ = [
    "MobiusTransform", "mobius_from_matrix", "mobius_eval", "mobius_compose",
    "mobius_inverse", "phi", "BlaschkeProduct", "blaschke_eval", "blaschke_sharp",
    "blaschke_compose", "level_set", "critical_points", "distinct_with_multiplicity",
    "hyperbolic_distance", "schwarz_pick_invariant", "hyperbolic_centroid",
    "zn_equivalence_test", "Certificate", "verification_grid", "orbit_residual",
    "verify_certificate", "decide_orbit", "orbit_invariants",
]
