import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tto_workbench import (BlaschkeProduct, Certificate, InvalidInput, MobiusTransform,
                           blaschke_compose, blaschke_eval, blaschke_sharp, critical_points,
                           decide_orbit, hyperbolic_centroid, hyperbolic_distance, level_set,
                           mobius_compose, mobius_eval, mobius_from_matrix, mobius_inverse,
                           orbit_invariants, orbit_residual, phi, schwarz_pick_invariant,
                           verify_certificate, zn_equivalence_test)

from conftest import blaschke_products, disk_points, mobius_maps, separated

CIRCLE = np.exp(2j * np.pi * np.arange(64) / 64)

# frozen by the oracle (tests/oracles/make_oracles.py)
B4 = BlaschkeProduct(cmath.exp(0.7j), (0.5, 0.3j, -0.2 + 0.4j, 0.1 - 0.6j))
CRITICAL_B4 = [complex(0.2817489815756492, 0.06607634806064581),
               complex(-0.11392029453820028, 0.3486317518908563),
               complex(0.11554019374895079, -0.34975308308515135)]
LEVEL_B4_W = [complex(0.12304576382758473, 0.7619809249268265),
              complex(-0.6448639624819633, 0.24748563221655787),
              complex(0.11645203895510907, -0.8149573294680776),
              complex(0.7904280805620519, -0.04950439544520506)]
RHO_EXAMPLE = 1.4152670246215944
CRIT_DISTANCES_B4 = [0.9681730454717591, 1.0439190647607441, 1.5423853927411153]


def as_sorted(points):
    return sorted(points, key=lambda z: (round(z.real, 6), round(z.imag, 6)))


def close_sets(a, b, tol):
    a, b = as_sorted(a), as_sorted(b)
    return len(a) == len(b) and all(abs(x - y) < tol for x, y in zip(a, b))


class TestMobius:
    def test_identity(self):
        assert mobius_eval(MobiusTransform(1, 0), 0.3) == pytest.approx(0.3)

    def test_zero_at_a(self):
        assert abs(mobius_eval(MobiusTransform(1, 0.5), 0.5)) < 1e-15

    def test_rotated_boundary_value(self):
        assert mobius_eval(MobiusTransform(1j, 0.5), 1) == pytest.approx(1j)

    def test_compose_opposite_parameters_fixes_zero(self):
        r = mobius_compose(MobiusTransform(1, 0.5), MobiusTransform(1, -0.5))
        assert abs(r(0)) < 1e-12
        direct = MobiusTransform(1, 0.5)(MobiusTransform(1, -0.5)(CIRCLE))
        assert np.max(np.abs(r(CIRCLE) - direct)) < 1e-12

    def test_inverse_round_trip(self):
        psi = MobiusTransform(1, 0.5)
        r = mobius_compose(psi, mobius_inverse(psi))
        assert np.max(np.abs(r(CIRCLE) - CIRCLE)) < 1e-12

    def test_inverse_rotation(self):
        inv = mobius_inverse(MobiusTransform(1j, 0))
        assert inv.eta == pytest.approx(-1j) and abs(inv.a) < 1e-15

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidInput):
            MobiusTransform(1, 1.2)
        with pytest.raises(InvalidInput):
            MobiusTransform(2, 0.1)

    @given(mobius_maps())
    def test_circle_to_circle(self, psi):
        assert np.max(np.abs(np.abs(psi(CIRCLE)) - 1)) < 1e-10

    @given(mobius_maps(), mobius_maps())
    def test_compose_matches_pointwise(self, p1, p2):
        r = mobius_compose(p1, p2)
        assert np.max(np.abs(r(CIRCLE) - p1(p2(CIRCLE)))) < 1e-12

    @given(mobius_maps())
    def test_matrix_round_trip(self, psi):
        back = mobius_from_matrix(2.5j * psi.matrix())
        assert np.max(np.abs(back(CIRCLE) - psi(CIRCLE))) < 1e-12


class TestBlaschke:
    def test_power_values(self):
        v, d = blaschke_eval(BlaschkeProduct.power(2), 0.5, with_derivative=True)
        assert v == pytest.approx(0.25) and d == pytest.approx(1.0)

    def test_derivative_at_origin(self):
        B = BlaschkeProduct(-1, (0, 0.5))
        assert blaschke_eval(B, 0, True)[1] == pytest.approx(0.5, abs=1e-14)

    def test_sharp(self):
        assert blaschke_sharp(BlaschkeProduct.power(2)).zeros == (0j, 0j)
        assert blaschke_sharp(BlaschkeProduct(1, (0.5j,))).zeros == (-0.5j,)

    @given(blaschke_products())
    def test_sharp_involution_and_formula(self, B):
        S = blaschke_sharp(B)
        assert blaschke_sharp(S).zeros == B.zeros
        assert blaschke_sharp(S).constant == B.constant
        z = 0.3 - 0.2j
        assert S(z) == pytest.approx(np.conj(B(np.conj(z))), abs=1e-14)

    @given(blaschke_products())
    def test_unimodular_on_circle(self, B):
        assert np.max(np.abs(np.abs(B(CIRCLE)) - 1)) < 1e-10

    def test_compose_pre(self):
        C = blaschke_compose(BlaschkeProduct.power(2), pre=MobiusTransform(1, 0.5))
        assert np.allclose(C.zeros, [0.5, 0.5])

    def test_compose_post(self):
        post = MobiusTransform(1, 0.25)
        C = blaschke_compose(BlaschkeProduct.power(2), post=post)
        assert close_sets(C.zeros, [0.5, -0.5], 1e-10)
        assert np.max(np.abs(C(CIRCLE) - post(CIRCLE ** 2))) < 1e-12

    def test_compose_needs_a_map(self):
        with pytest.raises(InvalidInput):
            blaschke_compose(BlaschkeProduct.power(2))

    @given(blaschke_products(), mobius_maps(), mobius_maps())
    def test_compose_pointwise(self, B, post, pre):
        C = blaschke_compose(B, pre=pre, post=post)
        assert np.max(np.abs(C(CIRCLE) - post(B(pre(CIRCLE))))) < 1e-9


class TestRoots:
    def test_level_set_trivial(self):
        assert close_sets(level_set(BlaschkeProduct.power(2), 0), [0, 0], 1e-12)
        assert close_sets(level_set(BlaschkeProduct.power(2), 1), [1, -1], 1e-12)

    def test_cube_roots_of_i(self):
        pts = level_set(BlaschkeProduct.power(3), 1j)
        expect = [cmath.exp(1j * (math.pi / 6 + 2 * math.pi * k / 3)) for k in range(3)]
        assert close_sets(pts, expect, 1e-12)
        assert all(abs(z ** 3 - 1j) < 1e-10 and abs(abs(z) - 1) < 1e-15 for z in pts)

    def test_level_set_oracle(self):
        assert close_sets(level_set(B4, 0.3 + 0.1j), LEVEL_B4_W, 1e-12)

    @given(blaschke_products(), disk_points(0.95))
    def test_level_set_round_trip(self, B, w):
        pts = level_set(B, w)
        assert len(pts) == B.order
        assert max(abs(B(z) - w) for z in pts) < 1e-10

    def test_critical_points_examples(self):
        assert close_sets(critical_points(BlaschkeProduct.power(2)), [0], 1e-12)
        assert close_sets(critical_points(BlaschkeProduct.power(3)), [0, 0], 1e-12)
        assert close_sets(critical_points(BlaschkeProduct(1, (0.5, -0.5))), [0], 1e-12)

    def test_critical_points_oracle(self):
        assert close_sets(critical_points(B4), CRITICAL_B4, 1e-12)

    def test_multiple_critical_point_resolved(self):
        # z^4 composed with an automorphism: one critical point of multiplicity 3
        B = blaschke_compose(BlaschkeProduct.power(4), pre=MobiusTransform(1, 0.6 + 0.2j))
        pts = critical_points(B)
        assert len(pts) == 3
        assert max(abs(p - pts[0]) for p in pts) < 1e-9

    @given(blaschke_products(min_order=2))
    def test_critical_points_vanish_derivative(self, B):
        pts = critical_points(B)
        assert len(pts) == B.order - 1
        assert all(abs(p) < 1 for p in pts)


class TestHyperbolic:
    def test_examples(self):
        assert hyperbolic_distance(0, 0) == 0
        assert hyperbolic_distance(0, 0.5) == pytest.approx(math.log(3), abs=1e-15)
        psi = MobiusTransform(1, 0.3j)
        assert hyperbolic_distance(psi(0), psi(0.5)) == pytest.approx(math.log(3), abs=1e-12)
        assert hyperbolic_distance(0.1 + 0.2j, -0.5 + 0.3j) == pytest.approx(RHO_EXAMPLE,
                                                                            abs=1e-14)

    @given(disk_points(0.9), disk_points(0.9), disk_points(0.9), mobius_maps())
    def test_metric_and_invariance(self, a, b, c, psi):
        d = hyperbolic_distance
        assert d(a, b) == d(b, a)
        assert d(a, c) <= d(a, b) + d(b, c) + 1e-12
        assert abs(d(psi(a), psi(b)) - d(a, b)) < 1e-10

    def test_schwarz_pick_examples(self):
        assert schwarz_pick_invariant(BlaschkeProduct(1, (0,)), 0.4 + 0.1j) == pytest.approx(1)
        assert schwarz_pick_invariant(BlaschkeProduct.power(2), 0) == 0
        assert schwarz_pick_invariant(BlaschkeProduct.power(2), 0.5) == pytest.approx(0.8)

    @given(blaschke_products(), mobius_maps(), mobius_maps(), disk_points(0.6))
    def test_schwarz_pick_invariance(self, B, p1, p2, lam):
        C = blaschke_compose(B, pre=p2, post=p1)
        lhs = schwarz_pick_invariant(B, lam)
        rhs = schwarz_pick_invariant(C, mobius_inverse(p2)(lam))
        assert abs(lhs - rhs) < 1e-9

    def test_centroid_of_symmetric_configuration(self):
        pts = [0.4 * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        assert abs(hyperbolic_centroid(pts)) < 1e-10
        psi = MobiusTransform(1, 0.2)
        assert abs(hyperbolic_centroid([psi(p) for p in pts]) - psi(0)) < 1e-8


class TestZn:
    def test_examples(self):
        assert zn_equivalence_test(BlaschkeProduct.power(3))
        assert zn_equivalence_test(BlaschkeProduct(1, (0.5, 0.5, 0.5)))
        psi = MobiusTransform(1, 0.2)
        zs = [psi(0.4 * cmath.exp(2j * math.pi * k / 3)) for k in range(3)]
        assert zn_equivalence_test(BlaschkeProduct(1, tuple(zs)))
        assert not zn_equivalence_test(BlaschkeProduct(1, (0.1, 0.2, 0.3)))

    def test_agrees_with_orbit(self):
        for zeros in [(0.1, 0.2, 0.3), (0.5, 0.5, 0.5), (0.2j, -0.2j, 0.0)]:
            B = BlaschkeProduct(1, zeros)
            found = decide_orbit(BlaschkeProduct.power(3), B) is not None
            assert zn_equivalence_test(B) == found


class TestOrbit:
    def test_trivial(self):
        post, pre = decide_orbit(BlaschkeProduct.power(2), BlaschkeProduct.power(2))
        assert orbit_residual(BlaschkeProduct.power(2), BlaschkeProduct.power(2),
                              post, pre) < 1e-12

    def test_power_of_automorphism(self):
        B = BlaschkeProduct(1, (0.5, 0.5, 0.5))
        found = decide_orbit(BlaschkeProduct.power(3), B)
        assert found is not None
        assert orbit_residual(BlaschkeProduct.power(3), B, *found) < 1e-9

    def test_negative(self):
        assert decide_orbit(BlaschkeProduct.power(3), BlaschkeProduct(1, (0.1, 0.2, 0.3))) is None

    def test_order_mismatch(self):
        assert decide_orbit(BlaschkeProduct.power(3), BlaschkeProduct.power(2)) is None

    def test_order_one(self):
        found = decide_orbit(BlaschkeProduct(1j, (0.3,)), BlaschkeProduct(1, (-0.2j,)))
        assert found is not None

    @given(blaschke_products(min_order=2, max_order=5), mobius_maps(), mobius_maps())
    def test_constructed_orbit_members_found(self, B, p1, p2):
        assume(separated(B))
        C = blaschke_compose(B, pre=p2, post=p1)
        # zeros pressed against the circle push the grid residual past 1e-8
        assume(max(abs(z) for z in C.zeros) < 0.95)
        found = decide_orbit(C, B)
        assert found is not None
        assert verify_certificate(C, B, Certificate(found[0], found[1], False)) < 1e-8

    def test_invariants_oracle(self):
        assert np.allclose(orbit_invariants(B4), CRIT_DISTANCES_B4, atol=1e-10)

    @given(blaschke_products(min_order=3, max_order=4), mobius_maps(), mobius_maps())
    def test_invariants_are_invariant(self, B, p1, p2):
        C = blaschke_compose(B, pre=p2, post=p1)
        assert np.allclose(orbit_invariants(B), orbit_invariants(C), atol=1e-6)


def test_phi_vanishes_at_parameter():
    f = phi(0.3 - 0.4j)
    assert abs(f(0.3 - 0.4j)) < 1e-15
