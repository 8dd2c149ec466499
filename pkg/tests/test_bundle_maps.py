import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from geomech.errors import BaseMismatchError, ShapeMismatchError
from geomech.geometry.bundle_maps import (
    alpha_field,
    alpha_mech,
    alpha_mech_inverse,
    beta_field,
    beta_mech,
    covector_pairing,
    field_pairing,
    field_to_mech,
    kappa,
    kappa_field,
    kappa_field_inverse,
    r_field,
    r_map,
    tangent_pairing,
    vertical_pairing,
    vplus_to_mech,
)
from geomech.geometry.forms import canonical_form, linear_map_matrix, tangent_lift_form
from geomech.geometry.points import CotangentOfBundlePoint, J1PhasePoint, J1VPoint, TTMPoint, TTStarMPoint, VJ1Point


def blocks(count):
    """``count`` integer vectors of a shared length 1..4."""
    return st.integers(1, 4).flatmap(
        lambda n: st.tuples(*[arrays(np.int64, n, elements=st.integers(-9, 9)) for _ in range(count)]))


def _phase_point(rng, m, k):
    ints = lambda shape: rng.integers(-9, 10, size=shape)
    return J1PhasePoint(ints(m), ints(k), ints((m, k)), ints((m, k)), ints((m, k, m)))


class TestPoints:
    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            TTMPoint([1.0, 2.0], [1.0], [0.0, 0.0], [0.0, 0.0])

    def test_flat_layout(self):
        P = J1PhasePoint([0.0], [1.0, 2.0], [[3.0, 4.0]], [[5.0, 6.0]], np.arange(2).reshape(1, 2, 1))
        np.testing.assert_array_equal(P.to_flat(), [0, 1, 2, 3, 4, 5, 6, 0, 1])
        assert J1PhasePoint.from_flat(P.to_flat(), P.shapes()) == P

    def test_points_are_immutable(self):
        X = TTStarMPoint([1.0], [2.0], [3.0], [4.0])
        with pytest.raises(ValueError):
            X.x[0] = 5.0


class TestMechanicsMaps:
    @given(blocks(4))
    def test_kappa_is_an_involution(self, values):
        Y = TTMPoint(*values)
        assert kappa(kappa(Y)) == Y
        assert kappa(Y) == TTMPoint(Y.x, Y.dx, Y.xdot, Y.dxdot)

    @given(blocks(4))
    def test_alpha_and_beta_formulas(self, values):
        x, p, xdot, pdot = values
        X = TTStarMPoint(x, p, xdot, pdot)
        assert alpha_mech(X) == CotangentOfBundlePoint(x, xdot, pdot, p)
        assert beta_mech(X) == CotangentOfBundlePoint(x, p, -pdot, xdot)
        assert alpha_mech_inverse(alpha_mech(X)) == X

    @given(blocks(4))
    def test_beta_is_r_after_alpha(self, values):
        X = TTStarMPoint(*values)
        assert r_map(alpha_mech(X)) == beta_mech(X)

    @given(blocks(6))
    def test_pairing_matches_alpha_and_kappa(self, values):
        x, p, xdot, pdot, a, c = values
        X = TTStarMPoint(x, p, xdot, pdot)
        Y = TTMPoint(x, a, xdot, c)
        assert tangent_pairing(X, Y) == covector_pairing(alpha_mech(X), kappa(Y))
        assert tangent_pairing(X, Y) == float(pdot @ a + p @ c)

    def test_pairing_needs_a_common_base(self):
        X = TTStarMPoint([1.0], [0.0], [0.0], [0.0])
        with pytest.raises(BaseMismatchError):
            tangent_pairing(X, TTMPoint([2.0], [0.0], [0.0], [0.0]))
        with pytest.raises(BaseMismatchError):
            tangent_pairing(X, TTMPoint([1.0], [0.0], [1.0], [0.0]))

    def test_maps_are_symplectic(self, rng):
        """alpha pulls the canonical form of T*TM back to the lifted form of TT*M."""
        n = 3
        shapes = [(n,)] * 4
        J = linear_map_matrix(alpha_mech, TTStarMPoint, shapes)
        for _ in range(10):
            u, v = rng.uniform(-1, 1, 4 * n), rng.uniform(-1, 1, 4 * n)
            assert canonical_form(J @ u, J @ v) == pytest.approx(tangent_lift_form(u, v, n), abs=1e-12)


class TestFieldMaps:
    @pytest.mark.parametrize("m, k", [(1, 1), (2, 1), (2, 2), (3, 2)])
    def test_alpha_traces_the_momentum_jets(self, rng, m, k):
        P = _phase_point(rng, m, k)
        image = alpha_field(P)
        trace = [sum(P.pjet[l, d, l] for l in range(m)) for d in range(k)]
        np.testing.assert_array_equal(image.piy, trace)
        np.testing.assert_array_equal(image.pijet, P.p)
        assert r_field(image) == beta_field(P)

    def test_kappa_field(self, rng):
        P = _phase_point(rng, 2, 3)
        vj = VJ1Point(P.x, P.y, P.yjet, rng.integers(-9, 10, 3), rng.integers(-9, 10, (2, 3)))
        assert kappa_field_inverse(kappa_field(vj)) == vj
        assert kappa_field(vj).dy.tolist() == vj.dy.tolist()

    def test_field_pairing_matches_vertical_pairing(self, rng):
        for _ in range(20):
            P = _phase_point(rng, 2, 2)
            V = J1VPoint(P.x, P.y, rng.integers(-9, 10, 2), P.yjet, rng.integers(-9, 10, (2, 2)))
            assert field_pairing(P, V) == vertical_pairing(alpha_field(P), kappa_field_inverse(V))

    def test_wrong_point_type(self, rng):
        with pytest.raises(ShapeMismatchError):
            alpha_field(TTStarMPoint([1.0], [0.0], [0.0], [0.0]))

    def test_one_dimensional_base_reduces_to_mechanics(self, rng):
        for k in (1, 2, 3):
            P = _phase_point(rng, 1, k)
            assert vplus_to_mech(alpha_field(P)) == alpha_mech(field_to_mech(P))

    def test_reduction_needs_one_dimensional_base(self, rng):
        with pytest.raises(ShapeMismatchError):
            field_to_mech(_phase_point(rng, 2, 1))
