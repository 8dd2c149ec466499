import numpy as np
import pytest

from geomech.errors import RankError
from geomech.geometry.affine import (
    AffineDualElement,
    ComplementChoice,
    PhasePoint,
    SubspacePair,
    affine_dual_projection,
    check_symplecto,
    complement_independence,
    minus_r_vector,
    phase_of_avbundle,
    random_complement,
    random_phase_point,
    random_section,
    random_subspace_pair,
    theorem1_iso,
)
from geomech.numerics.finite_diff import fd_gradient
from geomech.symbolic import Const, Var, evaluate, parse, sum_exprs


def test_dependent_basis_is_rejected():
    with pytest.raises(RankError):
        SubspacePair(3, np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))


def test_complement_must_span():
    sp = SubspacePair(2, np.array([[1.0], [0.0]]))
    with pytest.raises(RankError):
        ComplementChoice(np.array([[2.0], [0.0]])).validate(sp)
    with pytest.raises(RankError):
        ComplementChoice(np.eye(2)).validate(sp)


def test_affine_dual_element():
    phi = AffineDualElement([1.0, -2.0], 3.0)
    assert phi([2.0, 1.0]) == 3.0
    np.testing.assert_array_equal(affine_dual_projection(phi), [1.0, -2.0])
    with pytest.raises(ValueError):
        AffineDualElement([np.inf], 0.0)


def test_zero_subspace_is_the_cotangent_bundle(rng):
    sp = SubspacePair(3, np.zeros((3, 0)))
    u = ComplementChoice(np.eye(3))
    pt = random_phase_point(sp, rng)
    v, alpha = theorem1_iso(sp, u, pt)
    np.testing.assert_allclose(v, pt.q, atol=1e-14)
    np.testing.assert_allclose(alpha, pt.xi_q, atol=1e-14)


def test_full_subspace_is_minus_r(rng):
    """With W = V the phase point (a, xi_a) goes to (-xi_a, a), which is -R_V of T*V*."""
    sp = SubspacePair(2, np.eye(2))
    u = ComplementChoice(np.zeros((2, 0)))
    pt = PhasePoint(np.zeros(0), np.array([1.0, 2.0]), np.zeros(0), np.array([3.0, 4.0]))
    v, alpha = theorem1_iso(sp, u, pt)
    np.testing.assert_allclose(v, [-3.0, -4.0])
    np.testing.assert_allclose(alpha, [1.0, 2.0])
    back = minus_r_vector(v, alpha)
    np.testing.assert_allclose(back[0], pt.a)
    np.testing.assert_allclose(back[1], pt.xi_a)


@pytest.mark.parametrize("dimV, dimW", [(1, 0), (1, 1), (3, 1), (4, 2), (5, 5)])
def test_symplectic_pullback(dimV, dimW, rng):
    sp = random_subspace_pair(dimV, dimW, rng)
    report = check_symplecto(sp, random_complement(sp, rng), trials=20, seed=1)
    assert report.max_deviation <= 1e-10
    assert report.to_dict()["trials"] == 20


def test_image_does_not_depend_on_the_complement(rng):
    sp = random_subspace_pair(4, 2, rng)
    section = random_section(sp, rng)
    q, a = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
    images = []
    for _ in range(3):
        u = random_complement(sp, rng)
        images.append(np.concatenate(theorem1_iso(sp, u, section.phase_point(sp, u, q, a))))
    np.testing.assert_allclose(images[1], images[0], atol=1e-10)
    np.testing.assert_allclose(images[2], images[0], atol=1e-10)


def test_complement_independence_report():
    report = complement_independence(25, max_dim=5, seed=3)
    assert len(report.records) == 25
    assert report.max_difference <= 1e-10
    assert report.max_symplectic_deviation <= 1e-10


def test_check_symplecto_needs_trials(rng):
    sp = random_subspace_pair(2, 1, rng)
    with pytest.raises(ValueError):
        check_symplecto(sp, random_complement(sp, rng), trials=0)


def test_phase_of_avbundle():
    np.testing.assert_allclose(phase_of_avbundle(parse("m1^2 + 3*m2"), [1.0, 2.0]), [1.0, 2.0, 2.0, 3.0])


def _random_quadratic(rng, n):
    names = [f"m{i + 1}" for i in range(n)]
    A, b = rng.normal(size=(n, n)), rng.normal(size=n)
    terms = [Const(A[i, j]) * Var(names[i]) * Var(names[j]) for i in range(n) for j in range(n)]
    terms += [Const(b[i]) * Var(names[i]) for i in range(n)]
    return sum_exprs(terms), names


@pytest.mark.parametrize("shift", [1.0, -7.5, 1e3])
def test_phase_of_avbundle_ignores_constant_shifts(rng, shift):
    F, _ = _random_quadratic(rng, 3)
    point = rng.normal(size=3)
    np.testing.assert_allclose(phase_of_avbundle(F + Const(shift), point), phase_of_avbundle(F, point), rtol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_phase_of_avbundle_matches_finite_differences(rng, n):
    F, names = _random_quadratic(rng, n)
    for _ in range(5):
        point = rng.normal(size=n)
        phase = phase_of_avbundle(F, point)
        np.testing.assert_array_equal(phase[:n], point)
        expected = fd_gradient(lambda m: evaluate(F, dict(zip(names, m))), point)
        np.testing.assert_allclose(phase[n:], expected, rtol=0, atol=1e-6)


def test_phase_of_avbundle_names():
    phase = phase_of_avbundle(parse("a*b"), [2.0, 5.0], names=["a", "b"])
    np.testing.assert_allclose(phase, [2.0, 5.0, 5.0, 2.0])
