import numpy as np
import pytest

from geomech.errors import (
    GridTooSmallError,
    MetricMissingError,
    ModelValidationError,
    OptionError,
    ShapeMismatchError,
)
from geomech.field.canonical import canonical_forms_eval, jdagger_eval, omega, theta
from geomech.field.dynamics import (
    field_dynamics,
    field_el,
    field_hamiltonize,
    field_legendre,
    hamilton_field_equations,
)
from geomech.field.hodge import basis, double_star_sign, hodge_star, permutation_sign
from geomech.field.model import FieldModel, FieldSample2
from geomech.field.residual import PhaseSection, gauge_shift, pde_residual
from geomech.mechanics.dynamics import euler_lagrange, lagrangian_dynamics
from geomech.mechanics.model import MechModel
from geomech.models.catalog import get_entry
from geomech.models.electromagnetics import em_model, scalar_model
from geomech.symbolic import equation_text, evaluate, is_zero, parse, rename, to_text


def _texts(fm, equations):
    return [equation_text(e, fm.vartable.sort_key) for e in equations]


def _section(m, n, y_fn, p_fn=None, low=0.0, high=1.0):
    spacing = (high - low) / (n - 1)
    return PhaseSection.sample([low] * m, [spacing] * m, (n,) * m, y_fn, p_fn)


class TestModel:
    def test_naming_schemes(self):
        compact = FieldModel(["x1", "x2"], ["y"], L=parse("y_1^2"))
        assert compact.jets == [["y_1", "y_2"]]
        assert compact.second_jet(0, 1, 0) == "y_12"
        assert compact.momentum_jet(1, 0, 0) == "p2_y_1"
        named = FieldModel(["x1", "x2"], ["y"], L=parse("y_d1^2"), scheme="file")
        assert named.second_jet(0, 0, 1) == "y_d1d2"
        assert named.momentum_jet(0, 0, 1) == "p1_y_d2"

    @pytest.mark.parametrize("kwargs", [
        {"base": [], "fiber": ["y"], "L": parse("1")},
        {"base": ["x"], "fiber": ["y"]},
        {"base": ["x"], "fiber": ["y"], "L": parse("y_1"), "scheme": "greek"},
        {"base": ["x"], "fiber": ["y"], "L": parse("z_1")},
        {"base": ["x1", "x2"], "fiber": ["y"], "L": parse("y"), "metric": [[1.0, 2.0], [0.0, 1.0]]},
        {"base": ["x1", "x2"], "fiber": ["y"], "L": parse("y"), "metric": [[1.0, 1.0], [1.0, 1.0]]},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ModelValidationError):
            FieldModel(**kwargs)

    def test_second_jets_must_be_symmetric(self):
        with pytest.raises(ShapeMismatchError):
            FieldSample2([0.0, 0.0], [1.0], [[1.0], [2.0]], [[[1.0], [2.0]], [[3.0], [4.0]]])

    def test_sample_values(self):
        fm = scalar_model(2)
        sample = FieldSample2([0.0, 1.0], [2.0], [[1.0], [2.0]], [[[3.0], [5.0]], [[5.0], [-3.0]]])
        assert evaluate(field_el(fm)[0], sample.values(fm)) == 0.0


class TestEquations:
    def test_scalar_laplace(self):
        fm = scalar_model(2)
        assert _texts(fm, field_el(fm)) == ["y_11 + y_22 = 0"]
        assert field_dynamics(fm).text() == ["p1_y - y_1 = 0", "p2_y - y_2 = 0", "p1_y_1 + p2_y_2 = 0"]
        assert hamilton_field_equations(fm).text() == field_dynamics(fm).text()

    def test_scalar_laplace_file_names(self):
        fm = scalar_model(2, scheme="file")
        assert _texts(fm, field_el(fm)) == ["y_d1d1 + y_d2d2 = 0"]

    def test_lorentzian_wave_equation(self):
        fm = scalar_model(2, metric=np.diag([-1.0, 1.0]))
        assert _texts(fm, field_el(fm)) == ["y_11 - y_22 = 0"]

    def test_one_dimensional_base_is_mechanics(self):
        fm = get_entry("td_oscillator").model
        ho = MechModel(["q"], L=parse("0.5*v_q^2 - 0.5*q^2"))
        names, key = fm.mechanics_names(), ho.vartable.sort_key
        assert names == {"q_1": "v_q", "q_11": "qddot", "p1_q": "p_q", "p1_q_1": "pdot_q"}
        assert [equation_text(rename(e, names), key) for e in field_el(fm)] == _texts(ho, euler_lagrange(ho))
        renamed = [equation_text(rename(e, names), key) for e in field_dynamics(fm).equations]
        assert renamed == lagrangian_dynamics(ho).text()

    def test_mechanics_names_need_one_dimensional_base(self):
        with pytest.raises(ShapeMismatchError):
            scalar_model(2).mechanics_names()

    def test_hamiltonize_scalar(self):
        result = field_hamiltonize(scalar_model(2))
        assert not result.singular
        assert to_text(result.H) == "0.5*p1_y^2 + 0.5*p2_y^2"

    def test_hamiltonize_electromagnetism_is_singular(self):
        fm = em_model(2)
        result = field_hamiltonize(fm)
        assert result.singular
        assert result.rank == 1
        assert _texts(fm, result.constraints) == ["p1_A1 = 0", "p1_A2 + p2_A1 = 0", "p2_A2 = 0"]

    def test_hamiltonize_needs_a_constant_hessian(self):
        fm = FieldModel(["x"], ["y"], L=parse("y*y_1^2"))
        with pytest.raises(ModelValidationError):
            field_hamiltonize(fm)

    @pytest.mark.parametrize("m", [2, 3])
    def test_symmetric_momentum_vanishes(self, m):
        leg = field_legendre(em_model(m))
        assert len(leg.symmetric) == m * (m - 1) // 2
        assert all(is_zero(e) for e in leg.symmetric.values())


class TestCanonicalForms:
    def test_theta_and_omega(self, rng):
        fm = scalar_model(3)
        at = (np.zeros(3), np.zeros(1), np.array([[1.0], [2.0], [3.0]]))
        u = (rng.uniform(size=3), np.array([2.0]), rng.uniform(size=(3, 1)))
        w = (rng.uniform(size=3), rng.uniform(size=1), rng.uniform(size=(3, 1)))
        np.testing.assert_allclose(theta(fm, at, u), [2.0, 4.0, 6.0])
        np.testing.assert_allclose(omega(fm, u, w), -omega(fm, w, u))
        th, om = canonical_forms_eval(fm, at, u, w)
        np.testing.assert_allclose(om, omega(fm, u, w))

    def test_bad_blocks(self):
        with pytest.raises(ShapeMismatchError):
            omega(scalar_model(2), (np.zeros(2), np.zeros(1), np.zeros(3)), (np.zeros(2), np.zeros(1), np.zeros(2)))

    def test_jdagger_split(self):
        value, phase = jdagger_eval(scalar_model(2), (1.0, [[1.0], [2.0]]), ([0.0], [[3.0], [4.0]]))
        assert value == 12.0
        np.testing.assert_array_equal(phase, [[1.0], [2.0]])


class TestHodge:
    def test_euclidean_plane(self):
        np.testing.assert_allclose(hodge_star(np.eye(2), [1.0, 0.0], 1), [0.0, 1.0])
        np.testing.assert_allclose(hodge_star(np.eye(2), [0.0, 1.0], 1), [-1.0, 0.0])
        np.testing.assert_allclose(hodge_star(np.eye(3), [1.0], 0), [1.0])

    @pytest.mark.parametrize("metric", [np.eye(3), np.diag([2.0, 0.5, 3.0]), np.diag([-1.0, 1.0, 1.0, 1.0])])
    def test_double_star(self, metric, rng):
        m = metric.shape[0]
        for degree in range(m + 1):
            form = rng.uniform(-1.0, 1.0, len(basis(m, degree)))
            twice = hodge_star(metric, hodge_star(metric, form, degree), m - degree)
            np.testing.assert_allclose(twice, double_star_sign(metric, degree) * form, atol=1e-12)

    def test_missing_metric(self):
        fm = FieldModel(["x1", "x2"], ["y"], L=parse("y_1^2"))
        with pytest.raises(MetricMissingError):
            hodge_star(fm, [1.0, 0.0], 1)

    def test_wrong_component_count(self):
        with pytest.raises(ShapeMismatchError):
            hodge_star(np.eye(3), [1.0, 0.0], 1)

    def test_permutation_sign(self):
        assert permutation_sign((0, 1, 2)) == 1
        assert permutation_sign((1, 0, 2)) == -1
        assert permutation_sign((1, 1)) == 0


class TestResidual:
    def test_harmonic_function(self):
        section = _section(2, 17, lambda x1, x2: [x1 ** 2 - x2 ** 2], lambda x1, x2: [[2 * x1], [-2 * x2]])
        fm = scalar_model(2)
        report = pde_residual(fm, section, "el")
        assert report.per_node.shape == (13, 13, 1)
        assert report.max_abs <= 1e-10
        assert pde_residual(fm, section, "hamilton").max_abs <= 1e-10
        assert pde_residual(fm, section, "dynamics").max_abs <= 1e-10

    def test_non_harmonic_function(self):
        section = _section(2, 17, lambda x1, x2: [x1 ** 2 + 0.0 * x2])
        assert pde_residual(scalar_model(2), section).max_abs == pytest.approx(2.0, abs=1e-9)

    def test_second_order_convergence(self):
        fm = scalar_model(2)
        sizes, errors = [17, 33, 65], []
        for n in sizes:
            errors.append(pde_residual(fm, _section(2, n, lambda x1, x2: [np.exp(x1) * np.sin(x2)])).max_abs)
        assert -np.polyfit(np.log(sizes), np.log(errors), 1)[0] >= 1.9

    def test_frame(self):
        section = _section(2, 9, lambda x1, x2: [x1 * x2])
        frame = pde_residual(scalar_model(2), section).to_frame()
        assert list(frame.columns) == ["x1", "x2", "eq1", "max_abs"]
        assert len(frame) == 25

    def test_grid_too_small(self):
        with pytest.raises(GridTooSmallError):
            pde_residual(scalar_model(2), _section(2, 4, lambda x1, x2: [x1]))

    def test_momenta_required(self):
        with pytest.raises(ShapeMismatchError):
            pde_residual(scalar_model(2), _section(2, 9, lambda x1, x2: [x1]), "dynamics")

    def test_model_and_grid_must_agree(self):
        with pytest.raises(ShapeMismatchError):
            pde_residual(em_model(2), _section(2, 9, lambda x1, x2: [x1]))

    def test_unknown_kind(self):
        with pytest.raises(OptionError):
            pde_residual(scalar_model(2), _section(2, 9, lambda x1, x2: [x1]), "weak")

    def test_constant_electromagnetic_field(self):
        section = _section(2, 9, lambda x1, x2: [-0.5 * x2 + 0.0 * x1, 0.5 * x1 + 0.0 * x2])
        assert pde_residual(em_model(2), section).max_abs <= 1e-10

    def test_gauge_covariance(self):
        fm = em_model(2)
        section = _section(2, 13, lambda x1, x2: [np.sin(x1) * x2, x1 ** 2 * np.cos(x2)], low=-1.0, high=1.0)
        x1, x2 = np.moveaxis(section.coordinates(), -1, 0)
        shifted = gauge_shift(section, np.sin(x1) * np.cos(x2) + x1 * x2)
        before, after = pde_residual(fm, section), pde_residual(fm, shifted)
        np.testing.assert_allclose(after.per_node, before.per_node, atol=1e-8)

    def test_gauge_shift_needs_a_one_form(self):
        section = _section(2, 9, lambda x1, x2: [x1])
        with pytest.raises(ShapeMismatchError):
            gauge_shift(section, np.zeros((9, 9)))
