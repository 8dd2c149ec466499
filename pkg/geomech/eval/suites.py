"""Property suites run by the ``check`` command.

Each suite returns a list of ``PropertyResult``. Random draws come from
``np.random.SeedSequence(seed)`` so a report is reproducible from its seed.
"""
import logging

import numpy as np
from tqdm import tqdm

from geomech.errors import OptionError
from geomech.eval.eval_utils import CheckReport, exact, measure
from geomech.field.canonical import omega
from geomech.field.dynamics import field_dynamics, field_el, field_legendre, hamilton_field_equations
from geomech.field.hodge import basis, double_star_sign, hodge_star
from geomech.field.residual import PhaseSection, gauge_shift, pde_residual
from geomech.geometry.affine import (
    ComplementChoice,
    SubspacePair,
    check_symplecto,
    complement_independence,
    minus_r_vector,
    random_complement,
    random_phase_point,
    random_subspace_pair,
    theorem1_iso,
)
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
from geomech.geometry.points import CotangentOfBundlePoint, J1PhasePoint, J1VPoint, TTMPoint, TTStarMPoint, VJ1Point
from geomech.mechanics.action import action_variation
from geomech.mechanics.dynamics import euler_lagrange, hamiltonian_dynamics, lagrangian_dynamics
from geomech.mechanics.legendre import GeneratingFamilyReport, hamiltonize
from geomech.mechanics.model import MechModel
from geomech.mechanics.statics import StaticsModel, constitutive_set, equilibrium_test, in_constitutive_set
from geomech.models.catalog import catalog, get_entry, golden_mismatches
from geomech.models.electromagnetics import alpha2_vector, em_generating_family_check, em_model, scalar_model
from geomech.numerics.midpoint import MidpointStepper, integrate_phase, step_jacobian, symplecticity_defect
from geomech.numerics.newton import NewtonConfig
from geomech.symbolic import CompiledExprs, diff, equation_text, is_zero, parse, rename

log = logging.getLogger(__name__)


def _rngs(seed, trials):
    for child in np.random.SeedSequence(seed).spawn(trials):
        yield np.random.default_rng(child)


def _ints(rng, shape):
    return rng.integers(-9, 10, size=shape)


def _phase_point(rng, m, k):
    return J1PhasePoint(_ints(rng, m), _ints(rng, k), _ints(rng, (m, k)), _ints(rng, (m, k)), _ints(rng, (m, k, m)))


def _slope(sizes, errors):
    """Order of convergence from a log-log fit of errors against the number of nodes."""
    return -float(np.polyfit(np.log(sizes), np.log(errors), 1)[0])


# bundles


def bundles(trials, seed):
    """Coordinate formulas and commutation relations of the canonical maps on integer inputs."""
    kappa_ok = alpha_ok = beta_ok = triple_ok = field_ok = reduction_ok = True
    pairing_gap = field_gap = 0.0
    for rng in _rngs(seed, trials):
        n = int(rng.integers(1, 5))
        Y = TTMPoint(*_ints(rng, (4, n)))
        kappa_ok &= kappa(kappa(Y)) == Y
        x, p, xdot, pdot = _ints(rng, (4, n))
        X = TTStarMPoint(x, p, xdot, pdot)
        alpha_ok &= alpha_mech(X) == CotangentOfBundlePoint(x, xdot, pdot, p) and alpha_mech_inverse(alpha_mech(X)) == X
        beta_ok &= beta_mech(X) == CotangentOfBundlePoint(x, p, -pdot, xdot)
        triple_ok &= r_map(alpha_mech(X)) == beta_mech(X)
        Y = TTMPoint(x, _ints(rng, n), xdot, _ints(rng, n))
        pairing_gap = max(pairing_gap, abs(tangent_pairing(X, Y) - covector_pairing(alpha_mech(X), kappa(Y))))

        m, k = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        P = _phase_point(rng, m, k)
        trace = np.array([sum(P.pjet[l, d, l] for l in range(m)) for d in range(k)])
        field_ok &= alpha_field(P).piy.tolist() == trace.tolist() and r_field(alpha_field(P)) == beta_field(P)
        V = J1VPoint(P.x, P.y, _ints(rng, k), P.yjet, _ints(rng, (m, k)))
        vj = VJ1Point(P.x, P.y, P.yjet, V.dy, V.dyjet)
        field_ok &= kappa_field(vj) == V
        field_gap = max(field_gap, abs(field_pairing(P, V) - vertical_pairing(alpha_field(P), kappa_field_inverse(V))))
        P1 = _phase_point(rng, 1, k)
        reduction_ok &= vplus_to_mech(alpha_field(P1)) == alpha_mech(field_to_mech(P1))
    return [
        exact("kappa_involution", kappa_ok),
        exact("alpha_mech_formula", alpha_ok),
        exact("beta_mech_formula", beta_ok),
        exact("beta_is_r_after_alpha", triple_ok),
        measure("tangent_pairing_compatibility", 1e-12, lambda: (pairing_gap, {})),
        exact("field_maps_formula", field_ok),
        measure("field_pairing_compatibility", 1e-12, lambda: (field_gap, {})),
        exact("m1_reduction", reduction_ok),
    ]


# theorem1


def theorem1(trials, seed):
    """Complement independence and symplecticity of P V^dagger_W ~ T^*V, with the W = 0 and W = V cases."""
    report = complement_independence(trials, max_dim=6, seed=seed)
    details = {"instances": len(report.records)}
    results = [
        measure("complement_independence", 1e-10, lambda: (report.max_difference, details)),
        measure("symplectic_pullback", 1e-10, lambda: (report.max_symplectic_deviation, details)),
    ]
    rng = np.random.default_rng(seed)
    for label, dimW in (("w_zero", 0), ("w_full", 4)):
        sp = random_subspace_pair(4, dimW, rng)
        u = random_complement(sp, rng)
        results.append(measure(f"symplectic_pullback_{label}", 1e-12,
                               lambda sp=sp, u=u: (check_symplecto(sp, u, trials, seed).max_deviation, {"dimW": dimW})))
    results.append(measure("identity_w_zero", 1e-14, lambda: _w_zero_gap(trials, rng)))
    results.append(measure("minus_r_w_full", 1e-10, lambda: _w_full_gap(trials, rng)))
    return results


def _w_zero_gap(trials, rng):
    """W = 0: the isomorphism is the identity of T^*V for any complement."""
    gap = 0.0
    for _ in range(trials):
        sp = SubspacePair(4, np.zeros((4, 0)))
        pt = random_phase_point(sp, rng)
        v, alpha = theorem1_iso(sp, random_complement(sp, rng), pt)
        gap = max(gap, np.max(np.abs(v - pt.q)), np.max(np.abs(alpha - pt.xi_q)))
    return gap, {"dimV": 4}


def _w_full_gap(trials, rng):
    """W = V: -R_V after the isomorphism returns (a, xi_a) in the coordinates of basisW."""
    gap = 0.0
    for _ in range(trials):
        for sp in (SubspacePair(4, np.eye(4)), random_subspace_pair(4, 4, rng)):
            pt = random_phase_point(sp, rng)
            a, xi = minus_r_vector(*theorem1_iso(sp, ComplementChoice(np.zeros((4, 0))), pt))
            gap = max(gap, np.max(np.abs(sp.basisW.T @ a - pt.a)), np.max(np.abs(xi - sp.basisW @ pt.xi_a)))
    return gap, {"dimV": 4}


# mechanics


def _hamiltonian_model(m):
    return m.with_hamiltonian(hamiltonize(m))


def _energy_drift():
    ho = _hamiltonian_model(get_entry("harmonic_oscillator").model)
    traj = integrate_phase(hamiltonian_dynamics(ho), [1.0, 0.0], (0.0, 100.0), 0.01, NewtonConfig(tol=1e-10))
    return traj.energy_drift(ho.H), {"steps": len(traj.times) - 1}


def _triple_residuals(trials, seed):
    m = _hamiltonian_model(get_entry("harmonic_oscillator").model)
    hamilton = hamiltonian_dynamics(m)
    names = m.coords + m.velocities
    momenta = CompiledExprs([diff(m.L, v) for v in m.velocities], names)
    forces = CompiledExprs([diff(m.L, x) for x in m.coords], names)
    worst = 0.0
    for rng in _rngs(seed, trials):
        point = rng.uniform(-1.0, 1.0, 2 * m.n)
        values = dict(zip(names, point))
        values |= dict(zip(m.momenta, momenta(point))) | dict(zip(m.momentum_rates, forces(point)))
        worst = max(worst, float(np.max(np.abs(hamilton.residual(values)))))
    return worst, {"tuples": trials}


def _triple_trajectories():
    m = _hamiltonian_model(get_entry("harmonic_oscillator").model)
    cfg = NewtonConfig(tol=1e-12)
    lag = integrate_phase(lagrangian_dynamics(m), [1.0, 0.0], (0.0, 10.0), 0.01, cfg)
    ham = integrate_phase(hamiltonian_dynamics(m), [1.0, 0.0], (0.0, 10.0), 0.01, cfg)
    return float(np.max(np.abs(lag.states - ham.states))), {"steps": len(lag.times) - 1}


def _variation_slope():
    m = get_entry("harmonic_oscillator").model
    sizes, errors = [64, 128, 256, 512], []
    for N in sizes:
        t = np.linspace(0.0, 1.0, N)
        lhs, rhs = action_variation(m, t, np.cos(t) + 0.1 * t ** 2, np.sin(np.pi * t) + t)
        errors.append(abs(lhs - rhs))
    return _slope(sizes, errors), {"nodes": sizes, "errors": errors}


def _singular_constraint():
    system = lagrangian_dynamics(get_entry("singular_two_velocity").model)
    traj = integrate_phase(system, [0.0, 0.0, 0.5, -0.5], (0.0, 10.0), 0.01)
    return max(traj.constraint_residuals), {"steps": len(traj.times) - 1}


def _midpoint_symplectic(trials, seed):
    pendulum = _hamiltonian_model(MechModel(["q"], L=parse("0.5*v_q^2 + cos(q)"), name="pendulum"))
    stepper = MidpointStepper(hamiltonian_dynamics(pendulum), NewtonConfig(tol=1e-13))
    worst = 0.0
    for rng in _rngs(seed, trials):
        J = step_jacobian(stepper, rng.uniform(-1.0, 1.0, 2), 0.1)
        worst = max(worst, symplecticity_defect(J))
    return worst, {"h": 0.1}


def _statics(seed):
    s = StaticsModel(["q1", "q2"], U=parse("0.5*q1^2 + 0.25*q2^4"))
    q = np.array([0.3, -0.7])
    phi = constitutive_set(s, q)
    ok = in_constitutive_set(s, q, phi) and equilibrium_test(s, q, phi=phi, seed=seed).passed
    ok = ok and not equilibrium_test(s, q, phi=phi + np.array([1.0, 0.0]), seed=seed).passed
    return ok


def mechanics(trials, seed):
    singular = hamiltonize(get_entry("singular_two_velocity").model)
    return [
        measure("energy_drift", 1e-8, _energy_drift),
        measure("triple_residuals", 1e-9, lambda: _triple_residuals(trials, seed)),
        measure("triple_trajectories", 1e-6, _triple_trajectories),
        measure("variation_convergence_order", 1.9, _variation_slope, at_least=True),
        measure("singular_constraint_preserved", 1e-9, _singular_constraint),
        exact("singular_generating_family", isinstance(singular, GeneratingFamilyReport)),
        measure("midpoint_symplectic", 1e-8, lambda: _midpoint_symplectic(trials, seed)),
        exact("regular_statics_equilibrium", _statics(seed)),
    ]


# field


def _grid(m, n, y_fn, p_fn=None, low=0.0, high=1.0):
    spacing = (high - low) / (n - 1)
    return PhaseSection.sample([low] * m, [spacing] * m, (n,) * m, y_fn, p_fn)


def _harmonic():
    fm = scalar_model(2)
    section = _grid(2, 17, lambda x1, x2: [x1 ** 2 - x2 ** 2], lambda x1, x2: [[2 * x1], [-2 * x2]])
    el, ham = pde_residual(fm, section, "el"), pde_residual(fm, section, "hamilton")
    return el, ham


def _laplace_convergence():
    fm = scalar_model(2)
    sizes, errors = [17, 33, 65], []
    for n in sizes:
        section = _grid(2, n, lambda x1, x2: [np.exp(x1) * np.sin(x2)])
        errors.append(pde_residual(fm, section, "el").max_abs)
    return _slope(sizes, errors), {"nodes": sizes, "errors": errors}


def _m1_degeneration():
    fm = get_entry("td_oscillator").model
    ho = MechModel(["q"], L=parse("0.5*v_q^2 - 0.5*q^2"), H=parse("0.5*p_q^2 + 0.5*q^2"))
    names, key = fm.mechanics_names(), ho.vartable.sort_key

    def texts(equations):
        return [equation_text(rename(e, names), key) for e in equations]

    return (texts(field_el(fm)) == [equation_text(e, key) for e in euler_lagrange(ho)]
            and texts(field_dynamics(fm).equations) == lagrangian_dynamics(ho).text()
            and texts(hamilton_field_equations(fm).equations) == hamiltonian_dynamics(ho).text())


def _double_star(trials, seed):
    worst = 0.0
    metrics = [np.eye(2), np.eye(3), np.diag([2.0, 0.5, 3.0]), np.diag([-1.0, 1.0, 1.0, 1.0])]
    for rng in _rngs(seed, trials):
        metric = metrics[int(rng.integers(len(metrics)))]
        m = metric.shape[0]
        degree = int(rng.integers(0, m + 1))
        form = rng.uniform(-1.0, 1.0, len(basis(m, degree)))
        twice = hodge_star(metric, hodge_star(metric, form, degree), m - degree)
        worst = max(worst, float(np.max(np.abs(twice - double_star_sign(metric, degree) * form))))
    return worst, {}


def _omega_antisymmetric(trials, seed):
    fm = scalar_model(3)
    worst = 0.0
    for rng in _rngs(seed, trials):
        u = (rng.uniform(size=3), rng.uniform(size=1), rng.uniform(size=(3, 1)))
        w = (rng.uniform(size=3), rng.uniform(size=1), rng.uniform(size=(3, 1)))
        worst = max(worst, float(np.max(np.abs(omega(fm, u, w) + omega(fm, w, u)))))
    return worst, {}


def field(trials, seed):
    el, ham = _harmonic()
    laplace = equation_text(field_el(scalar_model(2))[0], scalar_model(2).vartable.sort_key)
    return [
        exact("laplace_equation", laplace == "y_11 + y_22 = 0", {"derived": laplace}),
        measure("harmonic_el_residual", 1e-10, lambda: (el.max_abs, {})),
        measure("lagrangian_hamiltonian_agreement", 1e-8,
                lambda: (max(el.max_abs, ham.max_abs), {"el": el.max_abs, "hamilton": ham.max_abs})),
        measure("laplace_convergence_order", 1.9, _laplace_convergence, at_least=True),
        exact("m1_degeneration", _m1_degeneration()),
        measure("double_hodge_star", 1e-12, lambda: _double_star(trials, seed)),
        measure("omega_antisymmetric", 1e-15, lambda: _omega_antisymmetric(trials, seed)),
    ]


# models


def _potential(m, seed):
    """Smooth vector potential and gauge function for the electromagnetic models."""
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.5, 1.5, (m, 3))

    def y_fn(*x):
        return [c[a, 0] * np.sin(x[a] + c[a, 1]) * x[(a + 1) % m] + c[a, 2] * x[(a + 2) % m] ** 2 for a in range(m)]

    def chi(*x):
        return np.sin(x[0]) * np.cos(x[-1]) + np.prod(x, axis=0)

    return y_fn, chi


def _gauge(m, seed):
    fm = em_model(m)
    y_fn, chi = _potential(m, seed)
    n = 13 if m == 2 else 9
    section = _grid(m, n, y_fn, low=-1.0, high=1.0)
    shifted = gauge_shift(section, chi(*np.moveaxis(section.coordinates(), -1, 0)))
    before, after = pde_residual(fm, section), pde_residual(fm, shifted)
    return float(np.max(np.abs(before.per_node - after.per_node))), {"nodes": n}


def _constant_field():
    section = _grid(2, 9, lambda x1, x2: [-0.5 * x2 + 0.0 * x1, 0.5 * x1 + 0.0 * x2])
    return pde_residual(em_model(2), section).max_abs, {}


def _alpha2(trials, seed):
    fm = get_entry("vector_linear2").model
    ok = True
    for rng in _rngs(seed, trials):
        P = _phase_point(rng, fm.m, fm.k)
        image = alpha_field(P)
        trace, pijet = alpha2_vector(P.p, P.pjet)
        ok &= np.array_equal(image.piy, trace) and np.array_equal(image.pijet, pijet)
    return ok


def _family(m, trials, seed):
    report = em_generating_family_check(m, samples=trials, seed=seed)
    deviation = report.on_image_gradient if report.passed else float("inf")
    return deviation, report.to_dict()


def models(trials, seed):
    results = []
    for entry in catalog():
        mismatches = golden_mismatches(entry)
        results.append(exact(f"golden_{entry.name}", not mismatches,
                             {key: {"expected": e, "derived": d} for key, (e, d) in mismatches.items()}))
    for m in (2, 3):
        symmetric = field_legendre(em_model(m)).symmetric
        results.append(exact(f"em{m}_symmetric_momentum", all(is_zero(e) for e in symmetric.values())))
        results.append(measure(f"em{m}_gauge_covariance", 1e-8, lambda m=m: _gauge(m, seed)))
        results.append(measure(f"em{m}_generating_family", 1e-10, lambda m=m: _family(m, trials, seed)))
    results.append(measure("em2_constant_field", 1e-10, _constant_field))
    results.append(exact("alpha2_vector_formula", _alpha2(trials, seed)))
    return results


SUITES = {"bundles": bundles, "theorem1": theorem1, "mechanics": mechanics, "field": field, "models": models}


def run_suites(suite="all", trials=100, seed=0, progress=False):
    """Run one suite by name, or every suite with ``all``.

    Returns:
        CheckReport: Per-property worst-case deviations.
    """
    if suite != "all" and suite not in SUITES:
        raise OptionError(f"Unknown suite {suite}, expected one of all, {', '.join(SUITES)}")
    names = list(SUITES) if suite == "all" else [suite]
    report = CheckReport(seed, trials)
    for name in tqdm(names, disable=not progress, desc="check"):
        report.suites[name] = SUITES[name](trials, seed)
        failed = [r.name for r in report.suites[name] if not r.passed]
        log.info("suite %s: %d properties, %d failed", name, len(report.suites[name]), len(failed))
    return report
