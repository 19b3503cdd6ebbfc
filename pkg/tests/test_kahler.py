"""Unit tests for the metric/symplectic pairings and observable flows."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projqm.hilbert import (commutator_expectation, lowering_operator,
                            momentum_operator, position_operator, sigma_x,
                            sigma_y, sigma_z, symmetrized_covariance, variance)
from projqm.kahler import (KahlerScale, ObservableFunction, TangentVector,
                           commutator_closure_residual,
                           derive_observable_scale_factor, eigen_extrema,
                           flow_transport, hamiltonian_vector_field,
                           horizontal_project, killing_residual, metric_eval,
                           poisson_bracket, random_horizontal,
                           riemannian_product, symplectic_eval,
                           uncertainty_audit)
from projqm.projective import fs_distance, project
from tests.conftest import hermitians, random_hermitian, random_unit, unit_vectors


class TestTangentVector:
    def test_horizontal_projection_kills_vertical_part(self, rng):
        base = project(random_unit(rng, 4))
        raw = random_unit(rng, 4) + (2.0 + 1.0j) * base.rep
        tv = horizontal_project(base, raw)
        assert abs(np.vdot(base.rep, tv.vec)) < 1e-12

    def test_random_horizontal_is_horizontal(self, rng):
        base = project(random_unit(rng, 5))
        tv = random_horizontal(base, rng)
        assert abs(np.vdot(base.rep, tv.vec)) < 1e-12

    def test_vertical_component_rejected(self, rng):
        base = project(random_unit(rng, 3))
        with pytest.raises(ValueError):
            TangentVector(base=base, vec=base.rep.copy())


class TestScaleFactor:
    def test_rederived_factor_is_two(self):
        assert abs(derive_observable_scale_factor() - 2.0) < 1e-12

    def test_enum_factors(self):
        assert KahlerScale.STATISTICAL.factor == 1.0
        assert KahlerScale.OBSERVABLE.factor == 2.0


@given(hermitians(), st.data())
@settings(max_examples=80, deadline=None)
def test_poisson_bracket_equals_commutator_expectation(op_f, data):
    dim = op_f.shape[0]
    op_g = data.draw(hermitians(dim=dim))
    psi = data.draw(unit_vectors(dim=dim))
    at = project(psi)
    pb = poisson_bracket(op_f, op_g, at)
    oracle = commutator_expectation(op_f, op_g, at.rep)
    assert abs(pb - oracle) < 1e-12
    assert abs(pb + poisson_bracket(op_g, op_f, at)) < 1e-14


@given(hermitians(), st.data())
@settings(max_examples=80, deadline=None)
def test_riemannian_product_is_twice_symmetrized_covariance(op_f, data):
    dim = op_f.shape[0]
    op_g = data.draw(hermitians(dim=dim))
    psi = data.draw(unit_vectors(dim=dim))
    at = project(psi)
    rr = riemannian_product(op_f, op_g, at)
    assert abs(rr - 2.0 * symmetrized_covariance(op_f, op_g, at.rep)) < 1e-12
    assert abs(riemannian_product(op_f, op_f, at) - 2.0 * variance(op_f, at.rep)) < 1e-12


def test_known_qubit_values():
    plus = project(np.array([1.0, 1.0]) / np.sqrt(2.0))
    plus_i = project(np.array([1.0, 1.0j]) / np.sqrt(2.0))
    # at +y the z/x bracket reaches its extremal value 2
    assert abs(poisson_bracket(sigma_z(), sigma_x(), plus_i) - 2.0) < 1e-12
    # at +x the z observable has unit variance, so (f, f) = 2
    assert abs(riemannian_product(sigma_z(), sigma_z(), plus) - 2.0) < 1e-12


def test_metric_product_vanishes_exactly_at_eigenstates():
    op = np.diag([0.5, -1.0, 2.0]).astype(np.complex128)
    for k in range(3):
        e = np.zeros(3, dtype=np.complex128)
        e[k] = 1.0
        assert riemannian_product(op, op, project(e)) == 0.0


class TestHamiltonianVectorField:
    def test_field_is_horizontal(self, rng):
        op = random_hermitian(rng, 5)
        at = project(random_unit(rng, 5))
        tv = hamiltonian_vector_field(op, at)
        assert abs(np.vdot(at.rep, tv.vec)) < 1e-12

    def test_identity_component_is_in_the_kernel(self, rng):
        op = random_hermitian(rng, 4)
        at = project(random_unit(rng, 4))
        base = hamiltonian_vector_field(op, at).vec
        for alpha in (-3.0, 0.25, 10.0):
            shifted = hamiltonian_vector_field(
                op + alpha * np.eye(4), at).vec
            assert np.max(np.abs(shifted - base)) < 1e-12 * (1.0 + abs(alpha))

    def test_vanishes_at_eigenstates(self):
        e0 = project(np.array([1.0, 0.0]))
        tv = hamiltonian_vector_field(sigma_z(), e0)
        assert np.max(np.abs(tv.vec)) == 0.0

    def test_pairings_reproduce_bracket_and_product(self, rng):
        op_f = random_hermitian(rng, 4)
        op_g = random_hermitian(rng, 4)
        at = project(random_unit(rng, 4))
        xf = hamiltonian_vector_field(op_f, at)
        xg = hamiltonian_vector_field(op_g, at)
        pb = symplectic_eval(KahlerScale.OBSERVABLE, xf, xg)
        assert abs(pb - poisson_bracket(op_f, op_g, at)) < 1e-12
        rr = metric_eval(KahlerScale.OBSERVABLE, xf, xg)
        assert abs(rr - riemannian_product(op_f, op_g, at)) < 1e-12

    def test_mismatched_base_rejected(self, rng):
        op = random_hermitian(rng, 3)
        x = hamiltonian_vector_field(op, project(random_unit(rng, 3)))
        y = hamiltonian_vector_field(op, project(random_unit(rng, 3)))
        with pytest.raises(ValueError):
            metric_eval(KahlerScale.STATISTICAL, x, y)


class TestObservableFunction:
    def test_value_and_field(self, rng):
        op = random_hermitian(rng, 4)
        f = ObservableFunction(op=op)
        at = project(random_unit(rng, 4))
        assert abs(f.value(at) - np.real(np.vdot(at.rep, op @ at.rep))) < 1e-14
        assert np.max(np.abs(f.field(at).vec
                             - hamiltonian_vector_field(op, at).vec)) == 0.0


class TestKillingResidual:
    def test_flow_transport_is_isometric(self, rng):
        op = random_hermitian(rng, 4)
        at = project(random_unit(rng, 4))
        res = killing_residual(op, at, eps=1e-3, rng=11)
        assert res < 1e-6

    def test_frozen_transport_control_is_orders_larger(self, rng):
        op = random_hermitian(rng, 4)
        at = project(random_unit(rng, 4))
        flow = killing_residual(op, at, eps=1e-3, rng=11, transport="flow")
        frozen = killing_residual(op, at, eps=1e-3, rng=11, transport="frozen")
        assert frozen > 1e3 * max(flow, 1e-12)

    def test_unknown_transport_rejected(self, rng):
        op = random_hermitian(rng, 2)
        with pytest.raises(ValueError):
            killing_residual(op, project(random_unit(rng, 2)), transport="parallel")


class TestFlowTransport:
    def test_transport_moves_base_along_flow(self, rng):
        op = random_hermitian(rng, 3)
        at = project(random_unit(rng, 3))
        x = random_horizontal(at, rng)
        moved = flow_transport(op, x, 0.2)
        assert abs(np.vdot(moved.base.rep, moved.vec)) < 1e-12
        assert fs_distance(moved.base, at) > 0.0


class TestCommutatorClosure:
    def test_cubic_shrinkage(self, rng):
        op_f = random_hermitian(rng, 3)
        op_g = random_hermitian(rng, 3)
        at = project(random_unit(rng, 3))
        r1 = commutator_closure_residual(op_f, op_g, at, eps=2e-2)
        r2 = commutator_closure_residual(op_f, op_g, at, eps=1e-2)
        ratio = r1 / r2
        assert 6.0 < ratio < 10.0

    def test_oscillator_quadratures_close_below_truncation(self):
        dim = 20
        psi = np.zeros(dim, dtype=np.complex128)
        psi[:6] = [1.0, 0.8, 0.5, 0.3, 0.1, 0.05]
        psi /= np.linalg.norm(psi)
        res = commutator_closure_residual(position_operator(dim),
                                          momentum_operator(dim),
                                          project(psi), eps=1e-2)
        assert res < 1e-8


class TestUncertaintyAudit:
    @given(hermitians(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_slack_nonnegative(self, op_f, data):
        dim = op_f.shape[0]
        op_m = data.draw(hermitians(dim=dim))
        psi = data.draw(unit_vectors(dim=dim))
        audit = uncertainty_audit(op_f, op_m, project(psi))
        assert audit.slack >= -1e-12
        assert abs(audit.lhs - audit.symplectic_term - audit.metric_term
                   - audit.slack) < 1e-12

    def test_saturation_at_plus_i(self):
        plus_i = project(np.array([1.0, 1.0j]) / np.sqrt(2.0))
        audit = uncertainty_audit(sigma_z(), sigma_x(), plus_i)
        assert abs(audit.slack) < 1e-10
        assert abs(audit.lhs - 1.0) < 1e-12
        assert abs(audit.symplectic_term - 1.0) < 1e-12
        assert abs(audit.metric_term) < 1e-12


class TestEigenExtrema:
    def test_matches_spectrum_and_stationarity(self, rng):
        op = random_hermitian(rng, 4)
        extrema = eigen_extrema(op)
        assert len(extrema) == 4
        vals = sorted(v for _, v in extrema)
        oracle = sorted(np.linalg.eigvalsh(op))
        assert np.max(np.abs(np.asarray(vals) - np.asarray(oracle))) < 1e-10
        for ray, val in extrema:
            assert abs(np.real(np.vdot(ray.rep, op @ ray.rep)) - val) < 1e-10
            # critical points of the expectation are flow fixed points
            assert np.max(np.abs(hamiltonian_vector_field(op, ray).vec)) < 1e-10
