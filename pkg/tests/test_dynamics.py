"""Unit tests for the projective flow integrator and its diagnostics."""

import numpy as np
import pytest

from projqm.dynamics import (Trajectory, ehrenfest_residual, flow_integrate,
                             flow_vs_exact_deviation, trajectory_rows)
from projqm.hilbert import evolve_exact, sigma_x, sigma_y, sigma_z
from projqm.projective import fs_distance, project
from tests.conftest import random_hermitian, random_unit

PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)


class TestFlowIntegrate:
    def test_matches_exact_evolution(self, rng):
        h = random_hermitian(rng, 4)
        psi = random_unit(rng, 4)
        traj = flow_integrate(h, psi, 1.0, 1e-3)
        exact = project(evolve_exact(h, psi, 1.0))
        assert fs_distance(traj.final, exact) < 1e-10

    def test_samples_stay_normalized(self, rng):
        h = random_hermitian(rng, 3)
        traj = flow_integrate(h, random_unit(rng, 3), 0.5, 1e-2)
        for ray in traj.points:
            assert abs(np.linalg.norm(ray.rep) - 1.0) < 1e-12

    def test_time_grid(self):
        traj = flow_integrate(sigma_z(), PLUS, 0.1, 0.025)
        assert np.allclose(traj.times, [0.0, 0.025, 0.05, 0.075, 0.1])

    def test_zero_duration(self):
        traj = flow_integrate(sigma_z(), PLUS, 0.0, 1e-3)
        assert traj.times.shape == (1,)
        assert fs_distance(traj.final, project(PLUS)) < 1e-12

    def test_tracked_observables(self):
        traj = flow_integrate(sigma_z(), PLUS, np.pi, 1e-3,
                              track=[("x", sigma_x()), ("y", sigma_y())])
        labels = [label for label, _ in traj.observables_tracked]
        assert labels == ["x", "y"]
        (_, xs), (_, ys) = traj.observables_tracked
        # spin precession: <x> = cos(2t), <y> = sin(2t)
        assert np.max(np.abs(xs - np.cos(2.0 * traj.times))) < 1e-8
        assert np.max(np.abs(ys - np.sin(2.0 * traj.times))) < 1e-8

    def test_rejects_bad_steps(self):
        with pytest.raises(ValueError):
            flow_integrate(sigma_z(), PLUS, 1.0, 0.0)
        with pytest.raises(ValueError):
            flow_integrate(sigma_z(), PLUS, -1.0, 1e-3)

    def test_global_phase_of_start_is_irrelevant(self, rng):
        h = random_hermitian(rng, 3)
        psi = random_unit(rng, 3)
        t1 = flow_integrate(h, psi, 0.4, 1e-3)
        t2 = flow_integrate(h, np.exp(1.3j) * psi, 0.4, 1e-3)
        assert fs_distance(t1.final, t2.final) < 1e-12


class TestOrderOfAccuracy:
    def test_integrator_is_fourth_order(self, rng):
        h = random_hermitian(rng, 4)
        psi = random_unit(rng, 4)
        devs = [flow_vs_exact_deviation(h, psi, 1.0, dt)
                for dt in (4e-2, 2e-2, 1e-2)]
        orders = [np.log2(devs[i] / devs[i + 1]) for i in range(2)]
        assert min(orders) > 3.8

    def test_deviation_small_at_fine_step(self):
        dev = flow_vs_exact_deviation(sigma_z(), PLUS, 1.5, 1e-3)
        assert dev < 1e-12


class TestEhrenfestResidual:
    def test_residual_shrinks_quadratically(self, rng):
        h = random_hermitian(rng, 3)
        f = random_hermitian(rng, 3)
        at = project(random_unit(rng, 3))
        r_coarse = ehrenfest_residual(f, h, at, eps=1e-2)
        r_fine = ehrenfest_residual(f, h, at, eps=1e-3)
        order = np.log10(r_coarse / r_fine)
        assert order > 1.9

    def test_conserved_energy_gives_tiny_residual(self, rng):
        h = random_hermitian(rng, 3)
        at = project(random_unit(rng, 3))
        assert ehrenfest_residual(h, h, at, eps=1e-3) < 1e-12


class TestTrajectoryRows:
    def test_header_and_shape(self):
        traj = flow_integrate(sigma_z(), PLUS, 0.01, 5e-3,
                              track=[("x", sigma_x())])
        header, rows = trajectory_rows(traj)
        assert header[0] == "time"
        assert header[-1] == "x"
        assert len(rows) == 3
        assert all(len(row) == len(header) for row in rows)

    def test_row_reconstructs_state(self):
        traj = flow_integrate(sigma_z(), PLUS, 0.02, 1e-2)
        header, rows = trajectory_rows(traj)
        re0 = header.index("psi0_re")
        im0 = header.index("psi0_im")
        last = rows[-1]
        rebuilt = np.array([complex(last[re0], last[im0]),
                            complex(last[re0 + 2], last[im0 + 2])])
        assert fs_distance(project(rebuilt), traj.final) < 1e-12


def test_trajectory_validates_lengths():
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 1.0]), points=[project(PLUS)])
