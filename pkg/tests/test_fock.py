"""Single-photon dynamics: analytic laws, dual-solver agreement, observables."""

import math

import numpy as np
import pytest

from dipolepair import (
    ANTISYMMETRIC,
    EQUAL_SUPERPOSITION,
    SYMMETRIC,
    AtomPairConfig,
    CollectiveRates,
    DegenerateChannel,
    DomainError,
    FockHierarchy,
    NumericalError,
    StateTrajectory,
    TemporalEnvelope,
    antisymmetric_pulse,
    atom1_inversion_rate,
    collective_rates,
    decay_only,
    default_time_grid,
    evolve_amplitudes,
    evolve_hierarchy,
    hierarchy_rhs,
    per_atom_population,
    superposition_profile,
    symmetric_pulse,
    table1_expectations,
)
from dipolepair.fock import _TABLE1_OPS

PI_2 = math.pi / 2


def rates_at(kr, theta=PI_2):
    return collective_rates(AtomPairConfig(kr=kr, theta=theta))


def matched_pair(rates):
    return symmetric_pulse(rates), antisymmetric_pulse(rates)


class TestAmplitudeSolver:
    def test_decoupled_analytic_law(self):
        r = CollectiveRates(gamma=1.0, gamma12=0.0, lambda12=0.0)
        env = symmetric_pulse(r)
        grid = default_time_grid(env, n=1201)
        traj = evolve_amplitudes(r, SYMMETRIC, env, grid)
        rise = grid <= 0
        assert np.max(np.abs(traj.P_s[rise] - np.exp(grid[rise]))) < 1e-8
        fall = grid > 0
        assert np.max(np.abs(traj.P_s[fall] - np.exp(-grid[fall]))) < 1e-8
        assert traj.P_s.max() == pytest.approx(1.0, abs=1e-8)
        assert np.all(traj.P_ee == 0.0)

    @pytest.mark.parametrize("kr", [0.5, 1.0, 2.0])
    def test_matched_symmetric_peak(self, kr):
        r = rates_at(kr)
        env = symmetric_pulse(r)
        traj = evolve_amplitudes(r, SYMMETRIC, env, default_time_grid(env),
                                 keep_states=True)
        assert abs(traj.P_s.max() - 1.0) < 1e-3
        norms = [st.norm_squared for st in traj.states]
        assert max(norms) <= 1.0 + 1e-9
        assert abs(abs(traj.states[-1].beta_s) ** 2 - traj.P_s[-1]) < 1e-12

    def test_matched_antisymmetric_peak(self):
        r = rates_at(0.5)
        env = antisymmetric_pulse(r)
        traj = evolve_amplitudes(r, ANTISYMMETRIC, env, default_time_grid(env))
        assert abs(traj.P_a.max() - 1.0) < 1e-3

    def test_no_drive_stays_ground(self):
        r = rates_at(1.0)
        grid = np.linspace(-5, 5, 101)
        traj = evolve_amplitudes(r, SYMMETRIC, (None, None), grid)
        assert np.all(traj.P_s == 0.0) and np.all(traj.P_a == 0.0)
        assert np.allclose(traj.P_gg, 1.0)

    def test_dipole_phase_is_load_bearing(self):
        # same bandwidth but no phase rotation: the drive is effectively
        # detuned by lambda12/2 and the peak collapses
        r = rates_at(0.5)
        gs, lam = r.gamma_sym, r.lambda12
        env = TemporalEnvelope("rising_exponential", gs, 0.0, support=(-40.0 / gs, 0.0))
        traj = evolve_amplitudes(r, SYMMETRIC, env, default_time_grid(env))
        peak = traj.P_s.max()
        assert peak < 1.0 - 1e-3
        analytic = gs**2 / (gs**2 + lam**2 / 4.0)
        assert peak == pytest.approx(analytic, abs=1e-6)

    def test_time_reversal_mirror(self):
        # matched drive: the rise is the mirror image of the decay
        r = rates_at(1.0)
        env = symmetric_pulse(r)
        ts = np.linspace(0.05, 3.0, 40)
        grid = np.sort(np.concatenate([-ts, [0.0], ts]))
        full = np.sort(np.concatenate([[env.support[0]], grid]))
        traj = evolve_amplitudes(r, SYMMETRIC, env, full)
        ps = dict(zip(np.round(traj.times, 12), traj.P_s))
        for t in ts:
            assert abs(ps[round(t, 12)] - ps[round(-t, 12)]) < 1e-4

    def test_truncating_grid_rejected(self):
        r = rates_at(1.0)
        env = symmetric_pulse(r)
        with pytest.raises(DomainError, match="onset"):
            evolve_amplitudes(r, SYMMETRIC, env, np.linspace(-1.0, 5.0, 50))

    def test_degenerate_channel_refused(self):
        r = CollectiveRates(gamma=1.0, gamma12=1.0 - 1e-9, lambda12=-20.0)
        env = symmetric_pulse(r)
        with pytest.raises(DegenerateChannel):
            evolve_amplitudes(r, EQUAL_SUPERPOSITION, env, np.linspace(-30, 2, 50))

    def test_tolerance_refinement_stability(self):
        r = rates_at(0.5)
        env = symmetric_pulse(r)
        grid = default_time_grid(env)
        p1 = evolve_amplitudes(r, SYMMETRIC, env, grid, rtol=1e-9).P_s.max()
        p2 = evolve_amplitudes(r, SYMMETRIC, env, grid, rtol=5e-10).P_s.max()
        assert abs(p1 - p2) < 1e-7

    def test_dense_solution_rejects_out_of_span_queries(self):
        from dipolepair import amplitude_solution

        r = rates_at(1.0)
        env = symmetric_pulse(r)
        sol = amplitude_solution(r, SYMMETRIC, env, (env.support[0], 5.0))
        with pytest.raises(DomainError):
            sol.population("s", 100.0)


class TestHierarchySolver:
    @pytest.mark.parametrize("kr", [0.5, 2.0])
    def test_agrees_with_amplitudes_symmetric(self, kr):
        r = rates_at(kr)
        env = symmetric_pulse(r)
        grid = default_time_grid(env)
        th = evolve_hierarchy(r, SYMMETRIC, env, grid=grid)
        ta = evolve_amplitudes(r, SYMMETRIC, env, grid)
        for name in ("P_gg", "P_s", "P_a"):
            assert np.max(np.abs(getattr(th, name) - getattr(ta, name))) < 1e-6

    def test_number_conservation_and_selectivity(self):
        r = rates_at(0.7)
        env = symmetric_pulse(r)
        traj = evolve_hierarchy(r, SYMMETRIC, env, grid=default_time_grid(env))
        assert traj.P_ee.max() < 1e-10
        assert traj.P_a.max() < 1e-10
        env_a = antisymmetric_pulse(r)
        traj = evolve_hierarchy(r, ANTISYMMETRIC, env_a, grid=default_time_grid(env_a))
        assert traj.P_ee.max() < 1e-10
        assert traj.P_s.max() < 1e-10

    def test_equal_superposition_addresses_one_atom(self):
        r = rates_at(0.5)
        pair = matched_pair(r)
        grid = default_time_grid(pair)
        traj = evolve_hierarchy(r, EQUAL_SUPERPOSITION, pair, grid=grid)
        i0 = int(np.argmin(np.abs(grid)))
        assert traj.P_atom1[i0] == pytest.approx(1.0, abs=1e-3)
        assert traj.P_atom2[i0] < 1e-3

    def test_sector_invariants(self):
        r = rates_at(1.0)
        pair = matched_pair(r)
        grid = default_time_grid(pair, n=301)
        traj = evolve_hierarchy(r, superposition_profile(0.6, 0.8j), pair,
                                grid=grid, keep_states=True)
        for st in traj.states[:: len(traj.states) // 20]:
            assert abs(np.trace(st.rho11).real - 1.0) < 1e-7
            assert abs(np.trace(st.rho00).real - 1.0) < 1e-7
            assert np.max(np.abs(st.rho11 - st.rho11.conj().T)) < 1e-9
            assert np.linalg.eigvalsh(st.rho11).min() > -1e-9
            assert np.array_equal(st.rho01, st.rho10.conj().T)

    def test_only_fock1_supported(self):
        r = rates_at(1.0)
        env = symmetric_pulse(r)
        with pytest.raises(DomainError, match="fock1"):
            evolve_hierarchy(r, SYMMETRIC, env, field="fock2",
                             grid=default_time_grid(env))

    def test_randomized_dual_solver_sweep(self):
        rng = np.random.default_rng(20240811)
        for case in range(6):
            kr = rng.uniform(0.4, 5.0)
            theta = (0.0, PI_2)[case % 2]
            r = rates_at(kr, theta)
            chi, phi = rng.uniform(0, PI_2), rng.uniform(0, 2 * math.pi)
            prof = superposition_profile(
                math.cos(chi) * np.exp(1j * phi), math.sin(chi)
            )
            env = matched_pair(r) if case % 2 == 0 else symmetric_pulse(r)
            grid = default_time_grid(env, n=401)
            th = evolve_hierarchy(r, prof, env, grid=grid)
            ta = evolve_amplitudes(r, prof, env, grid)
            for name in ("P_gg", "P_s", "P_a"):
                assert np.max(np.abs(getattr(th, name) - getattr(ta, name))) < 1e-6
            assert np.max(np.abs(th.coherence_sa - ta.coherence_sa)) < 1e-6


class TestDecayOnly:
    @pytest.mark.parametrize("initial,channel", [("s", "sym"), ("a", "anti")])
    def test_exponential_channels(self, initial, channel):
        r = rates_at(0.8)
        grid = np.linspace(0, 6, 301)
        traj = decay_only(r, initial, grid)
        pop = traj.P_s if initial == "s" else traj.P_a
        slope = np.polyfit(grid, np.log(pop), 1)[0]
        expected = -(r.gamma_sym if channel == "sym" else r.gamma_anti)
        assert abs(slope - expected) < 1e-4 * abs(expected)

    def test_subradiant_channel_freezes(self):
        # as the atoms approach, the antisymmetric state stops decaying
        grid = np.linspace(0, 6, 100)
        s1 = np.polyfit(grid, np.log(decay_only(rates_at(1.0), "a", grid).P_a), 1)[0]
        s2 = np.polyfit(grid, np.log(decay_only(rates_at(0.1), "a", grid).P_a), 1)[0]
        assert abs(s2) < abs(s1) / 10

    def test_ground_state_stationary(self):
        traj = decay_only(rates_at(1.0), "gg", np.linspace(0, 5, 50))
        assert np.allclose(traj.P_gg, 1.0, atol=1e-12)

    def test_single_atom_start(self):
        r = rates_at(0.6)
        grid = np.linspace(0, 4, 401)
        traj = decay_only(r, "eg", grid)
        assert traj.P_atom1[0] == pytest.approx(1.0, abs=1e-12)
        assert traj.P_atom2[0] == pytest.approx(0.0, abs=1e-12)
        # beats between the split levels show up in the per-atom populations
        assert traj.P_atom2.max() > 1e-3

    def test_grid_must_start_at_zero(self):
        with pytest.raises(DomainError):
            decay_only(rates_at(1.0), "s", np.linspace(0.5, 3, 10))

    def test_unknown_initial(self):
        with pytest.raises(DomainError):
            decay_only(rates_at(1.0), "xy", np.linspace(0, 3, 10))

    def test_explicit_density_matrix_initial(self):
        r = rates_at(1.0)
        rho0 = np.diag([0.0, 0.5, 0.5, 0.0]).astype(complex)
        traj = decay_only(r, rho0, np.linspace(0, 4, 101))
        total = traj.P_gg + traj.P_s + traj.P_a + traj.P_ee
        assert np.max(np.abs(total - 1.0)) < 1e-9
        # incoherent mixture of the two channels decays at both rates
        assert traj.P_s[-1] == pytest.approx(0.5 * math.exp(-4 * r.gamma_sym), rel=1e-6)
        assert traj.P_a[-1] == pytest.approx(0.5 * math.exp(-4 * r.gamma_anti), rel=1e-6)


def _pure_hierarchy(vec):
    rho = np.outer(vec, np.conj(vec))
    return FockHierarchy(t=0.0, rho00=np.diag([1.0, 0, 0, 0]).astype(complex),
                         rho10=np.zeros((4, 4), complex), rho11=rho)


class TestTable1:
    def test_ground_state(self):
        e = table1_expectations(_pure_hierarchy([1, 0, 0, 0]))
        assert e["sigma1_z"] == pytest.approx(-1.0)
        assert e["sigma2_z"] == pytest.approx(-1.0)
        assert e["sigma1_z_sigma2_z"] == pytest.approx(1.0)
        for name in ("sigma1_x", "sigma2_x", "sigma1_y", "sigma2_y"):
            assert e[name] == pytest.approx(0.0, abs=1e-14)

    def test_symmetric_bell_state(self):
        e = table1_expectations(_pure_hierarchy([0, 1, 0, 0]))
        assert e["sigma1_x_sigma2_x"] == pytest.approx(1.0)
        assert e["sigma1_y_sigma2_y"] == pytest.approx(1.0)
        assert e["sigma1_z"] == pytest.approx(0.0, abs=1e-14)

    def test_fifteen_observables(self):
        e = table1_expectations(_pure_hierarchy([0, 0, 0, 1]))
        assert len(e) == 15
        assert e["sigma1_z"] == pytest.approx(1.0)
        assert e["sigma1_z_sigma2_z"] == pytest.approx(1.0)

    def test_operator_equation_identity(self):
        # the implemented generator reproduces the operator equation of motion
        # for the atom-1 inversion exactly (dissipative, coherent, and drive
        # terms) when contracted with any hierarchy state
        r = rates_at(1.0)
        pair = matched_pair(r)
        prof = superposition_profile(0.8, 0.6j)
        grid = default_time_grid(pair, n=201)
        traj = evolve_hierarchy(r, prof, pair, grid=grid, keep_states=True)
        for st in traj.states[10::37]:
            d11 = hierarchy_rhs(r, prof, pair, st)[2]
            lhs = float(np.trace(_TABLE1_OPS["sigma1_z"] @ d11).real)
            rhs = atom1_inversion_rate(r, prof, pair, st)
            assert abs(lhs - rhs) < 1e-12

    def test_finite_difference_inversion_rate(self):
        r = rates_at(1.0)
        pair = matched_pair(r)
        prof = superposition_profile(0.8, 0.6j)
        start = default_time_grid(pair)[0]
        h = 2e-3
        for tc in (-2.0, -0.5, 0.8):
            ts = np.array([start, tc - 2 * h, tc - h, tc, tc + h, tc + 2 * h])
            traj = evolve_hierarchy(r, prof, pair, grid=ts, keep_states=True)
            z = np.array([table1_expectations(s)["sigma1_z"] for s in traj.states[1:]])
            fd = (z[0] - 8 * z[1] + 8 * z[3] - z[4]) / (12 * h)
            pred = atom1_inversion_rate(r, prof, pair, traj.states[3])
            assert abs(fd - pred) < 1e-7


class TestPerAtom:
    def test_symmetric_state_shares_excitation(self):
        p1, p2 = per_atom_population(1.0, 0.0, 0.0, 0.0)
        assert p1 == pytest.approx(0.5) and p2 == pytest.approx(0.5)

    def test_double_excitation(self):
        p1, p2 = per_atom_population(0.0, 0.0, 1.0, 0.0)
        assert p1 == pytest.approx(1.0) and p2 == pytest.approx(1.0)

    def test_localized_excitation(self):
        p1, p2 = per_atom_population(0.5, 0.5, 0.0, 0.5)
        assert p1 == pytest.approx(1.0) and p2 == pytest.approx(0.0, abs=1e-12)


class TestTrajectoryValidation:
    def test_bad_sum_rejected(self):
        t = np.linspace(0, 1, 5)
        with pytest.raises(NumericalError):
            StateTrajectory.from_populations(
                t, 0.5 * np.ones(5), 0.4 * np.ones(5),
                np.zeros(5), np.zeros(5), np.zeros(5, complex),
            )

    def test_out_of_range_rejected(self):
        t = np.linspace(0, 1, 5)
        with pytest.raises(NumericalError):
            StateTrajectory.from_populations(
                t, -0.2 * np.ones(5), 1.2 * np.ones(5),
                np.zeros(5), np.zeros(5), np.zeros(5, complex),
            )
