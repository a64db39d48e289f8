import math

import numpy as np
import pytest

from ptdisc import (
    BlochState,
    DomainError,
    Ensemble,
    InfeasibleError,
    build_plan,
    canonical_hamiltonian,
    cpt_inner,
    decide,
    decide_pair,
    evolution_operator,
    evolution_time,
    feasible_alpha_range,
    fidelity,
    kappa_angles,
    measurement_operator,
    order_by_prior,
    pipeline_stages,
    preparation_params,
    projectors,
    stage_two_plan,
    state_from_bloch,
)
from ptdisc.protocol import DEFAULT_ALPHA_M, gates_r123, gates_r456
from ptdisc.verify import random_ensemble

SQ2 = math.sqrt(2)


def equator(phi):
    return BlochState(math.pi / 2, phi)


class TestEnsemble:
    def test_priors_must_sum_to_one(self):
        with pytest.raises(DomainError):
            Ensemble((equator(0), equator(1), equator(2)), (0.5, 0.3, 0.3))

    def test_negative_prior_rejected(self):
        with pytest.raises(DomainError):
            Ensemble((equator(0), equator(1), equator(2)), (1.2, -0.1, -0.1))

    def test_coincident_states_rejected(self):
        with pytest.raises(DomainError):
            Ensemble((equator(0), equator(0), equator(2)), (0.4, 0.3, 0.3))

    def test_wrapped_phi_coincidence_detected(self):
        # 4pi/3 and -2pi/3 are the same meridian
        with pytest.raises(DomainError):
            Ensemble(
                (equator(4 * math.pi / 3), equator(-2 * math.pi / 3), equator(0)),
                (0.4, 0.3, 0.3),
            )


class TestOrderByPrior:
    def test_middle_prior_leads(self):
        e = Ensemble((equator(0), equator(1), equator(2)), (0.2, 0.5, 0.3))
        _, order = order_by_prior(e)
        assert order == (2, 3, 1)

    def test_ties_break_by_input_index(self):
        e = Ensemble((equator(0), equator(1), equator(2)), (0.4, 0.4, 0.2))
        _, order = order_by_prior(e)
        assert order == (1, 2, 3)
        e = Ensemble((equator(0), equator(1), equator(2)), (0.2, 0.4, 0.4))
        _, order = order_by_prior(e)
        assert order == (2, 3, 1)

    def test_sorted_input_is_identity(self):
        e = Ensemble((equator(0), equator(1), equator(2)), (0.5, 0.3, 0.2))
        ordered, order = order_by_prior(e)
        assert order == (1, 2, 3)
        assert ordered.priors == (0.5, 0.3, 0.2)

    def test_leading_prior_is_maximal(self, rng):
        for _ in range(100):
            e = random_ensemble(rng)
            ordered, _ = order_by_prior(e)
            assert ordered.priors[0] == max(e.priors)


class TestPreparationParams:
    def test_quarter_overlap(self):
        prep = preparation_params(equator(0.0), equator(math.pi / 2), equator(2.0))
        assert prep.sigma == pytest.approx(math.pi / 4, abs=1e-12)

    def test_antipodal_pair(self):
        s1 = BlochState(0.3, 0.2)
        s2 = BlochState(math.pi - 0.3, 0.2 + math.pi)
        prep = preparation_params(s1, s2, equator(1.0))
        assert prep.sigma == pytest.approx(math.pi / 2, abs=1e-12)

    def test_coincident_pair_rejected(self):
        with pytest.raises(DomainError):
            preparation_params(equator(0.5), equator(0.5), equator(1.0))

    def test_amplitudes_are_normalized(self, rng):
        for _ in range(200):
            e = random_ensemble(rng)
            prep = preparation_params(*e.states)
            assert abs(prep.beta) ** 2 + abs(prep.gamma) ** 2 == pytest.approx(
                1.0, abs=1e-10
            )
            assert 0.0 <= prep.mu <= math.pi

    def test_worked_triple_against_gate_route(self, worked_ensemble, worked_plan):
        prep = worked_plan.prep
        assert prep.sigma == pytest.approx(math.pi / 4, abs=1e-12)
        assert prep.lam == pytest.approx(0.0, abs=1e-12)
        assert prep.mu == pytest.approx(3 * math.pi / 4, abs=1e-12)
        assert prep.nu == pytest.approx(math.pi / 2, abs=1e-12)
        # the (beta, gamma) amplitudes are what R3 R2 R1 produces on psi3
        prepared3 = pipeline_stages(worked_plan, worked_ensemble.states[2]).prepared
        assert abs(prep.beta - prepared3[0]) < 1e-12
        assert abs(prep.gamma - prepared3[1]) < 1e-12


class TestGatesR123:
    def test_r1_aligns_leading_state(self, rng):
        for _ in range(100):
            e = random_ensemble(rng)
            prep = preparation_params(*e.states)
            r1, _, _ = gates_r123(e.states[0], prep, e.states[1].phi)
            out = r1 @ state_from_bloch(e.states[0])
            assert fidelity(out, np.array([1.0, 0.0])) > 1 - 1e-10

    def test_pair_reaches_canonical_forms(self, rng):
        for _ in range(100):
            e = random_ensemble(rng)
            prep = preparation_params(*e.states)
            r1, r2, r3 = gates_r123(e.states[0], prep, e.states[1].phi)
            g = r3 @ r2 @ r1
            ga = (math.pi - 2 * prep.sigma) / 4
            gb = (math.pi + 2 * prep.sigma) / 4
            t1 = np.array([math.cos(ga), -1j * math.sin(ga)])
            t2 = np.array([math.cos(gb), -1j * math.sin(gb)])
            assert fidelity(g @ state_from_bloch(e.states[0]), t1) > 1 - 1e-9
            assert fidelity(g @ state_from_bloch(e.states[1]), t2) > 1 - 1e-9

    def test_gates_are_unitary(self, worked_plan):
        for name in ("r1", "r2", "r3"):
            g = getattr(worked_plan, name)
            np.testing.assert_allclose(g.conj().T @ g, np.eye(2), atol=1e-12)
        # r2 is diagonal
        assert worked_plan.r2[0, 1] == worked_plan.r2[1, 0] == 0


class TestEvolutionTime:
    def test_orthogonal_inputs_need_no_evolution(self):
        assert evolution_time(0.9, math.pi / 2) == 0.0

    def test_alpha_near_limit_gives_tiny_rotation(self):
        a = math.pi / 2 - 1e-5
        for sigma in (0.2, math.pi / 4, 1.3):
            tau = evolution_time(a, sigma)
            # sin^2(omega tau) ~ cos^2(a) cos(sigma) / (2 - 2 cos(sigma))
            assert math.sin(math.cos(a) * tau) ** 2 < 1e-8

    def test_orthogonalizes_the_pair(self, worked_ensemble):
        plan = build_plan(worked_ensemble, alpha_h=1.2)
        assert plan.tau == pytest.approx(1.0823225734876527, abs=1e-12)
        e1 = pipeline_stages(plan, worked_ensemble.states[0]).evolved
        e2 = pipeline_stages(plan, worked_ensemble.states[1]).evolved
        assert abs(np.vdot(e1, e2)) < 1e-9

    def test_infeasible_alpha_reports_rhs(self):
        with pytest.raises(InfeasibleError) as err:
            evolution_time(0.1, math.pi / 4)
        assert err.value.rhs is not None
        assert err.value.rhs > 1.0

    def test_negative_alpha_infeasible_for_overlapping_pair(self):
        with pytest.raises(InfeasibleError):
            evolution_time(-0.5, 0.7)


class TestFeasibleAlphaRange:
    def test_antipodal_pair_admits_everything(self):
        rng_ = feasible_alpha_range(math.pi / 2)
        assert rng_.lo == pytest.approx(0.0, abs=1e-12)
        assert rng_.hi == pytest.approx(math.pi / 2, abs=1e-12)
        assert not rng_.empty

    def test_coincident_limit_is_empty(self):
        rng_ = feasible_alpha_range(0.0)
        assert rng_.empty
        with pytest.raises(InfeasibleError):
            rng_.midpoint()

    def test_quarter_overlap_matches_grid_scan(self):
        sigma = math.pi / 4
        rng_ = feasible_alpha_range(sigma)
        cos_sigma = math.cos(sigma)
        grid = np.linspace(1e-6, math.pi / 2 - 1e-6, 1_000_000)
        ok = cos_sigma * (1 + np.sin(grid) ** 2) <= 2 * np.sin(grid)
        lo_scan = grid[np.argmax(ok)]
        assert rng_.lo == pytest.approx(lo_scan, abs=1e-5)
        assert rng_.lo == pytest.approx(0.4270785863924761, abs=1e-12)

    def test_interior_points_are_feasible(self, rng):
        for _ in range(100):
            sigma = rng.uniform(0.05, math.pi / 2)
            rng_ = feasible_alpha_range(sigma)
            a = rng.uniform(rng_.lo + 1e-9, rng_.hi - 1e-9)
            evolution_time(a, sigma)  # must not raise


class TestPostEvolutionParams:
    def test_no_evolution_keeps_prepared_leader(self):
        # antipodal pair: tau = 0, so the aligned state is the prepared state
        e = Ensemble(
            (BlochState(0.3, 0.2), BlochState(math.pi - 0.3, 0.2 + math.pi), equator(1.0)),
            (0.4, 0.3, 0.3),
        )
        plan = build_plan(e, alpha_h=0.8)
        assert plan.tau == 0.0
        assert plan.evo.delta == pytest.approx(0.0, abs=1e-12)

    def test_delta_matches_evolved_leader(self, worked_ensemble):
        plan = build_plan(worked_ensemble, alpha_h=1.2)
        assert plan.evo.delta == pytest.approx(1.2224997253223377, abs=1e-12)
        evolved = pipeline_stages(plan, worked_ensemble.states[0]).evolved
        aligned = plan.r4 @ evolved
        assert abs(aligned[1]) < 1e-9

    def test_xi_chi_reach_canonical_third_state(self, worked_ensemble):
        plan = build_plan(worked_ensemble, alpha_h=1.2)
        assert plan.evo.xi == pytest.approx(0.6972487134911404, abs=1e-12)
        evolved3 = pipeline_stages(plan, worked_ensemble.states[2]).evolved
        out = plan.r5 @ plan.r4 @ evolved3
        target = np.array(
            [math.cos(plan.evo.xi / 2), 1j * math.sin(plan.evo.xi / 2)]
        )
        assert fidelity(out, target) > 1 - 1e-9

    def test_rho_offset(self, rng):
        for _ in range(50):
            plan = build_plan(random_ensemble(rng))
            assert plan.evo.rho == pytest.approx(
                plan.evo.xi + math.pi / 2, abs=1e-12
            )


class TestGatesR456:
    def test_r4_aligns_evolved_leader(self, worked_plan, worked_ensemble):
        evolved = pipeline_stages(worked_plan, worked_ensemble.states[0]).evolved
        assert fidelity(worked_plan.r4 @ evolved, np.array([1.0, 0.0])) > 1 - 1e-9

    def test_r6_second_column(self, worked_plan):
        out = worked_plan.r6 @ np.array([0.0, 1.0])
        assert fidelity(out, np.array([1.0, -1j]) / SQ2) > 1 - 1e-12

    def test_r6_shifts_xi_to_rho(self, rng):
        r6 = np.array([[1, 1j], [1j, 1]]) / SQ2
        for _ in range(100):
            xi = rng.uniform(-math.pi / 2, math.pi / 2)
            rho = xi + math.pi / 2
            v = np.array([math.cos(xi / 2), 1j * math.sin(xi / 2)])
            target = np.array([math.cos(rho / 2), 1j * math.sin(rho / 2)])
            assert fidelity(r6 @ v, target) > 1 - 1e-12

    def test_final_canonical_forms(self, rng):
        for _ in range(100):
            plan = build_plan(random_ensemble(rng))
            stages = [pipeline_stages(plan, s) for s in plan.ensemble.states]
            f1 = np.array([1, 1j]) / SQ2
            f2 = np.array([1, -1j]) / SQ2
            f3 = np.array(
                [math.cos(plan.evo.rho / 2), 1j * math.sin(plan.evo.rho / 2)]
            )
            assert fidelity(stages[0].final, f1) > 1 - 1e-9
            assert fidelity(stages[1].final, f2) > 1 - 1e-9
            assert fidelity(stages[2].final, f3) > 1 - 1e-9


class TestKappaAngles:
    def test_pair_angle_is_zero(self, rng):
        for _ in range(100):
            report = kappa_angles(
                rng.uniform(-1.5, 1.5), rng.uniform(-math.pi, math.pi)
            )
            assert report.cos2_k12 == 0.0

    def test_hermitian_limit(self, rng):
        for rho in rng.uniform(-math.pi, math.pi, size=50):
            report = kappa_angles(0.0, rho)
            assert report.cos2_k13 == pytest.approx(
                (1 + math.sin(rho)) / 2, abs=1e-12
            )

    def test_near_limit_suppression(self):
        report = kappa_angles(-math.pi / 2 + 1e-3, 0.7)
        assert report.cos2_k13 < 3e-4

    def test_matches_direct_cpt_product(self, rng):
        for _ in range(300):
            am = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
            rho = rng.uniform(-math.pi, math.pi)
            f1 = np.array([1, 1j]) / SQ2
            f2 = np.array([1, -1j]) / SQ2
            f3 = np.array([math.cos(rho / 2), 1j * math.sin(rho / 2)])
            report = kappa_angles(am, rho)

            def cos2(a, b):
                return abs(cpt_inner(a, b, am)) ** 2 / (
                    cpt_inner(a, a, am).real * cpt_inner(b, b, am).real
                )

            assert abs(cos2(f1, f3) - report.cos2_k13) < 1e-10
            assert abs(cos2(f2, f3) - report.cos2_k23) < 1e-10

    def test_monotone_suppression_toward_limit(self, rng):
        for rho in rng.uniform(-math.pi / 2, math.pi / 2, size=50):
            values = [
                kappa_angles(-math.pi / 2 + 10.0**-k, rho).cos2_k13
                for k in range(1, 7)
            ]
            assert all(b < a for a, b in zip(values, values[1:]))


class TestProjectors:
    def test_completeness(self):
        p1, p2 = projectors()
        np.testing.assert_allclose(p1 + p2, np.eye(2), atol=1e-15)

    def test_eigenstates(self):
        p1, _ = projectors()
        plus = np.array([1, 1j]) / SQ2
        minus = np.array([1, -1j]) / SQ2
        np.testing.assert_allclose(p1 @ plus, plus, atol=1e-15)
        np.testing.assert_allclose(p1 @ minus, 0 * minus, atol=1e-15)

    def test_idempotent_and_annihilating(self):
        p1, p2 = projectors()
        np.testing.assert_allclose(p1 @ p1, p1, atol=1e-15)
        np.testing.assert_allclose(p2 @ p2, p2, atol=1e-15)
        np.testing.assert_allclose(p1 @ p2, np.zeros((2, 2)), atol=1e-15)

    def test_measurement_eigenvalues(self):
        m = measurement_operator()
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(m)), [-1, 1], atol=1e-12)
        p1, p2 = projectors()
        np.testing.assert_allclose(m, p1 - p2, atol=1e-15)


class TestBuildPlan:
    def test_symmetric_equator_triple(self):
        e = Ensemble(
            (equator(0.0), equator(2 * math.pi / 3), equator(4 * math.pi / 3)),
            (1 / 3, 1 / 3, 1 / 3),
        )
        plan = build_plan(e)
        assert plan.state_order == (1, 2, 3)
        assert plan.angles.cos2_k12 == 0.0

    def test_worked_triple_suppressed_confusion(self, worked_plan):
        assert worked_plan.alpha_m == DEFAULT_ALPHA_M
        assert worked_plan.angles.cos2_k13 < 3e-4
        assert worked_plan.angles.cos2_k13 == pytest.approx(
            1.2587640413885855e-06, abs=1e-18
        )

    def test_auto_alpha_is_feasible_midpoint(self, worked_plan):
        rng_ = feasible_alpha_range(worked_plan.prep.sigma)
        assert worked_plan.alpha_h == pytest.approx(
            0.5 * (rng_.lo + rng_.hi), abs=1e-15
        )
        assert worked_plan.alpha_h == pytest.approx(0.9989374565936864, abs=1e-12)

    def test_coincident_states_rejected(self):
        with pytest.raises(DomainError):
            build_plan(
                Ensemble((equator(0.1), equator(0.1), equator(2.0)), (0.4, 0.3, 0.3))
            )

    def test_explicit_infeasible_alpha_propagates(self, worked_ensemble):
        with pytest.raises(InfeasibleError):
            build_plan(worked_ensemble, alpha_h=0.1)

    def test_measurement_alpha_must_be_admitted(self, worked_ensemble):
        with pytest.raises(DomainError):
            build_plan(worked_ensemble, alpha_m=-math.pi / 2)

    def test_evolved_norms_recorded(self, worked_plan):
        norms = worked_plan.evolved_norms
        assert len(norms) == 3
        assert norms[0] == pytest.approx(1.497963386656405, abs=1e-12)
        assert all(n > 0 for n in norms)

    def test_reordering_by_prior(self):
        e = Ensemble((equator(0), equator(1), equator(2)), (0.2, 0.5, 0.3))
        plan = build_plan(e)
        assert plan.state_order == (2, 3, 1)
        assert plan.ensemble.priors == (0.5, 0.3, 0.2)


class TestDecide:
    def test_plus_means_leader(self):
        assert decide(1) == (1,)

    def test_minus_means_pair(self):
        assert decide(-1) == (2, 3)

    def test_other_values_rejected(self):
        with pytest.raises(DomainError):
            decide(0)

    def test_pair_decision(self):
        assert decide_pair(1) == 1
        assert decide_pair(-1) == 2
        with pytest.raises(DomainError):
            decide_pair(2)


class TestStageTwoPlan:
    def test_orthogonal_pair_needs_no_evolution(self):
        plan = stage_two_plan(
            BlochState(0.3, 0.2), BlochState(math.pi - 0.3, 0.2 + math.pi), (0.5, 0.5)
        )
        assert plan.tau == 0.0

    def test_partial_overlap_orthogonalizes(self):
        # |<psi2|psi3>| = cos(pi/4) = 1/sqrt2
        plan = stage_two_plan(equator(0.0), equator(math.pi / 2), (0.6, 0.4))
        assert plan.sigma == pytest.approx(math.pi / 4, abs=1e-12)
        f2 = pipeline_stages(plan, plan.states[0]).final
        f3 = pipeline_stages(plan, plan.states[1]).final
        assert abs(np.vdot(f2, f3)) < 1e-9

    def test_finals_are_measurement_eigenstates(self, rng):
        for _ in range(50):
            e = random_ensemble(rng)
            plan = stage_two_plan(e.states[1], e.states[2], (0.5, 0.5))
            f_a = pipeline_stages(plan, plan.states[0]).final
            f_b = pipeline_stages(plan, plan.states[1]).final
            assert fidelity(f_a, np.array([1, 1j]) / SQ2) > 1 - 1e-9
            assert fidelity(f_b, np.array([1, -1j]) / SQ2) > 1 - 1e-9

    def test_coincident_pair_rejected(self):
        with pytest.raises(DomainError):
            stage_two_plan(equator(0.4), equator(0.4), (0.5, 0.5))

    def test_pair_priors_validated(self):
        with pytest.raises(DomainError):
            stage_two_plan(equator(0.0), equator(1.0), (0.7, 0.7))


class TestPipelineStages:
    def test_stage_progression(self, worked_plan, worked_ensemble):
        stages = pipeline_stages(worked_plan, worked_ensemble.states[0])
        np.testing.assert_allclose(
            stages.input, state_from_bloch(worked_ensemble.states[0])
        )
        prep_gate = worked_plan.r3 @ worked_plan.r2 @ worked_plan.r1
        np.testing.assert_allclose(
            stages.prepared, prep_gate @ stages.input, atol=1e-15
        )
        assert np.linalg.norm(stages.evolved) == pytest.approx(1.0, abs=1e-12)
        assert stages.evolved_norm == pytest.approx(1.497963386656405, abs=1e-12)

    def test_evolved_is_renormalized_propagation(self, worked_plan, worked_ensemble):
        stages = pipeline_stages(worked_plan, worked_ensemble.states[1])
        u = evolution_operator(
            canonical_hamiltonian(worked_plan.alpha_h), worked_plan.tau
        )
        raw = u @ stages.prepared
        np.testing.assert_allclose(
            stages.evolved, raw / np.linalg.norm(raw), atol=1e-12
        )
