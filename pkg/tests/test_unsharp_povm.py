import numpy as np
import pytest

from unsharp_spin import misalignment as mis
from unsharp_spin import spin_core as sc
from unsharp_spin import unsharp_povm as up

Z = np.array([0.0, 0.0, 1.0])


def max_abs(a):
    return float(np.max(np.abs(np.asarray(a))))


# Frozen from an independent high-precision quadrature of the four angular
# integrals (cap weight 1/A against cos^4(t/2), sin^2(t)/2, sin^4(t/2),
# cos^2(t) on [0, eps]).
ORACLE_ALPHAS = {
    0.1: (0.99750416250272699, 0.0024937576335589031, 2.0798637141069476e-6, 0.99501248473288219),
    0.4: (0.96104977755709359, 0.038430941887255368, 0.00051928055565104541, 0.92313811622548926),
    0.459: (0.949140755310047, 0.049966488146049984, 0.0008927565439030112, 0.90006702370790003),
    0.5: (0.94004011670796339, 0.058711047529259571, 0.0012488357627770355, 0.88257790494148086),
    0.6: (0.91521011140642083, 0.082247584641997486, 0.0025423039515816829, 0.83550483071600503),
    1.0: (0.78776131709991564, 0.19462851873423858, 0.017610164165845781, 0.61074296253152284),
    2.0: (0.45904923694830204, 0.37382810782982472, 0.16712265522187323, 0.25234378434035055),
}

# Roots of a4(eps) = 1 - delta solved independently via the quadratic in
# cos(eps): c^2 + c + 3*delta - 2 = 0.
ORACLE_THRESHOLD = {0.1: 0.45916246704935668, 1.0 / 3.0: 0.90455689430238136}


class TestAlphas:
    @pytest.mark.parametrize("eps", sorted(ORACLE_ALPHAS))
    def test_closed_form_against_oracle(self, eps):
        got = up.alphas_uniform_cap(eps).as_tuple()
        assert max_abs(np.array(got) - np.array(ORACLE_ALPHAS[eps])) < 1e-13

    @pytest.mark.parametrize("eps", [0.1, 0.459, 1.0, 2.0, np.pi])
    def test_axial_quadrature_matches_closed_form(self, eps):
        got = np.array(up.alphas_axial(mis.UniformCap(eps)).as_tuple())
        want = np.array(up.alphas_uniform_cap(eps).as_tuple())
        assert max_abs(got - want) < 1e-10

    def test_isotropic_limit(self):
        np.testing.assert_allclose(
            up.alphas_uniform_cap(np.pi).as_tuple(), [1 / 3] * 4, atol=1e-12
        )

    def test_sharp_limit(self):
        a = up.alphas_uniform_cap(1e-8)
        np.testing.assert_allclose(a.as_tuple(), [1, 0, 0, 1], atol=1e-14)

    def test_sum_identities_for_axial_model(self):
        model = mis.AxialDensity(0.8, lambda t: np.exp(-3.0 * t))
        a = up.alphas_axial(model)
        assert abs(a.a1 + a.a2 + a.a3 - 1.0) < 1e-12
        assert abs(2 * a.a2 + a.a4 - 1.0) < 1e-12

    def test_orderings(self):
        for eps in np.linspace(0.01, np.pi, 100):
            a = up.alphas_uniform_cap(eps)
            assert a.a1 >= a.a4 - 1e-12
            assert a.a2 >= a.a3 - 1e-12

    @pytest.mark.parametrize("eps", [0.0, -1.0, 3.5])
    def test_domain_errors(self, eps):
        with pytest.raises(ValueError, match="epsilon"):
            up.alphas_uniform_cap(eps)

    def test_invalid_alphas_rejected(self):
        with pytest.raises(ValueError, match="a1"):
            up.Alphas(1.4, -0.2, -0.2, 1.4)
        with pytest.raises(ValueError, match="must equal 1"):
            up.Alphas(0.5, 0.3, 0.2, 0.9)


class TestEffects:
    def test_z_direction_is_diagonal_with_alphas(self):
        eps = 0.459
        triple = up.effects(Z, mis.UniformCap(eps))
        a = up.alphas_uniform_cap(eps)
        assert max_abs(triple.f_plus - np.diag([a.a1, a.a2, a.a3])) < 1e-8
        assert max_abs(triple.f_zero - np.diag([a.a2, a.a4, a.a2])) < 1e-8
        assert max_abs(triple.f_minus - np.diag([a.a3, a.a2, a.a1])) < 1e-8

    def test_isotropic_limit(self):
        triple = up.effects(Z, mis.UniformCap(np.pi))
        for i in (1, 0, -1):
            assert max_abs(triple.effect(i) - np.eye(3) / 3) < 1e-8

    def test_sharp_limit(self):
        triple = up.effects(Z, mis.UniformCap(1e-3))
        proj = sc.sharp_projectors(Z)
        for i in (1, 0, -1):
            assert float(np.linalg.norm(triple.effect(i) - proj.projector(i))) < 1e-5

    def test_invariants_random_directions(self, rng):
        for _ in range(25):
            n = sc.random_unit_vector(rng)
            eps = 0.05 + rng.random() * (np.pi - 0.05)
            triple = up.effects(n, mis.UniformCap(eps))
            assert max_abs(sum(triple.as_tuple()) - np.eye(3)) < 1e-10
            for i in (1, 0, -1):
                w = np.linalg.eigvalsh(triple.effect(i))
                assert w[0] > -1e-10 and w[-1] < 1 + 1e-10
                assert abs(np.sum(w) - 1.0) < 1e-8

    def test_effect_spectra_are_alpha_permutations(self, rng):
        for _ in range(10):
            n = sc.random_unit_vector(rng)
            eps = 0.2 + rng.random() * 2.0
            triple = up.effects(n, mis.UniformCap(eps))
            a = up.alphas_uniform_cap(eps)
            for i in (1, 0, -1):
                got = np.sort(np.linalg.eigvalsh(triple.effect(i)))
                assert max_abs(got - np.sort(a.spectrum(i))) < 1e-8

    def test_covariance(self, rng):
        for _ in range(20):
            n = sc.random_unit_vector(rng)
            r = sc.random_rotation(rng)
            eps = 0.2 + rng.random() * 2.5
            model = mis.UniformCap(eps)
            d = sc.wigner_d1(r)
            t1 = up.effects(n, model)
            t2 = up.effects(r.T @ n, model)
            for i in (1, 0, -1):
                delta = d @ t1.effect(i) @ d.conj().T - t2.effect(i)
                assert float(np.linalg.norm(delta)) < 1e-8

    def test_shared_eigenbasis(self, rng):
        for _ in range(20):
            n = sc.random_unit_vector(rng)
            eps = 0.2 + rng.random() * 2.5
            triple = up.effects(n, mis.UniformCap(eps))
            basis = np.column_stack(sc.sharp_eigenvectors(n))
            for i in (1, 0, -1):
                conj = basis.conj().T @ triple.effect(i) @ basis
                off = conj - np.diag(np.diag(conj))
                assert max_abs(off) < 1e-10
            fs = triple.as_tuple()
            for a in range(3):
                for b in range(a + 1, 3):
                    assert float(np.linalg.norm(fs[a] @ fs[b] - fs[b] @ fs[a])) < 1e-10

    def test_matches_generic_integrator(self):
        # the dedicated construction agrees with the generic per-node path
        eps = 0.8
        n = sc.unit_from_polar(1.1, 0.4)
        model = mis.UniformCap(eps)
        spec = mis.QuadratureSpec(32, 32)
        triple = up.effects(n, model, spec)
        oracle = mis.sphere_integral_matrix(
            lambda m: sc.sharp_projectors(m).p_plus,
            lambda m: model.density(n, m),
            spec,
            axis=n,
            u_range=model.support_u(),
        )
        assert max_abs(triple.f_plus - oracle) < 1e-10

    def test_coarse_spec_raises(self):
        with pytest.raises(up.QuadratureError, match="too"):
            up.effects(Z, mis.UniformCap(1.0), mis.QuadratureSpec(64, 2))

    def test_axial_model(self):
        model = mis.AxialDensity(0.9, lambda t: np.cos(t / 2) ** 2)
        n = sc.unit_from_polar(0.9, 2.0)
        triple = up.effects(n, model)
        rebuilt = up.effects_from_alphas(n, up.alphas_axial(model))
        for i in (1, 0, -1):
            assert max_abs(triple.effect(i) - rebuilt.effect(i)) < 1e-10


class TestDegenerateSpectrum:
    def test_zero_effect_has_degenerate_eigenvalue(self):
        # F(0) carries a doubly degenerate eigenvalue; any orthonormal
        # eigenbasis is acceptable from the generic eigensolver, but the
        # sharp eigenrays always diagonalize it
        eps = 0.7
        triple = up.effects(Z, mis.UniformCap(eps))
        w, v = sc.hermitian_eigensystem(triple.f_zero)
        a = up.alphas_uniform_cap(eps)
        np.testing.assert_allclose(np.sort(w), np.sort([a.a2, a.a4, a.a2]), atol=1e-10)
        assert max_abs(v.conj().T @ v - np.eye(3)) < 1e-10
        rebuilt = (v * w) @ v.conj().T
        assert max_abs(rebuilt - triple.f_zero) < 1e-10


class TestEffectsFromAlphas:
    def test_z_gives_exact_diagonals(self):
        a = up.alphas_uniform_cap(0.7)
        triple = up.effects_from_alphas(Z, a)
        assert max_abs(triple.f_plus - np.diag([a.a1, a.a2, a.a3])) < 1e-14
        assert max_abs(triple.f_zero - np.diag([a.a2, a.a4, a.a2])) < 1e-14
        assert max_abs(triple.f_minus - np.diag([a.a3, a.a2, a.a1])) < 1e-14

    def test_agrees_with_quadrature(self, rng):
        for _ in range(10):
            n = sc.random_unit_vector(rng)
            eps = 0.1 + rng.random() * 2.5
            got = up.effects_from_alphas(n, up.alphas_uniform_cap(eps))
            want = up.effects(n, mis.UniformCap(eps))
            for i in (1, 0, -1):
                assert float(np.linalg.norm(got.effect(i) - want.effect(i))) < 1e-8

    def test_sharp_alphas_give_projectors(self):
        n = sc.unit_from_polar(0.8, 0.3)
        triple = up.effects_from_alphas(n, up.Alphas(1.0, 0.0, 0.0, 1.0))
        proj = sc.sharp_projectors(n)
        for i in (1, 0, -1):
            assert max_abs(triple.effect(i) - proj.projector(i)) < 1e-12


class TestCondition2:
    def test_holds_at_0_4(self):
        ok, margins = up.condition2_check(up.alphas_uniform_cap(0.4), 0.1)
        assert ok
        assert all(m >= 0 for m in margins.values())

    def test_fails_at_0_5(self):
        ok, margins = up.condition2_check(up.alphas_uniform_cap(0.5), 0.1)
        assert not ok
        assert margins["a4"] < 0  # the binding constraint
        assert margins["a1"] > 0 and margins["a2"] > 0 and margins["a3"] > 0

    def test_sharp_alphas_always_pass(self):
        ok, _ = up.condition2_check(up.Alphas(1.0, 0.0, 0.0, 1.0), 0.0)
        assert ok

    def test_margin_values(self):
        a = up.alphas_uniform_cap(0.4)
        _, margins = up.condition2_check(a, 0.1)
        assert abs(margins["a1"] - (a.a1 - 0.9)) < 1e-15
        assert abs(margins["a2"] - (0.1 - a.a2)) < 1e-15

    def test_delta_domain(self):
        with pytest.raises(ValueError, match="delta"):
            up.condition2_check(up.alphas_uniform_cap(0.4), 0.5)


class TestThreshold:
    def test_reference_tolerance(self):
        eps = up.threshold_epsilon(0.1)
        assert abs(eps - ORACLE_THRESHOLD[0.1]) < 2e-6
        assert abs(eps - 0.459) < 5e-4
        assert abs(np.degrees(eps) - 26.3) < 0.05

    def test_one_third(self):
        eps = up.threshold_epsilon(1.0 / 3.0)
        assert abs(eps - ORACLE_THRESHOLD[1.0 / 3.0]) < 2e-6

    def test_small_delta_gives_small_epsilon(self):
        assert up.threshold_epsilon(1e-6) < 5e-3

    def test_condition_holds_at_threshold_and_fails_above(self):
        for delta in (0.05, 0.1, 0.3, 0.45):
            eps = up.threshold_epsilon(delta)
            ok, _ = up.condition2_check(up.alphas_uniform_cap(eps), delta)
            assert ok
            ok_above, _ = up.condition2_check(up.alphas_uniform_cap(eps + 1e-3), delta)
            assert not ok_above

    def test_rejects_zero_delta(self):
        with pytest.raises(ValueError, match="delta"):
            up.threshold_epsilon(0.0)


class TestProbabilities:
    def test_middle_state_at_z(self):
        a = up.alphas_uniform_cap(0.4)
        triple = up.effects(Z, mis.UniformCap(0.4))
        p = up.outcome_probabilities(np.array([0, 1, 0], dtype=complex), triple)
        np.testing.assert_allclose(p, (a.a2, a.a4, a.a2), atol=1e-10)

    def test_top_state_at_z(self):
        a = up.alphas_uniform_cap(0.4)
        triple = up.effects(Z, mis.UniformCap(0.4))
        p = up.outcome_probabilities(np.array([1, 0, 0], dtype=complex), triple)
        np.testing.assert_allclose(p, (a.a1, a.a2, a.a3), atol=1e-10)

    def test_sharp_limit(self):
        triple = up.effects_from_alphas(Z, up.Alphas(1.0, 0.0, 0.0, 1.0))
        p = up.outcome_probabilities(np.array([1, 0, 0], dtype=complex), triple)
        np.testing.assert_allclose(p, (1, 0, 0), atol=1e-14)

    def test_sum_to_one_random_states(self, rng):
        triple = up.effects(sc.unit_from_polar(1.2, 0.5), mis.UniformCap(0.8))
        for _ in range(20):
            v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            v = v / np.linalg.norm(v)
            p = up.outcome_probabilities(v, triple)
            assert abs(sum(p) - 1.0) < 1e-12
            assert all(0.0 <= x <= 1.0 for x in p)

    def test_rejects_unnormalized(self):
        triple = up.effects(Z, mis.UniformCap(0.4))
        with pytest.raises(ValueError, match="normalized"):
            up.outcome_probabilities(np.array([1.0, 1.0, 0.0]), triple)


class TestSimulation:
    def test_deterministic_for_fixed_seed(self):
        psi = np.array([0, 1, 0], dtype=complex)
        a = up.simulate_outcomes(psi, Z, mis.UniformCap(0.4), 2000, seed=11)
        b = up.simulate_outcomes(psi, Z, mis.UniformCap(0.4), 2000, seed=11)
        assert a == b

    def test_counts_sum_to_trials(self):
        psi = np.array([1, 0, 0], dtype=complex)
        counts = up.simulate_outcomes(psi, Z, mis.UniformCap(1.0), 5000, seed=1)
        assert sum(counts) == 5000

    def test_frequencies_match_analytics(self):
        trials = 100_000
        psi = np.array([0, 1, 0], dtype=complex)
        model = mis.UniformCap(0.4)
        counts = up.simulate_outcomes(psi, Z, model, trials, seed=9)
        p = up.outcome_probabilities(psi, up.effects(Z, model))
        for c, prob in zip(counts, p):
            sigma = np.sqrt(prob * (1 - prob) / trials)
            assert abs(c / trials - prob) < 4 * sigma

    def test_sharp_limit_all_plus(self):
        psi = np.array([1, 0, 0], dtype=complex)
        counts = up.simulate_outcomes(psi, Z, mis.UniformCap(1e-6), 1000, seed=2)
        assert counts == (1000, 0, 0)

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError, match="trials"):
            up.simulate_outcomes(np.array([1, 0, 0], dtype=complex), Z, mis.UniformCap(0.4), 0, seed=0)

    def test_axial_model_sampling(self):
        model = mis.AxialDensity(0.7, lambda t: np.cos(t / 2) ** 2)
        psi = np.array([0, 1, 0], dtype=complex)
        trials = 50_000
        counts = up.simulate_outcomes(psi, Z, model, trials, seed=21)
        p = up.outcome_probabilities(psi, up.effects(Z, model))
        for c, prob in zip(counts, p):
            sigma = np.sqrt(prob * (1 - prob) / trials)
            assert abs(c / trials - prob) < 5 * sigma


class TestColorAssignment:
    def test_outcome_zero_at_z(self):
        a = up.alphas_uniform_cap(0.4)
        assignment = up.color_assignment(Z, a, 0.1, outcome=0)
        colors = {tuple(np.round(ray.real, 9)): color for ray, color in assignment}
        assert colors[(0.0, 1.0, 0.0)] == up.AT
        assert colors[(1.0, 0.0, 0.0)] == up.AF
        assert colors[(0.0, 0.0, 1.0)] == up.AF

    def test_outcome_plus_at_z(self):
        a = up.alphas_uniform_cap(0.4)
        assignment = up.color_assignment(Z, a, 0.1, outcome=1)
        colors = {tuple(np.round(ray.real, 9)): color for ray, color in assignment}
        assert colors[(1.0, 0.0, 0.0)] == up.AT
        assert colors[(0.0, 1.0, 0.0)] == up.AF
        assert colors[(0.0, 0.0, 1.0)] == up.AF

    def test_condition_failure_gives_u(self):
        # at eps = 0.6 the middle eigenvalue sits between delta and 1-delta
        a = up.alphas_uniform_cap(0.6)
        assignment = up.color_assignment(Z, a, 0.1, outcome=0)
        colors = {tuple(np.round(ray.real, 9)): color for ray, color in assignment}
        assert colors[(0.0, 1.0, 0.0)] == up.U
        assert colors[(1.0, 0.0, 0.0)] == up.AF

    def test_rejects_bad_outcome(self):
        with pytest.raises(ValueError, match="outcome"):
            up.color_assignment(Z, up.alphas_uniform_cap(0.4), 0.1, outcome=2)
