import numpy as np
import pytest

from unsharp_spin import spin_core as sc


def max_abs(a):
    return float(np.max(np.abs(np.asarray(a))))


class TestSpinMatrices:
    def test_sz_is_diagonal_1_0_minus1(self):
        _, _, sz = sc.spin_matrices()
        assert max_abs(sz - np.diag([1.0, 0.0, -1.0])) == 0.0

    def test_commutation_relations(self):
        sx, sy, sz = sc.spin_matrices()
        assert max_abs(sx @ sy - sy @ sx - 1j * sz) < 1e-12
        assert max_abs(sy @ sz - sz @ sy - 1j * sx) < 1e-12
        assert max_abs(sz @ sx - sx @ sz - 1j * sy) < 1e-12

    def test_each_component_has_eigenvalues_1_0_minus1(self):
        for s in sc.spin_matrices():
            np.testing.assert_allclose(np.linalg.eigvalsh(s), [-1, 0, 1], atol=1e-12)

    def test_hermitian(self):
        for s in sc.spin_matrices():
            assert max_abs(s - s.conj().T) < 1e-15


class TestSpinAlong:
    def test_z_gives_sz(self):
        _, _, sz = sc.spin_matrices()
        assert max_abs(sc.spin_along([0, 0, 1]) - sz) == 0.0

    def test_x_gives_sx(self):
        sx, _, _ = sc.spin_matrices()
        assert max_abs(sc.spin_along([1, 0, 0]) - sx) == 0.0

    def test_tilted_direction_eigenvalues(self):
        n = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
        w = np.linalg.eigvalsh(sc.spin_along(n))
        np.testing.assert_allclose(w, [-1, 0, 1], atol=1e-10)

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError, match="unit"):
            sc.spin_along([1.0, 1.0, 0.0])

    def test_spectral_decomposition(self, rng=None):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = sc.random_unit_vector(rng)
            triple = sc.sharp_projectors(n)
            recombined = triple.p_plus - triple.p_minus
            assert max_abs(recombined - sc.spin_along(n)) < 1e-12


class TestSharpProjectors:
    def test_z_plus_projector(self):
        triple = sc.sharp_projectors([0, 0, 1])
        assert max_abs(triple.p_plus - np.diag([1.0, 0.0, 0.0])) < 1e-15

    def test_explicit_matrix_for_tilted_direction(self):
        # rank-1 form in polar angles; the (0,0) entry is cos^4(theta/2)
        theta, phi = 0.7, 1.3
        m = sc.unit_from_polar(theta, phi)
        p1 = sc.sharp_projectors(m).p_plus
        c2, s2, st, ct = (
            np.cos(theta / 2),
            np.sin(theta / 2),
            np.sin(theta),
            np.cos(theta),
        )
        expected = np.array(
            [
                [
                    c2**4,
                    np.exp(-1j * phi) * (1 + ct) * st / (2 * np.sqrt(2)),
                    np.exp(-2j * phi) * st**2 / 4,
                ],
                [
                    np.exp(1j * phi) * (1 + ct) * st / (2 * np.sqrt(2)),
                    st**2 / 2,
                    np.sqrt(2) * np.exp(-1j * phi) * c2 * s2**3,
                ],
                [
                    np.exp(2j * phi) * st**2 / 4,
                    np.sqrt(2) * np.exp(1j * phi) * c2 * s2**3,
                    s2**4,
                ],
            ]
        )
        assert max_abs(p1 - expected) < 1e-12

    def test_first_entry_is_cos4_half_theta(self):
        for theta in (0.2, 1.1, 2.9):
            m = sc.unit_from_polar(theta, 0.8)
            p1 = sc.sharp_projectors(m).p_plus
            assert abs(p1[0, 0].real - np.cos(theta / 2) ** 4) < 1e-13

    def test_x_direction_eigenrays(self):
        vp, v0, vm = sc.sharp_eigenvectors([1, 0, 0])
        expect_plus = np.array([1, np.sqrt(2), 1]) / 2
        expect_zero = np.array([-1, 0, 1]) / np.sqrt(2)
        expect_minus = np.array([1, -np.sqrt(2), 1]) / 2
        assert abs(abs(np.vdot(vp, expect_plus)) - 1) < 1e-12
        assert abs(abs(np.vdot(v0, expect_zero)) - 1) < 1e-12
        assert abs(abs(np.vdot(vm, expect_minus)) - 1) < 1e-12

    def test_matches_numerical_eigendecomposition(self, rng):
        # oracle: eigh of the spin observable, projector onto each eigenspace
        for _ in range(25):
            n = sc.random_unit_vector(rng)
            s = sc.spin_along(n)
            w, v = np.linalg.eigh(s)
            triple = sc.sharp_projectors(n)
            for eigval, proj in ((1, triple.p_plus), (0, triple.p_zero), (-1, triple.p_minus)):
                k = int(np.argmin(np.abs(w - eigval)))
                oracle = np.outer(v[:, k], v[:, k].conj())
                assert max_abs(proj - oracle) < 1e-10

    def test_triple_invariants(self, rng):
        for _ in range(50):
            triple = sc.sharp_projectors(sc.random_unit_vector(rng))
            ps = triple.as_tuple()
            assert max_abs(sum(ps) - np.eye(3)) < 1e-12
            for i in range(3):
                assert max_abs(ps[i] @ ps[i] - ps[i]) < 1e-12
                for j in range(i + 1, 3):
                    assert max_abs(ps[i] @ ps[j]) < 1e-12

    def test_poles(self):
        for n in ([0, 0, 1], [0, 0, -1]):
            triple = sc.sharp_projectors(n)
            assert max_abs(sum(triple.as_tuple()) - np.eye(3)) < 1e-14


class TestRotations:
    def test_identity(self):
        assert max_abs(sc.rotation_from_euler(0, 0, 0) - np.eye(3)) == 0.0

    def test_pi_about_y_flips_z(self):
        r = sc.rotation_from_euler(0.0, np.pi, 0.0)
        np.testing.assert_allclose(r @ [0, 0, 1], [0, 0, -1], atol=1e-15)

    def test_orthogonality(self):
        r = sc.rotation_from_euler(0.3, 0.7, 1.1)
        assert max_abs(r.T @ r - np.eye(3)) < 1e-12
        assert abs(np.linalg.det(r) - 1.0) < 1e-12

    def test_euler_round_trip(self, rng):
        for _ in range(100):
            r = sc.random_rotation(rng)
            a, b, g = sc.euler_from_rotation(r)
            assert max_abs(sc.rotation_from_euler(a, b, g) - r) < 1e-12

    def test_euler_round_trip_gimbal(self):
        for r in (
            np.eye(3),
            sc.rotation_z(1.2),
            sc.rotation_y(np.pi),
            sc.rotation_z(0.4) @ sc.rotation_y(np.pi),
            sc.rotation_from_euler(2.0, np.pi, 0.5),
        ):
            a, b, g = sc.euler_from_rotation(r)
            assert max_abs(sc.rotation_from_euler(a, b, g) - r) < 1e-12

    def test_rejects_non_rotation(self):
        with pytest.raises(ValueError, match="orthogonal"):
            sc.euler_from_rotation(np.diag([1.0, 2.0, 1.0]))
        with pytest.raises(ValueError, match="determinant"):
            sc.euler_from_rotation(np.diag([1.0, 1.0, -1.0]))


class TestWignerD1:
    def test_identity_rotation(self):
        assert max_abs(sc.wigner_d1(np.eye(3)) - np.eye(3)) < 1e-15

    def test_unitary(self, rng):
        for _ in range(50):
            d = sc.wigner_d1(sc.random_rotation(rng))
            assert max_abs(d.conj().T @ d - np.eye(3)) < 1e-12

    def test_pi_about_y_maps_plus_to_minus(self):
        d = sc.wigner_d1(sc.rotation_y(np.pi))
        out = d @ np.diag([1.0, 0, 0]).astype(complex) @ d.conj().T
        assert max_abs(out - np.diag([0.0, 0, 1.0])) < 1e-12

    def test_projector_covariance(self, rng):
        for _ in range(100):
            r = sc.random_rotation(rng)
            m = sc.random_unit_vector(rng)
            d = sc.wigner_d1(r)
            before = sc.sharp_projectors(m)
            after = sc.sharp_projectors(r.T @ m)
            for i in (1, 0, -1):
                delta = d @ before.projector(i) @ d.conj().T - after.projector(i)
                assert float(np.linalg.norm(delta)) < 1e-10

    def test_composition_is_reversed(self, rng):
        # conjugating by D(R) pulls directions back along R, so D composes
        # contravariantly: D(R1 R2) = D(R2) D(R1)
        for _ in range(100):
            r1, r2 = sc.random_rotation(rng), sc.random_rotation(rng)
            lhs = sc.wigner_d1(r1 @ r2)
            rhs = sc.wigner_d1(r2) @ sc.wigner_d1(r1)
            assert float(np.linalg.norm(lhs - rhs)) < 1e-10

    def test_representation_homomorphism(self, rng):
        for _ in range(100):
            r1, r2 = sc.random_rotation(rng), sc.random_rotation(rng)
            lhs = sc.spin1_representation(r1 @ r2)
            rhs = sc.spin1_representation(r1) @ sc.spin1_representation(r2)
            assert float(np.linalg.norm(lhs - rhs)) < 1e-10

    def test_against_expm_oracle(self, rng):
        # oracle: exponentiate the generators by eigendecomposition
        def expm_herm(h, t):
            w, v = np.linalg.eigh(h)
            return v @ np.diag(np.exp(-1j * t * w)) @ v.conj().T

        sx, sy, sz = sc.spin_matrices()
        for _ in range(25):
            r = sc.random_rotation(rng)
            a, b, g = sc.euler_from_rotation(r)
            oracle = expm_herm(sz, a) @ expm_herm(sy, b) @ expm_herm(sz, g)
            assert max_abs(sc.spin1_representation(r) - oracle) < 1e-12


class TestHermitianEigensystem:
    def test_diagonal(self):
        w, _ = sc.hermitian_eigensystem(np.diag([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(w, [1, 0, 0], atol=1e-14)

    def test_sx_eigenvalues(self):
        sx, _, _ = sc.spin_matrices()
        w, _ = sc.hermitian_eigensystem(sx)
        np.testing.assert_allclose(w, [1, 0, -1], atol=1e-12)

    def test_reconstruction(self, rng):
        for _ in range(50):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            h = a + a.conj().T
            w, v = sc.hermitian_eigensystem(h)
            assert np.all(np.diff(w) <= 1e-12)  # descending
            assert max_abs(v.conj().T @ v - np.eye(3)) < 1e-10
            rebuilt = (v * w) @ v.conj().T
            assert float(np.linalg.norm(rebuilt - h)) < 1e-10
            for k in range(3):
                assert float(np.linalg.norm(h @ v[:, k] - w[k] * v[:, k])) < 1e-10

    def test_rejects_non_hermitian(self):
        m = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            sc.hermitian_eigensystem(m)


class TestCanonicalPhase:
    def test_scales_and_rotates_phase(self):
        v = np.array([0, 2.0, 0]) * np.exp(1j * 0.7)
        out = sc.canonical_phase(v)
        np.testing.assert_allclose(out, [0, 1, 0], atol=1e-15)

    def test_first_nonzero_real_positive(self):
        v = np.array([0.3j, 0.5, 0.1]) / np.linalg.norm([0.3, 0.5, 0.1])
        out = sc.canonical_phase(v)
        assert out[0].imag == 0.0 and out[0].real > 0

    def test_rejects_zero(self):
        with pytest.raises(ValueError, match="zero"):
            sc.canonical_phase([0, 0, 0])
