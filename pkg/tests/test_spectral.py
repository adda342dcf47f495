import numpy as np
import pytest

from blindim import model, spectral
from oracles import direct_channel_matrix, direct_isbi_matrix


class TestIdftBasis:
    def test_n1(self):
        np.testing.assert_allclose(spectral.idft_basis(1), [[1.0]])

    def test_common_precoder_is_constant(self):
        F = spectral.idft_basis(3)
        np.testing.assert_allclose(F[:, 0], np.full(3, 1 / np.sqrt(3)), atol=1e-15)

    def test_second_column_n4(self):
        # forced by unitarity: the listing [1, j, -1, j]/2 would not be
        # orthogonal to f_4 = [1, -j, -1, j]/2
        F = spectral.idft_basis(4)
        np.testing.assert_allclose(F[:, 1], 0.5 * np.array([1, 1j, -1, -1j]), atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 11])
    def test_unitary(self, n):
        F = spectral.idft_basis(n)
        np.testing.assert_allclose(F.conj().T @ F, np.eye(n), atol=1e-12)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            spectral.idft_basis(0)


class TestCirculant:
    def test_scalar(self):
        np.testing.assert_array_equal(spectral.circulant([3.0]), [[3.0]])

    def test_identity(self):
        np.testing.assert_array_equal(spectral.circulant([1, 0, 0]), np.eye(3))

    def test_columns_are_cyclic_shifts(self):
        c = np.array([1 + 2j, 0.5, 0, -1j])
        C = spectral.circulant(c)
        for m in range(4):
            np.testing.assert_array_equal(C[:, m], np.roll(c, m))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            spectral.circulant([])


class TestDiagonalizeCirculant:
    def test_identity(self):
        np.testing.assert_allclose(spectral.diagonalize_circulant(np.eye(4)), np.ones(4))

    def test_shift_matrix_spectrum(self):
        lam = spectral.diagonalize_circulant(spectral.circulant([0, 1, 0, 0, 0]))
        np.testing.assert_allclose(sorted(np.abs(lam)), np.ones(5), atol=1e-12)
        np.testing.assert_allclose(np.sort(np.angle(lam)),
                                   np.sort(np.angle(np.exp(-2j * np.pi * np.arange(5) / 5))),
                                   atol=1e-12)

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        c = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        C = spectral.circulant(c)
        lam = spectral.diagonalize_circulant(C)
        F = spectral.idft_basis(7)
        back = F @ np.diag(lam) @ F.conj().T
        assert np.linalg.norm(back - C) <= 1e-10 * np.linalg.norm(C)

    def test_rejects_noncirculant(self):
        with pytest.raises(ValueError):
            spectral.diagonalize_circulant(np.arange(9.0).reshape(3, 3))

    def test_eigenvalue_ordering_matches_basis(self):
        rng = np.random.default_rng(1)
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        C = spectral.circulant(c)
        lam = spectral.diagonalize_circulant(C)
        F = spectral.idft_basis(6)
        for m in range(6):
            np.testing.assert_allclose(C @ F[:, m], lam[m] * F[:, m], atol=1e-10)


def _structured(cfg, seed=0):
    plan = model.make_plan(cfg)
    ch = model.sample_channel_iid(cfg, model.trial_rng(seed, 0))
    return plan, ch, spectral.build_structured(cfg, plan, ch)


class TestBuildStructured:
    def test_reference_noncirculant_shape(self):
        # N=3, L_D=4, L_I=2: Hnc = [[0, -h2, 0], [0, 0, 0], [0, 0, h3]]
        cfg = model.SystemConfig.symmetric(K=2, L_D=4, L_I=2, U=2)
        plan, ch, st = _structured(cfg)
        h = ch.h(0, 0, 0)
        expect = np.zeros((3, 3), dtype=complex)
        expect[0, 1] = -h[2]
        expect[2, 2] = h[3]
        np.testing.assert_allclose(st.desired[(0, 0)].Hnc, expect, atol=1e-15)

    def test_decomposition_is_exact(self):
        cfg = model.SystemConfig.symmetric(K=2, L_D=4, L_I=2, U=2)
        _, _, st = _structured(cfg)
        link = st.desired[(0, 0)]
        np.testing.assert_array_equal(link.Hbar, link.Hc + link.Hnc)

    def test_lower_block_zero_when_n_covers_channel(self):
        cfg = model.SystemConfig.symmetric(K=2, L_D=8, L_I=3, U=1)
        plan, _, st = _structured(cfg)
        assert plan.N >= 8
        np.testing.assert_array_equal(st.desired[(0, 0)].Hlow, 0.0)

    def test_block_dimensions_sum_to_n(self):
        cfg = model.SystemConfig.symmetric(K=2, L_D=9, L_I=4, U=2)
        plan, _, st = _structured(cfg)
        link = st.desired[(0, 0)]
        assert link.Hupp.shape[0] + link.Hlow.shape[0] == plan.N
        assert link.Hnc.shape == (plan.N, plan.N)

    @pytest.mark.parametrize("params", [(3, 2, 4), (8, 2, 8), (8, 2, 5), (8, 3, 6),
                                        (6, 4, 8), (9, 1, 8)])
    def test_channel_matrix_matches_convolution_oracle(self, params):
        N, L_I, L_kk = params
        rng = np.random.default_rng(42)
        for _ in range(5):
            h = rng.standard_normal(L_kk) + 1j * rng.standard_normal(L_kk)
            built = (spectral._build_circulant_part(h, L_kk, N)
                     + spectral._build_noncirculant_part(h, L_kk, N, L_I))
            np.testing.assert_allclose(built, direct_channel_matrix(h, N, L_I), atol=1e-12)

    @pytest.mark.parametrize("params", [(3, 2, 4), (8, 2, 8), (8, 2, 5), (8, 2, 6),
                                        (6, 4, 8), (9, 1, 8)])
    def test_isbi_matrix_matches_leakage_oracle(self, params):
        N, L_I, L_kk = params
        rng = np.random.default_rng(43)
        for _ in range(5):
            h = rng.standard_normal(L_kk) + 1j * rng.standard_normal(L_kk)
            np.testing.assert_allclose(
                spectral._build_isbi_part(h, L_kk, N, L_I),
                direct_isbi_matrix(h, N, L_I),
                atol=1e-12,
            )

    def test_ici_matrices_have_idft_eigenvectors(self):
        cfg = model.SystemConfig.symmetric(K=3, L_D=8, L_I=2, U=3)
        plan, _, st = _structured(cfg)
        F = spectral.idft_basis(plan.N)
        for M in st.ici.values():
            for m in range(plan.N):
                f = F[:, m]
                lam = f.conj() @ (M @ f)
                res = np.linalg.norm(M @ f - lam * f)
                assert res <= 1e-10 * max(np.linalg.norm(M), 1e-30)

    def test_asymmetric_lengths(self):
        cir = [[5, 2, 2], [2, 6, 2], [2, 2, 8]]
        cfg = model.SystemConfig(K=3, users_per_cell=[2, 2, 2], cir_len=cir)
        plan, ch, st = _structured(cfg)
        for k, L_kk in enumerate([5, 6, 8]):
            h = ch.h(k, k, 0)
            np.testing.assert_allclose(
                st.desired[(k, 0)].Hbar, direct_channel_matrix(h, plan.N, plan.L_I),
                atol=1e-12,
            )
