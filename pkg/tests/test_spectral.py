import numpy as np
import pytest
from scipy import ndimage

from freqaug.spectral import (
    Spectrum,
    decompose,
    dft2,
    gaussian_kernel,
    idft2,
    low_pass,
)

from oracles import conv2_reflect101, naive_dft2, naive_idft2, wrap_angle


def random_image(rng, h, w, c=1, dtype=np.float32):
    return rng.random((h, w, c)).astype(dtype)


class TestGaussianKernel:
    def test_single_tap_is_identity_weight(self):
        k = gaussian_kernel(1, 0.5)
        assert k.weights.tolist() == [1.0]

    def test_size3_sigma05_matches_formula(self):
        k = gaussian_kernel(3, 0.5)
        # independent evaluation of exp(-d^2 / (2 sigma^2)), d in {-1,0,1}
        raw = [np.exp(-1.0 / 0.5), 1.0, np.exp(-1.0 / 0.5)]
        expected = np.array(raw) / np.sum(raw)
        assert np.allclose(k.weights, expected, rtol=0, atol=1e-15)
        assert [round(w, 4) for w in k.weights] == [0.1065, 0.787, 0.1065]

    @pytest.mark.parametrize("size,sigma", [(3, 0.5), (5, 1.0), (9, 2.0), (15, 0.3)])
    def test_normalized_positive_symmetric(self, size, sigma):
        k = gaussian_kernel(size, sigma)
        assert abs(k.weights.sum() - 1.0) <= 1e-12
        assert (k.weights > 0).all()
        # symmetry must be exact, not approximate
        assert np.array_equal(k.weights, k.weights[::-1])

    @pytest.mark.parametrize("size", [0, -3, 2, 4])
    def test_rejects_bad_size(self, size):
        with pytest.raises(ValueError):
            gaussian_kernel(size, 0.5)

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_rejects_bad_sigma(self, sigma):
        with pytest.raises(ValueError):
            gaussian_kernel(3, sigma)


class TestLowPass:
    def test_identity_kernel_is_bitwise_identity(self):
        rng = np.random.default_rng(0)
        x = random_image(rng, 7, 9, 3)
        assert np.array_equal(low_pass(x, gaussian_kernel(1, 1.0)), x)

    def test_constant_image_unchanged(self):
        x = np.full((6, 5, 3), 0.43, dtype=np.float32)
        out = low_pass(x, gaussian_kernel(5, 1.0))
        assert np.abs(out - x).max() <= 1e-6

    def test_impulse_response_is_weight_outer_product(self):
        k = gaussian_kernel(3, 0.5)
        x = np.zeros((5, 5, 1))
        x[2, 2, 0] = 1.0
        out = low_pass(x, k)
        expected = np.zeros((5, 5))
        expected[1:4, 1:4] = np.outer(k.weights, k.weights)
        assert np.allclose(out[:, :, 0], expected, atol=1e-15)

    @pytest.mark.parametrize("h,w,c", [(1, 1, 1), (1, 8, 1), (8, 1, 3), (4, 4, 3), (13, 16, 1)])
    @pytest.mark.parametrize("size,sigma", [(3, 0.5), (5, 1.2), (7, 2.0)])
    def test_matches_direct_2d_convolution(self, h, w, c, size, sigma):
        rng = np.random.default_rng(h * 100 + w * 10 + c)
        x = rng.random((h, w, c))  # float64 so the comparison is tight
        k = gaussian_kernel(size, sigma)
        expected = conv2_reflect101(x, np.outer(k.weights, k.weights))
        assert np.abs(low_pass(x, k) - expected).max() <= 1e-12

    def test_matches_scipy_mirror_mode(self):
        rng = np.random.default_rng(5)
        x = rng.random((12, 10, 3))
        k = gaussian_kernel(5, 1.0)
        expected = np.stack(
            [
                ndimage.convolve(x[:, :, c], np.outer(k.weights, k.weights), mode="mirror")
                for c in range(3)
            ],
            axis=2,
        )
        assert np.abs(low_pass(x, k) - expected).max() <= 1e-12

    def test_batched_equals_per_image_bits(self):
        rng = np.random.default_rng(11)
        stack = rng.random((6, 9, 7, 3)).astype(np.float32)
        k = gaussian_kernel(5, 1.5)
        batched = low_pass(stack, k)
        for i in range(stack.shape[0]):
            assert np.array_equal(batched[i], low_pass(stack[i], k))

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        x = random_image(rng, 9, 9, 3)
        k = gaussian_kernel(3, 0.7)
        assert np.array_equal(low_pass(x, k), low_pass(x, k))

    def test_rejects_2d_input(self):
        with pytest.raises(ValueError):
            low_pass(np.zeros((4, 4)), gaussian_kernel(3, 0.5))

    def test_stronger_blur_shrinks_variance(self):
        rng = np.random.default_rng(3)
        x = rng.random((16, 16, 1))
        variances = [
            low_pass(x, gaussian_kernel(3, s)).var() for s in (0.3, 0.5, 1.0, 2.0)
        ]
        assert all(a > b for a, b in zip(variances, variances[1:]))

    def test_residual_energy_drops_after_blur(self):
        rng = np.random.default_rng(4)
        k = gaussian_kernel(3, 0.5)
        for _ in range(10):
            x = rng.random((12, 14, 1))
            hf_once = x - low_pass(x, k)
            lf = low_pass(x, k)
            hf_of_lf = lf - low_pass(lf, k)
            assert np.sum(hf_of_lf**2) <= np.sum(hf_once**2)


class TestDecompose:
    @pytest.mark.parametrize("c", [1, 3])
    def test_reconstruction(self, c):
        rng = np.random.default_rng(c)
        for _ in range(25):
            h, w = rng.integers(4, 65, size=2)
            x = random_image(rng, h, w, c)
            parts = decompose(x, gaussian_kernel(3, 0.5))
            assert np.abs(parts.lf + parts.hf - x).max() <= 1e-6

    def test_constant_image_has_empty_residual(self):
        x = np.full((8, 8, 1), 0.6, dtype=np.float32)
        parts = decompose(x, gaussian_kernel(3, 0.5))
        assert np.abs(parts.hf).max() <= 1e-6

    def test_checkerboard_lands_in_residual(self):
        rows, cols = np.indices((16, 16))
        checker = np.where((rows + cols) % 2 == 0, 1.0, -1.0)[:, :, None].astype(np.float32)
        parts = decompose(checker, gaussian_kernel(9, 2.0))
        assert np.linalg.norm(parts.lf) <= 1e-2 * np.linalg.norm(checker)
        assert np.abs(parts.hf - checker).max() <= 1e-2


class TestDft2:
    def test_constant_image_all_energy_at_dc(self):
        x = np.full((4, 6, 1), 0.5)
        spec = dft2(x)
        assert spec.amplitude[0, 0, 0] == pytest.approx(4 * 6 * 0.5, rel=1e-12)
        off_dc = spec.amplitude.copy()
        off_dc[0, 0, 0] = 0.0
        assert off_dc.max() <= 1e-9
        assert spec.phase[0, 0, 0] == 0.0

    def test_corner_impulse_is_flat_spectrum(self):
        x = np.zeros((5, 7, 1))
        x[0, 0, 0] = 1.0
        spec = dft2(x)
        assert np.abs(spec.amplitude - 1.0).max() <= 1e-12
        assert np.abs(spec.phase).max() <= 1e-12

    @pytest.mark.parametrize("h,w", [(1, 1), (2, 3), (4, 4), (5, 8), (16, 16)])
    def test_matches_naive_dft(self, h, w):
        rng = np.random.default_rng(h * 31 + w)
        x = rng.random((h, w, 2))
        spec = dft2(x)
        expected = naive_dft2(x)
        got = spec.amplitude * np.exp(1j * spec.phase)
        scale = np.abs(expected).max()
        assert np.abs(got - expected).max() <= 1e-9 * max(scale, 1.0)

    def test_linearity(self):
        rng = np.random.default_rng(9)
        x = rng.random((8, 8, 3))
        y = rng.random((8, 8, 3))
        a, b = 0.7, -1.3
        combo = dft2(a * x + b * y)
        sx, sy = dft2(x), dft2(y)
        lhs = combo.amplitude * np.exp(1j * combo.phase)
        rhs = a * sx.amplitude * np.exp(1j * sx.phase) + b * sy.amplitude * np.exp(1j * sy.phase)
        assert np.abs(lhs - rhs).max() <= 1e-9 * np.abs(rhs).max()

    def test_parseval(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            h, w = rng.integers(2, 20, size=2)
            x = rng.random((h, w, 3))
            spec = dft2(x)
            for c in range(3):
                pixel_energy = np.sum(x[:, :, c] ** 2)
                spectral_energy = np.sum(spec.amplitude[:, :, c] ** 2) / (h * w)
                assert abs(pixel_energy - spectral_energy) <= 1e-6 * pixel_energy

    def test_conjugate_symmetry_of_real_images(self):
        rng = np.random.default_rng(12)
        x = rng.random((6, 9, 1))
        spec = dft2(x)
        h, w = 6, 9
        for u in range(h):
            for v in range(w):
                mu, mv = (-u) % h, (-v) % w
                assert spec.amplitude[u, v, 0] == pytest.approx(
                    spec.amplitude[mu, mv, 0], rel=1e-9, abs=1e-9
                )
                assert abs(wrap_angle(spec.phase[u, v, 0] + spec.phase[mu, mv, 0])) <= 1e-9

    def test_phase_in_principal_range(self):
        rng = np.random.default_rng(13)
        spec = dft2(rng.random((16, 16, 3)) - 0.5)
        assert (spec.phase > -np.pi).all()
        assert (spec.phase <= np.pi).all()

    def test_phase_zero_where_amplitude_zero(self):
        spec = dft2(np.zeros((4, 4, 1)))
        assert np.array_equal(spec.amplitude, np.zeros((4, 4, 1)))
        assert np.array_equal(spec.phase, np.zeros((4, 4, 1)))

    def test_rejects_non_image_shape(self):
        with pytest.raises(ValueError):
            dft2(np.zeros((4, 4)))


class TestIdft2:
    def test_round_trip(self):
        rng = np.random.default_rng(20)
        for _ in range(10):
            h, w = rng.integers(1, 17, size=2)
            x = rng.random((h, w, 3))
            assert np.abs(idft2(dft2(x)) - x).max() <= 1e-6

    def test_dc_only_spectrum_gives_constant(self):
        amp = np.zeros((4, 4, 1))
        amp[0, 0, 0] = 32.0
        out = idft2(Spectrum(amplitude=amp, phase=np.zeros((4, 4, 1))))
        assert np.abs(out - 2.0).max() <= 1e-12

    def test_mixed_amp_phase_matches_naive_idft(self):
        rng = np.random.default_rng(21)
        a = rng.random((6, 5, 2))
        b = rng.random((6, 5, 2))
        sa, sb = dft2(a), dft2(b)
        mixed = Spectrum(amplitude=sb.amplitude, phase=sa.phase)
        expected = naive_idft2(sb.amplitude * np.exp(1j * sa.phase))
        got = idft2(mixed)
        assert np.abs(got - expected.real).max() <= 1e-9
        # conjugate-symmetric input: the imaginary residual is noise
        assert np.abs(expected.imag).max() <= 1e-5 * max(1.0, np.abs(expected.real).max())

    def test_imaginary_residual_small_for_real_sources(self):
        rng = np.random.default_rng(22)
        x = rng.random((8, 8, 1))
        spec = dft2(x)
        f = spec.amplitude * np.exp(1j * spec.phase)
        complex_out = np.fft.ifft2(f, axes=(0, 1))
        assert np.abs(complex_out.imag).max() <= 1e-5 * max(1.0, np.abs(complex_out.real).max())
