import math

import numpy as np
import pytest
from scipy.integrate import quad

from floquetstab import waves
from floquetstab.waves import (WaveError, bbm_wave, boussinesq_wave, elliptic_K,
                               fourier_coefficients, gkdv_wave, jacobi_cn_dn_sn,
                               kawahara_mstar, kawahara_wave, mbbm_wave,
                               nls_quintic_phase_wave)


class TestEllipticK:
    def test_m_zero(self):
        assert elliptic_K(0.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_bbm_period_value(self):
        assert 2 * math.sqrt(12 / 5) * elliptic_K(0.2) == pytest.approx(5.142, abs=1.5e-3)

    def test_boussinesq_period_value(self):
        assert 2 * math.sqrt(8 / 7) * elliptic_K(6 / 7) == pytest.approx(5.156, abs=1.5e-3)

    def test_rejects_m_one(self):
        with pytest.raises(WaveError):
            elliptic_K(1.0)


class TestJacobi:
    def test_origin(self):
        assert jacobi_cn_dn_sn(0.0, 0.3) == pytest.approx((1.0, 1.0, 0.0), abs=1e-14)

    def test_trig_limit(self):
        for x in (0.3, 1.7, -2.2):
            cn, dn, sn = jacobi_cn_dn_sn(x, 0.0)
            assert cn == pytest.approx(math.cos(x), abs=1e-13)
            assert dn == pytest.approx(1.0, abs=1e-13)
            assert sn == pytest.approx(math.sin(x), abs=1e-13)

    def test_quarter_period_zero(self):
        m = 0.7
        cn, dn, sn = jacobi_cn_dn_sn(elliptic_K(m), m)
        assert abs(cn) < 1e-12
        assert dn == pytest.approx(math.sqrt(1 - m), abs=1e-12)

    def test_identities_grid(self):
        for m in np.arange(0.1, 0.95, 0.1):
            for x in np.linspace(-8, 8, 41):
                cn, dn, sn = jacobi_cn_dn_sn(x, m)
                assert abs(sn * sn + cn * cn - 1) < 1e-11
                assert abs(dn * dn + m * sn * sn - 1) < 1e-11


class TestGkdvWave:
    def test_stable_mkdv_root_count(self):
        w = gkdv_wave(3, 1.0, 0.25, 0.0)
        assert w.params["g_real_roots"] == 4

    def test_unstable_mkdv_root_count(self):
        w = gkdv_wave(3, 1.0, 0.2, 0.4)
        assert w.params["g_real_roots"] == 2

    def test_energy_residual(self):
        w = gkdv_wave(3, 1.0, 0.25, 0.0)
        k = 3

        def G(p):
            return 2 * 0.0 + 2 * 0.25 * p + p * p - 2 / (k + 1) * p ** (k + 1)

        h = 1e-6
        for x in np.linspace(0.05, w.period - 0.05, 25):
            dphi = (w.eval(x + h) - w.eval(x - h)) / (2 * h)
            assert abs(dphi * dphi - G(w.eval(x))) < 1e-8

    def test_kdv_cnoidal_closed_form(self):
        # k = 2 with three real roots: phi = r2 + (r3-r2) cn^2(kappa x; m),
        # kappa = sqrt((r3-r1)/6), m = (r3-r2)/(r3-r1)
        c, a, E = 1.0, 0.0, -0.1
        w = gkdv_wave(2, c, a, E)
        r = np.sort(np.roots([-2 / 3, c, 2 * a, 2 * E]))
        r1, r2, r3 = r
        kappa = math.sqrt((r3 - r1) / 6)
        m = (r3 - r2) / (r3 - r1)
        assert w.period == pytest.approx(2 * elliptic_K(m) / kappa, rel=1e-8)
        for x in np.linspace(0, w.period, 17):
            cn, _, _ = jacobi_cn_dn_sn(kappa * x, m)
            assert w.eval(x) == pytest.approx(r2 + (r3 - r2) * cn * cn, abs=1e-8)

    def test_no_well(self):
        with pytest.raises(WaveError):
            gkdv_wave(3, -1.0, 0.0, -1.0)


class TestClosedFormWaves:
    def test_bbm_range(self):
        w = bbm_wave()
        assert w.eval(0.0) == pytest.approx(2.0, abs=1e-12)
        half = elliptic_K(0.2) / math.sqrt(5 / 12)
        assert w.eval(half) == pytest.approx(1.0, abs=1e-12)
        vals = [w.eval(x) for x in np.linspace(0, w.period, 400)]
        assert min(vals) > 1.0 - 1e-12 and max(vals) < 2.0 + 1e-12
        assert w.period == pytest.approx(5.142, abs=1.5e-3)

    def test_boussinesq_range(self):
        w = boussinesq_wave()
        assert w.eval(0.0) == pytest.approx(math.sqrt(7) / 2, abs=1e-12)
        half = elliptic_K(6 / 7) / math.sqrt(7 / 8)
        assert w.eval(half) == pytest.approx(0.5, abs=1e-12)

    def test_mbbm_limit_amplitude(self):
        w = mbbm_wave(1.0 - 1e-12)
        assert w.params["amplitude"] == pytest.approx(math.sqrt(2), rel=1e-9)

    def test_mbbm_requires_m_above_half(self):
        with pytest.raises(WaveError):
            mbbm_wave(0.5)

    def test_periodicity(self):
        for w in (bbm_wave(), boussinesq_wave(), mbbm_wave(0.7236)):
            for x in (0.1, 1.3, 2.9):
                assert w.eval(x + w.period) == pytest.approx(w.eval(x), abs=1e-10)


class TestKawaharaMstar:
    def test_r_zero(self):
        assert kawahara_mstar(0.0) == pytest.approx(0.5, abs=1e-13)

    def test_reference_value(self):
        assert kawahara_mstar(-32.0) == pytest.approx(0.6185, abs=1e-4)

    def test_complementary_symmetry(self):
        for r in np.linspace(-50, 50, 21):
            assert kawahara_mstar(r) + kawahara_mstar(-r) == pytest.approx(1.0, abs=1e-10)

    def test_bound(self):
        with pytest.raises(WaveError):
            kawahara_mstar(52.0)

    def test_critical_points_of_ratio_curve(self):
        # critical m-values are roots of the discriminant of the defining
        # cubic in r: 64 - 192 m - 391 m^2 + 1102 m^3 - 391 m^4 - 192 m^5 + 64 m^6
        sextic = [64, -192, -391, 1102, -391, -192, 64]
        roots = np.roots(sextic)
        real = np.sort(roots[np.abs(roots.imag) < 1e-9].real)
        inside = real[(real > 0) & (real < 1)]
        assert inside == pytest.approx([0.285665, 0.714335], abs=1e-6)


class TestKawaharaWave:
    def test_alpha_zero_coefficients(self):
        s = 0.25
        w = kawahara_wave(0.0, s)
        assert w.params["C1"] == pytest.approx(-168 * s**4)
        assert w.params["C3"] == pytest.approx(420 * s**4)
        assert w.params["m"] == 0.5

    def test_branches_agree_at_alpha_zero(self):
        # evaluate the general closed form at m* = 1/2 against the alpha=0 form
        s = 0.3
        w0 = kawahara_wave(0.0, s)
        alpha = 1e-11  # forces the general branch, m* ~ 1/2
        w1 = kawahara_wave(alpha, s)
        for x in np.linspace(0, w0.period, 20):
            assert w0.eval(x) == pytest.approx(w1.eval(x), abs=1e-8)

    @pytest.mark.parametrize("alpha,sigma", [(0.0, 0.25), (-2.0, 0.25), (3.0, 0.4)])
    def test_stationary_equation_residual(self, alpha, sigma):
        # -phi''''' + alpha phi''' + phi phi' = 0, derivatives by FFT
        w = kawahara_wave(alpha, sigma)
        n = 256
        x = np.arange(n) * w.period / n
        phi = np.array([w.eval(xx) for xx in x])
        k = 2 * np.pi * np.fft.fftfreq(n, d=w.period / n)
        ph = np.fft.fft(phi)
        ph[np.abs(ph) < 1e-13 * np.max(np.abs(ph))] = 0
        d5 = np.fft.ifft((1j * k) ** 5 * ph).real
        d3 = np.fft.ifft((1j * k) ** 3 * ph).real
        d1 = np.fft.ifft((1j * k) * ph).real
        resid = np.max(np.abs(-d5 + alpha * d3 + phi * d1))
        assert resid < 1e-7

    def test_bound_violation(self):
        with pytest.raises(WaveError):
            kawahara_wave(-4.0, 0.25)  # |alpha/sigma^2| = 64 >= 52


class TestQuinticPhaseWave:
    def test_turning_points_by_sign_analysis(self):
        # real turning points of A^2 F(A) = -(32A^8 - 62A^4 + 21A^2 + 9)/32
        poly = [32, 0, 0, 0, -62, 0, 21, 0, 9]
        roots = np.roots(poly)
        real_pos = np.sort([r.real for r in roots
                            if abs(r.imag) < 1e-9 and r.real > 0])
        assert real_pos == pytest.approx([math.sqrt(3) / 2, 1.0], abs=1e-9)
        # F > 0 strictly between those two turning points
        A = np.linspace(real_pos[0] + 1e-3, real_pos[1] - 1e-3, 50)
        F = -21 / 32 - 9 / (32 * A * A) + 31 / 16 * A * A - A**6
        assert np.all(F > 0)

    def test_period(self):
        w = nls_quintic_phase_wave()
        assert w.period == pytest.approx(1.93, abs=5e-3)

    def test_amplitude_range(self):
        w = nls_quintic_phase_wave()
        assert w.eval(0.0) == pytest.approx(1.0, abs=1e-10)
        assert w.eval(w.period / 2) == pytest.approx(math.sqrt(3) / 2, abs=1e-8)
        vals = [w.eval(x) for x in np.linspace(0, w.period, 300)]
        assert min(vals) > math.sqrt(3) / 2 - 1e-8
        assert max(vals) < 1.0 + 1e-8

    def test_phase_gradient(self):
        w = nls_quintic_phase_wave()
        kappa = w.params["kappa"]
        for x in (0.0, 0.4, 1.1):
            assert w.eval2(x) == pytest.approx(kappa / w.eval(x) ** 2, rel=1e-10)


class TestFourier:
    def test_constant(self):
        from floquetstab.models import _const_profile
        c = fourier_coefficients(_const_profile(4.0, 2 * np.pi), 3)
        assert np.allclose(c, [0, 0, 0, 4, 0, 0, 0], atol=1e-13)

    def test_cosine(self):
        from floquetstab.models import _cos_profile
        prof = _cos_profile(4.0, {1: (5.0, 0.0)})
        prof.fourier = None  # force the DFT path
        c = fourier_coefficients(prof, 2)
        assert np.allclose(c, [0, 2.5, 4.0, 2.5, 0], atol=1e-12)

    def test_cn_profile_against_quadrature(self):
        w = bbm_wave()
        N = 15
        c = fourier_coefficients(w, N)
        T = w.period
        for k in (0, 1, 2, 5, 9):
            re = quad(lambda x: w.eval(x) * math.cos(2 * np.pi * k * x / T),
                      0, T, limit=200, epsabs=1e-12)[0] / T
            im = quad(lambda x: -w.eval(x) * math.sin(2 * np.pi * k * x / T),
                      0, T, limit=200, epsabs=1e-12)[0] / T
            assert c[N + k] == pytest.approx(re + 1j * im, abs=1e-10)

    def test_conjugate_symmetry_and_parseval(self):
        w = bbm_wave()
        N = 20
        c = fourier_coefficients(w, N)
        assert np.allclose(c[::-1], np.conj(c), atol=1e-12)
        n = 4 * N + 1
        _, vals = w.sample(n)
        assert np.sum(np.abs(c) ** 2) == pytest.approx(np.mean(vals**2), abs=1e-9)
