import cmath

import numpy as np
import pytest

from floquetstab import models
from floquetstab.monodromy import (SingularParameterError, SpectralProblem,
                                   floquet_sample, integrate_monodromy,
                                   verify_generalized_hamiltonian_symmetry)
from floquetstab.models import _cos_profile, _const_profile


def free_kdv_problem(T=1.0):
    def eval_A(x, lam):
        return np.array([[0, 1, 0], [0, 0, 1], [lam, 0, 0]], dtype=complex)

    return SpectralProblem(n=3, T=T, eval_A=eval_A, trace_free=True, label="free")


class TestIntegrate:
    def test_nilpotent_exponential(self):
        res = integrate_monodromy(free_kdv_problem(), 0.0, 1e-11)
        assert np.allclose(res.M, [[1, 1, 0.5], [0, 1, 1], [0, 0, 1]], atol=1e-11)

    def test_constant_coefficient_trace(self):
        lam = 0.7 + 0.2j
        res = integrate_monodromy(free_kdv_problem(), lam, 1e-12)
        roots = [lam ** (1 / 3) * cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]
        expected = sum(cmath.exp(r) for r in roots)
        assert np.trace(res.M) == pytest.approx(expected, abs=1e-10)

    def test_mathieu_against_fixed_step_oracle(self):
        # independent oracle: classical fixed-step RK4, 2e5 steps
        b = models.build_model("mathieu-kdv")
        lam = 0.0 + 0.0j
        res = integrate_monodromy(b.problem, lam, 1e-12)

        def A(x):
            return np.array([[0, 1, 0], [0, 0, 1],
                             [lam, -(4 + 5 * np.cos(x)), 0]], dtype=complex)

        n_steps = 200_000
        h = b.problem.T / n_steps
        V = np.eye(3, dtype=complex)
        x = 0.0
        for _ in range(n_steps):
            k1 = A(x) @ V
            k2 = A(x + h / 2) @ (V + h / 2 * k1)
            k3 = A(x + h / 2) @ (V + h / 2 * k2)
            k4 = A(x + h) @ (V + h * k3)
            V = V + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            x += h
        assert abs(np.trace(res.M) - np.trace(V)) < 1e-9

    def test_tolerance_bounds(self):
        with pytest.raises(ValueError):
            integrate_monodromy(free_kdv_problem(), 0.1j, tol=1e-3)

    def test_excluded_lambda(self):
        b = models.build_model("boussinesq")
        with pytest.raises(SingularParameterError):
            integrate_monodromy(b.problem, 0.0, 1e-11)

    def test_order_of_accuracy(self):
        b = models.build_model("mathieu-kdv")
        ref = integrate_monodromy(b.problem, 0.4j, 1e-13).M
        errs = [np.linalg.norm(integrate_monodromy(b.problem, 0.4j, tol).M - ref)
                for tol in (1e-7, 1e-9, 1e-11)]
        assert errs[0] > errs[1] > errs[2]

    def test_reality_for_real_lambda(self):
        b = models.build_model("mathieu-kdv")
        res = integrate_monodromy(b.problem, 0.3 + 0j, 1e-11)
        assert np.max(np.abs(res.M.imag)) < 1e-9


class TestLiouvilleAndSymmetry:
    @pytest.mark.parametrize("model_id", ["mathieu-kdv", "nls-trivial", "kawahara"])
    def test_liouville(self, model_id, bundles):
        b = bundles(model_id)
        for lam in (0.2j, 0.8j, 0.3 + 0.4j):
            res = integrate_monodromy(b.problem, lam, 1e-11)
            assert res.det_residual < 1e-8

    def test_coefficient_symmetry_complex_lambda(self, bundles):
        # e_k(lambda) = e_{n-k}(-lambda) off the axis
        b = bundles("mathieu-kdv")
        for lam in (0.3 + 0.5j, -0.2 + 1.1j):
            ep = integrate_monodromy(b.problem, lam, 1e-12).e
            em = integrate_monodromy(b.problem, -lam, 1e-12).e
            n = 3
            sc = max(1.0, np.max(np.abs(ep)))
            assert max(abs(ep[k] - em[n - k]) for k in range(n + 1)) / sc < 1e-7

    def test_coefficient_symmetry_on_axis(self, bundles):
        b = bundles("mathieu-kdv")
        e = integrate_monodromy(b.problem, 0.7j, 1e-12).e
        sc = max(1.0, np.max(np.abs(e)))
        assert max(abs(e[k] - np.conj(e[3 - k])) for k in range(4)) / sc < 1e-9

    def test_second_order_example(self, bundles):
        b = bundles("hill2")
        rA2, rM = verify_generalized_hamiltonian_symmetry(b.problem, 1j, 1e-12)
        assert rA2 < 1e-8
        assert rM < 1e-8

    def test_gkdv_symmetry(self, bundles):
        b = bundles("mathieu-kdv")
        rA2, rM = verify_generalized_hamiltonian_symmetry(b.problem, 0.3j, 1e-12)
        assert rA2 < 1e-8
        assert rM < 1e-8

    def test_kawahara_consequence(self, bundles):
        # no B supplied: e_k(lambda) = conj(e_{5-k}(lambda)) on the axis
        b = bundles("kawahara")
        res = integrate_monodromy(b.problem, 0.01j, 1e-12)
        e = res.e
        sc = max(1.0, np.max(np.abs(e)))
        assert max(abs(e[k] - np.conj(e[5 - k])) for k in range(6)) / sc < 1e-7

    def test_B_missing(self, bundles):
        from floquetstab.monodromy import MonodromyError
        b = bundles("kawahara")
        with pytest.raises(MonodromyError):
            verify_generalized_hamiltonian_symmetry(b.problem, 0.1j)


class TestDerivative:
    def test_matches_central_difference(self, bundles):
        b = bundles("mathieu-kdv")
        lam = 0.35j
        res = integrate_monodromy(b.problem, lam, 1e-12, with_derivative=True)
        h = 1e-5j
        fd = (integrate_monodromy(b.problem, lam + h, 1e-12).M
              - integrate_monodromy(b.problem, lam - h, 1e-12).M) / (2 * h)
        assert np.linalg.norm(res.Mlam - fd) / np.linalg.norm(fd) < 1e-5

    def test_numeric_fallback_matches_analytic(self):
        b = models.build_model("mathieu-kdv")
        p = b.problem
        no_analytic = SpectralProblem(n=3, T=p.T, eval_A=p.eval_A, eval_A_lam=None,
                                      trace_free=True, label="fallback")
        lam = 0.2j
        r1 = integrate_monodromy(p, lam, 1e-11, with_derivative=True)
        r2 = integrate_monodromy(no_analytic, lam, 1e-11, with_derivative=True)
        assert np.linalg.norm(r1.Mlam - r2.Mlam) / np.linalg.norm(r1.Mlam) < 1e-6


class TestFloquetSample:
    def test_hill2_trace(self, bundles):
        b = bundles("hill2")
        s = floquet_sample(b.problem, 0.8j, 1e-11)
        res = integrate_monodromy(b.problem, 0.8j, 1e-11)
        assert len(s.f) == 1
        assert s.f[0] == pytest.approx(np.trace(res.M).real, abs=1e-10)
        assert s.imag_residual < 1e-9

    def test_nls_f3_formula(self, bundles):
        b = bundles("nls-trivial")
        lam = 1.2j
        s = floquet_sample(b.problem, lam, 1e-11)
        M = integrate_monodromy(b.problem, lam, 1e-11).M
        f3 = 0.5 * (np.trace(M) ** 2 - np.trace(M @ M))
        assert s.f[2] == pytest.approx(f3.real, abs=1e-8)
        assert abs(f3.imag) < 1e-8

    def test_gkdv_origin_trace_is_three(self, mkdv_stable):
        s = floquet_sample(mkdv_stable.problem, 0.0, 1e-12)
        assert s.f[0] == pytest.approx(3.0, abs=1e-8)
        assert s.f[1] == pytest.approx(0.0, abs=1e-8)

    def test_rejects_off_axis(self, bundles):
        with pytest.raises(ValueError):
            floquet_sample(bundles("mathieu-kdv").problem, 1 + 1j)
