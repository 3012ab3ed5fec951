import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquetstab import polyalg
from floquetstab.polyalg import (NonSquarefreeError, Poly, SelfInversivePoly,
                                 SymmetryError, cayley_transform,
                                 charpoly_from_monodromy, companion_roots,
                                 discriminant, elementary_symmetric_from_traces,
                                 sturm_real_root_count, sylvester_resultant,
                                 unit_circle_root_count)

rng = np.random.default_rng(20260810)


def random_self_inversive(n, scale=2.0, rng=rng, avoid_minus_one=True):
    """Random self-inversive polynomial built from a reflection-closed
    root multiset, normalized so c_{n-k} = (-1)^n conj(c_k)."""
    while True:
        roots = []
        budget = n
        while budget > 0:
            if budget >= 2 and rng.random() < 0.5:
                z = rng.normal(0, scale) + 1j * rng.normal(0, scale)
                if abs(z) < 1e-3:
                    continue
                roots += [z, 1.0 / np.conj(z)]
                budget -= 2
            else:
                roots.append(np.exp(1j * rng.uniform(-np.pi, np.pi)))
                budget -= 1
        c = np.poly(np.array(roots))[::-1]  # ascending, monic
        psi = np.angle(np.prod(roots))
        c = c * np.exp(-0.5j * psi) * rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        if avoid_minus_one and abs(np.polyval(c[::-1], -1.0)) < 1e-3:
            continue
        try:
            return SelfInversivePoly.from_coeffs(c, tol=1e-7)
        except SymmetryError:
            continue


class TestElementarySymmetric:
    def test_identity_3x3(self):
        e = elementary_symmetric_from_traces([3, 3, 3], 3)
        assert np.allclose(e, [1, 3, 3, 1])

    def test_double_conjugate_pair(self):
        # eigenvalues i, -i each twice: traces tr M^k = 2(i^k + (-i)^k)
        traces = [2 * (1j**k + (-1j) ** k) for k in range(1, 5)]
        assert np.allclose(traces, [0, -4, 0, 4])
        e = elementary_symmetric_from_traces(traces, 4)
        # (mu^2+1)^2 = mu^4 + 2 mu^2 + 1
        assert np.allclose(e, [1, 0, 2, 0, 1], atol=1e-12)

    def test_random_matrix_against_determinant_oracle(self):
        for _ in range(5):
            M = rng.normal(0, 1, (3, 3)) + 1j * rng.normal(0, 1, (3, 3))
            p = charpoly_from_monodromy(M)
            # oracle: evaluate det(M - mu I) at sample points, fit coefficients
            mus = np.array([0.0, 1.0, -1.0, 1j, 2.0 - 1j])
            vals = np.array([np.linalg.det(M - mu * np.eye(3)) for mu in mus])
            V = np.vander(mus, 4, increasing=True)
            coeffs = np.linalg.solve(V[:4], vals[:4])
            assert np.allclose(p.coeffs, coeffs, rtol=1e-9, atol=1e-9)

    def test_newton_roundtrip_random(self):
        for n in range(2, 6):
            M = rng.normal(0, 1, (n, n)) + 1j * rng.normal(0, 1, (n, n))
            p = charpoly_from_monodromy(M)
            ref = np.poly(M)[::-1]  # ascending, from eigenvalues
            # np.poly returns monic in mu with leading 1; ours has (-1)^n
            assert np.allclose(p.coeffs, ref * (-1) ** n, rtol=1e-10, atol=1e-10)


class TestCharpoly:
    def test_identity(self):
        p = charpoly_from_monodromy(np.eye(3))
        assert np.allclose(p.coeffs, [1, -3, 3, -1])  # -(mu-1)^3

    def test_reciprocal_pair(self):
        p = charpoly_from_monodromy(np.diag([2.0, 0.5]))
        assert np.allclose(p.coeffs, [1, -2.5, 1])

    def test_dimension_limit(self):
        with pytest.raises(polyalg.PolyalgError):
            charpoly_from_monodromy(np.eye(9))


class TestCayley:
    def test_double_root_at_one(self):
        ps = cayley_transform(Poly([1, -2, 1]))  # (mu-1)^2
        assert np.allclose(ps.coeffs, [0, 0, -4], atol=1e-12)

    def test_endpoint_value(self):
        p = Poly([1, -2.5, 1])
        ps = cayley_transform(p)
        assert ps(0.0) == pytest.approx((p(1.0)).real, abs=1e-12)

    def test_quartic_root_count_equivalence(self):
        for _ in range(30):
            p = random_self_inversive(4)
            ps = cayley_transform(p)
            oracle = np.sum(np.abs(np.abs(companion_roots(p)) - 1) < 1e-10)
            try:
                got = sturm_real_root_count(ps)
            except NonSquarefreeError:
                continue
            assert got + ps.dropped_degree == oracle

    def test_covariance(self):
        # disc(p_sharp) = (-2i)^(n(n-1)) disc(p)
        for n in (3, 4, 5):
            factor = (-2j) ** (n * (n - 1))
            for _ in range(10):
                p = random_self_inversive(n)
                ps = cayley_transform(p)
                lhs = discriminant(ps.as_poly())
                rhs = factor * discriminant(p)
                assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))

    def test_rejects_non_self_inversive(self):
        with pytest.raises(SymmetryError):
            cayley_transform(Poly([1.0, 2.0, 3.0, 4.0]))

    def test_reflection_symmetry_of_roots(self):
        for n in (3, 4, 5):
            p = random_self_inversive(n)
            roots = companion_roots(p)
            reflected = 1.0 / np.conj(roots)
            for r in roots:
                assert np.min(np.abs(reflected - r)) < 1e-8


class TestResultant:
    def test_shared_root(self):
        assert abs(sylvester_resultant([-1, 0, 1], [-1, 1])) < 1e-12

    def test_no_shared_root(self):
        assert sylvester_resultant([1, 0, 1], [-1, 1]) == pytest.approx(2.0)

    def test_disc_identity_random_cubic(self):
        for _ in range(20):
            c = rng.normal(0, 1, 4) + 1j * rng.normal(0, 1, 4)
            p = Poly(c)
            if p.degree != 3:
                continue
            roots = companion_roots(p)
            oracle = p.lead ** (2 * 3 - 2) * np.prod(
                [(roots[i] - roots[j]) ** 2 for i in range(3) for j in range(i + 1, 3)])
            d = discriminant(p)
            assert abs(d - oracle) < 1e-8 * max(1.0, abs(oracle))

    def test_zero_iff_shared_root(self):
        for _ in range(40):
            shared = rng.random() < 0.5
            r1 = rng.normal(0, 1, 2) + 1j * rng.normal(0, 1, 2)
            r2 = rng.normal(0, 1, 2) + 1j * rng.normal(0, 1, 2)
            if shared:
                r2[0] = r1[0]
            p = Poly(np.poly(r1)[::-1])
            q = Poly(np.poly(r2)[::-1])
            res = abs(sylvester_resultant(p, q))
            truly_shared = min(abs(a - b) for a in r1 for b in r2) < 1e-8
            if truly_shared:
                assert res < 1e-7
            else:
                assert res > 1e-10

    def test_zero_polynomial_rejected(self):
        with pytest.raises(polyalg.PolyalgError):
            sylvester_resultant([0.0], [1.0, 1.0])


class TestDiscriminant:
    def test_double_root(self):
        assert abs(discriminant([1, -2, 1])) < 1e-14

    def test_depressed_cubic(self):
        # mu^3 + p mu + q: disc = -4p^3 - 27 q^2; p=0, q=-1 -> -27
        assert discriminant([-1, 0, 0, 1]) == pytest.approx(-27.0)

    def test_monodromy_cubic_at_origin_trace(self):
        # disc(-mu^3 + 1) = Delta_3 at f = 0
        assert discriminant([1, 0, 0, -1]).real == pytest.approx(-27.0)

    def test_degree_guard(self):
        with pytest.raises(polyalg.PolyalgError):
            discriminant([1.0, 2.0])


class TestSturm:
    def test_five_roots(self):
        c = np.poly([1, 2, 3, 4, 5])[::-1]
        assert sturm_real_root_count(c) == 5

    def test_x5_minus_1(self):
        assert sturm_real_root_count([-1, 0, 0, 0, 0, 1]) == 1

    def test_mixed(self):
        c = np.poly([1j, -1j, 1, 2, 3])[::-1].real
        assert sturm_real_root_count(c) == 3

    def test_interval(self):
        c = np.poly([1, 2, 3, 4, 5])[::-1]
        assert sturm_real_root_count(c, 1.5, 4.5) == 3
        assert sturm_real_root_count(c, 0.0, 1.0) == 1  # (a, b] includes b

    def test_non_squarefree(self):
        with pytest.raises(NonSquarefreeError):
            sturm_real_root_count(np.poly([1.0, 1.0, 2.0])[::-1])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=3, max_size=6))
    def test_matches_companion_count(self, roots):
        roots = np.round(np.array(roots), 3)
        if len(np.unique(roots)) != len(roots):
            return
        if len(roots) and np.min(np.abs(np.subtract.outer(roots, roots)
                                        + np.eye(len(roots)))) < 1e-2:
            return
        c = np.poly(roots)[::-1]
        try:
            got = sturm_real_root_count(c)
        except NonSquarefreeError:
            return
        assert got == len(roots)


class TestUnitCircleCount:
    def test_cube_roots_of_unity(self):
        count, degenerate = unit_circle_root_count([1, 0, 0, -1])  # -(mu^3-1)
        assert (count, degenerate) == (3, False)

    def test_reciprocal_pair_and_circle_pair(self):
        # (mu^2 - 3 mu + 1)(mu^2 + mu + 1)
        c = np.convolve([1, -3, 1], [1, 1, 1])[::-1]
        count, degenerate = unit_circle_root_count(c)
        assert (count, degenerate) == (2, False)

    def test_inside_deltoid(self):
        f = 0.5 + 0.3j
        count, _ = unit_circle_root_count([1.0, -np.conj(f), f, -1.0])
        oracle = np.sum(np.abs(np.abs(np.roots([-1.0, f, -np.conj(f), 1.0])) - 1) < 1e-8)
        assert count == oracle == 3

    def test_degenerate_flag(self):
        # double root on the circle: (mu^2+1)^2
        count, degenerate = unit_circle_root_count([1, 0, 2, 0, 1])
        assert degenerate
        assert count == 4
