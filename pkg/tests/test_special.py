import math

import numpy as np
import pytest

import zetaflow as zf
from zetaflow import special as sp
from zetaflow.special import DEFAULT_CONFIG as CFG

import oracles

RHO1 = 0.5 + 14.134725141734693j  # first critical-line zero (standard value)


class TestEvalConfig:
    def test_defaults_valid(self):
        assert CFG.abs_tol == 1e-10
        assert CFG.quad_nodes() == 15

    @pytest.mark.parametrize("kwargs", [
        {"abs_tol": 0.0},
        {"abs_tol": 1e-10, "trunc_threshold": 1e-10},  # must be <= abs_tol/10
        {"series_cutoff_sigma": 1.0},
        {"quad_rule": "simpson-3"},
        {"quad_rule": "gauss-legendre-999"},
        {"quad_max_refinements": 0},
    ])
    def test_invariants_rejected(self, kwargs):
        with pytest.raises(zf.DomainError):
            zf.EvalConfig(**kwargs)


class TestHermiteD:
    def test_alpha_one_kills_first_term(self):
        assert sp.hermite_d(3.0, 1.0) == 0.5

    def test_removable_singularity_at_one(self):
        assert sp.hermite_d(1.0, 1.0) == 0.5
        expected = -math.log(0.5) + 1.0 / (2.0 * 0.5)
        assert abs(sp.hermite_d(1.0, 0.5) - expected) < 1e-14

    def test_closed_form_value(self):
        # (0.5^{-1} - 1)/1 + 1/(2 * 0.25) = 3
        assert abs(sp.hermite_d(2.0, 0.5) - 3.0) < 1e-14

    def test_consistency_with_series_oracle(self):
        # zeta(2, 1/2) = sum (n + 1/2)^-2 = pi^2/2; check d = zeta - 1/(s-1) - h
        partial, bound = oracles.hurwitz_series_brute(2.0, 0.5, 400_000)
        assert abs(partial - math.pi ** 2 / 2) < bound + 1e-12
        expected_d = math.pi ** 2 / 2 - 1.0 - sp.hermite_h(2.0, 0.5, CFG)
        assert abs(sp.hermite_d(2.0, 0.5) - expected_d) < CFG.abs_tol

    def test_series_switch_is_seamless(self):
        # compare power series and closed form on both sides of |u| = 0.5
        alpha = 0.9
        ell = -math.log(alpha)
        for radius in (0.49, 0.51):
            s = 1.0 + radius / ell * np.exp(1j * np.linspace(0.1, 6.0, 7))
            direct = (alpha ** (1.0 - s) - 1.0) / (s - 1.0) + 0.5 * alpha ** (-s)
            via = sp.hermite_d_many(s, alpha)
            assert np.max(np.abs(direct - via)) < 1e-13

    def test_domain_errors(self):
        with pytest.raises(zf.DomainError):
            sp.hermite_d(2.0, 0.0)
        with pytest.raises(zf.DomainError):
            sp.hermite_d(2.0, 1.5)


class TestHermiteH:
    def test_zero_at_s_zero(self):
        assert sp.hermite_h(0.0, 1.0, CFG) == 0.0

    def test_basel_decomposition_value(self):
        # h(2,1) = zeta(2) - 1/(s-1) - d(2,1) = pi^2/6 - 1.5
        got = sp.hermite_h(2.0, 1.0, CFG)
        assert abs(got - (math.pi ** 2 / 6 - 1.5)) < CFG.abs_tol

    def test_assembled_vanishes_at_first_zero(self):
        total = 1.0 / (RHO1 - 1.0) + sp.hermite_d(RHO1, 1.0) + sp.hermite_h(RHO1, 1.0, CFG)
        assert abs(total) < 10 * CFG.abs_tol

    def test_refinement_budget_error_carries_estimate(self):
        cramped = zf.EvalConfig(abs_tol=1e-13, trunc_threshold=1e-14,
                                quad_max_refinements=1, quad_rule="gauss-legendre-3")
        with pytest.raises(zf.AccuracyError) as err:
            sp.hermite_h(2.5 + 3.0j, 0.25, cramped)
        assert err.value.estimate is not None
        assert err.value.residual > 0


class TestHurwitzZeta:
    def test_half_alpha_basel(self):
        assert abs(sp.hurwitz_zeta(2.0, 0.5, CFG) - math.pi ** 2 / 2) < 1e-9

    def test_trivial_zero(self):
        assert abs(sp.hurwitz_zeta(-2.0, 1.0, CFG)) < 1e-10

    def test_against_direct_series(self):
        s = 3.0 + 4.0j
        partial, bound = oracles.zeta_series_brute(s, 400_000)
        assert abs(sp.hurwitz_zeta(s, 1.0, CFG) - partial) < bound + CFG.abs_tol

    def test_pole_error(self):
        with pytest.raises(zf.PoleError):
            sp.hurwitz_zeta(1.0, 0.5, CFG)

    def test_decomposition_property(self):
        rng = np.random.default_rng(42)
        count = 0
        while count < 200:
            s = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(s - 1.0) <= 0.1:
                continue
            alpha = rng.choice([0.25, 0.5, 1.0])
            assembled = (1.0 / (s - 1.0) + sp.hermite_d(s, alpha)
                         + sp.hermite_h(s, alpha, CFG))
            assert abs(sp.hurwitz_zeta(s, alpha, CFG) - assembled) < 2 * CFG.abs_tol
            count += 1

    def test_series_agreement_above_two(self):
        # integral route vs Euler-Maclaurin series route
        rng = np.random.default_rng(7)
        for _ in range(25):
            s = complex(rng.uniform(2.0, 3.0), rng.uniform(-3.0, 3.0))
            alpha = rng.choice([0.25, 0.5, 1.0])
            hermite = (1.0 / (s - 1.0) + sp.hermite_d(s, alpha)
                       + sp.hermite_h(s, alpha, CFG))
            reg, _, _ = sp.euler_maclaurin_split(np.array([s]), alpha, tol=1e-13)
            series = complex(reg[0]) + 1.0 / (s - 1.0)
            assert abs(hermite - series) < CFG.abs_tol

    def test_route_dispatch_above_cutoff(self):
        s = 9.0 + 0.3j
        _, _, route = sp.eval_diagnostics(s, 1.0, CFG)
        assert route == "series-em"
        hermite = 1.0 / (s - 1.0) + sp.hermite_d(s, 1.0) + sp.hermite_h(s, 1.0, CFG)
        assert abs(sp.hurwitz_zeta(s, 1.0, CFG) - hermite) < CFG.abs_tol

    def test_route_dispatch_large_imag(self):
        _, _, route = sp.eval_diagnostics(0.5 + 40.0j, 1.0, CFG)
        assert route == "series-em"

    def test_conjugate_symmetry(self):
        for s in (1.3 + 2.2j, -2.0 + 7.0j, 0.5 + 30.0j, -4.5 + 2.0j):
            for alpha in (0.25, 1.0):
                a = sp.hurwitz_zeta(s, alpha, CFG)
                b = sp.hurwitz_zeta(s.conjugate(), alpha, CFG)
                assert abs(b - a.conjugate()) < 1e-10

    def test_reflection_oracle_on_continuation(self):
        # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        def zeta(s):
            return sp.riemann_zeta(s, CFG)
        for s in (-2.5 + 20.0j, 0.5 + 50.0j, -0.5 + 90.0j, 0.3 + 8.0j):
            lhs = zeta(s)
            rhs = oracles.zeta_reflection(zeta, s)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


class TestRiemannZeta:
    def test_basel(self):
        assert abs(sp.riemann_zeta(2.0, CFG) - math.pi ** 2 / 6) < 1e-9

    def test_trivial_zeros(self):
        for k in (1, 2, 3, 4):
            assert abs(sp.riemann_zeta(-2.0 * k, CFG)) < 1e-8

    def test_large_imag_spot_value(self):
        # cross-checked via the reflection oracle rather than a quoted table
        v = sp.riemann_zeta(0.5 + 100.0j, CFG)
        r = oracles.zeta_reflection(lambda s: sp.riemann_zeta(s, CFG), 0.5 + 100.0j)
        assert abs(v - r) < 1e-9 * abs(v)


class TestDerivative:
    def test_trivial_zero_derivatives(self):
        z3, b3 = oracles.zeta_series_brute(3.0, 400_000)
        expected = -z3.real / (4.0 * math.pi ** 2)
        got = sp.riemann_zeta_deriv(-2.0, CFG)
        assert abs(got - expected) < 1e-9 + b3
        got4 = sp.riemann_zeta_deriv(-4.0, CFG)
        expected4 = oracles.trivial_zero_deriv(2, lambda s: sp.riemann_zeta(s, CFG))
        assert abs(got4 - expected4) < 1e-9
        assert got4.real > 0  # alternation flips the sign at -4

    def test_matches_central_difference(self):
        fd = oracles.central_difference(lambda z: sp.riemann_zeta(z, CFG), 2.0)
        assert abs(sp.riemann_zeta_deriv(2.0, CFG) - fd) < 1e-6

    def test_fd_property_across_routes(self):
        rng = np.random.default_rng(11)
        tol = max(1e-6, 100 * CFG.abs_tol)
        count = 0
        while count < 30:
            s = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(s - 1.0) <= 0.15:
                continue
            alpha = rng.choice([0.25, 0.5, 1.0])
            fd = oracles.central_difference(lambda z: sp.hurwitz_zeta(z, alpha, CFG), s)
            assert abs(sp.hurwitz_zeta_deriv(s, alpha, CFG) - fd) < tol
            count += 1
        for _ in range(8):
            s = complex(rng.uniform(0, 2), rng.uniform(16, 60))
            alpha = rng.choice([0.5, 1.0])
            fd = oracles.central_difference(lambda z: sp.hurwitz_zeta(z, alpha, CFG), s)
            assert abs(sp.hurwitz_zeta_deriv(s, alpha, CFG) - fd) < tol

    def test_pole_error(self):
        with pytest.raises(zf.PoleError):
            sp.hurwitz_zeta_deriv(1.0, 1.0, CFG)


class TestVectorizedFieldRoute:
    def test_matches_scalar_reference(self):
        rng = np.random.default_rng(3)
        pts = []
        for _ in range(40):
            s = complex(rng.uniform(-9, 4), rng.uniform(-3, 3))
            if abs(s - 1.0) > 0.2:
                pts.append(s)
        pts += [0.5 + 40.0j, 0.5 + 150.0j, 2.0 - 25.0j]
        arr = np.array(pts)
        reg, _ = sp.hurwitz_split_many(arr, 1.0)
        fast = reg + 1.0 / (arr - 1.0)
        for s, v in zip(pts, fast):
            assert abs(v - sp.riemann_zeta(s, CFG)) < 5e-10

    def test_deriv_matches_scalar_reference(self):
        arr = np.array([-6.5 + 0.2j, -2.0 + 0.0j, 0.5 + 30.0j, 2.5 + 1.0j])
        dreg, _ = sp.hurwitz_deriv_split_many(arr, 1.0)
        fast = dreg - 1.0 / (arr - 1.0) ** 2
        for s, v in zip(arr, fast):
            assert abs(v - sp.riemann_zeta_deriv(complex(s), CFG)) < 5e-10

    def test_deep_negative_accuracy(self):
        arr = np.array([complex(-12.0), complex(-8.0), complex(-11.3)])
        reg, _ = sp.hurwitz_split_many(arr, 1.0)
        vals = reg + 1.0 / (arr - 1.0)
        assert abs(vals[0]) < 1e-12
        assert abs(vals[1]) < 1e-12


class TestBoundConstants:
    def test_e_r_at_one(self):
        assert abs(sp.f_prime_sup_bound(1.0) - 12.0 * math.e) < 1e-12

    def test_h1_closed_form_alpha_one_beta_two(self):
        bc = sp.bound_constants(1.0, 2.0)
        a = (1.0 / (2 * math.pi)) * 2.0 * (2.0 + math.sinh(2.0))
        b = (math.pi + math.sinh(math.pi)) * (
            3.0 / math.pi + 2.0 * math.gamma(3.0) / math.pi ** 3 + 2.0 / math.pi ** 3)
        assert abs(bc.h1 - 2.0 * (a + b)) < 1e-12
        assert abs(bc.h1 - 37.3) < 0.1

    def test_h1_decreasing_in_alpha(self):
        grid = np.linspace(0.1, 1.0, 10)
        h1s = [sp.bound_constants(a, 2.0).h1 for a in grid]
        assert all(x >= y - 1e-12 for x, y in zip(h1s, h1s[1:]))
        assert sp.bound_constants(0.5, 1.0).h1 >= sp.bound_constants(0.9, 1.0).h1

    def test_alpha_one_degenerates_d_branch(self):
        bc = sp.bound_constants(1.0, 2.0)
        assert bc.d2 == 0.0 and bc.e_r == 0.0
        bc2 = sp.bound_constants(0.5, 1.0)
        assert bc2.d2 > 0 and bc2.e_r > 0 and bc2.h2 > 0

    def test_domain_errors(self):
        with pytest.raises(zf.DomainError):
            sp.bound_constants(0.0, 1.0)
        with pytest.raises(zf.DomainError):
            sp.bound_constants(0.5, 0.0)
        with pytest.raises(zf.DomainError):
            sp.f_prime_sup_bound(0.0)

    def test_h_bound_dominates_samples(self):
        cheap = zf.EvalConfig(abs_tol=1e-8, trunc_threshold=1e-9)
        grid = np.linspace(-2.0, 2.0, 11)
        for alpha in (0.25, 0.5, 1.0):
            h1 = sp.bound_constants(alpha, 2.0).h1
            sup = max(abs(sp.hermite_h(complex(x, y), alpha, cheap))
                      for x in grid for y in grid)
            assert sup <= h1

    def test_fprime_bound_on_box_boundary(self):
        for r in (0.5, 1.0, 2.0):
            e_r = sp.f_prime_sup_bound(r)
            edge = np.linspace(-r, r, 201)
            border = np.concatenate([
                edge + 1j * r, edge - 1j * r, r + 1j * edge, -r + 1j * edge])
            sup = float(np.max(np.abs(sp.expm1_over_deriv(border))))
            assert sup <= e_r

    def test_d_sup_bound(self):
        assert sp.d_sup_bound(1.0, 4.0) == pytest.approx(0.55)
        val = sp.d_sup_bound(0.5, 2.0)
        assert val >= 1.1 * abs(sp.hermite_d(2.0 + 0.0j, 0.5))
