import math

import numpy as np
import pytest

from stablerd import (
    EmpiricalSource,
    NonFiniteLogMoment,
    ReferenceLaw,
    SampleBatch,
    StableParams,
    SymmetricStableSource,
    TabulatedSource,
    UniformSource,
    cauchy_source,
    cb_strength,
    g_value,
    gaussian_source,
    reference_entropy,
    sample,
    solve_strength,
    strength_closed_form,
    strength_of_uniform,
)
from stablerd.strength import reference_neg_log_density


def empirical(values, seed=0):
    return EmpiricalSource(SampleBatch(values=np.asarray(values, dtype=float), seed=seed))


def scaled_tabulated(base_density, c, support=(-np.inf, np.inf)):
    a = abs(c)
    lo, hi = support
    new_support = tuple(sorted((lo * a if math.isfinite(lo) else math.copysign(np.inf, lo * c),
                                hi * a if math.isfinite(hi) else math.copysign(np.inf, hi * c))))
    return TabulatedSource(lambda x: base_density(x / a) / a, new_support)


class TestGValue:
    def test_cauchy_at_its_strength(self):
        # -E[log f_ref(X)] = ln pi + E[ln(1 + X^2)] = ln pi + ln 4
        assert g_value(cauchy_source(1.0), 1.0, 1.0) == pytest.approx(
            math.log(4.0 * math.pi), abs=1e-9
        )

    def test_uniform_against_gaussian_reference(self):
        expected = 0.5 * math.log(2.0 * math.pi) + 1.0 / 24.0
        assert g_value(UniformSource(0.5), 2.0, 1.0) == pytest.approx(expected, abs=1e-12)

    def test_empirical_closed_form(self):
        src = empirical([-1.0, 0.0, 1.0])
        expected = math.log(math.pi) + (2.0 / 3.0) * math.log(1.25)
        assert g_value(src, 1.0, 2.0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize(
        "source",
        [
            cauchy_source(1.0),
            gaussian_source(2.0),
            UniformSource(1.5),
            empirical(np.linspace(-3, 3, 101)),
            SymmetricStableSource(StableParams(1.4, 0.0, 0.7, 0.0)),
        ],
        ids=["cauchy", "gaussian", "uniform", "empirical", "stable14"],
    )
    def test_monotone_in_s(self, source):
        scales = np.geomspace(0.05, 20.0, 20)
        vals = [g_value(source, 1.0, s) for s in scales]
        assert all(a >= b - 1e-10 for a, b in zip(vals, vals[1:]))

    def test_heavy_tail_at_alpha2_diverges(self):
        with pytest.raises(NonFiniteLogMoment):
            g_value(cauchy_source(1.0), 2.0, 1.0)

    def test_tabulated_heavy_tail_at_alpha2_diverges(self):
        cauchy_pdf = lambda x: 1.0 / (math.pi * (1.0 + x * x))
        with pytest.raises(NonFiniteLogMoment):
            g_value(TabulatedSource(cauchy_pdf), 2.0, 1.0)


class TestSolveStrength:
    @pytest.mark.parametrize("alpha", [0.6, 1.0, 1.4, 2.0])
    def test_matches_closed_form(self, alpha):
        src = SymmetricStableSource(StableParams(alpha, 0.0, 1.0, 0.0))
        sol = solve_strength(src, alpha)
        assert sol.value == pytest.approx(strength_closed_form(alpha, 1.0), rel=1e-4)

    def test_gaussian_standard(self):
        sol = solve_strength(gaussian_source(1.0), 2.0)
        assert sol.value == pytest.approx(1.0, rel=1e-9)

    def test_two_point_empirical(self):
        sol = solve_strength(empirical([-2.0, 2.0]), 1.0)
        assert sol.value == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-10)

    def test_residual_contract(self):
        for source in (cauchy_source(3.0), empirical([-1.0, 0.5, 2.0, -2.5])):
            sol = solve_strength(source, 1.0, tol=1e-9)
            h = reference_entropy(ReferenceLaw(1.0))
            assert sol.residual <= 1e-9
            assert abs(g_value(source, 1.0, sol.value) - h) <= 1e-9

    def test_zero_source(self):
        sol = solve_strength(empirical([0.0, 0.0, 0.0]), 1.0)
        assert sol.value == 0.0 and sol.evaluations == 0

    @pytest.mark.parametrize("c", [0.5, 2.0, -3.0])
    def test_scaling_law_empirical(self, c):
        rng = np.random.default_rng(5)
        base = rng.standard_t(3, size=4000)
        s1 = solve_strength(empirical(base), 1.0).value
        s2 = solve_strength(empirical(c * base), 1.0).value
        assert s2 == pytest.approx(abs(c) * s1, rel=1e-6)

    @pytest.mark.parametrize("c", [0.5, 2.0, -3.0])
    def test_scaling_law_tabulated(self, c):
        tri = lambda x: max(0.0, 1.0 - abs(x))
        base = TabulatedSource(tri, (-1.0, 1.0))
        scaled = scaled_tabulated(tri, c, (-1.0, 1.0))
        s1 = solve_strength(base, 1.0).value
        s2 = solve_strength(scaled, 1.0).value
        assert s2 == pytest.approx(abs(c) * s1, rel=1e-6)


class TestClosedForm:
    def test_values(self):
        assert strength_closed_form(2.0, math.sqrt(2.0)) == pytest.approx(2.0)
        assert strength_closed_form(1.0, 5.0) == pytest.approx(5.0)
        assert strength_closed_form(0.5, 1.0) == pytest.approx(0.25)

    def test_validation(self):
        with pytest.raises(ValueError):
            strength_closed_form(2.5, 1.0)
        with pytest.raises(ValueError):
            strength_closed_form(1.0, -1.0)


class TestCBStrength:
    def test_standard_cauchy_density(self):
        cauchy_pdf = lambda x: 1.0 / (math.pi * (1.0 + x * x))
        assert cb_strength(TabulatedSource(cauchy_pdf)) == pytest.approx(1.0, rel=1e-6)

    def test_point_mass_is_zero(self):
        assert cb_strength(empirical([0.0, 0.0])) == 0.0

    def test_circular_cauchy_samples_d2(self):
        batch = sample(StableParams(1.0, 0.0, 1.0, 0.0), 10 ** 6, seed=77, d=2)
        value = cb_strength(EmpiricalSource(batch), d=2)
        assert value == pytest.approx(1.0, abs=0.01)

    def test_matches_solve_strength_for_alpha1(self):
        src = empirical([-3.0, -1.0, 1.0, 3.0])
        assert cb_strength(src) == pytest.approx(solve_strength(src, 1.0).value, rel=1e-8)


class TestUniformStrength:
    def test_gaussian_case_exact(self):
        assert strength_of_uniform(2.0) == 1.0 / math.sqrt(12.0)

    def test_cauchy_case(self):
        assert strength_of_uniform(1.0) == pytest.approx(0.13589753213807249, abs=1e-12)

    def test_ratio(self):
        r = strength_of_uniform(2.0) / strength_of_uniform(1.0)
        assert r == pytest.approx(2.124, abs=0.01)

    def test_alpha_15_against_fixed_grid_oracle(self):
        # independent route: 1e5-point trapezoid of the reference log-density
        # over the unit interval + plain bisection on the defining equation
        psi = reference_neg_log_density(1.5)
        h = reference_entropy(ReferenceLaw(1.5))
        u = np.linspace(-0.5, 0.5, 100_001)

        def g(s):
            return float(np.trapezoid(psi(u / s), u))

        lo, hi = 0.01, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if g(mid) - h > 0.0:
                lo = mid
            else:
                hi = mid
        oracle = 0.5 * (lo + hi)
        assert strength_of_uniform(1.5) == pytest.approx(oracle, rel=1e-6)

    def test_library_solver_agrees_with_arctan_route(self):
        generic = solve_strength(UniformSource(0.5), 1.0).value
        assert generic == pytest.approx(strength_of_uniform(1.0), rel=1e-8)


class TestTabulatedValidation:
    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            TabulatedSource(lambda x: 1.0, (0.0, 2.0))

    def test_normalized_accepted(self):
        TabulatedSource(lambda x: 0.5, (-1.0, 1.0))


class TestSolverEdges:
    def test_bracket_failure_when_no_sign_change(self):
        from stablerd import BracketFailure
        from stablerd.strength import _solve_monotone

        with pytest.raises(BracketFailure):
            _solve_monotone(lambda s: 1.0, 1.0, 1e-9)

    def test_d2_solver_agrees_with_cb_strength(self):
        # for alpha = 1 the generic d-dimensional defining equation reduces to
        # the closed CB condition, so the two solvers must agree
        batch = sample(StableParams(1.0, 0.0, 1.0, 0.0), 20000, seed=13, d=2)
        src = EmpiricalSource(batch)
        generic = solve_strength(src, 1.0).value
        closed = cb_strength(src, d=2)
        assert generic == pytest.approx(closed, rel=1e-8)

    def test_concurrent_solves_are_safe(self):
        from concurrent.futures import ThreadPoolExecutor

        src = SymmetricStableSource(StableParams(1.4, 0.0, 1.0, 0.0))
        with ThreadPoolExecutor(max_workers=4) as pool:
            vals = list(pool.map(lambda _: solve_strength(src, 1.4).value, range(8)))
        assert max(vals) - min(vals) == 0.0


class TestMultiDimensional:
    def test_g_value_d2_general_alpha_smoke(self):
        # per-sample radial inversion path (slow route, small batch)
        batch = sample(StableParams(1.5, 0.0, 1.0, 0.0), 4, seed=2, d=2)
        val = g_value(EmpiricalSource(batch), 1.5, 1.0)
        assert math.isfinite(val) and val > 0.0
