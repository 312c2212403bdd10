import math

import numpy as np
import pytest

from stablerd import figures
from stablerd.figures import (
    FIG3_ALPHAS,
    FIG4_MS,
    FIG5_MS,
    fig1_curves,
    fig2_curves,
    fig3_rows,
    rd_curve,
)


class TestPinnedGrids:
    def test_fig3_grid(self):
        assert FIG3_ALPHAS == tuple(round(0.1 * k, 1) for k in range(1, 21))

    def test_fig45_grids(self):
        assert FIG4_MS[0] == 2 and FIG4_MS[-1] == 2 ** 14
        assert FIG5_MS[-1] == 2 ** 8


class TestFig1:
    def test_four_curves_with_zero_tail(self):
        curves = fig1_curves()
        assert [label for label, _, _ in curves] == [
            "alpha0.5", "alpha1", "alpha1.5", "alpha2",
        ]
        for label, header, rows in curves:
            assert header == ("D", "R_nats")
            assert len(rows) == 70
            rates = [r for _, r in rows]
            assert all(b <= a for a, b in zip(rates, rates[1:]))
        # alpha = 1, gamma = 2 has strength 2: R(1) = ln 2 on the curve
        rows = dict((label, rows) for label, _, rows in curves)["alpha1"]
        d, r = min(rows, key=lambda t: abs(t[0] - 1.0))
        assert r == pytest.approx(math.log(2.0 / d), rel=1e-12)


class TestFig2:
    def test_small_slice_scales_linearly(self):
        (label, header, rows), = fig2_curves(ms=(2,), gammas=(1.0, 3.0), seed=7)
        assert label == "M2" and header == ("gamma", "point_1", "strength")
        (g1, p1, s1), (g3, p3, s3) = rows
        assert p3 == pytest.approx(3.0 * p1, rel=1e-3)
        assert s3 == pytest.approx(3.0 * s1, rel=1e-3)


class TestFig3:
    def test_endpoint_values(self):
        rows = dict(fig3_rows(alphas=(1.0, 2.0)))
        assert rows[1.0] == pytest.approx(0.1359, abs=5e-4)
        assert rows[2.0] == pytest.approx(0.2887, abs=5e-5)

    def test_small_alpha_runs(self):
        # deep heavy-tail corner of the pinned grid; the value collapses
        # towards zero like alpha^(1/alpha)
        (alpha, s), = fig3_rows(alphas=(0.4,))
        assert 0.0 < s < 0.4 ** (1.0 / 0.4)


class TestRdCurve:
    def test_row_count_and_clamp(self):
        rows = rd_curve(0.5, 2.0, 0.05, 3.5, 70)
        assert len(rows) == 70
        assert all(r == 0.0 for d, r in rows if d >= 0.5)
