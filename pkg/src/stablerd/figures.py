"""Pinned parameter grids and row generators for the reproduction tables.

The exact grids behind each figure are versioned here so that reproduction
runs are stable across releases; pass explicit grids to the functions to
explore beyond the defaults.
"""

from __future__ import annotations

import math

import numpy as np

from . import quantizer as qt
from . import rate_distortion as rd
from .strength import (
    SymmetricStableSource,
    cauchy_source,
    gaussian_source,
    strength_of_uniform,
)
from .stable_core import StableParams

FIG_DEFAULTS_VERSION = "1"

FIG1_ALPHAS = (0.5, 1.0, 1.5, 2.0)
FIG1_GAMMA = 2.0
FIG1_D_GRID = (0.05, 3.5, 70)

FIG2_MS = (2, 3, 4)
FIG2_GAMMAS = tuple(range(1, 11))

FIG3_ALPHAS = tuple(round(0.1 * k, 1) for k in range(1, 21))

FIG4_MS = tuple(2 ** k for k in range(1, 15))
FIG5_MS = tuple(2 ** k for k in range(1, 9))


def rd_curve(alpha: float, gamma: float, dmin: float, dmax: float, steps: int):
    """Rows (D, R) of the scalar rate-distortion function, R in nats."""
    rows = []
    for D in np.linspace(dmin, dmax, steps):
        point = rd.rd_scalar(alpha, gamma, float(D))
        rows.append((point.distortion, point.rate))
    return rows


def fig1_curves(alphas=FIG1_ALPHAS, gamma=FIG1_GAMMA, d_grid=FIG1_D_GRID):
    """One (label, header, rows) tuple per alpha."""
    dmin, dmax, steps = d_grid
    out = []
    for a in alphas:
        rows = rd_curve(a, gamma, dmin, dmax, int(steps))
        out.append((f"alpha{a:g}", ("D", "R_nats"), rows))
    return out


def fig2_curves(ms=FIG2_MS, gammas=FIG2_GAMMAS, seed: int = 0):
    """Designed Cauchy quantizers: one table per M over the scale grid."""
    out = []
    for M in ms:
        n_pos = M // 2
        header = ["gamma"] + [f"point_{i + 1}" for i in range(n_pos)] + ["strength"]
        rows = []
        for g in gammas:
            report = qt.design_optimal(cauchy_source(float(g)), 1.0, M, seed=seed)
            pos = report.quantizer.points[report.quantizer.points > 0.0]
            rows.append((float(g),) + tuple(float(p) for p in pos) + (report.error_strength,))
        out.append((f"M{M}", tuple(header), rows))
    return out


def fig3_rows(alphas=FIG3_ALPHAS):
    """Rows (alpha, strength of Uniform(-1/2, 1/2))."""
    return [(a, strength_of_uniform(a)) for a in alphas]


def _uniform_gap_rows(source, alpha, gamma_x, ms):
    s_u = strength_of_uniform(alpha)
    rows = []
    for M in ms:
        delta, sol, entropy, _ = qt.best_uniform_design(source, alpha, M)
        d_of_r = rd.distortion_at_rate(alpha, gamma_x, entropy)
        rows.append(
            (
                M,
                delta,
                sol.value,
                entropy,
                sol.value - d_of_r,
                delta * s_u - d_of_r,
            )
        )
    return rows


FIG45_HEADER = ("M", "delta", "strength", "entropy_nats", "gap_measured", "gap_analytical")


def fig4_rows(ms=FIG4_MS):
    """Uniform quantizers of a standard Cauchy source against the D(R) floor."""
    return _uniform_gap_rows(cauchy_source(1.0), 1.0, 1.0, ms)


def fig5_rows(ms=FIG5_MS):
    """Uniform quantizers of a standard Gaussian source against the D(R) floor."""
    return _uniform_gap_rows(gaussian_source(1.0), 2.0, 1.0 / math.sqrt(2.0), ms)
