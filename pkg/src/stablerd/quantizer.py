"""Strength-optimal scalar quantizers.

Covers the Lloyd-Max-style alternating design (midpoint regions vs.
derivative-free point updates), the strength of the quantization error for
arbitrary and uniform quantizers, the high-rate prediction delta * s(U),
the output entropy H(V), and the KKT width equation for non-uniform
region-width optimality.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import stable_core
from .errors import (
    DegenerateDesignWarning,
    NonSymmetricSource,
    NotSorted,
    OutOfRange,
)
from .stable_core import ReferenceLaw, reference_entropy, standard_density
from .strength import (
    DEFAULT_TOL,
    EmpiricalSource,
    SourceSpec,
    StrengthSolution,
    SymmetricStableSource,
    TabulatedSource,
    UniformSource,
    _solve_monotone,
    reference_neg_log_density,
    solve_strength,
)

__all__ = [
    "Quantizer",
    "DesignReport",
    "UniformSpec",
    "midpoint_boundaries",
    "quantize",
    "error_strength",
    "design_optimal",
    "uniform_error_strength",
    "high_rate_prediction",
    "output_entropy",
    "kkt_width_solution",
    "quantizer_to_json",
    "quantizer_from_json",
    "truncated_uniform",
    "best_uniform_design",
]

_MERGE_GAP = 1e-9


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Quantizer:
    """Representation points and region boundaries on the real line.

    Regions are left-open right-closed: x in (r_{j-1}, r_j] maps to point j,
    with the outer regions unbounded.
    """

    points: np.ndarray
    boundaries: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        bnd = np.atleast_1d(np.asarray(self.boundaries, dtype=float)) if np.size(
            self.boundaries
        ) else np.empty(0)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "boundaries", bnd)
        if pts.size < 1:
            raise ValueError("a quantizer needs at least one point")
        if np.any(np.diff(pts) <= 0.0):
            raise NotSorted("representation points must be strictly increasing")
        if bnd.size != pts.size - 1:
            raise ValueError("need exactly M - 1 boundaries for M points")
        if bnd.size:
            if np.any(np.diff(bnd) <= 0.0):
                raise NotSorted("boundaries must be strictly increasing")
            if np.any(bnd <= pts[:-1]) or np.any(bnd >= pts[1:]):
                raise ValueError("each boundary must lie strictly between its points")
        if self.symmetric:
            if not np.allclose(pts, -pts[::-1], rtol=0.0, atol=1e-12 * (1 + np.max(np.abs(pts)))):
                raise ValueError("symmetric quantizer points must be closed under negation")
            mids = midpoint_boundaries(pts) if pts.size > 1 else np.empty(0)
            if bnd.size and not np.allclose(bnd, mids, rtol=1e-12, atol=1e-12):
                raise ValueError("symmetric quantizer boundaries must be midpoints")

    @property
    def levels(self) -> int:
        return self.points.size

    @classmethod
    def from_points(cls, points, symmetric: bool = False) -> "Quantizer":
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        bnd = midpoint_boundaries(pts) if pts.size > 1 else np.empty(0)
        return cls(points=pts, boundaries=bnd, symmetric=symmetric)


@dataclass(frozen=True)
class DesignReport:
    """Result of a quantizer design run."""

    quantizer: Quantizer
    error_strength: float
    iterations: int
    strength_trace: list
    seed: int


@dataclass(frozen=True)
class UniformSpec:
    """Uniform quantizer with region width delta.

    `k_max` bounds the indices treated term-by-term; regions beyond it are
    absorbed through a tail-mass grouping whose contribution to the defining
    equation is controlled below 1e-9 nats.  None selects it automatically.
    """

    delta: float
    k_max: int | None = None

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError("delta must be positive")


# ---------------------------------------------------------------------------
# basic operations


def midpoint_boundaries(points) -> np.ndarray:
    """r_j = (x_j + x_{j+1}) / 2 for strictly increasing points."""
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.size < 2:
        raise ValueError("need at least two points")
    if np.any(np.diff(pts) <= 0.0):
        raise NotSorted("points must be strictly increasing")
    return 0.5 * (pts[:-1] + pts[1:])


def quantize(q: Quantizer, x: float):
    """Map x to its (region index, reproduction); boundary points go left."""
    idx = int(np.searchsorted(q.boundaries, x, side="left"))
    return idx, float(q.points[idx])


def _quantize_vec(q: Quantizer, x: np.ndarray) -> np.ndarray:
    return np.searchsorted(q.boundaries, x, side="left")


# ---------------------------------------------------------------------------
# source adapters: vectorized density + tail handling for region integrals


class _DensityAdapter:
    """Vectorized density, mass and tail machinery for analytic sources."""

    def __init__(self, source: SourceSpec):
        self.source = source
        if isinstance(source, SymmetricStableSource):
            p = source.params
            self.alpha_src = p.alpha
            self.scale = p.gamma
            self.engine = standard_density(p.alpha)
            self.core_extent = stable_core.TAIL_CUTOFF * p.gamma
            self.breakpoints = ()
            self.compact = p.alpha == 2.0  # effectively: Gaussian tails die fast
            self.tail_k = self.engine.tail_constant() * p.gamma ** p.alpha
        elif isinstance(source, UniformSource):
            self.alpha_src = None
            self.scale = source.half_width
            self.core_extent = source.half_width
            self.breakpoints = (-source.half_width, source.half_width)
            self.compact = True
            self.tail_k = 0.0
        elif isinstance(source, TabulatedSource):
            self.alpha_src = None
            lo, hi = source.support
            self.compact = math.isfinite(lo) and math.isfinite(hi)
            self.core_extent = min(
                max(abs(x) for x in source.support if math.isfinite(x)) if self.compact else 64.0,
                1e6,
            )
            self.scale = max(self.core_extent / 4.0, 1e-6)
            self.breakpoints = tuple(x for x in source.support if math.isfinite(x))
            self.tail_k = 0.0
            self._tab = np.vectorize(source.density, otypes=[float])
        else:
            raise TypeError("adapter requires a density-backed source")

    def pdf_vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        src = self.source
        if isinstance(src, SymmetricStableSource):
            return self.engine.pdf_vec(x / self.scale) / self.scale
        if isinstance(src, UniformSource):
            w = src.half_width
            return np.where(np.abs(x) < w, 0.5 / w, 0.0)
        vals = self._tab(x)
        lo, hi = src.support
        return np.where((x >= lo) & (x <= hi), vals, 0.0)

    def mass(self, a: float, b: float) -> float:
        """Integral of the density over [a, b]."""
        if b <= a:
            return 0.0
        src = self.source
        if isinstance(src, UniformSource):
            w = src.half_width
            return max(0.0, (min(b, w) - max(a, -w))) / (2.0 * w)
        if isinstance(src, TabulatedSource):
            return integrate.quad(src.density, a, b, limit=300)[0]
        # stable: split at the tail cutoff
        pieces = 0.0
        cut = self.core_extent
        lo, hi = a, b
        core_lo, core_hi = max(lo, -cut), min(hi, cut)
        if core_hi > core_lo:
            n_lin = max(8, min(int(16 * (core_hi - core_lo) / (1 + cut)) + 2, 64))
            edges = np.linspace(core_lo, core_hi, n_lin)
            if core_lo < 0.0 < core_hi:  # resolve the density peak
                peak = self.scale * np.geomspace(1e-7, 1.0, 10)
                extra = np.concatenate([-peak[::-1], peak])
                extra = extra[(extra > core_lo) & (extra < core_hi)]
                edges = np.unique(np.concatenate([edges, extra]))
            pieces += stable_core._panel_integral(self.pdf_vec, edges)
        if hi > cut:
            pieces += self.tail_mass(max(lo, cut)) - self.tail_mass(hi)
        if lo < -cut:
            pieces += self.tail_mass(-min(hi, -cut)) - self.tail_mass(-lo)
        return pieces

    def tail_mass(self, x0: float) -> float:
        """P(X > x0) for x0 at or beyond the core extent (symmetric sources)."""
        src = self.source
        if isinstance(src, UniformSource):
            w = src.half_width
            return max(0.0, (w - x0)) / (2.0 * w) if x0 < w else 0.0
        if isinstance(src, TabulatedSource):
            hi = src.support[1]
            if x0 >= hi:
                return 0.0
            return integrate.quad(src.density, x0, hi, limit=300)[0]
        a_s = self.alpha_src
        if a_s == 2.0:
            from scipy.special import erfc

            return 0.5 * erfc(x0 / (2.0 * self.scale))
        u0 = x0 / self.scale
        if u0 < stable_core.TAIL_CUTOFF:
            return self.mass(x0, self.core_extent) + self.tail_mass(self.core_extent)
        # integrate the tail series in log space, then a first-order remainder
        y_max = 60.0 / a_s + math.log(u0) + 5.0
        y_edges = np.linspace(math.log(u0), y_max, 50)

        def fn(y):
            u = np.exp(y)
            return np.exp(stable_core._log_pdf0_tail(a_s, u)) * u

        val = stable_core._panel_integral(fn, y_edges)
        k0 = self.engine.tail_constant()
        val += k0 * math.exp(-a_s * y_max) / a_s
        return val


# ---------------------------------------------------------------------------
# error strength of a quantizer


def _region_edges(a: float, b: float, rep: float, s_scale: float, adapter) -> np.ndarray:
    """Panel edges inside [a, b] refined around the representation point,
    around the source peak, and at density breakpoints."""
    ladder = rep + s_scale * np.array(
        [-60.0, -25.0, -10.0, -4.0, -1.5, -0.5, 0.0, 0.5, 1.5, 4.0, 10.0, 25.0, 60.0]
    )
    edges = [a, b]
    edges.extend(ladder[(ladder > a) & (ladder < b)])
    if a < 0.0 < b:
        peak = adapter.scale * np.array([-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0])
        edges.extend(peak[(peak > a) & (peak < b)])
    for brk in adapter.breakpoints:
        if a < brk < b:
            edges.append(brk)
    edges = np.unique(np.asarray(edges, dtype=float))
    # cap the widest panels
    out = [edges[0]]
    cap = max((b - a) / 8.0, 4.0 * s_scale)
    for e in edges[1:]:
        prev = out[-1]
        n_extra = min(int((e - prev) / cap), 24)
        if n_extra >= 1:
            out.extend(np.linspace(prev, e, n_extra + 2)[1:-1])
        out.append(e)
    return np.asarray(out)


def _outer_region_integral(adapter, psi, rep: float, r0: float, s: float) -> float:
    """Integral of f(x) psi((x - rep)/s) over (r0, infinity)."""
    s_scale = s * 3.0
    C = max(r0 + 80.0 * s_scale, 2.0 * abs(r0) + 4.0 * adapter.scale, adapter.core_extent)
    if isinstance(adapter.source, TabulatedSource):
        hi = adapter.source.support[1]
        val, _ = integrate.quad(
            lambda x: float(adapter.pdf_vec(np.array([x]))[0] * psi(np.array([(x - rep) / s]))[0]),
            r0,
            hi,
            limit=400,
        )
        return val
    if adapter.compact and not isinstance(adapter.source, SymmetricStableSource):
        C = min(C, adapter.core_extent)
        if C <= r0:
            return 0.0

    def fn(x):
        return adapter.pdf_vec(x) * psi((x - rep) / s)

    edges = _region_edges(r0, C, min(max(rep, r0), C), s_scale, adapter)
    val = stable_core._panel_integral(fn, edges)
    if isinstance(adapter.source, UniformSource):
        return val
    a_s = adapter.alpha_src
    if a_s == 2.0 and C >= adapter.core_extent:
        return val  # Gaussian mass beyond the core extent is below 1e-98
    # log-space continuation against the source tail series
    y_max = 60.0 / a_s + math.log(C / adapter.scale) + 5.0
    y_edges = np.linspace(math.log(C / adapter.scale), y_max, 32)

    def tail_fn(y):
        u = np.exp(y)
        x = adapter.scale * u
        return (
            np.exp(stable_core._log_pdf0_tail(a_s, u))
            * psi((x - rep) / s)
            * u
        )

    val += stable_core._panel_integral(tail_fn, y_edges)
    # first-order remainder beyond exp(y_max), with psi frozen at the cutoff
    X = adapter.scale * math.exp(y_max)
    psi_X = float(psi(np.array([(X - rep) / s]))[0])
    val += adapter.tail_k * X ** (-a_s) / a_s * psi_X
    return val


def _g_of_partition(points, boundaries, source, alpha, psi, adapter):
    """Return G(s) = sum_j int_{R_j} f(x) psi((x - x_j)/s) dx as a callable."""
    points = np.asarray(points, dtype=float)
    boundaries = np.asarray(boundaries, dtype=float)

    if isinstance(source, EmpiricalSource):
        vals = source.batch.values
        idx = np.searchsorted(boundaries, vals, side="left")
        offs = vals - points[idx]

        def G(s):
            return float(np.mean(psi(offs / s)))

        return G

    if isinstance(source, TabulatedSource):
        def G(s):
            total = 0.0
            lo, hi = source.support
            edges = np.concatenate([[lo], boundaries, [hi]])
            for j in range(points.size):
                a, b = edges[j], edges[j + 1]
                if b <= a:
                    continue
                val, _ = integrate.quad(
                    lambda x, r=points[j]: source.density(x)
                    * float(psi(np.array([(x - r) / s]))[0]),
                    a,
                    b,
                    limit=300,
                )
                total += val
            return total

        return G

    def G(s):
        s_scale = 3.0 * s
        total = 0.0
        # interior regions, all nodes in one vectorized evaluation
        if points.size > 1:
            all_nodes = []
            all_weights = []
            all_reps = []
            xg, wg = stable_core._gauss_legendre(14)
            for j in range(1, points.size - 1):
                a, b = boundaries[j - 1], boundaries[j]
                edges = _region_edges(a, b, points[j], s_scale, adapter)
                mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
                half = 0.5 * (edges[1:] - edges[:-1])[:, None]
                nodes = mid + half * xg[None, :]
                all_nodes.append(nodes.ravel())
                all_weights.append((half * wg[None, :]).ravel())
                all_reps.append(np.full(nodes.size, points[j]))
            if all_nodes:
                nodes = np.concatenate(all_nodes)
                weights = np.concatenate(all_weights)
                reps = np.concatenate(all_reps)
                total += float(
                    np.sum(weights * adapter.pdf_vec(nodes) * psi((nodes - reps) / s))
                )
            total += _outer_region_integral(adapter, psi, points[-1], boundaries[-1], s)
            # left outer region by reflection (psi is even, the density symmetric)
            total += _outer_region_integral(adapter, psi, -points[0], -boundaries[0], s)
        else:
            # single region covering the line, split at the representation point
            rep = points[0]
            total += _outer_region_integral(adapter, psi, rep, rep, s)
            total += _outer_region_integral(adapter, psi, -rep, -rep, s)
        return total

    return G


def _error_strength_raw(
    points,
    boundaries,
    source: SourceSpec,
    alpha: float,
    tol: float = DEFAULT_TOL,
    s_hint: float | None = None,
) -> StrengthSolution:
    psi = reference_neg_log_density(alpha)
    adapter = None
    if not isinstance(source, EmpiricalSource):
        adapter = _DensityAdapter(source)
    G = _g_of_partition(points, boundaries, source, alpha, psi, adapter)
    h = reference_entropy(ReferenceLaw(alpha, 1))
    tight = s_hint is not None and s_hint > 0.0
    if tight:
        s0 = s_hint
    else:
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        if pts.size > 1:
            s0 = max(float(np.median(np.diff(pts))) * 0.3, 1e-12)
        else:
            s0 = adapter.scale if adapter is not None else max(
                float(np.median(np.abs(source.batch.values))), 1e-12
            )
    return _solve_monotone(lambda s: G(s) - h, s0, tol, tight=tight)


def error_strength(
    q: Quantizer,
    source: SourceSpec,
    alpha: float,
    tol: float = DEFAULT_TOL,
    s_hint: float | None = None,
) -> StrengthSolution:
    """Strength s of the quantization error X - Q(X), solving the defining
    piecewise-integral equation for s."""
    return _error_strength_raw(q.points, q.boundaries, source, alpha, tol, s_hint)


# ---------------------------------------------------------------------------
# output entropy


def output_entropy(q: Quantizer, source: SourceSpec) -> float:
    """Entropy H(V) of the quantizer output, in nats."""
    if isinstance(source, EmpiricalSource):
        idx = _quantize_vec(q, source.batch.values)
        counts = np.bincount(idx, minlength=q.levels).astype(float)
        p = counts / counts.sum()
    else:
        adapter = _DensityAdapter(source)
        edges = np.concatenate([[-np.inf], q.boundaries, [np.inf]])
        p = np.empty(q.levels)
        for j in range(q.levels):
            a, b = edges[j], edges[j + 1]
            if a == -np.inf and b == np.inf:
                p[j] = 1.0
            elif a == -np.inf:
                p[j] = adapter.tail_mass(-b)
            elif b == np.inf:
                p[j] = adapter.tail_mass(a)
            else:
                p[j] = adapter.mass(a, b)
    p = np.clip(p, 0.0, 1.0)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


# ---------------------------------------------------------------------------
# design (alternating midpoint regions / point optimization)


def _mirror(free_positive: np.ndarray, M: int) -> np.ndarray:
    pos = np.sort(np.asarray(free_positive, dtype=float))
    if M % 2 == 0:
        return np.concatenate([-pos[::-1], pos])
    return np.concatenate([-pos[::-1], [0.0], pos])


def _abs_quantile(source: SourceSpec, p: float, adapter=None) -> float:
    if isinstance(source, EmpiricalSource):
        vals = np.abs(source.batch.values)
        return float(np.quantile(vals, p))
    if isinstance(source, UniformSource):
        return p * source.half_width
    if adapter is None:
        adapter = _DensityAdapter(source)

    def fn(x):
        return adapter.mass(-x, x) - p

    hi = adapter.scale
    for _ in range(80):
        if fn(hi) > 0.0:
            break
        hi *= 2.0
    return float(optimize.brentq(fn, 1e-12 * adapter.scale, hi, rtol=1e-10))


def _check_symmetric_unimodal(source: SourceSpec) -> None:
    if isinstance(source, EmpiricalSource):
        vals = source.batch.values
        scale = float(np.median(np.abs(vals)))
        if scale == 0.0:
            return
        if abs(float(np.median(vals))) > 0.1 * scale:
            raise NonSymmetricSource("sample median is far from 0")
        return
    adapter = _DensityAdapter(source)
    xs = adapter.scale * np.linspace(0.05, 4.0, 10)
    fp = adapter.pdf_vec(xs)
    fm = adapter.pdf_vec(-xs)
    ref = adapter.pdf_vec(np.array([0.0]))[0]
    if np.any(np.abs(fp - fm) > 1e-6 * (ref + fp)):
        raise NonSymmetricSource("density is not symmetric about 0")
    seq = np.concatenate([[ref], fp])
    if np.any(np.diff(seq) > 1e-9 * ref):
        raise NonSymmetricSource("density is not unimodal about 0")


def design_optimal(
    source: SourceSpec,
    alpha: float,
    M: int,
    tol: float | None = None,
    seed: int = 0,
) -> DesignReport:
    """Design a strength-optimal M-point quantizer for a symmetric unimodal source.

    Alternates the midpoint rule for the regions with a Nelder-Mead update of
    the mirrored positive points (searched in log space, restarted once from
    a perturbed simplex), until the strength improvement falls below tol
    (default: 1e-6 of the current strength).
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    _check_symmetric_unimodal(source)
    rng = np.random.default_rng(seed)

    if M == 1:
        sol = solve_strength(source, alpha)
        quant = Quantizer(points=np.array([0.0]), boundaries=np.empty(0), symmetric=True)
        return DesignReport(
            quantizer=quant,
            error_strength=sol.value,
            iterations=0,
            strength_trace=[sol.value],
            seed=int(seed),
        )

    m = M // 2
    adapter = None if isinstance(source, EmpiricalSource) else _DensityAdapter(source)
    levels = (2.0 * np.arange(m) + 1.0) / (2.0 * M)
    init = np.array([_abs_quantile(source, p, adapter) for p in levels])
    init = np.maximum(init, 1e-9)
    init *= np.exp(0.05 * rng.standard_normal(m))
    init = np.sort(init)

    max_outer = 200
    s_hint = None

    def measure(free_pos):
        pts = _mirror(free_pos, M)
        bnd = midpoint_boundaries(pts)
        return _error_strength_raw(pts, bnd, source, alpha, s_hint=s_hint).value

    free = init
    s_cur = measure(free)
    trace = [s_cur]
    s_hint = s_cur
    iterations = 0

    for _ in range(max_outer):
        iterations += 1
        pts = _mirror(free, M)
        bnd_fixed = midpoint_boundaries(pts)  # regions frozen during the point update

        def objective(v):
            p = np.sort(np.exp(v))
            if np.any(np.diff(p) < _MERGE_GAP) or (M % 2 and p[0] < _MERGE_GAP):
                return s_cur * 10.0
            full = _mirror(p, M)
            return _error_strength_raw(
                full, bnd_fixed, source, alpha, tol=max(1e-10, 1e-8 * s_cur),
                s_hint=s_hint,
            ).value

        v0 = np.log(free)
        res = optimize.minimize(
            objective,
            v0,
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-9 * s_cur, "maxiter": 250 * m},
        )
        simplex = res.x + 0.05 * rng.standard_normal((m + 1, m))
        res2 = optimize.minimize(
            objective,
            res.x,
            method="Nelder-Mead",
            options={
                "xatol": 1e-7,
                "fatol": 1e-9 * s_cur,
                "maxiter": 250 * m,
                "initial_simplex": simplex,
            },
        )
        best = res2.x if res2.fun < res.fun else res.x
        free_new = np.sort(np.exp(best))
        s_new = measure(free_new)  # midpoint-consistent state
        if s_new > s_cur:
            break  # numerical noise floor reached; keep the previous state
        improvement = s_cur - s_new
        free = free_new
        s_cur = s_new
        trace.append(s_cur)
        s_hint = s_cur
        threshold = tol if tol is not None else 1e-6 * s_cur
        if improvement < threshold:
            break

    pts = _mirror(free, M)
    if np.any(np.diff(pts) < _MERGE_GAP):
        warnings.warn(
            "representation points collapsed; merging coincident points",
            DegenerateDesignWarning,
        )
        keep = np.concatenate([[True], np.diff(pts) >= _MERGE_GAP])
        pts = pts[keep]
        quant = Quantizer.from_points(pts, symmetric=False)
    else:
        quant = Quantizer.from_points(pts, symmetric=True)
    return DesignReport(
        quantizer=quant,
        error_strength=s_cur,
        iterations=iterations,
        strength_trace=trace,
        seed=int(seed),
    )


# ---------------------------------------------------------------------------
# uniform quantizers


def _uniform_weights(spec: UniformSpec, adapter: _DensityAdapter, n_nodes: int = 48):
    """Precompute offset nodes u_i and weights W_i with
    G(s) = sum_i W_i psi(u_i / s) for the untruncated uniform quantizer."""
    delta = spec.delta
    xg, wg = stable_core._gauss_legendre(n_nodes)
    u = 0.5 * delta * xg  # offsets within a region
    if spec.k_max is not None:
        k_core = int(spec.k_max)
    else:
        # exact summation radius: beyond it the density sits in its power tail
        # and the flat-grouping (midpoint) error, bounded through |f''|, stays
        # below 1e-10 nats
        x_req = 3.0 * adapter.core_extent
        k_x = adapter.tail_k
        if k_x > 0.0:
            a_s = adapter.alpha_src
            bound = (delta ** 2 / 24.0) * k_x * (a_s + 1.0) * (a_s + 2.0) * 6.0
            x_req = max(x_req, (bound / 1e-10) ** (1.0 / (a_s + 2.0)))
        k_core = int(math.ceil(x_req / delta)) + 2
    k_core = min(k_core, 200_000)
    ks = np.arange(-k_core, k_core + 1)
    nodes = ks[:, None] * delta + u[None, :]
    fsum = adapter.pdf_vec(nodes.ravel()).reshape(nodes.shape).sum(axis=0)
    edge = k_core * delta + 0.5 * delta
    tail = adapter.tail_mass(edge)
    fsum = fsum + 2.0 * tail / delta  # grouped mass of all remaining regions
    W = 0.5 * delta * wg * fsum
    return u, W, ks, edge


def uniform_error_strength(
    spec: UniformSpec,
    source: SourceSpec,
    alpha: float,
    tol: float = DEFAULT_TOL,
) -> StrengthSolution:
    """Error strength of the uniform quantizer x -> round(x / delta) * delta."""
    if isinstance(source, EmpiricalSource):
        vals = source.batch.values
        offs = vals - np.round(vals / spec.delta) * spec.delta
        psi = reference_neg_log_density(alpha)
        h = reference_entropy(ReferenceLaw(alpha, 1))
        return _solve_monotone(
            lambda s: float(np.mean(psi(offs / s))) - h,
            0.2 * spec.delta,
            tol,
        )
    adapter = _DensityAdapter(source)
    psi = reference_neg_log_density(alpha)
    u, W, _, _ = _uniform_weights(spec, adapter)
    h = reference_entropy(ReferenceLaw(alpha, 1))

    def fn(s):
        return float(np.sum(W * psi(u / s))) - h

    return _solve_monotone(fn, 0.2 * spec.delta, tol)


def high_rate_prediction(alpha: float, delta: float) -> float:
    """High-rate limit of the uniform error strength: delta * s_alpha(U)."""
    from .strength import strength_of_uniform

    if not delta > 0.0:
        raise ValueError("delta must be positive")
    return delta * strength_of_uniform(alpha)


def truncated_uniform(delta: float, M: int) -> Quantizer:
    """M-level uniform quantizer with width-delta inner regions.

    Even M uses points +-(k - 1/2) delta (mid-rise); odd M uses k delta
    (mid-tread).  The two outer regions are unbounded.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    if M % 2 == 0:
        ks = np.arange(1, M // 2 + 1)
        pts = np.concatenate([-(ks[::-1] - 0.5), ks - 0.5]) * delta
    else:
        half = (M - 1) // 2
        pts = np.arange(-half, half + 1) * delta
    return Quantizer.from_points(pts, symmetric=True)


def _truncated_uniform_g(delta, M, source, alpha):
    """G(s) callable plus region masses for the M-level uniform quantizer."""
    adapter = _DensityAdapter(source)
    psi = reference_neg_log_density(alpha)
    q = truncated_uniform(delta, M)
    pts = q.points
    top = pts[-1]
    edge = top - 0.5 * delta  # the top region is (top - delta/2, infinity)
    n_inner = M - 2
    xg, wg = stable_core._gauss_legendre(32)
    u = 0.5 * delta * xg
    if n_inner > 0:
        inner_pts = pts[1:-1]
        nodes = inner_pts[:, None] + u[None, :]
        fvals = adapter.pdf_vec(nodes.ravel()).reshape(nodes.shape)
        fsum = fvals.sum(axis=0)
        W = 0.5 * delta * wg * fsum
        p_inner = (0.5 * delta * wg[None, :] * fvals).sum(axis=1)
    else:
        W = np.zeros_like(u)
        p_inner = np.empty(0)

    def G(s):
        total = float(np.sum(W * psi(u / s))) if n_inner > 0 else 0.0
        total += 2.0 * _outer_region_integral(adapter, psi, top, edge, s)
        return total

    p_outer = adapter.tail_mass(edge)
    probs = np.concatenate([[p_outer], p_inner, [p_outer]])
    return G, probs, q


def uniform_levels_strength(
    delta: float, M: int, source: SourceSpec, alpha: float, tol: float = DEFAULT_TOL
):
    """(strength solution, output entropy, quantizer) for the M-level uniform
    quantizer of width delta."""
    G, probs, q = _truncated_uniform_g(delta, M, source, alpha)
    h = reference_entropy(ReferenceLaw(alpha, 1))
    sol = _solve_monotone(lambda s: G(s) - h, 0.3 * delta, tol)
    p = probs[probs > 0.0]
    p = p / p.sum()
    entropy = float(-np.sum(p * np.log(p)))
    return sol, entropy, q


def best_uniform_design(source: SourceSpec, alpha: float, M: int, tol: float = 1e-6):
    """Pick the region width minimizing the M-level uniform error strength.

    Returns (delta, strength solution, output entropy, quantizer).
    """
    adapter = _DensityAdapter(source)
    scale = adapter.scale

    def strength_of(logd):
        d = math.exp(logd)
        G, _, _ = _truncated_uniform_g(d, M, source, alpha)
        h = reference_entropy(ReferenceLaw(alpha, 1))
        return _solve_monotone(lambda s: G(s) - h, 0.3 * d, DEFAULT_TOL).value

    lo = math.log(6.0 * scale / M ** 1.35)
    hi = math.log(8.0 * scale)
    grid = np.linspace(lo, hi, 18)
    vals = [strength_of(g) for g in grid]
    i = int(np.argmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(
        strength_of, bounds=(a, b), method="bounded",
        options={"xatol": tol},
    )
    d_best = math.exp(res.x)
    sol, entropy, q = uniform_levels_strength(d_best, M, source, alpha)
    return d_best, sol, entropy, q


# ---------------------------------------------------------------------------
# KKT width equation


def kkt_width_solution(ratio: float) -> float:
    """Unique u = delta/(2s) > 0 with arctan(u)/u = 1 - ratio/2, 0 < ratio < 2."""
    if not 0.0 < ratio < 2.0:
        raise OutOfRange("ratio must lie in (0, 2)")
    target = 1.0 - ratio / 2.0

    def fn(u):
        return math.atan(u) / u - target

    lo, hi = 1e-9, 1.0
    while fn(hi) > 0.0:
        hi *= 4.0
        if hi > 1e18:
            raise OutOfRange("no finite solution found")
    while fn(lo) < 0.0:
        lo /= 4.0
        if lo < 1e-300:
            raise OutOfRange("no positive solution found")
    return float(optimize.brentq(fn, lo, hi, xtol=1e-15, rtol=8.9e-16))


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def quantizer_to_json(q: Quantizer, alpha: float, error_strength_value: float) -> str:
    """Serialize to the fixed-field JSON document (17 significant digits)."""
    pts = ", ".join(_fmt(p) for p in q.points)
    bnd = ", ".join(_fmt(b) for b in q.boundaries)
    sym = "true" if q.symmetric else "false"
    return (
        "{"
        f'"alpha": {_fmt(alpha)}, '
        f'"points": [{pts}], '
        f'"boundaries": [{bnd}], '
        f'"symmetric": {sym}, '
        f'"error_strength": {_fmt(error_strength_value)}'
        "}"
    )


def quantizer_from_json(text: str):
    """Parse the JSON document back into (Quantizer, alpha, error_strength)."""
    doc = json.loads(text)
    q = Quantizer(
        points=np.asarray(doc["points"], dtype=float),
        boundaries=np.asarray(doc["boundaries"], dtype=float),
        symmetric=bool(doc["symmetric"]),
    )
    return q, float(doc["alpha"]), float(doc["error_strength"])
