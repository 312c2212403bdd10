"""The alpha-power ("strength") of scalar and sampled sources.

The strength of X at index alpha is the unique s > 0 with

    g(s) = -E[log f_ref(X / s)] = h(ref),

where `ref` is the reference symmetric stable law of `stable_core`.  g is
non-increasing and continuous in s, so the root is found by geometric
bracket expansion followed by Brent's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate, optimize
from scipy.special import digamma, gammaln

from . import stable_core
from .errors import BracketFailure, NonFiniteLogMoment, QuadratureFailure
from .stable_core import ReferenceLaw, SampleBatch, StableParams, standard_density

__all__ = [
    "SymmetricStableSource",
    "EmpiricalSource",
    "TabulatedSource",
    "UniformSource",
    "SourceSpec",
    "StrengthSolution",
    "cauchy_source",
    "gaussian_source",
    "g_value",
    "solve_strength",
    "strength_closed_form",
    "cb_strength",
    "strength_of_uniform",
]

DEFAULT_TOL = 1e-9  # nats, on the residual |g(s) - h|
_BRACKET_FACTOR = 4.0
_BRACKET_BUDGET = 60


@dataclass(frozen=True)
class SymmetricStableSource:
    """A symmetric stable scalar source (beta = delta = 0)."""

    params: StableParams

    def __post_init__(self):
        if self.params.beta != 0.0 or self.params.delta != 0.0:
            raise ValueError("symmetric stable source requires beta = delta = 0")


@dataclass(frozen=True)
class EmpiricalSource:
    """A source given by i.i.d. samples (scalars, or rows of d-vectors)."""

    batch: SampleBatch


@dataclass(frozen=True)
class TabulatedSource:
    """A source given by a density callback with support hints.

    `density` maps a scalar x to f(x); `support` is (lo, hi) and may be
    infinite.  Normalization is checked to 1e-6 on construction.
    """

    density: Callable[[float], float]
    support: tuple = (-np.inf, np.inf)

    def __post_init__(self):
        lo, hi = self.support
        mass, _ = integrate.quad(self.density, lo, hi, limit=400)
        if abs(mass - 1.0) > 1e-6:
            raise ValueError(f"tabulated density has mass {mass}, expected 1 +- 1e-6")


@dataclass(frozen=True)
class UniformSource:
    """Uniform on (-half_width, half_width)."""

    half_width: float

    def __post_init__(self):
        if self.half_width < 0.0:
            raise ValueError("half_width must be nonnegative")


SourceSpec = Union[SymmetricStableSource, EmpiricalSource, TabulatedSource, UniformSource]


def cauchy_source(gamma: float = 1.0) -> SymmetricStableSource:
    return SymmetricStableSource(StableParams(1.0, 0.0, gamma, 0.0))


def gaussian_source(sigma: float = 1.0) -> SymmetricStableSource:
    """Centered normal with standard deviation sigma (a 2-stable with scale sigma/sqrt 2)."""
    return SymmetricStableSource(StableParams(2.0, 0.0, sigma / math.sqrt(2.0), 0.0))


@dataclass(frozen=True)
class StrengthSolution:
    """A solved strength with solver diagnostics."""

    value: float
    residual: float
    bracket: tuple
    evaluations: int


# ---------------------------------------------------------------------------
# the negative reference log-density and expectation machinery


def reference_neg_log_density(alpha: float):
    """Vectorized psi(z) = -log f_ref(z) for the d = 1 reference at index alpha."""
    ref_scale = (1.0 / alpha) ** (1.0 / alpha)
    eng = standard_density(alpha)
    log_scale = math.log(ref_scale)

    def psi(z):
        return log_scale - eng.log_pdf_vec(np.asarray(z, dtype=float) / ref_scale)

    return psi


def _expect_even_stable(src: SymmetricStableSource, phi_vec) -> float:
    """E[phi(X)] for an even, log-growth phi against a symmetric stable source."""
    a_s = src.params.alpha
    g_s = src.params.gamma
    eng = standard_density(a_s)

    def core_fn(t):
        return eng.pdf_vec(t) * phi_vec(g_s * t)

    edges = np.concatenate([[0.0], np.geomspace(1e-13, stable_core.TAIL_CUTOFF, 90)])
    core = stable_core._panel_integral(core_fn, edges)
    if a_s == 2.0:
        return 2.0 * core  # the Gaussian envelope is spent well inside the core
    y_max = 55.0 / a_s + math.log(stable_core.TAIL_CUTOFF) + 5.0

    def tail_fn(y):
        t = np.exp(y)
        return np.exp(stable_core._log_pdf0_tail(a_s, t)) * phi_vec(g_s * t) * t

    y_edges = np.linspace(math.log(stable_core.TAIL_CUTOFF), y_max, 70)
    tail = stable_core._panel_integral(tail_fn, y_edges)
    return 2.0 * (core + tail)


def _expect_even_uniform(src: UniformSource, phi_vec) -> float:
    w = src.half_width
    edges = np.concatenate([[0.0], np.geomspace(w * 1e-13, w, 60)])
    return stable_core._panel_integral(phi_vec, edges) / w


def _expect_tabulated(src: TabulatedSource, phi_scalar) -> float:
    """E[phi(X)] against a tabulated density, with divergence detection.

    Infinite tails are accumulated over doubling segments; if the segment
    contributions fail to decay the log-moment proxy is declared divergent.
    """
    lo, hi = src.support
    f = src.density

    def seg(a, b):
        val, _ = integrate.quad(
            lambda x: f(x) * float(phi_scalar(x)), a, b, limit=300,
            epsabs=1e-12, epsrel=1e-10,
        )
        return val

    total = 0.0
    c = 64.0
    finite_lo = math.isfinite(lo)
    finite_hi = math.isfinite(hi)
    a = lo if finite_lo else -c
    b = hi if finite_hi else c
    total += seg(a, b)
    for sign, open_end in ((1.0, not finite_hi), (-1.0, not finite_lo)):
        if not open_end:
            continue
        prev = math.inf
        x0 = c
        for k in range(_BRACKET_BUDGET):
            piece = seg(sign * x0, sign * 2.0 * x0) * sign
            total += piece
            if abs(piece) < 1e-13 * max(abs(total), 1.0):
                break
            if k > 6 and abs(piece) > prev:
                raise NonFiniteLogMoment(
                    "tail integral fails to decay; log-moment proxy diverges"
                )
            prev = abs(piece)
            x0 *= 2.0
        else:
            raise NonFiniteLogMoment(
                "tail integral did not converge within the doubling budget"
            )
    if not math.isfinite(total):
        raise NonFiniteLogMoment("expectation evaluated to a non-finite value")
    return total


def _as_scalar_fn(phi_vec):
    def phi(x):
        return float(phi_vec(np.asarray([x], dtype=float))[0])

    return phi


def _expect(source: SourceSpec, phi_vec) -> float:
    if isinstance(source, EmpiricalSource):
        vals = source.batch.values
        if vals.ndim != 1:
            raise ValueError("scalar expectation requires 1-d samples")
        return float(np.mean(phi_vec(vals)))
    if isinstance(source, SymmetricStableSource):
        return _expect_even_stable(source, phi_vec)
    if isinstance(source, UniformSource):
        return _expect_even_uniform(source, phi_vec)
    if isinstance(source, TabulatedSource):
        return _expect_tabulated(source, _as_scalar_fn(phi_vec))
    raise TypeError(f"unsupported source kind: {type(source).__name__}")


# ---------------------------------------------------------------------------
# g and the strength solver


def _source_dimension(source: SourceSpec) -> int:
    if isinstance(source, EmpiricalSource) and source.batch.values.ndim == 2:
        return source.batch.values.shape[1]
    return 1


def g_value(source: SourceSpec, alpha: float, s: float) -> float:
    """g(s) = -E[log f_ref(X / s)] in nats."""
    if not s > 0.0:
        raise ValueError("s must be positive")
    d = _source_dimension(source)
    if d == 1:
        if (
            alpha == 2.0
            and isinstance(source, SymmetricStableSource)
            and source.params.alpha < 2.0
        ):
            raise NonFiniteLogMoment(
                "a heavy-tailed source has no finite second moment, so g "
                "diverges at alpha = 2"
            )
        psi = reference_neg_log_density(alpha)
        return _expect(source, lambda x: psi(np.asarray(x) / s))
    # d-dimensional empirical path
    ref = ReferenceLaw(alpha, d)
    vals = source.batch.values / s
    r2 = np.einsum("ij,ij->i", vals, vals)
    if alpha == 2.0:
        return float(np.mean(0.5 * r2 + (d / 2.0) * math.log(2.0 * math.pi)))
    if alpha == 1.0:
        half = (d + 1.0) / 2.0
        return float(
            np.mean(
                half * math.log(math.pi)
                - gammaln(half)
                + half * np.log1p(r2)
            )
        )
    # No closed form: per-sample radial inversion (slow; intended for small n).
    return float(
        -np.mean(
            [stable_core.log_pdf_reference(ref, v) for v in vals]
        )
    )


def _is_zero_source(source: SourceSpec) -> bool:
    if isinstance(source, EmpiricalSource):
        return bool(np.all(source.batch.values == 0.0))
    if isinstance(source, UniformSource):
        return source.half_width == 0.0
    return False


def _scale_proxy(source: SourceSpec) -> float:
    if isinstance(source, EmpiricalSource):
        vals = np.abs(source.batch.values)
        if vals.ndim == 2:
            vals = np.sqrt(np.einsum("ij,ij->i", source.batch.values, source.batch.values))
        med = float(np.median(vals))
        if med > 0.0:
            return med
        return float(np.mean(vals))
    if isinstance(source, SymmetricStableSource):
        return source.params.gamma
    if isinstance(source, UniformSource):
        return source.half_width
    # tabulated: median of |X| by bisection on the mass; rough accuracy is
    # fine here, so integration warnings on slowly-decaying tails are muted
    lo, hi = source.support
    f = source.density

    def mass_above(c):
        import warnings

        pieces = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            if hi > c:
                pieces += integrate.quad(f, c, hi, limit=200)[0]
            if lo < -c:
                pieces += integrate.quad(f, lo, -c, limit=200)[0]
        return pieces - 0.5

    try:
        return optimize.brentq(mass_above, 1e-12, 1e6)
    except ValueError:
        return 1.0


def _solve_monotone(fn, s0: float, tol: float, tight: bool = False) -> StrengthSolution:
    """Root of a non-increasing fn(s) by geometric bracketing + Brent.

    `tight` starts with small expansion steps, for callers whose s0 is a warm
    guess (e.g. a neighbouring grid point's root).
    """
    evals = [0]

    def f(s):
        evals[0] += 1
        return fn(s)

    def factors():
        if tight:
            yield 1.02
            yield 1.3
        while True:
            yield _BRACKET_FACTOR

    v0 = f(s0)
    if v0 == 0.0:
        return StrengthSolution(s0, 0.0, (s0, s0), evals[0])
    lo = hi = s0
    vlo = vhi = v0
    steps = factors()
    if v0 > 0.0:  # root lies at larger s
        for _ in range(_BRACKET_BUDGET):
            lo, vlo = hi, vhi
            hi *= next(steps)
            vhi = f(hi)
            if vhi <= 0.0:
                break
        else:
            raise BracketFailure("no sign change found while expanding upward")
    else:
        for _ in range(_BRACKET_BUDGET):
            hi, vhi = lo, vlo
            lo /= next(steps)
            vlo = f(lo)
            if vlo >= 0.0:
                break
        else:
            raise BracketFailure("no sign change found while expanding downward")
    rtol = max(4.0 * np.finfo(float).eps, min(1e-12, tol * 1e-3))
    root = optimize.brentq(f, lo, hi, xtol=1e-300, rtol=rtol)
    residual = abs(f(root))
    # Brent at machine rtol leaves the residual far below tol in practice;
    # fall back to bisection against the residual if it somehow does not.
    a, b = lo, hi
    while residual > tol and (b - a) > 1e-17 * b:
        mid = 0.5 * (a + b)
        vm = f(mid)
        if abs(vm) < residual:
            root, residual = mid, abs(vm)
        if vm > 0.0:
            a = mid
        else:
            b = mid
    return StrengthSolution(float(root), float(residual), (float(lo), float(hi)), evals[0])


def solve_strength(source: SourceSpec, alpha: float, tol: float = DEFAULT_TOL) -> StrengthSolution:
    """Solve g(s) = h(ref) for the strength of the source at index alpha."""
    if _is_zero_source(source):
        return StrengthSolution(0.0, 0.0, (0.0, 0.0), 0)
    d = _source_dimension(source)
    h = stable_core.reference_entropy(ReferenceLaw(alpha, d))
    s0 = _scale_proxy(source)
    if not s0 > 0.0:
        s0 = 1.0
    return _solve_monotone(lambda s: g_value(source, alpha, s) - h, s0, tol)


def strength_closed_form(alpha: float, gamma: float) -> float:
    """Strength of a symmetric stable law: alpha^(1/alpha) * gamma."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    return alpha ** (1.0 / alpha) * gamma


def cb_strength(source: SourceSpec, d: int = 1, tol: float = DEFAULT_TOL) -> float:
    """Cauchy-based strength: the unique s with E[ln(1 + ||X||^2/s^2)] equal to
    ln 4 + psi((d+1)/2) + euler_gamma (which reduces to ln 4 when d = 1)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if _is_zero_source(source):
        return 0.0
    rhs = math.log(4.0) + digamma((d + 1.0) / 2.0) + np.euler_gamma
    if isinstance(source, EmpiricalSource) and source.batch.values.ndim == 2:
        vals = source.batch.values
        if vals.shape[1] != d:
            raise ValueError("sample dimension does not match d")
        r2 = np.einsum("ij,ij->i", vals, vals)

        def fn(s):
            return float(np.mean(np.log1p(r2 / (s * s)))) - rhs
    else:
        if d != 1:
            raise ValueError("d >= 2 requires d-dimensional samples")

        def fn(s):
            return _expect(source, lambda x: np.log1p((np.asarray(x) / s) ** 2)) - rhs

    s0 = _scale_proxy(source)
    if not s0 > 0.0:
        s0 = 1.0
    return _solve_monotone(fn, s0, tol).value


def strength_of_uniform(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Strength of Uniform(-1/2, 1/2) at index alpha.

    alpha = 2 is sqrt(1/12) exactly; alpha = 1 solves the closed arctan
    equation; other indices run the generic solver against the reference
    log-density.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if alpha == 2.0:
        return 1.0 / math.sqrt(12.0)
    if alpha == 1.0:
        def fn(s):
            return (
                math.log1p(1.0 / (4.0 * s * s))
                - 2.0
                + 4.0 * s * math.atan(1.0 / (2.0 * s))
                - math.log(4.0)
            )

        return float(optimize.brentq(fn, 1e-8, 10.0, xtol=1e-16, rtol=8.9e-16))
    return solve_strength(UniformSource(0.5), alpha, tol=tol).value
