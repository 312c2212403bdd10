"""Strength-based compression toolkit for alpha-stable sources.

Computes the alpha-power ("strength") of random variables, rate-distortion
functions under a strength constraint on the error, and strength-optimal
scalar quantizers, together with a CLI that emits the corresponding tables.
"""

from .errors import (
    AlphaMismatch,
    BracketFailure,
    DegenerateDesignWarning,
    InvalidDistortion,
    NonFiniteLogMoment,
    NonSymmetricSource,
    NotSorted,
    OutOfRange,
    QuadratureFailure,
    StableRDError,
    ZeroScale,
)
from .stable_core import (
    ReferenceLaw,
    SampleBatch,
    StableParams,
    add_independent,
    char_fn,
    log_pdf_reference,
    pdf,
    reference_entropy,
    sample,
    scale_shift,
)
from .strength import (
    EmpiricalSource,
    StrengthSolution,
    SymmetricStableSource,
    TabulatedSource,
    UniformSource,
    cauchy_source,
    cb_strength,
    g_value,
    gaussian_source,
    solve_strength,
    strength_closed_form,
    strength_of_uniform,
)
from .rate_distortion import (
    RDPoint,
    TestChannel,
    WaterFillAllocation,
    distortion_at_rate,
    rd_scalar,
    rd_vector_subgaussian,
    reverse_waterfill,
    test_channel,
)
from .quantizer import (
    DesignReport,
    Quantizer,
    UniformSpec,
    design_optimal,
    error_strength,
    high_rate_prediction,
    kkt_width_solution,
    midpoint_boundaries,
    output_entropy,
    quantize,
    quantizer_from_json,
    quantizer_to_json,
    uniform_error_strength,
)

__version__ = "0.1.0"
