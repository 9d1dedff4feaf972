"""Recovery of a separable body-force source in the clamped Lame system.

The package reconstructs the spatial part f(x) of a forcing phi(t) f(x) on
the unit cube from the initial state and the surface-stress history, using
complex-frequency data functionals, stable Lagrange interpolation along the
imaginary frequency axis, and truncated cosine series.
"""

from .fields import (
    AxisFactor,
    FactorKind,
    Kernel,
    ONE,
    SeparableTerm,
    TrigField,
    cos_f,
    fourier_coefficient,
    h1_norm,
    h1_norm_sq,
    h2_norm,
    inner,
    integrate_axis,
    l2_norm,
    l2_norm_sq,
    sin_f,
    volume_integral,
)
from .interpolation import (
    NodeSet,
    amplification_log10,
    build_nodes,
    interp_coeff,
    lagrange_eval,
    select_r,
)
from .kernels import (
    D,
    E1,
    E2,
    Estar1,
    Estar2,
    Frequency,
    H,
    KernelIndex,
    g_kernel,
    hyp_ratio,
    lemma1_residual,
    source_transform,
)
from .numerics import DOUBLE, extended
from .problem import (
    BoundaryTraction,
    DataBundle,
    ExperimentConfig,
    FACES,
    LameConstants,
    SourceTimeProfile,
    disturbance_fields,
    example_disturbed,
    example_exact,
    lemma2_diagnostic,
    traction_from_displacement,
    traction_of,
    validate_w2,
    validate_w2prime,
)
from .reconstruct import (
    CoefficientTable,
    CosineSeries,
    assemble,
    build_coefficient_table,
    h1_error,
    kappa,
    l2_error,
    lemma5_check,
    truncate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
