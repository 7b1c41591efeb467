"""Frequency-spectrum image augmentation and robustness metrics.

The package splits images into low and high frequency content (gaussian
blur and its residual, or DFT amplitude and phase) and builds batch
augmentations that exchange that content between images, plus the
metrics and a small training harness used to verify that the exchange
actually removes high-frequency shortcuts.
"""

from .hybrid import (
    MODES,
    AugmentConfig,
    LabeledBatch,
    apr_p,
    apr_p_apply,
    apr_s,
    apr_s_apply,
    augment_batch,
    bernoulli_gate,
    ha_p,
    ha_p_apply,
    ha_pp_p,
    ha_pp_p_apply,
    ha_pp_s,
    ha_pp_s_apply,
    ha_s,
    ha_s_apply,
    make_rng,
)
from .metrics import (
    CORRUPTION_CATEGORIES,
    CORRUPTIONS,
    SEVERITIES,
    CorruptionErrorTable,
    DegenerateReferenceError,
    MetricsError,
    MissingDataError,
    ScoreSet,
    accuracy,
    auroc,
    corruption_error,
    mce,
)
from .photo_ops import OP_KINDS, AugOp, OpChain, apply_chain, apply_op, sample_chain
from .spectral import (
    FrequencyDecomposition,
    GaussianKernel,
    Spectrum,
    decompose,
    dft2,
    gaussian_kernel,
    idft2,
    low_pass,
)

__version__ = "0.1.0"

__all__ = [
    "MODES",
    "AugmentConfig",
    "LabeledBatch",
    "apr_p",
    "apr_p_apply",
    "apr_s",
    "apr_s_apply",
    "augment_batch",
    "bernoulli_gate",
    "ha_p",
    "ha_p_apply",
    "ha_pp_p",
    "ha_pp_p_apply",
    "ha_pp_s",
    "ha_pp_s_apply",
    "ha_s",
    "ha_s_apply",
    "make_rng",
    "CORRUPTION_CATEGORIES",
    "CORRUPTIONS",
    "SEVERITIES",
    "CorruptionErrorTable",
    "DegenerateReferenceError",
    "MetricsError",
    "MissingDataError",
    "ScoreSet",
    "accuracy",
    "auroc",
    "corruption_error",
    "mce",
    "OP_KINDS",
    "AugOp",
    "OpChain",
    "apply_chain",
    "apply_op",
    "sample_chain",
    "FrequencyDecomposition",
    "GaussianKernel",
    "Spectrum",
    "decompose",
    "dft2",
    "gaussian_kernel",
    "idft2",
    "low_pass",
    "__version__",
]
