"""Segmentation QA: MC-sample fusion, predictive entropy, doubt scoring, metrics.

Thin wrapper over the C++ core. Volumes are (nx, ny, nz) arrays in Fortran
order (x varies fastest); masks are uint8 {0,1}; spacings are mm.
"""

from segqa._core import (  # noqa: F401
    DoubtBreakdown,
    LogBase,
    SegqaError,
    __version__,
    binary_entropy,
    classify,
    dice,
    dilate,
    distance_weight,
    doubt_score,
    edt,
    exclusion_mask,
    flag,
    generate_phantom,
    hd95,
    invert,
    mc_mean,
    outline,
    plane_average,
    predictive_entropy,
    quadrant,
    threshold,
    volume_similarity,
    zscore_normalize,
)
