"""Structured sparsity with the SWAGGER penalty.

Thin wrappers over the C++ core. Vectors and matrices are numpy arrays of
float64; structure matrices are ``StructureMatrix`` objects from the builders.
"""

from ._core import (
    StructureMatrix,
    SwaggerError,
    bench,
    blur,
    block_group,
    cnc_shift,
    decompose,
    generate_structured_x,
    local_neighborhood,
    lntv_deblur_2d,
    lntv_denoise_1d,
    metrics,
    one_sparse,
    p_shrink,
    penalty,
    prox_l1sq,
    random_structure,
    soft_threshold,
    solve,
    synthesize_measurement,
)

__all__ = [
    "StructureMatrix",
    "SwaggerError",
    "bench",
    "blur",
    "block_group",
    "cnc_shift",
    "decompose",
    "generate_structured_x",
    "local_neighborhood",
    "lntv_deblur_2d",
    "lntv_denoise_1d",
    "metrics",
    "one_sparse",
    "p_shrink",
    "penalty",
    "prox_l1sq",
    "random_structure",
    "soft_threshold",
    "solve",
    "synthesize_measurement",
]
