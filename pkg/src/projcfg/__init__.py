"""Exact computations in the cohomology of unordered pairs in projective space."""

from .graded_ring import (
    GeneratorSpec,
    GradedPiece,
    HeightResult,
    Presentation,
    RingElement,
    build_piece,
    equal_elements,
    height,
    is_zero,
    multiply,
    normal_form,
    reduce,
)
from .presentations import (
    binom_exact,
    binom_mod2,
    build_grassmann_mod2,
    build_integral,
    build_unordered_config_mod2,
    height_of_b,
    height_of_v,
    sq1,
    verify_sq1_ideal_invariance,
)

__version__ = "0.1.0"
