"""Symbolic dynamics of billiards in Euclidean polygons.

Bounce words, periodic-orbit decisions, generalized diagonals, unfoldings
to flat surfaces, and cutting sequences, over an exact-rational or
float-with-tolerance geometry kernel.
"""

from . import errors
from .analysis import (
    ComparisonResult,
    DiagonalRecord,
    PeriodicOrbitResult,
    WordLanguage,
    compare_spectra,
    enumerate_generalized_diagonals,
    flag_singular_words,
    periodic_orbit_for_word,
    sample_bounce_language,
    sample_states,
    witness_at_offset,
)
from .flow import (
    BounceWord,
    PaddedWord,
    RayState,
    Trajectory,
    bounce_word,
    classify_padded_word,
    trace,
    trace_backward,
)
from .geom import (
    EXACT,
    F64,
    PlanarIsometry,
    Point2,
    Segment,
    Vec2,
    compose,
    direction,
    orientation,
    ray_segment_hit,
    reflection_across,
    set_float_tolerance,
)
from .surface import (
    CuttingWord,
    GluedPolygon,
    combinatorially_equivalent,
    cutting_sequence,
    load_glued_polygon,
    validate_glued_polygon,
)
from .table import (
    LabeledTable,
    TableClass,
    classify_table,
    load_table,
    transform_table,
    validate_table,
)
from .unfolding import (
    TranslationSurface,
    UnfoldingCorridor,
    build_rational_unfolding,
    develop_trajectory,
    fold_back,
    format_surface,
    unfold_word,
)

__version__ = "0.1.0"
