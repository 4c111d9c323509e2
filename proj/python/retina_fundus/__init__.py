"""Retinal fundus analysis: vessel segmentation, optic disc localisation and
hard exudate detection on uint8 numpy images."""

from ._retina import (
    InvalidArchitecture,
    OdLocation,
    PipelineConfig,
    Point,
    canny,
    clahe,
    confusion,
    detect_exudates,
    locate_optic_disc,
    median_filter,
    metrics,
    output_extent,
    segment_vessels,
    trace_shapes,
)

__all__ = [
    "InvalidArchitecture",
    "OdLocation",
    "PipelineConfig",
    "Point",
    "canny",
    "clahe",
    "confusion",
    "detect_exudates",
    "locate_optic_disc",
    "median_filter",
    "metrics",
    "output_extent",
    "segment_vessels",
    "trace_shapes",
]
