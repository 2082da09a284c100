"""Monodromy of the dualizing covering of a reduced plane curve, computed by
numerical path tracking in a generic pencil of lines."""

from .curve import CurveSpec, curve_from_dict, load_curve, xvars
from .partitions import Partition, join, thickest_sym_partition
from .permgroup import PermGroup, Permutation, is_product_of_symmetric, word_for
from .pipeline import PipelineOptions, PipelineReport, run_pipeline, transposition_certificate

__version__ = "0.1.0"

__all__ = [
    "CurveSpec", "curve_from_dict", "load_curve", "xvars",
    "Partition", "join", "thickest_sym_partition",
    "PermGroup", "Permutation", "is_product_of_symmetric", "word_for",
    "PipelineOptions", "PipelineReport", "run_pipeline", "transposition_certificate",
]
