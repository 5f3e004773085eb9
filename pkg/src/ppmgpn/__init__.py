"""Pivot phoneme merging and global phoneme noise for two-pass cross-lingual ASR."""

__version__ = "0.1.0"

from .errors import PpmgpnError
from .kernels import BACKEND as KERNEL_BACKEND
from .noise import TriphoneNoiseModel, analyze_triphone_noise, apply_pseudo_noise, \
    replacement_probability
from .phonology import FeatureTable, Phonology, load_feature_table, segment_ipa
from .pipeline import PipelineConfig, run_pipeline
from .ppm import build_merge_map, coverage, select_pivots

__all__ = [
    "FeatureTable", "KERNEL_BACKEND", "Phonology", "PipelineConfig", "PpmgpnError",
    "TriphoneNoiseModel", "analyze_triphone_noise", "apply_pseudo_noise", "build_merge_map",
    "coverage", "load_feature_table", "replacement_probability", "run_pipeline",
    "segment_ipa", "select_pivots",
]
