"""Deterministic tourist walk texture descriptors with subsampled walk starts."""

from .classify import CvReport, LdaModel, cross_validate, fit_lda, predict
from .features import (ExtractionConfig, FeatureVector, JointDistribution, extract,
                       extract_dataset, feature_slice, histogram)
from .image import (DataError, GrayImage, LabeledDataset, PixelCoord, load_dataset, load_image,
                    neighbors, pixel_code, weight)
from .sampling import ALL, KSpec, StartSelection, export_mask, fraction_for_spec, select_starts
from .walk import Rule, Trajectory, WalkConfig, WalkState, next_step, run_batch, run_walk

__version__ = "0.1.0"
