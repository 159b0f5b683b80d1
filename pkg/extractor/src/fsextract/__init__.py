"""fsextract: penultimate features/logits from vision backbones into FSET1
containers, plus synthetic validation-OOD image corruption."""

from .backbones import FEATURE_DIMS, Backbone, build_backbone
from .corrupt import corrupt, corrupt_array
from .errors import ExtractError, HeadMismatch, UndecodableImage
from .extract import ExtractionJob, extract, list_class_images
from .fset_writer import write_fset

__version__ = "0.1.0"

__all__ = [
    "FEATURE_DIMS",
    "Backbone",
    "build_backbone",
    "corrupt",
    "corrupt_array",
    "ExtractError",
    "HeadMismatch",
    "UndecodableImage",
    "ExtractionJob",
    "extract",
    "list_class_images",
    "write_fset",
    "__version__",
]
