"""morphsample - Grey-value morphological sampling and generalized max-pooling."""

from .binary_morph import bclose, bdilate, berode, bopen
from .grey_morph import gclose, gdilate, gerode, gopen
from .grid import BinaryImage, GreyImage, Sieve, restrict, restrict_binary
from .pooling import delta, h2_relations, rho, sigma, sigma_dot
from .sampling import (
    FilterSpec,
    check_binary_sampling,
    check_grey_sampling,
    max_reconstruct,
    min_reconstruct,
    validate_binary_conditions,
    validate_grey_conditions,
)
from .types import ConditionReport, RelationReport, RelationResult, Witness
from .umbra import UmbraSet, top_surface, umbra
from .verify import TrialConfig, TrialReport, exhaustive_small, run_suite

__all__ = [
    "BinaryImage",
    "GreyImage",
    "Sieve",
    "restrict",
    "restrict_binary",
    "bdilate",
    "berode",
    "bopen",
    "bclose",
    "gdilate",
    "gerode",
    "gopen",
    "gclose",
    "UmbraSet",
    "umbra",
    "top_surface",
    "FilterSpec",
    "validate_binary_conditions",
    "validate_grey_conditions",
    "max_reconstruct",
    "min_reconstruct",
    "check_binary_sampling",
    "check_grey_sampling",
    "sigma",
    "sigma_dot",
    "rho",
    "delta",
    "h2_relations",
    "ConditionReport",
    "RelationReport",
    "RelationResult",
    "Witness",
    "TrialConfig",
    "TrialReport",
    "run_suite",
    "exhaustive_small",
]
