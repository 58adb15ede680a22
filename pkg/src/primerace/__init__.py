"""Residue-class prime races modulo 6, with product-count and census tooling."""

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .errors import (
    BoundTooLargeError,
    CheckpointCorruptError,
    CheckpointError,
    CheckpointVersionError,
    ConfigError,
    OrderError,
    PrimeRaceError,
    VerificationError,
)
from .products import (
    closure_class,
    composite_census,
    count_cross_class_products,
    count_same_class_products,
    enumerate_products,
    multiplicity_histogram,
)
from .race import (
    DeltaSample,
    RaceCounters,
    RaceSummary,
    RaceTracker,
    ResidueClass,
    accumulate,
    classify_residue,
    delta_series,
    sign_changes,
)
from .sieve import (
    MaxCount,
    MaxValue,
    PrimeStream,
    SieveConfig,
    nth_prime_upper_bound,
    segmented_stream,
    simple_sieve,
    trial_division_oracle,
)

__version__ = "0.1.0"
