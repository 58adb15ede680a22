"""Exception hierarchy shared by the sieve, race and CLI layers."""


class PrimeRaceError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PrimeRaceError, ValueError):
    """Invalid configuration (bad limit, segment length, modulus...)."""


class BoundTooLargeError(ConfigError):
    """A bound exceeds the documented cap of the operation."""


class OrderError(PrimeRaceError):
    """A prime was fed to an accumulator out of ascending order."""


class CheckpointError(PrimeRaceError):
    """Base class for checkpoint load failures."""


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointCorruptError(CheckpointError):
    pass


class VerificationError(PrimeRaceError):
    """A closed form or identity disagreed with its enumeration oracle."""
