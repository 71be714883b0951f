"""Exception types shared across the package."""


class BanditRangeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArm(BanditRangeError):
    """Unknown arm id passed to a sampling operation."""


class InvalidBudget(BanditRangeError):
    """Non-positive pull count requested."""


class InvalidInterval(BanditRangeError):
    """Interval with empty interior (left >= right)."""


class InvalidEps(BanditRangeError):
    """Approximation parameter outside its admissible range."""


class InvalidEta(BanditRangeError):
    """Non-positive lattice resolution."""


class InvalidHittingSet(BanditRangeError):
    """Hitting-set points are unsorted, duplicated, or miss an interval."""


class EmptyArmSet(BanditRangeError):
    """Subroutine invoked on an interval containing no arms."""


class WrongDimension(BanditRangeError):
    """Algorithm invoked on an instance of unsupported weight dimension."""


class InvalidWitness(BanditRangeError):
    """Oracle asked to judge an arm outside the queried interval."""


class OracleScaleExceeded(BanditRangeError):
    """Brute-force oracle invoked beyond its exhaustive-search budget."""


class DecodeFailure(BanditRangeError):
    """Game answer cannot be decoded from a range-search output."""


class ConfigMismatch(BanditRangeError):
    """Experiment configs that must share an instance do not."""
