"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 2, DataError and its
subclasses -> 3, anything else (including InvariantError) -> 4.
"""


class ClimfiscError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ClimfiscError):
    """Bad run configuration: missing paths, out-of-range parameters."""


class DataError(ClimfiscError):
    """Input data violates a documented contract."""


class ParseError(DataError):
    """Malformed input file: bad header, conflicting duplicates, bad cells."""


class UnitError(DataError):
    """A unit string that cannot be converted to the canonical unit."""


class MissingObservation(ClimfiscError):
    """A required (variable, year) observation is absent."""


class DegenerateBaseline(ClimfiscError):
    """Baseline value is zero, so a relative reduction is undefined."""


class MissingCountryError(DataError):
    """No complete indicator record exists for the requested (country, year)."""


class ObservationExcluded(ClimfiscError):
    """A scenario was excluded from a statistic; ``reason`` says why."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NoPairsError(DataError):
    """A pair map yielded no usable scenario pairs at all."""


class InvariantError(ClimfiscError):
    """An internal invariant was violated; indicates a bug, not bad input."""
