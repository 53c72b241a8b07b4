"""Exception hierarchy shared by all timage modules.

Data-shaped problems (bad rows, bad labels, bad ranges) raise subclasses of
:class:`DataError`; filesystem problems raise subclasses of :class:`IoError`.
The CLI maps these onto exit codes 3 and 4 respectively.
"""


class TimageError(Exception):
    """Base class for every error raised by this package."""


class DataError(TimageError):
    """Input data violates a contract (CLI exit code 3)."""


class IoError(TimageError):
    """Filesystem or output-target problem (CLI exit code 4)."""


# -- archive parsing ---------------------------------------------------------

class MalformedRow(DataError):
    """A non-numeric value token (or interior NaN) inside a series row."""


class EmptyDataset(DataError):
    """An archive split file contains no rows."""


class SeriesTooShort(DataError):
    """A series has fewer than two finite values."""


class EmptyClass(DataError):
    """A declared class has a zero training count."""


# -- encoding ----------------------------------------------------------------

class OutOfRange(DataError):
    """A matrix entry falls outside [0, 1] beyond the allowed slack."""


# -- manifests and predictions -----------------------------------------------

class MissingImages(DataError):
    """Manifest construction referenced images that do not exist."""


class LabelCollision(DataError):
    """Target-label namespacing cannot disambiguate the inputs."""


class UnknownLabel(DataError):
    """A predicted label is absent from the manifest's label index."""


class DuplicateImagePath(DataError):
    """The same image path appears more than once."""


class MissingPredictions(DataError):
    """A test record has no prediction row."""


# -- baselines ---------------------------------------------------------------

class WindowInfeasible(DataError):
    """A DTW band is too narrow for the given length difference."""


class DimensionMismatch(DataError):
    """Feature vectors of incompatible lengths for the chosen metric."""


# -- evaluation --------------------------------------------------------------

class KeyMismatch(DataError):
    """Two accuracy tables share no datasets."""


# -- output ------------------------------------------------------------------

class OutputNotWritable(IoError):
    """An output directory or file cannot be created or written."""
