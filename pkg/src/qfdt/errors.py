"""Exception hierarchy.

``DataError`` and ``NumericalError`` are the two families the CLI maps to
distinct exit codes.
"""


class QFDTError(Exception):
    """Base class for every error raised by this package."""


class DataError(QFDTError):
    pass


class NumericalError(QFDTError):
    pass


class NotPSD(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class AllZeroCounts(NumericalError):
    pass


class LengthMismatch(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownLabel(DataError):
    pass


class EmptyDataset(DataError):
    pass


class UnknownDataset(DataError):
    pass


class DatasetUnavailable(DataError):
    pass


class DegenerateSplit(DataError):
    pass


class MalformedModel(DataError):
    pass


class MissingFeatureValue(DataError):
    pass


class EmptyRootPartition(DataError):
    pass


class EmptyScoreList(QFDTError):
    pass


class UndefinedMetric(QFDTError):
    def __init__(self, name):
        super().__init__(f"{name} is undefined (zero denominator)")
        self.name = name
