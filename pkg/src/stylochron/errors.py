"""Exception hierarchy for the stylochron toolkit."""


class StylochronError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(StylochronError):
    pass


# corpus
class MissingFileError(StylochronError):
    pass


class DuplicateDocIdError(StylochronError):
    pass


class InconsistentVolumePeriodError(StylochronError):
    pass


class EncodingError(StylochronError):
    pass


class EmptyCorpusError(StylochronError):
    pass


# features
class EmptyDocumentError(StylochronError):
    pass


# metricspace / classify
class SpaceMismatchError(StylochronError):
    pass


# analysis
class InvalidMatrixError(StylochronError):
    pass


class DegenerateDataError(StylochronError):
    pass


# classify
class SingleClassError(StylochronError):
    pass


class ClassTooSmallError(StylochronError):
    pass


# topics
class EmptyVocabularyError(StylochronError):
    pass


class DocumentWithoutContentTokensError(StylochronError):
    pass


# temporal
class InsufficientDataError(StylochronError):
    pass
