"""Exception hierarchy. Everything raised on bad data derives from SessionMinerError."""


class SessionMinerError(Exception):
    """Base class for data and validation errors (CLI exit code 2)."""


# -- session model ------------------------------------------------------------

class EmptySession(SessionMinerError):
    pass


class UnorderedTimestamps(SessionMinerError):
    pass


class NoQueryEvent(SessionMinerError):
    pass


# -- log ingestion ------------------------------------------------------------

class UnreadableStream(SessionMinerError):
    pass


class HeaderError(SessionMinerError):
    """Missing or wrong versioned format header line."""


class UnknownLabel(SessionMinerError):
    pass


class DuplicateConflict(SessionMinerError):
    pass


class MissingSessionId(SessionMinerError):
    pass


# -- segmentation -------------------------------------------------------------

class UnsortedInput(SessionMinerError):
    pass


# -- classifiers --------------------------------------------------------------

class EmptyTrainingSet(SessionMinerError):
    pass


class NonFiniteLoss(SessionMinerError):
    pass


class CatalogMismatch(SessionMinerError):
    pass


class AllZero(SessionMinerError):
    pass


# -- evaluation ---------------------------------------------------------------

class LengthMismatch(SessionMinerError):
    pass


class EmptyInput(SessionMinerError):
    pass


class TooFewInstances(SessionMinerError):
    pass


class SingleClass(SessionMinerError):
    pass


# -- knowledge ----------------------------------------------------------------

class EmptyTest(SessionMinerError):
    pass


# -- synthesis ----------------------------------------------------------------

class InvalidConfig(SessionMinerError):
    pass


class DegenerateDistributionWarning(UserWarning):
    """Tertile cut points collapsed; fixed default thresholds were used instead."""
