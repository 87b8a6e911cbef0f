"""Exception hierarchy shared by the cage library"""


class CageError(Exception):
    """Base class for every error raised by the cage library"""


class ParameterError(CageError, ValueError):
    """A triple or argument is outside the supported range"""


class CapacityError(ParameterError):
    """A graph would exceed the supported vertex capacity"""


class Graph6Error(CageError, ValueError):
    """Malformed graph6 text"""


class VerificationError(CageError, RuntimeError):
    """A constructed or generated graph failed its own post-check"""


class ConstructionError(CageError, RuntimeError):
    """An ingredient graph does not satisfy what a construction needs"""


class FetchError(CageError):
    """A reference graph could not be downloaded or decoded"""
