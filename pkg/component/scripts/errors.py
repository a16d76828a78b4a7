class PlannerError(Exception):
    """Base class of every error raised by the module"""


class ValidationError(PlannerError, ValueError):
    """An input or a configuration breaks one of the documented invariants"""


class GridFormatError(ValidationError):
    """A grid or scenario file cannot be parsed

    Args:
        message (str): the diagnostic
        line (int): 1-based line number of the offending line, None if unknown
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class GenerationError(PlannerError):
    """The maze generator could not produce a valid layout"""


class EmptyQueueError(PlannerError, IndexError):
    """pop on an empty priority queue, the search is exhausted"""


class PlanFailedError(PlannerError):
    """A path was requested from a search that did not succeed"""
