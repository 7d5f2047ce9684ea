"""OVERVIEW:
Every error flatmod raises on purpose lives here.

Each exception carries the process exit code the CLI returns for it:
- 1 → usage / configuration problems
- 2 → bad input data (files, partitions, traces, missing results)
- 3 → the LFR generator could not build a graph
"""

from typing import Optional


class FlatmodError(Exception):
    """Base class for all flatmod errors"""

    exit_code = 2


class ConfigError(FlatmodError):
    exit_code = 1


class ParseError(FlatmodError):
    """Malformed line in an input file"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class InputFileError(FlatmodError):
    """Input file missing or unreadable"""


class ValidationError(FlatmodError):
    """A Graph invariant does not hold"""


class EmptyGraph(FlatmodError):
    """L = 0, scores would divide by zero"""


class UnknownCluster(FlatmodError):
    pass


class TraceMismatch(FlatmodError):
    pass


class VertexSetMismatch(FlatmodError):
    pass


class EmptyInput(FlatmodError):
    pass


class MissingResults(FlatmodError):
    pass


class GenerationFailure(FlatmodError):
    """The generator gave up; `stage` names where"""

    exit_code = 3

    def __init__(self, message: str, stage: str = "generate"):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class InfeasibleDegrees(GenerationFailure):
    def __init__(self, message: str):
        super().__init__(message, stage="degrees")


class InfeasiblePartition(GenerationFailure):
    def __init__(self, message: str):
        super().__init__(message, stage="community_sizes")
