"""
Error hierarchy shared by the solver, the generators and the CLI.
"""


class VotingError(ValueError):
    """Root of every domain error raised by topkvote."""


class ValidationError(VotingError):
    """Input violates an instance or query invariant."""


class DegenerateRule(VotingError):
    pass


class UnsupportedM(VotingError):
    pass


class CyclicOrder(ValidationError):
    pass


class OverlappingBlocks(ValidationError):
    pass


class IncompleteCover(ValidationError):
    pass


class InvalidCompletion(VotingError):
    pass


class UnknownCandidate(ValidationError):
    pass


class TooLarge(VotingError):
    pass


class ConflictingConstraints(VotingError):
    pass


class SpaceTooLarge(VotingError):
    pass


class BadSetSize(ValidationError):
    pass


class MalformedProblem(VotingError):
    pass


class UnsupportedRule(VotingError):
    pass


class NonBinaryRule(VotingError):
    pass


class ContainmentViolated(VotingError):
    pass


class IndexOutOfRange(VotingError):
    pass


class MalformedX3C(VotingError):
    pass


class MalformedGraph(VotingError):
    pass


class NotStronglyPure(VotingError):
    pass


class NoExactMethod(VotingError):
    pass


class ParseError(VotingError):
    """Instance file could not be read; carries the line and/or field path."""

    def __init__(self, message: str, line: int = None, field: str = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


class IoError(VotingError, OSError):
    pass
