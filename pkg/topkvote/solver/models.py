# Re-export domain types and errors from common
import os, sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.models import (
    CompletedBallot,
    Completion,
    Instance,
    LinearOrder,
    Method,
    PartialOrder,
    QueryKind,
    QueryResult,
    QuerySpec,
    RuleKind,
    RunConfig,
    ScoringRule,
    TiePolicy,
    VoterGroup,
)
from common.errors import (
    BadSetSize,
    ConflictingConstraints,
    CyclicOrder,
    DegenerateRule,
    IncompleteCover,
    InvalidCompletion,
    IoError,
    MalformedProblem,
    NoExactMethod,
    OverlappingBlocks,
    ParseError,
    SpaceTooLarge,
    TooLarge,
    UnknownCandidate,
    UnsupportedM,
    UnsupportedRule,
    ValidationError,
    VotingError,
)

__all__ = [
    'CompletedBallot', 'Completion', 'Instance', 'LinearOrder', 'Method', 'PartialOrder',
    'QueryKind', 'QueryResult', 'QuerySpec', 'RuleKind', 'RunConfig', 'ScoringRule',
    'TiePolicy', 'VoterGroup',
    'BadSetSize', 'ConflictingConstraints', 'CyclicOrder', 'DegenerateRule',
    'IncompleteCover', 'InvalidCompletion', 'IoError', 'MalformedProblem', 'NoExactMethod',
    'OverlappingBlocks', 'ParseError', 'SpaceTooLarge', 'TooLarge', 'UnknownCandidate',
    'UnsupportedM', 'UnsupportedRule', 'ValidationError', 'VotingError',
]
