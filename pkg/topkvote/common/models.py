from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple, Any

from .errors import BadSetSize, UnknownCandidate, ValidationError


Pair = Tuple[int, int]
LinearOrder = Tuple[int, ...]


class TiePolicy(str, Enum):
    """How equal scores are resolved when deciding top-k membership."""
    GIVEN = "given"  # the instance tie order
    SOME = "some"  # at least one tie order
    EVERY = "every"  # every tie order


class RuleKind(str, Enum):
    PLURALITY = "plurality"
    VETO = "veto"
    T_APPROVAL = "t_approval"
    T_VETO = "t_veto"
    BORDA = "borda"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ScoringRule:
    """A named positional scoring family or an explicit vector for one fixed m."""
    kind: RuleKind
    t: Optional[int] = None
    scores: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        if self.kind in (RuleKind.T_APPROVAL, RuleKind.T_VETO):
            if not isinstance(self.t, int) or self.t < 1:
                raise ValidationError(f"{self.kind.value} needs a positive integer t, got {self.t!r}")
        elif self.t is not None:
            raise ValidationError(f"{self.kind.value} takes no t parameter")
        if self.kind == RuleKind.CUSTOM:
            sc = tuple(self.scores or ())
            if len(sc) < 2:
                raise ValidationError("custom rule needs at least two scores")
            if any((not isinstance(x, int)) or x < 0 for x in sc):
                raise ValidationError("custom scores must be non-negative integers")
            if any(a < b for a, b in zip(sc, sc[1:])):
                raise ValidationError("custom scores must be non-increasing")
            if sc[0] <= sc[-1]:
                raise ValidationError("custom scores must have first > last")
            object.__setattr__(self, "scores", sc)
        elif self.scores is not None:
            raise ValidationError(f"{self.kind.value} takes no explicit scores")

    @classmethod
    def plurality(cls) -> "ScoringRule":
        return cls(RuleKind.PLURALITY)

    @classmethod
    def veto(cls) -> "ScoringRule":
        return cls(RuleKind.VETO)

    @classmethod
    def borda(cls) -> "ScoringRule":
        return cls(RuleKind.BORDA)

    @classmethod
    def t_approval(cls, t: int) -> "ScoringRule":
        return cls(RuleKind.T_APPROVAL, t=t)

    @classmethod
    def t_veto(cls, t: int) -> "ScoringRule":
        return cls(RuleKind.T_VETO, t=t)

    @classmethod
    def custom(cls, scores) -> "ScoringRule":
        return cls(RuleKind.CUSTOM, scores=tuple(scores))

    @property
    def label(self) -> str:
        if self.kind == RuleKind.T_APPROVAL:
            return f"{self.t}-approval"
        if self.kind == RuleKind.T_VETO:
            return f"{self.t}-veto"
        if self.kind == RuleKind.CUSTOM:
            return "custom(" + ",".join(str(x) for x in self.scores) + ")"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.kind.value}
        if self.t is not None:
            out["t"] = self.t
        if self.scores is not None:
            out["scores"] = list(self.scores)
        return out


@dataclass(frozen=True)
class PartialOrder:
    """Strict partial order over candidate ids 0..m-1, stored transitively closed.

    Build through solver.core_model.make_partial_order / partitioned_order; the
    constructor trusts that `pairs` is already closed and acyclic.
    """
    m: int
    pairs: FrozenSet[Pair] = frozenset()

    @cached_property
    def _above(self) -> Tuple[FrozenSet[int], ...]:
        acc: List[set] = [set() for _ in range(self.m)]
        for x, y in self.pairs:
            acc[y].add(x)
        return tuple(frozenset(s) for s in acc)

    @cached_property
    def _below(self) -> Tuple[FrozenSet[int], ...]:
        acc: List[set] = [set() for _ in range(self.m)]
        for x, y in self.pairs:
            acc[x].add(y)
        return tuple(frozenset(s) for s in acc)

    def above(self, y: int) -> FrozenSet[int]:
        """Candidates that must be ranked above y."""
        return self._above[y]

    def below(self, x: int) -> FrozenSet[int]:
        """Candidates that must be ranked below x."""
        return self._below[x]

    def precedes(self, x: int, y: int) -> bool:
        return (x, y) in self.pairs

    @property
    def is_linear(self) -> bool:
        return len(self.pairs) == self.m * (self.m - 1) // 2

    def extended_by(self, order: LinearOrder) -> bool:
        """True when the linear order (a permutation of 0..m-1) extends this order."""
        if len(order) != self.m or sorted(order) != list(range(self.m)):
            return False
        pos = {c: i for i, c in enumerate(order)}
        return all(pos[x] < pos[y] for x, y in self.pairs)


@dataclass(frozen=True)
class VoterGroup:
    order: PartialOrder
    mult: int = 1


@dataclass(frozen=True)
class Instance:
    """Election over a partial profile: names, rule, voter groups and tie order."""
    candidates: Tuple[str, ...]
    rule: ScoringRule
    voters: Tuple[VoterGroup, ...]
    tie: LinearOrder

    def __post_init__(self):
        m = len(self.candidates)
        if m < 2:
            raise ValidationError("an instance needs at least two candidates")
        if len(set(self.candidates)) != m:
            raise ValidationError("candidate names must be unique")
        if sorted(self.tie) != list(range(m)):
            raise ValidationError("tie must list every candidate exactly once")
        if not self.voters:
            raise ValidationError("an instance needs at least one voter")
        for i, g in enumerate(self.voters):
            if g.order.m != m:
                raise ValidationError(f"voter group {i} is over {g.order.m} candidates, expected {m}")
            if not isinstance(g.mult, int) or g.mult < 1:
                raise ValidationError(f"voter group {i} has non-positive multiplicity {g.mult!r}")
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "voters", tuple(self.voters))
        object.__setattr__(self, "tie", tuple(self.tie))

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return sum(g.mult for g in self.voters)

    @cached_property
    def tie_position(self) -> Tuple[int, ...]:
        pos = [0] * self.m
        for i, c in enumerate(self.tie):
            pos[c] = i
        return tuple(pos)

    def index(self, name: str) -> int:
        try:
            return self.candidates.index(name)
        except ValueError:
            raise UnknownCandidate(f"unknown candidate {name!r}") from None

    def names(self, ids) -> List[str]:
        return [self.candidates[c] for c in ids]


@dataclass(frozen=True)
class CompletedBallot:
    """`mult` voters of voter group `group` casting the linear order `order`."""
    group: int
    order: LinearOrder
    mult: int = 1


@dataclass(frozen=True)
class Completion:
    ballots: Tuple[CompletedBallot, ...]

    def to_rows(self, instance: Instance) -> List[Dict[str, Any]]:
        return [
            {"group": b.group, "mult": b.mult, "order": instance.names(b.order)}
            for b in self.ballots
        ]


class QueryKind(str, Enum):
    NW = "nw"
    PW = "pw"
    NTW = "ntw"
    PTW = "ptw"
    NTS = "nts"
    PTS = "pts"
    CONDORCET_NEC = "condorcet-nec"
    CONDORCET_POS = "condorcet-pos"

    @property
    def necessary(self) -> bool:
        return self in (QueryKind.NW, QueryKind.NTW, QueryKind.NTS, QueryKind.CONDORCET_NEC)

    @property
    def about_set(self) -> bool:
        return self in (QueryKind.NTS, QueryKind.PTS, QueryKind.CONDORCET_NEC, QueryKind.CONDORCET_POS)


@dataclass(frozen=True)
class QuerySpec:
    kind: QueryKind
    candidate: Optional[int] = None
    members: Optional[FrozenSet[int]] = None
    k: int = 1
    policy: TiePolicy = TiePolicy.GIVEN

    def __post_init__(self):
        kind = QueryKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "policy", TiePolicy(self.policy))
        if kind.about_set:
            if self.members is None:
                raise ValidationError(f"{kind.value} needs a candidate set")
            members = frozenset(self.members)
            object.__setattr__(self, "members", members)
            if len(members) != self.k:
                raise BadSetSize(f"set has {len(members)} candidates but k={self.k}")
        else:
            if self.candidate is None:
                raise ValidationError(f"{kind.value} needs a candidate")
            if kind in (QueryKind.NW, QueryKind.PW) and self.k != 1:
                raise ValidationError(f"{kind.value} is defined for k=1 only")
        if self.k < 1:
            raise ValidationError(f"k must be positive, got {self.k}")


class Method(str, Enum):
    AUTO = "auto"
    EXACT = "exact"
    ORACLE = "oracle"


@dataclass
class RunConfig:
    """Query execution settings (CLI flags > environment > policy defaults)."""
    method: Method = Method.AUTO
    oracle_cap: int = 10 ** 6
    policy: TiePolicy = TiePolicy.GIVEN
    output: Optional[str] = None
    max_points: int = 200_000
    max_k: int = 3
    workers: int = 1
    verbose: bool = False
    out_dir: Optional[str] = None


@dataclass
class QueryResult:
    answer: bool
    method: str
    witness: Optional[Completion] = None
    elapsed_ms: int = 0
    notes: List[str] = field(default_factory=list)

    def to_dict(self, instance: Instance) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "answer": self.answer,
            "method": self.method,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_rows(instance)
        if self.notes:
            out["notes"] = list(self.notes)
        return out
