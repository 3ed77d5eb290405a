"""
Score vectors, partial-order construction, scoring and tie-policy semantics.

Everything here is a pure function of immutable inputs.
"""
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Collection, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .models import (
    BadSetSize,
    CompletedBallot,
    Completion,
    CyclicOrder,
    DegenerateRule,
    IncompleteCover,
    Instance,
    InvalidCompletion,
    LinearOrder,
    OverlappingBlocks,
    PartialOrder,
    RuleKind,
    ScoringRule,
    TiePolicy,
    UnknownCandidate,
    UnsupportedM,
)


@lru_cache(maxsize=None)
def score_vector(rule: ScoringRule, m: int) -> Tuple[int, ...]:
    """Return the m-dimensional score vector of `rule`."""
    if m < 2:
        raise DegenerateRule(f"{rule.label}: need at least 2 candidates, got m={m}")
    kind = rule.kind
    if kind == RuleKind.PLURALITY:
        return (1,) + (0,) * (m - 1)
    if kind == RuleKind.VETO:
        return (1,) * (m - 1) + (0,)
    if kind == RuleKind.BORDA:
        return tuple(range(m - 1, -1, -1))
    if kind in (RuleKind.T_APPROVAL, RuleKind.T_VETO):
        if rule.t >= m:
            raise DegenerateRule(f"{rule.label} is constant at m={m}")
        ones = rule.t if kind == RuleKind.T_APPROVAL else m - rule.t
        return (1,) * ones + (0,) * (m - ones)
    if len(rule.scores) != m:
        raise UnsupportedM(f"{rule.label} is defined for m={len(rule.scores)} only, got m={m}")
    return rule.scores


def rule_from_vector(scores: Sequence[int]) -> ScoringRule:
    """Name a concrete vector by the first built-in family that produces it."""
    sc = tuple(scores)
    m = len(sc)
    named = [ScoringRule.plurality(), ScoringRule.veto(), ScoringRule.borda()]
    named += [ScoringRule.t_approval(t) for t in range(2, m)]
    named += [ScoringRule.t_veto(t) for t in range(2, m)]
    for rule in named:
        if score_vector(rule, m) == sc:
            return rule
    return ScoringRule.custom(sc)


def is_binary(rule: ScoringRule, m: int) -> bool:
    return set(score_vector(rule, m)) <= {0, 1}


def extreme_position(rule: ScoringRule, m: int) -> Optional[str]:
    """'top' for plurality-like (1,0..0), 'bottom' for veto-like (1..1,0) vectors.

    Vectors of the form (a, b, .., b) / (a, .., a, b) with a > b count too,
    since ranking is invariant under positive affine rescaling.
    """
    sc = score_vector(rule, m)
    if len(set(sc[1:])) == 1:
        return "top"
    if len(set(sc[:-1])) == 1:
        return "bottom"
    return None


def _check_ids(m: int, ids: Iterable[int]) -> None:
    for c in ids:
        if not isinstance(c, int) or c < 0 or c >= m:
            raise UnknownCandidate(f"candidate id {c!r} out of range for m={m}")


def make_partial_order(m: int, pairs: Iterable[Tuple[int, int]]) -> PartialOrder:
    """Transitive closure of `pairs` (x above y); cyclic input raises CyclicOrder."""
    pairs = list(pairs)
    for x, y in pairs:
        _check_ids(m, (x, y))
        if x == y:
            raise CyclicOrder(f"candidate {x} placed above itself")
    g = nx.DiGraph()
    g.add_nodes_from(range(m))
    g.add_edges_from(pairs)
    if not nx.is_directed_acyclic_graph(g):
        cycle = nx.find_cycle(g)
        raise CyclicOrder(f"order contains a cycle through {[u for u, _ in cycle]}")
    closed = nx.transitive_closure_dag(g)
    return PartialOrder(m, frozenset(closed.edges()))


def _check_blocks(m: Optional[int], blocks: Sequence[Collection[int]]) -> List[FrozenSet[int]]:
    seen: set = set()
    out = []
    for b in blocks:
        fb = frozenset(b)
        if m is not None:
            _check_ids(m, fb)
        if seen & fb:
            raise OverlappingBlocks(f"candidates {sorted(seen & fb)} appear in more than one block")
        seen |= fb
        out.append(fb)
    return out


def partitioned_order(m: int, blocks: Sequence[Collection[int]]) -> PartialOrder:
    """Every candidate of an earlier block above every candidate of a later one."""
    fbs = [b for b in _check_blocks(m, blocks) if b]
    pairs = set()
    for i, upper in enumerate(fbs):
        for lower in fbs[i + 1:]:
            pairs.update((x, y) for x in upper for y in lower)
    return PartialOrder(m, frozenset(pairs))


def block_linearization(
    blocks: Sequence[Collection[int]],
    universe: Optional[Collection[int]] = None,
) -> LinearOrder:
    """Concatenate the blocks, ascending id within each block."""
    fbs = _check_blocks(None, blocks)
    if universe is not None:
        covered = frozenset().union(*fbs) if fbs else frozenset()
        if covered != frozenset(universe):
            missing = sorted(frozenset(universe) - covered)
            extra = sorted(covered - frozenset(universe))
            raise IncompleteCover(f"blocks do not partition the set (missing {missing}, extra {extra})")
    return tuple(c for b in fbs for c in sorted(b))


def reverse_order(order: PartialOrder) -> PartialOrder:
    return PartialOrder(order.m, frozenset((y, x) for x, y in order.pairs))


def validate_completion(instance: Instance, completion: Completion) -> None:
    used: Counter = Counter()
    for b in completion.ballots:
        if not 0 <= b.group < len(instance.voters):
            raise InvalidCompletion(f"ballot refers to unknown voter group {b.group}")
        if b.mult < 1:
            raise InvalidCompletion(f"ballot for group {b.group} has multiplicity {b.mult}")
        if not instance.voters[b.group].order.extended_by(b.order):
            raise InvalidCompletion(f"order {b.order} does not extend voter group {b.group}")
        used[b.group] += b.mult
    for i, g in enumerate(instance.voters):
        if used[i] != g.mult:
            raise InvalidCompletion(f"voter group {i} has {used[i]} completed votes, expected {g.mult}")


def complete_profile(instance: Instance, orders: Sequence[Sequence[int]]) -> Completion:
    """One linear order per voter group, each carrying the group's full multiplicity."""
    if len(orders) != len(instance.voters):
        raise InvalidCompletion(f"expected {len(instance.voters)} orders, got {len(orders)}")
    completion = Completion(tuple(
        CompletedBallot(i, tuple(o), g.mult) for i, (o, g) in enumerate(zip(orders, instance.voters))
    ))
    validate_completion(instance, completion)
    return completion


def completion_scores(instance: Instance, completion: Completion) -> Tuple[int, ...]:
    sv = score_vector(instance.rule, instance.m)
    scores = [0] * instance.m
    for b in completion.ballots:
        for pos, c in enumerate(b.order):
            scores[c] += b.mult * sv[pos]
    return tuple(scores)


def ranking_from_scores(scores: Sequence[int], tie_position: Sequence[int]) -> LinearOrder:
    return tuple(sorted(range(len(scores)), key=lambda c: (-scores[c], tie_position[c])))


@dataclass(frozen=True)
class Standings:
    scores: Tuple[int, ...]
    ranking: LinearOrder  # R_T, best first
    rank: Tuple[int, ...]  # 1-based

    def score_map(self, instance: Instance) -> Dict[str, int]:
        return {instance.candidates[c]: s for c, s in enumerate(self.scores)}


def standings(instance: Instance, completion: Completion) -> Standings:
    validate_completion(instance, completion)
    scores = completion_scores(instance, completion)
    ranking = ranking_from_scores(scores, instance.tie_position)
    rank = [0] * instance.m
    for i, c in enumerate(ranking):
        rank[c] = i + 1
    return Standings(scores, ranking, tuple(rank))


def top_k_holds(
    scores: Sequence[int],
    tie_position: Sequence[int],
    c: int,
    k: int,
    policy: TiePolicy,
) -> bool:
    sc = scores[c]
    if policy == TiePolicy.SOME:
        ahead = sum(1 for s in scores if s > sc)
    elif policy == TiePolicy.EVERY:
        ahead = sum(1 for d, s in enumerate(scores) if d != c and s >= sc)
    else:
        tc = tie_position[c]
        ahead = sum(
            1 for d, s in enumerate(scores)
            if s > sc or (s == sc and tie_position[d] < tc)
        )
    return ahead < k


def top_set_holds(
    scores: Sequence[int],
    tie_position: Sequence[int],
    members: Collection[int],
    policy: TiePolicy,
) -> bool:
    """True when `members` is exactly the top-|members| set under the policy."""
    members = frozenset(members)
    outsiders = [d for d in range(len(scores)) if d not in members]
    if not outsiders or not members:
        return True
    if policy == TiePolicy.GIVEN:
        ranking = ranking_from_scores(scores, tie_position)
        return frozenset(ranking[:len(members)]) == members
    low = min(scores[c] for c in members)
    high = max(scores[d] for d in outsiders)
    if policy == TiePolicy.SOME:
        return low >= high
    return low > high


def _check_k(m: int, k: int) -> None:
    if not isinstance(k, int) or not 1 <= k <= m:
        raise BadSetSize(f"k must be in [1, {m}], got {k!r}")


def is_top_k(instance: Instance, completion: Completion, c: int, k: int, policy: TiePolicy) -> bool:
    _check_ids(instance.m, (c,))
    _check_k(instance.m, k)
    st = standings(instance, completion)
    return top_k_holds(st.scores, instance.tie_position, c, k, TiePolicy(policy))


def tie_margin(instance: Instance, policy: TiePolicy, winner: int, loser: int) -> int:
    """0 when an equal score already ranks `winner` above `loser` under the policy, else 1."""
    policy = TiePolicy(policy)
    if policy == TiePolicy.SOME:
        return 0
    if policy == TiePolicy.EVERY:
        return 1
    pos = instance.tie_position
    return 0 if pos[winner] < pos[loser] else 1
