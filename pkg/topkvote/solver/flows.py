"""
Degree-constrained assignment by feasible flow, and the plurality/veto deciders on top of it.

For a plurality-like vector only the first position matters and for a veto-like
vector only the last, so a completion reduces to assigning every voter one
eligible candidate. Bounds here are on the normalized score: the number of
first places (plurality-like) or n minus the number of last places (veto-like).
For plurality and veto that is the score itself.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Collection, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from .core_model import _check_ids, _check_k, extreme_position, tie_margin
from .feasibility import WindowConstraint, feasible_extension
from .models import (
    BadSetSize,
    CompletedBallot,
    Completion,
    Instance,
    MalformedProblem,
    PartialOrder,
    TiePolicy,
    UnsupportedRule,
)
from .policy import FLOW_CASE_LOG_EVERY
from .scorespace import find_topk_set_violation
from common.logging import get_logger

logger = get_logger(__name__)

Assignment = Dict[int, Dict[int, int]]

_SRC, _SNK, _SUPER_SRC, _SUPER_SNK = ("s",), ("t",), ("S*",), ("T*",)


@dataclass(frozen=True)
class AssignmentProblem:
    """Groups of identical left units, each unit matched to exactly one right node."""
    group_sizes: Tuple[int, ...]
    n_right: int
    edges: FrozenSet[Tuple[int, int]]
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]


def eligible_positions(order: PartialOrder, which: str) -> FrozenSet[int]:
    """Candidates that can be placed first ('top') or last ('bottom') in some extension."""
    if which == "top":
        return frozenset(c for c in range(order.m) if not order.above(c))
    if which == "bottom":
        return frozenset(c for c in range(order.m) if not order.below(c))
    raise ValueError(f"which must be 'top' or 'bottom', got {which!r}")


def _check_problem(p: AssignmentProblem) -> None:
    if len(p.lower) != p.n_right or len(p.upper) != p.n_right:
        raise MalformedProblem("bounds must list every right node")
    incident = {g for g, _ in p.edges}
    for g, size in enumerate(p.group_sizes):
        if size < 1:
            raise MalformedProblem(f"group {g} has size {size}")
        if g not in incident:
            raise MalformedProblem(f"group {g} has no incident edge")
    for g, w in p.edges:
        if not (0 <= g < len(p.group_sizes) and 0 <= w < p.n_right):
            raise MalformedProblem(f"edge ({g}, {w}) out of range")
    for w, (lo, hi) in enumerate(zip(p.lower, p.upper)):
        if lo < 0 or lo > hi:
            raise MalformedProblem(f"bounds [{lo}, {hi}] invalid for right node {w}")


def degree_constrained_assignment(p: AssignmentProblem) -> Optional[Assignment]:
    """An assignment meeting every right-node bound, or None.

    Feasible flow with lower bounds: s->group edges carry exactly the group size,
    right->t edges carry between lower and upper; lower bounds are moved to a
    super source/sink pair and the circulation closes through t->s.
    """
    _check_problem(p)
    total = sum(p.group_sizes)
    g = nx.DiGraph()
    excess: Dict[tuple, int] = {}

    def add(u, v, lo: int, hi: int):
        if hi - lo > 0:
            g.add_edge(u, v, capacity=hi - lo)
        else:
            g.add_nodes_from((u, v))
        if lo:
            excess[v] = excess.get(v, 0) + lo
            excess[u] = excess.get(u, 0) - lo

    for gi, size in enumerate(p.group_sizes):
        add(_SRC, ("g", gi), size, size)
    for gi, w in sorted(p.edges):
        add(("g", gi), ("w", w), 0, p.group_sizes[gi])
    for w in range(p.n_right):
        add(("w", w), _SNK, p.lower[w], min(p.upper[w], total))
    add(_SNK, _SRC, 0, total)

    demand = 0
    g.add_nodes_from((_SUPER_SRC, _SUPER_SNK))
    for node, ex in sorted(excess.items()):
        if ex > 0:
            g.add_edge(_SUPER_SRC, node, capacity=ex)
            demand += ex
        elif ex < 0:
            g.add_edge(node, _SUPER_SNK, capacity=-ex)
    value, flow = nx.maximum_flow(g, _SUPER_SRC, _SUPER_SNK)
    if value < demand:
        return None

    out: Assignment = {}
    received = [0] * p.n_right
    for gi in range(len(p.group_sizes)):
        counts = {}
        for node, f in flow.get(("g", gi), {}).items():
            if f and node[0] == "w":
                counts[node[1]] = f
                received[node[1]] += f
        assert sum(counts.values()) == p.group_sizes[gi], f"group {gi} not fully assigned"
        out[gi] = counts
    for w in range(p.n_right):
        assert p.lower[w] <= received[w] <= p.upper[w], f"right node {w} out of bounds"
    return out


def _extreme(instance: Instance) -> str:
    side = extreme_position(instance.rule, instance.m)
    if side is None:
        raise UnsupportedRule(f"{instance.rule.label} is neither plurality-like nor veto-like")
    return side


def _any_completion(instance: Instance) -> Completion:
    return Completion(tuple(
        CompletedBallot(gi, feasible_extension(g.order, ()), g.mult)
        for gi, g in enumerate(instance.voters)
    ))


def bounded_score_completion(
    instance: Instance,
    gamma: Sequence[int],
    delta: Sequence[int],
) -> Optional[Completion]:
    """A completion with gamma[c] <= score(c) <= delta[c] for every c, or None."""
    side = _extreme(instance)
    m, n = instance.m, instance.n
    lo = [max(0, x) for x in gamma]
    hi = [min(n, x) for x in delta]
    if len(lo) != m or len(hi) != m:
        raise MalformedProblem(f"bounds must list all {m} candidates")
    if any(a > b for a, b in zip(lo, hi)):
        return None
    if side == "bottom":
        lo, hi = [n - b for b in hi], [n - a for a in lo]
    edges = frozenset(
        (gi, c)
        for gi, grp in enumerate(instance.voters)
        for c in eligible_positions(grp.order, side)
    )
    problem = AssignmentProblem(
        group_sizes=tuple(grp.mult for grp in instance.voters),
        n_right=m,
        edges=edges,
        lower=tuple(lo),
        upper=tuple(hi),
    )
    assignment = degree_constrained_assignment(problem)
    if assignment is None:
        return None
    slot = 1 if side == "top" else m
    ballots = []
    for gi, grp in enumerate(instance.voters):
        for c, cnt in sorted(assignment[gi].items()):
            order = feasible_extension(grp.order, (WindowConstraint(c, slot, slot),))
            ballots.append(CompletedBallot(gi, order, cnt))
    return Completion(tuple(ballots))


def _first_hit(
    cases: List[tuple],
    solve: Callable[[tuple], Optional[Completion]],
    workers: int,
    tag: str,
) -> Optional[Completion]:
    logger.debug(f"[flows] {tag}: {len(cases)} cases")
    if workers > 1 and len(cases) > 1:
        # waves of `workers` cases; stop after the first wave with a hit
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for start in range(0, len(cases), workers):
                wave = cases[start:start + workers]
                for found in ex.map(solve, wave):
                    if found is not None:
                        return found
                if start // workers % FLOW_CASE_LOG_EVERY == 0:
                    logger.debug(f"[flows] {tag}: case {start + len(wave)}/{len(cases)}")
        return None
    for i, case in enumerate(cases, 1):
        if i % FLOW_CASE_LOG_EVERY == 0:
            logger.debug(f"[flows] {tag}: case {i}/{len(cases)}")
        found = solve(case)
        if found is not None:
            return found
    return None


def ptw_fixed_k(
    instance: Instance,
    c: int,
    k: int,
    policy: TiePolicy = TiePolicy.GIVEN,
    workers: int = 1,
) -> Tuple[bool, Optional[Completion]]:
    """Is c a top-k winner in some completion? On True, also a witness.

    c is top-k iff some m-k rivals D all rank below it; each (D, s) case bounds
    c from below by s and every d in D from above by s or s-1.
    """
    _extreme(instance)
    _check_ids(instance.m, (c,))
    _check_k(instance.m, k)
    policy = TiePolicy(policy)
    m, n = instance.m, instance.n
    if k == m:
        return True, _any_completion(instance)
    others = [d for d in range(m) if d != c]
    cases = [(D, s) for D in combinations(others, m - k) for s in range(n + 1)]

    def solve(case):
        D, s = case
        gamma, delta = [0] * m, [n] * m
        gamma[c] = s
        for d in D:
            delta[d] = s - tie_margin(instance, policy, c, d)
            if delta[d] < 0:
                return None
        return bounded_score_completion(instance, gamma, delta)

    found = _first_hit(cases, solve, workers, f"ptw c={c} k={k}")
    return found is not None, found


def possible_winner_plu_veto(instance: Instance, c: int) -> bool:
    return ptw_fixed_k(instance, c, 1, TiePolicy.GIVEN)[0]


def possible_topk_set(
    instance: Instance,
    members: Collection[int],
    policy: TiePolicy = TiePolicy.GIVEN,
    workers: int = 1,
) -> Tuple[bool, Optional[Completion]]:
    """Is `members` exactly the top-k set in some completion? On True, also a witness.

    The pivot is the lowest-ranked member: it scores exactly s, the other
    members stay at or above it and the outsiders at or below it, shifted by
    the tie margins of the policy.
    """
    _extreme(instance)
    members = frozenset(members)
    _check_ids(instance.m, members)
    if not members:
        raise BadSetSize("the candidate set is empty")
    _check_k(instance.m, len(members))
    policy = TiePolicy(policy)
    m, n = instance.m, instance.n
    if len(members) == m:
        return True, _any_completion(instance)
    outsiders = [o for o in range(m) if o not in members]
    cases = [(p, s) for p in sorted(members) for s in range(n + 1)]

    def solve(case):
        pivot, s = case
        gamma, delta = [0] * m, [n] * m
        gamma[pivot] = delta[pivot] = s
        for x in members:
            if x == pivot:
                continue
            shift = tie_margin(instance, policy, x, pivot) if policy == TiePolicy.GIVEN else 0
            gamma[x] = s + shift
            if gamma[x] > n:
                return None
        for o in outsiders:
            delta[o] = s - tie_margin(instance, policy, pivot, o)
            if delta[o] < 0:
                return None
        return bounded_score_completion(instance, gamma, delta)

    found = _first_hit(cases, solve, workers, f"pts |set|={len(members)}")
    return found is not None, found


def decide_condorcet(
    instance: Instance,
    members: Collection[int],
    mode: str,
    workers: int = 1,
) -> Tuple[bool, Optional[Completion]]:
    """condorcet_committee plus a witness (possible) or counterexample (necessary)."""
    _extreme(instance)
    if mode == "possible":
        return possible_topk_set(instance, members, TiePolicy.SOME, workers=workers)
    if mode == "necessary":
        cex = find_topk_set_violation(instance, members, TiePolicy.SOME)
        return cex is None, cex
    raise ValueError(f"mode must be 'necessary' or 'possible', got {mode!r}")


def condorcet_committee(instance: Instance, members: Collection[int], mode: str) -> bool:
    """Top-k-set query under the 'some' tie policy, for plurality-like and veto-like rules."""
    return decide_condorcet(instance, members, mode)[0]
