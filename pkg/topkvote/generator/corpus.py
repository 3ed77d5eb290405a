"""
Seeded random instances for equivalence testing and the `gen --family random` command.
"""
import os, sys
import random
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.errors import DegenerateRule, MalformedX3C
from common.models import Instance, PartialOrder, ScoringRule, VoterGroup
from solver.core_model import make_partial_order, score_vector

from .np_sources import GraphInstance, SetCoverInstance

DEFAULT_RULES: Tuple[ScoringRule, ...] = (
    ScoringRule.plurality(),
    ScoringRule.veto(),
    ScoringRule.t_approval(2),
    ScoringRule.borda(),
)


def random_partial_order(rng: random.Random, m: int, max_pairs: int = 4) -> PartialOrder:
    """Up to max_pairs pairs, all consistent with one hidden permutation."""
    hidden = list(range(m))
    rng.shuffle(hidden)
    all_pairs = list(combinations(hidden, 2))
    count = rng.randint(0, min(max_pairs, len(all_pairs)))
    return make_partial_order(m, rng.sample(all_pairs, count))


def _rules_at(m: int, rules: Sequence[ScoringRule]) -> List[ScoringRule]:
    out = []
    for rule in rules:
        try:
            score_vector(rule, m)
        except DegenerateRule:
            continue
        out.append(rule)
    return out


def random_instance(
    rng: random.Random,
    m_range: Tuple[int, int] = (2, 5),
    n_range: Tuple[int, int] = (1, 4),
    rules: Sequence[ScoringRule] = DEFAULT_RULES,
    max_pairs: int = 4,
) -> Instance:
    """A random instance with m and the group count drawn from the inclusive ranges.

    Group multiplicities are 1 or 2; rules that are degenerate at the drawn m
    (t >= m) are skipped.
    """
    m = rng.randint(*m_range)
    usable = _rules_at(m, rules)
    while not usable:
        m += 1
        usable = _rules_at(m, rules)
    rule = rng.choice(usable)
    groups = rng.randint(*n_range)
    voters = tuple(
        VoterGroup(random_partial_order(rng, m, max_pairs), rng.choice((1, 1, 2)))
        for _ in range(groups)
    )
    tie = list(range(m))
    rng.shuffle(tie)
    names = tuple(chr(ord("a") + i) for i in range(m))
    return Instance(names, rule, voters, tuple(tie))


def random_corpus(seed: int, count: int, **kwargs) -> List[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]


def random_x3c(rng: random.Random, q: int, n_edges: int, spread: bool = False) -> SetCoverInstance:
    """Random X3C in which every element lies in some edge.

    With spread, no element lies in every edge either (the Borda reduction
    needs each degree in 1..|E|-1); this takes q >= 2. Returns more than
    n_edges edges when either condition needs them.
    """
    if spread and q < 2:
        raise MalformedX3C(f"q={q}: a single-triple universe puts every element in every edge")
    universe = list(range(3 * q))
    edges = []
    uncovered = set(universe)
    while uncovered:
        u = rng.choice(sorted(uncovered))
        edge = tuple(sorted([u] + rng.sample([v for v in universe if v != u], 2)))
        edges.append(edge)
        uncovered -= set(edge)
    while len(edges) < n_edges:
        edges.append(tuple(sorted(rng.sample(universe, 3))))
    if spread:
        full = set.intersection(*(set(e) for e in edges))
        if full:
            # at most 3 elements are full and q >= 2 leaves 3 others
            edges.append(tuple(sorted(rng.sample([v for v in universe if v not in full], 3))))
    rng.shuffle(edges)
    return SetCoverInstance(3 * q, tuple(edges))


def random_graph(rng: random.Random, n: int, p: float = 0.4, k: Optional[int] = None) -> GraphInstance:
    edges = frozenset((u, v) for u, v in combinations(range(n), 2) if rng.random() < p)
    if k is None:
        k = rng.randint(1, n)
    return GraphInstance(n, edges, k)
