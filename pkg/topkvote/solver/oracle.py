"""
Brute-force ground truth: enumerate every completion of a partial profile.

A voter group of multiplicity w with e linear extensions contributes every
multiset of size w over its extensions (complete groups contribute a single
choice). All queries here depend on the completion only through the score
vector, which depends only on those multisets.
"""
from collections import Counter
from itertools import combinations_with_replacement, islice, product
from math import comb
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .core_model import _check_ids, _check_k, score_vector, top_k_holds, top_set_holds
from .models import (
    CompletedBallot,
    Completion,
    Instance,
    LinearOrder,
    PartialOrder,
    QueryKind,
    QuerySpec,
    TiePolicy,
    TooLarge,
)
from .policy import ORACLE_LOG_EVERY
from common.logging import get_logger

logger = get_logger(__name__)

# ((extension index, count) pairs, summed score vector) for one voter group
_Choice = Tuple[Tuple[Tuple[int, int], ...], Tuple[int, ...]]


def linear_extensions(order: PartialOrder) -> Iterator[LinearOrder]:
    """Every linear extension of `order` exactly once, in a fixed order."""
    g = nx.DiGraph()
    g.add_nodes_from(range(order.m))
    g.add_edges_from(sorted(order.pairs))
    for ext in nx.all_topological_sorts(g):
        yield tuple(ext)


class _Enumeration:
    """Per-group extension lists and multiset choices for one instance."""

    def __init__(self, instance: Instance, cap: int):
        self.instance = instance
        sv = score_vector(instance.rule, instance.m)
        self.extensions: List[List[LinearOrder]] = []
        self.choices: List[List[_Choice]] = []
        total = 1
        for gi, group in enumerate(instance.voters):
            exts = list(islice(linear_extensions(group.order), cap + 1))
            if len(exts) > cap:
                raise TooLarge(f"voter group {gi} has more than {cap} extensions")
            n_choices = comb(len(exts) + group.mult - 1, group.mult)
            total *= n_choices
            if total > cap:
                raise TooLarge(f"more than {cap} completions to enumerate (cap exceeded at group {gi})")
            self.extensions.append(exts)
        self.total = total
        for gi, group in enumerate(instance.voters):
            exts = self.extensions[gi]
            ext_scores = []
            for ext in exts:
                row = [0] * instance.m
                for pos, c in enumerate(ext):
                    row[c] = sv[pos]
                ext_scores.append(row)
            if len(exts) == 1:
                self.choices.append([(((0, group.mult),), tuple(group.mult * x for x in ext_scores[0]))])
                continue
            opts = []
            for ms in combinations_with_replacement(range(len(exts)), group.mult):
                counts = tuple(sorted(Counter(ms).items()))
                acc = [0] * instance.m
                for idx, cnt in counts:
                    row = ext_scores[idx]
                    for c in range(instance.m):
                        acc[c] += cnt * row[c]
                opts.append((counts, tuple(acc)))
            self.choices.append(opts)

    def __iter__(self) -> Iterator[Tuple[Tuple[int, ...], Tuple[_Choice, ...]]]:
        m = self.instance.m
        for pick in product(*self.choices):
            scores = [0] * m
            for _, vec in pick:
                for c in range(m):
                    scores[c] += vec[c]
            yield tuple(scores), pick

    def completion(self, pick: Sequence[_Choice]) -> Completion:
        ballots = []
        for gi, (counts, _) in enumerate(pick):
            for idx, cnt in counts:
                ballots.append(CompletedBallot(gi, self.extensions[gi][idx], cnt))
        return Completion(tuple(ballots))


def _predicate(instance: Instance, q: QuerySpec):
    pos = instance.tie_position
    if q.kind in (QueryKind.CONDORCET_NEC, QueryKind.CONDORCET_POS):
        return lambda scores: top_set_holds(scores, pos, q.members, TiePolicy.SOME)
    if q.kind.about_set:
        return lambda scores: top_set_holds(scores, pos, q.members, q.policy)
    return lambda scores: top_k_holds(scores, pos, q.candidate, q.k, q.policy)


def _check_query(instance: Instance, q: QuerySpec) -> None:
    _check_k(instance.m, q.k)
    if q.kind.about_set:
        _check_ids(instance.m, q.members)
    else:
        _check_ids(instance.m, (q.candidate,))


def oracle_query(instance: Instance, q: QuerySpec, cap: int) -> Tuple[bool, Optional[Completion]]:
    """Decide `q` by enumeration.

    Necessary kinds return (False, counterexample) or (True, None); possible
    kinds return (True, witness) or (False, None).
    """
    _check_query(instance, q)
    en = _Enumeration(instance, cap)
    logger.debug(f"[oracle] {q.kind.value}: enumerating {en.total} completions")
    holds = _predicate(instance, q)
    for i, (scores, pick) in enumerate(en, 1):
        if i % ORACLE_LOG_EVERY == 0:
            logger.debug(f"[oracle] progress {i}/{en.total}")
        ok = holds(scores)
        if q.kind.necessary and not ok:
            return False, en.completion(pick)
        if not q.kind.necessary and ok:
            return True, en.completion(pick)
    return q.kind.necessary, None


def oracle_score_set(instance: Instance, S: Sequence[int], cap: int) -> Set[Tuple[int, ...]]:
    """All score vectors of the candidates in S over every completion."""
    _check_ids(instance.m, S)
    en = _Enumeration(instance, cap)
    return {tuple(scores[c] for c in S) for scores, _ in en}


def enumeration_size(instance: Instance, cap: int) -> int:
    """Number of completions the oracle would enumerate; TooLarge above cap."""
    return _Enumeration(instance, cap).total


def iter_completions(instance: Instance, cap: int) -> Iterator[Tuple[Tuple[int, ...], Completion]]:
    en = _Enumeration(instance, cap)
    for scores, pick in en:
        yield scores, en.completion(pick)


def extension_count(order: PartialOrder) -> int:
    return sum(1 for _ in linear_extensions(order))
