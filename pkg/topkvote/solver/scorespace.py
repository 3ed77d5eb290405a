"""
Jointly achievable score vectors and the necessary-side deciders built on them.

ps(P, S) is built voter group by voter group: the per-voter set comes from the
window feasibility test, groups of multiplicity w are w-fold Minkowski sums
(by repeated doubling) and groups are chained by further sums. Every sum node
keeps its point set so any achievable vector can be unfolded back into one
completion.
"""
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from typing import Collection, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .config import DEFAULT_MAX_POINTS
from .core_model import _check_ids, _check_k, score_vector
from .feasibility import max_score_advantage, voter_score_feasible
from .models import (
    CompletedBallot,
    Completion,
    Instance,
    LinearOrder,
    PartialOrder,
    SpaceTooLarge,
    TiePolicy,
    ValidationError,
)
from .policy import SPACE_CACHE_SIZE, SUBSET_LOG_EVERY
from common.logging import get_logger

logger = get_logger(__name__)

Point = Tuple[int, ...]


class DefeatMode(str, Enum):
    """When a rival d counts as ranked above c."""
    STRICT = "strict"  # s(d) > s(c)
    WEAK = "weak"  # s(d) > s(c), or equal with d first in the tie order
    LOOSE = "loose"  # s(d) >= s(c)


POLICY_DEFEAT_MODE = {
    TiePolicy.GIVEN: DefeatMode.WEAK,
    TiePolicy.SOME: DefeatMode.STRICT,
    TiePolicy.EVERY: DefeatMode.LOOSE,
}


class _Leaf:
    __slots__ = ("group", "orders", "points")

    def __init__(self, group: int, orders: Dict[Point, LinearOrder]):
        self.group = group
        self.orders = orders
        self.points = frozenset(orders)


class _Sum:
    __slots__ = ("left", "right", "points")

    def __init__(self, left, right, points: FrozenSet[Point]):
        self.left = left
        self.right = right
        self.points = points


def _minkowski(left, right, max_points: int) -> _Sum:
    pts = set()
    for a in left.points:
        for b in right.points:
            pts.add(tuple(x + y for x, y in zip(a, b)))
        if len(pts) > max_points:
            raise SpaceTooLarge(f"score space exceeds {max_points} points")
    return _Sum(left, right, frozenset(pts))


def _voter_points(instance: Instance, order: PartialOrder, S: Sequence[int]) -> Dict[Point, LinearOrder]:
    values = sorted(set(score_vector(instance.rule, instance.m)), reverse=True)
    out: Dict[Point, LinearOrder] = {}
    for targets in product(values, repeat=len(S)):
        ext = voter_score_feasible(instance.rule, order, S, targets)
        if ext is not None:
            out[tuple(targets)] = ext
    return out


class ScoreSpace:
    """The set of score vectors S can jointly obtain over all completions."""

    def __init__(self, instance: Instance, S: Sequence[int], root):
        self.instance = instance
        self.S = tuple(S)
        self._root = root

    @property
    def achievable(self) -> FrozenSet[Point]:
        return self._root.points

    def __contains__(self, point) -> bool:
        return tuple(point) in self._root.points

    def __len__(self) -> int:
        return len(self._root.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(sorted(self._root.points))

    def witness(self, point: Sequence[int]) -> Completion:
        """A completion in which S obtains exactly `point`."""
        point = tuple(point)
        if point not in self._root.points:
            raise ValidationError(f"{point} is not achievable for {self.S}")
        per_group: Dict[int, Counter] = defaultdict(Counter)
        stack = [(self._root, point)]
        while stack:
            node, p = stack.pop()
            if isinstance(node, _Leaf):
                per_group[node.group][node.orders[p]] += 1
                continue
            for a in node.left.points:
                b = tuple(x - y for x, y in zip(p, a))
                if b in node.right.points:
                    stack.append((node.left, a))
                    stack.append((node.right, b))
                    break
            else:
                raise AssertionError(f"sum node cannot split {p}")
        ballots = []
        for g in sorted(per_group):
            for order, cnt in sorted(per_group[g].items()):
                ballots.append(CompletedBallot(g, order, cnt))
        return Completion(tuple(ballots))


def profile_score_set(
    instance: Instance,
    S: Sequence[int],
    max_points: int = DEFAULT_MAX_POINTS,
) -> ScoreSpace:
    _check_ids(instance.m, S)
    if len(set(S)) != len(S):
        raise ValidationError("tracked candidates must be distinct")
    cache: Dict[PartialOrder, Dict[Point, LinearOrder]] = {}
    root = None
    for gi, group in enumerate(instance.voters):
        if group.order not in cache:
            cache[group.order] = _voter_points(instance, group.order, S)
        base = _Leaf(gi, cache[group.order])
        w = group.mult
        acc = None
        while w:
            if w & 1:
                acc = base if acc is None else _minkowski(acc, base, max_points)
            w >>= 1
            if w:
                base = _minkowski(base, base, max_points)
        root = acc if root is None else _minkowski(root, acc, max_points)
    return ScoreSpace(instance, S, root)


@lru_cache(maxsize=SPACE_CACHE_SIZE)
def _shared_space(instance: Instance, S: Tuple[int, ...], max_points: int) -> ScoreSpace:
    """profile_score_set memoised on (instance, sorted S)."""
    return profile_score_set(instance, S, max_points)


def _rivals_win(scores: Dict[int, int], rivals: Sequence[int], c: int, tie_position, mode: DefeatMode) -> bool:
    sc = scores[c]
    for d in rivals:
        sd = scores[d]
        if mode == DefeatMode.STRICT and not sd > sc:
            return False
        if mode == DefeatMode.LOOSE and not sd >= sc:
            return False
        if mode == DefeatMode.WEAK and not (sd > sc or (sd == sc and tie_position[d] < tie_position[c])):
            return False
    return True


def _subset_counterexample(
    instance: Instance,
    c: int,
    rivals: Tuple[int, ...],
    mode: DefeatMode,
    max_points: int,
) -> Optional[Completion]:
    space = _shared_space(instance, tuple(sorted(rivals + (c,))), max_points)
    for point in space:
        scores = dict(zip(space.S, point))
        if _rivals_win(scores, rivals, c, instance.tie_position, mode):
            return space.witness(point)
    return None


def ntw_fixed_k(
    instance: Instance,
    c: int,
    k: int,
    policy: TiePolicy = TiePolicy.GIVEN,
    max_points: int = DEFAULT_MAX_POINTS,
    workers: int = 1,
) -> Tuple[bool, Optional[Completion]]:
    """Is c a top-k winner in every completion? On False, also a counterexample.

    c fails exactly when some k rivals all rank above it, so every k-subset of
    the other candidates is tested on ps(P, rivals + c).
    """
    _check_ids(instance.m, (c,))
    _check_k(instance.m, k)
    mode = POLICY_DEFEAT_MODE[TiePolicy(policy)]
    others = [d for d in range(instance.m) if d != c]
    subsets = list(combinations(others, k))
    logger.debug(f"[scorespace] ntw c={c} k={k} mode={mode.value}: {len(subsets)} subsets")

    def check(item):
        i, rivals = item
        if i % SUBSET_LOG_EVERY == 0:
            logger.debug(f"[scorespace] subset {i}/{len(subsets)}")
        return _subset_counterexample(instance, c, rivals, mode, max_points)

    if workers > 1 and len(subsets) > 1:
        items = list(enumerate(subsets, 1))
        # one wave of `workers` subsets at a time, so a counterexample stops the scan
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for start in range(0, len(items), workers):
                for found in ex.map(check, items[start:start + workers]):
                    if found is not None:
                        return False, found
        return True, None
    for item in enumerate(subsets, 1):
        found = check(item)
        if found is not None:
            return False, found
    return True, None


def _defeat_total(instance: Instance, c: int, d: int) -> Tuple[int, List[LinearOrder]]:
    total = 0
    orders = []
    for g in instance.voters:
        adv, ext = max_score_advantage(instance.rule, g.order, c, d)
        total += g.mult * adv
        orders.append(ext)
    return total, orders


def _beats(total: int, c: int, d: int, instance: Instance, mode: DefeatMode) -> bool:
    if mode == DefeatMode.STRICT:
        return total > 0
    if mode == DefeatMode.LOOSE:
        return total >= 0
    pos = instance.tie_position
    return total > 0 or (total == 0 and pos[c] < pos[d])


def find_defeat(instance: Instance, c: int, d: int, mode: DefeatMode) -> Optional[Completion]:
    """A completion where c beats d under `mode`, or None.

    Maximising s(c) - s(d) decomposes over voters, so each group casts its own
    best order.
    """
    _check_ids(instance.m, (c, d))
    if c == d:
        raise ValidationError("defeat needs two distinct candidates")
    total, orders = _defeat_total(instance, c, d)
    if not _beats(total, c, d, instance, DefeatMode(mode)):
        return None
    return Completion(tuple(
        CompletedBallot(i, o, g.mult) for i, (o, g) in enumerate(zip(orders, instance.voters))
    ))


def can_defeat(instance: Instance, c: int, d: int, mode: DefeatMode) -> bool:
    _check_ids(instance.m, (c, d))
    if c == d:
        raise ValidationError("defeat needs two distinct candidates")
    total, _ = _defeat_total(instance, c, d)
    return _beats(total, c, d, instance, DefeatMode(mode))


def nw_counterexample(instance: Instance, c: int, policy: TiePolicy = TiePolicy.GIVEN) -> Optional[Completion]:
    _check_ids(instance.m, (c,))
    mode = POLICY_DEFEAT_MODE[TiePolicy(policy)]
    for d in range(instance.m):
        if d == c:
            continue
        found = find_defeat(instance, d, c, mode)
        if found is not None:
            logger.debug(f"[scorespace] nw: {d} can beat {c} ({mode.value})")
            return found
    return None


def necessary_winner(instance: Instance, c: int, policy: TiePolicy = TiePolicy.GIVEN) -> bool:
    return nw_counterexample(instance, c, policy) is None


def find_topk_set_violation(
    instance: Instance,
    members: Collection[int],
    policy: TiePolicy = TiePolicy.GIVEN,
) -> Optional[Completion]:
    """A completion where some outsider ranks above some member, or None."""
    members = frozenset(members)
    _check_ids(instance.m, members)
    _check_k(instance.m, len(members))
    mode = POLICY_DEFEAT_MODE[TiePolicy(policy)]
    for o in range(instance.m):
        if o in members:
            continue
        for cm in sorted(members):
            found = find_defeat(instance, o, cm, mode)
            if found is not None:
                logger.debug(f"[scorespace] nts: outsider {o} can beat member {cm} ({mode.value})")
                return found
    return None


def necessary_topk_set(
    instance: Instance,
    members: Collection[int],
    policy: TiePolicy = TiePolicy.GIVEN,
) -> bool:
    return find_topk_set_violation(instance, members, policy) is None
