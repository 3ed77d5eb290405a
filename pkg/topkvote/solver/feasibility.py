"""
Place designated candidates into position windows inside one voter's partial order.

Positions are 1-based and windows are inclusive. Every candidate is a unit task
on one machine with m slots, so window propagation through the precedence
closure followed by earliest-deadline-first assignment is exact.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core_model import score_vector
from .models import ConflictingConstraints, LinearOrder, PartialOrder, ScoringRule, ValidationError


@dataclass(frozen=True)
class WindowConstraint:
    candidate: int
    release: int
    deadline: int

    def __post_init__(self):
        if self.release > self.deadline:
            raise ValidationError(
                f"empty window [{self.release}, {self.deadline}] for candidate {self.candidate}"
            )


def score_interval(rule: ScoringRule, m: int, s: int) -> Optional[Tuple[int, int]]:
    """Inclusive 1-based positions earning exactly `s`, or None."""
    positions = [j for j, x in enumerate(score_vector(rule, m), 1) if x == s]
    if not positions:
        return None
    return positions[0], positions[-1]


def _propagate(order: PartialOrder, release: List[int], deadline: List[int]) -> bool:
    changed = True
    while changed:
        changed = False
        for x, y in order.pairs:
            if release[y] < release[x] + 1:
                release[y] = release[x] + 1
                changed = True
            if deadline[x] > deadline[y] - 1:
                deadline[x] = deadline[y] - 1
                changed = True
        if any(r > d for r, d in zip(release, deadline)):
            return False
    return True


def feasible_extension(
    order: PartialOrder,
    constraints: Iterable[WindowConstraint],
) -> Optional[LinearOrder]:
    """A linear extension of `order` honouring every window, or None."""
    m = order.m
    release = [1] * m
    deadline = [m] * m
    seen = set()
    for wc in constraints:
        if wc.candidate in seen:
            raise ConflictingConstraints(f"two windows for candidate {wc.candidate}")
        seen.add(wc.candidate)
        release[wc.candidate] = max(1, wc.release)
        deadline[wc.candidate] = min(m, wc.deadline)
    if any(r > d for r, d in zip(release, deadline)):
        return None
    if not _propagate(order, release, deadline):
        return None

    placed = [False] * m
    out: List[int] = []
    for pos in range(1, m + 1):
        best = None
        for c in range(m):
            if placed[c] or release[c] > pos:
                continue
            if any(not placed[a] for a in order.above(c)):
                continue
            if best is None or deadline[c] < deadline[best]:
                best = c
        if best is None or deadline[best] < pos:
            return None
        placed[best] = True
        out.append(best)
    return tuple(out)


def voter_score_feasible(
    rule: ScoringRule,
    order: PartialOrder,
    S: Sequence[int],
    targets: Sequence[int],
) -> Optional[LinearOrder]:
    """An extension where S[i] earns exactly targets[i], or None."""
    if len(S) != len(targets):
        raise ValidationError(f"{len(S)} tracked candidates but {len(targets)} targets")
    if len(set(S)) != len(S):
        raise ValidationError("tracked candidates must be distinct")
    windows = []
    for c, t in zip(S, targets):
        span = score_interval(rule, order.m, t)
        if span is None:
            return None
        windows.append(WindowConstraint(c, span[0], span[1]))
    return feasible_extension(order, windows)


def max_score_advantage(
    rule: ScoringRule,
    order: PartialOrder,
    c: int,
    d: int,
) -> Tuple[int, LinearOrder]:
    """Largest s(c) - s(d) over extensions of `order`, with an extension achieving it.

    Score pairs are scanned by decreasing difference; each test places c and d
    inside the position intervals of their scores.
    """
    if c == d:
        raise ValidationError("advantage needs two distinct candidates")
    values = sorted(set(score_vector(rule, order.m)), reverse=True)
    spans: Dict[int, Tuple[int, int]] = {s: score_interval(rule, order.m, s) for s in values}
    cases = sorted(
        ((a, b) for a in values for b in values),
        key=lambda ab: (-(ab[0] - ab[1]), -ab[0]),
    )
    for a, b in cases:
        if a == b and spans[a][0] == spans[a][1]:
            continue
        ext = feasible_extension(order, (
            WindowConstraint(c, *spans[a]),
            WindowConstraint(d, *spans[b]),
        ))
        if ext is not None:
            return a - b, ext
    raise AssertionError("no extension found; partial order has no linear extension")
