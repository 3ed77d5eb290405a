"""
Instance transforms that preserve or flip query answers, and generators that
encode X3C / dominating set / possible winner as top-k winner queries.

Generated "arbitrary" orders are block linearizations (ascending id inside
each block), so every generator is deterministic.
"""
import os, sys
from typing import List, Optional, Sequence, Tuple

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.errors import (
    ContainmentViolated,
    DegenerateRule,
    IndexOutOfRange,
    MalformedX3C,
    NonBinaryRule,
    NotStronglyPure,
    UnsupportedM,
    UnsupportedRule,
)
from common.models import (
    Instance,
    PartialOrder,
    QueryKind,
    QuerySpec,
    RuleKind,
    ScoringRule,
    TiePolicy,
    VoterGroup,
)
from solver.core_model import (
    block_linearization,
    is_binary,
    make_partial_order,
    partitioned_order,
    reverse_order,
    rule_from_vector,
    score_vector,
)
from common.logging import get_logger

from .np_sources import GraphInstance, SetCoverInstance

logger = get_logger(__name__)

Generated = Tuple[Instance, QuerySpec]

_REVERSED_FAMILY = {
    RuleKind.PLURALITY: RuleKind.VETO,
    RuleKind.VETO: RuleKind.PLURALITY,
    RuleKind.T_APPROVAL: RuleKind.T_VETO,
    RuleKind.T_VETO: RuleKind.T_APPROVAL,
}


# -- metamorphic transforms ---------------------------------------------------

def reverse_rule(rule: ScoringRule, m: int) -> ScoringRule:
    """Complementary-reversed rule: r'(m, i) = 1 - r(m, m+1-i)."""
    if not is_binary(rule, m):
        raise NonBinaryRule(f"{rule.label} is not a 0/1 rule at m={m}")
    if rule.kind in _REVERSED_FAMILY:
        return ScoringRule(_REVERSED_FAMILY[rule.kind], t=rule.t)
    sv = score_vector(rule, m)
    return rule_from_vector(tuple(1 - sv[m - 1 - i] for i in range(m)))


def reverse_instance(instance: Instance) -> Instance:
    """Reverse every voter order and the tie order, complement-reverse the rule.

    Scores become n - s and the ranking reverses, so c is top-k in a completion
    iff c is not top-(m-k) in the reversed one.
    """
    return Instance(
        candidates=instance.candidates,
        rule=reverse_rule(instance.rule, instance.m),
        voters=tuple(VoterGroup(reverse_order(g.order), g.mult) for g in instance.voters),
        tie=tuple(reversed(instance.tie)),
    )


def containment_params(source: ScoringRule, target: ScoringRule, m: int) -> Tuple[int, int, int, int]:
    """Built-in (p, i, a, b) realising `source` at m inside `target` at p."""
    if source == target:
        return m, 0, 1, 0
    if source.kind == RuleKind.PLURALITY and target.kind == RuleKind.T_APPROVAL:
        return m + target.t - 1, target.t - 1, 1, 0
    if source.kind == RuleKind.VETO and target.kind == RuleKind.T_VETO:
        return m + target.t - 1, 0, 1, 0
    raise UnsupportedRule(f"no built-in containment of {source.label} in {target.label}")


def _fresh_names(taken: Sequence[str], prefix: str, count: int) -> List[str]:
    used = set(taken)
    out = []
    j = 1
    while len(out) < count:
        name = f"{prefix}{j}"
        if name not in used:
            out.append(name)
            used.add(name)
        j += 1
    return out


def embed_instance(instance: Instance, target: ScoringRule, p: int, i: int, a: int, b: int) -> Instance:
    """Pad with i top dummies and p-i-m bottom dummies so `target` at p acts like the source rule.

    Queries about k map to k + i.
    """
    m = instance.m
    if i < 0 or p < m + i:
        raise ContainmentViolated(f"need 0 <= i and p >= m + i, got p={p}, i={i}, m={m}")
    src = score_vector(instance.rule, m)
    dst = score_vector(target, p)
    for j in range(m):
        if src[j] != a * dst[i + j] + b:
            raise ContainmentViolated(
                f"position {j + 1}: {src[j]} != {a}*{dst[i + j]}+{b} ({instance.rule.label} in {target.label})"
            )
    names = list(instance.candidates)
    top = _fresh_names(names, "top", i)
    bottom = _fresh_names(names + top, "bottom", p - i - m)
    d1 = list(range(m, m + i))
    d2 = list(range(m + i, p))
    frame = partitioned_order(p, [d1, list(range(m)), d2])
    voters = tuple(
        VoterGroup(make_partial_order(p, set(g.order.pairs) | set(frame.pairs)), g.mult)
        for g in instance.voters
    )
    tie = block_linearization([d1]) + tuple(instance.tie) + block_linearization([d2])
    return Instance(tuple(names + top + bottom), target, voters, tie)


def shift_query(q: QuerySpec, shift: int) -> QuerySpec:
    """Same query with k raised by `shift` (set queries are not shifted)."""
    if q.kind.about_set:
        return q
    return QuerySpec(q.kind, candidate=q.candidate, k=q.k + shift, policy=q.policy)


# -- reduction generators -----------------------------------------------------

def circular_vote(A: Sequence, i: int) -> tuple:
    """i-th rotation of A (1-based): (a_i, .., a_t, a_1, .., a_{i-1})."""
    if not 1 <= i <= len(A):
        raise IndexOutOfRange(f"rotation index {i} outside [1, {len(A)}]")
    A = tuple(A)
    return A[i - 1:] + A[:i - 1]


def cover_block_count(q: int, m: int) -> int:
    """Copies of the circular edge block: 3(2m-1) + 3 * sum_{i<q} (m-i)."""
    return 3 * (2 * m - 1) + 3 * sum(m - i for i in range(1, q))


def _complete(m: int, order: Sequence[int]) -> PartialOrder:
    return make_partial_order(m, zip(order, order[1:]))


def _x3c_plurality(x3c: SetCoverInstance) -> Generated:
    m_e = len(x3c.edges)
    cstar = m_e
    m = m_e + 1
    edges = list(range(m_e))
    voters = []
    for u in range(x3c.universe_size):
        mine = x3c.edges_of(u)
        if not mine:
            raise MalformedX3C(f"element {u} lies in no edge")
        rest = [e for e in edges if e not in mine]
        voters.append(VoterGroup(partitioned_order(m, [mine, rest, [cstar]]), 1))
    voters.append(VoterGroup(_complete(m, block_linearization([[cstar], edges])), 3))
    names = tuple(f"e{j + 1}" for j in edges) + ("c*",)
    tie = block_linearization([edges, [cstar]])
    instance = Instance(names, ScoringRule.plurality(), tuple(voters), tie)
    return instance, QuerySpec(QueryKind.NTW, candidate=cstar, k=x3c.q, policy=TiePolicy.GIVEN)


def _edge_block_vote(rotation: Sequence[int], dummies: Sequence[int], cstar: int) -> Tuple[int, ...]:
    """One vote of the circular edge block over 2m positions.

    Edges take positions 1, 3, .., 2m-3 and the last edge position 2m; c* sits
    at position m. For odd m the edge landing on position m moves to m+1 and the
    last edge to 2m-1, which keeps c* at score m and the edge total at m^2-1.
    """
    m = len(rotation)
    slots = [2 * j + 1 for j in range(m - 1)]
    last = 2 * m
    if m % 2 == 1:
        slots = [m + 1 if s == m else s for s in slots]
        last = 2 * m - 1
    slots.append(last)
    vote: List[Optional[int]] = [None] * (2 * m)
    for e, s in zip(rotation, slots):
        vote[s - 1] = e
    vote[m - 1] = cstar
    fill = iter(dummies)
    for pos in range(2 * m):
        if vote[pos] is None:
            vote[pos] = next(fill)
    return tuple(vote)


def _x3c_borda(x3c: SetCoverInstance) -> Generated:
    m_e = len(x3c.edges)
    q = x3c.q
    edges = list(range(m_e))
    dummies = list(range(m_e, 2 * m_e - 1))
    cstar = 2 * m_e - 1
    m = 2 * m_e
    s_cvr = cover_block_count(q, m_e)
    voters = []
    for u in range(x3c.universe_size):
        mine = x3c.edges_of(u)
        deg = len(mine)
        if not 1 <= deg <= m_e - 1:
            raise MalformedX3C(f"element {u} lies in {deg} edges; the Borda encoding needs 1..{m_e - 1}")
        low = dummies[:m_e - deg]
        high = dummies[m_e - deg:] + [e for e in edges if e not in mine]
        voters.append(VoterGroup(partitioned_order(m, [mine, low, high, [cstar]]), 1))
    for i in range(1, m_e + 1):
        vote = _edge_block_vote(circular_vote(edges, i), dummies, cstar)
        voters.append(VoterGroup(_complete(m, vote), s_cvr))
    balance = 4 * (3 * q + s_cvr)
    for i in range(1, m_e + 2):
        vote = circular_vote(edges + [cstar], i) + tuple(dummies)
        voters.append(VoterGroup(_complete(m, vote), balance))
    names = (
        tuple(f"e{j + 1}" for j in edges)
        + tuple(f"d{j + 1}" for j in range(len(dummies)))
        + ("c*",)
    )
    tie = block_linearization([edges, [cstar], dummies])
    instance = Instance(names, ScoringRule.borda(), tuple(voters), tie)
    logger.debug(f"[reductions] x3c-borda: {m} candidates, {instance.n} voters, S_cvr={s_cvr}")
    return instance, QuerySpec(QueryKind.NTW, candidate=cstar, k=q, policy=TiePolicy.GIVEN)


def gen_x3c_ntw(x3c: SetCoverInstance, rule: str = "plurality") -> Generated:
    """X3C has a cover iff the generated NTW query answers False."""
    if rule == "plurality":
        return _x3c_plurality(x3c)
    if rule == "borda":
        return _x3c_borda(x3c)
    raise UnsupportedRule(f"X3C encoding exists for plurality and borda, not {rule!r}")


def gen_domset_ptw(g: GraphInstance) -> Generated:
    """A dominating set of size <= k exists iff c* is a possible top-(k+1) winner.

    Every vertex voter can only put a vertex of its closed neighbourhood first;
    c* scores 0 and wins all ties, so its rank is one plus the number of
    vertices that receive a vote.
    """
    n = g.n_vertices
    cstar = n
    m = n + 1
    verts = list(range(n))
    voters = []
    for u in verts:
        hood = sorted(g.closed_neighborhood(u))
        rest = [v for v in verts if v not in hood]
        voters.append(VoterGroup(partitioned_order(m, [hood, rest, [cstar]]), 1))
    names = tuple(f"u{v + 1}" for v in verts) + ("c*",)
    tie = block_linearization([[cstar], verts])
    instance = Instance(names, ScoringRule.plurality(), tuple(voters), tie)
    return instance, QuerySpec(QueryKind.PTW, candidate=cstar, k=g.k + 1, policy=TiePolicy.GIVEN)


def pure_split(rule: ScoringRule, m: int, k: int) -> int:
    """Offset t in [0, k-1] with s_{m+k-1}[t:t+m] == s_m; NotStronglyPure when absent."""
    try:
        small = score_vector(rule, m)
        big = score_vector(rule, m + k - 1)
    except (UnsupportedM, DegenerateRule) as e:
        raise NotStronglyPure(f"{rule.label}: {e}") from None
    for t in range(k):
        if big[t:t + m] == small:
            return t
    raise NotStronglyPure(f"{rule.label}: s_{m} is not a segment of s_{m + k - 1}")


def gen_pw_to_ptwk(instance: Instance, c: int, k: int) -> Generated:
    """c is a co-winner of the source iff c is a possible top-k winner of the target.

    Adds k-1 dummies split around the original candidates and (k-1)*m heavy
    complete votes M_i(D) + M_j(C) that keep every dummy above every original
    candidate; the tie order puts the dummies first and c right after them.
    """
    m, n = instance.m, instance.n
    t = pure_split(instance.rule, m, k)
    mp = m + k - 1
    names = list(instance.candidates)
    dummies = list(range(m, mp))
    d1, d2 = dummies[:t], dummies[t:]
    orig = list(range(m))
    frame = partitioned_order(mp, [d1, orig, d2])
    voters = [
        VoterGroup(make_partial_order(mp, set(g.order.pairs) | set(frame.pairs)), g.mult)
        for g in instance.voters
    ]
    if dummies:
        heavy = n * score_vector(instance.rule, mp)[0]
        for i in range(1, len(dummies) + 1):
            for j in range(1, m + 1):
                vote = circular_vote(dummies, i) + circular_vote(orig, j)
                voters.append(VoterGroup(_complete(mp, vote), heavy))
    names += _fresh_names(names, "dummy", len(dummies))
    tie = block_linearization([dummies]) + (c,) + tuple(x for x in orig if x != c)
    target = Instance(tuple(names), instance.rule, tuple(voters), tie)
    return target, QuerySpec(QueryKind.PTW, candidate=c, k=k, policy=TiePolicy.GIVEN)
