"""Shared builders for the test suite."""
import os, sys
import random

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.errors import TooLarge
from common.models import Instance, VoterGroup
from generator.corpus import random_instance
from solver.core_model import make_partial_order, standings, top_k_holds, top_set_holds
from solver.oracle import enumeration_size, oracle_score_set

# Completions the oracle may enumerate per corpus instance
CORPUS_CAP = 5_000


def build(names, rule, voters, tie=None):
    """Instance from candidate names, a rule and (name pairs, mult) voter specs."""
    idx = {n: i for i, n in enumerate(names)}
    groups = tuple(
        VoterGroup(make_partial_order(len(names), [(idx[a], idx[b]) for a, b in pairs]), mult)
        for pairs, mult in voters
    )
    tie = tuple(idx[n] for n in (tie or names))
    return Instance(tuple(names), rule, groups, tie)


def enumerable_corpus(seed, count, rules, m_range=(2, 5), n_range=(1, 3), max_pairs=4, cap=CORPUS_CAP):
    """`count` seeded random instances whose completions the oracle lists within `cap`."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_instance(rng, m_range=m_range, n_range=n_range, rules=rules, max_pairs=max_pairs)
        try:
            enumeration_size(inst, cap)
        except TooLarge:
            continue
        out.append(inst)
    return out


def all_score_vectors(instance, cap=CORPUS_CAP):
    return oracle_score_set(instance, range(instance.m), cap)


def brute_ntw(vectors, instance, c, k, policy):
    return all(top_k_holds(v, instance.tie_position, c, k, policy) for v in vectors)


def brute_ptw(vectors, instance, c, k, policy):
    return any(top_k_holds(v, instance.tie_position, c, k, policy) for v in vectors)


def brute_pts(vectors, instance, members, policy):
    return any(top_set_holds(v, instance.tie_position, members, policy) for v in vectors)


def brute_nts(vectors, instance, members, policy):
    return all(top_set_holds(v, instance.tie_position, members, policy) for v in vectors)


def witness_scores(instance, completion):
    """Scores of a witness completion, validating it against the instance."""
    return standings(instance, completion).scores
