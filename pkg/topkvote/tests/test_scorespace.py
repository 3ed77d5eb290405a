import random

import pytest

from common.errors import SpaceTooLarge, ValidationError
from common.models import QueryKind, QuerySpec, ScoringRule, TiePolicy
from helpers import (
    CORPUS_CAP,
    all_score_vectors,
    brute_nts,
    brute_ntw,
    build,
    witness_scores,
)
from solver.core_model import top_k_holds, top_set_holds
from solver.oracle import oracle_query, oracle_score_set
from solver.scorespace import (
    DefeatMode,
    can_defeat,
    find_defeat,
    find_topk_set_violation,
    necessary_topk_set,
    necessary_winner,
    ntw_fixed_k,
    profile_score_set,
)

POLICIES = (TiePolicy.GIVEN, TiePolicy.SOME, TiePolicy.EVERY)


class TestProfileScoreSet:

    def test_small_example(self, abc_plurality):
        space = profile_score_set(abc_plurality, (0, 1))
        assert set(space) == oracle_score_set(abc_plurality, (0, 1), 1000)
        assert (3, 0) in space and (0, 2) not in space
        assert len(space) == 7
        assert list(space) == sorted(space.achievable)

    def test_equals_oracle_on_corpus(self, mixed_corpus):
        rng = random.Random(1)
        for inst in mixed_corpus[:120]:
            size = rng.randint(1, min(3, inst.m))
            S = tuple(rng.sample(range(inst.m), size))
            assert set(profile_score_set(inst, S)) == oracle_score_set(inst, S, CORPUS_CAP), inst

    def test_witness_realises_every_point(self, mixed_corpus):
        for inst in mixed_corpus[:40]:
            S = tuple(range(min(2, inst.m)))
            space = profile_score_set(inst, S)
            for point in space:
                scores = witness_scores(inst, space.witness(point))
                assert tuple(scores[c] for c in S) == point

    def test_unachievable_point(self, abc_plurality):
        space = profile_score_set(abc_plurality, (0, 1))
        with pytest.raises(ValidationError):
            space.witness((0, 2))

    def test_large_multiplicity_uses_doubling(self):
        inst = build(("a", "b", "c"), ScoringRule.borda(), [([], 200)])
        space = profile_score_set(inst, (0,))
        assert set(space) == {(s,) for s in range(0, 401)}
        wit = space.witness((123,))
        assert sum(b.mult for b in wit.ballots) == 200
        assert witness_scores(inst, wit)[0] == 123

    def test_point_ceiling(self):
        inst = build(("a", "b", "c", "d"), ScoringRule.borda(), [([], 30)])
        with pytest.raises(SpaceTooLarge):
            profile_score_set(inst, (0, 1, 2), max_points=50)

    def test_tracked_candidates_must_be_distinct(self, abc_plurality):
        with pytest.raises(ValidationError):
            profile_score_set(abc_plurality, (0, 0))


class TestNecessaryTopK:

    def test_matches_oracle_on_corpus(self, mixed_corpus):
        compared = 0
        for inst in mixed_corpus:
            vectors = all_score_vectors(inst)
            for k in (1, 2, 3):
                if k > inst.m:
                    continue
                for policy in POLICIES:
                    for c in range(inst.m):
                        ok, cex = ntw_fixed_k(inst, c, k, policy)
                        assert ok == brute_ntw(vectors, inst, c, k, policy), (inst, c, k, policy)
                        if not ok:
                            scores = witness_scores(inst, cex)
                            assert not top_k_holds(scores, inst.tie_position, c, k, policy)
                        compared += 1
        assert compared > 1000

    def test_parallel_subsets_agree(self, mixed_corpus):
        for inst in mixed_corpus[:30]:
            if inst.m < 3:
                continue
            for c in range(inst.m):
                seq = ntw_fixed_k(inst, c, 2, TiePolicy.GIVEN)[0]
                par = ntw_fixed_k(inst, c, 2, TiePolicy.GIVEN, workers=4)[0]
                assert seq == par

    def test_parallel_scan_stops_at_a_counterexample(self, monkeypatch):
        import solver.scorespace as ss
        inst = build(tuple("abcdefgh"), ScoringRule.plurality(), [([], 3)])
        calls = []
        real = ss._subset_counterexample

        def counted(*args):
            calls.append(1)
            return real(*args)

        monkeypatch.setattr(ss, "_subset_counterexample", counted)
        assert not ntw_fixed_k(inst, 0, 2)[0]
        sequential = len(calls)
        calls.clear()
        assert not ntw_fixed_k(inst, 0, 2, workers=4)[0]
        assert len(calls) <= sequential + 4

    def test_k_equal_m_holds_under_given(self, abc_plurality):
        assert ntw_fixed_k(abc_plurality, 1, 3) == (True, None)

    def test_agrees_with_oracle_query(self, abc_plurality):
        for c in range(3):
            for k in (1, 2):
                q = QuerySpec(QueryKind.NTW, candidate=c, k=k)
                assert ntw_fixed_k(abc_plurality, c, k)[0] == oracle_query(abc_plurality, q, 1000)[0]


class TestDefeats:

    def test_modes(self):
        # one voter each way: a and b always tie
        inst = build(("a", "b"), ScoringRule.borda(), [([("a", "b")], 1), ([("b", "a")], 1)])
        assert not can_defeat(inst, 0, 1, DefeatMode.STRICT)
        assert can_defeat(inst, 0, 1, DefeatMode.WEAK)
        assert not can_defeat(inst, 1, 0, DefeatMode.WEAK)
        assert can_defeat(inst, 1, 0, DefeatMode.LOOSE)

    def test_find_defeat_witness(self, abc_plurality):
        comp = find_defeat(abc_plurality, 2, 0, DefeatMode.STRICT)
        scores = witness_scores(abc_plurality, comp)
        assert scores[2] > scores[0]
        fixed = build(("a", "b"), ScoringRule.plurality(), [([("a", "b")], 1)])
        assert find_defeat(fixed, 1, 0, DefeatMode.LOOSE) is None

    def test_same_candidate(self, abc_plurality):
        with pytest.raises(ValidationError):
            can_defeat(abc_plurality, 1, 1, DefeatMode.WEAK)

    def test_necessary_winner(self, mixed_corpus):
        for inst in mixed_corpus[:100]:
            vectors = all_score_vectors(inst)
            for policy in POLICIES:
                for c in range(inst.m):
                    assert necessary_winner(inst, c, policy) == brute_ntw(vectors, inst, c, 1, policy)


class TestNecessaryTopSet:

    def test_matches_oracle_on_corpus(self, mixed_corpus):
        rng = random.Random(4)
        for inst in mixed_corpus[:150]:
            vectors = all_score_vectors(inst)
            for policy in POLICIES:
                k = rng.randint(1, inst.m)
                members = frozenset(rng.sample(range(inst.m), k))
                got = necessary_topk_set(inst, members, policy)
                assert got == brute_nts(vectors, inst, members, policy), (inst, members, policy)
                if not got:
                    cex = find_topk_set_violation(inst, members, policy)
                    assert not top_set_holds(witness_scores(inst, cex), inst.tie_position, members, policy)

    def test_whole_candidate_set(self, abc_plurality):
        assert necessary_topk_set(abc_plurality, {0, 1, 2}, TiePolicy.EVERY)
