import os, sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from common.models import ScoringRule
from helpers import build, enumerable_corpus


@pytest.fixture(scope="session")
def mixed_corpus():
    rules = (ScoringRule.plurality(), ScoringRule.veto(), ScoringRule.t_approval(2), ScoringRule.borda())
    return enumerable_corpus(seed=7, count=200, rules=rules)


@pytest.fixture(scope="session")
def plu_veto_corpus():
    return enumerable_corpus(seed=11, count=200, rules=(ScoringRule.plurality(), ScoringRule.veto()))


@pytest.fixture
def abc_plurality():
    """Two voters with a > b, one voter with no preferences; tie a, b, c."""
    return build(("a", "b", "c"), ScoringRule.plurality(), [([("a", "b")], 2), ([], 1)])
