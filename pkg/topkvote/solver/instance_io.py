"""
Instance files: JSON documents with version, candidates, rule, tie and voters.

    {
      "version": 1,
      "candidates": ["a", "b", "c"],
      "rule": {"name": "t_approval", "t": 2},
      "tie": ["a", "b", "c"],
      "voters": [
        {"mult": 2, "pairs": [["a", "b"]]},
        {"mult": 1, "blocks": [["c"], ["a", "b"]]}
      ]
    }

Serialized orders list the transitive reduction; parsing closes them again.
"""
import json
from typing import Any, Dict, List

import networkx as nx

from .core_model import make_partial_order, partitioned_order, score_vector
from .models import (
    DegenerateRule,
    Instance,
    IoError,
    ParseError,
    PartialOrder,
    RuleKind,
    ScoringRule,
    UnsupportedM,
    ValidationError,
    VoterGroup,
)
from .utils import save_json

FORMAT_VERSION = 1


def _require(doc: Dict[str, Any], key: str, kind, where: str = ""):
    field = f"{where}{key}"
    if key not in doc:
        raise ParseError("missing field", field=field)
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ParseError(f"expected {getattr(kind, '__name__', kind)}, got {type(val).__name__}", field=field)
    return val


def _names(val: Any, field: str, index: Dict[str, int]) -> List[int]:
    if not isinstance(val, list):
        raise ParseError("expected a list of candidate names", field=field)
    out = []
    for i, name in enumerate(val):
        if not isinstance(name, str):
            raise ParseError("candidate names must be strings", field=f"{field}[{i}]")
        if name not in index:
            raise ValidationError(f"{field}[{i}]: unknown candidate {name!r}")
        out.append(index[name])
    return out


def _parse_rule(doc: Any) -> ScoringRule:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", field="rule")
    name = _require(doc, "name", str, "rule.")
    try:
        kind = RuleKind(name)
    except ValueError:
        raise ParseError(f"unknown rule {name!r}", field="rule.name") from None
    if kind in (RuleKind.T_APPROVAL, RuleKind.T_VETO):
        return ScoringRule(kind, t=_require(doc, "t", int, "rule."))
    if kind == RuleKind.CUSTOM:
        scores = _require(doc, "scores", list, "rule.")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in scores):
            raise ParseError("scores must be integers", field="rule.scores")
        return ScoringRule.custom(scores)
    return ScoringRule(kind)


def _parse_voter(doc: Any, i: int, m: int, index: Dict[str, int]) -> VoterGroup:
    where = f"voters[{i}]"
    if not isinstance(doc, dict):
        raise ParseError("expected an object", field=where)
    mult = doc.get("mult", 1)
    if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
        raise ParseError(f"mult must be a positive integer, got {mult!r}", field=f"{where}.mult")
    if "pairs" in doc and "blocks" in doc:
        raise ParseError("give either pairs or blocks, not both", field=where)
    if "blocks" in doc:
        blocks = doc["blocks"]
        if not isinstance(blocks, list):
            raise ParseError("expected a list of name lists", field=f"{where}.blocks")
        ids = [_names(b, f"{where}.blocks[{j}]", index) for j, b in enumerate(blocks)]
        return VoterGroup(partitioned_order(m, ids), mult)
    pairs = doc.get("pairs", [])
    if not isinstance(pairs, list):
        raise ParseError("expected a list of [above, below] pairs", field=f"{where}.pairs")
    ids = []
    for j, pr in enumerate(pairs):
        got = _names(pr, f"{where}.pairs[{j}]", index)
        if len(got) != 2:
            raise ParseError("a pair needs exactly two names", field=f"{where}.pairs[{j}]")
        ids.append((got[0], got[1]))
    return VoterGroup(make_partial_order(m, ids), mult)


def parse_instance(doc: Any) -> Instance:
    """Build a validated Instance from a decoded instance document."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    version = _require(doc, "version", int)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported version {version}", field="version")
    names = _require(doc, "candidates", list)
    if not all(isinstance(x, str) for x in names):
        raise ParseError("candidate names must be strings", field="candidates")
    if len(set(names)) != len(names):
        raise ValidationError("duplicate candidate name")
    index = {name: i for i, name in enumerate(names)}
    rule = _parse_rule(_require(doc, "rule", dict))
    tie = _names(_require(doc, "tie", list), "tie", index)
    voters = [_parse_voter(v, i, len(names), index) for i, v in enumerate(_require(doc, "voters", list))]
    instance = Instance(tuple(names), rule, tuple(voters), tuple(tie))
    try:
        score_vector(rule, instance.m)
    except (DegenerateRule, UnsupportedM) as e:
        field = "rule.scores" if rule.kind == RuleKind.CUSTOM else "rule.t"
        raise ValidationError(f"{field}: {e}") from None
    return instance


def parse_instance_file(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None
    return parse_instance(doc)


def _reduced_pairs(order: PartialOrder) -> List[tuple]:
    g = nx.DiGraph()
    g.add_nodes_from(range(order.m))
    g.add_edges_from(order.pairs)
    return sorted(nx.transitive_reduction(g).edges())


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    names = instance.candidates
    return {
        "version": FORMAT_VERSION,
        "candidates": list(names),
        "rule": instance.rule.to_dict(),
        "tie": instance.names(instance.tie),
        "voters": [
            {"mult": g.mult, "pairs": [[names[x], names[y]] for x, y in _reduced_pairs(g.order)]}
            for g in instance.voters
        ],
    }


def write_instance_file(instance: Instance, path: str) -> None:
    try:
        save_json(path, instance_to_dict(instance))
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
