"""
Route a query to an exact decider, falling back to the oracle where none applies.
"""
import sys
from typing import Any, Callable, Dict, Optional, Tuple

from . import flows, scorespace
from .core_model import extreme_position
from .models import (
    Completion,
    Instance,
    IoError,
    Method,
    NoExactMethod,
    QueryKind,
    QueryResult,
    QuerySpec,
    RunConfig,
    SpaceTooLarge,
    UnsupportedRule,
)
from .oracle import oracle_query
from .utils import Stopwatch, dump_json, save_json
from common.logging import get_logger

logger = get_logger(__name__)

METHOD_SCORESPACE = "exact/scorespace"
METHOD_FLOWS = "exact/flows"
METHOD_ORACLE = "oracle"

Decider = Callable[[], Tuple[bool, Optional[Completion]]]


def _negated(found: Optional[Completion]) -> Tuple[bool, Optional[Completion]]:
    return found is None, found


def exact_decider(instance: Instance, q: QuerySpec, cfg: RunConfig) -> Optional[Tuple[str, Decider]]:
    """The exact method covering (rule, query, k), or None."""
    flows_ok = extreme_position(instance.rule, instance.m) is not None
    kind = q.kind
    if kind == QueryKind.NW:
        return METHOD_SCORESPACE, lambda: _negated(
            scorespace.nw_counterexample(instance, q.candidate, q.policy))
    if kind == QueryKind.NTW and q.k <= cfg.max_k:
        return METHOD_SCORESPACE, lambda: scorespace.ntw_fixed_k(
            instance, q.candidate, q.k, q.policy, max_points=cfg.max_points, workers=cfg.workers)
    if kind == QueryKind.NTS:
        return METHOD_SCORESPACE, lambda: _negated(
            scorespace.find_topk_set_violation(instance, q.members, q.policy))
    if not flows_ok:
        return None
    if kind in (QueryKind.PW, QueryKind.PTW) and q.k <= cfg.max_k:
        return METHOD_FLOWS, lambda: flows.ptw_fixed_k(
            instance, q.candidate, q.k, q.policy, workers=cfg.workers)
    if kind == QueryKind.PTS:
        return METHOD_FLOWS, lambda: flows.possible_topk_set(
            instance, q.members, q.policy, workers=cfg.workers)
    if kind in (QueryKind.CONDORCET_POS, QueryKind.CONDORCET_NEC):
        mode = "possible" if kind == QueryKind.CONDORCET_POS else "necessary"
        return METHOD_FLOWS, lambda: flows.decide_condorcet(instance, q.members, mode, workers=cfg.workers)
    return None


def run_query(instance: Instance, q: QuerySpec, cfg: RunConfig) -> QueryResult:
    sw = Stopwatch()
    notes = []
    answer = witness = None
    method = None
    if cfg.method != Method.ORACLE:
        found = exact_decider(instance, q, cfg)
        if found is None:
            if cfg.method == Method.EXACT:
                raise NoExactMethod(
                    f"no exact method for {q.kind.value} with k={q.k} under {instance.rule.label}")
            logger.info(f"[dispatch] {q.kind.value} k={q.k} {instance.rule.label}: not covered, using oracle")
        else:
            method, decide = found
            try:
                answer, witness = decide()
            except (SpaceTooLarge, UnsupportedRule) as e:
                if cfg.method == Method.EXACT:
                    raise
                logger.warning(f"[dispatch] {method} gave up ({e}); falling back to oracle")
                notes.append(f"{method} fallback: {e}")
                method = None
    if method is None:
        method = METHOD_ORACLE
        answer, witness = oracle_query(instance, q, cfg.oracle_cap)
    logger.info(f"[dispatch] {q.kind.value} -> {answer} via {method} in {sw.elapsed_ms} ms")
    return QueryResult(answer=answer, method=method, witness=witness, elapsed_ms=sw.elapsed_ms, notes=notes)


def exit_code(answer: Optional[bool]) -> int:
    if answer is None:
        return 2
    return 0 if answer else 1


def error_record(exc: BaseException) -> Dict[str, Any]:
    return {"answer": None, "error": {"type": type(exc).__name__, "message": str(exc)}}


def emit_record(record: Dict[str, Any], path: Optional[str] = None) -> None:
    if path:
        try:
            save_json(path, record)
        except OSError as e:
            raise IoError(f"cannot write {path}: {e}") from e
        return
    sys.stdout.write(dump_json(record) + "\n")
    sys.stdout.flush()


def emit_result(result: QueryResult, instance: Instance, path: Optional[str] = None) -> int:
    """Write the result record (stdout when no path) and return the exit status."""
    emit_record(result.to_dict(instance), path)
    return exit_code(result.answer)
