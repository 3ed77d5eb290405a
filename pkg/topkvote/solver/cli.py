import argparse
import os
import random
import sys
from typing import List, Optional, Tuple

# Add parent directory to path for common and generator packages
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.logging import setup_logger
from generator.corpus import random_graph, random_instance, random_x3c
from generator.np_sources import GraphInstance, SetCoverInstance, solve_np_source
from generator.reductions import gen_domset_ptw, gen_pw_to_ptwk, gen_x3c_ntw, reverse_instance

from .config import load_run_config
from .dispatch import emit_record, emit_result, error_record, run_query
from .instance_io import parse_instance_file, write_instance_file
from .models import Instance, QueryKind, QuerySpec, TooLarge, ValidationError, VotingError
from .utils import ensure_dir, ts_compact

FAMILIES = ["x3c-plurality", "x3c-borda", "domset", "pw-embed", "reverse", "random"]


def parse_args(argv: Optional[List[str]] = None):
    p = argparse.ArgumentParser(description="topkvote: top-k winner queries over partial voting profiles")
    p.add_argument("--out", default=None, help="directory for logs and generated files")
    p.add_argument("--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="answer one query about an instance file")
    q.add_argument("instance")
    q.add_argument("--query", required=True, choices=[k.value for k in QueryKind])
    q.add_argument("--candidate")
    q.add_argument("--set", dest="members", help="comma-separated candidate names")
    q.add_argument("--k", type=int)
    q.add_argument("--tie-policy", default="given", choices=["given", "some", "every"])
    q.add_argument("--method", default="auto", choices=["auto", "exact", "oracle"])
    q.add_argument("--cap", type=int)
    q.add_argument("--max-points", type=int)
    q.add_argument("--max-k", type=int)
    q.add_argument("--workers", type=int)
    q.add_argument("--output", help="write the result record here instead of stdout")

    g = sub.add_parser("gen", help="write a generated instance file")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--output", help="instance file path (default: <out>/instances/<family>_<ts>_s<seed>.json)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--universe", type=int, help="x3c: universe size 3q")
    g.add_argument("--edges", help="x3c: '0,1,2;3,4,5'  domset: '0-1,1-2'")
    g.add_argument("--n-edges", type=int, default=4, help="x3c: random edge count")
    g.add_argument("--vertices", type=int, default=4, help="domset: vertex count")
    g.add_argument("--budget", type=int, default=1, help="domset: dominating set size")
    g.add_argument("--instance", help="pw-embed / reverse: source instance file")
    g.add_argument("--candidate", help="pw-embed: source candidate")
    g.add_argument("--k", type=int, default=2, help="pw-embed: target k")
    g.add_argument("--m-max", type=int, default=5, help="random: largest candidate count")
    g.add_argument("--n-max", type=int, default=4, help="random: largest voter group count")
    return p.parse_args(argv)


def _split_names(text: str) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def build_query(instance: Instance, args, policy) -> QuerySpec:
    kind = QueryKind(args.query)
    if kind.about_set:
        if not args.members:
            raise ValidationError(f"--set is required for {kind.value}")
        members = frozenset(instance.index(n) for n in _split_names(args.members))
        k = args.k if args.k is not None else len(members)
        return QuerySpec(kind, members=members, k=k, policy=policy)
    if not args.candidate:
        raise ValidationError(f"--candidate is required for {kind.value}")
    k = args.k if args.k is not None else 1
    return QuerySpec(kind, candidate=instance.index(args.candidate), k=k, policy=policy)


def _query_flags(instance: Instance, q: QuerySpec) -> str:
    flags = f"--query {q.kind.value} --k {q.k} --tie-policy {q.policy.value}"
    if q.kind.about_set:
        return flags + " --set " + ",".join(instance.names(sorted(q.members)))
    return flags + f" --candidate {instance.candidates[q.candidate]}"


def _parse_x3c(args, rng) -> SetCoverInstance:
    if not args.edges:
        spread = args.family == "x3c-borda"
        q = max(2 if spread else 1, (args.universe or 6) // 3)
        return random_x3c(rng, q, args.n_edges, spread=spread)
    try:
        edges = tuple(tuple(int(x) for x in part.split(",")) for part in args.edges.split(";") if part.strip())
    except ValueError:
        raise ValidationError(f"cannot parse --edges {args.edges!r}") from None
    return SetCoverInstance(args.universe or 3 * len(edges), edges)


def _parse_graph(args, rng) -> GraphInstance:
    if args.edges is None:
        return random_graph(rng, args.vertices, k=args.budget)
    try:
        edges = frozenset(
            tuple(int(x) for x in part.split("-")) for part in args.edges.split(",") if part.strip()
        )
    except ValueError:
        raise ValidationError(f"cannot parse --edges {args.edges!r}") from None
    return GraphInstance(args.vertices, edges, args.budget)


def _source_answer(problem) -> Optional[bool]:
    try:
        return solve_np_source(problem)
    except TooLarge:
        return None


def default_output_path(args) -> str:
    """<out>/instances/<family>_<ts>_s<seed>.json, with a _<n> suffix if taken."""
    base = os.path.join(args.out or "out", "instances")
    ensure_dir(base)
    stem = f"{args.family.replace('-', '_')}_{ts_compact()}_s{args.seed}"
    path = os.path.join(base, stem + ".json")
    n = 1
    while os.path.exists(path):
        path = os.path.join(base, f"{stem}_{n}.json")
        n += 1
    return path


def generate(args, logger) -> Tuple[Instance, Optional[QuerySpec], dict]:
    rng = random.Random(args.seed)
    extra = {}
    if args.family in ("x3c-plurality", "x3c-borda"):
        x3c = _parse_x3c(args, rng)
        instance, q = gen_x3c_ntw(x3c, args.family.split("-", 1)[1])
        extra = {"source_answer": _source_answer(x3c), "expected_answer_is_negated": True}
    elif args.family == "domset":
        g = _parse_graph(args, rng)
        instance, q = gen_domset_ptw(g)
        extra = {"source_answer": _source_answer(g), "expected_answer_is_negated": False}
    elif args.family == "pw-embed":
        if not args.instance or not args.candidate:
            raise ValidationError("pw-embed needs --instance and --candidate")
        source = parse_instance_file(args.instance)
        instance, q = gen_pw_to_ptwk(source, source.index(args.candidate), args.k)
    elif args.family == "reverse":
        if not args.instance:
            raise ValidationError("reverse needs --instance")
        instance, q = reverse_instance(parse_instance_file(args.instance)), None
    else:
        instance, q = random_instance(rng, m_range=(2, args.m_max), n_range=(1, args.n_max)), None
    logger.info(f"[gen] {args.family}: m={instance.m} n={instance.n} groups={len(instance.voters)}")
    return instance, q, extra


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logger = setup_logger("topkvote", args.out, verbose=args.verbose)
    output = getattr(args, "output", None)
    try:
        if args.command == "gen":
            instance, q, extra = generate(args, logger)
            path = output
            if not path:
                path = default_output_path(args)
            write_instance_file(instance, path)
            summary = {"family": args.family, "output": path, "m": instance.m, "n": instance.n}
            if q is not None:
                summary["query"] = _query_flags(instance, q)
            summary.update(extra)
            emit_record(summary)
            return 0

        cfg = load_run_config(
            method=args.method,
            cap=args.cap,
            policy=args.tie_policy,
            output=output,
            max_points=args.max_points,
            max_k=args.max_k,
            workers=args.workers,
            verbose=args.verbose,
            out_dir=args.out,
        )
        instance = parse_instance_file(args.instance)
        q = build_query(instance, args, cfg.policy)
        logger.info(f"[query] {q.kind.value} k={q.k} policy={q.policy.value} rule={instance.rule.label} m={instance.m} n={instance.n}")
        result = run_query(instance, q, cfg)
        return emit_result(result, instance, cfg.output)
    except (VotingError, OSError) as e:
        logger.error(f"[error] {type(e).__name__}: {e}")
        try:
            emit_record(error_record(e), output if args.command == "query" else None)
        except VotingError:
            emit_record(error_record(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
