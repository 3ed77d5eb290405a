"""
Source problems of the reductions and their brute-force deciders.
"""
import os, sys
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, List, Tuple, Union

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from common.errors import MalformedGraph, MalformedX3C, TooLarge
from solver.policy import NP_SOURCE_MAX_SIZE


@dataclass(frozen=True)
class SetCoverInstance:
    """Exact cover by 3-sets: universe 0..3q-1 and a sequence of 3-element edges."""
    universe_size: int
    edges: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if self.universe_size < 3 or self.universe_size % 3:
            raise MalformedX3C(f"universe size must be a positive multiple of 3, got {self.universe_size}")
        edges = []
        for i, e in enumerate(self.edges):
            e = tuple(e)
            if len(e) != 3 or len(set(e)) != 3:
                raise MalformedX3C(f"edge {i} must have 3 distinct elements, got {e}")
            if any(not 0 <= u < self.universe_size for u in e):
                raise MalformedX3C(f"edge {i} has an element outside the universe: {e}")
            edges.append(tuple(sorted(e)))
        if not edges:
            raise MalformedX3C("no edges")
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def q(self) -> int:
        return self.universe_size // 3

    def edges_of(self, u: int) -> List[int]:
        """Indices of the edges containing element u."""
        return [i for i, e in enumerate(self.edges) if u in e]


@dataclass(frozen=True)
class GraphInstance:
    """Simple undirected graph on vertices 0..n-1 with a budget k."""
    n_vertices: int
    edges: FrozenSet[Tuple[int, int]]
    k: int

    def __post_init__(self):
        if self.n_vertices < 1:
            raise MalformedGraph("graph needs at least one vertex")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise MalformedGraph(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise MalformedGraph(f"edge ({u}, {v}) out of range")
            norm.add((min(u, v), max(u, v)))
        if not 1 <= self.k <= self.n_vertices:
            raise MalformedGraph(f"budget k must be in [1, {self.n_vertices}], got {self.k}")
        object.__setattr__(self, "edges", frozenset(norm))

    def closed_neighborhood(self, u: int) -> FrozenSet[int]:
        out = {u}
        for a, b in self.edges:
            if a == u:
                out.add(b)
            elif b == u:
                out.add(a)
        return frozenset(out)


def has_exact_cover(x3c: SetCoverInstance) -> bool:
    full = frozenset(range(x3c.universe_size))
    for pick in combinations(x3c.edges, x3c.q):
        covered = frozenset(u for e in pick for u in e)
        if covered == full:
            return True
    return False


def has_dominating_set(g: GraphInstance) -> bool:
    full = frozenset(range(g.n_vertices))
    hoods = [g.closed_neighborhood(u) for u in range(g.n_vertices)]
    for pick in combinations(range(g.n_vertices), g.k):
        if frozenset().union(*(hoods[u] for u in pick)) == full:
            return True
    return False


def solve_np_source(problem: Union[SetCoverInstance, GraphInstance]) -> bool:
    """Brute-force X3C / dominating set, for labelling generated fixtures."""
    if isinstance(problem, SetCoverInstance):
        if problem.universe_size > NP_SOURCE_MAX_SIZE:
            raise TooLarge(f"universe of {problem.universe_size} exceeds {NP_SOURCE_MAX_SIZE}")
        return has_exact_cover(problem)
    if isinstance(problem, GraphInstance):
        if problem.n_vertices > NP_SOURCE_MAX_SIZE:
            raise TooLarge(f"{problem.n_vertices} vertices exceed {NP_SOURCE_MAX_SIZE}")
        return has_dominating_set(problem)
    raise TypeError(f"unsupported source problem {type(problem).__name__}")
