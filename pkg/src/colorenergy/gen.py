"""Coloring generators, pattern graph families and a backtracking matcher."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Iterator, Mapping

import numpy as np

from ._rng import as_generator
from .coloring import ColoredCompleteGraph, pair_index
from .errors import InvalidColorCount, InvalidParams

__all__ = [
    "Embedding",
    "PatternGraph",
    "SearchResult",
    "check_embedding",
    "find_subgraph",
    "generate_coloring",
    "iter_subgraphs",
    "make_pattern",
    "parse_pattern",
]

DEFAULT_BUDGET = 10**7


# --- colorings ---------------------------------------------------------------

def _round_robin_even(n: int) -> np.ndarray:
    m = n - 1
    colors = np.empty(comb(n, 2), dtype=np.int64)
    for rnd in range(m):
        colors[pair_index(n, rnd, n - 1)] = rnd
        for d in range(1, n // 2):
            colors[pair_index(n, (rnd + d) % m, (rnd - d) % m)] = rnd
    return colors


def generate_coloring(n: int, scheme: str, c: int | None = None, seed=0) -> ColoredCompleteGraph:
    """Build a coloring of K_n.

    ``scheme`` is ``"random"`` (iid uniform over ``c`` colors, unused ids
    compressed away), ``"round_robin"`` (circle-method 1-factorization; n-1
    colors for even n, n for odd n) or ``"modular"`` (color of ij is
    ``(i + j) mod c``).
    """
    if scheme == "round_robin":
        if n < 2:
            raise InvalidParams("round_robin needs n >= 2", n=n)
        if n % 2 == 0:
            return ColoredCompleteGraph(n, _round_robin_even(n))
        full = ColoredCompleteGraph(n + 1, _round_robin_even(n + 1))
        return ColoredCompleteGraph.from_matrix(full.matrix[:n, :n])
    if scheme not in ("random", "modular"):
        raise InvalidParams(f"unknown coloring scheme {scheme!r}")
    if c is None or not 1 <= c <= comb(n, 2):
        raise InvalidColorCount(f"color count must lie in [1, {comb(n, 2)}]", c=c, n=n)
    if scheme == "random":
        rng = as_generator(seed, "generate_coloring")
        return ColoredCompleteGraph(n, rng.integers(0, c, size=comb(n, 2)))
    iu, ju = np.triu_indices(n, k=1)
    return ColoredCompleteGraph(n, (iu + ju) % c)


# --- patterns ----------------------------------------------------------------

@dataclass(frozen=True)
class PatternGraph:
    """A labeled simple graph on vertices ``0..num_vertices-1``.

    ``meta`` carries family-specific structure the extraction pipelines
    need, e.g. the vertex sequence of every path of a theta graph.
    """

    kind: str
    params: tuple[int, ...]
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def sides(self) -> tuple[frozenset[int], frozenset[int]]:
        """Proper 2-coloring of the vertices; raises if not bipartite."""
        adj = self.adjacency
        side = [-1] * self.num_vertices
        for root in range(self.num_vertices):
            if side[root] >= 0:
                continue
            side[root] = 0
            stack = [root]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        raise InvalidParams(f"pattern {self.kind}{self.params} is not bipartite")
        return (
            frozenset(v for v in range(self.num_vertices) if side[v] == 0),
            frozenset(v for v in range(self.num_vertices) if side[v] == 1),
        )

    @property
    def spec_string(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.params))}"


def _subdivided_clique(t: int) -> PatternGraph:
    labels = ["branch"] * t
    edges = []
    pair_vertex = {}
    for i, j in itertools.combinations(range(t), 2):
        s = len(labels)
        labels.append("subdivision")
        pair_vertex[(i, j)] = s
        edges += [(i, s), (j, s)]
    return PatternGraph("ktplus", (t,), len(labels), tuple(edges), tuple(labels),
                        {"pair_vertex": pair_vertex})


def _theta(a: int, b: int) -> PatternGraph:
    labels = ["branch", "branch"]
    edges = []
    paths = []
    for _ in range(b):
        path = [0]
        for _ in range(a - 1):
            path.append(len(labels))
            labels.append("path")
        path.append(1)
        edges += list(zip(path, path[1:]))
        paths.append(tuple(path))
    return PatternGraph("theta", (a, b), len(labels), tuple(edges), tuple(labels),
                        {"paths": tuple(paths)})


def _subdivided_bipartite(a: int, b: int, ell: int) -> PatternGraph:
    labels = ["left"] * a + ["right"] * b
    edges = []
    paths = {}
    for i in range(b):
        for j in range(a):
            path = [j]
            for _ in range(ell - 1):
                path.append(len(labels))
                labels.append("subdivision")
            path.append(a + i)
            edges += list(zip(path, path[1:]))
            paths[(j, i)] = tuple(path)
    return PatternGraph("kab_l", (a, b, ell), len(labels), tuple(edges), tuple(labels),
                        {"paths": paths})


def _cycle_star(a: int, k: int) -> PatternGraph:
    cyc = 2 * a
    edges = [(i, (i + 1) % cyc) for i in range(cyc)]
    edges = [(min(u, v), max(u, v)) for u, v in edges]
    labels = ["hub"] + ["cycle"] * (cyc - 1) + ["leaf"] * k
    edges += [(0, cyc + x) for x in range(k)]
    return PatternGraph("cycle_star", (a, k), cyc + k, tuple(edges), tuple(labels),
                        {"cycle": tuple(range(cyc)), "hub": 0,
                         "leaves": tuple(range(cyc, cyc + k))})


def _path(ell: int) -> PatternGraph:
    labels = tuple(f"pos{i}" for i in range(ell))
    return PatternGraph("path", (ell,), ell, tuple((i, i + 1) for i in range(ell - 1)), labels)


_KINDS = {
    "ktplus": (_subdivided_clique, 1),
    "theta": (_theta, 2),
    "kab_l": (_subdivided_bipartite, 3),
    "cycle_star": (_cycle_star, 2),
    "path": (_path, 1),
}


def make_pattern(kind: str, *params: int) -> PatternGraph:
    """Build a pattern family member.

    ``ktplus t`` (1-subdivided K_t), ``theta a b`` (b internally disjoint
    a-edge paths), ``kab_l a b l`` (K_{a,b} with l-edge paths), ``cycle_star
    a k`` (C_2a plus k pendant leaves on vertex 0), ``path l`` (path on l
    vertices).
    """
    if kind not in _KINDS:
        raise InvalidParams(f"unknown pattern kind {kind!r}")
    builder, arity = _KINDS[kind]
    if len(params) != arity:
        raise InvalidParams(f"{kind} takes {arity} parameters, got {len(params)}")
    params = tuple(int(x) for x in params)
    if kind == "ktplus" and params[0] < 3:
        raise InvalidParams("ktplus needs t >= 3")
    if kind == "theta" and min(params) < 2:
        raise InvalidParams("theta needs a, b >= 2")
    if kind == "kab_l" and (min(params[:2]) < 2 or params[2] < 1):
        raise InvalidParams("kab_l needs a, b >= 2 and l >= 1")
    if kind == "cycle_star" and (params[0] < 2 or params[1] < 0):
        raise InvalidParams("cycle_star needs a >= 2 and k >= 0")
    if kind == "path" and params[0] < 1:
        raise InvalidParams("path needs l >= 1")
    return builder(*params)


def parse_pattern(text: str) -> PatternGraph:
    """Parse the CLI form, e.g. ``"theta:3,2"`` or ``"ktplus:4"``."""
    kind, _, rest = text.partition(":")
    try:
        params = [int(x) for x in rest.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidParams(f"bad pattern parameters in {text!r}") from exc
    return make_pattern(kind.strip(), *params)


# --- subgraph search -----------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Injective map pattern vertex -> host vertex (``map[v]`` is the image of v)."""

    map: tuple
    pattern: PatternGraph

    def __getitem__(self, v: int):
        return self.map[v]

    def image_vertices(self) -> frozenset:
        return frozenset(self.map)

    def image_edges(self) -> frozenset:
        return frozenset(frozenset((self.map[u], self.map[v])) for u, v in self.pattern.edges)


@dataclass
class SearchResult:
    embeddings: list[Embedding]
    complete: bool
    budget_exhausted: bool
    nodes: int

    def __iter__(self):
        return iter(self.embeddings)

    def __len__(self):
        return len(self.embeddings)


def check_embedding(host: Mapping[Hashable, set], emb: Embedding) -> bool:
    if len(set(emb.map)) != len(emb.map):
        return False
    return all(emb.map[v] in host.get(emb.map[u], ()) for u, v in emb.pattern.edges)


def _search_order(pattern: PatternGraph) -> list[int]:
    adj = pattern.adjacency
    nv = pattern.num_vertices
    if nv == 0:
        return []
    order = []
    placed: set[int] = set()
    while len(order) < nv:
        best = max(
            (v for v in range(nv) if v not in placed),
            key=lambda v: (len(adj[v] & placed), len(adj[v]), -v),
        )
        order.append(best)
        placed.add(best)
    return order


class _Counter:
    __slots__ = ("nodes", "budget", "hit")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget
        self.hit = False


def iter_subgraphs(
    host: Mapping[Hashable, set],
    pattern: PatternGraph,
    budget: int | None = DEFAULT_BUDGET,
    distinct: str = "image",
    _counter: _Counter | None = None,
) -> Iterator[Embedding]:
    """Lazily enumerate embeddings of ``pattern`` into ``host``.

    With ``distinct="image"`` each copy (image vertex set + edge set) is
    produced once; interchangeable pattern vertices (same neighbourhood) are
    forced into increasing host order. ``distinct="map"`` yields every
    injective edge-preserving map.
    """
    if distinct not in ("image", "map"):
        raise InvalidParams(f"distinct must be 'image' or 'map', got {distinct!r}")
    counter = _counter if _counter is not None else _Counter(budget)
    adj = pattern.adjacency
    order = _search_order(pattern)
    nv = len(order)
    pos_of = {v: i for i, v in enumerate(order)}
    back = [[pos_of[w] for w in adj[v] if pos_of[w] < i] for i, v in enumerate(order)]
    need_deg = [len(adj[v]) for v in order]
    twin_prev = [-1] * nv
    if distinct == "image":
        last_seen: dict[frozenset, int] = {}
        for i, v in enumerate(order):
            key = adj[v]
            if key in last_seen:
                twin_prev[i] = last_seen[key]
            last_seen[key] = i
    rank = {v: k for k, v in enumerate(sorted(host))}
    host_deg = {v: len(ns) for v, ns in host.items()}
    by_rank = sorted(host, key=rank.__getitem__)

    image: list = [None] * nv
    used: set = set()
    seen: set = set()

    def candidates(i: int):
        if back[i]:
            pools = sorted((host[image[j]] for j in back[i]), key=len)
            cand = set(pools[0])
            for other in pools[1:]:
                cand &= other
            cand = sorted(cand, key=rank.__getitem__)
        else:
            cand = by_rank
        lo = rank[image[twin_prev[i]]] if twin_prev[i] >= 0 else -1
        d = need_deg[i]
        return [c for c in cand if c not in used and host_deg[c] >= d and rank[c] > lo]

    if nv == 0:
        yield Embedding((), pattern)
        return
    stack = [iter(candidates(0))]
    while stack:
        i = len(stack) - 1
        if image[i] is not None:
            used.discard(image[i])
            image[i] = None
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            continue
        counter.nodes += 1
        if counter.budget is not None and counter.nodes > counter.budget:
            counter.hit = True
            return
        image[i] = nxt
        used.add(nxt)
        if i + 1 == nv:
            mapping = [None] * nv
            for p, v in enumerate(order):
                mapping[v] = image[p]
            emb = Embedding(tuple(mapping), pattern)
            if distinct == "image":
                key = (emb.image_vertices(), emb.image_edges())
                if key in seen:
                    continue
                seen.add(key)
            yield emb
            continue
        stack.append(iter(candidates(i + 1)))


def find_subgraph(
    host: Mapping[Hashable, set],
    pattern: PatternGraph,
    limit: int | None = 1,
    budget: int | None = DEFAULT_BUDGET,
    distinct: str = "image",
) -> SearchResult:
    """Collect up to ``limit`` embeddings (``None`` for all).

    ``complete`` is true only when the whole search space was explored, in
    which case an empty result proves the pattern absent.
    """
    if limit is not None and limit < 1:
        raise InvalidParams("limit must be >= 1", limit=limit)
    counter = _Counter(budget)
    out: list[Embedding] = []
    gen = iter_subgraphs(host, pattern, budget, distinct, _counter=counter)
    stopped_early = False
    for emb in gen:
        out.append(emb)
        if limit is not None and len(out) >= limit:
            stopped_early = True
            break
    gen.close()
    complete = not stopped_early and not counter.hit
    return SearchResult(out, complete, counter.hit, counter.nodes)
