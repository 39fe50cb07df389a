"""Colorings with r planted, color-isomorphic copies of a bipartite pattern.

Copy k of the pattern sits inside coordinate class ``V_k`` with the
pattern's two sides on the two sides of the class, and every pattern edge
gets one fresh color shared by its r copies. Such a copy survives pruning
intact (each of its colors has exactly r edges), so every extraction
pipeline has something to find.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from ._rng import as_generator
from .coloring import ColoredCompleteGraph, pair_index
from .errors import InvalidParams
from .gen import PatternGraph
from .prune import Partition

__all__ = ["PlantedInstance", "planted_coloring"]


@dataclass(frozen=True)
class PlantedInstance:
    g: ColoredCompleteGraph
    partition: Partition
    copies: tuple[tuple[int, ...], ...]
    pattern: PatternGraph

    @property
    def r(self) -> int:
        return len(self.copies)

    def tuple_of(self, v: int) -> tuple[int, ...]:
        """The pruned-graph vertex carrying pattern vertex v in every coordinate."""
        return tuple(copy[v] for copy in self.copies)

    def planted_edges(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(self.tuple_of(u), self.tuple_of(v)) for u, v in self.pattern.edges]


def planted_coloring(
    n: int,
    pattern: PatternGraph,
    r: int,
    seed=0,
    filler_palette: int | None = None,
) -> PlantedInstance:
    """Plant r vertex-disjoint copies of ``pattern`` into a random coloring of K_n.

    Pattern edge j receives color j in every copy; all other edges are iid
    uniform over ``filler_palette`` further colors (default ``C(n, 2)``).
    """
    if r < 2:
        raise InvalidParams("r must be >= 2", r=r)
    side_a, side_b = pattern.sides()
    if pattern.num_vertices > n // r:
        raise InvalidParams(
            f"{r} copies of a {pattern.num_vertices}-vertex pattern need n >= "
            f"{r * pattern.num_vertices}", n=n,
        )
    rng = as_generator(seed, "planted_coloring")
    perm = rng.permutation(n).tolist()
    classes = tuple(tuple(sorted(perm[k::r])) for k in range(r))
    sa, sb = sorted(side_a), sorted(side_b)
    copies = []
    sides = []
    for cls in classes:
        order = [cls[i] for i in rng.permutation(len(cls)).tolist()]
        phi = [0] * pattern.num_vertices
        for v, x in zip(sa + sb, order):
            phi[v] = x
        rest = order[pattern.num_vertices:]
        cut = max(0, (len(cls) + 1) // 2 - len(sa))
        first = frozenset([phi[v] for v in sa] + rest[:cut])
        copies.append(tuple(phi))
        sides.append((first, frozenset(cls) - first))
    num_pattern_edges = len(pattern.edges)
    palette = comb(n, 2) if filler_palette is None else int(filler_palette)
    if palette < 1:
        raise InvalidParams("filler palette must be positive", palette=palette)
    colors = rng.integers(num_pattern_edges, num_pattern_edges + palette, size=comb(n, 2))
    for j, (u, v) in enumerate(pattern.edges):
        for phi in copies:
            colors[pair_index(n, phi[u], phi[v])] = j
    g = ColoredCompleteGraph(n, np.asarray(colors))
    return PlantedInstance(g, Partition(classes, tuple(sides)), tuple(copies), pattern)
