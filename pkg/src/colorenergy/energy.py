"""Color energy graphs and the power-mean color-count bound.

The r-th energy graph of a coloring lives on r-tuples of vertices; two
tuples are adjacent when all r coordinate pairs are edges of one common
color. A color class of size m contributes exactly ``2**(r-1) * m**r``
edges, which is ``edge_count_exact``. The bound itself is stated in terms
of ``sum_c m_c**r`` (``paper_edge_statistic``), which counts each energy
edge with a fixed orientation per coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .coloring import ColoredCompleteGraph
from .errors import CapacityExceeded, InvalidParams

__all__ = [
    "EnergyGraph",
    "HolderBound",
    "build_energy_graph",
    "color_energy",
    "holder_lower_bound",
    "power_sum",
]

DEFAULT_MAX_VERTICES = 10**6
DEFAULT_MAX_EDGES = 5 * 10**6

Tuple = tuple[int, ...]


def power_sum(g: ColoredCompleteGraph, r: int) -> int:
    return sum(int(m) ** r for m in g.class_sizes())


class EnergyGraph:
    """The r-th color energy graph, materialized or answered from color classes."""

    def __init__(self, g: ColoredCompleteGraph, r: int, materialize: bool,
                 vertices=None, edges=None):
        self.base = g
        self.r = r
        self.materialized = materialize
        self._vertices = vertices
        self._edges = edges
        self._adj = None

    @property
    def mode(self) -> str:
        return "materialize" if self.materialized else "implicit"

    @property
    def num_vertices(self) -> int:
        return self.base.n ** self.r

    @property
    def edge_count_exact(self) -> int:
        return 2 ** (self.r - 1) * power_sum(self.base, self.r)

    @property
    def paper_edge_statistic(self) -> int:
        return power_sum(self.base, self.r)

    @property
    def vertices(self) -> list[Tuple]:
        if self._vertices is None:
            raise CapacityExceeded("implicit energy graph does not list its vertices")
        return self._vertices

    @property
    def edges(self) -> list[tuple[Tuple, Tuple, int]]:
        """``(v, u, color)`` with ``v < u`` lexicographically."""
        if self._edges is None:
            raise CapacityExceeded("implicit energy graph does not list its edges")
        return self._edges

    def edge_color(self, v: Tuple, u: Tuple) -> int | None:
        """Common color of all coordinate pairs, or ``None`` if not adjacent."""
        if len(v) != self.r or len(u) != self.r:
            raise InvalidParams("tuple length must equal r", r=self.r)
        m = self.base.matrix
        first = None
        for a, b in zip(v, u):
            if a == b:
                return None
            c = int(m[a, b])
            if first is None:
                first = c
            elif c != first:
                return None
        return first

    def has_edge(self, v: Tuple, u: Tuple) -> bool:
        return self.edge_color(v, u) is not None

    def neighbors(self, v: Tuple) -> Iterator[Tuple]:
        if self.materialized:
            if self._adj is None:
                adj: dict[Tuple, set[Tuple]] = {}
                for a, b, _ in self._edges:
                    adj.setdefault(a, set()).add(b)
                    adj.setdefault(b, set()).add(a)
                self._adj = adj
            yield from sorted(self._adj.get(v, ()))
            return
        m = self.base.matrix
        n = self.base.n
        seen_colors = {int(m[v[0], w]) for w in range(n) if w != v[0]}
        for c in sorted(seen_colors):
            options = [[w for w in range(n) if w != x and m[x, w] == c] for x in v]
            yield from itertools.product(*options)

    def edges_of_color(self, c: int) -> int:
        m = len(self.base.classes[c])
        return 2 ** (self.r - 1) * m ** self.r


def _enumerate_edges(g: ColoredCompleteGraph, r: int) -> list[tuple[Tuple, Tuple, int]]:
    out = []
    for c, cls in enumerate(g.classes):
        ordered = [(u, v) for u, v in cls] + [(v, u) for u, v in cls]
        for combo in itertools.product(ordered, repeat=r):
            a = tuple(x for x, _ in combo)
            b = tuple(y for _, y in combo)
            if a < b:
                out.append((a, b, c))
    out.sort()
    return out


def build_energy_graph(
    g: ColoredCompleteGraph,
    r: int,
    mode: str = "implicit",
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> EnergyGraph:
    if r < 2:
        raise InvalidParams("energy graph order r must be >= 2", r=r)
    if mode == "implicit":
        return EnergyGraph(g, r, False)
    if mode != "materialize":
        raise InvalidParams(f"unknown mode {mode!r}")
    nv = g.n ** r
    ne = 2 ** (r - 1) * power_sum(g, r)
    if nv > max_vertices or ne > max_edges:
        raise CapacityExceeded(
            f"materializing needs {nv} vertices and {ne} edges; use mode='implicit'",
            vertices=nv, edges=ne,
        )
    verts = list(itertools.product(range(g.n), repeat=r))
    return EnergyGraph(g, r, True, verts, _enumerate_edges(g, r))


def color_energy(g: ColoredCompleteGraph) -> int:
    """Ordered quadruples (v1, v2, v3, v4), both pairs edges of equal color."""
    return 4 * power_sum(g, 2)


@dataclass(frozen=True)
class HolderBound:
    """``num_colors >= (num_edges**r / power_sum) ** (1/(r-1))``.

    ``certificate_ok`` is the same inequality cleared of roots and
    denominators: ``num_colors**(r-1) * power_sum >= num_edges**r``.
    """

    r: int
    num_colors: int
    num_edges: int
    power_sum: int
    ratio: Fraction
    certificate_ok: bool

    @property
    def exponent(self) -> Fraction:
        return Fraction(1, self.r - 1)

    @property
    def bound_float(self) -> float:
        return float(self.ratio) ** float(self.exponent)

    @property
    def is_tight(self) -> bool:
        return self.num_colors ** (self.r - 1) * self.power_sum == self.num_edges ** self.r

    def bound_at_least(self, k: int) -> bool:
        """Exact test of ``bound >= k``."""
        return self.ratio >= Fraction(k) ** (self.r - 1)


def holder_lower_bound(g: ColoredCompleteGraph, r: int) -> HolderBound:
    if r < 2:
        raise InvalidParams("r must be >= 2", r=r)
    ps = power_sum(g, r)
    e = g.num_edges
    if ps == 0:
        raise InvalidParams("coloring has no edges")
    c = g.num_colors
    return HolderBound(r, c, e, ps, Fraction(e**r, ps), c ** (r - 1) * ps >= e**r)
