"""Pruned energy graphs.

A pruned graph lives on ``V_1 x ... x V_r`` for a balanced partition of the
base vertices, keeps only energy edges whose i-th coordinate pair crosses a
fixed bipartition ``V_i = V_i' | V_i''``, and is thinned until any two
tuples at distance at most two differ in every coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ._rng import as_generator
from .coloring import ColoredCompleteGraph
from .energy import power_sum
from .errors import CapacityExceeded, InvalidParams

__all__ = [
    "Partition",
    "PrunedEnergyGraph",
    "PruneReport",
    "Violation",
    "build_pruned",
    "random_partition",
    "verify_pruned",
]

Tuple = tuple[int, ...]
DEFAULT_MAX_CANDIDATES = 2 * 10**6


@dataclass(frozen=True)
class Partition:
    """Coordinate classes ``classes[i]`` and their two sides ``sides[i]``."""

    classes: tuple[tuple[int, ...], ...]
    sides: tuple[tuple[frozenset, frozenset], ...]

    @property
    def r(self) -> int:
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        return {v: i for i, cls in enumerate(self.classes) for v in cls}


def random_partition(n: int, r: int, seed=0) -> Partition:
    """Uniform balanced partition into r classes, each split into random halves."""
    if r < 2:
        raise InvalidParams("r must be >= 2", r=r)
    if n < r:
        raise InvalidParams(f"need n >= r to fill {r} classes", n=n, r=r)
    rng = as_generator(seed, "prune.partition")
    perm = rng.permutation(n).tolist()
    classes = tuple(tuple(sorted(perm[i::r])) for i in range(r))
    sides = []
    for cls in classes:
        shuffled = rng.permutation(len(cls)).tolist()
        half = (len(cls) + 1) // 2
        first = frozenset(cls[k] for k in shuffled[:half])
        sides.append((first, frozenset(cls) - first))
    return Partition(classes, tuple(sides))


@dataclass
class PrunedEnergyGraph:
    r: int
    n: int
    partition: Partition
    edges: tuple[tuple[Tuple, Tuple], ...]
    seed: object = None
    base: ColoredCompleteGraph | None = None
    stats: dict = field(default_factory=dict)
    _adj: dict | None = field(default=None, repr=False, compare=False)
    _class_sets: list | None = field(default=None, repr=False, compare=False)

    @property
    def classes(self):
        return self.partition.classes

    @property
    def sides(self):
        return self.partition.sides

    @property
    def adjacency(self) -> dict[Tuple, set[Tuple]]:
        if self._adj is None:
            adj: dict[Tuple, set[Tuple]] = {}
            for a, b in self.edges:
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            self._adj = adj
        return self._adj

    def has_edge(self, a: Tuple, b: Tuple) -> bool:
        return b in self.adjacency.get(a, ())

    def neighbors(self, a: Tuple) -> set[Tuple]:
        return self.adjacency.get(a, set())

    def edge_color(self, a: Tuple, b: Tuple) -> int:
        return int(self.base.matrix[a[0], b[0]])

    def contains_vertex(self, t: Tuple) -> bool:
        if self._class_sets is None:
            self._class_sets = [frozenset(c) for c in self.classes]
        return len(t) == self.r and all(x in cls for x, cls in zip(t, self._class_sets))

    @property
    def num_vertices(self) -> int:
        out = 1
        for c in self.classes:
            out *= len(c)
        return out

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "class_sizes": [len(c) for c in self.classes],
            "bipartition_sizes": [[len(a), len(b)] for a, b in self.sides],
            "edges_before": {
                "paper_edge_statistic": self.stats.get("paper_edge_statistic"),
                "edge_count_exact": self.stats.get("edge_count_exact"),
            },
            "edges_after": len(self.edges),
            "retention_fraction": self.stats.get("retention_fraction"),
        }


def _crossing_pairs(g: ColoredCompleteGraph, part: Partition):
    """Per color, per coordinate: oriented pairs (side-0 end, side-1 end)."""
    out: dict[int, list[list[tuple[int, int]]]] = {}
    m = g.matrix
    for i, (s0, s1) in enumerate(part.sides):
        for x in sorted(s0):
            for y in sorted(s1):
                c = int(m[x, y])
                out.setdefault(c, [[] for _ in range(part.r)])[i].append((x, y))
    return out


def _candidate_edges(g, part, max_candidates):
    cross = _crossing_pairs(g, part)
    total = 0
    for per in cross.values():
        if all(per):
            k = len(per[0])
            for lst in per[1:]:
                k *= 2 * len(lst)
            total += k
    if total > max_candidates:
        raise CapacityExceeded(f"{total} candidate edges exceed cap {max_candidates}", edges=total)
    edges = set()
    for c in sorted(cross):
        per = cross[c]
        if not all(per):
            continue
        oriented = [per[0]] + [lst + [(y, x) for x, y in lst] for lst in per[1:]]
        for combo in product(*oriented):
            a = tuple(x for x, _ in combo)
            b = tuple(y for _, y in combo)
            edges.add((a, b) if a < b else (b, a))
    return edges, total


def _thin(adj: dict[Tuple, set[Tuple]], r: int) -> int:
    removed = 0
    for z in sorted(adj):
        nbrs = sorted(adj[z])
        if len(nbrs) < 2:
            continue
        least = [dict() for _ in range(r)]
        for y in nbrs:
            for i in range(r):
                least[i].setdefault(y[i], y)
        for y in nbrs:
            if any(least[i][y[i]] != y for i in range(r)):
                adj[z].discard(y)
                adj[y].discard(z)
                removed += 1
    return removed


def _sweep(adj: dict[Tuple, set[Tuple]], r: int) -> int:
    removed = 0
    changed = True
    while changed:
        changed = False
        for z in sorted(adj):
            firsts = [dict() for _ in range(r)]
            for y in sorted(adj[z]):
                clash = any(y[i] == z[i] for i in range(r)) or any(
                    y[i] in firsts[i] for i in range(r)
                )
                if clash:
                    adj[z].discard(y)
                    adj[y].discard(z)
                    removed += 1
                    changed = True
                    continue
                for i in range(r):
                    firsts[i][y[i]] = y
    return removed


def build_pruned(
    g: ColoredCompleteGraph,
    r: int,
    seed=0,
    partition: Partition | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> PrunedEnergyGraph:
    """Seeded construction of a pruned r-th energy graph.

    Keeps energy edges whose every coordinate crosses its bipartition, then
    for each tuple z (lexicographic order), each coordinate i and value v
    keeps only the least neighbour of z with i-th coordinate v. A final
    sweep removes anything still violating the distance-2 condition, and
    the result is verified before it is returned.
    """
    part = partition if partition is not None else random_partition(g.n, r, seed)
    if part.r != r:
        raise InvalidParams("partition has the wrong number of classes", r=r)
    edges, _ = _candidate_edges(g, part, max_candidates)
    adj: dict[Tuple, set[Tuple]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    thinned = _thin(adj, r)
    swept = _sweep(adj, r)
    kept = tuple(sorted((a, b) for a in adj for b in adj[a] if a < b))
    exact = 2 ** (r - 1) * power_sum(g, r)
    pg = PrunedEnergyGraph(
        r=r, n=g.n, partition=part, edges=kept, seed=seed, base=g,
        stats={
            "paper_edge_statistic": power_sum(g, r),
            "edge_count_exact": exact,
            "crossing_candidates": len(edges),
            "thinned": thinned,
            "swept": swept,
            "retention_fraction": len(kept) / exact if exact else 0.0,
        },
    )
    report = verify_pruned(pg)
    if not report.ok:
        raise AssertionError(f"pruned graph failed verification: {report.violations[:3]}")
    return pg


# --- verification -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    property: str
    witness: tuple
    message: str


@dataclass
class PruneReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def properties(self) -> set[str]:
        return {v.property for v in self.violations}


def verify_pruned(pg: PrunedEnergyGraph) -> PruneReport:
    """Exhaustively check the three structural properties.

    Property "1": balanced partition and all tuples in the product.
    Property "2": each coordinate pair of each edge crosses its bipartition.
    Property "3": tuples at distance 1 or 2 differ in every coordinate.
    Property "energy": each edge is a genuine energy edge of the base coloring.
    """
    out: list[Violation] = []
    r, n = pg.r, pg.n
    classes = pg.classes
    seen: set[int] = set()
    for i, cls in enumerate(classes):
        if not n // r <= len(cls) <= -(-n // r):
            out.append(Violation("1", (i, len(cls)), f"class {i} has unbalanced size {len(cls)}"))
        if seen & set(cls):
            out.append(Violation("1", (i,), f"class {i} overlaps an earlier class"))
        seen |= set(cls)
    if seen != set(range(n)):
        out.append(Violation("1", tuple(sorted(set(range(n)) ^ seen)), "classes do not cover V"))
    for i, (s0, s1) in enumerate(pg.sides):
        if (s0 | s1) != set(classes[i]) or (s0 & s1):
            out.append(Violation("2", (i,), f"sides of class {i} do not partition it"))
    class_sets = [set(c) for c in classes]
    for a, b in pg.edges:
        for t in (a, b):
            if len(t) != r or any(x not in cs for x, cs in zip(t, class_sets)):
                out.append(Violation("1", (t,), f"tuple {t} is outside V_1 x ... x V_r"))
        for i, (s0, s1) in enumerate(pg.sides):
            x, y = a[i], b[i]
            if not ((x in s0 and y in s1) or (x in s1 and y in s0)):
                out.append(Violation("2", (a, b, i), f"coordinate {i} of edge does not cross"))
        if any(x == y for x, y in zip(a, b)):
            out.append(Violation("3", (a, b), "adjacent tuples share a coordinate"))
        if pg.base is not None:
            cols = {int(pg.base.matrix[x, y]) for x, y in zip(a, b) if x != y}
            if len(cols) != 1:
                out.append(Violation("energy", (a, b), "coordinate pairs are not one color"))
    for z, nbrs in pg.adjacency.items():
        for i in range(r):
            first: dict[int, Tuple] = {}
            for y in sorted(nbrs):
                if y[i] in first:
                    out.append(Violation(
                        "3", (first[y[i]], y, z),
                        f"tuples at distance 2 via {z} share coordinate {i}",
                    ))
                else:
                    first[y[i]] = y
    return PruneReport(out)
