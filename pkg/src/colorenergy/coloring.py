"""Edge-colored complete graphs, repetition counting and (p,q)-verification.

A coloring of K_n is stored as one integer color id per unordered pair
``(i, j)``, ``i < j``, with the pairs listed in lexicographic order. Color ids
are dense: every id in ``0..num_colors-1`` is used by at least one edge.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._rng import as_generator
from .errors import InvalidParams, MalformedColoring, SubsetTooSmall, VertexOutOfRange

__all__ = [
    "ColoredCompleteGraph",
    "PQParams",
    "PQVerdict",
    "RepetitionCount",
    "canonical_labels",
    "dumps_coloring",
    "is_pq_coloring",
    "is_proper",
    "load_coloring",
    "loads_coloring",
    "max_color_degree",
    "pair_index",
    "properize",
    "repetitions_of_subset",
    "save_coloring",
    "subgraph_repetitions",
]


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the pair {i, j} in the lexicographic list of C(n,2) pairs."""
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def canonical_labels(labels: Sequence) -> np.ndarray:
    """Map arbitrary hashable labels to dense ids, preserving sorted order."""
    uniq = sorted(set(labels), key=lambda x: (type(x).__name__, x))
    index = {lab: k for k, lab in enumerate(uniq)}
    return np.fromiter((index[lab] for lab in labels), dtype=np.int64, count=len(labels))


class ColoredCompleteGraph:
    """A total edge-coloring of K_n.

    Immutable after construction. ``matrix[i, j]`` is the color of ``ij``
    (``-1`` on the diagonal) and ``classes[c]`` lists the edges of color ``c``
    in lexicographic order.
    """

    __slots__ = ("n", "edge_colors", "matrix", "num_colors", "classes", "_pairs")

    def __init__(self, n: int, edge_colors: Sequence, *, canonicalize: bool = True):
        n = int(n)
        if n < 1:
            raise MalformedColoring("n must be at least 1", n=n)
        labels = list(edge_colors.tolist() if isinstance(edge_colors, np.ndarray) else edge_colors)
        if len(labels) != comb(n, 2):
            raise MalformedColoring(
                f"expected {comb(n, 2)} edge colors for n={n}, got {len(labels)}", n=n
            )
        if canonicalize:
            colors = canonical_labels(labels)
        else:
            colors = np.asarray(labels, dtype=np.int64)
            used = np.unique(colors)
            if len(colors) and (used[0] != 0 or used[-1] != len(used) - 1):
                raise MalformedColoring("color ids are not dense 0..|C|-1")
        self.n = n
        colors.flags.writeable = False
        self.edge_colors = colors
        iu, ju = np.triu_indices(n, k=1)
        mat = np.full((n, n), -1, dtype=np.int64)
        mat[iu, ju] = colors
        mat[ju, iu] = colors
        mat.flags.writeable = False
        self.matrix = mat
        self.num_colors = int(colors.max()) + 1 if len(colors) else 0
        classes: list[list[tuple[int, int]]] = [[] for _ in range(self.num_colors)]
        pairs = list(zip(iu.tolist(), ju.tolist()))
        for (i, j), c in zip(pairs, colors.tolist()):
            classes[c].append((i, j))
        self.classes = tuple(tuple(cl) for cl in classes)
        self._pairs = tuple(pairs)

    # construction helpers -------------------------------------------------
    @classmethod
    def from_function(cls, n: int, chi) -> "ColoredCompleteGraph":
        return cls(n, [chi(i, j) for i, j in itertools.combinations(range(n), 2)])

    @classmethod
    def from_matrix(cls, matrix) -> "ColoredCompleteGraph":
        m = np.asarray(matrix)
        n = m.shape[0]
        iu, ju = np.triu_indices(n, k=1)
        if not np.array_equal(m[iu, ju], m[ju, iu]):
            raise MalformedColoring("color matrix is not symmetric")
        return cls(n, m[iu, ju].tolist())

    # queries --------------------------------------------------------------
    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._pairs

    @property
    def num_edges(self) -> int:
        return len(self._pairs)

    def chi(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidParams("loops are not edges", vertex=i)
        return int(self.matrix[i, j])

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.edge_colors, minlength=self.num_colors)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColoredCompleteGraph)
            and self.n == other.n
            and np.array_equal(self.edge_colors, other.edge_colors)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edge_colors.tobytes()))

    def __repr__(self) -> str:
        return f"ColoredCompleteGraph(n={self.n}, num_colors={self.num_colors})"

    def to_json(self) -> dict:
        return {"n": self.n, "num_colors": self.num_colors, "edges": self.edge_colors.tolist()}


@dataclass(frozen=True)
class PQParams:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2:
            raise InvalidParams("p must be at least 2", p=self.p)
        if not 1 <= self.q <= comb(self.p, 2):
            raise InvalidParams(f"q must lie in [1, C(p,2)] = [1, {comb(self.p, 2)}]", q=self.q)

    @property
    def max_repetitions(self) -> int:
        """Largest repetition count a p-clique may carry under this threshold."""
        return comb(self.p, 2) - self.q


@dataclass(frozen=True)
class RepetitionCount:
    subset: tuple[int, ...]
    distinct_colors: int
    repetitions: int


@dataclass(frozen=True)
class PQVerdict:
    ok: bool
    violator: RepetitionCount | None
    mode: str
    checked: int

    def __bool__(self) -> bool:
        return self.ok


def _check_vertices(g: ColoredCompleteGraph, s: Iterable[int]) -> tuple[int, ...]:
    verts = tuple(sorted(set(int(v) for v in s)))
    for v in verts:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {g.n})", vertex=v)
    return verts


def repetitions_of_subset(g: ColoredCompleteGraph, s: Iterable[int]) -> RepetitionCount:
    verts = _check_vertices(g, s)
    if len(verts) < 2:
        raise SubsetTooSmall("subset needs at least two vertices", size=len(verts))
    idx = np.asarray(verts)
    sub = g.matrix[np.ix_(idx, idx)]
    iu, ju = np.triu_indices(len(verts), k=1)
    distinct = len(np.unique(sub[iu, ju]))
    return RepetitionCount(verts, distinct, comb(len(verts), 2) - distinct)


def subgraph_repetitions(g: ColoredCompleteGraph, edges: Iterable[tuple[int, int]]) -> int:
    """Repetitions carried by an edge set: ``|E| - |colors(E)|``."""
    es = {(min(u, v), max(u, v)) for u, v in edges}
    return len(es) - len({int(g.matrix[u, v]) for u, v in es})


def _distinct_counts(g: ColoredCompleteGraph, subsets: np.ndarray) -> np.ndarray:
    p = subsets.shape[1]
    iu, ju = np.triu_indices(p, k=1)
    cols = g.matrix[subsets[:, iu], subsets[:, ju]]
    cols.sort(axis=1)
    return 1 + np.count_nonzero(np.diff(cols, axis=1), axis=1)


def is_pq_coloring(
    g: ColoredCompleteGraph,
    params: PQParams | tuple[int, int],
    mode: str = "exhaustive",
    trials: int = 1000,
    seed=0,
    chunk: int = 1 << 15,
) -> PQVerdict:
    """Check that every p-subset spans at least q colors.

    ``mode="exhaustive"`` walks the p-subsets in lexicographic order and
    reports the first violator. ``mode="sampled"`` draws ``trials`` uniform
    p-subsets with replacement; a clean sampled run is not a proof.
    """
    if not isinstance(params, PQParams):
        params = PQParams(*params)
    p, q = params.p, params.q
    if p > g.n:
        raise InvalidParams(f"p={p} exceeds n={g.n}", p=p, n=g.n)
    if mode == "exhaustive":
        combos = itertools.combinations(range(g.n), p)
        checked = 0
        while True:
            block = list(itertools.islice(combos, chunk))
            if not block:
                return PQVerdict(True, None, mode, checked)
            arr = np.asarray(block, dtype=np.int64)
            counts = _distinct_counts(g, arr)
            bad = np.flatnonzero(counts < q)
            if bad.size:
                k = int(bad[0])
                checked += k + 1
                sub = tuple(int(v) for v in arr[k])
                d = int(counts[k])
                return PQVerdict(False, RepetitionCount(sub, d, comb(p, 2) - d), mode, checked)
            checked += len(block)
    if mode == "sampled":
        if trials < 1:
            raise InvalidParams("sampled mode needs trials >= 1", trials=trials)
        rng = as_generator(seed, "is_pq_coloring")
        arr = np.sort(
            np.stack([rng.choice(g.n, size=p, replace=False) for _ in range(trials)]), axis=1
        )
        counts = _distinct_counts(g, arr)
        bad = np.flatnonzero(counts < q)
        if bad.size:
            k = int(bad[0])
            sub = tuple(int(v) for v in arr[k])
            d = int(counts[k])
            return PQVerdict(False, RepetitionCount(sub, d, comb(p, 2) - d), mode, k + 1)
        return PQVerdict(True, None, mode, trials)
    raise InvalidParams(f"unknown mode {mode!r}")


def max_color_degree(g: ColoredCompleteGraph) -> int:
    if g.n < 2:
        return 0
    best = 0
    for v in range(g.n):
        row = np.delete(g.matrix[v], v)
        best = max(best, int(np.bincount(row).max()))
    return best


def is_proper(g: ColoredCompleteGraph) -> bool:
    """No two edges sharing an endpoint have the same color."""
    return max_color_degree(g) <= 1


def properize(g: ColoredCompleteGraph) -> ColoredCompleteGraph:
    """Split every color class into matchings.

    Each class is greedily edge-colored in lexicographic edge order with its
    own fresh palette. A class of maximum degree D needs at most 2D-1 colors,
    so the output uses at most ``num_colors * (2*max_color_degree - 1)``.
    """
    new = np.empty(g.num_edges, dtype=np.int64)
    offset = 0
    for cls in g.classes:
        at_vertex: dict[int, set[int]] = {}
        local_max = -1
        for u, v in cls:
            busy = at_vertex.setdefault(u, set()) | at_vertex.setdefault(v, set())
            c = 0
            while c in busy:
                c += 1
            at_vertex[u].add(c)
            at_vertex[v].add(c)
            new[pair_index(g.n, u, v)] = offset + c
            local_max = max(local_max, c)
        offset += local_max + 1
    return ColoredCompleteGraph(g.n, new)


# --- JSON interchange ------------------------------------------------------

def loads_coloring(text: str | bytes | dict) -> ColoredCompleteGraph:
    data = json.loads(text) if isinstance(text, (str, bytes)) else text
    try:
        n = data["n"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise MalformedColoring(f"missing field: {exc}") from exc
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedColoring("field 'n' must be an integer")
    g = ColoredCompleteGraph(n, edges)
    declared = data.get("num_colors")
    if declared is not None and declared != g.num_colors:
        raise MalformedColoring(
            f"num_colors={declared} but edges use {g.num_colors} distinct colors"
        )
    return g


def dumps_coloring(g: ColoredCompleteGraph) -> str:
    return json.dumps(g.to_json(), sort_keys=True)


def load_coloring(path) -> ColoredCompleteGraph:
    return loads_coloring(Path(path).read_text())


def save_coloring(g: ColoredCompleteGraph, path) -> None:
    Path(path).write_text(dumps_coloring(g) + "\n")
