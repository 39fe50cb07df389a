"""Exact f(n, p, q) for tiny n, and the exponent table of the known bounds.

``exact_f`` runs iterative deepening on the number of colors. Each level is
a backtracking search over the edges in lexicographic order; a new color
id may only be introduced as ``max_used + 1``, which removes color-renaming
symmetry. A branch is cut as soon as some p-subset through the current
edge can no longer reach q colors even if all its unassigned edges got
fresh ones.
"""

from __future__ import annotations

import itertools
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np

from .coloring import ColoredCompleteGraph, PQParams, is_pq_coloring, pair_index
from .errors import CapExceeded, ConstraintViolated, InvalidParams

__all__ = [
    "ExactResult",
    "ExponentEntry",
    "THEOREMS",
    "exact_f",
    "exponent_entry",
    "exponent_table",
    "lll_exponent",
    "search_exhausts",
]


def default_cap(p: int) -> int:
    return 7 if p <= 3 else 6


@dataclass(frozen=True)
class ExactResult:
    n: int
    p: int
    q: int
    f_value: int
    witness_coloring: ColoredCompleteGraph
    nodes_explored: int
    nodes_per_level: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "n": self.n, "p": self.p, "q": self.q, "f_value": self.f_value,
            "witness_coloring": self.witness_coloring.to_json(),
            "nodes_explored": self.nodes_explored,
            "nodes_per_level": list(self.nodes_per_level),
        }


class _Search:
    def __init__(self, n: int, p: int, q: int):
        self.n, self.p, self.q = n, p, q
        self.edges = list(itertools.combinations(range(n), 2))
        self.subsets = [
            [pair_index(n, i, j) for i, j in itertools.combinations(s, 2)]
            for s in itertools.combinations(range(n), p)
        ]
        self.through: list[list[int]] = [[] for _ in self.edges]
        for k, sub in enumerate(self.subsets):
            for e in sub:
                self.through[e].append(k)
        self.nodes = 0

    def run(self, colors: int):
        """A coloring with at most ``colors`` colors, or ``None`` after exhausting."""
        m = len(self.edges)
        assign = [-1] * m
        # per subset: multiset of assigned colors and number of unassigned edges
        counts = [dict() for _ in self.subsets]
        missing = [comb(self.p, 2)] * len(self.subsets)
        q = self.q
        through = self.through

        def place(e, c):
            assign[e] = c
            ok = True
            for k in through[e]:
                cnt = counts[k]
                cnt[c] = cnt.get(c, 0) + 1
                missing[k] -= 1
                if len(cnt) + missing[k] < q:
                    ok = False
            return ok

        def remove(e, c):
            assign[e] = -1
            for k in through[e]:
                cnt = counts[k]
                if cnt[c] == 1:
                    del cnt[c]
                else:
                    cnt[c] -= 1
                missing[k] += 1

        # explicit stack of (edge index, next color to try, max used before this edge)
        stack = [(0, 0, -1)]
        while stack:
            e, c, max_used = stack.pop()
            if e == m:
                return list(assign)
            if assign[e] >= 0:
                remove(e, assign[e])
            limit = min(colors - 1, max_used + 1)
            while c <= limit:
                self.nodes += 1
                if place(e, c):
                    stack.append((e, c + 1, max_used))
                    stack.append((e + 1, 0, max(max_used, c)))
                    break
                remove(e, c)
                c += 1
        return None


def _cache_key(n, p, q) -> str:
    return f"{n},{p},{q}"


def _load_cache(path: Path) -> dict:
    if path.exists():
        return json.loads(path.read_text())
    return {}


def _store_cache(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
    os.replace(tmp, path)


def exact_f(n: int, p: int, q: int, cap: int | None = None, cache=None) -> ExactResult:
    """Minimum number of colors of a (p, q)-coloring of K_n.

    ``cache`` is an optional JSON file path; cached entries are re-verified
    (witness check only) when read.
    """
    PQParams(p, q)
    if p > n:
        raise InvalidParams(f"p={p} exceeds n={n}", p=p, n=n)
    cap = default_cap(p) if cap is None else cap
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the exact-search cap {cap} for p={p}", n=n, cap=cap)
    key = _cache_key(n, p, q)
    cache_path = Path(cache) if cache is not None else None
    if cache_path is not None:
        data = _load_cache(cache_path)
        if key in data:
            entry = data[key]
            g = ColoredCompleteGraph(n, entry["witness_edges"])
            if g.num_colors == entry["f_value"] and is_pq_coloring(g, (p, q)).ok:
                return ExactResult(n, p, q, entry["f_value"], g, entry["nodes_explored"],
                                   tuple(entry.get("nodes_per_level", ())))
    search = _Search(n, p, q)
    per_level = []
    for colors in range(1, comb(n, 2) + 1):
        before = search.nodes
        found = search.run(colors)
        per_level.append(search.nodes - before)
        if found is not None:
            g = ColoredCompleteGraph(n, np.asarray(found))
            result = ExactResult(n, p, q, g.num_colors, g, search.nodes, tuple(per_level))
            break
    else:  # pragma: no cover - the rainbow coloring always works
        raise AssertionError("rainbow coloring not found")
    if cache_path is not None:
        data = _load_cache(cache_path)
        data[key] = {
            "f_value": result.f_value,
            "witness_edges": result.witness_coloring.edge_colors.tolist(),
            "nodes_explored": result.nodes_explored,
            "nodes_per_level": list(result.nodes_per_level),
        }
        _store_cache(cache_path, data)
    return result


def search_exhausts(n: int, p: int, q: int, colors: int) -> bool:
    """True when no (p, q)-coloring of K_n with at most ``colors`` colors exists."""
    return _Search(n, p, q).run(colors) is None


# --- exponent table ------------------------------------------------------------------

def lll_exponent(p: int, q: int) -> Fraction:
    """Exponent of the local-lemma upper bound ``n**((p-2)/(C(p,2)-q+1))``."""
    return Fraction(p - 2, comb(p, 2) - q + 1)


@dataclass(frozen=True)
class ExponentEntry:
    source: str
    params: dict
    p: int
    q: int
    lower_exponent: Fraction | None
    upper_exponent: Fraction | None
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        def fr(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"

        return {
            "source": self.source, "params": self.params, "p": self.p, "q": self.q,
            "lower_exponent": fr(self.lower_exponent),
            "upper_exponent": fr(self.upper_exponent),
        }


def _theta(r, a, b):
    if not a > r >= 2 or b < 2:
        raise ConstraintViolated("theta needs a > r >= 2 and b >= 2", r=r, a=a, b=b)
    ell = 2 + b * (a - 1)
    p = r * ell
    return p, comb(p, 2) - (r - 1) * a * b + 1, Fraction(r, r - 1) * Fraction(a - 1, a)


def _subkt(t):
    if t < 3:
        raise ConstraintViolated("subdivided clique needs t >= 3", t=t)
    s = t + comb(t, 2)
    return 2 * s, comb(2 * s, 2) - 2 * comb(t, 2) + 1, 1 + Fraction(1, 2 * t - 3)


def _subktt(r, b, ell):
    if b < 3 or ell < 2 or not 2 <= r <= 6 or 2 * r >= 3 * ell:
        raise ConstraintViolated("need b >= 3, ell >= 2, 2 <= r <= 6, r < 3*ell/2",
                                 r=r, b=b, ell=ell)
    s = 3 + b + 3 * (ell - 1) * b
    p = r * s
    return p, comb(p, 2) - 3 * (r - 1) * b * ell + 1, Fraction(r, r - 1) * (1 - Fraction(2, 3 * ell))


def _induction(k, m):
    if not 1 <= m <= k - 1 or k < 3:
        raise ConstraintViolated("need k >= 3 and 1 <= m <= k - 1", k=k, m=m)
    return k, comb(k, 2) - m * (k - m) - comb(m, 2) + m + 1, Fraction(1, m)


def _energy_quadruples(k, m):
    # q <= C(k,2) needs m * floor(k/(m+1)) >= m + 1, i.e. k >= 2(m+1)
    if m < 2 or k < 2 * (m + 1):
        raise ConstraintViolated("need m >= 2 and k >= 2(m+1)", k=k, m=m)
    return k, comb(k, 2) - m * (k // (m + 1)) + m + 1, 1 + Fraction(1, m)


def _cycle_r(r, k):
    # even cycle C_2k as the theta graph with two paths
    return _theta(r, k, 2)


def _lll(p, q):
    PQParams(p, q)
    return p, q, None


THEOREMS = {
    "theta": (_theta, ("r", "a", "b")),
    "cycle": (_cycle_r, ("r", "k")),
    "subkt": (_subkt, ("t",)),
    "subktt": (_subktt, ("r", "b", "ell")),
    "induction": (_induction, ("k", "m")),
    "energy_quadruples": (_energy_quadruples, ("k", "m")),
    "lll": (_lll, ("p", "q")),
}


def exponent_entry(theorem: str, **params: int) -> ExponentEntry:
    """One row: (p, q) and the lower and local-lemma upper exponents."""
    if theorem not in THEOREMS:
        raise InvalidParams(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}")
    fn, names = THEOREMS[theorem]
    if set(params) != set(names):
        raise InvalidParams(f"{theorem} takes parameters {names}, got {sorted(params)}")
    p, q, lower = fn(*(int(params[x]) for x in names))
    if not 1 <= q <= comb(p, 2):
        raise ConstraintViolated(f"{theorem}{tuple(params.values())} gives q={q} outside "
                                 f"[1, C({p},2)]", p=p, q=q)
    upper = lll_exponent(p, q) if comb(p, 2) - q + 1 > 0 else None
    return ExponentEntry(theorem, {x: int(params[x]) for x in names}, p, q, lower, upper)


def exponent_table(theorem: str, ranges: dict[str, range], skip_invalid: bool = True):
    """Rows for every parameter combination in ``ranges``.

    Invalid combinations are skipped (or raise ``ConstraintViolated`` when
    ``skip_invalid`` is false).
    """
    _, names = THEOREMS[theorem]
    rows = []
    for combo in itertools.product(*(ranges[x] for x in names)):
        try:
            rows.append(exponent_entry(theorem, **dict(zip(names, combo))))
        except (ConstraintViolated, InvalidParams):
            if not skip_invalid:
                raise
    return rows
