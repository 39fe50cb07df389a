"""Revealing a subgraph of a pruned energy graph edge by edge.

Given a subgraph H of the base coloring and a set T of pruned-graph edges,
the edges of T are added to H one at a time. Each step i reveals the r
projected edges ``pi_k(e_i)`` and, in every coordinate k, is classified as

* ``"n"`` new vertex: the far endpoint ``pi_k(v_i)`` was not yet present,
* ``"s"`` savings: the far endpoint was present but the edge was not,
* ``"d"`` delayed vertex: the projected edge was already present.

The resulting :class:`RevealLedger` carries every per-step flag and all the
aggregate counts, plus the exact rational total savings

    sav = S + sum over steps with d_i > 0 of (r - d_i) / (r - 1).

Coordinates are 0-based; step indices are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .coloring import subgraph_repetitions
from .errors import (
    HypothesisViolated,
    IncompatibleOrder,
    InsufficientSavings,
    InvalidParams,
    LemmaRefuted,
    NoCompatibleOrder,
    NotAReservoir,
    ReservoirTooSmall,
)
from .prune import PrunedEnergyGraph

__all__ = [
    "RevealInstance",
    "RevealLedger",
    "RevealStep",
    "Reservoir",
    "Subgraph",
    "WitnessGraph",
    "apply_reservoir",
    "canonical_path_order",
    "check_reservoir",
    "construct_witness",
    "eventual_savings_sites",
    "h_compatible_order",
    "project",
    "project_edge",
    "reveal_ledger",
    "total_savings",
]

Tuple = tuple[int, ...]
EnergyEdge = tuple[Tuple, Tuple]


def _e(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Subgraph:
    """A subgraph of the base K_n: a vertex set and an edge set."""

    vertices: frozenset = frozenset()
    edges: frozenset = frozenset()

    @classmethod
    def build(cls, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        es = frozenset(_e(int(u), int(v)) for u, v in edges)
        vs = frozenset(int(v) for v in vertices) | {x for e in es for x in e}
        return cls(vs, es)

    def union(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.vertices | other.vertices, self.edges | other.edges)

    __or__ = union

    def issubgraph(self, other: "Subgraph") -> bool:
        return self.vertices <= other.vertices and self.edges <= other.edges

    __le__ = issubgraph

    def repetitions(self, g) -> int:
        return subgraph_repetitions(g, self.edges)

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": sorted(list(e) for e in self.edges)}


def project_edge(a: Tuple, b: Tuple) -> list[tuple[int, int]]:
    return [_e(x, y) for x, y in zip(a, b)]


def project(edges: Iterable[EnergyEdge] = (), vertices: Iterable[Tuple] = ()) -> Subgraph:
    """The union of all coordinate projections of some tuples and edges."""
    vs: set[int] = set()
    es: set[tuple[int, int]] = set()
    for t in vertices:
        vs.update(t)
    for a, b in edges:
        vs.update(a)
        vs.update(b)
        es.update(project_edge(a, b))
    return Subgraph(frozenset(vs), frozenset(es))


def _norm(edge: EnergyEdge) -> EnergyEdge:
    a, b = edge
    return (a, b) if a < b else (b, a)


# --- compatible orderings -------------------------------------------------------

def h_compatible_order(
    H: Subgraph,
    T: Sequence[EnergyEdge],
    mode: str = "generate",
    sigma: Sequence[EnergyEdge] | None = None,
    rng: np.random.Generator | None = None,
):
    """Generate or check an H-compatible ordering of the edges of T.

    An ordering is a list of ``(designated, other)`` pairs: the designated
    endpoint's coordinates must all be present in H plus the projections of
    the earlier edges. ``generate`` picks the least available edge and its
    least qualifying endpoint (uniformly random choices if ``rng`` is
    given). ``check`` returns ``(ok, first_bad_step)``.
    """
    if mode == "check":
        if sigma is None:
            raise InvalidParams("check mode needs sigma")
        if sorted(_norm(e) for e in sigma) != sorted(_norm(e) for e in T):
            return False, 0
        revealed = set(H.vertices)
        for i, (u, v) in enumerate(sigma, 1):
            if not set(u) <= revealed:
                return False, i
            revealed.update(u)
            revealed.update(v)
        return True, None
    if mode != "generate":
        raise InvalidParams(f"unknown mode {mode!r}")
    remaining = sorted({_norm(e) for e in T})
    revealed = set(H.vertices)
    out: list[EnergyEdge] = []
    while remaining:
        avail = []
        for idx, (a, b) in enumerate(remaining):
            ends = [x for x in (a, b) if set(x) <= revealed]
            if ends:
                avail.append((idx, ends))
        if not avail:
            raise NoCompatibleOrder(
                f"{len(remaining)} edges cannot be reached from H", remaining=len(remaining)
            )
        if rng is None:
            idx, ends = avail[0]
            u = ends[0]
        else:
            idx, ends = avail[int(rng.integers(len(avail)))]
            u = ends[int(rng.integers(len(ends)))]
        a, b = remaining.pop(idx)
        v = b if u == a else a
        out.append((u, v))
        revealed.update(a)
        revealed.update(b)
    return out


def canonical_path_order(path: Sequence[Tuple]) -> list[EnergyEdge]:
    """Edges of the path ``v_0 .. v_l`` in traversal order, designated ``v_{i-1}``."""
    return [(path[i - 1], path[i]) for i in range(1, len(path))]


# --- the ledger -------------------------------------------------------------------

@dataclass
class RevealInstance:
    pg: PrunedEnergyGraph
    H: Subgraph
    sigma: list[EnergyEdge]

    @classmethod
    def generate(cls, pg, H, T, rng=None) -> "RevealInstance":
        return cls(pg, H, h_compatible_order(H, T, rng=rng))

    @property
    def T(self) -> list[EnergyEdge]:
        return [_norm(e) for e in self.sigma]

    @property
    def m(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class RevealStep:
    index: int
    designated: Tuple
    other: Tuple
    color: int | None
    flags: tuple[str, ...]
    new_vertices: tuple[int, ...]
    new_edges: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return self.flags.count("n")

    @property
    def s(self) -> int:
        return self.flags.count("s")

    @property
    def d(self) -> int:
        return self.flags.count("d")

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "designated_endpoint": list(self.designated),
            "other_endpoint": list(self.other),
            "per_coordinate": list(self.flags),
        }


@dataclass
class RevealLedger:
    r: int
    H: Subgraph
    steps: list[RevealStep]
    final: Subgraph
    N_k: list[int] = field(default_factory=list)
    S_k: list[int] = field(default_factory=list)
    D_k: list[int] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def N(self) -> int:
        return sum(self.N_k)

    @property
    def S(self) -> int:
        return sum(self.S_k)

    @property
    def D(self) -> int:
        return sum(self.D_k)

    @property
    def d(self) -> int:
        """Number of steps without any delayed vertex."""
        return sum(1 for st in self.steps if st.d == 0)

    @property
    def sav(self) -> Fraction:
        return total_savings(self)

    def snapshot(self, i: int) -> Subgraph:
        """The revealed graph after step i (``snapshot(0)`` is H)."""
        vs = set(self.H.vertices)
        es = set(self.H.edges)
        for st in self.steps[:i]:
            vs.update(st.new_vertices)
            es.update(st.new_edges)
        return Subgraph(frozenset(vs), frozenset(es))

    def to_json(self) -> dict:
        sav = self.sav
        return {
            "r": self.r,
            "m": self.m,
            "steps": [st.to_json() for st in self.steps],
            "aggregates": {
                "N": self.N, "S": self.S, "D": self.D, "d": self.d,
                "N_k": self.N_k, "S_k": self.S_k, "D_k": self.D_k,
            },
            "sav": f"{sav.numerator}/{sav.denominator}",
        }


def reveal_ledger(inst: RevealInstance, check_edges: bool = True) -> RevealLedger:
    """Run the revealing process over ``inst.sigma`` and account every step.

    Raises :class:`IncompatibleOrder` if a designated endpoint is not yet
    revealed, and :class:`LemmaRefuted` if two edges of T meeting at a
    tuple project onto the same edge of the base graph in some coordinate
    (projections of T must never turn around).
    """
    pg = inst.pg
    r = pg.r
    H = inst.H
    vs = set(H.vertices)
    es = set(H.edges)
    base = pg.base
    t_adj: dict[Tuple, list[Tuple]] = {}
    steps: list[RevealStep] = []
    N_k = [0] * r
    S_k = [0] * r
    D_k = [0] * r
    seen_edges: set[EnergyEdge] = set()
    for i, (u, v) in enumerate(inst.sigma, 1):
        if len(u) != r or len(v) != r:
            raise InvalidParams(f"step {i}: tuples must have length {r}")
        key = _norm((u, v))
        if key in seen_edges:
            raise InvalidParams(f"step {i}: edge listed twice")
        seen_edges.add(key)
        if check_edges and not pg.has_edge(u, v):
            raise InvalidParams(f"step {i}: {u}-{v} is not an edge of the pruned graph")
        if not set(u) <= vs:
            raise IncompatibleOrder(f"step {i}: designated endpoint {u} is not revealed", step=i)
        for w, y in ((u, v), (v, u)):
            for x in t_adj.get(w, ()):
                if any(xk == yk for xk, yk in zip(x, y)):
                    raise LemmaRefuted(
                        f"step {i}: projection turns around at {w} ({x} and {y} share a coordinate)"
                    )
        flags = []
        new_v = []
        new_e = []
        for k in range(r):
            far = v[k]
            pe = _e(u[k], far)
            if far not in vs:
                flags.append("n")
                N_k[k] += 1
            elif pe not in es:
                flags.append("s")
                S_k[k] += 1
            else:
                flags.append("d")
                D_k[k] += 1
            if far not in vs:
                new_v.append(far)
            if pe not in es:
                new_e.append(pe)
        vs.update(new_v)
        es.update(new_e)
        t_adj.setdefault(u, []).append(v)
        t_adj.setdefault(v, []).append(u)
        color = int(base.matrix[u[0], v[0]]) if base is not None else None
        steps.append(RevealStep(i, u, v, color, tuple(flags), tuple(new_v), tuple(new_e)))
    return RevealLedger(r, H, steps, Subgraph(frozenset(vs), frozenset(es)), N_k, S_k, D_k)


def total_savings(ledger: RevealLedger) -> Fraction:
    r = ledger.r
    sav = Fraction(sum(st.s for st in ledger.steps))
    for st in ledger.steps:
        if st.d > 0:
            sav += Fraction(r - st.d, r - 1)
    return sav


# --- savings along paths -------------------------------------------------------------

def eventual_savings_sites(
    pg: PrunedEnergyGraph, F: Subgraph, path: Sequence[Tuple], k: int, j: int, j2: int
) -> int:
    """Locate a savings step in coordinate k between steps j and j2.

    ``path`` is ``v_0, ..., v_l`` revealed canonically from ``v_0``. The
    hypotheses are: the coordinates of ``v_0`` lie in F; the k-th projection
    of edge j is absent from F and from the k-th projections of the earlier
    edges; and ``pi_k(v_{j2})`` is a vertex of F. Under them some step
    ``j* in [j, j2]`` is a savings in coordinate k, and the least one is
    returned.
    """
    ell = len(path) - 1
    if not 0 <= k < pg.r:
        raise HypothesisViolated(f"coordinate {k} out of range")
    if not 1 <= j <= j2 <= ell:
        raise HypothesisViolated(f"need 1 <= j <= j' <= {ell}", j=j, j2=j2)
    for a, b in zip(path, path[1:]):
        if not pg.has_edge(a, b):
            raise HypothesisViolated(f"{a}-{b} is not an edge of the pruned graph")
    if not set(path[0]) <= F.vertices:
        raise HypothesisViolated("start of the path is not inside F")
    earlier = {_e(path[i - 1][k], path[i][k]) for i in range(1, j)}
    if _e(path[j - 1][k], path[j][k]) in (F.edges | earlier):
        raise HypothesisViolated("edge j is already revealed in coordinate k")
    if path[j2][k] not in F.vertices:
        raise HypothesisViolated("pi_k(v_j') is not a vertex of F")
    ledger = reveal_ledger(RevealInstance(pg, F, canonical_path_order(path)))
    for step in ledger.steps[j - 1 : j2]:
        if step.flags[k] == "s":
            return step.index
    raise LemmaRefuted(f"no savings in coordinate {k} between steps {j} and {j2}")


# --- reservoirs and witness assembly ------------------------------------------------------

@dataclass(frozen=True)
class Reservoir:
    source: Tuple
    members: tuple[Tuple, ...]

    def __len__(self) -> int:
        return len(self.members)


def check_reservoir(pg: PrunedEnergyGraph, R: Reservoir, H: Subgraph) -> list[str]:
    problems = []
    if not set(R.source) <= H.vertices:
        problems.append("source projection is not inside H")
    for u in R.members:
        if not pg.has_edge(R.source, u):
            problems.append(f"member {u} is not adjacent to the source")
        if set(u) & H.vertices:
            problems.append(f"member {u} meets H")
    return problems


@dataclass
class WitnessGraph:
    graph: Subgraph
    base: Subgraph
    vertex_budget: int
    new_repetitions: int
    trace: dict = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices


def apply_reservoir(pg: PrunedEnergyGraph, H: Subgraph, R: Reservoir, D: int) -> WitnessGraph:
    """Spend D extra vertices from an H-reservoir to buy repetitions.

    Writing ``D = w*r + z`` with ``0 <= z < r``: the projections of w full
    source-member edges are added (r equally colored edges each), then the
    first z coordinates of one more member. The result has exactly
    ``|V(H)| + D`` vertices and at least ``floor((r-1) * D / r)`` more
    repetitions than H; both are recounted before returning.
    """
    r = pg.r
    if D < 0:
        raise InvalidParams("D must be non-negative", D=D)
    problems = check_reservoir(pg, R, H)
    if problems:
        raise NotAReservoir("; ".join(problems))
    if D > r * len(R):
        raise ReservoirTooSmall(f"D={D} needs {math.ceil(D / r)} members, have {len(R)}",
                                D=D, size=len(R))
    w, z = divmod(D, r)
    members = sorted(R.members)
    vs = set(H.vertices)
    es = set(H.edges)
    used = members[: w + (1 if z else 0)]
    for idx, u in enumerate(used):
        coords = range(r) if idx < w else range(z)
        for k in coords:
            vs.add(u[k])
            es.add(_e(R.source[k], u[k]))
    out = Subgraph(frozenset(vs), frozenset(es))
    gain = out.repetitions(pg.base) - H.repetitions(pg.base)
    if len(out.vertices) != len(H.vertices) + D or gain < ((r - 1) * D) // r:
        raise LemmaRefuted(
            f"reservoir step produced {len(out.vertices) - len(H.vertices)} vertices and "
            f"{gain} repetitions for D={D}"
        )
    return WitnessGraph(out, H, len(H.vertices) + D, gain,
                        {"D": D, "w": w, "z": z, "members_used": [list(u) for u in used]})


def construct_witness(inst: RevealInstance, R: Reservoir | None, t: int) -> WitnessGraph:
    """Assemble H* from a revealed T plus a reservoir.

    Requires total savings at least t. The leftover vertex budget
    ``S + D - floor(sav)`` is spent through :func:`apply_reservoir`, where R
    must be a reservoir for ``H | pi(T)``. The result satisfies
    ``|V(H*)| <= |V(H)| + r*m - t`` and carries at least ``(r-1)*m``
    repetitions not already in H; both are recounted.
    """
    pg = inst.pg
    r = pg.r
    ledger = reveal_ledger(inst)
    sav = ledger.sav
    if sav < t:
        raise InsufficientSavings(f"total savings {sav} < t={t}", sav=str(sav), t=t)
    t_used = math.floor(sav)
    D_prime = ledger.S + ledger.D - t_used
    H = inst.H
    revealed = ledger.final
    if D_prime == 0:
        wg = WitnessGraph(revealed, revealed, len(revealed.vertices), 0, {"D": 0})
    else:
        if R is None:
            raise ReservoirTooSmall(f"D'={D_prime} but no reservoir given", D=D_prime, size=0)
        wg = apply_reservoir(pg, revealed, R, D_prime)
    m = ledger.m
    budget = len(H.vertices) + r * m - t
    gain = wg.graph.repetitions(pg.base) - H.repetitions(pg.base)
    members = set().union(*(set(u) for u in R.members)) if R is not None else set()
    if not revealed <= wg.graph or not wg.graph.vertices <= (revealed.vertices | members):
        raise LemmaRefuted("H* escapes H | pi(T) | pi(R)")
    if len(wg.graph.vertices) > budget or gain < (r - 1) * m:
        raise LemmaRefuted(
            f"H* has {len(wg.graph.vertices)} vertices (budget {budget}) and "
            f"{gain} new repetitions (need {(r - 1) * m})"
        )
    trace = {"ledger": ledger.to_json(), "t": t, "t_used": t_used, "D_prime": D_prime}
    trace.update({k: v for k, v in wg.trace.items() if k != "D"})
    return WitnessGraph(wg.graph, H, budget, gain, trace)
