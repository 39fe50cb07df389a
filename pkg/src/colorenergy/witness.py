"""Turning structure into concrete low-color cliques.

Every pipeline ends in a :class:`WitnessReport`: a vertex set of the base
coloring together with the (p, q) pair it violates. Reports are recounted
from the coloring before they are returned, so a report that reaches the
caller always passes :func:`validate_witness`.

Energy-graph pipelines (``extract_subKt``, ``extract_theta``,
``extract_subKtt``) look for a pattern in a pruned energy graph and run the
revealing ledger on it. The direct pipelines (``greedy_low_color_clique``,
``incidence_witness``) work on the coloring alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator

from .coloring import ColoredCompleteGraph, repetitions_of_subset
from .errors import (
    ChapterGuaranteeFailed,
    InsufficientSavings,
    InvalidParams,
    LemmaRefuted,
    NotFound,
    PaddingInfeasible,
    ReservoirDepleted,
    ReservoirTooSmall,
    Inapplicable,
)
from .gen import DEFAULT_BUDGET, Embedding, PatternGraph, iter_subgraphs, make_pattern
from .gen import _Counter
from .prune import PrunedEnergyGraph
from .reveal import (
    Reservoir,
    RevealInstance,
    Subgraph,
    canonical_path_order,
    construct_witness,
    project,
    reveal_ledger,
)

__all__ = [
    "PipelineParams",
    "WitnessReport",
    "default_multiplicity",
    "extract_subKt",
    "extract_subKtt",
    "extract_theta",
    "greedy_low_color_clique",
    "incidence_witness",
    "theta_pq",
    "subkt_pq",
    "subktt_pq",
    "greedy_pq",
    "incidence_pq",
    "validate_witness",
]

DEFAULT_MAX_EMBEDDINGS = 50


# --- reports ---------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    vertices: tuple[int, ...]
    p_claimed: int
    q_claimed: int
    distinct_colors: int
    repetitions: int
    pipeline: str
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "vertices": list(self.vertices),
            "p_claimed": self.p_claimed,
            "q_claimed": self.q_claimed,
            "distinct_colors": self.distinct_colors,
            "repetitions": self.repetitions,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class WitnessVerdict:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_witness(g: ColoredCompleteGraph, w: WitnessReport) -> WitnessVerdict:
    """Recount a report against the coloring.

    A valid report stores the true distinct-color and repetition counts of
    its vertex set, has at most ``p_claimed`` vertices, and carries at least
    ``C(p,2) - q + 1`` repetitions, so every p-set containing it spans fewer
    than q colors.
    """
    reasons = []
    try:
        rc = repetitions_of_subset(g, w.vertices)
    except InvalidParams as exc:
        return WitnessVerdict(False, (f"unusable vertex set: {exc}",))
    if len(set(w.vertices)) != len(w.vertices):
        reasons.append("vertex list has duplicates")
    if rc.distinct_colors != w.distinct_colors:
        reasons.append(f"stored {w.distinct_colors} distinct colors, recount {rc.distinct_colors}")
    if rc.repetitions != w.repetitions:
        reasons.append(f"stored {w.repetitions} repetitions, recount {rc.repetitions}")
    if len(rc.subset) > w.p_claimed:
        reasons.append(f"{len(rc.subset)} vertices exceed p={w.p_claimed}")
    if not 1 <= w.q_claimed <= comb(max(w.p_claimed, 2), 2):
        reasons.append(f"q={w.q_claimed} outside [1, C(p,2)]")
    need = comb(w.p_claimed, 2) - w.q_claimed + 1
    if rc.repetitions < need:
        reasons.append(f"{rc.repetitions} repetitions < {need} needed to violate (p,q)")
    if len(rc.subset) == w.p_claimed and rc.distinct_colors >= w.q_claimed:
        reasons.append(f"{rc.distinct_colors} distinct colors, not below q={w.q_claimed}")
    return WitnessVerdict(not reasons, tuple(reasons))


def _make_report(g, core, p, q, pipeline, provenance) -> WitnessReport:
    """Pad ``core`` with the least unused vertices up to p, recount, validate."""
    verts = sorted(set(int(v) for v in core))
    if len(verts) > p:
        raise LemmaRefuted(f"{pipeline}: witness has {len(verts)} > p={p} vertices")
    if len(verts) < p:
        taken = set(verts)
        extra = [v for v in range(g.n) if v not in taken][: p - len(verts)]
        verts = sorted(verts + extra)
    rc = repetitions_of_subset(g, verts)
    prov = dict(provenance)
    prov["core_vertices"] = sorted(set(int(v) for v in core))
    report = WitnessReport(tuple(verts), p, q, rc.distinct_colors, rc.repetitions, pipeline, prov)
    verdict = validate_witness(g, report)
    if not verdict:
        raise LemmaRefuted(f"{pipeline}: assembled witness fails recount: {verdict.reasons}")
    return report


# --- (p, q) formulas ------------------------------------------------------------

def subkt_pq(t: int) -> tuple[int, int]:
    s = t + comb(t, 2)
    return 2 * s, comb(2 * s, 2) - 2 * comb(t, 2) + 1


def theta_pq(r: int, a: int, b: int) -> tuple[int, int]:
    ell = 2 + b * (a - 1)
    p = r * ell
    return p, comb(p, 2) - (r - 1) * a * b + 1


def subktt_pq(r: int, b: int, ell: int) -> tuple[int, int]:
    s = 3 + b + 3 * (ell - 1) * b
    return r * s, comb(r * s, 2) - 3 * (r - 1) * b * ell + 1


def greedy_pq(k: int, m: int) -> tuple[int, int]:
    return k, comb(k, 2) - m * (k - m) - comb(m, 2) + m + 1


def incidence_pq(size_a: int, size_b: int, num_edges: int) -> tuple[int, int]:
    p = size_a + num_edges
    return p, comb(p, 2) - (num_edges - size_b) + 1


# --- pipeline parameters -----------------------------------------------------------

def default_multiplicity(pipeline: str, r: int, a: int = 0, b: int = 0, ell: int = 0) -> int:
    """The abundance constants the existence proofs use."""
    if pipeline == "cycle_star":
        return 2 * a * (r + 1)
    if pipeline == "theta":
        return 2 * r * a * a * b
    if pipeline == "subktt":
        return 30 * r * b * ell * ell
    raise InvalidParams(f"no multiplicity for pipeline {pipeline!r}")


@dataclass(frozen=True)
class PipelineParams:
    """Search settings shared by the energy-graph pipelines.

    ``multiplicity`` overrides the proof's abundance constant (leaves of the
    cycle-star, paths of the theta graph, pages of the subdivided bipartite
    graph); ``None`` means the proof's value. It is further capped by what
    the host's maximum degree can support. ``max_embeddings`` bounds how
    many copies are tried before giving up.
    """

    multiplicity: int | None = None
    budget: int | None = DEFAULT_BUDGET
    max_embeddings: int = DEFAULT_MAX_EMBEDDINGS
    seed: int = 0


def _max_degree(pg: PrunedEnergyGraph) -> int:
    return max((len(ns) for ns in pg.adjacency.values()), default=0)


def _embeddings(pg, pattern, params: PipelineParams, counter: _Counter) -> Iterator[Embedding]:
    yielded = 0
    for emb in iter_subgraphs(pg.adjacency, pattern, params.budget, "image", _counter=counter):
        yield emb
        yielded += 1
        if yielded >= params.max_embeddings:
            return


def _not_found(what: str, counter: _Counter, tried: int, depleted: int = 0):
    exhaustive = not counter.hit and tried == 0
    if depleted:
        return ReservoirDepleted(
            f"{depleted} copies of {what} found but none had a large enough reservoir",
            exhaustive=False, nodes=counter.nodes, tried=tried,
        )
    return NotFound(
        f"no usable copy of {what}" + ("" if exhaustive else " within the search budget"),
        exhaustive=exhaustive, nodes=counter.nodes, tried=tried,
    )


def _grow(floor: int, top: int, attempt, counter: _Counter, spec):
    """Run ``attempt(mult)`` for mult = floor, floor+1, ..., top.

    The patterns are nested (one more leaf, path or page each step), so a size
    with no copy at all ends the search; larger sizes only help when copies
    exist but their reservoirs came up short.
    """
    tried = depleted = 0
    mult = floor
    for mult in range(floor, max(floor, top) + 1):
        report, t, d = attempt(mult)
        if report is not None:
            return report
        tried += t
        depleted += d
        if t == 0 or counter.hit:
            break
    raise _not_found(spec(mult), counter, tried, depleted)


def _emb_json(emb: Embedding) -> list:
    return [list(t) for t in emb.map]


def _witness_or_refute(inst, R, t, label):
    try:
        return construct_witness(inst, R, t)
    except InsufficientSavings as exc:
        raise LemmaRefuted(f"{label}: savings guarantee failed: {exc}") from exc


# --- subdivided cliques ------------------------------------------------------------

def extract_subKt(pg: PrunedEnergyGraph, t: int, params: PipelineParams | None = None) -> WitnessReport:
    """Both projections of a copy of the 1-subdivided K_t (r = 2)."""
    params = params or PipelineParams()
    if pg.r != 2:
        raise InvalidParams("the subdivided-clique pipeline needs r = 2", r=pg.r)
    if t < 3:
        raise InvalidParams("t must be >= 3", t=t)
    pattern = make_pattern("ktplus", t)
    p, q = subkt_pq(t)
    need = 2 * comb(t, 2)
    counter = _Counter(params.budget)
    tried = 0
    for emb in _embeddings(pg, pattern, params, counter):
        tried += 1
        H = project(edges=[(emb[u], emb[v]) for u, v in pattern.edges])
        reps = H.repetitions(pg.base)
        if len(H.vertices) > p or reps < need:
            raise LemmaRefuted(
                f"projections of a subdivided K_{t} give {len(H.vertices)} vertices and "
                f"{reps} repetitions (expected <= {p} and >= {need})"
            )
        return _make_report(pg.base, H.vertices, p, q, "subkt", {
            "t": t, "r": 2, "embedding": _emb_json(emb), "pattern": pattern.spec_string,
            "subgraph_repetitions": reps, "search_nodes": counter.nodes,
        })
    raise _not_found(pattern.spec_string, counter, tried)


# --- theta graphs -------------------------------------------------------------------

def extract_theta(
    pg: PrunedEnergyGraph, a: int, b: int, params: PipelineParams | None = None
) -> WitnessReport:
    """Witness against ``theta_pq(r, a, b)`` from a theta-shaped structure."""
    params = params or PipelineParams()
    r = pg.r
    if not a > r >= 2:
        raise InvalidParams(f"need a > r >= 2, got a={a}, r={r}", a=a, r=r)
    if b < 2:
        raise InvalidParams("b must be >= 2", b=b)
    if b == 2:
        return _theta_cycle_star(pg, a, params)
    return _theta_many_paths(pg, a, b, params)


def _theta_cycle_star(pg, a, params):
    r = pg.r
    want = params.multiplicity if params.multiplicity is not None else default_multiplicity(
        "cycle_star", r, a)
    top = max(0, min(want, _max_degree(pg) - 2))
    p, q = theta_pq(r, a, 2)
    counter = _Counter(params.budget)
    cyc = 2 * a

    def attempt(k):
        pattern = make_pattern("cycle_star", a, k)
        tried = depleted = 0
        for emb in _embeddings(pg, pattern, params, counter):
            tried += 1
            hub, u = emb[0], emb[1]
            H = project(edges=[(u, hub)])
            path = [emb[i] for i in range(1, cyc)] + [hub]
            sigma = canonical_path_order(path)
            revealed = H | project(edges=sigma)
            members = tuple(emb[x] for x in pattern.meta["leaves"]
                            if not set(emb[x]) & revealed.vertices)
            R = Reservoir(hub, members)
            inst = RevealInstance(pg, H, sigma)
            try:
                wg = _witness_or_refute(inst, R, r, "cycle-star")
            except ReservoirTooSmall:
                depleted += 1
                continue
            return _make_report(pg.base, wg.vertices, p, q, "theta", {
                "case": "cycle_star", "r": r, "a": a, "b": 2, "multiplicity": k,
                "multiplicity_requested": want, "embedding": _emb_json(emb),
                "H": H.to_json(), "reservoir_size": len(members), "witness": wg.trace,
                "search_nodes": counter.nodes,
            }), tried, depleted
        return None, tried, depleted

    return _grow(0, top, attempt, counter,
                 lambda k: make_pattern("cycle_star", a, k).spec_string)


def _fresh_paths(emb, paths, taboo):
    """Paths (in order) whose first interior vertex avoids all earlier coordinates."""
    excluded = set(taboo)
    out = []
    for path in paths:
        if set(emb[path[1]]) & excluded:
            continue
        out.append(path)
        for v in path:
            excluded.update(emb[v])
    return out


def _theta_many_paths(pg, a, b, params):
    r = pg.r
    want = params.multiplicity if params.multiplicity is not None else default_multiplicity(
        "theta", r, a, b)
    top = min(want, _max_degree(pg))
    p, q = theta_pq(r, a, b)
    counter = _Counter(params.budget)

    def attempt(mult):
        pattern = make_pattern("theta", a, mult)
        tried = depleted = 0
        for emb in _embeddings(pg, pattern, params, counter):
            tried += 1
            v0, va = emb[0], emb[1]
            chosen = _fresh_paths(emb, pattern.meta["paths"], set(v0) | set(va))
            if len(chosen) < b:
                depleted += 1
                continue
            T_paths = chosen[:b]
            R = Reservoir(v0, tuple(emb[path[1]] for path in chosen[b : b + a * b]))
            H = project(vertices=[v0, va])
            sigma = [e for path in T_paths for e in canonical_path_order([emb[v] for v in path])]
            inst = RevealInstance(pg, H, sigma)
            try:
                wg = _witness_or_refute(inst, R, r * b, "theta")
            except ReservoirTooSmall:
                depleted += 1
                continue
            return _make_report(pg.base, wg.vertices, p, q, "theta", {
                "case": "many_paths", "r": r, "a": a, "b": b, "multiplicity": mult,
                "multiplicity_requested": want, "embedding": _emb_json(emb),
                "fresh_paths": len(chosen), "reservoir_size": len(R), "witness": wg.trace,
                "search_nodes": counter.nodes,
            }), tried, depleted
        return None, tried, depleted

    return _grow(b, top, attempt, counter, lambda m: make_pattern("theta", a, m).spec_string)


# --- subdivided K_{3,b} ----------------------------------------------------------------

def _path_sigma(emb, path):
    return canonical_path_order([emb[v] for v in path])


def _ledger(pg, H, sigma):
    return reveal_ledger(RevealInstance(pg, H, sigma))


def _check_page_lemmas(pg, H, emb, page_paths, ell, where):
    """Runtime checks of the two per-coordinate page lemmas."""
    p1, p2, p3 = (_path_sigma(emb, path) for path in page_paths)
    led1 = _ledger(pg, H, p1)
    led23 = _ledger(pg, led1.final, p2 + p3)
    ledq = _ledger(pg, H, p1 + p2 + p3)
    checks = []
    for k in range(pg.r):
        if led1.N_k[k] == ell:
            ok = led23.S_k[k] >= 2
            checks.append({"lemma": "pure_path", "k": k, "ok": ok})
            if not ok:
                raise LemmaRefuted(
                    f"{where}: first path is all-new in coordinate {k} but the other two "
                    f"paths save only {led23.S_k[k]} there"
                )
        if led1.S_k[k] == 1 and led1.D_k[k] <= 1:
            ok = ledq.S_k[k] >= 2
            checks.append({"lemma": "one_saving", "k": k, "ok": ok})
            if not ok:
                raise LemmaRefuted(
                    f"{where}: first path has one saving and <= 1 delay in coordinate {k} "
                    f"but the page saves only {ledq.S_k[k]} there"
                )
    return ledq, checks


def extract_subKtt(
    pg: PrunedEnergyGraph, b: int, ell: int, params: PipelineParams | None = None
) -> WitnessReport:
    """Witness against ``subktt_pq(r, b, ell)`` via pages and chapters."""
    params = params or PipelineParams()
    r = pg.r
    if b < 3 or ell < 2:
        raise InvalidParams("need b >= 3 and ell >= 2", b=b, ell=ell)
    if not 2 <= r <= 6 or 2 * r >= 3 * ell:
        raise InvalidParams("need 2 <= r <= 6 and r < 3*ell/2", r=r, ell=ell)
    want = params.multiplicity if params.multiplicity is not None else default_multiplicity(
        "subktt", r, b=b, ell=ell)
    top = min(want, _max_degree(pg))
    p, q = subktt_pq(r, b, ell)
    two_r = Fraction(2 * r)
    counter = _Counter(params.budget)

    def attempt(mult):
        pattern = make_pattern("kab_l", 3, mult, ell)
        paths = pattern.meta["paths"]
        tried = depleted = 0
        for emb in _embeddings(pg, pattern, params, counter):
            tried += 1
            tops = [emb[j] for j in range(3)]
            excluded = set().union(*(set(x) for x in tops))
            pages = []
            for i in range(mult):
                xs = [emb[paths[(j, i)][1]] for j in range(3)]
                if any(set(x) & excluded for x in xs):
                    continue
                pages.append(i)
                for j in range(3):
                    for v in paths[(j, i)]:
                        excluded.update(emb[v])
            if len(pages) < 3 * b:
                depleted += 1
                continue
            H0 = project(vertices=tops)
            H_prev = H0
            chosen_paths: list[tuple[int, int]] = []
            chapters = []
            for c in range(b):
                block = pages[3 * c : 3 * c + 3]
                page_savs = []
                lemma_checks = []
                for i in block:
                    ledq, checks = _check_page_lemmas(
                        pg, H_prev, emb, [paths[(j, i)] for j in range(3)], ell,
                        f"chapter {c + 1}, page {i}",
                    )
                    page_savs.append(ledq.sav)
                    lemma_checks += checks
                pick = next((idx for idx, s in enumerate(page_savs) if s >= two_r), None)
                if ell == 2 and any(s < two_r for s in page_savs):
                    raise ChapterGuaranteeFailed(
                        f"chapter {c + 1}: with ell = 2 every page should save >= {2 * r}, "
                        f"got {[str(s) for s in page_savs]}"
                    )
                if pick is not None:
                    part = [(j, block[pick]) for j in range(3)]
                    fallback = None
                else:
                    part = [(0, i) for i in block]
                    fallback = []
                    Hf = H_prev
                    for i in block:
                        led = _ledger(pg, Hf, _path_sigma(emb, paths[(0, i)]))
                        fallback.append(f"{led.sav.numerator}/{led.sav.denominator}")
                        if led.sav < Fraction(2 * r, 3):
                            raise ChapterGuaranteeFailed(
                                f"chapter {c + 1}: no page saves {2 * r} and first path of page "
                                f"{i} saves only {led.sav} < {Fraction(2 * r, 3)}"
                            )
                        Hf = led.final
                sigma_c = [e for key in part for e in _path_sigma(emb, paths[key])]
                led_c = _ledger(pg, H_prev, sigma_c)
                if led_c.sav < two_r:
                    raise ChapterGuaranteeFailed(
                        f"chapter {c + 1} saves {led_c.sav} < {2 * r}"
                    )
                chapters.append({
                    "pages": block,
                    "page_savings": [f"{s.numerator}/{s.denominator}" for s in page_savs],
                    "picked_page": None if pick is None else block[pick],
                    "fallback_path_savings": fallback,
                    "chapter_savings": f"{led_c.sav.numerator}/{led_c.sav.denominator}",
                    "lemma_checks": lemma_checks,
                })
                chosen_paths += part
                H_prev = led_c.final
            sigma = [e for key in chosen_paths for e in _path_sigma(emb, paths[key])]
            inst = RevealInstance(pg, H0, sigma)
            total = reveal_ledger(inst).sav
            if total < 2 * r * b:
                raise LemmaRefuted(f"chapters sum to {total} < {2 * r * b} (additivity broken)")
            spare = pages[3 * b : 3 * b * (1 + ell)]
            R = Reservoir(tops[0], tuple(emb[paths[(0, i)][1]] for i in spare))
            try:
                wg = _witness_or_refute(inst, R, 2 * r * b, "subdivided K_3,b")
            except ReservoirTooSmall:
                depleted += 1
                continue
            return _make_report(pg.base, wg.vertices, p, q, "subktt", {
                "r": r, "b": b, "ell": ell, "multiplicity": mult,
                "multiplicity_requested": want, "embedding": _emb_json(emb),
                "fresh_pages": len(pages), "chapters": chapters, "reservoir_size": len(R),
                "witness": wg.trace, "search_nodes": counter.nodes,
            }), tried, depleted
        return None, tried, depleted

    return _grow(3 * b, top, attempt, counter,
                 lambda m: make_pattern("kab_l", 3, m, ell).spec_string)


# --- greedy majority-color clique ---------------------------------------------------------

def greedy_survival_guaranteed(n: int, num_colors: int, k: int, m: int) -> bool:
    """The counting condition ``(2|C|)**m * (k - m) <= n`` under which the greedy never dies."""
    return (2 * num_colors) ** m * (k - m) <= n


def greedy_low_color_clique(g: ColoredCompleteGraph, k: int, m: int) -> WitnessReport:
    """m rounds of "take the least survivor, keep its majority color class".

    The chosen vertices v_1..v_m and the least k - m final survivors span at
    most ``m + C(k-m, 2)`` colors: each v_i sees a single color towards
    everything chosen after it.
    """
    if k < 3 or not 1 <= m <= k - 1:
        raise InvalidParams("need k >= 3 and 1 <= m <= k - 1", k=k, m=m)
    if k > g.n:
        raise InvalidParams(f"k={k} exceeds n={g.n}", k=k, n=g.n)
    survivors = list(range(g.n))
    chosen = []
    trace = []
    mat = g.matrix
    for step in range(m):
        if not survivors:
            raise Inapplicable(f"no vertices left at step {step + 1}", step=step + 1)
        v = survivors[0]
        rest = survivors[1:]
        chosen.append(v)
        if not rest:
            survivors = []
            trace.append({"v": v, "color": None, "survivors": 0})
            continue
        cols = mat[v, rest]
        counts: dict[int, int] = {}
        for c in cols.tolist():
            counts[c] = counts.get(c, 0) + 1
        best = min(counts, key=lambda c: (-counts[c], c))
        survivors = [w for w, c in zip(rest, cols.tolist()) if c == best]
        trace.append({"v": v, "color": int(best), "survivors": len(survivors)})
    if len(survivors) < k - m:
        raise Inapplicable(
            f"only {len(survivors)} survivors after {m} rounds, need {k - m}",
            survivors=len(survivors),
        )
    verts = chosen + survivors[: k - m]
    p, q = greedy_pq(k, m)
    return _make_report(g, verts, p, q, "greedy", {"k": k, "m": m, "rounds": trace})


# --- color incidence graph ------------------------------------------------------------------

def incidence_witness(
    g: ColoredCompleteGraph,
    F: PatternGraph,
    gamma: float,
    side_a=None,
    params: PipelineParams | None = None,
) -> WitnessReport:
    """Find F in the vertex-color incidence graph and rebuild a clique from stars.

    ``side_a`` is the side of F placed on the vertex side (default: the side
    of F's 2-coloring containing vertex 0); the other side goes to colors.
    """
    params = params or PipelineParams()
    if not 1 < gamma < 2:
        raise InvalidParams("gamma must lie in (1, 2)", gamma=gamma)
    if len(F.edges) < 2:
        raise InvalidParams("F needs at least two edges")
    s0, s1 = F.sides()
    if side_a is None:
        A = s0 if 0 in s0 else s1
    else:
        A = frozenset(side_a)
        if A not in (s0, s1):
            raise InvalidParams("side_a must be one side of F's bipartition")
    B = (s0 | s1) - A
    n = g.n
    threshold = n ** ((2 - gamma) / 2)
    sizes = g.class_sizes()
    kept = [c for c in range(g.num_colors) if sizes[c] >= threshold]
    p, q = incidence_pq(len(A), len(B), len(F.edges))
    counter = _Counter(params.budget)
    if not kept:
        raise NotFound("every color class falls below the size threshold", exhaustive=True,
                       threshold=threshold)
    host: dict[int, set[int]] = {}
    for c in kept:
        for u, v in g.classes[c]:
            host.setdefault(u, set()).add(n + c)
            host.setdefault(v, set()).add(n + c)
            host.setdefault(n + c, set()).update((u, v))
    tried = 0
    mat = g.matrix
    for emb in iter_subgraphs(host, F, params.budget, "image", _counter=counter):
        if any(emb[x] >= n for x in A) or any(emb[y] < n for y in B):
            continue
        tried += 1
        adj = F.adjacency
        edges: set[tuple[int, int]] = set()
        star_edges = 0
        for x in sorted(A):
            centre = emb[x]
            for y in sorted(adj[x]):
                c = emb[y] - n
                options = [w for w in range(n) if w != centre and mat[centre, w] == c]
                fresh = [w for w in options if (min(centre, w), max(centre, w)) not in edges]
                w = (fresh or options)[0]
                edges.add((min(centre, w), max(centre, w)))
                star_edges += 1
        overlap = star_edges - len(edges)
        colors_b = sorted(emb[y] - n for y in B)
        verts = {v for e in edges for v in e}
        pads = []
        for _ in range(overlap):
            best = None
            for c in colors_b:
                for u, v in g.classes[c]:
                    if (u, v) in edges:
                        continue
                    cost = (u not in verts) + (v not in verts)
                    if best is None or cost < best[0]:
                        best = (cost, (u, v))
                        if cost == 0:
                            break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                raise PaddingInfeasible("color classes of B have no spare edges")
            edges.add(best[1])
            verts.update(best[1])
            pads.append(list(best[1]))
        if len(verts) > p:
            raise PaddingInfeasible(f"padded star union has {len(verts)} > {p} vertices")
        sub = Subgraph.build(verts, edges)
        need = len(F.edges) - len(B)
        if sub.repetitions(g) < need:
            raise LemmaRefuted(
                f"star union carries {sub.repetitions(g)} < {need} repetitions"
            )
        return _make_report(g, verts, p, q, "incidence", {
            "gamma": gamma, "threshold": threshold, "kept_colors": len(kept),
            "pattern": F.spec_string, "A": sorted(A), "B": sorted(B),
            "embedding": [int(x) for x in emb.map], "overlap": overlap, "padding": pads,
        })
    raise _not_found(f"{F.spec_string} in the incidence graph", counter, tried)
