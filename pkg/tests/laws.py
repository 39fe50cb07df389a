"""Independent checks of the revealing-ledger laws.

Each function raises AssertionError with a readable message on failure.
The oracles recount from scratch rather than reusing ledger internals.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np

from colorenergy import RevealInstance, Subgraph, reveal_ledger, total_savings
from colorenergy.coloring import subgraph_repetitions
from colorenergy.reveal import h_compatible_order, project, project_edge


def step_and_total_counts(L) -> None:
    for st in L.steps:
        assert st.n + st.s + st.d == L.r, f"step {st.index}: n+s+d != r"
    assert L.N + L.S + L.D == L.r * L.m


def vertex_count_exact(L, H, T) -> None:
    union = H | project(edges=T)
    assert len(union.vertices) == len(H.vertices) + L.N
    assert len(union.vertices) == len(H.vertices) + L.r * L.m - L.S - L.D
    assert L.final == union


def repetition_gain(L, H, T, g) -> None:
    union = H | project(edges=T)
    gain = subgraph_repetitions(g, union.edges) - subgraph_repetitions(g, H.edges)
    assert gain >= L.r * L.m - L.D - L.d, (gain, L.r * L.m - L.D - L.d)


def closed_form_counts(L, H, T) -> None:
    r = L.r
    for k in range(r):
        proj_vertices = {t[k] for e in T for t in e}
        assert L.N_k[k] == len(proj_vertices - H.vertices), f"N_{k}"
        pre = Counter(project_edge(a, b)[k] for a, b in T)
        expect = sum(max(0, c - (e not in H.edges)) for e, c in pre.items())
        assert L.D_k[k] == expect, f"D_{k}: {L.D_k[k]} != {expect}"


def order_invariance(pg, H, T, rng, orderings: int = 10) -> None:
    base = reveal_ledger(RevealInstance(pg, H, h_compatible_order(H, T)))
    for _ in range(orderings):
        sigma = h_compatible_order(H, T, rng=rng)
        ok, _ = h_compatible_order(H, T, mode="check", sigma=sigma)
        assert ok
        L = reveal_ledger(RevealInstance(pg, H, sigma))
        assert (L.N_k, L.S_k, L.D_k) == (base.N_k, base.S_k, base.D_k)


def additivity(pg, H, T, rng) -> None:
    """Split a compatible order at a random point and compare savings exactly."""
    sigma = h_compatible_order(H, T, rng=rng)
    cut = int(rng.integers(0, len(sigma) + 1))
    s1, s2 = sigma[:cut], sigma[cut:]
    whole = total_savings(reveal_ledger(RevealInstance(pg, H, sigma)))
    first = reveal_ledger(RevealInstance(pg, H, s1))
    H2 = H | project(edges=s1)
    second = reveal_ledger(RevealInstance(pg, H2, s2))
    assert whole == total_savings(first) + total_savings(second)
    assert isinstance(whole, Fraction)


def monotonicity(pg, F1, T, rng, pairs: int = 20) -> None:
    """For F1 <= F2 and one F1-compatible order, N_k drops and D_k grows."""
    sigma = h_compatible_order(F1, T, rng=rng)
    L1 = reveal_ledger(RevealInstance(pg, F1, sigma))
    n = pg.n
    for _ in range(pairs):
        extra_v = {int(x) for x in rng.choice(n, size=int(rng.integers(0, 4)), replace=False)}
        extra_e = set()
        union_T = project(edges=T)
        pool = sorted(union_T.edges)
        for _ in range(int(rng.integers(0, 4))):
            if pool and rng.random() < 0.6:
                extra_e.add(pool[int(rng.integers(len(pool)))])
            else:
                u, v = rng.choice(n, size=2, replace=False)
                extra_e.add((int(min(u, v)), int(max(u, v))))
        F2 = F1 | Subgraph.build(extra_v, extra_e)
        assert F1 <= F2
        L2 = reveal_ledger(RevealInstance(pg, F2, sigma))
        for k in range(pg.r):
            assert L1.N_k[k] >= L2.N_k[k]
            assert L1.D_k[k] <= L2.D_k[k]


def all_laws(f, seed: int, orderings: int = 10, pairs: int = 20) -> None:
    rng = np.random.default_rng(seed)
    L = reveal_ledger(RevealInstance.generate(f.pg, f.H, f.T))
    step_and_total_counts(L)
    vertex_count_exact(L, f.H, f.T)
    repetition_gain(L, f.H, f.T, f.pg.base)
    closed_form_counts(L, f.H, f.T)
    order_invariance(f.pg, f.H, f.T, rng, orderings)
    additivity(f.pg, f.H, f.T, rng)
    monotonicity(f.pg, f.H, f.T, rng, pairs)
