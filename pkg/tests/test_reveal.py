from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from colorenergy import (
    Reservoir,
    RevealInstance,
    Subgraph,
    apply_reservoir,
    build_pruned,
    construct_witness,
    eventual_savings_sites,
    h_compatible_order,
    reveal_ledger,
    total_savings,
)
from colorenergy.errors import (
    HypothesisViolated,
    IncompatibleOrder,
    InsufficientSavings,
    NoCompatibleOrder,
    NotAReservoir,
    ReservoirTooSmall,
)
from colorenergy.prune import Partition, PrunedEnergyGraph
from colorenergy.reveal import canonical_path_order, project

import laws
from conftest import mono
from fuzz import components, cycle_from_hub, fuzz_instance, planted_star, random_simple_path


def two_coord_graph():
    """r=2, classes {0,1},{2,3}, one edge (0,2)-(1,3) in a 1-color K_4."""
    part = Partition(((0, 1), (2, 3)),
                     ((frozenset({0}), frozenset({1})), (frozenset({2}), frozenset({3}))))
    return PrunedEnergyGraph(2, 4, part, (((0, 2), (1, 3)),), base=mono(4))


def three_coord_graph():
    part = Partition(((0, 1), (2, 3), (4, 5)),
                     tuple((frozenset({a}), frozenset({a + 1})) for a in (0, 2, 4)))
    return PrunedEnergyGraph(3, 6, part, (((0, 2, 4), (1, 3, 5)),), base=mono(6))


E = ((0, 2), (1, 3))


def ledger(pg, H, T):
    return reveal_ledger(RevealInstance.generate(pg, H, T))


def test_fresh_edge_reveals_two_new_vertices():
    H = Subgraph.build([0, 2])
    L = ledger(two_coord_graph(), H, [E])
    assert L.steps[0].flags == ("n", "n") and L.sav == 0
    assert len(L.final.vertices) == len(H.vertices) + 2


def test_known_vertex_is_a_saving():
    L = ledger(two_coord_graph(), Subgraph.build([0, 2, 3]), [E])
    assert L.steps[0].flags == ("n", "s") and L.sav == 1


def test_known_edge_is_delayed():
    L = ledger(two_coord_graph(), Subgraph.build([0, 2], [(2, 3)]), [E])
    assert L.steps[0].flags == ("n", "d")
    assert L.D_k == [0, 1] and L.sav == Fraction(2 - 1, 2 - 1)


def test_total_savings_fraction():
    L = ledger(three_coord_graph(), Subgraph.build([0, 2, 4], [(0, 1)]), [((0, 2, 4), (1, 3, 5))])
    assert L.steps[0].flags == ("d", "n", "n")
    assert total_savings(L) == 1
    L = ledger(three_coord_graph(), Subgraph.build([0, 2, 4], [(0, 1), (2, 3)]),
               [((0, 2, 4), (1, 3, 5))])
    assert total_savings(L) == Fraction(1, 2)
    L = ledger(two_coord_graph(), Subgraph.build([0, 2]), [E])
    assert total_savings(L) == 0


def test_no_compatible_order():
    with pytest.raises(NoCompatibleOrder):
        h_compatible_order(Subgraph.build([5]), [E])


def test_check_mode_and_incompatible_sigma():
    H = Subgraph.build([1, 3])
    sigma = h_compatible_order(H, [E])
    assert sigma == [((1, 3), (0, 2))]
    assert h_compatible_order(H, [E], mode="check", sigma=sigma) == (True, None)
    bad = [((0, 2), (1, 3))]
    assert h_compatible_order(H, [E], mode="check", sigma=bad) == (False, 1)
    with pytest.raises(IncompatibleOrder):
        reveal_ledger(RevealInstance(two_coord_graph(), H, bad))


def test_path_order_and_disjoint_concatenation():
    inst, pg = planted_star(0, 2)
    cyc = cycle_from_hub(inst)
    sigma = canonical_path_order(cyc)
    H = project(vertices=[cyc[0]])
    assert h_compatible_order(H, [tuple(sorted(e)) for e in sigma], mode="check",
                              sigma=sigma)[0]
    # two paths from the hub, concatenated
    leaves = [inst.tuple_of(v) for v in inst.pattern.meta["leaves"][:2]]
    part1 = canonical_path_order([cyc[0], leaves[0]])
    part2 = canonical_path_order([cyc[0], leaves[1]])
    T = [tuple(sorted(e)) for e in part1 + part2]
    assert h_compatible_order(H, T, mode="check", sigma=part1 + part2)[0]


def test_planted_cycle_closes_with_full_savings():
    for r in (2, 3):
        inst, pg = planted_star(1, r)
        cyc = cycle_from_hub(inst)
        H = project(vertices=[cyc[0]])
        L = reveal_ledger(RevealInstance(pg, H, canonical_path_order(cyc)))
        assert L.steps[-1].flags == ("s",) * r
        assert L.sav == r and L.D == 0


@pytest.mark.parametrize("seed", range(40))
def test_ledger_laws_fuzzed(seed):
    f = fuzz_instance(seed)
    laws.all_laws(f, seed, orderings=10, pairs=5)


def test_d_varies_while_counts_do_not():
    """Order invariance covers N_k, S_k, D_k only; d genuinely depends on the order."""
    rng = np.random.default_rng(0)
    f = fuzz_instance(14)
    ledgers = [reveal_ledger(RevealInstance(f.pg, f.H, h_compatible_order(f.H, f.T, rng=rng)))
               for _ in range(10)]
    assert len({L.d for L in ledgers}) > 1
    assert len({(tuple(L.N_k), tuple(L.S_k), tuple(L.D_k)) for L in ledgers}) == 1


# --- reservoirs --------------------------------------------------------------------

def _hub_reservoir(r, seed=0):
    inst, pg = planted_star(seed, r, leaves=3 * r)
    hub = inst.tuple_of(inst.pattern.meta["hub"])
    members = tuple(inst.tuple_of(v) for v in inst.pattern.meta["leaves"])
    return pg, project(vertices=[hub]), Reservoir(hub, members)


def test_apply_reservoir_examples():
    pg, H, R = _hub_reservoir(2)
    w = apply_reservoir(pg, H, R, 2)
    assert (w.trace["w"], w.trace["z"]) == (1, 0)
    assert len(w.vertices) == len(H.vertices) + 2 and w.new_repetitions >= 1
    pg, H, R = _hub_reservoir(3)
    w = apply_reservoir(pg, H, R, 5)
    assert (w.trace["w"], w.trace["z"]) == (1, 2)
    assert len(w.vertices) == len(H.vertices) + 5 and w.new_repetitions >= 3
    w = apply_reservoir(pg, H, R, 0)
    assert w.graph == H and w.new_repetitions == 0


@pytest.mark.parametrize("r", [2, 3])
def test_apply_reservoir_every_budget(r):
    pg, H, R = _hub_reservoir(r, seed=3)
    for D in range(r * len(R) + 1):
        w = apply_reservoir(pg, H, R, D)
        assert len(w.vertices) == len(H.vertices) + D
        assert w.new_repetitions >= (r - 1) * D // r
    with pytest.raises(ReservoirTooSmall):
        apply_reservoir(pg, H, R, r * len(R) + 1)


def test_reservoir_conditions_enforced():
    pg, H, R = _hub_reservoir(2)
    member = R.members[0]
    with pytest.raises(NotAReservoir):
        apply_reservoir(pg, H | project(vertices=[member]), R, 1)
    with pytest.raises(NotAReservoir):
        apply_reservoir(pg, Subgraph(), R, 1)


def test_construct_witness_on_planted_cycle():
    for r in (2, 3):
        inst, pg = planted_star(2, r)
        cyc = cycle_from_hub(inst)
        H = project(vertices=[cyc[0]])
        rinst = RevealInstance(pg, H, canonical_path_order(cyc))
        m = len(cyc) - 1
        w = construct_witness(rinst, None, r)
        assert len(w.vertices) <= len(H.vertices) + r * m - r
        assert w.new_repetitions >= (r - 1) * m
        with pytest.raises(InsufficientSavings):
            construct_witness(rinst, None, r + 1)


def test_construct_witness_degenerate_t0():
    pg = two_coord_graph()
    H = Subgraph.build([0, 2])
    w = construct_witness(RevealInstance.generate(pg, H, [E]), None, 0)
    assert w.graph == H | project(edges=[E]) and w.new_repetitions >= 1


def test_construct_witness_spends_reservoir():
    """Delayed coordinates leave fractional savings; the reservoir pays the rest."""
    r = 3
    inst, pg = planted_star(4, r, leaves=9)
    cyc = cycle_from_hub(inst)
    hub = cyc[0]
    sigma = canonical_path_order(cyc)
    a, b = sigma[0]
    H = project(vertices=[hub]) | Subgraph.build([], [tuple(sorted((a[0], b[0]))),
                                                      tuple(sorted((a[1], b[1])))])
    rinst = RevealInstance(pg, H, sigma)
    L = reveal_ledger(rinst)
    assert L.D == 2 and L.sav == Fraction(7, 2)
    R = Reservoir(hub, tuple(inst.tuple_of(v) for v in inst.pattern.meta["leaves"]))
    w = construct_witness(rinst, R, 3)
    assert w.trace["D_prime"] == L.S + L.D - 3 > 0
    assert len(w.vertices) <= len(H.vertices) + r * L.m - 3
    assert w.new_repetitions >= (r - 1) * L.m


# --- eventual savings -------------------------------------------------------------

def test_eventual_savings_same_step():
    pg = two_coord_graph()
    F = Subgraph.build([0, 2, 3])
    assert eventual_savings_sites(pg, F, [(0, 2), (1, 3)], 1, 1, 1) == 1


def test_eventual_savings_hypothesis_checks():
    pg = two_coord_graph()
    with pytest.raises(HypothesisViolated):
        eventual_savings_sites(pg, Subgraph.build([0, 2]), [(0, 2), (1, 3)], 1, 1, 1)
    with pytest.raises(HypothesisViolated):
        eventual_savings_sites(pg, Subgraph.build([0, 2, 3], [(2, 3)]), [(0, 2), (1, 3)], 1, 1, 1)
    with pytest.raises(HypothesisViolated):
        eventual_savings_sites(pg, Subgraph.build([0, 2, 3]), [(0, 2), (1, 3)], 1, 1, 2)


def eventual_case(seed):
    """A simple path in a dense pruned graph plus an F meeting the hypotheses."""
    rng = np.random.default_rng(seed)
    f = fuzz_instance(seed)
    comp = components(f.pg)[0]
    path = random_simple_path(f.pg, comp[int(rng.integers(len(comp)))], 6, rng)
    ell = len(path) - 1
    if ell < 1:
        return None
    k = int(rng.integers(f.pg.r))
    j2 = int(rng.integers(1, ell + 1))
    j = int(rng.integers(1, j2 + 1))
    F = project(vertices=[path[0]]) | Subgraph.build([path[j2][k]])
    return f.pg, F, path, k, j, j2


@pytest.mark.parametrize("seed", range(30))
def test_eventual_savings_located(seed):
    case = eventual_case(seed)
    if case is None:
        pytest.skip("isolated start")
    pg, F, path, k, j, j2 = case
    try:
        js = eventual_savings_sites(pg, F, path, k, j, j2)
    except HypothesisViolated:
        return
    assert j <= js <= j2
    L = reveal_ledger(RevealInstance(pg, F, canonical_path_order(path)))
    assert L.steps[js - 1].flags[k] == "s"


def test_rainbow_has_no_revealable_structure():
    from conftest import rainbow
    pg = build_pruned(rainbow(10), 2)
    assert all(len(v) <= 1 for v in pg.adjacency.values())
