from __future__ import annotations

import dataclasses
from math import comb

import pytest

from colorenergy import (
    PipelineParams,
    build_pruned,
    extract_subKt,
    extract_subKtt,
    extract_theta,
    generate_coloring,
    greedy_low_color_clique,
    incidence_witness,
    is_pq_coloring,
    make_pattern,
    validate_witness,
)
from colorenergy.errors import Inapplicable, InvalidParams, NotFound
from colorenergy.witness import (
    WitnessReport,
    greedy_pq,
    greedy_survival_guaranteed,
    incidence_pq,
    subkt_pq,
    subktt_pq,
    theta_pq,
)

from conftest import mono, rainbow
from fuzz import planted_pg


def meets_pattern_bound(rep, r, pattern):
    need = (r - 1) * len(pattern.edges)
    return rep.repetitions >= need and rep.p_claimed <= r * pattern.num_vertices


def test_pq_formulas():
    assert subkt_pq(3) == (12, 61)
    assert theta_pq(2, 3, 2) == (12, 61)
    assert theta_pq(2, 3, 3) == (16, 112)
    assert subktt_pq(2, 3, 2) == (30, 418)
    # a witness carries C(p,2) - q + 1 repetitions, so k=3, m=1 gives q = 3
    assert greedy_pq(3, 1) == (3, 3)
    assert incidence_pq(2, 1, 2) == (4, 6)


@pytest.mark.parametrize("t,n", [(3, 40), (4, 40)])
def test_subkt_planted(t, n):
    inst, pg = planted_pg(f"ktplus:{t}", 2, n, seed=t)
    rep = extract_subKt(pg, t)
    assert validate_witness(inst.g, rep)
    assert (rep.p_claimed, rep.q_claimed) == subkt_pq(t)
    assert meets_pattern_bound(rep, 2, make_pattern("ktplus", t))


def test_subkt_and_theta_agree_on_c6():
    inst, pg = planted_pg("cycle_star:3,18", 2, 60, seed=5)
    a = extract_subKt(pg, 3)
    b = extract_theta(pg, 3, 2)
    assert (a.p_claimed, a.q_claimed) == (b.p_claimed, b.q_claimed) == (12, 61)
    assert validate_witness(inst.g, a) and validate_witness(inst.g, b)


@pytest.mark.parametrize("a,k,n", [(3, 18, 60), (4, 24, 70)])
def test_theta_b2_planted(a, k, n):
    inst, pg = planted_pg(f"cycle_star:{a},{k}", 2, n, seed=a)
    rep = extract_theta(pg, a, 2)
    assert validate_witness(inst.g, rep)
    assert (rep.p_claimed, rep.q_claimed) == theta_pq(2, a, 2)
    assert rep.provenance["case"] == "cycle_star"
    assert meets_pattern_bound(rep, 2, make_pattern("theta", a, 2))


def test_theta_b3_planted():
    inst, pg = planted_pg("theta:3,12", 2, 52, seed=1)
    rep = extract_theta(pg, 3, 3)
    assert validate_witness(inst.g, rep)
    assert (rep.p_claimed, rep.q_claimed) == (16, 112)
    assert rep.repetitions >= 9


def test_theta_r3_planted():
    inst, pg = planted_pg("cycle_star:4,30", 3, 3 * 38 + 2, seed=2)
    rep = extract_theta(pg, 4, 2)
    assert validate_witness(inst.g, rep)
    assert (rep.p_claimed, rep.q_claimed) == theta_pq(3, 4, 2)


def test_subktt_planted():
    inst, pg = planted_pg("kab_l:3,9,2", 2, 80, seed=0)
    rep = extract_subKtt(pg, 3, 2)
    assert validate_witness(inst.g, rep)
    assert (rep.p_claimed, rep.q_claimed) == (30, 418)
    assert rep.repetitions >= 18
    # with ell = 2 every chapter is a whole page
    assert all(ch["picked_page"] is not None for ch in rep.provenance["chapters"])


def test_parameter_errors():
    _, pg2 = planted_pg("cycle_star:3,6", 2, 40)
    with pytest.raises(InvalidParams):
        extract_theta(pg2, 2, 2)
    with pytest.raises(InvalidParams):
        extract_theta(pg2, 3, 1)
    with pytest.raises(InvalidParams):
        extract_subKtt(pg2, 3, 1)
    _, pg3 = planted_pg("cycle_star:3,6", 3, 60)
    with pytest.raises(InvalidParams):
        extract_subKtt(pg3, 3, 2)  # r >= 3*ell/2
    with pytest.raises(InvalidParams):
        extract_subKt(pg3, 3)


def test_rainbow_gives_exhaustive_not_found():
    pg = build_pruned(rainbow(20), 2)
    for run in (lambda: extract_subKt(pg, 3), lambda: extract_theta(pg, 3, 2),
                lambda: extract_theta(pg, 3, 3), lambda: extract_subKtt(pg, 3, 2)):
        with pytest.raises(NotFound) as exc:
            run()
        assert exc.value.exhaustive


@pytest.mark.parametrize("seed", [1, 2, 4])
def test_subktt_noise_degree_above_plant(seed):
    # background colors push the max degree past the 9 planted pages
    inst, pg = planted_pg("kab_l:3,9,2", 2, 80, seed=seed, palette=400)
    rep = extract_subKtt(pg, 3, 2, PipelineParams(multiplicity=40))
    assert validate_witness(inst.g, rep)
    assert rep.provenance["multiplicity"] == 9


def test_multiplicity_recorded():
    inst, pg = planted_pg("cycle_star:3,10", 2, 60, seed=3)
    rep = extract_theta(pg, 3, 2, PipelineParams(multiplicity=5))
    assert rep.provenance["multiplicity_requested"] == 5
    assert rep.provenance["multiplicity"] <= 5


# --- direct pipelines --------------------------------------------------------------

def test_greedy_examples():
    rep = greedy_low_color_clique(mono(5), 3, 1)
    assert rep.distinct_colors == 1 <= comb(3, 2) - 2 - 0 + 1
    assert validate_witness(mono(5), rep)
    with pytest.raises(Inapplicable):
        greedy_low_color_clique(rainbow(8), 3, 1)
    with pytest.raises(InvalidParams):
        greedy_low_color_clique(mono(5), 3, 3)


@pytest.mark.parametrize("n", [20, 40, 60])
@pytest.mark.parametrize("k,m", [(3, 1), (4, 1), (5, 2), (6, 3), (6, 1), (4, 2)])
def test_greedy_guarantee(n, k, m):
    for c in range(1, 40):
        if not greedy_survival_guaranteed(n, c, k, m):
            break
        for seed in range(3):
            g = generate_coloring(n, "random", c, seed=seed)
            rep = greedy_low_color_clique(g, k, m)
            assert rep.distinct_colors <= comb(k, 2) - m * (k - m) - comb(m, 2) + m
            assert validate_witness(g, rep)


def test_incidence_star_in_one_color():
    F = make_pattern("path", 3)  # K_{1,2}; leaves on the vertex side
    rep = incidence_witness(mono(6), F, 1.5, side_a={0, 2})
    assert (rep.p_claimed, rep.q_claimed) == (4, 6)
    assert validate_witness(mono(6), rep)


def test_incidence_c4_on_modular_coloring():
    g = generate_coloring(12, "modular", 6)
    F = make_pattern("theta", 2, 2)  # C_4
    rep = incidence_witness(g, F, 1.5)
    assert validate_witness(g, rep)


def test_incidence_threshold_empties_graph():
    with pytest.raises(NotFound) as exc:
        incidence_witness(rainbow(16), make_pattern("path", 3), 1.2, side_a={0, 2})
    assert exc.value.exhaustive


def test_incidence_parameter_errors():
    with pytest.raises(InvalidParams):
        incidence_witness(mono(6), make_pattern("path", 3), 2.0)
    with pytest.raises(InvalidParams):
        incidence_witness(mono(6), make_pattern("path", 2), 1.5)


# --- validation ------------------------------------------------------------------------

def test_validate_rejects_tampering():
    inst, pg = planted_pg("ktplus:3", 2, 40, seed=3)
    rep = extract_subKt(pg, 3)
    assert validate_witness(inst.g, rep)
    bad = dataclasses.replace(rep, repetitions=rep.repetitions + 5)
    assert not validate_witness(inst.g, bad)
    bad = dataclasses.replace(rep, q_claimed=comb(rep.p_claimed, 2))
    assert validate_witness(inst.g, bad)  # weaker claim is still a violation
    bad = dataclasses.replace(rep, p_claimed=rep.p_claimed - 1)
    assert not validate_witness(inst.g, bad)


def test_validate_rejects_compliant_clique():
    g = rainbow(12)
    assert is_pq_coloring(g, (12, 61)).ok
    fake = WitnessReport(tuple(range(12)), 12, 61, 66, 0, "manual")
    assert not validate_witness(g, fake)
