"""How many colors does a coloring with low color energy need?

Walks through verification, the energy graph, and the power-mean bound
on three small colorings of K_n.
"""

from __future__ import annotations

from colorenergy import (
    ColoredCompleteGraph,
    build_energy_graph,
    generate_coloring,
    holder_lower_bound,
    is_pq_coloring,
)


def describe(name: str, g: ColoredCompleteGraph) -> None:
    sizes = sorted(g.class_sizes().tolist())
    print(f"\n== {name}: n={g.n}, {g.num_colors} colors, class sizes {sizes}")
    verdict = is_pq_coloring(g, (3, 3))
    print(f"  every triangle rainbow? {verdict.ok}"
          + ("" if verdict.ok else f" (bad triple {verdict.violator.subset})"))
    for r in (2, 3):
        hb = holder_lower_bound(g, r)
        print(f"  r={r}: power sum {hb.power_sum}, colors >= {hb.bound_float:.3f}, "
              f"certificate {'holds' if hb.certificate_ok else 'FAILS'}, "
              f"tight={hb.is_tight}")


def main() -> None:
    # a 1-factorization of K_8: seven perfect matchings, all classes the same size
    describe("round robin K_8", generate_coloring(8, "round_robin"))
    # a modular coloring reuses colors unevenly, so the bound is strict
    describe("modular K_8, 5 colors", generate_coloring(8, "modular", 5))
    # equality needs equal class sizes, which iid colors rarely give
    describe("random K_8, 4 colors", generate_coloring(8, "random", 4, seed=1))

    g = generate_coloring(6, "round_robin")
    eg = build_energy_graph(g, 2)
    print(f"\nenergy graph of round robin K_6 at r=2: {eg.edge_count_exact} edges, "
          f"power sum {eg.paper_edge_statistic} (edges = 2 * power sum)")


if __name__ == "__main__":
    main()
