"""Prune an energy graph, then watch the revealing ledger account for a cycle.

A 6-cycle is planted in both coordinates of a random coloring. The pruned
graph keeps it, and revealing it edge by edge shows where the new, shared
and delayed vertices come from. Walking around the cycle, only the last edge
lands on vertices that are already known, and that is where the savings are.
"""

from __future__ import annotations

from colorenergy import (
    RevealInstance,
    build_pruned,
    make_pattern,
    planted_coloring,
    reveal_ledger,
    verify_pruned,
)
from colorenergy.reveal import canonical_path_order, project


def main() -> None:
    r = 2
    pattern = make_pattern("theta", 3, 2)  # two 3-edge paths between 0 and 1
    first, second = pattern.meta["paths"]
    cycle = list(first) + list(reversed(second))[1:]
    inst = planted_coloring(40, pattern, r, seed=7)
    pg = build_pruned(inst.g, r, partition=inst.partition)
    rep = verify_pruned(pg)
    degrees = [len(ns) for ns in pg.adjacency.values()]
    print(f"pruned graph: {len(pg.adjacency)} tuples, max degree {max(degrees)}, "
          f"properties hold: {rep.ok}")

    path = [inst.tuple_of(v) for v in cycle]
    assert all(b in pg.adjacency[a] for a, b in zip(path, path[1:])), "plant was pruned away"

    H = project(vertices=[path[0]])
    ledger = reveal_ledger(RevealInstance(pg, H, canonical_path_order(path)))
    print(f"\nrevealing {ledger.m} edges around the cycle:")
    for k, st in enumerate(ledger.steps, 1):
        print(f"  step {k}: flags {''.join(st.flags)}  new vertices {sorted(st.new_vertices)}")
    print(f"\nN={ledger.N} S={ledger.S} D={ledger.D} (sum {ledger.N + ledger.S + ledger.D} "
          f"= r*m = {r * ledger.m})")
    print(f"savings: {ledger.sav}")
    print(f"revealed base vertices: {len(H.vertices)} + N = {len(ledger.final.vertices)}")


if __name__ == "__main__":
    main()
