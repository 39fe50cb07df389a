"""Small exact values of f(n, p, q) and the exponent bookkeeping for large n.

The exact search certifies both directions: a witness coloring with f colors,
and an exhausted search tree with f - 1. The exponent table then compares
the energy-method lower bounds with the random-coloring upper bound.
"""

from __future__ import annotations

from colorenergy import exact_f, exponent_entry, is_pq_coloring
from colorenergy.exact import search_exhausts


def main() -> None:
    print("exact values:")
    for n, p, q in [(4, 3, 3), (5, 3, 3), (7, 3, 3), (6, 4, 5), (5, 4, 6)]:
        res = exact_f(n, p, q)
        ok = is_pq_coloring(res.witness_coloring, (p, q)).ok
        tight = search_exhausts(n, p, q, res.f_value - 1)
        print(f"  f({n},{p},{q}) = {res.f_value}  witness valid: {ok}, "
              f"{res.f_value - 1} colors impossible: {tight}, {res.nodes_explored} nodes")

    print("\nexponents (f(n,p,q) lies between n^lower and n^upper up to constants):")
    for name, params in [
        ("theta", dict(r=2, a=3, b=2)),
        ("theta", dict(r=3, a=4, b=2)),
        ("subkt", dict(t=4)),
        ("subktt", dict(r=2, b=3, ell=2)),
        ("cycle", dict(r=2, k=4)),
    ]:
        row = exponent_entry(name, **params)
        lo = "-" if row.lower_exponent is None else str(row.lower_exponent)
        print(f"  {name:7s} {params}: (p,q)=({row.p},{row.q})  lower {lo}  "
              f"upper {row.upper_exponent}")


if __name__ == "__main__":
    main()
