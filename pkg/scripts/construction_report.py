#!/usr/bin/env python3
"""Direction counts of the power-graph constructions for small odd primes.

The 'plus' variant {(k, k^((p+1)/2))} provably determines exactly (p+3)/2
directions; the 'minus' variant {(k, k^((p-1)/2))} is reported for
comparison (its count is an open question, not asserted).
"""

from galdir import Prime, construct_power_graph, determined_directions, plane_stats

def main():
    print("p   variant  N   determined  special  (p+3)/2")
    for p in (3, 5, 7, 11, 13):
        prime = Prime(p)
        for variant in ("plus", "minus"):
            U = construct_power_graph(prime, variant)
            det = len(determined_directions(U))
            stats = plane_stats(U)
            print(
                f"{p:<3} {variant:<8} {U.N:<3} {det:<11} "
                f"{stats.special_count:<8} {(p + 3) // 2}"
            )

if __name__ == "__main__":
    main()
