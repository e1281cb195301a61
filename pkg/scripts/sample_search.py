#!/usr/bin/env python3
"""Seeded randomized evidence for the open question at a chosen prime.

Usage: sample_search.py [p] [samples] [seed]
"""

import sys

from galdir import Prime, dump_report, reverify_report, search_open_problem

def main():
    p = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    samples = int(sys.argv[2]) if len(sys.argv) > 2 else 100000
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 42
    prime = Prime(p)
    report = search_open_problem(prime, "sample", samples=samples, seed=seed)
    reverify_report(prime, report)
    sys.stdout.write(dump_report(report))

if __name__ == "__main__":
    main()
