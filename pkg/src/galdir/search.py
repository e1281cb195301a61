"""Evidence gathering for the open question: over many point sets that are
not coverable by their n lines, record the minimum number of special
directions per (n, r) class and compare it against both the proved bound
ceil((p+n+2-r)/(n+1)) and the conjectured bound ceil((p+3-r)/2).

The search is deterministic: exhaustive mode enumerates subsets by bitmask
index; sample mode draws from ``random.Random(seed)`` (the stdlib Mersenne
Twister, stable across platforms and releases).  Work is split into
contiguous task chunks whose partial results are merged by a deterministic
reducer, so the report is byte-identical for any worker count and resumable
from a line-oriented checkpoint file.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor

from .analysis import open_problem_bound, special_direction_bound
from .errors import InvariantViolation
from .field import Prime
from .plane import PointSet, is_covered_by_n_lines, plane_stats

EXHAUSTIVE_MAX_PRIME = 5
LONG_RUN_PRIME = 5
CHUNK_SIZE = 1 << 13
CHECKPOINT_INTERVAL = 1 << 20


def _evaluate_points(prime, pts):
    """(n, r, D, pts) for a non-coverable set, or None when coverable.

    Avoids PointSet/plane_stats overhead: the per-direction histograms give
    both the special-direction count and the top-line coverability
    certificate; branch and bound runs only when the certificate is
    inconclusive.
    """
    p = prime.p
    N = len(pts)
    n = -(-N // p)
    r = n * p - N
    hists = [[0] * p for _ in range(p + 1)]
    vert = hists[p]
    for a, b in pts:
        for d in range(p):
            hists[d][(d * a - b) % p] += 1
        vert[a] += 1
    all_counts = []
    D = 0
    lo, hi = N - p, N + p
    for hist in hists:
        all_counts.extend(hist)
        scaled_max = max(hist) * p
        if scaled_max >= hi or min(hist) * p <= lo:
            D += 1
    all_counts.sort(reverse=True)
    if sum(all_counts[:n]) >= N:
        # certificate inconclusive: decide exactly
        U = PointSet(prime, pts)
        if is_covered_by_n_lines(U, n) is not None:
            return None
    return (n, r, D, pts)


def _merge_result(table, result):
    if result is None:
        return
    n, r, D, pts = result
    key = (n, r)
    value = (D, pts)
    if key not in table or value < table[key]:
        table[key] = value


def _exhaustive_task(prime, index):
    p = prime.p
    pts = tuple(divmod(i, p) for i in range(p * p) if index >> i & 1)
    return _evaluate_points(prime, pts)


def _sample_tasks(prime, samples, seed):
    """The deterministic sample list: task i has i % p^2 + 1 points."""
    p = prime.p
    rng = random.Random(seed)
    all_points = [divmod(i, p) for i in range(p * p)]
    tasks = []
    for i in range(samples):
        N = i % (p * p) + 1
        tasks.append(tuple(sorted(rng.sample(all_points, N))))
    return tasks


# -- checkpointing --------------------------------------------------------


def _checkpoint_lines(prime, mode, seed, samples, done, table):
    lines = ["galdir-checkpoint 1", f"p {prime.p}", f"mode {mode}"]
    if mode == "sample":
        lines.append(f"seed {seed}")
        lines.append(f"samples {samples}")
    lines.append(f"index {done}")
    for (n, r) in sorted(table):
        D, pts = table[(n, r)]
        body = ";".join(f"{a},{b}" for a, b in pts)
        lines.append(f"class {n} {r} {D} {body}")
    lines.append(f"lines {len(lines) + 1}")
    return lines


def save_checkpoint(path, prime, mode, seed, samples, done, table):
    text = "\n".join(_checkpoint_lines(prime, mode, seed, samples, done, table))
    with open(path, "w") as fh:
        fh.write(text + "\n")


def load_checkpoint(path, prime, mode, seed, samples):
    """Resume state (done, table) or None when absent/for a different run.

    Corruption is detected by the trailing line-count record.
    """
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        return None
    if not lines or lines[0] != "galdir-checkpoint 1":
        raise InvariantViolation(f"checkpoint {path}: unrecognized header")
    last = lines[-1].split()
    if len(last) != 2 or last[0] != "lines" or last[1] != str(len(lines)):
        raise InvariantViolation(
            f"checkpoint {path}: line count mismatch (file is corrupt)"
        )
    fields = {}
    table = {}
    for line in lines[1:-1]:
        key, _, rest = line.partition(" ")
        if key == "class":
            n, r, D, body = rest.split(" ", 3)
            pts = tuple(
                tuple(int(v) for v in part.split(",")) for part in body.split(";")
            )
            table[(int(n), int(r))] = (int(D), pts)
        else:
            fields[key] = rest
    same_run = (
        fields.get("p") == str(prime.p)
        and fields.get("mode") == mode
        and (mode != "sample" or fields.get("seed") == str(seed))
        and (mode != "sample" or fields.get("samples") == str(samples))
    )
    if not same_run:
        return None
    return int(fields["index"]), table


# -- the driver -----------------------------------------------------------


def search_open_problem(
    prime,
    mode="sample",
    *,
    samples=100000,
    seed=42,
    long_run=False,
    threads=1,
    checkpoint_path=None,
    checkpoint_interval=CHECKPOINT_INTERVAL,
):
    """Build the per-(n, r) minimum-special-direction report.

    Exhaustive mode enumerates all 2^(p^2) - 1 nonempty subsets and is
    refused for p > 5; p = 5 (33.5M subsets, hours in pure Python) further
    requires ``long_run=True``.
    """
    p = prime.p
    if mode not in ("exhaustive", "sample"):
        raise ValueError(f"unknown search mode {mode!r}")
    if mode == "exhaustive":
        if p > EXHAUSTIVE_MAX_PRIME:
            raise ValueError(
                f"exhaustive search refused for p = {p} > {EXHAUSTIVE_MAX_PRIME}: "
                f"2^{p * p} subsets is infeasible; use sample mode"
            )
        if p >= LONG_RUN_PRIME and not long_run:
            raise ValueError(
                f"exhaustive search for p = {p} visits 2^{p * p} subsets; "
                "pass long_run=True (--long-run) to confirm"
            )
        total = (1 << (p * p)) - 1
        task_args = None
    else:
        total = samples
        task_args = _sample_tasks(prime, samples, seed)

    done = 0
    table = {}
    if checkpoint_path is not None:
        state = load_checkpoint(checkpoint_path, prime, mode, seed, samples)
        if state is not None:
            done, table = state

    def run_chunk(bounds):
        start, stop = bounds
        partial = {}
        if mode == "exhaustive":
            for index in range(start, stop):
                _merge_result(partial, _exhaustive_task(prime, index + 1))
        else:
            for index in range(start, stop):
                _merge_result(partial, _evaluate_points(prime, task_args[index]))
        return partial

    chunks = [
        (start, min(start + CHUNK_SIZE, total))
        for start in range(done, total, CHUNK_SIZE)
    ]
    next_checkpoint = done + checkpoint_interval
    if threads > 1:
        pool = ThreadPoolExecutor(max_workers=threads)
    else:
        pool = None
    try:
        mapper = pool.map(run_chunk, chunks) if pool else map(run_chunk, chunks)
        for (start, stop), partial in zip(chunks, mapper):
            for key in sorted(partial):
                _merge_result(table, (*key, *partial[key]))
            done = stop
            if checkpoint_path is not None and done >= next_checkpoint:
                save_checkpoint(
                    checkpoint_path, prime, mode, seed, samples, done, table
                )
                next_checkpoint = done + checkpoint_interval
    finally:
        if pool:
            pool.shutdown()
    if checkpoint_path is not None:
        save_checkpoint(checkpoint_path, prime, mode, seed, samples, done, table)

    classes = []
    failures = []
    for (n, r) in sorted(table):
        D, pts = table[(n, r)]
        bound_thm = special_direction_bound(p, n, r)
        bound_problem = open_problem_bound(p, r)
        classes.append(
            {
                "n": n,
                "r": r,
                "min_D": D,
                "bound_thm": bound_thm,
                "bound_problem": bound_problem,
                "witness": [[a, b] for a, b in pts],
            }
        )
        if D < bound_thm:
            failures.append(
                {
                    "n": n,
                    "r": r,
                    "min_D": D,
                    "bound_thm": bound_thm,
                    "witness": [[a, b] for a, b in pts],
                }
            )
    report = {"p": p, "mode": mode, "classes": classes, "failures": failures}
    if mode == "sample":
        report["seed"] = seed
        report["samples"] = samples
    return report


def dump_report(report):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def reverify_report(prime, report):
    """Re-check every witness from scratch: not coverable by its n lines and
    exactly the claimed number of special directions.  Raises on mismatch."""
    for cls in report["classes"]:
        U = PointSet(prime, [tuple(pt) for pt in cls["witness"]])
        if U.n != cls["n"] or U.r != cls["r"]:
            raise InvariantViolation(
                f"witness for class ({cls['n']},{cls['r']}) has n={U.n}, r={U.r}"
            )
        if is_covered_by_n_lines(U, U.n) is not None:
            raise InvariantViolation(
                f"witness for class ({cls['n']},{cls['r']}) is coverable"
            )
        D = plane_stats(U).special_count
        if D != cls["min_D"]:
            raise InvariantViolation(
                f"witness for class ({cls['n']},{cls['r']}) has D={D}, "
                f"recorded {cls['min_D']}"
            )
