"""The finite affine plane F_p^2: point sets, lines, directions, intersection
histograms, rich/poor/special classification and affine coordinate changes.

Conventions
-----------
* A point is a pair ``(a, b)`` of ints in [0, p).
* A direction is an int in [0, p]: values 0..p-1 are finite slopes, the
  value p denotes the vertical direction (printed as "inf").  This ordering
  (finite slopes first, vertical last) is also the deterministic branching
  order used everywhere.
* A line is a pair ``(direction, k)``.  For a finite slope m the line is
  {(u, v): v = m*u - k}; the minus sign is deliberate, it makes intercepts
  coincide with roots of the specialized Redei polynomial.  For the vertical
  direction the line is the column {(u, v): u = k}.

All threshold comparisons against theta = N/p are done on exact integers
(count * p versus N +- p); no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation, PointSetFormatError
from .field import Prime

RICH = "rich"
POOR = "poor"
GENERIC = "generic"


def directions(p):
    """All p + 1 direction codes in canonical order (vertical last)."""
    return range(p + 1)


def is_vertical(p, d):
    return d == p


def direction_label(p, d):
    return "inf" if d == p else str(d)


def parse_direction(p, text):
    if text == "inf":
        return p
    d = int(text)
    if not 0 <= d < p:
        raise ValueError(f"slope {text} out of range for p={p}")
    return d


def line_through(p, point, d):
    """The unique line with direction d through the given point."""
    a, b = point
    if d == p:
        return (d, a)
    return (d, (d * a - b) % p)


def line_points(p, line):
    d, k = line
    if d == p:
        return [(k, v) for v in range(p)]
    return [(u, (d * u - k) % p) for u in range(p)]


def pair_direction(prime, pt1, pt2):
    """Direction code of the line joining two distinct points."""
    a, b = pt1
    a2, b2 = pt2
    if a == a2:
        if b == b2:
            raise ValueError("pair_direction needs two distinct points")
        return prime.p
    return ((b - b2) * prime.inverses[(a - a2) % prime.p]) % prime.p


class PointSet:
    """An immutable nonempty subset U of F_p^2 with its derived parameters.

    N = #U, n = ceil(N / p), r = n*p - N, theta = N/p (exact rational).
    Points are stored sorted row-major, so equality and hashing are
    canonical.
    """

    __slots__ = ("prime", "points", "_hash")

    def __init__(self, prime, points):
        p = prime.p
        raw = [(int(a), int(b)) for a, b in points]
        pts = sorted(set(raw))
        if len(pts) != len(raw):
            raise ValueError("duplicate points in point set")
        if not pts:
            raise ValueError("point set must be nonempty")
        for a, b in pts:
            if not (0 <= a < p and 0 <= b < p):
                raise ValueError(f"point ({a}, {b}) outside F_{p}^2")
        self.prime = prime
        self.points = tuple(pts)
        self._hash = hash((prime.p, self.points))

    @property
    def N(self):
        return len(self.points)

    @property
    def n(self):
        return -(-len(self.points) // self.prime.p)

    @property
    def r(self):
        return self.n * self.prime.p - len(self.points)

    @property
    def theta(self):
        return Fraction(len(self.points), self.prime.p)

    def __contains__(self, pt):
        return pt in set(self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and other.prime == self.prime
            and other.points == self.points
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PointSet(p={self.prime.p}, N={self.N}, {list(self.points)!r})"

    # -- text format ------------------------------------------------------

    def dump(self):
        lines = [f"p {self.prime.p}"]
        lines.extend(f"{a} {b}" for a, b in self.points)
        return "\n".join(lines) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dump())

    @classmethod
    def loads(cls, text):
        prime = None
        points = []
        seen = set()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if prime is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "p":
                    raise PointSetFormatError(
                        f"expected header 'p <prime>', got {raw!r}", lineno
                    )
                try:
                    prime = Prime(int(parts[1]))
                except ValueError as exc:
                    raise PointSetFormatError(str(exc), lineno) from exc
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PointSetFormatError(
                    f"expected '<a> <b>', got {raw!r}", lineno
                )
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise PointSetFormatError(f"bad integer in {raw!r}", lineno) from exc
            if not (0 <= a < prime.p and 0 <= b < prime.p):
                raise PointSetFormatError(
                    f"coordinate ({a}, {b}) outside [0, {prime.p})", lineno
                )
            if (a, b) in seen:
                raise PointSetFormatError(f"duplicate point ({a}, {b})", lineno)
            seen.add((a, b))
            points.append((a, b))
        if prime is None:
            raise PointSetFormatError("missing 'p <prime>' header")
        if not points:
            raise PointSetFormatError("point set must be nonempty")
        return cls(prime, points)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())

    @classmethod
    def from_bitmask(cls, prime, mask):
        """Subset of F_p^2 from a bitmask over row-major point indices."""
        p = prime.p
        pts = [divmod(i, p) for i in range(p * p) if mask >> i & 1]
        return cls(prime, pts)


@dataclass(frozen=True)
class DirectionProfile:
    """Everything the classification knows about one direction."""

    direction: int
    histogram: tuple  # intersection count of each of the p parallel lines
    pair_count: int  # point pairs of U joined along this direction (c_m)
    classification: str  # RICH / POOR / GENERIC
    rich_line_count: int  # w_m
    rich_point_total: int  # z_m, total points of U on the rich lines
    rich_intercepts: tuple  # intercepts k of the rich lines, sorted


def histogram(U, d):
    p = U.prime.p
    h = [0] * p
    if d == p:
        for a, _ in U.points:
            h[a] += 1
    else:
        for a, b in U.points:
            h[(d * a - b) % p] += 1
    return h


def classify_direction(U, d):
    p = U.prime.p
    N = U.N
    h = histogram(U, d)
    rich_k = [k for k, cnt in enumerate(h) if cnt * p >= N + p]
    has_poor = any(cnt * p <= N - p for cnt in h)
    if rich_k:
        cls = RICH
    elif has_poor:
        cls = POOR
    else:
        cls = GENERIC
    return DirectionProfile(
        direction=d,
        histogram=tuple(h),
        pair_count=sum(c * (c - 1) // 2 for c in h),
        classification=cls,
        rich_line_count=len(rich_k),
        rich_point_total=sum(h[k] for k in rich_k),
        rich_intercepts=tuple(rich_k),
    )


def pair_count(U, d):
    """c_m for one direction, computed two independent ways.

    (i) enumerate all point pairs and test the slope; (ii) sum C(count, 2)
    over the direction's histogram.  A mismatch is an internal error.
    """
    prime = U.prime
    pts = U.points
    by_pairs = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pair_direction(prime, pts[i], pts[j]) == d:
                by_pairs += 1
    by_hist = sum(c * (c - 1) // 2 for c in histogram(U, d))
    if by_pairs != by_hist:
        raise InvariantViolation(
            f"pair count mismatch for direction {direction_label(prime.p, d)}: "
            f"{by_pairs} by pairs vs {by_hist} by histogram on {U!r}"
        )
    return by_hist


def pair_counts_by_enumeration(U):
    """All p + 1 pair counts from one pass over the point pairs."""
    prime = U.prime
    pts = U.points
    counts = [0] * (prime.p + 1)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            counts[pair_direction(prime, pts[i], pts[j])] += 1
    return counts


@dataclass(frozen=True)
class PlaneStats:
    """Per-direction profiles plus the global counts of the classification.

    special_count/rich_count/rich_line_count/rich_point_total/rich_line_sq
    are the quantities usually written D, E, W, Z, Q.  The *_nonvertical
    variants exclude the vertical direction; the *_clamped values are the
    nonvertical counts clamped up to 1.
    """

    profiles: tuple  # indexed by direction code
    special_count: int  # D
    rich_count: int  # E
    rich_line_count: int  # W
    rich_point_total: int  # Z
    rich_line_sq: int  # Q
    special_nonvertical: int  # D*
    rich_nonvertical: int  # E*
    special_clamped: int  # D-dagger
    rich_clamped: int  # E-dagger
    rich_lines: tuple  # all rich lines as (direction, intercept)

    def profile(self, d):
        return self.profiles[d]

    def special_directions(self):
        return [pr.direction for pr in self.profiles if pr.classification != GENERIC]

    def rich_directions(self):
        return [pr.direction for pr in self.profiles if pr.classification == RICH]


def plane_stats(U):
    p = U.prime.p
    profiles = tuple(classify_direction(U, d) for d in directions(p))
    D = sum(1 for pr in profiles if pr.classification != GENERIC)
    E = sum(1 for pr in profiles if pr.classification == RICH)
    W = sum(pr.rich_line_count for pr in profiles)
    Z = sum(pr.rich_point_total for pr in profiles)
    Q = sum(pr.rich_line_count ** 2 for pr in profiles)
    D_star = sum(1 for pr in profiles[:p] if pr.classification != GENERIC)
    E_star = sum(1 for pr in profiles[:p] if pr.classification == RICH)
    total = sum(pr.pair_count for pr in profiles)
    N = U.N
    if total != N * (N - 1) // 2:
        raise InvariantViolation(
            f"pair totals {total} != C({N},2) on {U!r}"
        )
    rich_lines = tuple(
        (pr.direction, k) for pr in profiles for k in pr.rich_intercepts
    )
    return PlaneStats(
        profiles=profiles,
        special_count=D,
        rich_count=E,
        rich_line_count=W,
        rich_point_total=Z,
        rich_line_sq=Q,
        special_nonvertical=D_star,
        rich_nonvertical=E_star,
        special_clamped=max(D_star, 1),
        rich_clamped=max(E_star, 1),
        rich_lines=rich_lines,
    )


def determined_directions(U):
    """Directions realized by a pair of distinct points of U."""
    if U.N < 2:
        raise ValueError("determined directions need at least two points")
    return {d for d, c in enumerate(pair_counts_by_enumeration(U)) if c > 0}


def is_collinear(U):
    if U.N <= 2:
        return True
    return len(determined_directions(U)) == 1


def is_covered_by_n_lines(U, n):
    """Witness cover by at most n lines, or None.

    Point-driven branch and bound: pick the first uncovered point (row-major
    order), branch over the p + 1 lines through it in canonical direction
    order, prune when the budget cannot cover the remainder.
    """
    if n < 0:
        raise ValueError("line budget must be >= 0")
    p = U.prime.p
    pts = U.points
    npts = len(pts)
    index = {pt: i for i, pt in enumerate(pts)}
    full = (1 << npts) - 1
    mask_cache = {}

    def line_mask(line):
        m = mask_cache.get(line)
        if m is None:
            m = 0
            for pt in line_points(p, line):
                i = index.get(pt)
                if i is not None:
                    m |= 1 << i
            mask_cache[line] = m
        return m

    def dfs(uncovered, depth, chosen):
        if uncovered == 0:
            return list(chosen)
        if depth == n:
            return None
        if uncovered.bit_count() > (n - depth) * p:
            return None
        pt = pts[(uncovered & -uncovered).bit_length() - 1]
        for d in directions(p):
            line = line_through(p, pt, d)
            chosen.append(line)
            res = dfs(uncovered & ~line_mask(line), depth + 1, chosen)
            if res is not None:
                return res
            chosen.pop()
        return None

    return dfs(full, 0, [])


def top_line_counts_reject(U, n):
    """Cheap certificate of non-coverability: the n most populated lines of
    the whole plane together hold fewer than N points.  Returns True when the
    set is certainly not coverable by n lines (False is inconclusive)."""
    p = U.prime.p
    counts = []
    for d in directions(p):
        counts.extend(histogram(U, d))
    counts.sort(reverse=True)
    return sum(counts[:n]) < U.N


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine transformation (u, v) -> M (u, v) + t of F_p^2."""

    prime: Prime
    m00: int
    m01: int
    m10: int
    m11: int
    t0: int = 0
    t1: int = 0

    def __post_init__(self):
        p = self.prime.p
        for name in ("m00", "m01", "m10", "m11", "t0", "t1"):
            object.__setattr__(self, name, getattr(self, name) % p)
        if (self.m00 * self.m11 - self.m01 * self.m10) % p == 0:
            raise ValueError("affine map must have invertible linear part")

    @classmethod
    def identity(cls, prime):
        return cls(prime, 1, 0, 0, 1)

    @classmethod
    def swap(cls, prime):
        """(u, v) -> (v, u); exchanges slope 0 and the vertical direction."""
        return cls(prime, 0, 1, 1, 0)

    @classmethod
    def direction_to_vertical(cls, prime, d):
        """A map sending the given direction to the vertical one."""
        if d == prime.p:
            return cls.identity(prime)
        return cls(prime, d, -1, 1, 0)

    def apply_point(self, pt):
        p = self.prime.p
        a, b = pt
        return (
            (self.m00 * a + self.m01 * b + self.t0) % p,
            (self.m10 * a + self.m11 * b + self.t1) % p,
        )

    def apply(self, U):
        return PointSet(self.prime, [self.apply_point(pt) for pt in U.points])

    def direction_image(self, d):
        p = self.prime.p
        if d == p:
            du, dv = self.m01, self.m11
        else:
            du = (self.m00 + self.m01 * d) % p
            dv = (self.m10 + self.m11 * d) % p
        if du % p == 0:
            return p
        return (dv * self.prime.inverses[du % p]) % p

    def line_image(self, line):
        """Image of a line, recomputed from the images of two of its points."""
        pts = line_points(self.prime.p, line)
        q1 = self.apply_point(pts[0])
        d = self.direction_image(line[0])
        return line_through(self.prime.p, q1, d)

    def inverse(self):
        p = self.prime.p
        det_inv = self.prime.inverses[(self.m00 * self.m11 - self.m01 * self.m10) % p]
        i00 = (self.m11 * det_inv) % p
        i01 = (-self.m01 * det_inv) % p
        i10 = (-self.m10 * det_inv) % p
        i11 = (self.m00 * det_inv) % p
        return AffineMap(
            self.prime,
            i00,
            i01,
            i10,
            i11,
            -(i00 * self.t0 + i01 * self.t1),
            -(i10 * self.t0 + i11 * self.t1),
        )
