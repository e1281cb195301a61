"""The polynomial-method engine.

Builds the Redei polynomial of a point set, its complement to x-degree n*p,
their product (monic of x-degree n*p), checks the specialization and
y-derivative divisibility statements, audits the lacunarity degree bounds,
factors lacunary degree-n*p polynomials into x^p - x / x^p - alpha blocks,
and recovers the rich lines of a direction algebraically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bipoly import BiPoly, product_of_point_factors
from .errors import InvariantViolation, LacunaryShapeError, OutOfTheoremRange
from .field import Poly
from .plane import (
    RICH,
    AffineMap,
    PointSet,
    classify_direction,
    is_vertical,
    line_points,
    plane_stats,
)

_XPX_CACHE = {}


def xp_minus_x_power(prime, n):
    """(x^p - x)^n as a univariate polynomial, by binomial expansion."""
    key = (prime.p, n)
    poly = _XPX_CACHE.get(key)
    if poly is None:
        p = prime.p
        coeffs = [0] * (n * p + 1)
        for i in range(n + 1):
            sign = 1 if (n - i) % 2 == 0 else -1
            coeffs[p * i + n - i] = sign * math.comb(n, i) % p
        poly = Poly(prime, coeffs)
        _XPX_CACHE[key] = poly
    return poly


def redei_polynomial(U):
    """Product of (x - a*y + b) over the points of U; monic in x, total
    degree #U."""
    if U.N == 0:
        raise ValueError("Redei polynomial of an empty set")
    return product_of_point_factors(U.prime, U.points)


@dataclass(frozen=True)
class RSBundle:
    """A point set with its degree-n*p polynomial apparatus.

    (x^p - x)^n == R * S + T exactly; H = R * S is monic of x-degree n*p
    with total degree n*p, so its x-coefficient of degree n*p - j has
    y-degree at most j.
    """

    U: PointSet
    n: int
    R: BiPoly
    S: BiPoly
    T: BiPoly
    H: BiPoly


def rs_bundle(U, n):
    prime = U.prime
    p = prime.p
    N = U.N
    if n * p < N:
        raise ValueError(f"complement needs n*p >= #U, got n={n}, p={p}, #U={N}")
    R = redei_polynomial(U)
    lhs = BiPoly.from_x_poly(xp_minus_x_power(prime, n))
    S, T = lhs.divmod_monic(R)
    H = R * S
    _assert_bundle_invariants(U, n, R, S, T, H, lhs)
    return RSBundle(U=U, n=n, R=R, S=S, T=T, H=H)


def _assert_bundle_invariants(U, n, R, S, T, H, lhs):
    p = U.prime.p
    N = U.N
    problems = []
    if R * S + T != lhs:
        problems.append("division identity broken")
    if R.x_degree != N or not R.is_monic_in_x():
        problems.append(f"R not monic of x-degree {N}")
    if S.x_degree != n * p - N or not S.is_monic_in_x():
        problems.append(f"S not monic of x-degree {n * p - N}")
    if not T.is_zero and T.x_degree >= N:
        problems.append("remainder x-degree not below #U")
    if H.total_degree() != n * p or H.x_degree != n * p:
        problems.append("H total degree != n*p")
    if problems:
        raise InvariantViolation(
            f"RS bundle invariants failed ({'; '.join(problems)}) on {U!r}"
        )


def check_nonrich_specialization(bundle, m, stats=None):
    """Whether H(x, m) == (x^p - x)^n for a non-rich finite slope m.

    The statement being verified says this is always true; the checker exists
    so the test suite can falsify it.
    """
    profile = stats.profile(m) if stats is not None else classify_direction(bundle.U, m)
    if profile.classification == RICH:
        raise OutOfTheoremRange(
            f"slope {m} is a rich direction; the specialization identity "
            "only applies to non-rich slopes"
        )
    return bundle.H.eval_y(m) == xp_minus_x_power(bundle.U.prime, bundle.n)


def remainder_vanishes(bundle, m):
    """Whether T(x, m) is the zero polynomial (equivalent form of the
    specialization identity for non-rich m)."""
    return bundle.T.eval_y(m).is_zero


def divmod_by_xp_minus_x(f):
    """Fast exact divmod of a univariate polynomial by x^p - x."""
    p = f.prime.p
    if f.degree < p:
        return Poly.zero(f.prime), f
    work = list(f.c)
    q = [0] * (len(work) - p)
    for i in range(len(work) - p - 1, -1, -1):
        v = work[i + p]
        q[i] = v
        work[i + 1] = (work[i + 1] + v) % p
    return Poly(f.prime, q), Poly(f.prime, work[:p])


def divisible_by_xp_minus_x_power(f, k):
    """Exact repeated division with zero-remainder check, not root counting."""
    for _ in range(k):
        if f.is_zero:
            return True
        f, rem = divmod_by_xp_minus_x(f)
        if not rem.is_zero:
            return False
    return True


def check_derivative_divisibility(bundle, m, order, stats=None):
    """Whether (x^p - x)^(n - order) divides the order-th y-derivative of H
    specialized at a non-special finite slope m."""
    U, n = bundle.U, bundle.n
    p = U.prime.p
    if not 0 <= order <= n:
        raise OutOfTheoremRange(f"derivative order must be in [0, {n}]")
    if not (n - 1) * p < U.N <= n * p:
        raise OutOfTheoremRange("requires (n-1)*p < #U <= n*p")
    profile = stats.profile(m) if stats is not None else classify_direction(U, m)
    if profile.classification != "generic":
        raise OutOfTheoremRange(
            f"slope {m} is a special direction; derivative divisibility only "
            "applies to generic slopes"
        )
    sliced = bundle.H.partial_derivative_y(order).eval_y(m)
    return divisible_by_xp_minus_x_power(sliced, n - order)


# -- lacunarity ----------------------------------------------------------


@dataclass(frozen=True)
class LacunaryBound:
    block: int  # j: coefficient block of x^((n-j)*p)
    degree: int  # measured x-degree of the block (-1 if zero)
    bound: int  # allowed maximum
    ok: bool


@dataclass(frozen=True)
class LacunaryBoundsReport:
    rows: tuple

    @property
    def all_ok(self):
        return all(row.ok for row in self.rows)


def _block_degrees_bivariate(H, n, p):
    """x-degree of each block G_j collecting x-degrees [(n-j)p, (n-j+1)p)."""
    degs = []
    arr = H.a
    for j in range(1, n + 1):
        lo = (n - j) * p
        deg = -1
        for i in range(min(lo + p, n * p) - 1, lo - 1, -1):
            if i < arr.shape[0] and arr[i].any():
                deg = i - lo
                break
        degs.append(deg)
    return degs


def _block_degrees_univariate(h, n, p):
    degs = []
    for j in range(1, n + 1):
        lo = (n - j) * p
        deg = -1
        for i in range(min(lo + p, n * p) - 1, lo - 1, -1):
            if h[i] != 0:
                deg = i - lo
                break
        degs.append(deg)
    return degs


def lacunary_coefficient_bounds(bundle, stats):
    """Degree report for the blocks of H against the clamped nonvertical
    special/rich direction counts."""
    U, n = bundle.U, bundle.n
    p = U.prime.p
    if not (n - 1) * p < U.N <= n * p:
        raise OutOfTheoremRange("requires (n-1)*p < #U <= n*p")
    e_dag = stats.rich_clamped
    d_dag = stats.special_clamped
    rows = []
    for j, deg in enumerate(_block_degrees_bivariate(bundle.H, n, p), start=1):
        bound = e_dag + (j - 1) * d_dag
        rows.append(LacunaryBound(block=j, degree=deg, bound=bound, ok=deg <= bound))
    return LacunaryBoundsReport(rows=tuple(rows))


@dataclass(frozen=True)
class LacunaryHypotheses:
    """Measured degree hypotheses for the lacunary factorization of a monic
    degree-n*p polynomial H = R * (complement of degree complement_degree)."""

    A: int
    B: int
    n: int
    complement_degree: int
    first_block_ok: bool  # deg g_1 <= A + 1
    blocks_ok: bool  # deg g_k <= B + k for all k
    budget_ok: bool  # A + B + n + complement_degree < p

    @property
    def satisfied(self):
        return self.first_block_ok and self.blocks_ok and self.budget_ok


def measure_lacunary_hypotheses(H, n, A, B, complement_degree):
    p = H.prime.p
    degs = _block_degrees_univariate(H, n, p)
    return LacunaryHypotheses(
        A=A,
        B=B,
        n=n,
        complement_degree=complement_degree,
        first_block_ok=degs[0] <= A + 1,
        blocks_ok=all(deg <= B + k for k, deg in enumerate(degs, start=1)),
        budget_ok=A + B + n + complement_degree < p,
    )


@dataclass(frozen=True)
class LacunaryFactorization:
    """H == (x^p - x)^(n - w) * prod (x - alpha_i)^p with distinct alpha_i."""

    n: int
    w: int
    alphas: tuple

    def expand(self, prime):
        f = xp_minus_x_power(prime, self.n - self.w)
        p = prime.p
        for alpha in self.alphas:
            f = f * (Poly.monomial(prime, p) - Poly(prime, (alpha,)))
        return f


def multiplicity_profile(H):
    """Linear multiplicity of (x - k) in H for every k in F_p."""
    return tuple(H.linear_multiplicity(k) for k in range(H.prime.p))


def lacunary_factorize(H, n, complement_degree, hyp):
    """Recover (w, alphas) from the multiplicity profile of H.

    The factorization conclusion is decided directly from the profile: it
    must read (n - w) + p * [k in alphas] for every k.  A mismatch raises
    LacunaryShapeError carrying the profile (the falsification signal).
    """
    p = H.prime.p
    if H.is_zero or H.lead != 1 or H.degree != n * p:
        raise ValueError(f"expected a monic polynomial of degree {n * p}")
    if hyp is not None and not hyp.satisfied:
        raise OutOfTheoremRange(
            f"lacunary hypotheses not satisfied: {hyp!r}"
        )
    profile = multiplicity_profile(H)
    if sum(profile) != n * p:
        raise LacunaryShapeError(
            "polynomial is not completely reducible", profile
        )
    for w in range(0, min(n, p) + 1):
        base = n - w
        highs = [k for k, mult in enumerate(profile) if mult == base + p]
        if len(highs) == w and all(
            mult in (base, base + p) for mult in profile
        ):
            return LacunaryFactorization(n=n, w=w, alphas=tuple(highs))
    raise LacunaryShapeError(
        "multiplicity profile does not match (x^p-x)^(n-w) * prod (x-a_i)^p",
        profile,
    )


# -- rich line recovery --------------------------------------------------


@dataclass(frozen=True)
class RichLineRecovery:
    direction: int
    rich_line_count: int  # w recovered from the factorization
    lines: tuple  # (direction, intercept) in the original coordinates
    factorization: LacunaryFactorization
    transform: AffineMap  # coordinate change used for the reduction


def _hyp_dir_holds(D, n, p, r):
    """Exact form of the few-special-directions hypothesis
    D <= 1 + (p - r)/(n + 1)."""
    return (D - 1) * (n + 1) <= p - r


def _auxiliary_vertical_transform(U, m, stats):
    """Coordinate change moving a suitable other direction to vertical.

    Returns the identity when the vertical direction already plays that role.
    """
    prime = U.prime
    p = prime.p
    E = stats.rich_count
    D = stats.special_count
    if E >= 2:
        rich = stats.rich_directions()
        if p in rich:
            return AffineMap.identity(prime)
        other = min(d for d in rich if d != m)
        return AffineMap.direction_to_vertical(prime, other)
    if D >= 2:
        specials = stats.special_directions()
        if p in specials:
            return AffineMap.identity(prime)
        other = min(d for d in specials if d != m)
        return AffineMap.direction_to_vertical(prime, other)
    return AffineMap.identity(prime)


def recover_rich_lines(U, m, stats=None):
    """Recover the rich lines of a finite rich slope m algebraically.

    Requires r < p - n and the few-special-directions hypothesis.  Moves a
    second rich direction (or, failing that, a special one) to vertical,
    specializes the degree-n*p polynomial of the transformed set at the image
    of m, factors it, and maps the recovered intercept lines back.  The
    result is cross-checked against the combinatorial classification.
    """
    prime = U.prime
    p = prime.p
    n, r = U.n, U.r
    if stats is None:
        stats = plane_stats(U)
    if not 0 <= m < p:
        raise ValueError(f"slope must be finite (0 <= m < {p})")
    if not r < p - n:
        raise OutOfTheoremRange(f"out of theorem range: r={r} >= p - n = {p - n}")
    D, E = stats.special_count, stats.rich_count
    if not _hyp_dir_holds(D, n, p, r):
        raise OutOfTheoremRange(
            f"out of theorem range: {D} special directions exceed 1 + (p-r)/(n+1)"
        )
    profile = stats.profile(m)
    if profile.classification != RICH:
        raise OutOfTheoremRange(f"slope {m} is not a rich direction")

    transform = _auxiliary_vertical_transform(U, m, stats)
    identity = transform == AffineMap.identity(prime)
    U2 = U if identity else transform.apply(U)
    m2 = transform.direction_image(m)
    if is_vertical(p, m2):
        raise InvariantViolation("reduction sent the target slope to vertical")
    bundle = rs_bundle(U2, n)
    specialized = bundle.H.eval_y(m2)
    if D >= 2:
        A, B = D - 2, n * (D - 2)
    else:
        A, B = 0, 0
    hyp = measure_lacunary_hypotheses(specialized, n, A, B, r)
    if not hyp.satisfied:
        raise InvariantViolation(
            f"lacunarity degree hypotheses failed under valid preconditions: "
            f"{hyp!r} on {U!r}"
        )
    fact = lacunary_factorize(specialized, n, r, hyp)

    inverse = transform.inverse()
    lines = sorted(
        (m2, alpha) if identity else inverse.line_image((m2, alpha))
        for alpha in fact.alphas
    )
    expected = sorted((m, k) for k in profile.rich_intercepts)
    if lines != expected or fact.w != profile.rich_line_count:
        raise InvariantViolation(
            f"algebraic rich lines {lines} disagree with combinatorial "
            f"{expected} on {U!r}"
        )
    if r < fact.w * (n - fact.w):
        raise InvariantViolation(
            f"complement slack bound violated: r={r} < w(n-w)="
            f"{fact.w * (n - fact.w)} on {U!r}"
        )
    if fact.w == n:
        covered = set()
        for line in lines:
            covered.update(line_points(p, line))
        if not set(U.points) <= covered:
            raise InvariantViolation(
                f"w == n but U is not inside the {n} recovered parallel lines"
            )
    return RichLineRecovery(
        direction=m,
        rich_line_count=fact.w,
        lines=tuple(lines),
        factorization=fact,
        transform=transform,
    )


# -- blackbox lemma ------------------------------------------------------


@dataclass(frozen=True)
class BlackboxReport:
    direction: int
    rich_line_count: int  # w_m
    max_nonrich_count: int
    min_rich_count: int
    nonrich_bound: int  # n - w_m
    rich_bound: int  # p - r + n - 1
    conclusions: tuple  # four booleans
    recovery: RichLineRecovery | None

    @property
    def all_ok(self):
        return all(self.conclusions)


def verify_blackbox(U, d, stats=None, covered=None):
    """Assert the four conclusions of the rich-direction lemma for one
    rich direction d (finite or vertical).

    Hypotheses: the few-special-directions bound, r < p - n, U not coverable
    by n lines, d rich.  Out-of-range instances raise OutOfTheoremRange; a
    failed conclusion raises InvariantViolation (it would falsify the
    underlying result).
    """
    from .plane import is_covered_by_n_lines  # local import to avoid cycle noise

    prime = U.prime
    p = prime.p
    n, r = U.n, U.r
    if stats is None:
        stats = plane_stats(U)
    if not r < p - n:
        raise OutOfTheoremRange(f"out of theorem range: r={r} >= p - n")
    if not _hyp_dir_holds(stats.special_count, n, p, r):
        raise OutOfTheoremRange("out of theorem range: too many special directions")
    if covered is None:
        covered = is_covered_by_n_lines(U, n) is not None
    if covered:
        raise OutOfTheoremRange("out of theorem range: U is covered by n lines")
    profile = stats.profile(d)
    if profile.classification != RICH:
        raise OutOfTheoremRange(f"direction {d} is not rich")

    w = profile.rich_line_count
    rich_counts = [profile.histogram[k] for k in profile.rich_intercepts]
    nonrich_counts = [
        c for k, c in enumerate(profile.histogram) if k not in profile.rich_intercepts
    ]
    max_nonrich = max(nonrich_counts, default=0)
    min_rich = min(rich_counts)
    conclusions = (
        max_nonrich <= n - w,
        min_rich >= p - r + n - 1,
        w <= n - 1,
        r >= w * (n - w),
    )
    if is_vertical(p, d):
        swap = AffineMap.swap(prime)
        recovery = recover_rich_lines(swap.apply(U), swap.direction_image(d))
    else:
        recovery = recover_rich_lines(U, d, stats)
    report = BlackboxReport(
        direction=d,
        rich_line_count=w,
        max_nonrich_count=max_nonrich,
        min_rich_count=min_rich,
        nonrich_bound=n - w,
        rich_bound=p - r + n - 1,
        conclusions=conclusions,
        recovery=recovery,
    )
    if not report.all_ok:
        raise InvariantViolation(
            f"rich-direction lemma conclusions failed {conclusions} on {U!r}"
        )
    if recovery.rich_line_count != w:
        raise InvariantViolation(
            "algebraic and combinatorial rich line counts disagree"
        )
    return report
