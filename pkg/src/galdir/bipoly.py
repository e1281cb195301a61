"""Exact bivariate polynomials over F_p, viewed as polynomials in x with
coefficients in F_p[y].

Internally a ``BiPoly`` is a dense int64 numpy array ``a`` with
``a[i, j]`` = coefficient of x^i * y^j, every entry reduced into [0, p).
All products stay far below 2^63 (p <= 10000, desk-scale degrees), so numpy
integer arithmetic is exact.  Instances are immutable after construction.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import convolve2d

from .field import Poly, Prime


def _trim2d(a):
    """Drop all-zero trailing x-rows and y-columns; zero -> shape (0, 0)."""
    nz = np.nonzero(a)
    if len(nz[0]) == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return np.ascontiguousarray(a[: nz[0].max() + 1, : nz[1].max() + 1])


class BiPoly:
    __slots__ = ("prime", "a")

    def __init__(self, prime, array):
        self.prime = prime
        arr = np.asarray(array, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("BiPoly array must be 2-dimensional")
        self.a = _trim2d(np.mod(arr, prime.p))
        self.a.setflags(write=False)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, prime):
        return cls(prime, np.zeros((0, 0), dtype=np.int64))

    @classmethod
    def constant(cls, prime, value):
        return cls(prime, np.array([[value]], dtype=np.int64))

    @classmethod
    def from_x_poly(cls, poly):
        """Lift a univariate polynomial in x (no y dependence)."""
        return cls(poly.prime, np.array([[v] for v in poly.c], dtype=np.int64))

    @classmethod
    def from_y_coeffs(cls, prime, y_polys):
        """Build from the list of y-coefficients indexed by x-degree."""
        ydim = max((len(q.c) for q in y_polys), default=0)
        arr = np.zeros((len(y_polys), max(ydim, 1)), dtype=np.int64)
        for i, q in enumerate(y_polys):
            arr[i, : len(q.c)] = q.c
        return cls(prime, arr)

    @classmethod
    def point_factor(cls, prime, a, b):
        """The linear factor x - a*y + b."""
        return cls(prime, np.array([[b, -a], [1, 0]], dtype=np.int64))

    # -- basics ----------------------------------------------------------

    @property
    def x_degree(self):
        return self.a.shape[0] - 1

    @property
    def y_degree(self):
        return self.a.shape[1] - 1

    @property
    def is_zero(self):
        return self.a.shape[0] == 0

    def total_degree(self):
        """max over nonzero entries of (x-degree + y-degree); -1 for zero."""
        xs, ys = np.nonzero(self.a)
        if len(xs) == 0:
            return -1
        return int((xs + ys).max())

    def x_coefficients(self):
        """y-coefficient polynomials indexed by x-degree."""
        return [Poly(self.prime, row) for row in self.a]

    def leading_x_coefficient(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return Poly(self.prime, self.a[-1])

    def is_monic_in_x(self):
        if self.is_zero:
            return False
        lead = self.a[-1]
        return lead[0] == 1 and not lead[1:].any()

    def __eq__(self, other):
        return (
            isinstance(other, BiPoly)
            and other.prime == self.prime
            and other.a.shape == self.a.shape
            and bool((other.a == self.a).all())
        )

    def __hash__(self):
        return hash((self.prime, self.a.tobytes(), self.a.shape))

    def __repr__(self):
        return f"BiPoly(p={self.prime.p}, {self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, row in enumerate(self.a):
            q = Poly(self.prime, row)
            if q.is_zero:
                continue
            coeff = str(q) if q.degree <= 0 else f"({q})".replace("x", "y")
            if q.degree == 0 and i > 0 and q.c[0] == 1:
                coeff = ""
            if i == 0:
                parts.append(str(q).replace("x", "y") if q.degree > 0 else str(q))
            elif i == 1:
                parts.append(f"{coeff}*x" if coeff else "x")
            else:
                parts.append(f"{coeff}*x^{i}" if coeff else f"x^{i}")
        return " + ".join(parts)

    def _check_same(self, other):
        if self.prime != other.prime:
            raise ValueError(
                f"modulus mismatch: F_{self.prime.p} vs F_{other.prime.p}"
            )

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        self._check_same(other)
        nx = max(self.a.shape[0], other.a.shape[0])
        ny = max(self.a.shape[1], other.a.shape[1])
        out = np.zeros((max(nx, 1), max(ny, 1)), dtype=np.int64)
        out[: self.a.shape[0], : self.a.shape[1]] += self.a
        out[: other.a.shape[0], : other.a.shape[1]] += other.a
        return BiPoly(self.prime, out)

    def __sub__(self, other):
        self._check_same(other)
        nx = max(self.a.shape[0], other.a.shape[0])
        ny = max(self.a.shape[1], other.a.shape[1])
        out = np.zeros((max(nx, 1), max(ny, 1)), dtype=np.int64)
        out[: self.a.shape[0], : self.a.shape[1]] += self.a
        out[: other.a.shape[0], : other.a.shape[1]] -= other.a
        return BiPoly(self.prime, out)

    def __neg__(self):
        return BiPoly(self.prime, -self.a)

    def __mul__(self, other):
        if isinstance(other, int):
            return BiPoly(self.prime, self.a * (other % self.prime.p))
        self._check_same(other)
        if self.is_zero or other.is_zero:
            return BiPoly.zero(self.prime)
        return BiPoly(self.prime, convolve2d(self.a, other.a))

    __rmul__ = __mul__

    def divmod_monic(self, divisor):
        """Long division in F_p[y][x]; the divisor must be monic in x.

        Returns (quotient, remainder) with deg_x(remainder) < deg_x(divisor)
        and self == divisor * quotient + remainder exactly.
        """
        self._check_same(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("bivariate division by zero")
        if not divisor.is_monic_in_x():
            raise ValueError(
                "divisor is not monic in x; division would require inverses in F_p[y]"
            )
        p = self.prime.p
        dn = divisor.x_degree
        if self.x_degree < dn:
            return BiPoly.zero(self.prime), self
        steps = self.x_degree - dn + 1
        # y-width bound: every quotient step can add at most deg_y(divisor).
        width = self.a.shape[1] + steps * max(divisor.a.shape[1] - 1, 0)
        work = np.zeros((self.a.shape[0], width), dtype=np.int64)
        work[:, : self.a.shape[1]] = self.a
        quot = np.zeros((steps, width), dtype=np.int64)
        darr = divisor.a
        for i in range(steps - 1, -1, -1):
            q = work[i + dn]
            nz = np.nonzero(q)[0]
            if len(nz) == 0:
                continue
            q = q[: nz.max() + 1].copy()
            quot[i, : len(q)] = q
            prod = convolve2d(darr, q[None, :])
            if prod.shape[1] > work.shape[1]:
                grow = prod.shape[1] - work.shape[1]
                work = np.pad(work, ((0, 0), (0, grow)))
                quot = np.pad(quot, ((0, 0), (0, grow)))
            work[i : i + dn + 1, : prod.shape[1]] = np.mod(
                work[i : i + dn + 1, : prod.shape[1]] - prod, p
            )
        return BiPoly(self.prime, quot), BiPoly(self.prime, work[:dn])

    # -- evaluation and derivatives --------------------------------------

    def eval_y(self, m):
        """Specialize y := m; returns a univariate polynomial in x."""
        if self.is_zero:
            return Poly.zero(self.prime)
        p = self.prime.p
        powers = np.empty(self.a.shape[1], dtype=np.int64)
        acc = 1
        for j in range(self.a.shape[1]):
            powers[j] = acc
            acc = (acc * m) % p
        return Poly(self.prime, np.mod(self.a @ powers, p))

    def eval_y_all(self):
        """Array of shape (p, x_degree + 1): row m is self(x, m)'s coefficients."""
        p = self.prime.p
        if self.is_zero:
            return np.zeros((p, 0), dtype=np.int64)
        vander = np.empty((self.a.shape[1], p), dtype=np.int64)
        vander[0] = 1
        ms = np.arange(p, dtype=np.int64)
        for j in range(1, self.a.shape[1]):
            vander[j] = (vander[j - 1] * ms) % p
        return np.mod(self.a @ vander, p).T

    def partial_derivative_y(self, order=1):
        """Formal iterated d/dy, applied x-coefficient-wise."""
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        arr = self.a
        p = self.prime.p
        for _ in range(order):
            if arr.shape[1] <= 1:
                return BiPoly.zero(self.prime)
            arr = np.mod(arr[:, 1:] * np.arange(1, arr.shape[1], dtype=np.int64), p)
        return BiPoly(self.prime, arr)


def product_of_point_factors(prime, points):
    """Product of (x - a*y + b) over (a, b) pairs, built incrementally."""
    p = prime.p
    acc = np.array([[1]], dtype=np.int64)
    for k, (a, b) in enumerate(points):
        na = np.zeros((k + 2, k + 2), dtype=np.int64)
        na[1:, : acc.shape[1]] += acc
        na[:-1, : acc.shape[1]] += acc * b
        na[:-1, 1 : acc.shape[1] + 1] -= acc * a
        acc = np.mod(na, p)
    return BiPoly(prime, acc)
