"""Exact arithmetic over the prime field F_p and the ring F_p[x].

Field elements are plain Python ints in [0, p); a ``Prime`` instance carries
the modulus and provides the arithmetic.  ``Poly`` is a dense univariate
polynomial over F_p.  No floating point is used anywhere.
"""

from __future__ import annotations


class Prime:
    """A verified prime modulus p with elementwise F_p arithmetic.

    Primality is checked by trial division at construction; the value is
    capped at 10000 so that every degree and count in the package fits
    comfortably in native integers.
    """

    MAX_VALUE = 10000

    __slots__ = ("p", "_inv")

    def __init__(self, value):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"prime modulus must be an int, got {value!r}")
        if value < 2:
            raise ValueError(f"prime modulus must be >= 2, got {value}")
        if value > Prime.MAX_VALUE:
            raise ValueError(f"prime modulus {value} exceeds cap {Prime.MAX_VALUE}")
        d = 2
        while d * d <= value:
            if value % d == 0:
                raise ValueError(f"{value} is not prime (divisible by {d})")
            d += 1
        self.p = value
        self._inv = None

    def __eq__(self, other):
        return isinstance(other, Prime) and other.p == self.p

    def __hash__(self):
        return hash(("Prime", self.p))

    def __repr__(self):
        return f"Prime({self.p})"

    def __int__(self):
        return self.p

    # -- elementwise operations ------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        a %= self.p
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    @property
    def inverses(self):
        """Table t with t[a] = a^-1 for a in 1..p-1 (t[0] unused, set to 0)."""
        if self._inv is None:
            self._inv = tuple(
                0 if a == 0 else pow(a, self.p - 2, self.p) for a in range(self.p)
            )
        return self._inv


def _trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


class Poly:
    """Dense univariate polynomial over F_p, immutable, in normal form.

    Coefficients are indexed by degree; there is never a trailing zero.  The
    zero polynomial has an empty coefficient tuple and degree -1 (every
    degree we ever compare against is >= 0, so -1 works as the "minus
    infinity" sentinel).
    """

    __slots__ = ("prime", "c")

    def __init__(self, prime, coeffs):
        p = prime.p
        self.prime = prime
        self.c = _trim([int(v) % p for v in coeffs])

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, prime):
        return cls(prime, ())

    @classmethod
    def one(cls, prime):
        return cls(prime, (1,))

    @classmethod
    def x(cls, prime):
        return cls(prime, (0, 1))

    @classmethod
    def monomial(cls, prime, degree, coeff=1):
        return cls(prime, [0] * degree + [coeff])

    @classmethod
    def from_roots(cls, prime, roots):
        """Product of (x - r) over the given roots (with multiplicity)."""
        p = prime.p
        c = [1]
        for r in roots:
            r %= p
            out = [0] * (len(c) + 1)
            for i, v in enumerate(c):
                out[i + 1] = (out[i + 1] + v) % p
                out[i] = (out[i] - r * v) % p
            c = out
        return cls(prime, c)

    # -- basics ----------------------------------------------------------

    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def is_zero(self):
        return not self.c

    @property
    def lead(self):
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other):
        return (
            isinstance(other, Poly) and other.prime == self.prime and other.c == self.c
        )

    def __hash__(self):
        return hash((self.prime, self.c))

    def __repr__(self):
        return f"Poly(p={self.prime.p}, {self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i, v in enumerate(self.c):
            if v == 0:
                continue
            if i == 0:
                parts.append(str(v))
            elif i == 1:
                parts.append(f"{v}*x" if v != 1 else "x")
            else:
                parts.append(f"{v}*x^{i}" if v != 1 else f"x^{i}")
        return " + ".join(parts)

    def _check_same(self, other):
        if self.prime != other.prime:
            raise ValueError(
                f"modulus mismatch: F_{self.prime.p} vs F_{other.prime.p}"
            )

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly(self.prime, (other,))
        self._check_same(other)
        n = max(len(self.c), len(other.c))
        return Poly(
            self.prime, [(self[i] + other[i]) % self.prime.p for i in range(n)]
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly(self.prime, (other,))
        self._check_same(other)
        n = max(len(self.c), len(other.c))
        return Poly(
            self.prime, [(self[i] - other[i]) % self.prime.p for i in range(n)]
        )

    def __neg__(self):
        return Poly(self.prime, [-v for v in self.c])

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.prime, [v * other for v in self.c])
        self._check_same(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.prime)
        p = self.prime.p
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(self.prime, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.prime)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k):
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly(self.prime, (0,) * k + self.c)

    def __call__(self, k):
        acc = 0
        p = self.prime.p
        for v in reversed(self.c):
            acc = (acc * k + v) % p
        return acc

    def __divmod__(self, divisor):
        self._check_same(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.prime.p
        dn = divisor.degree
        if self.degree < dn:
            return Poly.zero(self.prime), self
        inv_lead = self.prime.inv(divisor.lead)
        rem = list(self.c)
        q = [0] * (len(rem) - dn)
        dcoef = divisor.c
        for i in range(len(rem) - dn - 1, -1, -1):
            coef = rem[i + dn] % p
            if coef:
                coef = (coef * inv_lead) % p
                q[i] = coef
                for j in range(dn + 1):
                    rem[i + j] = (rem[i + j] - coef * dcoef[j]) % p
        return Poly(self.prime, q), Poly(self.prime, rem[:dn])

    def __floordiv__(self, divisor):
        return divmod(self, divisor)[0]

    def __mod__(self, divisor):
        return divmod(self, divisor)[1]

    def monic(self):
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        if self.lead == 1:
            return self
        return self * self.prime.inv(self.lead)

    def gcd(self, other):
        """Monic gcd; gcd with a nonzero constant is 1, gcd(f, 0) = monic f."""
        self._check_same(other)
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        if a.is_zero:
            raise ValueError("gcd(0, 0) is undefined")
        return a.monic()

    def derivative(self):
        p = self.prime.p
        return Poly(self.prime, [(i * v) % p for i, v in enumerate(self.c)][1:])

    # -- F_p-specific operations -----------------------------------------

    def linear_multiplicity(self, k):
        """Largest e with (x - k)^e dividing self, by repeated synthetic division."""
        if self.is_zero:
            raise ValueError("linear multiplicity of the zero polynomial")
        p = self.prime.p
        k %= p
        c = list(self.c)
        mult = 0
        while len(c) > 0:
            # synthetic division of c by (x - k)
            q = [0] * (len(c) - 1)
            acc = 0
            for i in range(len(c) - 1, 0, -1):
                acc = (acc * k + c[i]) % p
                q[i - 1] = acc
            rem = (acc * k + c[0]) % p
            if rem != 0:
                break
            mult += 1
            c = q
        return mult

    def is_completely_reducible(self):
        """True iff the polynomial splits into linear factors over F_p."""
        if self.is_zero:
            raise ValueError("reducibility of the zero polynomial")
        total = 0
        deg = self.degree
        for k in range(self.prime.p):
            total += self.linear_multiplicity(k)
            if total == deg:
                return True
        return total == deg

    def reduce_mod_xp_minus_x(self):
        """Canonical representative of degree < p modulo x^p - x.

        Exponent e >= 1 folds to ((e - 1) mod (p - 1)) + 1, which preserves
        the values of the polynomial on all of F_p (including 0).
        """
        p = self.prime.p
        if self.degree < p:
            return self
        out = [0] * p
        for e, v in enumerate(self.c):
            if v == 0:
                continue
            fe = e if e == 0 else ((e - 1) % (p - 1)) + 1
            out[fe] = (out[fe] + v) % p
        return Poly(self.prime, out)

    def squarefree_part(self):
        """gcd(f, x^p - x), monic: the product of (x - k) over the roots of f.

        x^p mod f is computed by binary exponentiation in F_p[x]/(f) so the
        length-p polynomial x^p - x is never materialized.
        """
        if self.is_zero:
            raise ValueError("square-free part of the zero polynomial")
        if self.degree == 0:
            return Poly.one(self.prime)
        xp = pow_mod(Poly.x(self.prime), self.prime.p, self)
        g = xp - Poly.x(self.prime)
        if g.is_zero:
            return self.monic()
        return self.gcd(g)


def pow_mod(base, e, modulus):
    """base^e modulo a polynomial, by square-and-multiply."""
    result = Poly.one(base.prime) % modulus
    base = base % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


def xp_minus_x(prime):
    return Poly.monomial(prime, prime.p) - Poly.x(prime)
