"""Exact integer arithmetic substrate: symbols, valuations, factorizations.

Everything downstream (local solubility tests, character sums, the census,
the Euler products) reduces to a handful of primitives over the rational
integers:

* the Jacobi symbol (a/n) for odd n >= 1, computed by the binary
  reciprocity algorithm, with (a/1) = 1 as the empty product;
* 2-adic splitting n = 2^e * m with m odd;
* squarefree splitting n = a * b^2 with a squarefree and sign(a) = sign(n);
* divisor count tau, squarefree indicator mu^2, and perfect-square tests.

All arithmetic is exact: Python integers are unbounded, so products of four
height-bounded coefficients can never overflow here (the fast counting
kernels, which do use fixed-width machine integers, live in _kernels and
are range-checked separately).

Factoring is done against a smallest-prime-factor sieve when the input is
within its range, falling back to trial division by sieve primes and then a
deterministic Pollard rho (fixed polynomial-shift schedule, Miller-Rabin
with a fixed base set) beyond it, so results never depend on run order.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "CeilingExceeded",
    "Factorization",
    "SpfSieve",
    "jacobi",
    "odd_part",
    "squarefree_split",
    "tau",
    "mu_squared",
    "is_square",
    "factorize",
]


# ----------------------------------------------------------------- symbols

class CeilingExceeded(ValueError):
    """A requested computation exceeds a configured work ceiling."""


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; 0 iff gcd(a, n) > 1.

    (a/1) = 1 for every a (empty product convention).
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs a positive odd lower argument, got %r" % (n,))
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# -------------------------------------------------------------- valuations

def odd_part(n: int) -> tuple[int, int]:
    """Split n = 2^e * m with m odd; returns (e, m). Rejects 0."""
    if n == 0:
        raise ValueError("0 has no odd part")
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e, n


def is_square(n: int) -> bool:
    """Perfect-square test; negative integers are never squares, 0 is."""
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


# ----------------------------------------------------------- factorization

class Factorization:
    """A positive integer together with its sorted prime factorization.

    factors is a tuple of (prime, exponent) pairs with strictly increasing
    primes and exponents >= 1; the product reconstructs n.
    """

    __slots__ = ("n", "factors")

    def __init__(self, n: int, factors):
        factors = tuple(factors)
        check = 1
        last = 1
        for p, e in factors:
            if p <= last or e < 1:
                raise ValueError("factor list not sorted or has exponent < 1")
            last = p
            check *= p ** e
        if check != n or n < 1:
            raise ValueError("factor list does not multiply to %r" % (n,))
        self.n = n
        self.factors = factors

    def __repr__(self):
        return "Factorization(%d, %r)" % (self.n, list(self.factors))

    def __eq__(self, other):
        return isinstance(other, Factorization) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


class SpfSieve:
    """Smallest-prime-factor table for 2 <= k <= limit.

    spf[k] is the least prime dividing k (spf[p] = p for primes, spf[0] and
    spf[1] are 0). Built once, immutable afterwards, safe to share across
    threads; the table is a numpy array so the counting kernels can consume
    it directly.
    """

    def __init__(self, limit: int):
        if limit < 2:
            limit = 2
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.uint32)
        spf[2::2] = 2
        for i in range(3, limit + 1, 2):
            if spf[i] == 0:
                spf[i] = i
                if i * i <= limit:
                    # multiples i*j with j < i already carry a smaller factor
                    sub = spf[i * i::2 * i]
                    sub[sub == 0] = i
        self.spf = spf

    def smallest_prime_factor(self, k: int) -> int:
        if not 2 <= k <= self.limit:
            raise ValueError("argument %r outside sieve range [2, %d]" % (k, self.limit))
        return int(self.spf[k])

    def is_prime(self, k: int) -> bool:
        return 2 <= k <= self.limit and int(self.spf[k]) == k

    def primes(self):
        """Iterate the primes <= limit in increasing order."""
        idx = np.nonzero(self.spf == np.arange(len(self.spf), dtype=np.uint32))[0]
        return [int(p) for p in idx if p >= 2]

    def factorize(self, n: int) -> Factorization:
        """Factor 1 <= |n| <= limit by repeated division with the table."""
        n = abs(n)
        if n == 0:
            raise ValueError("0 has no factorization")
        if n > self.limit:
            raise ValueError("argument %r outside sieve range" % (n,))
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        out.sort()
        return Factorization(math.prod(p ** e for p, e in out), out)


@lru_cache(maxsize=8)
def shared_sieve(limit: int = 1 << 16) -> SpfSieve:
    """Process-wide sieve, grown on demand by callers that need more."""
    return SpfSieve(limit)


def _is_probable_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3 * 10^24 with the fixed base set.
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Deterministic schedule: x^2 + c with c = 1, 2, 3, ... and Brent cycling.
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError("rho schedule exhausted on %d" % n)  # pragma: no cover


def factorize(n: int, sieve: SpfSieve | None = None) -> Factorization:
    """Factor any nonzero integer by its absolute value.

    Uses the sieve table when |n| is in range, else trial division by sieve
    primes followed by deterministic rho splitting of the remaining cofactor.
    """
    if n == 0:
        raise ValueError("0 has no factorization")
    n = abs(n)
    if sieve is None:
        sieve = shared_sieve()
    if n <= sieve.limit:
        return sieve.factorize(n)
    counts: dict[int, int] = {}
    rest = n
    for p in [2] + list(range(3, 1000, 2)):
        if p * p > rest:
            break
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    if rest > 1 and rest < 1000 * 1000:
        counts[rest] = counts.get(rest, 0) + 1
        rest = 1
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(n, sorted(counts.items()))


def squarefree_split(n: int, sieve: SpfSieve | None = None) -> tuple[int, int]:
    """Split n = a * b^2 with a squarefree, sign(a) = sign(n), b >= 1.

    |n| must be within the factoring range of the sieve (any size if the
    default shared sieve plus rho fallback is used).
    """
    if n == 0:
        raise ValueError("0 has no squarefree split")
    f = factorize(n, sieve)
    a = b = 1
    for p, e in f.factors:
        if e % 2:
            a *= p
        b *= p ** (e // 2)
    return (a if n > 0 else -a), b


def _as_factorization(f, sieve: SpfSieve | None = None) -> Factorization:
    if isinstance(f, Factorization):
        return f
    return factorize(int(f), sieve)


def tau(f) -> int:
    """Divisor count; accepts a Factorization or a nonzero integer."""
    fac = _as_factorization(f)
    out = 1
    for _, e in fac.factors:
        out *= e + 1
    return out


def mu_squared(f) -> int:
    """Squarefree indicator mu^2: 1 if squarefree, else 0."""
    fac = _as_factorization(f)
    return int(all(e == 1 for _, e in fac.factors))
