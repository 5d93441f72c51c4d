"""The leading constant of the census asymptotic N(B) ~ c B^2 loglog B / log B.

The constant decomposes as c = 2c_{1,2} + 2c_{1,3} + c_{2,2} + c_{2,3},
where each c_{r,i} is an Euler product

    c_{r,i} = rho_{r,i} / (256 pi^2) *
              prod_{p odd} (1 + 1/p)^{-2}
                           (1 + 2/p + 2(rho'_{r,i}(p) + 1)/p^2 + 2/p^3 + 1/p^4)

with rational weights rho_{r,i} = 11968/9 for (r,i) in {(1,2),(1,3),(2,2)}
and 1600/9 for (2,3), and character twist rho'_{r,i}(p) = 1 except for
(2,3), where it is the quadratic character (-1/p).  Collecting the three
identical untwisted products gives the closed two-product form

    c = 935/(36 pi^2) * prod_p (1+1/p)^{-2} (1 + 2/p + 4/p^2 + 2/p^3 + 1/p^4)
      + 25/(36 pi^2)  * prod_p (1+1/p)^{-2} (1 + 2/p + 2(1+(-1/p))/p^2 + ...),

and the weight identities 5 * (11968/9)/256 = 935/36 and (1600/9)/256 =
25/36 hold exactly in the rationals.

Truncated products carry a rigorous tail interval: each local factor
satisfies |log factor(p)| <= 7/p^2 for p >= 3 (the leading term of the
log-series is (2 rho' + 1)/p^2, so at most 3/p^2, and the envelope 7/p^2
absorbs every higher-order term; the bound is asserted numerically for
all odd p <= 1000 at import, and the factor is monotonically closer to 1
beyond).  Summing over p > L against the integral gives

    |log(true / truncated)| <= sum_{p > L} 7/p^2 < 7/L,

which is the reported tail_radius.  Products are accumulated as
compensated sums of logarithms in ascending prime order, so every
evaluation at the same truncation is bit-for-bit reproducible.

The auxiliary even-part sums over 4-tuples of 2-adic valuations with
min(mu_0, mu_1) = min(mu_2, mu_3) = 0 evaluate to 25/9, 80/9 and 64/9
(plain, zero-count-weighted, and pair-product-weighted); they are checked
here both in closed form and by direct summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import jacobi, shared_sieve

__all__ = [
    "EulerProductResult",
    "VARIANT_KEYS",
    "constant_cri",
    "euler_factor",
    "leading_constant",
    "main_term",
    "mu_power_sums",
    "rho",
    "rho_prime",
]

VARIANT_KEYS = ((1, 2), (1, 3), (2, 2), (2, 3))

_TAIL_CONSTANT = 7.0


def _validate_key(key):
    key = (int(key[0]), int(key[1])) if len(key) == 2 else tuple(key)
    if key not in VARIANT_KEYS:
        raise ValueError("variant key must be one of %r, got %r" % (VARIANT_KEYS, key))
    return key


def _validate_odd_prime(p):
    p = int(p)
    if p < 3 or p % 2 == 0:
        raise ValueError("need an odd prime, got %r" % (p,))
    sieve = shared_sieve()
    if p <= sieve.limit:
        if not sieve.is_prime(p):
            raise ValueError("need an odd prime, got composite %d" % p)
    else:
        from .arith import _is_probable_prime

        if not _is_probable_prime(p):
            raise ValueError("need an odd prime, got composite %d" % p)
    return p


# ------------------------------------------------------------ exact pieces

def rho(key) -> Fraction:
    """Rational weight of the variant's Euler product."""
    key = _validate_key(key)
    return Fraction(1600, 9) if key == (2, 3) else Fraction(11968, 9)


def rho_prime(key, p) -> int:
    """Character twist in the local factor: (-1/p) for (2,3), else +1."""
    key = _validate_key(key)
    p = _validate_odd_prime(p)
    return jacobi(-1, p) if key == (2, 3) else 1


def mu_power_sums():
    """The three even-part sums over valuation 4-tuples, as exact rationals.

    Each sum runs over mu in (Z>=0)^4 with min(mu0, mu1) = min(mu2, mu3)
    = 0, weighting 4^{-(mu0+mu1+mu2+mu3)} by 1, by #{j : mu_j = 0}, and by
    #{j <= 1 : mu_j = 0} * #{j >= 2 : mu_j = 0}.  Closed forms follow from
    the one-variable geometric sums; a direct truncated summation must
    agree to well below any emitted precision before they are returned.
    """
    q = Fraction(1, 4)
    gm = q / (1 - q)  # sum over a single positive valuation
    pair = 1 + 2 * gm  # one pair with min = 0
    plain = pair * pair
    zero_weighted = 4 + 12 * gm + 8 * gm * gm
    pair_weighted = 4 + 8 * gm + 4 * gm * gm
    direct = _mu_power_sums_direct(20)
    for closed, summed in zip((plain, zero_weighted, pair_weighted), direct):
        assert abs(closed - summed) < Fraction(1, 10**10), (closed, summed)
    return plain, zero_weighted, pair_weighted


def _mu_power_sums_direct(kmax):
    q = Fraction(1, 4)
    pairs = [(0, 0)] + [(mu, 0) for mu in range(1, kmax + 1)] \
        + [(0, mu) for mu in range(1, kmax + 1)]
    plain = zero_w = pair_w = Fraction(0)
    for m0, m1 in pairs:
        for m2, m3 in pairs:
            term = q ** (m0 + m1 + m2 + m3)
            zeros01 = (m0 == 0) + (m1 == 0)
            zeros23 = (m2 == 0) + (m3 == 0)
            plain += term
            zero_w += (zeros01 + zeros23) * term
            pair_w += zeros01 * zeros23 * term
    return plain, zero_w, pair_w


def euler_factor(key, p) -> Fraction:
    """Exact local factor (1+1/p)^{-2}(1 + 2/p + 2(rho'+1)/p^2 + 2/p^3 + 1/p^4)."""
    key = _validate_key(key)
    p = _validate_odd_prime(p)
    rp = rho_prime(key, p)
    num = p**4 + 2 * p**3 + 2 * (rp + 1) * p**2 + 2 * p + 1
    return Fraction(num, (p + 1) ** 2 * p**2)


def _log_factor(p, twisted) -> float:
    rp = jacobi(-1, p) if twisted else 1
    num = p * (p * (p * (p + 2) + 2 * (rp + 1)) + 2) + 1
    return math.log(num / ((p + 1) * (p + 1) * p * p))


def _compensated_sum(values) -> float:
    # Neumaier variant; ascending prime order fixes the reduction shape
    total = 0.0
    comp = 0.0
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    return total + comp


def _verify_tail_envelope(limit=1000):
    for p in shared_sieve().primes():
        if p == 2:
            continue
        if p > limit:
            break
        for twisted in (False, True):
            assert abs(_log_factor(p, twisted)) <= _TAIL_CONSTANT / (p * p), p


_verify_tail_envelope()


# ------------------------------------------------------- truncated products

@dataclass(frozen=True)
class EulerProductResult:
    """A truncated Euler-product value with a rigorous relative-log bound.

    tail_radius bounds |log(true value / value)| via the 7/p^2 envelope
    summed over the omitted primes.
    """

    value: float
    prime_limit: int
    tail_radius: float


def _odd_primes_to(prime_limit):
    return [p for p in shared_sieve(prime_limit).primes() if p > 2]


def _truncated_log_product(prime_limit, twisted) -> float:
    return _compensated_sum(
        _log_factor(p, twisted) for p in _odd_primes_to(prime_limit)
    )


@lru_cache(maxsize=32)
def constant_cri(key, prime_limit: int) -> EulerProductResult:
    """Truncated Euler product for one variant: rho/(256 pi^2) * prod factor."""
    key = _validate_key(key)
    prime_limit = int(prime_limit)
    if prime_limit < 3:
        raise ValueError("prime_limit must be at least 3, got %d" % prime_limit)
    logs = _truncated_log_product(prime_limit, twisted=key == (2, 3))
    value = float(rho(key)) / (256 * math.pi**2) * math.exp(logs)
    return EulerProductResult(value, prime_limit, _TAIL_CONSTANT / prime_limit)


# weights of the assembled constant, exactly: 5 copies of the untwisted
# product and one twisted copy
_W_UNTWISTED = 5 * rho((1, 2)) / 256
_W_TWISTED = rho((2, 3)) / 256
assert _W_UNTWISTED == Fraction(935, 36)
assert _W_TWISTED == Fraction(25, 36)


def leading_constant(prime_limit: int) -> EulerProductResult:
    """The full constant c, by two routes that must agree.

    Route one sums the four variant products with multiplicities
    (2, 2, 1, 1); route two evaluates the collected two-product closed
    form with the exact weights 935/36 and 25/36.  The routes coincide
    algebraically, so any discrepancy beyond the combined truncation
    intervals signals a transcription bug and raises.  The closed-form
    value is returned.
    """
    prime_limit = int(prime_limit)
    if prime_limit < 3:
        raise ValueError("prime_limit must be at least 3, got %d" % prime_limit)
    parts = {key: constant_cri(key, prime_limit) for key in VARIANT_KEYS}
    route_sum = (2 * parts[(1, 2)].value + 2 * parts[(1, 3)].value
                 + parts[(2, 2)].value + parts[(2, 3)].value)
    p_untwisted = math.exp(_truncated_log_product(prime_limit, False))
    p_twisted = math.exp(_truncated_log_product(prime_limit, True))
    closed = (float(_W_UNTWISTED) * p_untwisted
              + float(_W_TWISTED) * p_twisted) / math.pi**2
    tail = _TAIL_CONSTANT / prime_limit
    tolerance = closed * math.expm1(2 * tail) + 1e-9
    if abs(route_sum - closed) > tolerance:
        raise ArithmeticError(
            "variant-sum route %.12g and closed-form route %.12g differ "
            "beyond the combined truncation interval %.3g" %
            (route_sum, closed, tolerance)
        )
    return EulerProductResult(closed, prime_limit, tail)


def main_term(B, c: float) -> float:
    """Predicted main term c * B^2 * loglog(B) / log(B); needs B >= 3."""
    B = float(B)
    if B < 3:
        raise ValueError("main term needs B >= 3, got %r" % (B,))
    return c * B * B * math.log(math.log(B)) / math.log(B)
