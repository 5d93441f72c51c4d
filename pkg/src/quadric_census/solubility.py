"""Local solubility of diagonal quaternary quadrics over Q at every place.

The object of study is the projective surface

    Q(x) = a0 x0^2 + a1 x1^2 + a2 x2^2 + a3 x3^2 = 0,   all a_i nonzero,

and the question, place by place, of whether it has a nontrivial zero.
Quadrics satisfy the Hasse principle, so the global question reduces to:

* the real place: soluble iff the signs of the a_i are mixed;
* odd primes p (coefficients squarefree, gcd(a0,..,a3) = 1):
  - if v_p(a0 a1 a2 a3) != 2 the form is soluble at p (for v_p odd the
    discriminant is a non-square in Q_p, and the unique anisotropic
    quaternary form over Q_p has square discriminant; for v_p = 0 the form
    is a unimodular quaternary form, always isotropic over Q_p);
  - if exactly two coefficients a_i, a_j are divisible by p, solubility is
    detected by two Legendre symbols: with {k,l} the other two indices,
        A = (-a_k a_l / p),   B = (-(a_i a_j)/p^2 / p),
    the form is soluble iff A = 1 or B = 1, i.e. iff (3 + A + B - AB)/4 = 1;
* p = 2: solubility depends only on the coefficients mod 8 once the even
  ones are halved.  Two subsets of ((Z/8Z)^*)^4 decide it: with U = {1,3,5,7},

      A1 = { q : q_i + q_j = 0 or 4 (mod 8) for some i in {0,1}, j in {2,3},
                 or (q0+q1, q2+q3) in {(0,0),(2,0),(2,6),(0,6),(6,0),(6,2),(0,2)} }

      A2 = { q : for some ordering {(i,j),(k,l)} = {(0,1),(2,3)} and some
                 v in U:  q_i + q_j = 0 or 2v (mod 8), and
                          (q_k + v)(q_l + v) = 0 (mod 8) }

  With all coefficients odd, the form is 2-adically soluble iff
  (a0,a1,a2,a3) mod 8 lies in A1; with exactly two even coefficients a_i,
  a_j, iff (a_i/2, a_j/2, a_k, a_l) mod 8 lies in A2.  Negative entries
  reduce mod 8 into {1,3,5,7} like any other integer.  An odd number of
  even coefficients gives odd v_2(a0 a1 a2 a3) and hence solubility, by the
  same discriminant argument as at odd primes (the three-even case is first
  scaled by 2, absorbing squares, to reach the one-even case).

Everything here is formula-driven and exact.  An independent brute-force
check, padic_oracle, searches for primitive solutions of Q(x) = 0 mod p^k
level by level over canonical orbit representatives and certifies solubility
through Hensel's lemma (a solution x mod p^j with v_p(2 a_i x_i) < j/2 for
some i lifts to Z_p).  The formula layer and the oracle are kept strictly
separate so they can cross-validate each other.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from itertools import product

from .arith import (_is_probable_prime, factorize, jacobi, odd_part,
                    shared_sieve, squarefree_split)

try:
    from . import _kernels
except ImportError:  # pragma: no cover - numba missing
    _kernels = None

__all__ = [
    "Verdict",
    "REAL",
    "normalize",
    "solvable_real",
    "local_indicator_odd",
    "mod8_set_A1",
    "mod8_set_A2",
    "arranged_a2",
    "local_indicator_2",
    "hilbert_symbol",
    "padic_oracle",
    "is_everywhere_locally_soluble",
    "has_rational_point",
    "find_rational_point",
    "bad_primes",
]

#: sentinel for the archimedean place; finite places are the primes themselves
REAL = "inf"

MOD8_UNITS = (1, 3, 5, 7)


class Verdict(enum.Enum):
    SOLUBLE = "soluble"
    INSOLUBLE = "insoluble"
    UNKNOWN = "unknown"

    def __bool__(self):
        # truthiness is deliberately disabled: UNKNOWN must never silently
        # collapse to a boolean
        raise TypeError("compare Verdict members explicitly")


def _check_prime(p: int) -> int:
    p = int(p)
    sieve = shared_sieve()
    prime = sieve.is_prime(p) if p <= sieve.limit else _is_probable_prime(p)
    if not prime:
        raise ValueError("place %r is not the real place or a prime" % (p,))
    return p


def _check_quadric(a):
    a = tuple(int(x) for x in a)
    if len(a) != 4 or any(x == 0 for x in a):
        raise ValueError("quadric needs four nonzero coefficients, got %r" % (a,))
    return a


def normalize(a, sieve=None):
    """Reduce to squarefree coefficients with gcd 1, preserving solubility.

    Each coefficient is replaced by its squarefree kernel (same sign), then
    all four are divided by their gcd.  Multiplying a coefficient by a
    square and scaling the whole form by a constant both preserve the zero
    set over any field, so the result is soluble at a place iff the input
    is.
    """
    a = _check_quadric(a)
    ker = [squarefree_split(x, sieve)[0] for x in a]
    g = math.gcd(*ker)
    return tuple(k // g for k in ker)


def solvable_real(a) -> Verdict:
    """Soluble over R iff the coefficient signs are mixed."""
    a = _check_quadric(a)
    if all(x > 0 for x in a) or all(x < 0 for x in a):
        return Verdict.INSOLUBLE
    return Verdict.SOLUBLE


def local_indicator_odd(a, p: int) -> Verdict:
    """Solubility over Q_p for odd p; coefficients squarefree with gcd 1."""
    a = _check_quadric(a)
    if p % 2 == 0:
        raise ValueError("odd prime required, got %r" % (p,))
    p = _check_prime(p)
    divisible = [i for i in range(4) if a[i] % p == 0]
    if len(divisible) == 4:
        raise ValueError("common factor %d: quadric %r is not normalized" % (p, a))
    if len(divisible) != 2:
        return Verdict.SOLUBLE
    i, j = divisible
    k, l = (t for t in range(4) if t not in divisible)
    A = jacobi(-(a[k] * a[l]), p)
    B = jacobi(-((a[i] // p) * (a[j] // p)), p)
    indicator = (3 + A + B - A * B) // 4
    assert indicator in (0, 1)
    return Verdict.SOLUBLE if indicator == 1 else Verdict.INSOLUBLE


# ------------------------------------------------------------- mod 8 sets

_A1_PAIR_SUMS = frozenset(
    [(0, 0), (2, 0), (2, 6), (0, 6), (6, 0), (6, 2), (0, 2)])


@lru_cache(maxsize=1)
def mod8_set_A1():
    """Vectors q in U^4 marking 2-adic solubility with all coefficients odd."""
    out = set()
    for q in product(MOD8_UNITS, repeat=4):
        cross = any((q[i] + q[j]) % 8 in (0, 4) for i in (0, 1) for j in (2, 3))
        pairs = ((q[0] + q[1]) % 8, (q[2] + q[3]) % 8) in _A1_PAIR_SUMS
        if cross or pairs:
            out.add(q)
    return frozenset(out)


@lru_cache(maxsize=1)
def mod8_set_A2():
    """Vectors q in U^4 marking 2-adic solubility with two even coefficients,
    the halved even pair occupying the first two slots."""
    out = set()
    for q in product(MOD8_UNITS, repeat=4):
        member = False
        for i, j, k, l in ((0, 1, 2, 3), (2, 3, 0, 1)):
            for v in MOD8_UNITS:
                if (q[k] + v) * (q[l] + v) % 8 == 0 and (q[i] + q[j]) % 8 in (0, 2 * v % 8):
                    member = True
        if member:
            out.add(q)
    return frozenset(out)


@lru_cache(maxsize=None)
def arranged_a2(positions):
    """The A2 test transported to an arbitrary slot order.

    positions = (i, j, k, l) is a permutation of (0,1,2,3) whose first two
    entries are the slots holding the (halved) even coefficients; the
    returned set contains exactly the vectors q with (q_i,q_j,q_k,q_l) in
    A2.  Generated from mod8_set_A2 rather than hand-coded so that no
    transcription step exists to get wrong.
    """
    i, j, k, l = positions
    if sorted(positions) != [0, 1, 2, 3]:
        raise ValueError("positions must permute (0,1,2,3), got %r" % (positions,))
    base = mod8_set_A2()
    return frozenset(
        q for q in product(MOD8_UNITS, repeat=4)
        if (q[i], q[j], q[k], q[l]) in base)


def _mod8(x: int) -> int:
    return x % 8


def local_indicator_2(a) -> Verdict:
    """Solubility over Q_2; coefficients squarefree with gcd 1."""
    a = _check_quadric(a)
    evens = [i for i in range(4) if a[i] % 2 == 0]
    if len(evens) == 4:
        raise ValueError("common factor 2: quadric %r is not normalized" % (a,))
    if len(evens) == 3:
        # scale the form by 2 and absorb squares: three even coefficients
        # become odd, the odd one becomes even; lands in the one-even case
        reduced = tuple(x // 2 if x % 2 == 0 else 2 * x for x in a)
        return local_indicator_2(reduced)
    if len(evens) == 1:
        # v_2(a0 a1 a2 a3) is odd, so the discriminant is a non-square in
        # Q_2; the only anisotropic quaternary form over Q_2 has square
        # discriminant, hence this form is isotropic
        return Verdict.SOLUBLE
    if not evens:
        vec = tuple(_mod8(x) for x in a)
        ok = vec in mod8_set_A1()
    else:
        i, j = evens
        k, l = (t for t in range(4) if t not in evens)
        vec = (_mod8(a[i] // 2), _mod8(a[j] // 2), _mod8(a[k]), _mod8(a[l]))
        ok = vec in mod8_set_A2()
    return Verdict.SOLUBLE if ok else Verdict.INSOLUBLE


# --------------------------------------------------------- Hilbert symbol

def _split_val(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, place) -> int:
    """Hilbert symbol (a, b)_v in {-1, +1}: +1 iff a x^2 + b y^2 = z^2 has a
    nontrivial solution over the completion at v."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == REAL:
        return -1 if (a < 0 and b < 0) else 1
    p = _check_prime(place)
    if p == 2:
        alpha, u = odd_part(a)
        beta, v = odd_part(b)
        eps = ((u - 1) // 2) * ((v - 1) // 2)
        e = eps + alpha * ((v * v - 1) // 8) + beta * ((u * u - 1) // 8)
        return -1 if e % 2 else 1
    alpha, u = _split_val(a, p)
    beta, v = _split_val(b, p)
    sym = 1
    if beta % 2:
        sym *= jacobi(u, p)
    if alpha % 2:
        sym *= jacobi(v, p)
        if beta % 2:
            sym *= jacobi(-1, p)
    return sym


# ----------------------------------------------------- brute-force oracle

#: default search depths; squarefree coefficients keep v_p(2 a_i) <= 2, so a
#: primitive solution at these depths always carries a liftable coordinate
DEFAULT_DEPTH_ODD = 4
DEFAULT_DEPTH_2 = 6

_FRONTIER_CAP = 1 << 17


def _oracle_python(a, p: int, depth: int) -> Verdict:
    """Reference implementation of the canonical-orbit Hensel search.

    Level j holds exactly one representative per unit-scaling class of
    primitive solutions of Q(x) = 0 mod p^j: the first coordinate that is a
    unit is pinned to 1 and the earlier ones are multiples of p.  A class
    is certified soluble at level j when v_p(2 a_i x_i) = w with 2w + 1 <= j
    for some i (strong Hensel lifting): the search returns SOLUBLE the
    moment a certified representative appears, so only uncertified ones are
    ever stored.  A level with no representatives certifies insolubility;
    exhausting the depth, or overflowing the frontier buffer, returns
    UNKNOWN.  For squarefree coefficients an uncertified representative at
    level 3 (odd p) or level 5 (p = 2) would need v_p(2 a_i x_i) >= 2 at
    its pinned unit coordinate, which is impossible, so the default depths
    always resolve.
    """
    def q_eval(x, mod):
        return (a[0] * x[0] * x[0] + a[1] * x[1] * x[1]
                + a[2] * x[2] * x[2] + a[3] * x[3] * x[3]) % mod

    def val(n):
        v = 0
        while n % p == 0 and v <= depth:
            n //= p
            v += 1
        return v

    def certified(x, level):
        for i in range(4):
            if x[i] == 0:
                continue
            if 2 * val(2 * a[i] * x[i]) + 1 <= level:
                return True
        return False

    frontier = []
    for c in range(4):
        for rest in product(range(p), repeat=3 - c):
            x = (0,) * c + (1,) + rest
            if q_eval(x, p) == 0:
                if certified(x, 1):
                    return Verdict.SOLUBLE
                frontier.append((x, c))
    for level in range(1, depth):
        if not frontier:
            return Verdict.INSOLUBLE
        nxt = []
        mod = p ** (level + 1)
        shift = p ** level
        for x, c in frontier:
            free = [i for i in range(4) if i != c]
            for e in product(range(p), repeat=3):
                y = list(x)
                for t, i in enumerate(free):
                    y[i] = x[i] + shift * e[t]
                if q_eval(y, mod) == 0:
                    if certified(y, level + 1):
                        return Verdict.SOLUBLE
                    nxt.append((tuple(y), c))
            if len(nxt) > _FRONTIER_CAP:
                return Verdict.UNKNOWN
        frontier = nxt
    return Verdict.INSOLUBLE if not frontier else Verdict.UNKNOWN


def padic_oracle(a, place, depth: int | None = None) -> Verdict:
    """Exhaustive search for primitive solutions of Q(x) = 0 mod p^depth.

    Returns SOLUBLE when a found solution admits a Hensel certificate,
    INSOLUBLE when some level p^j <= p^depth has no primitive solution at
    all, UNKNOWN otherwise.  At the real place the sign test is used and
    depth is ignored.
    """
    a = _check_quadric(a)
    if place == REAL:
        return solvable_real(a)
    p = _check_prime(place)
    if depth is None:
        depth = DEFAULT_DEPTH_2 if p == 2 else DEFAULT_DEPTH_ODD
    if depth < 1 or depth > 12:
        raise ValueError("depth %r out of range [1, 12]" % (depth,))
    if _kernels is not None and max(abs(x) for x in a) * p ** (2 * depth) < 2 ** 62:
        code = _kernels.oracle_bfs(a[0], a[1], a[2], a[3], p, depth, _FRONTIER_CAP)
        return (Verdict.INSOLUBLE, Verdict.SOLUBLE, Verdict.UNKNOWN)[code]
    return _oracle_python(a, p, depth)


# ------------------------------------------------------------ global test

def bad_primes(a, sieve=None):
    """Odd primes dividing the product of the (normalized) coefficients."""
    primes = set()
    for x in a:
        for p, _ in factorize(x, sieve).factors:
            if p != 2:
                primes.add(p)
    return sorted(primes)


def is_everywhere_locally_soluble(a, sieve=None) -> bool:
    """True iff the quadric has points over R and over every Q_p.

    Only finitely many places can obstruct: the real place, 2, and the odd
    primes dividing the normalized coefficient product (at any other odd
    prime the coefficient product is a unit, giving solubility).
    """
    na = normalize(a, sieve)
    if solvable_real(na) is Verdict.INSOLUBLE:
        return False
    if local_indicator_2(na) is Verdict.INSOLUBLE:
        return False
    for p in bad_primes(na, sieve):
        if local_indicator_odd(na, p) is Verdict.INSOLUBLE:
            return False
    return True


def has_rational_point(a, sieve=None) -> bool:
    """Identical to is_everywhere_locally_soluble: quadrics obey the Hasse
    principle, so everywhere-local solubility already gives a Q-point."""
    return is_everywhere_locally_soluble(a, sieve)


def _coordinate_order(h: int):
    # 0, 1, -1, 2, -2, ..., h, -h
    seq = [0]
    for k in range(1, h + 1):
        seq.append(k)
        seq.append(-k)
    return seq


def find_rational_point(a, height_bound: int):
    """Smallest-sup-norm primitive integer zero with |x_i| <= height_bound.

    Shells of increasing sup-norm are searched; inside a shell, coordinates
    run through 0, 1, -1, 2, -2, ... with x3 in the outermost loop and x0 in
    the innermost, and the first zero found is returned.  The first shell
    containing any zero contains only primitive ones (an imprimitive zero
    g*y sits in a shell g times larger than y's), so the returned vector is
    primitive.  Returns None if no zero exists within the bound.
    """
    a = _check_quadric(a)
    if height_bound < 1:
        raise ValueError("height bound must be positive")
    if _kernels is not None and max(abs(x) for x in a) * height_bound ** 2 < 2 ** 61:
        hit = _kernels.point_search(a[0], a[1], a[2], a[3], height_bound)
        if hit is None:
            return None
        return tuple(int(v) for v in hit)
    for h in range(1, height_bound + 1):
        order = _coordinate_order(h)
        for x3 in order:
            for x2 in order:
                for x1 in order:
                    for x0 in order:
                        if max(abs(x0), abs(x1), abs(x2), abs(x3)) != h:
                            continue
                        if a[0] * x0 * x0 + a[1] * x1 * x1 + a[2] * x2 * x2 + a[3] * x3 * x3 == 0:
                            return (x0, x1, x2, x3)
    return None
