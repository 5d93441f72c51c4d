"""Height census for diagonal quadric surfaces over the split quadric base.

The objects counted are integer tuples t = (t0, t1, t2, t3) with
gcd(t0, t1) = gcd(t2, t3) = 1, measured by the hyperbolic height

    h(t) = max(|t0|, |t1|) * max(|t2|, |t3|),

each tuple carrying the diagonal fibre quadric

    t0t2 x0^2 + t1t3 x1^2 + t1t2 x2^2 + t0t3 x3^2 = 0

(or a signed variant).  The principal counting function is

    N(B) = 1/4 #{ t in (Z\\{0})^4 : fibre soluble over Q; gcd conditions;
                  -t0t1, -t2t3 not squares; h(t) <= B },

and the real-place analysis splits it as N(B) = 2 N1(B) + N2(B), where N1
and N2 range over positive tuples with the sign patterns (-,+,+,-) and
(+,+,-,-) attached to the fibre coefficients and the square conditions
t0t1 != [] (for N1) and t0t1, t2t3 != [] (for N2).

Two independent evaluation routes are kept side by side.  The reference
route enumerates tuples literally and decides solubility through the
solubility module (memoized on the normalized quadric).  The fast route
walks positive tuples in compiled code and decides each place from
precomputed tables: for every odd prime engaged by a tuple the coefficient
product is a perfect square, so exactly two normalized coefficients are
divisible by p and local solubility reduces to one Legendre symbol; the
2-adic verdict is a 4096-entry table lookup keyed on coefficient valuation
bits and unit residues mod 8.  Counts are accumulated per exact height, so
a single enumeration serves every bound up to its maximum through prefix
sums.

The coefficient decomposition t_i = 2^{sigma_i} s_i m_ij m_ik b_i^2 (square
parts b_i, pairwise gcd parts m_ij of the squarefree kernels, odd residual
parts s_i) is implemented here as well, together with the three-term
hyperbola identity used to organise sums over this height.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from time import perf_counter

import numpy as np

from .arith import CeilingExceeded, SpfSieve, is_square, shared_sieve
from .solubility import Verdict, is_everywhere_locally_soluble, local_indicator_2, normalize

try:  # compiled twins; every caller keeps a pure fallback
    from . import _kernels
except Exception:  # pragma: no cover - exercised only without numba
    _kernels = None

__all__ = [
    "CENSUS_CEILING",
    "CensusResult",
    "CountVariant",
    "Decomposition",
    "census",
    "count_N",
    "count_N1",
    "count_N2",
    "count_raw",
    "decompose",
    "fibre_quadric",
    "height",
    "hyperbola_split_check",
    "region_count",
    "results_to_csv",
    "results_to_json_lines",
]

CENSUS_CEILING = 10**5


# ------------------------------------------------------------- base points

def _validate_base_point(t):
    t = tuple(int(x) for x in t)
    if len(t) != 4 or any(x == 0 for x in t):
        raise ValueError("base point needs four nonzero integers, got %r" % (t,))
    if math.gcd(t[0], t[1]) != 1 or math.gcd(t[2], t[3]) != 1:
        raise ValueError("base point %r violates gcd(t0,t1) = gcd(t2,t3) = 1" % (t,))
    return t


def height(t) -> int:
    """Hyperbolic height max(|t0|,|t1|) * max(|t2|,|t3|)."""
    t = _validate_base_point(t)
    return max(abs(t[0]), abs(t[1])) * max(abs(t[2]), abs(t[3]))


@dataclass(frozen=True)
class CountVariant:
    """Sign variant r in {1, 2}; the attached sign is delta = 3 - 2r."""

    r: int

    def __post_init__(self):
        if self.r not in (1, 2):
            raise ValueError("variant must be 1 or 2, got %r" % (self.r,))

    @property
    def delta(self) -> int:
        return 3 - 2 * self.r


def fibre_quadric(t, variant, signed: bool = True):
    """Diagonal fibre above t: signed uses (-d t0t2, t1t3, d t1t2, -t0t3)."""
    t = _validate_base_point(t)
    if not signed:
        return (t[0] * t[2], t[1] * t[3], t[1] * t[2], t[0] * t[3])
    r = variant.r if isinstance(variant, CountVariant) else int(variant)
    d = CountVariant(r).delta
    return (-d * t[0] * t[2], t[1] * t[3], d * t[1] * t[2], -t[0] * t[3])


# ----------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Decomposition:
    """t_i = 2^{sigma_i} s_i m_ij m_ik b_i^2 with squarefree coprime parts.

    m is ordered (m02, m03, m12, m13); component i pairs with the two m's
    naming it (t0: m02 m03, t1: m12 m13, t2: m02 m12, t3: m03 m13).
    """

    b: tuple
    m: tuple
    sigma: tuple
    s: tuple

    def reconstruct(self):
        b, (m02, m03, m12, m13), sigma, s = self.b, self.m, self.sigma, self.s
        return (
            2 ** sigma[0] * s[0] * m02 * m03 * b[0] ** 2,
            2 ** sigma[1] * s[1] * m12 * m13 * b[1] ** 2,
            2 ** sigma[2] * s[2] * m02 * m12 * b[2] ** 2,
            2 ** sigma[3] * s[3] * m03 * m13 * b[3] ** 2,
        )


def _squarefree_split_positive(n, sieve):
    if sieve is not None and n <= sieve.limit:
        a = b = 1
        for p, e in sieve.factorize(n).factors:
            if e % 2:
                a *= p
            b *= p ** (e // 2)
        return a, b
    from .arith import squarefree_split

    return squarefree_split(n)


def decompose(t, sieve: SpfSieve | None = None) -> Decomposition:
    """Split positive coprime-pair t into square, gcd, power-of-2 and odd parts."""
    t = _validate_base_point(t)
    if any(x < 0 for x in t):
        raise ValueError("decomposition is defined for positive tuples, got %r" % (t,))
    split = [_squarefree_split_positive(x, sieve) for x in t]
    a = [x[0] for x in split]
    b = tuple(x[1] for x in split)
    m02 = math.gcd(a[0], a[2])
    m03 = math.gcd(a[0], a[3])
    m12 = math.gcd(a[1], a[2])
    m13 = math.gcd(a[1], a[3])
    quot = (
        a[0] // (m02 * m03),
        a[1] // (m12 * m13),
        a[2] // (m02 * m12),
        a[3] // (m03 * m13),
    )
    sigma = tuple(1 if x % 2 == 0 else 0 for x in quot)
    s = tuple(x >> sg for x, sg in zip(quot, sigma))
    out = Decomposition(b=b, m=(m02, m03, m12, m13), sigma=sigma, s=s)
    # the gcd preconditions force every side condition; keep them checked
    M = m02 * m03 * m12 * m13
    assert out.reconstruct() == t
    assert all(x % 2 == 1 for x in s) and sum(sigma) <= 1
    assert all(math.gcd(x, M) == 1 for x in s)
    assert all(math.gcd(s[i], s[j]) == 1 for i in range(4) for j in range(i + 1, 4))
    assert sum(sigma) == 0 or M % 2 == 1
    assert math.gcd(b[0], b[1]) == 1 and math.gcd(b[2], b[3]) == 1
    assert math.gcd(m02, b[1] * b[3]) == 1 and math.gcd(m03, b[1] * b[2]) == 1
    assert math.gcd(m12, b[0] * b[3]) == 1 and math.gcd(m13, b[0] * b[2]) == 1
    return out


# ------------------------------------------------------- reference census

@lru_cache(maxsize=1 << 18)
def _soluble_normalized(q) -> bool:
    return is_everywhere_locally_soluble(q)


def _soluble(q) -> bool:
    return _soluble_normalized(normalize(q))


def _primitive_pairs(limit):
    for h in range(1, limit + 1):
        for j in range(1, h + 1):
            if math.gcd(h, j) == 1:
                yield h, j, h
                if j < h:
                    yield j, h, h


_SIGNS16 = tuple(product((1, -1), repeat=4))


def _pure_raw_heights(bmax):
    """Literal all-sign enumeration; out[h] = raw tuple count at height h."""
    out = [0] * (bmax + 1)
    for u0, u1, h1 in _primitive_pairs(bmax):
        for u2, u3, h2 in _primitive_pairs(bmax // h1):
            w = 0
            for e0, e1, e2, e3 in _SIGNS16:
                t0, t1, t2, t3 = e0 * u0, e1 * u1, e2 * u2, e3 * u3
                if is_square(-t0 * t1) or is_square(-t2 * t3):
                    continue
                if _soluble((t0 * t2, t1 * t3, t1 * t2, t0 * t3)):
                    w += 1
            out[h1 * h2] += w
    return out


def _pure_n1_heights(bmax):
    out = [0] * (bmax + 1)
    for u0, u1, h1 in _primitive_pairs(bmax):
        if is_square(u0 * u1):
            continue
        for u2, u3, h2 in _primitive_pairs(bmax // h1):
            if _soluble((-u0 * u2, u1 * u3, u1 * u2, -u0 * u3)):
                out[h1 * h2] += 1
    return out


def _pure_n2_heights(bmax):
    out = [0] * (bmax + 1)
    for u0, u1, h1 in _primitive_pairs(bmax):
        if is_square(u0 * u1):
            continue
        for u2, u3, h2 in _primitive_pairs(bmax // h1):
            if is_square(u2 * u3):
                continue
            if _soluble((u0 * u2, u1 * u3, -u1 * u2, -u0 * u3)):
                out[h1 * h2] += 1
    return out


def _pure_region_heights(bmax, l):
    eps = tuple(-1 if bit else 1 for bit in l)
    out = [0] * (bmax + 1)
    for u0, u1, h1 in _primitive_pairs(bmax):
        for u2, u3, h2 in _primitive_pairs(bmax // h1):
            t0, t1, t2, t3 = eps[0] * u0, eps[1] * u1, eps[2] * u2, eps[3] * u3
            if is_square(-t0 * t1) or is_square(-t2 * t3):
                continue
            if _soluble((t0 * t2, t1 * t3, t1 * t2, t0 * t3)):
                out[h1 * h2] += 1
    return out


# ------------------------------------------------------------ fast census

_VALID_VBITS = ((0, 0, 0, 0),) + tuple(
    vb for vb in product((0, 1), repeat=4) if sum(vb) == 2
)


@lru_cache(maxsize=3)
def _tables(bmax: int):
    return _build_tables(bmax, None)


def _tables_for(bmax: int, sieve):
    if sieve is None:
        return _tables(bmax)
    if sieve.limit < bmax:
        raise ValueError(
            "sieve limit %d is below the height bound %d" % (sieve.limit, bmax)
        )
    return _build_tables(bmax, sieve)


def _build_tables(bmax: int, sieve):
    if sieve is None:
        sieve = shared_sieve() if bmax <= shared_sieve().limit else SpfSieve(bmax)
    sf = np.ones(bmax + 1, np.int64)
    omod8 = np.ones(bmax + 1, np.uint8)
    v2b = np.zeros(bmax + 1, np.uint8)
    off = np.zeros(bmax + 2, np.int64)
    plist = []
    for n in range(1, bmax + 1):
        a = 1
        for p, e in sieve.factorize(n).factors:
            if e % 2:
                a *= p
                if p > 2:
                    plist.append(p)
        sf[n] = a
        off[n + 1] = len(plist)
        if a % 2 == 0:
            v2b[n] = 1
            a //= 2
        omod8[n] = a % 8
        # factor lists must stay sorted for the kernel's four-way merge
    fp = np.array(plist, np.int64) if plist else np.zeros(1, np.int64)

    primes = [p for p in sieve.primes() if 2 < p <= bmax]
    qr_base = np.full(bmax + 1, -1, np.int64)
    nwords = 0
    for p in primes:
        qr_base[p] = nwords
        nwords += (p >> 6) + 1
    qr_words = np.zeros(max(nwords, 1), np.uint64)
    for p in primes:
        k = np.arange(1, p // 2 + 1, dtype=np.int64)
        xs = np.unique(k * k % p)
        np.bitwise_or.at(
            qr_words,
            qr_base[p] + (xs >> 6),
            np.uint64(1) << (xs & 63).astype(np.uint64),
        )

    t2 = np.zeros(4096, np.uint8)
    for vb in _VALID_VBITS:
        for w in product((1, 3, 5, 7), repeat=4):
            rep = tuple((2 if v else 1) * x for v, x in zip(vb, w))
            key = (
                vb[0] | vb[1] << 1 | vb[2] << 2 | vb[3] << 3
                | (w[0] >> 1) << 4 | (w[1] >> 1) << 6
                | (w[2] >> 1) << 8 | (w[3] >> 1) << 10
            )
            if local_indicator_2(rep) is Verdict.SOLUBLE:
                t2[key] = 1
    return sf, off, fp, omod8, v2b, qr_words, qr_base, t2


def _h1_chunks(bmax, workers):
    if workers <= 1 or bmax < 64:
        return [(1, bmax + 1)]
    # the work below h1 is roughly proportional to (bmax/h1)^2 * phi(h1),
    # i.e. ~ bmax^2/h1, so geometric boundaries give balanced chunks
    target = 4 * workers
    bounds = [1]
    ratio = (bmax + 1) ** (1.0 / target)
    cur = 1.0
    for _ in range(target):
        cur *= ratio
        nxt = max(bounds[-1] + 1, int(cur))
        if nxt >= bmax + 1:
            break
        bounds.append(nxt)
    bounds.append(bmax + 1)
    return list(zip(bounds[:-1], bounds[1:]))


def _run_chunked(run_one, bmax, workers):
    chunks = _h1_chunks(bmax, workers)
    outs = [np.zeros(bmax + 1, np.int64) for _ in chunks]
    if workers <= 1 or len(chunks) == 1:
        for (lo, hi), out in zip(chunks, outs):
            run_one(lo, hi, out)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda job: run_one(job[0][0], job[0][1], job[1]),
                          zip(chunks, outs)))
    total = outs[0]
    for extra in outs[1:]:
        total += extra
    return total


def _heights_raw(bmax, workers=1, sieve=None):
    if _kernels is None:
        return np.array(_pure_raw_heights(bmax), np.int64)
    sf, off, fp, omod8, v2b, qw, qb, t2 = _tables_for(bmax, sieve)

    def run_one(lo, hi, out):
        _kernels.census_direct(lo, hi, bmax, sf, off, fp, omod8, v2b, qw, qb, t2, out)

    return _run_chunked(run_one, bmax, workers)


def _heights_pattern(bmax, nbits, block01, block23, workers=1, sieve=None):
    if nbits[0] == nbits[1] == nbits[2] == nbits[3]:
        # constant sign pattern: the quadric is definite, nothing counts
        return np.zeros(bmax + 1, np.int64)
    if _kernels is None:
        # pure twin of the compiled kernel (same tuple test, plain Python)
        return np.array(
            _pure_pattern_heights(bmax, nbits, block01, block23), np.int64
        )
    sf, off, fp, omod8, v2b, qw, qb, t2 = _tables_for(bmax, sieve)
    n0, n1, n2, n3 = (int(b) for b in nbits)

    def run_one(lo, hi, out):
        _kernels.census_single(lo, hi, bmax, n0, n1, n2, n3,
                               int(block01), int(block23),
                               sf, off, fp, omod8, v2b, qw, qb, t2, out)

    return _run_chunked(run_one, bmax, workers)


def _pure_pattern_heights(bmax, nbits, block01, block23):
    eta = tuple(-1 if b else 1 for b in nbits)
    out = [0] * (bmax + 1)
    for u0, u1, h1 in _primitive_pairs(bmax):
        if block01 and is_square(u0 * u1):
            continue
        for u2, u3, h2 in _primitive_pairs(bmax // h1):
            if block23 and is_square(u2 * u3):
                continue
            q = (eta[0] * u0 * u2, eta[1] * u1 * u3,
                 eta[2] * u1 * u2, eta[3] * u0 * u3)
            if _soluble(q):
                out[h1 * h2] += 1
    return out


# -------------------------------------------------------- counting surface

def _check_bound(B, ceiling):
    B = int(B)
    if B < 1:
        raise ValueError("height bound must be positive, got %r" % (B,))
    if B > ceiling:
        raise CeilingExceeded(
            "height bound %d exceeds the enumeration ceiling %d; pass a "
            "larger ceiling= explicitly to override" % (B, ceiling)
        )
    return B


def count_raw(B, sieve: SpfSieve | None = None, *,
              workers: int = 1, ceiling: int = CENSUS_CEILING) -> int:
    """Sign-unrestricted tuple count (the quantity whose quarter is N)."""
    B = _check_bound(B, ceiling)
    return int(_heights_raw(B, workers, sieve).sum())


def count_N(B, sieve: SpfSieve | None = None, *,
            workers: int = 1, ceiling: int = CENSUS_CEILING) -> int:
    raw = count_raw(B, sieve, workers=workers, ceiling=ceiling)
    if raw % 4:
        # the quarter presumes a free sign action; a remainder would mean
        # the counting problem was misread, so fail loudly
        raise ArithmeticError("raw census %d at B=%d is not divisible by 4" % (raw, B))
    return raw // 4


_N1_PATTERN = (1, 0, 0, 1)  # quadric signs (-,+,+,-)
_N2_PATTERN = (0, 0, 1, 1)  # quadric signs (+,+,-,-)


def count_N1(B, sieve: SpfSieve | None = None, *,
             workers: int = 1, ceiling: int = CENSUS_CEILING) -> int:
    B = _check_bound(B, ceiling)
    return int(_heights_pattern(B, _N1_PATTERN, True, False, workers, sieve).sum())


def count_N2(B, sieve: SpfSieve | None = None, *,
             workers: int = 1, ceiling: int = CENSUS_CEILING) -> int:
    B = _check_bound(B, ceiling)
    return int(_heights_pattern(B, _N2_PATTERN, True, True, workers, sieve).sum())


def region_count(B, l, sieve: SpfSieve | None = None, *,
                 workers: int = 1, ceiling: int = CENSUS_CEILING) -> int:
    """Raw census restricted to the sign region t_i < 0 iff l_i = 1."""
    B = _check_bound(B, ceiling)
    l = tuple(int(b) for b in l)
    if len(l) != 4 or any(b not in (0, 1) for b in l):
        raise ValueError("sign region needs four bits, got %r" % (l,))
    nbits = (l[0] ^ l[2], l[1] ^ l[3], l[1] ^ l[2], l[0] ^ l[3])
    return int(
        _heights_pattern(B, nbits, l[0] ^ l[1], l[2] ^ l[3], workers, sieve).sum()
    )


@dataclass(frozen=True)
class CensusResult:
    B: int
    N: int
    N1: int
    N2: int
    raw_count: int
    elapsed_ms: int


def census(b_values, *, workers: int = 1, ceiling: int = CENSUS_CEILING):
    """Census rows for every bound in b_values via one shared enumeration.

    All three counting functions are accumulated per exact height at
    max(b_values), so each requested bound is a prefix sum.  elapsed_ms
    reports the wall time of the full sweep on every row.
    """
    b_values = [int(b) for b in b_values]
    if not b_values:
        raise ValueError("need at least one height bound")
    bmax = max(_check_bound(b, ceiling) for b in b_values)
    start = perf_counter()
    raw_c = np.cumsum(_heights_raw(bmax, workers))
    n1_c = np.cumsum(_heights_pattern(bmax, _N1_PATTERN, True, False, workers))
    n2_c = np.cumsum(_heights_pattern(bmax, _N2_PATTERN, True, True, workers))
    elapsed_ms = int(round(1000 * (perf_counter() - start)))
    rows = []
    for b in b_values:
        raw = int(raw_c[b])
        if raw % 4:
            raise ArithmeticError("raw census %d at B=%d is not divisible by 4" % (raw, b))
        rows.append(
            CensusResult(B=b, N=raw // 4, N1=int(n1_c[b]), N2=int(n2_c[b]),
                         raw_count=raw, elapsed_ms=elapsed_ms)
        )
    return rows


CSV_HEADER = "B,N,N1,N2,raw_count,elapsed_ms"


def results_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append("%d,%d,%d,%d,%d,%d"
                     % (r.B, r.N, r.N1, r.N2, r.raw_count, r.elapsed_ms))
    return "\n".join(lines) + "\n"


def results_to_json_lines(rows) -> str:
    return "".join(
        json.dumps(
            {"B": r.B, "N": r.N, "N1": r.N1, "N2": r.N2,
             "raw_count": r.raw_count, "elapsed_ms": r.elapsed_ms},
            sort_keys=True,
        ) + "\n"
        for r in rows
    )


# ------------------------------------------------------- hyperbola method

def hyperbola_split_check(X, Y, c, g) -> bool:
    """Exact three-term split of the sum over ||n0c0,n1c1||*||n2c2,n3c3|| <= X.

    The full sum over the hyperbolic region equals

        sum_{J <= Y} sum_{K <= X/J} + sum_{K <= X/Y} sum_{J <= X/K}
                                   - sum_{J <= Y} sum_{K <= X/Y}

    with J = max(n0c0, n1c1) and K = max(n2c2, n3c3).  The four weight
    functions g_i take positive integers to integers, so both sides are
    evaluated exactly; returns True when they agree.
    """
    X, Y = int(X), int(Y)
    if X < 2 or Y < 2 or Y * Y > X:
        raise ValueError("need X >= 2 and 2 <= Y <= sqrt(X)")
    c = tuple(int(v) for v in c)
    if len(c) != 4 or any(v < 1 for v in c):
        raise ValueError("scaling constants must be four positive integers")
    g0, g1, g2, g3 = g

    def prefix(gi, limit):
        acc = [0] * (limit + 1)
        for n in range(1, limit + 1):
            acc[n] = acc[n - 1] + int(gi(n))
        return acc

    p0 = prefix(g0, X // c[0])
    p1 = prefix(g1, X // c[1])
    p2 = prefix(g2, X // c[2])
    p3 = prefix(g3, X // c[3])

    def box01(h):
        # sum of g0 g1 over max(n0c0, n1c1) <= h
        return p0[min(h // c[0], len(p0) - 1)] * p1[min(h // c[1], len(p1) - 1)]

    def box23(h):
        return p2[min(h // c[2], len(p2) - 1)] * p3[min(h // c[3], len(p3) - 1)]

    def sweep01(jcap, inner):
        # sum over pairs (n0, n1) with J = max(n0c0, n1c1) <= jcap of
        # g0(n0) g1(n1) * inner(J)
        total = 0
        for n0 in range(1, jcap // c[0] + 1):
            v0 = int(g0(n0))
            if v0 == 0:
                continue
            for n1 in range(1, jcap // c[1] + 1):
                v1 = int(g1(n1))
                if v1 == 0:
                    continue
                total += v0 * v1 * inner(max(n0 * c[0], n1 * c[1]))
        return total

    def sweep23(kcap, inner):
        total = 0
        for n2 in range(1, kcap // c[2] + 1):
            v2 = int(g2(n2))
            if v2 == 0:
                continue
            for n3 in range(1, kcap // c[3] + 1):
                v3 = int(g3(n3))
                if v3 == 0:
                    continue
                total += v2 * v3 * inner(max(n2 * c[2], n3 * c[3]))
        return total

    full = sweep01(X, lambda j: box23(X // j))
    term1 = sweep01(Y, lambda j: box23(X // j))
    term2 = sweep23(X // Y, lambda k: box01(X // k))
    term3 = box01(Y) * box23(X // Y)
    return full == term1 + term2 - term3
