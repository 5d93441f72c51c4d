"""Compiled inner loops (numba).

Every function here is a twin of a pure-Python implementation living next
to its call site; the twins are compared in the test suite and the callers
fall back to the pure versions when this module fails to import.  Keep the
semantics byte-identical when editing either side.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["oracle_bfs", "point_search", "census_direct", "census_single"]


@njit(cache=True)
def _certified(a0, a1, a2, a3, x0, x1, x2, x3, p, level):
    for i in range(4):
        if i == 0:
            n = 2 * a0 * x0
        elif i == 1:
            n = 2 * a1 * x1
        elif i == 2:
            n = 2 * a2 * x2
        else:
            n = 2 * a3 * x3
        if n == 0:
            continue
        v = 0
        while n % p == 0 and 2 * v + 1 <= level:
            n //= p
            v += 1
        if 2 * v + 1 <= level:
            return True
    return False


@njit(cache=True)
def oracle_bfs(a0, a1, a2, a3, p, depth, cap):
    """Canonical-orbit Hensel search; 0 = insoluble, 1 = soluble, 2 = unknown.

    Twin of solubility._oracle_python; see there for the invariants.
    """
    fr = np.empty((cap, 5), np.int64)
    n = 0
    # level 1: first unit coordinate pinned to 1, earlier coordinates 0
    total = p * p * p * p
    for idx in range(total):
        x0 = idx % p
        x1 = (idx // p) % p
        x2 = (idx // (p * p)) % p
        x3 = idx // (p * p * p)
        c = -1
        if x0 != 0:
            if x0 == 1:
                c = 0
        elif x1 != 0:
            if x1 == 1:
                c = 1
        elif x2 != 0:
            if x2 == 1:
                c = 2
        elif x3 == 1:
            c = 3
        if c < 0:
            continue
        if (a0 * x0 * x0 + a1 * x1 * x1 + a2 * x2 * x2 + a3 * x3 * x3) % p == 0:
            if _certified(a0, a1, a2, a3, x0, x1, x2, x3, p, 1):
                return 1
            if n >= cap:
                return 2
            fr[n, 0] = x0
            fr[n, 1] = x1
            fr[n, 2] = x2
            fr[n, 3] = x3
            fr[n, 4] = c
            n += 1
    nxt = np.empty((cap, 5), np.int64)
    shift = p
    for level in range(1, depth):
        if n == 0:
            return 0
        mod = shift * p
        m = 0
        for r in range(n):
            c = fr[r, 4]
            # free coordinate indices: the three slots other than c
            if c == 0:
                i0, i1, i2 = 1, 2, 3
            elif c == 1:
                i0, i1, i2 = 0, 2, 3
            elif c == 2:
                i0, i1, i2 = 0, 1, 3
            else:
                i0, i1, i2 = 0, 1, 2
            for e0 in range(p):
                for e1 in range(p):
                    for e2 in range(p):
                        y0 = fr[r, 0]
                        y1 = fr[r, 1]
                        y2 = fr[r, 2]
                        y3 = fr[r, 3]
                        if i0 == 0:
                            y0 += shift * e0
                        elif i0 == 1:
                            y1 += shift * e0
                        if i1 == 1:
                            y1 += shift * e1
                        elif i1 == 2:
                            y2 += shift * e1
                        if i2 == 2:
                            y2 += shift * e2
                        elif i2 == 3:
                            y3 += shift * e2
                        if (a0 * y0 * y0 + a1 * y1 * y1 + a2 * y2 * y2
                                + a3 * y3 * y3) % mod == 0:
                            if _certified(a0, a1, a2, a3, y0, y1, y2, y3,
                                          p, level + 1):
                                return 1
                            if m >= cap:
                                return 2
                            nxt[m, 0] = y0
                            nxt[m, 1] = y1
                            nxt[m, 2] = y2
                            nxt[m, 3] = y3
                            nxt[m, 4] = c
                            m += 1
        fr, nxt = nxt, fr
        n = m
        shift = mod
    return 0 if n == 0 else 2


@njit(cache=True)
def _point_search_impl(a0, a1, a2, a3, hmax):
    out = np.zeros(5, np.int64)
    seq = np.empty(2 * hmax + 1, np.int64)
    for h in range(1, hmax + 1):
        m = 2 * h + 1
        seq[0] = 0
        for k in range(1, h + 1):
            seq[2 * k - 1] = k
            seq[2 * k] = -k
        for i3 in range(m):
            x3 = seq[i3]
            t3 = a3 * x3 * x3
            m3 = abs(x3)
            for i2 in range(m):
                x2 = seq[i2]
                t2 = t3 + a2 * x2 * x2
                m2 = max(m3, abs(x2))
                for i1 in range(m):
                    x1 = seq[i1]
                    t1 = t2 + a1 * x1 * x1
                    m1 = max(m2, abs(x1))
                    for i0 in range(m):
                        x0 = seq[i0]
                        if max(m1, abs(x0)) != h:
                            continue
                        if t1 + a0 * x0 * x0 == 0:
                            out[0] = 1
                            out[1] = x0
                            out[2] = x1
                            out[3] = x2
                            out[4] = x3
                            return out
    return out


def point_search(a0, a1, a2, a3, hmax):
    hit = _point_search_impl(a0, a1, a2, a3, hmax)
    if hit[0] == 0:
        return None
    return (int(hit[1]), int(hit[2]), int(hit[3]), int(hit[4]))


# ---------------------------------------------------------------- census
#
# Fast enumeration layer for the height census.  Tuples (u0,u1,u2,u3) of
# positive integers with gcd(u0,u1) = gcd(u2,u3) = 1 are walked in order of
# the hyperbolic height max(u0,u1)*max(u2,u3); for each tuple the local
# solubility of the attached diagonal quadric is decided from precomputed
# per-component data:
#
#   sf[n]     squarefree part of n,
#   off/fp    CSR lists of the odd primes dividing sf[n],
#   omod8[n]  odd part of sf[n] mod 8,
#   v2b[n]    v_2(sf[n]) in {0,1},
#   qr_words/qr_base  packed bitmaps of nonzero quadratic residues mod p,
#   t2        4096-entry table of 2-adic verdicts keyed on the coefficient
#             valuation bits and signed unit residues mod 8.
#
# The quadric of a sign pattern eta and positive tuple u is
# (eta0 u0u2, eta1 u1u3, eta2 u1u2, eta3 u0u3); its coefficient product is
# the perfect square (u0u1u2u3)^2, so for every odd prime p dividing the
# squarefree kernels exactly two normalized coefficients are divisible by p
# and the two Legendre conditions of the local criterion coincide.  Each
# engaged prime therefore contributes a single symbol
#
#   A = (-c_k c_l / p)   (c_k, c_l the two p-unit coefficients),
#
# whose unsigned part is computed once per tuple and whose sign part is an
# eta pair product.  With Prod(eta) = +1 there are only three distinct pair
# products, giving three fixed 8-bit pattern masks over the valid sign
# patterns (indexed by eta0, eta1, eta2 bits; eta3 is their product).

_SENT = 1 << 62


@njit(cache=True, nogil=True)
def _gcd64(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _qr_bit(qr_words, qr_base, p, x):
    # 1 when x is a nonzero quadratic residue mod p (x in [1, p))
    w = qr_base[p] + (x >> 6)
    return np.int64((qr_words[w] >> np.uint64(x & 63)) & np.uint64(1))


@njit(cache=True, nogil=True)
def _prime_fail_mask(u0, u1, u2, u3, a0, a1, a2, a3,
                     off, fp, qr_words, qr_base, fail):
    # Accumulate, over the odd primes engaged by the tuple, the set of sign
    # patterns whose quadric is p-adically insoluble.  Pattern masks:
    #   PA = patterns with eta0*eta2 = -1, PB with eta1*eta2 = -1,
    #   PC with eta0*eta1 = -1.
    i0 = off[u0]; s0 = off[u0 + 1]
    i1 = off[u1]; s1 = off[u1 + 1]
    i2 = off[u2]; s2 = off[u2 + 1]
    i3 = off[u3]; s3 = off[u3 + 1]
    h0 = fp[i0] if i0 < s0 else _SENT
    h1 = fp[i1] if i1 < s1 else _SENT
    h2 = fp[i2] if i2 < s2 else _SENT
    h3 = fp[i3] if i3 < s3 else _SENT
    while fail != 0xFF:
        p = h0
        if h1 < p:
            p = h1
        if h2 < p:
            p = h2
        if h3 < p:
            p = h3
        if p == _SENT:
            break
        b0 = h0 == p
        b1 = h1 == p
        b2 = h2 == p
        b3 = h3 == p
        if b0:
            i0 += 1
            h0 = fp[i0] if i0 < s0 else _SENT
        if b1:
            i1 += 1
            h1 = fp[i1] if i1 < s1 else _SENT
        if b2:
            i2 += 1
            h2 = fp[i2] if i2 < s2 else _SENT
        if b3:
            i3 += 1
            h3 = fp[i3] if i3 < s3 else _SENT
        if b0 or b1:
            if b2 or b3:
                # p divides one kernel from each coprime pair: the doubly
                # divisible coefficient is a unit after removing p^2
                x0 = ((a0 // p) if b0 else a0) % p
                x1 = ((a1 // p) if b1 else a1) % p
                x2 = ((a2 // p) if b2 else a2) % p
                x3 = ((a3 // p) if b3 else a3) % p
                x = (x0 * x1 % p) * (x2 * x3 % p) % p
                mask = 0x66  # eta0*eta1 patterns
            else:
                x = (a2 % p) * (a3 % p) % p
                mask = 0x3C  # eta1*eta2 patterns
        else:
            x = (a0 % p) * (a1 % p) % p
            mask = 0x5A  # eta0*eta2 patterns
        # Solubility on the +1 side of the pair needs (-x|p) = +1; on the
        # -1 side it needs (x|p) = +1, which is (-1|p)(-x|p).  For p = 1
        # mod 4 the two sides therefore agree, for p = 3 mod 4 they are
        # complementary.
        qr = _qr_bit(qr_words, qr_base, p, p - x)
        if (p & 3) == 1:
            if qr == 0:
                fail = 0xFF
        elif qr:
            fail |= mask
        else:
            fail |= (~mask) & 0xFF
    return fail


@njit(cache=True, nogil=True)
def _prime_pass_single(u0, u1, u2, u3, a0, a1, a2, a3,
                       off, fp, qr_words, qr_base, sa, sb, sc):
    # Single fixed sign pattern; sa/sb/sc are 1 when the corresponding eta
    # pair product (eta0*eta2, eta1*eta2, eta0*eta1) is +1.
    i0 = off[u0]; s0 = off[u0 + 1]
    i1 = off[u1]; s1 = off[u1 + 1]
    i2 = off[u2]; s2 = off[u2 + 1]
    i3 = off[u3]; s3 = off[u3 + 1]
    h0 = fp[i0] if i0 < s0 else _SENT
    h1 = fp[i1] if i1 < s1 else _SENT
    h2 = fp[i2] if i2 < s2 else _SENT
    h3 = fp[i3] if i3 < s3 else _SENT
    while True:
        p = h0
        if h1 < p:
            p = h1
        if h2 < p:
            p = h2
        if h3 < p:
            p = h3
        if p == _SENT:
            return True
        b0 = h0 == p
        b1 = h1 == p
        b2 = h2 == p
        b3 = h3 == p
        if b0:
            i0 += 1
            h0 = fp[i0] if i0 < s0 else _SENT
        if b1:
            i1 += 1
            h1 = fp[i1] if i1 < s1 else _SENT
        if b2:
            i2 += 1
            h2 = fp[i2] if i2 < s2 else _SENT
        if b3:
            i3 += 1
            h3 = fp[i3] if i3 < s3 else _SENT
        if b0 or b1:
            if b2 or b3:
                x0 = ((a0 // p) if b0 else a0) % p
                x1 = ((a1 // p) if b1 else a1) % p
                x2 = ((a2 // p) if b2 else a2) % p
                x3 = ((a3 // p) if b3 else a3) % p
                x = (x0 * x1 % p) * (x2 * x3 % p) % p
                sbit = sc
            else:
                x = (a2 % p) * (a3 % p) % p
                sbit = sb
        else:
            x = (a0 % p) * (a1 % p) % p
            sbit = sa
        qr = _qr_bit(qr_words, qr_base, p, p - x)
        if (p & 3) == 1:
            # (-1|p) = +1: both sign sides need (-x|p) = +1
            if qr == 0:
                return False
        elif qr != sbit:
            return False


@njit(cache=True, nogil=True)
def census_direct(h1_lo, h1_hi, bmax, sf, off, fp, omod8, v2b,
                  qr_words, qr_base, t2, out):
    # All-sign raw census: out[h] accumulates, over positive tuples of
    # height exactly h, twice the number of valid sign patterns (each
    # pattern eta corresponds to exactly two sign vectors for t).
    for hh1 in range(h1_lo, h1_hi):
        hcap = bmax // hh1
        if hcap == 0:
            continue
        for side_o in range(2):
            jmax = hh1 if side_o == 0 else hh1 - 1
            for j in range(1, jmax + 1):
                u0 = hh1 if side_o == 0 else j
                u1 = j if side_o == 0 else hh1
                if _gcd64(u0, u1) != 1:
                    continue
                a0 = sf[u0]
                a1 = sf[u1]
                sq01 = a0 == 1 and a1 == 1
                base_fail = 0x81  # all-positive / all-negative: no real point
                if sq01:
                    base_fail |= 0x5A  # -t0t1 a square when eta0*eta2 = -1
                om0 = omod8[u0]
                om1 = omod8[u1]
                vb0 = v2b[u0]
                vb1 = v2b[u1]
                for hh2 in range(1, hcap + 1):
                    hgt = hh1 * hh2
                    for side_i in range(2):
                        kmax = hh2 if side_i == 0 else hh2 - 1
                        for k in range(1, kmax + 1):
                            u2 = hh2 if side_i == 0 else k
                            u3 = k if side_i == 0 else hh2
                            if _gcd64(u2, u3) != 1:
                                continue
                            a2 = sf[u2]
                            a3 = sf[u3]
                            fail = base_fail
                            if a2 == 1 and a3 == 1:
                                fail |= 0x3C  # -t2t3 a square when eta0*eta3 = -1
                            fail = _prime_fail_mask(
                                u0, u1, u2, u3, a0, a1, a2, a3,
                                off, fp, qr_words, qr_base, fail)
                            if fail == 0xFF:
                                continue
                            o0 = (om0 * omod8[u2]) & 7
                            o1 = (om1 * omod8[u3]) & 7
                            o2 = (om1 * omod8[u2]) & 7
                            o3 = (om0 * omod8[u3]) & 7
                            vkey = ((vb0 ^ v2b[u2])
                                    | (vb1 ^ v2b[u3]) << 1
                                    | (vb1 ^ v2b[u2]) << 2
                                    | (vb0 ^ v2b[u3]) << 3)
                            cnt = 0
                            for idx in range(8):
                                if (fail >> idx) & 1:
                                    continue
                                g0 = idx & 1
                                g1 = (idx >> 1) & 1
                                g2 = (idx >> 2) & 1
                                g3 = g0 ^ g1 ^ g2
                                w0 = (8 - o0) & 7 if g0 else o0
                                w1 = (8 - o1) & 7 if g1 else o1
                                w2 = (8 - o2) & 7 if g2 else o2
                                w3 = (8 - o3) & 7 if g3 else o3
                                key = (vkey | (w0 >> 1) << 4 | (w1 >> 1) << 6
                                       | (w2 >> 1) << 8 | (w3 >> 1) << 10)
                                cnt += t2[key]
                            out[hgt] += 2 * cnt


@njit(cache=True, nogil=True)
def census_single(h1_lo, h1_hi, bmax, n0, n1, n2, n3, block01, block23,
                  sf, off, fp, omod8, v2b, qr_words, qr_base, t2, out):
    # Positive-tuple census for one fixed sign pattern eta_i = (-1)^{n_i}
    # with Prod(eta) = +1 and eta not constant.  block01/block23 activate
    # the conditions "u0*u1 not a square" / "u2*u3 not a square".
    sa = 1 - (n0 ^ n2)
    sb = 1 - (n1 ^ n2)
    sc = 1 - (n0 ^ n1)
    for hh1 in range(h1_lo, h1_hi):
        hcap = bmax // hh1
        if hcap == 0:
            continue
        for side_o in range(2):
            jmax = hh1 if side_o == 0 else hh1 - 1
            for j in range(1, jmax + 1):
                u0 = hh1 if side_o == 0 else j
                u1 = j if side_o == 0 else hh1
                if _gcd64(u0, u1) != 1:
                    continue
                a0 = sf[u0]
                a1 = sf[u1]
                if block01 and a0 == 1 and a1 == 1:
                    continue
                om0 = omod8[u0]
                om1 = omod8[u1]
                vb0 = v2b[u0]
                vb1 = v2b[u1]
                for hh2 in range(1, hcap + 1):
                    hgt = hh1 * hh2
                    for side_i in range(2):
                        kmax = hh2 if side_i == 0 else hh2 - 1
                        for k in range(1, kmax + 1):
                            u2 = hh2 if side_i == 0 else k
                            u3 = k if side_i == 0 else hh2
                            if _gcd64(u2, u3) != 1:
                                continue
                            a2 = sf[u2]
                            a3 = sf[u3]
                            if block23 and a2 == 1 and a3 == 1:
                                continue
                            if not _prime_pass_single(
                                    u0, u1, u2, u3, a0, a1, a2, a3,
                                    off, fp, qr_words, qr_base, sa, sb, sc):
                                continue
                            o0 = (om0 * omod8[u2]) & 7
                            o1 = (om1 * omod8[u3]) & 7
                            o2 = (om1 * omod8[u2]) & 7
                            o3 = (om0 * omod8[u3]) & 7
                            w0 = (8 - o0) & 7 if n0 else o0
                            w1 = (8 - o1) & 7 if n1 else o1
                            w2 = (8 - o2) & 7 if n2 else o2
                            w3 = (8 - o3) & 7 if n3 else o3
                            key = ((vb0 ^ v2b[u2])
                                   | (vb1 ^ v2b[u3]) << 1
                                   | (vb1 ^ v2b[u2]) << 2
                                   | (vb0 ^ v2b[u3]) << 3
                                   | (w0 >> 1) << 4 | (w1 >> 1) << 6
                                   | (w2 >> 1) << 8 | (w3 >> 1) << 10)
                            if t2[key]:
                                out[hgt] += 1
