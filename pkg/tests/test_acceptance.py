"""Acceptance gate: every release criterion, one verdict line per check.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.  Each
check prints `criterion N: PASS/FAIL/SKIP` with its measurement before
asserting, so a red run still reports every number it gathered.

Criterion 6 carries a truncation-stability clause (the full constant
moving by less than 1e-6 between prime limits 1e5 and 1e6) that the
mathematics does not satisfy: the omitted primes in (1e5, 1e6] shift the
untwisted log-product by about 1.8e-6, and the constant by about 9e-6.
That check is implemented exactly as stated and fails honestly with the
measured value in its message.
"""

import math
import os
import random
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from quadric_census import counting as counting_mod
from quadric_census.arith import mu_squared
from quadric_census.charsum import (
    bilinear_hyperbolic_sum,
    identity_suite,
    sigma_table,
)
from quadric_census.constant import constant_cri, leading_constant, rho
from quadric_census.counting import census, count_N, hyperbola_split_check
from quadric_census.solubility import (
    REAL,
    Verdict,
    hilbert_symbol,
    local_indicator_2,
    local_indicator_odd,
    mod8_set_A1,
    mod8_set_A2,
    padic_oracle,
    solvable_real,
)


def _report(line):
    print("\n%s" % line)


# --------------------------------------------------------------- criterion 1

def test_criterion_1_mod8_combinatorics():
    start = time.monotonic()
    rows = sigma_table((1, 2, 3, 5))
    bad = []
    for row in rows:
        m, sigma = row["m"], row["sigma"]
        odd_case = math.prod(m) % 2 == 1 and sum(sigma) == 0
        if row["sigma_r2"] != (192 if odd_case else 128):
            bad.append(("r2", m, sigma, row["sigma_r2"]))
        if row["sigma_13"] != (192 if odd_case else 128):
            bad.append(("13", m, sigma, row["sigma_13"]))
        if row["sigma_23"] != row["expected_23"]:
            bad.append(("23", m, sigma, row["sigma_23"]))
        if not odd_case and row["sigma_23"] != 0:
            bad.append(("23-even", m, sigma, row["sigma_23"]))
    a1 = mod8_set_A1()
    a2 = mod8_set_A2()
    r1 = sum(1 for q in a1 if q[0] * q[1] * q[2] * q[3] % 8 == 1)
    r2 = sum(1 for q in a2 if q[0] * q[1] * q[2] * q[3] % 8 == 1)
    elapsed = time.monotonic() - start
    ok = not bad and r1 == 48 and r2 == 32 and elapsed < 10
    _report("criterion 1: %s - %d sigma rows, restricted sizes (%d, %d), "
            "%.2fs (limit 10s)" % ("PASS" if ok else "FAIL", len(rows), r1, r2, elapsed))
    assert not bad, bad[:5]
    assert (r1, r2) == (48, 32)
    assert elapsed < 10


# --------------------------------------------------------------- criterion 2

def test_criterion_2_charsum_identity_box():
    start = time.monotonic()
    report = identity_suite(15, 6)
    elapsed = time.monotonic() - start
    ok = report["mismatch_count"] == 0 and elapsed < 300
    _report("criterion 2: %s - %d indicator pairs on the s<=15, m<=6 box, "
            "%d mismatches, %.1fs (limit 300s)"
            % ("PASS" if ok else "FAIL", report["checked"],
               report["mismatch_count"], elapsed))
    assert report["mismatch_count"] == 0, report["mismatches"]
    assert elapsed < 300


# --------------------------------------------------------------- criterion 3

def test_criterion_3_formula_vs_oracle():
    start = time.monotonic()
    squarefree = [n for n in range(1, 21) if mu_squared(n) == 1]
    vals = [s * v for v in squarefree for s in (1, -1)]
    places = (2, 3, 5, 7, 11, 13)
    memo = {}
    checked = 0
    for a in product(vals, repeat=4):
        if math.gcd(*map(abs, a)) != 1:
            continue  # not normalized: coefficients share a prime
        assert solvable_real(a) is not Verdict.UNKNOWN
        # the oracle verdict is invariant under coordinate permutation and
        # global negation, so it is searched once per canonical orbit; the
        # formula is evaluated on every representative
        key = min(tuple(sorted(a)), tuple(sorted(-x for x in a)))
        for p in places:
            formula = local_indicator_2(a) if p == 2 else local_indicator_odd(a, p)
            oracle = memo.get((key, p))
            if oracle is None:
                oracle = padic_oracle(key, p)
                assert oracle is not Verdict.UNKNOWN, (key, p)
                memo[(key, p)] = oracle
            assert formula is oracle, (a, p, formula, oracle)
            checked += 1
    elapsed = time.monotonic() - start
    ok = elapsed < 600
    _report("criterion 3: %s - %d formula/oracle comparisons over the "
            "|a_i| <= 20 box at places {inf, 2, p <= 13}, zero unknowns, "
            "%.1fs (limit 600s)" % ("PASS" if ok else "FAIL", checked, elapsed))
    assert elapsed < 600


# --------------------------------------------------------------- criterion 4

def test_criterion_4_hilbert_product_formula():
    rng = random.Random(2024)
    checked = 0
    for _ in range(10**4):
        a = rng.randint(-1000, 1000) or 1
        b = rng.randint(-1000, 1000) or 1
        places = {REAL, 2}
        for n in (a, b):
            n = abs(n)
            d = 2
            while d * d <= n:
                if n % d == 0:
                    if d % 2:
                        places.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 2:
                places.add(n)
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1, (a, b)
        checked += 1
    _report("criterion 4: PASS - Hilbert product formula on %d random pairs "
            "with |a|, |b| <= 1000" % checked)


# --------------------------------------------------------------- criterion 5

def test_criterion_5_counting_identities():
    start = time.monotonic()
    raw = np.cumsum(counting_mod._heights_raw(200))
    n1 = np.cumsum(counting_mod._heights_pattern(200, counting_mod._N1_PATTERN,
                                                 True, False))
    n2 = np.cumsum(counting_mod._heights_pattern(200, counting_mod._N2_PATTERN,
                                                 True, True))
    for B in range(1, 201):
        assert raw[B] % 4 == 0, B
        assert raw[B] // 4 == 2 * n1[B] + n2[B], B
    region = {}
    for l in product((0, 1), repeat=4):
        nbits = (l[0] ^ l[2], l[1] ^ l[3], l[1] ^ l[2], l[0] ^ l[3])
        region[l] = np.cumsum(counting_mod._heights_pattern(
            100, nbits, l[0] ^ l[1], l[2] ^ l[3]))
    base_odd = region[(1, 0, 0, 0)]
    base_cross = region[(1, 0, 1, 0)]
    for l, arr in region.items():
        if l in ((0, 0, 0, 0), (1, 1, 1, 1), (1, 1, 0, 0), (0, 0, 1, 1)):
            assert not arr.any(), l
        elif sum(l) % 2 == 1:
            assert (arr == base_odd).all(), l
        else:
            assert (arr == base_cross).all(), l
    elapsed = time.monotonic() - start
    ok = elapsed < 300
    _report("criterion 5: %s - N = 2N1 + N2 and 4 | raw for all B <= 200, "
            "all 16 region symmetries for all B <= 100, %.1fs (limit 300s, "
            "single worker)" % ("PASS" if ok else "FAIL", elapsed))
    assert elapsed < 300


# --------------------------------------------------------------- criterion 6

def test_criterion_6_weight_identities():
    ok = (5 * rho((1, 2)) / 256 == Fraction(935, 36)
          and rho((2, 3)) / 256 == Fraction(25, 36))
    _report("criterion 6 (weights): %s - 5*(11968/9)/256 = 935/36 and "
            "(1600/9)/256 = 25/36 exactly" % ("PASS" if ok else "FAIL"))
    assert ok


def test_criterion_6_route_agreement():
    res = leading_constant(10**5)  # raises on route disagreement
    parts = [constant_cri(k, 10**5).value for k in ((1, 2), (1, 3), (2, 2), (2, 3))]
    route_sum = 2 * parts[0] + 2 * parts[1] + parts[2] + parts[3]
    tol = res.value * math.expm1(2 * res.tail_radius)
    gap = abs(route_sum - res.value)
    ok = gap <= tol
    _report("criterion 6 (routes): %s - variant-sum and closed-form routes "
            "differ by %.2e at prime limit 1e5 (combined interval %.2e)"
            % ("PASS" if ok else "FAIL", gap, tol))
    assert ok


def test_criterion_6_truncation_stability():
    lo = leading_constant(10**5).value
    hi = leading_constant(10**6).value
    delta = abs(hi - lo)
    ok = delta < 1e-6
    _report("criterion 6 (stability): %s - |c(1e6) - c(1e5)| = %.3e against "
            "the stated 1e-6 bound" % ("PASS" if ok else "FAIL", delta))
    assert ok, (
        "|c(1e6) - c(1e5)| = %.6e, which exceeds the stated 1e-6 bound. "
        "This is a property of the constant itself, not a defect of the "
        "evaluation: the primes in (1e5, 1e6] contribute about 3/(L log L) "
        "~ 1.8e-6 to the untwisted log-product (five weighted copies of "
        "which make up most of c), so the true increment between these two "
        "truncations is ~9e-6 and no correct evaluator can come in under "
        "1e-6. Both truncations here agree with their rigorous tail "
        "intervals (radius 7/L), and the drift of the single product "
        "c_{1,2} is 1.8e-6, also above the bound." % delta
    )


# --------------------------------------------------------------- criterion 7

def test_criterion_7_hyperbola_identity():
    rng = random.Random(19)
    tables = []
    for _ in range(4):
        tab = [0] + [rng.choice((-1, 1)) for _ in range(220)]
        tables.append(tab)
    pool = [
        lambda n: 1,
        lambda n: n,
        mu_squared,
        lambda n: (-1) ** n,
        lambda n: tables[0][n],
        lambda n: tables[1][n],
        lambda n: tables[2][n] * (n % 2),
        lambda n: tables[3][n] * mu_squared(n),
    ]
    checked = 0
    for _ in range(100):
        X = rng.randint(9, 200)
        Y = rng.randint(2, math.isqrt(X))
        c = tuple(rng.randint(1, 3) for _ in range(4))
        g = tuple(rng.choice(pool) for _ in range(4))
        assert hyperbola_split_check(X, Y, c, g), (X, Y, c)
        checked += 1
    _report("criterion 7: PASS - three-term hyperbola split exact on %d "
            "randomized (X <= 200, Y, c, g) instances" % checked)


# --------------------------------------------------------------- criterion 8

def test_criterion_8_diagnostic_table_and_speed():
    start = time.monotonic()
    n_count = count_N(2000)
    elapsed_2000 = time.monotonic() - start
    bounds = [1 << k for k in range(10, 15)]
    heights = counting_mod._heights_raw(bounds[-1])
    totals = np.cumsum(heights)
    lines = []
    ratios = []
    for B in bounds:
        n = int(totals[B]) // 4
        ratio = n * math.log(B) / (B * B * math.log(math.log(B)))
        ratios.append(ratio)
        lines.append("  B=2^%d: N=%d, N log B / (B^2 loglog B) = %.4f"
                     % (B.bit_length() - 1, n, ratio))
    ok = all(math.isfinite(r) and r > 0 for r in ratios) and elapsed_2000 < 60
    _report("criterion 8: %s - count_N(2000) = %d in %.1fs (limit 60s, one "
            "worker); diagnostic table:\n%s"
            % ("PASS" if ok else "FAIL", n_count, elapsed_2000, "\n".join(lines)))
    assert elapsed_2000 < 60
    for r in ratios:
        assert math.isfinite(r) and r > 0


def test_criterion_8_worker_scaling():
    cpus = os.cpu_count() or 1
    if cpus < 2:
        _report("criterion 8 (scaling): SKIP - this host exposes %d CPU, so "
                "a >= 3x speedup with 8 workers is unmeasurable; the "
                "determinism of the worker partition is still asserted "
                "elsewhere (workers 1 vs 3 byte-identical)" % cpus)
        pytest.skip("single-CPU host: worker scaling unmeasurable")
    start = time.monotonic()
    count_N(2000, workers=1)
    one = time.monotonic() - start
    start = time.monotonic()
    count_N(2000, workers=8)
    eight = time.monotonic() - start
    speedup = one / eight
    ok = speedup >= 3
    _report("criterion 8 (scaling): %s - 8-worker speedup %.2fx on %d CPUs"
            % ("PASS" if ok else "FAIL", speedup, cpus))
    assert speedup >= 3


# --------------------------------------------------------------- criterion 9

def test_criterion_9_bilinear_boundedness():
    rows = []
    for mode in ("ones", "moebius", "random-signs"):
        for z in (10, 100, 1000):
            s, normalized = bilinear_hyperbolic_sum(10**4, z, coeff_mode=mode,
                                                    seed=0)
            assert normalized <= 10, (mode, z, s, normalized)
            rows.append("  mode=%s z=%d: S=%d, |S| z^(1/2)/(X log^3 X) = %.4g"
                        % (mode, z, s, normalized))
    _report("criterion 9: PASS - normalized bilinear sums bounded by 10 at "
            "X = 1e4:\n%s" % "\n".join(rows))
