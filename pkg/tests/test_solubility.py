"""Local solubility: formulas, mod-8 sets, Hilbert symbols, search oracles.

The module under test has two independent layers, a formula layer and a
brute-force Hensel search; the tests here derive each from scratch where
feasible and then cross-validate the layers against each other.
"""

import itertools
import math
import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from quadric_census.arith import mu_squared, squarefree_split
from quadric_census import _kernels
from quadric_census.solubility import (
    REAL,
    Verdict,
    arranged_a2,
    bad_primes,
    find_rational_point,
    has_rational_point,
    hilbert_symbol,
    is_everywhere_locally_soluble,
    local_indicator_2,
    local_indicator_odd,
    mod8_set_A1,
    mod8_set_A2,
    normalize,
    padic_oracle,
    solvable_real,
    _oracle_python,
)

UNITS8 = (1, 3, 5, 7)


def random_squarefree(rng, lo, hi):
    while True:
        n = rng.randint(lo, hi)
        if n != 0 and mu_squared(abs(n)) == 1:
            return n


# ---------------------------------------------------------------- normalize

def test_normalize_pinned():
    assert normalize((4, 9, 25, 49)) == (1, 1, 1, 1)
    assert normalize((2, 2, 2, 2)) == (1, 1, 1, 1)
    assert normalize((12, -45, 7, 2)) == (3, -5, 7, 2)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize((0, 1, 1, 1))
    with pytest.raises(ValueError):
        solvable_real((1, 1, 1))


@given(st.tuples(*[st.integers(-10**6, 10**6).filter(bool)] * 4))
def test_normalize_postconditions(a):
    na = normalize(a)
    assert math.gcd(*na) == 1
    for x, y in zip(na, a):
        assert mu_squared(abs(x)) == 1
        assert (x > 0) == (y > 0)


@given(st.tuples(*[st.integers(-300, 300).filter(bool)] * 4))
@settings(max_examples=150, deadline=None)
def test_normalize_preserves_global_solubility(a):
    assert is_everywhere_locally_soluble(a) == is_everywhere_locally_soluble(normalize(a))


# ------------------------------------------------------------- real place

def test_solvable_real():
    assert solvable_real((1, 1, 1, 1)) is Verdict.INSOLUBLE
    assert solvable_real((-1, 1, 1, -1)) is Verdict.SOLUBLE
    assert solvable_real((-1, -1, -1, -1)) is Verdict.INSOLUBLE


def test_verdict_is_not_boolean():
    with pytest.raises(TypeError):
        bool(Verdict.SOLUBLE)


# ------------------------------------------------------------- odd primes

def test_local_indicator_odd_pinned():
    assert local_indicator_odd((1, 1, 1, -1), 3) is Verdict.SOLUBLE
    assert local_indicator_odd((3, 3, 1, 1), 3) is Verdict.INSOLUBLE
    assert local_indicator_odd((3, 3, 1, 2), 3) is Verdict.SOLUBLE


def test_local_indicator_odd_errors():
    with pytest.raises(ValueError):
        local_indicator_odd((1, 1, 1, 1), 2)
    with pytest.raises(ValueError):
        local_indicator_odd((3, 3, 3, 3), 3)  # common factor


def test_local_indicator_odd_unit_product_soluble():
    # valuation 0 of the coefficient product forces solubility
    rng = random.Random(5)
    for _ in range(300):
        p = rng.choice([3, 5, 7, 11, 13, 17])
        a = tuple(random_squarefree(rng, -50, 50) for _ in range(4))
        if any(x % p == 0 for x in a):
            continue
        assert local_indicator_odd(a, p) is Verdict.SOLUBLE


# --------------------------------------------------------------- mod 8 sets

def _oracle_2adic(a):
    v = padic_oracle(a, 2, 6)
    assert v is not Verdict.UNKNOWN
    return v is Verdict.SOLUBLE


def test_A1_matches_exhaustive_2adic_search():
    A1 = mod8_set_A1()
    for q in product(UNITS8, repeat=4):
        assert (q in A1) == _oracle_2adic(q), q


def test_A2_matches_exhaustive_2adic_search():
    A2 = mod8_set_A2()
    for q in product(UNITS8, repeat=4):
        quadric = (2 * q[0], 2 * q[1], q[2], q[3])
        assert (q in A2) == _oracle_2adic(quadric), q


def test_mod8_set_sizes_and_members():
    A1, A2 = mod8_set_A1(), mod8_set_A2()
    assert len(A1) == 240
    assert len(A2) == 224
    assert (1, 1, 1, 1) not in A1
    restricted1 = sum(1 for q in A1 if q[0] * q[1] * q[2] * q[3] % 8 == 1)
    restricted2 = sum(1 for q in A2 if q[0] * q[1] * q[2] * q[3] % 8 == 1)
    assert restricted1 == 48
    assert restricted2 == 32


def test_A2_within_pair_symmetry():
    # swapping inside the even pair or inside the odd pair never changes
    # membership, so the two-even classification needs no slot order
    A2 = mod8_set_A2()
    for q in A2:
        assert (q[1], q[0], q[2], q[3]) in A2
        assert (q[0], q[1], q[3], q[2]) in A2


def test_arranged_a2_permutation_coherence():
    dispatch_orders = [(0, 1, 2, 3), (2, 3, 0, 1), (0, 3, 1, 2),
                       (1, 2, 0, 3), (0, 2, 1, 3), (1, 3, 0, 2)]
    base = mod8_set_A2()
    assert arranged_a2((0, 1, 2, 3)) == base
    for order in dispatch_orders:
        arranged = arranged_a2(order)
        assert len(arranged) == len(base) == 224
        for q in product(UNITS8, repeat=4):
            assert ((q[order[0]], q[order[1]], q[order[2]], q[order[3]]) in base) \
                == (q in arranged)
    with pytest.raises(ValueError):
        arranged_a2((0, 1, 2, 2))


def test_local_indicator_2_pinned():
    assert local_indicator_2((1, 1, 1, 1)) is Verdict.INSOLUBLE
    assert local_indicator_2((1, 7, 1, 7)) is Verdict.SOLUBLE
    assert local_indicator_2((2, 2, 1, 7)) is Verdict.SOLUBLE
    with pytest.raises(ValueError):
        local_indicator_2((2, 2, 2, 2))


def test_local_indicator_2_odd_valuation_cases():
    # one or three even coefficients: always soluble at 2
    rng = random.Random(9)
    for _ in range(200):
        a = [random_squarefree(rng, -99, 99) | 1 for _ in range(4)]
        a = [x if mu_squared(abs(x)) else 1 for x in a]
        k = rng.choice([1, 3])
        for i in rng.sample(range(4), k):
            a[i] = 2 * a[i] if mu_squared(abs(2 * a[i])) else 2
        a = tuple(a)
        assert local_indicator_2(a) is Verdict.SOLUBLE
        assert padic_oracle(a, 2, 6) is Verdict.SOLUBLE


# ----------------------------------------------------------- Hilbert symbol

def test_hilbert_pinned():
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    for p in (3, 5, 7, 11, 13):
        assert hilbert_symbol(p, p, p) == (1 if p % 4 == 1 else -1)
    with pytest.raises(ValueError):
        hilbert_symbol(0, 3, 5)
    with pytest.raises(ValueError):
        hilbert_symbol(1, 1, 9)


def test_hilbert_symmetry_and_squares():
    rng = random.Random(13)
    for _ in range(500):
        a = rng.randint(-500, 500) or 1
        b = rng.randint(-500, 500) or 1
        v = rng.choice([REAL, 2, 3, 5, 7, 11])
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a * a, b, v) == 1
        assert hilbert_symbol(a, -a, v) == 1  # norm form of x^2 - a y^2


def test_hilbert_bimultiplicative():
    rng = random.Random(17)
    for _ in range(500):
        a, a2, b = (rng.randint(-300, 300) or 1 for _ in range(3))
        v = rng.choice([REAL, 2, 3, 5, 7, 13])
        assert hilbert_symbol(a * a2, b, v) == \
            hilbert_symbol(a, b, v) * hilbert_symbol(a2, b, v)


def test_hilbert_product_formula():
    rng = random.Random(19)
    for _ in range(1000):
        a = rng.randint(-1000, 1000) or 1
        b = rng.randint(-1000, 1000) or 1
        prod = hilbert_symbol(a, b, REAL) * hilbert_symbol(a, b, 2)
        for p in bad_primes((a, b, 1, 1)):
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1, (a, b)


def test_hilbert_against_quaternion_norm_form():
    # (a,b)_v = +1 iff the norm form x^2 - a y^2 - b z^2 + ab w^2 is
    # isotropic over the completion; checked against the search oracle
    rng = random.Random(23)
    for _ in range(250):
        a = random_squarefree(rng, -50, 50)
        b = random_squarefree(rng, -50, 50)
        g = math.gcd(a, b)
        quadric = (1, -a, -b, a * b // (g * g))
        v = rng.choice([2, 2, 3, 5, 7, 11, 13])
        verdict = padic_oracle(quadric, v)
        assert verdict is not Verdict.UNKNOWN
        assert (hilbert_symbol(a, b, v) == 1) == (verdict is Verdict.SOLUBLE), (a, b, v)


# -------------------------------------------------------------- the oracle

def test_oracle_pinned():
    assert padic_oracle((1, 1, 1, -1), 5, 4) is Verdict.SOLUBLE
    assert padic_oracle((3, 3, 1, 1), 3, 4) is Verdict.INSOLUBLE
    assert padic_oracle((1, 1, 1, 1), 2, 6) is Verdict.INSOLUBLE
    assert padic_oracle((1, 1, 1, 1), REAL) is Verdict.INSOLUBLE


def test_oracle_shallow_depth_is_unknown():
    # no Hensel certificate can exist at level 1 for p = 2, so an
    # undecided-at-depth-1 search must admit it does not know
    assert padic_oracle((1, 1, 1, 1), 2, 1) is Verdict.UNKNOWN


def test_oracle_depth_validation():
    with pytest.raises(ValueError):
        padic_oracle((1, 1, 1, 1), 3, 0)
    with pytest.raises(ValueError):
        padic_oracle((1, 1, 1, 1), 3, 13)
    with pytest.raises(ValueError):
        padic_oracle((1, 1, 1, 1), 15)


def test_oracle_compiled_twin_matches_reference():
    rng = random.Random(29)
    for _ in range(120):
        a = tuple(random_squarefree(rng, -30, 30) for _ in range(4))
        p = rng.choice([2, 3, 5, 7])
        depth = 6 if p == 2 else 4
        code = _kernels.oracle_bfs(*a, p, depth, 1 << 17)
        expected = {Verdict.INSOLUBLE: 0, Verdict.SOLUBLE: 1,
                    Verdict.UNKNOWN: 2}[_oracle_python(a, p, depth)]
        assert code == expected, (a, p)


def test_formula_matches_oracle_random_box():
    rng = random.Random(31)
    for _ in range(400):
        a = normalize(tuple(random_squarefree(rng, -20, 20) for _ in range(4)))
        for p in (2, 3, 5, 7, 11, 13):
            formula = local_indicator_2(a) if p == 2 else local_indicator_odd(a, p)
            assert formula is padic_oracle(a, p), (a, p)


# -------------------------------------------------------------- global test

def test_everywhere_locally_soluble_pinned():
    assert is_everywhere_locally_soluble((1, 1, -1, -1)) is True
    assert is_everywhere_locally_soluble((1, 1, 1, 1)) is False
    assert is_everywhere_locally_soluble((1, 1, 1, -7)) is False
    assert has_rational_point((1, 1, 1, -7)) is False
    # the -7 failure is 2-adic, not real or odd
    n = normalize((1, 1, 1, -7))
    assert solvable_real(n) is Verdict.SOLUBLE
    assert local_indicator_2(n) is Verdict.INSOLUBLE
    assert all(local_indicator_odd(n, p) is Verdict.SOLUBLE for p in bad_primes(n))


def test_bad_primes():
    assert bad_primes((3, -5, 7, 2)) == [3, 5, 7]
    assert bad_primes((1, 1, 1, 1)) == []


# ------------------------------------------------------------- point search

def test_find_rational_point_pinned():
    assert find_rational_point((1, 1, -1, -1), 1) == (1, 0, 1, 0)
    assert find_rational_point((1, 1, 1, 1), 20) is None
    pt = find_rational_point((1, -2, 3, -5), 10)
    assert pt is not None and max(abs(v) for v in pt) <= 10
    assert pt[0] ** 2 - 2 * pt[1] ** 2 + 3 * pt[2] ** 2 - 5 * pt[3] ** 2 == 0


def test_find_rational_point_agrees_with_pure_fallback():
    import quadric_census.solubility as sol
    saved = sol._kernels
    try:
        sol._kernels = None
        for a in ((1, 1, -1, -1), (1, -2, 3, -5), (2, 3, -5, 7), (1, 1, 1, 1)):
            pure = find_rational_point(a, 8)
            sol._kernels = saved
            fast = find_rational_point(a, 8)
            sol._kernels = None
            assert pure == fast, a
    finally:
        sol._kernels = saved


def test_search_hasse_consistency_full_box():
    # every Hasse-soluble normalized quadric with |a_i| <= 12 has a zero of
    # sup norm at most 4 max(a_i)^2 (empirical small-zero bound); and any
    # found zero certifies the Hasse verdict
    vals = [s * v for s in (1, -1) for v in (1, 2, 3, 5, 6, 7, 10, 11)]
    checked = soluble = 0
    for a in itertools.product(sorted(vals), repeat=4):
        if math.gcd(*a) != 1:
            continue
        checked += 1
        if not has_rational_point(a):
            continue
        soluble += 1
        bound = 4 * max(abs(x) for x in a) ** 2
        pt = find_rational_point(a, bound)
        assert pt is not None, a
        assert sum(c * v * v for c, v in zip(a, pt)) == 0
        assert math.gcd(*pt) == 1
    assert checked == 63728 and soluble == 46054


def test_found_zero_implies_hasse_true():
    rng = random.Random(37)
    hits = 0
    for _ in range(300):
        a = tuple(random_squarefree(rng, -15, 15) for _ in range(4))
        pt = find_rational_point(a, 12)
        if pt is not None:
            hits += 1
            assert has_rational_point(a), a
    assert hits > 100  # the sample really exercises the implication
