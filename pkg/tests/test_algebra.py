import random

import pytest

from ztdp import (
    AlgebraError,
    IntegerRing,
    PolynomialRing,
    Relaxation,
    SetFunction,
    canonical_relaxation,
    mobius,
    pointwise_product,
    ranked_union_convolve,
    subset_convolve,
    union_product,
    zeta,
)


def random_function(rng, ring, r, lo=-9, hi=9):
    f = SetFunction(ring, r)
    for x in range(1 << r):
        f[x] = ring.coerce(rng.randrange(lo, hi + 1))
    return f


def test_integer_ring_modulus():
    ring = IntegerRing(7)
    assert ring.add(5, 5) == 3
    assert ring.sub(2, 5) == 4
    assert ring.mul(3, 5) == 1
    assert ring.coerce(-1) == 6
    with pytest.raises(AlgebraError):
        IntegerRing(1)


def test_polynomial_ring_truncates():
    ring = PolynomialRing(2)
    a = ring.monomial(1)
    assert a == (0, 1, 0)
    assert ring.mul(a, a) == (0, 0, 1)
    # degree 3 falls off the cap
    assert ring.mul(ring.mul(a, a), a) == (0, 0, 0)
    assert ring.monomial(5) == (0, 0, 0)
    assert ring.add((1, 2, 3), (1, 0, 1)) == (2, 2, 4)


def test_zeta_mobius_inversion():
    rng = random.Random(1)
    ring = IntegerRing()
    for _ in range(30):
        r = rng.randrange(0, 7)
        f = random_function(rng, ring, r)
        assert mobius(zeta(f)) == f
        assert zeta(mobius(f)) == f


def test_zeta_known_values():
    ring = IntegerRing()
    f = SetFunction(ring, 2, [1, 2, 3, 4])
    zf = zeta(f)
    assert zf.values == [1, 3, 4, 10]


def test_union_product_identity():
    # zeta of a union product is the pointwise product of the zetas
    rng = random.Random(2)
    ring = IntegerRing()
    for _ in range(25):
        r = rng.randrange(0, 6)
        f = random_function(rng, ring, r)
        g = random_function(rng, ring, r)
        assert zeta(union_product(f, g)) == pointwise_product(zeta(f), zeta(g))


def test_subset_convolution_definition():
    ring = IntegerRing()
    f = SetFunction(ring, 2, [1, 2, 3, 4])
    g = SetFunction(ring, 2, [5, 6, 7, 8])
    h = subset_convolve(f, g)
    # h[{0,1}] = f[{}]g[{0,1}] + f[{0}]g[{1}] + f[{1}]g[{0}] + f[{0,1}]g[{}]
    assert h[0b11] == 1 * 8 + 2 * 7 + 3 * 6 + 4 * 5
    assert h[0] == 5


def test_rank_trick_diagonal():
    # summing union products over rank splits recovers subset convolution
    # on the diagonal, for any valid relaxation
    rng = random.Random(3)
    ring = IntegerRing()
    for _ in range(15):
        r = rng.randrange(0, 5)
        f = random_function(rng, ring, r)
        g = random_function(rng, ring, r)
        fr = canonical_relaxation(f)
        gr = canonical_relaxation(g)
        assert fr.is_valid_for(f) and gr.is_valid_for(g)
        out = ranked_union_convolve(fr, gr)
        want = subset_convolve(f, g)
        for x in range(1 << r):
            k = bin(x).count("1")
            assert out.funcs[k][x] == want[x]


def test_rank_trick_with_garbage_above_diagonal():
    # entries above the diagonal are unconstrained and must not leak
    rng = random.Random(4)
    ring = IntegerRing()
    r = 4
    f = random_function(rng, ring, r)
    g = random_function(rng, ring, r)
    fr = canonical_relaxation(f)
    gr = canonical_relaxation(g)
    for rel in (fr, gr):
        for i, fi in enumerate(rel.funcs):
            for x in range(1 << r):
                if bin(x).count("1") < i:
                    fi[x] = rng.randrange(-50, 50)
    assert fr.is_valid_for(f) and gr.is_valid_for(g)
    out = ranked_union_convolve(fr, gr)
    want = subset_convolve(f, g)
    for x in range(1 << r):
        assert out.funcs[bin(x).count("1")][x] == want[x]


def test_modular_matches_exact():
    rng = random.Random(5)
    exact_ring = IntegerRing()
    for mod in (2, 3, 97):
        r = 4
        fe = random_function(rng, exact_ring, r, 0, 50)
        ge = random_function(rng, exact_ring, r, 0, 50)
        ring = IntegerRing(mod)
        fm = SetFunction(ring, r, [v % mod for v in fe.values])
        gm = SetFunction(ring, r, [v % mod for v in ge.values])
        he = subset_convolve(fe, ge)
        hm = subset_convolve(fm, gm)
        assert hm.values == [v % mod for v in he.values]


def test_ground_set_cap():
    with pytest.raises(AlgebraError):
        SetFunction(IntegerRing(), 26)


def test_mismatched_operands():
    f = SetFunction(IntegerRing(), 2)
    g = SetFunction(IntegerRing(), 3)
    with pytest.raises(AlgebraError):
        subset_convolve(f, g)
