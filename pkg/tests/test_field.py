import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffincidence import mk_field
from ffincidence.errors import DivisionByZero, EvenCharacteristic, NonPrime, ReducibleModulus
from ffincidence.field import enum_field, enum_vectors, first_irreducible, is_irreducible

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2)]


# naive oracle: polynomials as coefficient lists, low degree first
def poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    n = len(mod) - 1
    for top in range(len(prod) - 1, n - 1, -1):
        c = prod[top]
        if c:
            for j in range(n + 1):
                prod[top - n + j] = (prod[top - n + j] - c * mod[j]) % p
    return (prod + [0] * n)[:n]


def to_code(c, p):
    return sum(x * p**i for i, x in enumerate(c))


def to_coeffs(a, p, n):
    return [(a // p**i) % p for i in range(n)]


def test_prime_field_construction(gf3):
    assert gf3.q == 3 and gf3.ell == 1


def test_gf9_modulus_is_x2_plus_1(gf9):
    assert tuple(gf9.modulus) == (1, 0, 1)
    assert first_irreducible(3, 2) == (1, 0, 1)


@pytest.mark.parametrize("p,ell", [(9, 1), (15, 2), (1, 1)])
def test_nonprime_rejected(p, ell):
    with pytest.raises(NonPrime):
        mk_field(p, ell)


def test_even_characteristic_rejected():
    with pytest.raises(EvenCharacteristic):
        mk_field(2, 3)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        mk_field(3, 2, modulus=(2, 0, 1))  # x^2 - 1


def test_first_irreducible_matches_exhaustive_root_search():
    # degree 2 and 3 polys are irreducible iff rootless
    for p in (3, 5, 7):
        for ell in (2, 3):
            for tail in itertools.product(range(p), repeat=ell):
                poly = list(tail) + [1]
                rootless = all(sum(c * x**i for i, c in enumerate(poly)) % p for x in range(p))
                assert is_irreducible(poly, p) == rootless
            got = first_irreducible(p, ell)
            assert is_irreducible(list(got), p)
            assert len(got) == ell + 1 and got[-1] == 1
            smaller = [
                tuple(t) + (1,) for t in itertools.product(range(p), repeat=ell)
                if to_code(t, p) < to_code(got[:-1], p)
                and all(sum(c * x**i for i, c in enumerate(list(t) + [1])) % p for x in range(p))
            ]
            assert not smaller


def test_prime_field_examples(gf7):
    assert gf7.mul(3, 5) == 1
    assert gf7.inv(3) == 5
    assert gf7.eta(2) == 1 and gf7.eta(3) == -1 and gf7.eta(0) == 0
    assert gf7.sqrt(2) == 3
    assert gf7.sqrt(3) is None
    assert gf7.sqrt(0) == 0


def test_gf9_examples(gf9, gf3):
    x = 3  # the class of x
    assert gf9.mul(x, x) == 2
    assert gf9.trace(x) == 0
    assert gf9.trace(1) == 2
    assert gf3.trace(2) == 2


def test_division_by_zero(gf7):
    with pytest.raises(DivisionByZero):
        gf7.inv(0)


@pytest.mark.parametrize("p,ell", FIELDS)
def test_multiplication_matches_polynomial_oracle(p, ell):
    ctx = mk_field(p, ell)
    mod = list(ctx.modulus) if ell > 1 else [0, 1]
    for a in range(ctx.q):
        ca = to_coeffs(a, p, ell)
        for b in range(ctx.q):
            want = to_code(poly_mulmod(ca, to_coeffs(b, p, ell), mod, p), p)
            assert ctx.mul(a, b) == want
            assert ctx.add(a, b) == to_code([(u + v) % p for u, v in zip(ca, to_coeffs(b, p, ell))], p)


@pytest.mark.parametrize("p,ell", FIELDS)
def test_field_laws_exhaustive(p, ell):
    ctx = mk_field(p, ell)
    for a in range(1, ctx.q):
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.add(a, ctx.neg(a)) == 0
        assert ctx.pow(a, ctx.q - 1) == 1


@pytest.mark.parametrize("p,ell", FIELDS)
def test_trace_is_frobenius_orbit_sum(p, ell):
    ctx = mk_field(p, ell)
    mod = list(ctx.modulus) if ell > 1 else [0, 1]
    for a in range(ctx.q):
        total, power = [0] * ell, to_coeffs(a, p, ell)
        for _ in range(ell):
            total = [(u + v) % p for u, v in zip(total, power)]
            acc = [1] + [0] * (ell - 1)
            for _ in range(p):
                acc = poly_mulmod(acc, power, mod, p)
            power = acc
        assert total[1:] == [0] * (ell - 1)
        assert ctx.trace(a) == total[0]


@pytest.mark.parametrize("p,ell", FIELDS)
def test_eta_and_sqrt_match_square_table(p, ell):
    ctx = mk_field(p, ell)
    roots = {}
    for r in range(ctx.q):
        roots.setdefault(ctx.mul(r, r), []).append(r)
    for a in range(ctx.q):
        if a == 0:
            assert ctx.eta(a) == 0 and ctx.sqrt(a) == 0
        elif a in roots:
            assert ctx.eta(a) == 1
            assert ctx.sqrt(a) == min(roots[a])
        else:
            assert ctx.eta(a) == -1 and ctx.sqrt(a) is None
    assert sum(ctx.eta(a) for a in range(ctx.q)) == 0


def test_eta_multiplicative(gf9):
    for a in range(gf9.q):
        for b in range(gf9.q):
            assert gf9.eta(gf9.mul(a, b)) == gf9.eta(a) * gf9.eta(b)


@pytest.mark.parametrize("p,ell", [(3, 2), (5, 1)])
def test_vector_ops_match_scalar(p, ell):
    ctx = mk_field(p, ell)
    a = np.repeat(np.arange(ctx.q), ctx.q)
    b = np.tile(np.arange(ctx.q), ctx.q)
    assert ctx.vmul(a, b).tolist() == [ctx.mul(x, y) for x, y in zip(a, b)]
    assert ctx.vsub(a, b).tolist() == [ctx.sub(x, y) for x, y in zip(a, b)]
    assert ctx.veta(a).tolist() == [ctx.eta(x) for x in a]
    assert ctx.vtrace(a).tolist() == [ctx.trace(x) for x in a]


def test_untabled_field_agrees_with_tables():
    big = mk_field(5, 2, table_threshold=0)
    small = mk_field(5, 2)
    for a in range(25):
        for b in range(25):
            assert big.mul(a, b) == small.mul(a, b)
        assert big.trace(a) == small.trace(a)
        assert big.sqrt(a) == small.sqrt(a)


def test_enumeration_order(gf3, gf7):
    assert list(enum_field(gf3)) == [0, 1, 2]
    vs = list(enum_vectors(gf3, 2))
    assert len(vs) == 9 and vs[0] == (0, 0) and vs[-1] == (2, 2)
    assert len(gf7.vector_array(4)) == 2401
    assert [tuple(v) for v in gf3.vector_array(3).tolist()] == list(enum_vectors(gf3, 3))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_distributive_gf25(a, b, c):
    ctx = mk_field(5, 2)
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
