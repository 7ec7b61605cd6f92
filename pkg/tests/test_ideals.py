import random
from fractions import Fraction

import pytest

from qknorm.ideals import (DiscMismatch, FracIdeal, factor_integral_ideal,
                           ideal_valuation, primes_above, principal_ideal)
from qknorm.quadfield import QuadNum, kronecker, make_discriminant

DISCS = [make_discriminant(d) for d in (-15, -23, 12, 60, -4, 40, -120, 229)]


def _random_ideal(disc, rng):
    i = FracIdeal.unit(disc)
    for _ in range(rng.randint(1, 3)):
        p = rng.choice([2, 3, 5, 7, 11, 13])
        dec = primes_above(disc, p)
        i = i * rng.choice(dec.primes) ** rng.randint(-2, 2)
    return i


def test_unit_ideal():
    for disc in DISCS:
        one = FracIdeal.unit(disc)
        assert one.norm() == 1 and one.is_integral()
        assert one * one == one


def test_norm_multiplicative():
    rng = random.Random(7)
    for disc in DISCS:
        for _ in range(25):
            i, j = _random_ideal(disc, rng), _random_ideal(disc, rng)
            assert (i * j).norm() == i.norm() * j.norm()


def test_inverse_and_conjugate():
    rng = random.Random(8)
    for disc in DISCS:
        for _ in range(25):
            i = _random_ideal(disc, rng)
            assert i * i.inverse() == FracIdeal.unit(disc)
            # I * conj(I) = N(I) O_F
            n = i.norm()
            scaled = FracIdeal.make(n, 1, disc.delta % 2, disc)
            assert i * i.conjugate() == scaled


def test_disc_mismatch():
    with pytest.raises(DiscMismatch):
        FracIdeal.unit(DISCS[0]) * FracIdeal.unit(DISCS[2])


def test_principal_ideal_norm():
    rng = random.Random(9)
    for disc in DISCS:
        for _ in range(40):
            z = QuadNum(rng.randint(-30, 30), rng.randint(-30, 30),
                        rng.randint(1, 10), disc)
            if not z:
                continue
            i = principal_ideal(z)
            assert i.norm() == abs(z.norm())
            assert principal_ideal(z.conj()) == i.conjugate()


def test_principal_ideal_multiplicative():
    rng = random.Random(10)
    for disc in DISCS:
        for _ in range(25):
            a = QuadNum(rng.randint(-20, 20), rng.randint(-20, 20),
                        rng.randint(1, 6), disc)
            b = QuadNum(rng.randint(-20, 20), rng.randint(-20, 20),
                        rng.randint(1, 6), disc)
            if not a or not b:
                continue
            assert principal_ideal(a * b) == \
                principal_ideal(a) * principal_ideal(b)


def test_primes_above_kinds():
    for disc in DISCS:
        for p in (2, 3, 5, 7, 11, 13, 17):
            dec = primes_above(disc, p)
            k = kronecker(disc, p)
            assert dec.kind == {1: "split", -1: "inert", 0: "ramified"}[k]
            full = FracIdeal.make(p, 1, disc.delta % 2, disc)
            prod = FracIdeal.unit(disc)
            for q in dec.primes:
                prod = prod * q
            if dec.kind == "split":
                assert len(dec.primes) == 2 and prod == full
                assert dec.primes[0] != dec.primes[1]
            elif dec.kind == "ramified":
                assert dec.primes[0] ** 2 == full
            else:
                assert dec.primes[0] == full
                assert dec.primes[0].norm() == p * p


def test_valuation_and_factorization():
    rng = random.Random(11)
    for disc in DISCS:
        for _ in range(10):
            # build a known factorization, then recover it
            exps = {}
            i = FracIdeal.unit(disc)
            for p in rng.sample([2, 3, 5, 7], k=2):
                dec = primes_above(disc, p)
                prime = rng.choice(dec.primes)
                e = rng.randint(1, 3)
                exps[prime] = exps.get(prime, 0) + e
                i = i * prime ** e
            assert factor_integral_ideal(i) == exps
            for prime, e in exps.items():
                assert ideal_valuation(i, prime) == e
                assert ideal_valuation(i.inverse(), prime) == -e


def test_contains():
    disc = make_discriminant(-15)
    p3 = primes_above(disc, 3).primes[0]
    z = QuadNum(3, 1, 1, disc)  # (3+sqrt(-15))/2, norm 6, in p3
    assert p3.contains(z) or p3.conjugate().contains(z)
    assert not p3.contains(QuadNum(2, 0, 3, disc))  # 1/3
    assert p3.contains(QuadNum(6, 0, 1, disc))  # 3
