import random
from fractions import Fraction

import pytest

from qknorm.ideals import primes_above, principal_ideal
from qknorm.knorm import K0Elt, k0_context, k0_eq, k0_group, k0_identity, \
    k0_rep, k0_twist
from qknorm.mv import (IdeleFS, NormKernelViolation, NotInNormKernel,
                       boundary, boundary_preimage, diagonal_idele,
                       genus_engine, i_is_trivial, idele_norm, map_i, mu, mu1,
                       random_k0_elt, random_norm_kernel_idele,
                       random_norm_one_element, random_unit_idele,
                       sampled_exactness, split_pair_idele)
from qknorm.quadfield import QuadNum, make_discriminant

D15 = make_discriminant(-15)


def test_idele_norm_trivial_cases():
    assert idele_norm(IdeleFS.one(D15)).is_one()
    z = split_pair_idele(D15, 2, Fraction(2))
    assert idele_norm(z).is_one()
    # diagonal idele of x has norm N(x) at every supported prime
    x = QuadNum(3, 1, 1, D15)  # norm 6
    d = diagonal_idele(x)
    n = idele_norm(d)
    for p in d.support_primes():
        assert n.component(p) == x.norm()


def test_idele_norm_at_nonsplit():
    disc = make_discriminant(12)
    p3 = primes_above(disc, 3).primes[0]
    z = IdeleFS({p3: QuadNum(0, 2, 1, disc)}, disc)  # sqrt(12), norm -12
    assert idele_norm(z).component(3) == -12


def test_boundary_requires_norm_kernel():
    p3 = primes_above(D15, 3).primes[0]
    z = IdeleFS({p3: QuadNum(3, 1, 1, D15)}, D15)
    with pytest.raises(NotInNormKernel):
        boundary(z)


def test_boundary_of_split_pair():
    z = split_pair_idele(D15, 2, Fraction(2))
    e = boundary(z)
    assert e.t == 1 and e.ideal.norm() == 1
    pid, pbar = primes_above(D15, 2).primes
    assert e.ideal == pid * pbar.inverse()


def test_boundary_of_hilbert90_diagonal_is_trivial():
    rng = random.Random(40)
    ctx = k0_context(D15)
    for _ in range(20):
        z = random_norm_one_element(D15, rng)
        e = boundary(diagonal_idele(z))
        assert k0_eq(ctx, e, k0_identity(D15))


def test_boundary_homomorphism():
    rng = random.Random(41)
    for _ in range(30):
        z1 = random_norm_kernel_idele(D15, rng)
        z2 = random_norm_kernel_idele(D15, rng)
        e1, e2 = boundary(z1), boundary(z2)
        e12 = boundary(z1 * z2)
        assert e12.ideal == e1.ideal * e2.ideal


def test_map_i_well_defined_across_presentations():
    rng = random.Random(42)
    for delta in (-15, 12, 60, -56, 105):
        disc = make_discriminant(delta)
        for _ in range(20):
            e = random_k0_elt(disc, rng)
            z = QuadNum(rng.randint(-10, 10), rng.randint(-10, 10),
                        rng.randint(1, 4), disc)
            if not z:
                continue
            t1, y1 = map_i(e)
            t2, y2 = map_i(k0_twist(e, z))
            assert y1.coords == y2.coords
            # first components differ by the global norm of z
            assert t2 / t1 == z.norm()


def test_map_i_on_sigma_minus_one():
    # over discriminant 12 the class [-1, O] is nontrivial on both counts
    disc = make_discriminant(12)
    from qknorm.ideals import FracIdeal

    t, y = map_i(K0Elt(Fraction(-1), FracIdeal.unit(disc)))
    assert not i_is_trivial(disc, (t, y))
    assert y.coords == frozenset({2, 3})
    # and [3, p3] presents the same class, with the same invariants
    p3 = primes_above(disc, 3).primes[0]
    t2, y2 = map_i(K0Elt(Fraction(3), p3))
    assert y2.coords == y.coords


def test_mu_of_five_over_minus_fifteen():
    v = mu(D15, Fraction(5), map_i(k0_identity(D15))[1])
    assert v.coords == frozenset({3, 5})


def test_mu1_preconditions():
    with pytest.raises(NormKernelViolation):
        mu1(QuadNum(4, 0, 1, D15), IdeleFS.one(D15))
    rng = random.Random(43)
    z = random_norm_one_element(D15, rng)
    u = random_unit_idele(D15, rng)
    w = mu1(z, u)
    assert idele_norm(w).is_one()


def test_composites_vanish_sampled():
    for delta in (-15, 12, 60):
        rep = sampled_exactness(make_discriminant(delta), 60, 99)
        assert rep.all_pass, rep


def test_seed_reproducibility():
    r1 = sampled_exactness(D15, 40, 7)
    r2 = sampled_exactness(D15, 40, 7)
    assert r1 == r2


def test_constructive_kernel_preimages():
    for delta in (-15, 12, 60, -23, -56, 136, 316):
        disc = make_discriminant(delta)
        ctx = k0_context(disc)
        grp = k0_group(ctx)
        found_any = False
        for key in grp.keys:
            e = k0_rep(ctx, key)
            if i_is_trivial(disc, map_i(e)):
                found_any = True
                z = boundary_preimage(ctx, e)
                assert z is not None
                assert k0_eq(ctx, boundary(z), e)
        assert found_any  # the identity is always in the kernel


@pytest.mark.parametrize("delta,rank2,exc", [(60, 1, True), (-15, 1, False),
                                             (12, 0, True), (8, 0, False),
                                             (-120, 2, False),
                                             (105, 1, True)])
def test_genus_engine_spot_values(delta, rank2, exc):
    rep = genus_engine(make_discriminant(delta))
    assert rep.rank2 == rank2
    assert rep.exceptional == exc
    assert rep.all_pass


def test_genus_engine_small_range():
    from qknorm.quadfield import is_fundamental

    for delta in range(-150, 150):
        if is_fundamental(delta):
            assert genus_engine(make_discriminant(delta)).all_pass, delta
