"""Finite-support ideles and the Mayer-Vietoris maps around the norm K-group.

Ideles are stored with globally-presented components: each component is a
field element indexed by a prime of O_F, read locally at that prime.  At a
split prime the pair of components must multiply (one against the conjugate
of the other) to a rational so the idele norm stays exact.  The boundary map
sends a norm-kernel idele to the class [1, I_z] built from the component
valuations; i and mu unpack a K0 class into a rational modulo norms plus
unit classes at the ramified places.

The genus engine at the end assembles the 2-rank comparisons that the scan
over fundamental discriminants certifies.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint, primerange

from .classgroup import scan_counts
from .ideals import FracIdeal, ideal_valuation, primes_above, principal_ideal
from .knorm import K0Context, K0Elt, k0_eq, k0_identity, solve_norm_equation
from .local import TateVec, genus_char_space, h0_class_of_rational, \
    hilbert_symbol, is_global_norm, norm_uniformizer
from .quadfield import Discriminant, QuadNum, kronecker


class NotInNormKernel(ValueError):
    """Raised when an idele's norm has a nonzero valuation somewhere."""


class NormKernelViolation(ValueError):
    """Raised when a norm-one precondition fails."""


def _rational_prime_of(prime: FracIdeal) -> int:
    # split/ramified primes are stored as (1, p, b), inert ones as p*(1, 1, b)
    return int(prime.q) if prime.a == 1 else prime.a


@dataclass
class IdeleFS:
    components: dict[FracIdeal, QuadNum]
    disc: Discriminant

    def __post_init__(self):
        for prime, z in self.components.items():
            assert prime.disc.delta == self.disc.delta
            assert z, "idele components must be nonzero"

    @classmethod
    def one(cls, disc: Discriminant) -> "IdeleFS":
        return cls({}, disc)

    def component(self, prime: FracIdeal) -> QuadNum:
        return self.components.get(prime,
                                   QuadNum.from_rational(1, self.disc))

    def support_primes(self) -> list[int]:
        return sorted({_rational_prime_of(p) for p in self.components})

    def __mul__(self, other: "IdeleFS") -> "IdeleFS":
        assert other.disc.delta == self.disc.delta
        out = dict(self.components)
        for prime, z in other.components.items():
            w = out.get(prime)
            prod = z if w is None else w * z
            if prod == QuadNum.from_rational(1, self.disc):
                out.pop(prime, None)
            else:
                out[prime] = prod
        return IdeleFS(out, self.disc)

    def inverse(self) -> "IdeleFS":
        return IdeleFS({p: z.inverse() for p, z in self.components.items()},
                       self.disc)


@dataclass
class IdeleQ:
    components: dict[int, Fraction]

    def is_one(self) -> bool:
        return all(v == 1 for v in self.components.values())

    def component(self, p: int) -> Fraction:
        return self.components.get(p, Fraction(1))


def diagonal_idele(z: QuadNum) -> IdeleFS:
    """The diagonal image of z, truncated to the primes where z is not a
    local unit (invisible components are 1 by convention; the maps used here
    only read valuations and norms, which agree with the full diagonal)."""
    assert z
    disc = z.disc
    i = principal_ideal(z)
    support = {int(p) for p in factorint(i.norm().numerator)}
    support |= {int(p) for p in factorint(i.norm().denominator)}
    comps: dict[FracIdeal, QuadNum] = {}
    for p in sorted(support):
        dec = primes_above(disc, p)
        if any(ideal_valuation(i, prime) for prime in dec.primes):
            # at a split p keep both halves so the joint image stays rational
            for prime in dec.primes:
                comps[prime] = z
    return IdeleFS(comps, disc)


def split_pair_idele(disc: Discriminant, p: int, u) -> IdeleFS:
    """Idele (u, 1/u) at the two primes above a split p; its norm is 1."""
    dec = primes_above(disc, p)
    assert dec.kind == "split"
    u = Fraction(u)
    assert u != 0
    pid, pbar = dec.primes
    return IdeleFS({pid: QuadNum.from_rational(u, disc),
                    pbar: QuadNum.from_rational(1 / u, disc)}, disc)


def idele_norm(z: IdeleFS) -> IdeleQ:
    """Componentwise norm down to rational ideles, exact in this model."""
    disc = z.disc
    by_p: dict[int, list[tuple[FracIdeal, QuadNum]]] = {}
    for prime, comp in z.components.items():
        by_p.setdefault(_rational_prime_of(prime), []).append((prime, comp))
    out: dict[int, Fraction] = {}
    for p, entries in by_p.items():
        if kronecker(disc, p) != 1:
            assert len(entries) == 1
            out[p] = entries[0][1].norm()
            continue
        # product of the two local images: z_w * conj(z_wbar)
        if len(entries) == 1:
            prod = entries[0][1]
        else:
            (p1, c1), (p2, c2) = entries
            assert p1.conjugate() == p2
            prod = c1 * c2.conj()
        assert prod.is_rational(), \
            "split components must have a rational joint image"
        out[p] = prod.as_rational()
    return IdeleQ(out)


def _component_valuations(z: IdeleFS) -> dict[FracIdeal, int]:
    vals = {}
    for prime, comp in z.components.items():
        v = ideal_valuation(principal_ideal(comp), prime)
        if v:
            vals[prime] = v
    return vals


def boundary(z: IdeleFS) -> K0Elt:
    """The class [1, I_z] with I_z assembled from component valuations."""
    disc = z.disc
    vals = _component_valuations(z)
    by_p: dict[int, int] = {}
    for prime, r in vals.items():
        p = _rational_prime_of(prime)
        f = 2 if kronecker(disc, p) == -1 else 1
        by_p[p] = by_p.get(p, 0) + f * r
    bad = [p for p, s in by_p.items() if s]
    if bad:
        raise NotInNormKernel(
            f"idele norm has nonzero valuation at {sorted(bad)}")
    ideal = FracIdeal.unit(disc)
    for prime, r in vals.items():
        ideal = ideal * prime ** r
    assert ideal.norm() == 1
    return K0Elt(Fraction(1), ideal)


def map_i(e: K0Elt) -> tuple[Fraction, TateVec]:
    """A K0 class as (rational modulo global norms, ramified unit classes).

    The unit part at each ramified p divides out a uniformizer that is itself
    a local norm; with any other uniformizer the vector would depend on the
    chosen presentation [t, I] of the class.
    """
    disc = e.disc
    t = e.t
    on = []
    for p in disc.ramified_primes:
        v = 0
        num, den = t.numerator, t.denominator
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        u = t / norm_uniformizer(disc, p) ** v
        if hilbert_symbol(u, disc.delta, p) == -1:
            on.append(p)
    return t, TateVec.make(on, "ramified_only")


def mu(disc: Discriminant, t: Fraction, y: TateVec) -> TateVec:
    """F2 difference of the global class of t and the embedded unit classes,
    spread over the nonsplit finite places."""
    assert y.support_rule == "ramified_only"
    h0 = h0_class_of_rational(t, disc)
    j0 = TateVec(y.coords, "nonsplit_finite")
    return h0 + j0


def i_is_trivial(disc: Discriminant, pair: tuple[Fraction, TateVec]) -> bool:
    t, y = pair
    return is_global_norm(t, disc, "all") and not y


def mu1(z: QuadNum, u: IdeleFS) -> IdeleFS:
    """The idele z/u for a norm-one z and a norm-trivial unit idele u."""
    if z.norm() != 1:
        raise NormKernelViolation(f"N(z) = {z.norm()} != 1")
    if not idele_norm(u).is_one():
        raise NormKernelViolation("u does not have trivial idele norm")
    return diagonal_idele(z) * u.inverse()


# ---------------------------------------------------------------------------
# constructive kernel of i inside the image of the boundary

def boundary_preimage(ctx: K0Context, e: K0Elt) -> IdeleFS | None:
    """An idele z with boundary(z) equal to e as a class, when i kills e."""
    disc = e.disc
    if not i_is_trivial(disc, map_i(e)):
        return None
    x = solve_norm_equation(e.t, disc, ctx.cg)
    assert x is not None, "Hasse principle: an everywhere-local norm is a norm"
    ideal = e.ideal * principal_ideal(x).inverse()
    assert ideal.norm() == 1
    support = {int(p) for p in factorint(ideal.a)}
    support |= {int(p) for p in factorint(ideal.q.numerator)}
    support |= {int(p) for p in factorint(ideal.q.denominator)}
    z = IdeleFS.one(disc)
    for p in sorted(support):
        dec = primes_above(disc, p)
        if dec.kind != "split":
            assert all(ideal_valuation(ideal, q) == 0 for q in dec.primes)
            continue
        pid, pbar = dec.primes
        v = ideal_valuation(ideal, pid)
        assert ideal_valuation(ideal, pbar) == -v
        if v:
            z = z * split_pair_idele(disc, p, Fraction(p) ** v)
    assert k0_eq(ctx, boundary(z), e)
    return z


# ---------------------------------------------------------------------------
# seeded random generators for the sampled exactness checks

def _random_quadnum(disc: Discriminant, rng: random.Random,
                    size: int = 30) -> QuadNum:
    while True:
        x = rng.randint(-size, size)
        y = rng.randint(-size, size)
        d = rng.randint(1, size)
        z = QuadNum(2 * x, 2 * y, d, disc)
        if z:
            return z


def random_norm_one_element(disc: Discriminant,
                            rng: random.Random) -> QuadNum:
    x = _random_quadnum(disc, rng)
    z = x / x.conj()
    assert z.norm() == 1
    return z


def random_norm_kernel_idele(disc: Discriminant,
                             rng: random.Random) -> IdeleFS:
    z = IdeleFS.one(disc)
    split = [p for p in primerange(2, 60) if kronecker(disc, p) == 1]
    for _ in range(rng.randint(0, 3)):
        if rng.random() < 0.5 or not split:
            z = z * diagonal_idele(random_norm_one_element(disc, rng))
        else:
            p = rng.choice(split)
            u = Fraction(p) ** rng.randint(-2, 2) * rng.randint(1, 9)
            z = z * split_pair_idele(disc, p, u)
    return z


def random_unit_idele(disc: Discriminant, rng: random.Random) -> IdeleFS:
    """A norm-trivial idele whose components are local units."""
    z = IdeleFS.one(disc)
    split = [p for p in primerange(2, 60) if kronecker(disc, p) == 1]
    for _ in range(rng.randint(0, 2)):
        if not split:
            break
        p = rng.choice(split)
        u = Fraction(rng.choice([1, 2, 3, 5, 7, 9]))
        while u % p == 0:
            u += 1
        z = z * split_pair_idele(disc, p, u)
    return z


def random_k0_elt(disc: Discriminant, rng: random.Random) -> K0Elt:
    ideal = FracIdeal.unit(disc)
    for p in rng.sample(list(primerange(2, 40)), k=rng.randint(0, 3)):
        prime = rng.choice(primes_above(disc, p).primes)
        ideal = ideal * prime ** rng.randint(-2, 2)
    sign = rng.choice([1, -1])
    return K0Elt(sign * ideal.norm(), ideal)


@dataclass(frozen=True)
class SampledExactness:
    disc: Discriminant
    samples: int
    seed: int
    i_after_boundary_trivial: bool
    mu_after_i_trivial: bool
    boundary_after_mu1_trivial: bool
    boundary_is_homomorphism: bool

    @property
    def all_pass(self) -> bool:
        return (self.i_after_boundary_trivial and self.mu_after_i_trivial
                and self.boundary_after_mu1_trivial
                and self.boundary_is_homomorphism)


def sampled_exactness(disc: Discriminant, samples: int,
                      seed: int) -> SampledExactness:
    from .knorm import k0_context

    rng = random.Random(seed)
    ctx = k0_context(disc)
    identity = k0_identity(disc)
    ok_ib = ok_mi = ok_bm = ok_hom = True
    for _ in range(samples):
        z = random_norm_kernel_idele(disc, rng)
        e = boundary(z)
        if not i_is_trivial(disc, map_i(e)):
            ok_ib = False

        e2 = random_k0_elt(disc, rng)
        t, y = map_i(e2)
        if mu(disc, t, y):
            ok_mi = False

        w = random_norm_one_element(disc, rng)
        u = random_unit_idele(disc, rng)
        if not k0_eq(ctx, boundary(mu1(w, u)), identity):
            ok_bm = False

        z2 = random_norm_kernel_idele(disc, rng)
        if not k0_eq(ctx, boundary(z * z2),
                     K0Elt(e.t * boundary(z2).t,
                           e.ideal * boundary(z2).ideal)):
            ok_hom = False
    return SampledExactness(disc, samples, seed, ok_ib, ok_mi, ok_bm, ok_hom)


# ---------------------------------------------------------------------------
# the genus engine

@dataclass(frozen=True)
class GenusReport:
    delta: int
    t_fin: int
    t_all: int
    h: int
    h_narrow: int
    rank2: int
    dim_v: int
    dim_h: int
    exceptional: bool
    verdict_69: bool
    verdict_67: bool
    verdict_68: bool

    @property
    def all_pass(self) -> bool:
        return self.verdict_69 and self.verdict_67 and self.verdict_68


def genus_engine(disc: Discriminant) -> GenusReport:
    """2-rank of the class group against the ramification count, three ways."""
    h, h_narrow, rank2 = scan_counts(disc)
    dim_v = genus_char_space(disc).dim
    dim_h = 0 if is_global_norm(-1, disc, "all") else 1
    exceptional = disc.is_real and any(p % 4 == 3
                                       for p in disc.ramified_primes)
    expected = disc.t_fin - 1 - (1 if exceptional else 0)
    verdict_69 = rank2 == expected
    verdict_67 = dim_v == dim_h + rank2
    if disc.is_real:
        verdict_68 = rank2 <= disc.t_fin - 1
    else:
        verdict_68 = rank2 == disc.t_fin - 1
    return GenusReport(
        delta=disc.delta, t_fin=disc.t_fin, t_all=disc.t_all, h=h,
        h_narrow=h_narrow, rank2=rank2, dim_v=dim_v, dim_h=dim_h,
        exceptional=exceptional, verdict_69=verdict_69,
        verdict_67=verdict_67, verdict_68=verdict_68)
