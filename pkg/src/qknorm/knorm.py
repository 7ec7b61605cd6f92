"""Grothendieck group of the norm functor on a quadratic field.

An element is a pair [t, I] with t a nonzero rational, I a fractional ideal
and |t| = N(I); two pairs are identified when [t', I'] = [N(z)*t, z*I] for
some z in F*.  The group sits in an exact sequence between the units-mod-norms
group of the field and its class group, verified here by explicit enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint

from .classgroup import ClassGroupData, class_group, principal_generator
from .ideals import FracIdeal, primes_above
from .quadfield import Discriminant, QuadNum
from .units import UnitData, fundamental_unit


class NormMismatch(ValueError):
    """Raised when |t| differs from the norm of the ideal component."""


class ClosureBudgetExceeded(RuntimeError):
    """Raised when group closure does not stabilize within the budget."""


@dataclass(frozen=True)
class K0Elt:
    t: Fraction
    ideal: FracIdeal

    def __post_init__(self):
        if abs(self.t) != self.ideal.norm():
            raise NormMismatch(
                f"|{self.t}| != N(I) = {self.ideal.norm()}")

    @property
    def disc(self) -> Discriminant:
        return self.ideal.disc


def k0_make(t, ideal: FracIdeal) -> K0Elt:
    return K0Elt(Fraction(t), ideal)


def k0_identity(disc: Discriminant) -> K0Elt:
    return K0Elt(Fraction(1), FracIdeal.unit(disc))


def k0_mul(e1: K0Elt, e2: K0Elt) -> K0Elt:
    return K0Elt(e1.t * e2.t, e1.ideal * e2.ideal)


def k0_inv(e: K0Elt) -> K0Elt:
    return K0Elt(1 / e.t, e.ideal.inverse())


def k0_twist(e: K0Elt, z: QuadNum) -> K0Elt:
    """The same class presented on the ideal z * I."""
    from .ideals import principal_ideal

    return K0Elt(e.t * z.norm(), e.ideal * principal_ideal(z))


@dataclass
class K0Context:
    """Class group plus unit data, enough to canonicalize K0 classes."""
    disc: Discriminant
    cg: ClassGroupData
    units: UnitData

    @property
    def sign_is_invariant(self) -> bool:
        # the sign of t can be absorbed exactly when a unit of norm -1 exists
        return self.units.h0_units_order == 2


def k0_context(disc: Discriminant) -> K0Context:
    return K0Context(disc=disc, cg=class_group(disc),
                     units=fundamental_unit(disc))


def k0_key(ctx: K0Context, e: K0Elt):
    """Canonical key (sign, wide class key); equal keys iff equal classes."""
    key = ctx.cg.key_of_ideal(e.ideal)
    i0 = ctx.cg.rep_ideal(key)
    z = principal_generator(e.ideal * i0.inverse())
    assert z is not None, "ideal is not in the class of its representative"
    t0 = e.t / z.norm()
    assert abs(t0) == i0.norm()
    sign = 1 if t0 > 0 else -1
    if not ctx.sign_is_invariant:
        sign = 1
    return (sign, key)


def k0_rep(ctx: K0Context, key) -> K0Elt:
    sign, ckey = key
    i0 = ctx.cg.rep_ideal(ckey)
    return K0Elt(sign * i0.norm(), i0)


def k0_eq(ctx: K0Context, e1: K0Elt, e2: K0Elt) -> bool:
    return k0_key(ctx, e1) == k0_key(ctx, e2)


def sigma(ctx: K0Context, sign: int) -> K0Elt:
    """Image of a unit class: [sign, O_F]."""
    assert sign in (1, -1)
    return K0Elt(Fraction(sign), FracIdeal.unit(ctx.disc))


def rho(ctx: K0Context, e: K0Elt):
    """Underlying wide ideal class."""
    return ctx.cg.key_of_ideal(e.ideal)


@dataclass
class K0Group:
    order: int
    divisors: list[int]
    keys: list
    ctx: K0Context


def k0_group(ctx: K0Context, budget: int = 1_000_000) -> K0Group:
    """All classes by closure from generators, with the abelian structure."""
    from .classgroup import _abelian_structure

    identity = k0_key(ctx, k0_identity(ctx.disc))

    def mul(k1, k2):
        return k0_key(ctx, k0_mul(k0_rep(ctx, k1), k0_rep(ctx, k2)))

    gens = [k0_key(ctx, sigma(ctx, -1))]
    for g in ctx.cg.generators:
        gens.append(k0_key(ctx, K0Elt(g.norm(), g)))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for k in frontier:
            for g in gens:
                kg = mul(k, g)
                if kg not in seen:
                    if len(seen) >= budget:
                        raise ClosureBudgetExceeded(
                            f"more than {budget} classes generated")
                    seen.add(kg)
                    nxt.append(kg)
        frontier = nxt
    keys = sorted(seen)
    divisors, _ = _abelian_structure(keys, mul, identity)
    return K0Group(order=len(keys), divisors=divisors, keys=keys, ctx=ctx)


@dataclass(frozen=True)
class BassReport:
    disc: Discriminant
    order: int
    expected_order: int
    sigma_injective: bool
    sigma_expected_injective: bool
    kernel_rho_is_image_sigma: bool
    rho_surjective: bool

    @property
    def exact(self) -> bool:
        return (self.order == self.expected_order
                and self.sigma_injective == self.sigma_expected_injective
                and self.kernel_rho_is_image_sigma and self.rho_surjective)


def bass_sequence_report(disc: Discriminant) -> BassReport:
    """Check exactness of units-mod-norms -> K0 -> class group -> 1."""
    ctx = k0_context(disc)
    grp = k0_group(ctx)
    im_sigma = {k0_key(ctx, sigma(ctx, 1)), k0_key(ctx, sigma(ctx, -1))}
    ker_rho = {k for k in grp.keys
               if k[1] == ctx.cg.key_of_ideal(FracIdeal.unit(disc))}
    classes_hit = {k[1] for k in grp.keys}
    expected = ctx.units.h0_units_order * ctx.cg.h
    return BassReport(
        disc=disc, order=grp.order, expected_order=expected,
        sigma_injective=len(im_sigma) == 2,
        sigma_expected_injective=ctx.units.h0_units_order == 2,
        kernel_rho_is_image_sigma=ker_rho == im_sigma,
        rho_surjective=len(classes_hit) == ctx.cg.h)


# ---------------------------------------------------------------------------
# the norm equation N(x) = t, solved through principality tests

def _integral_ideals_of_norm(disc: Discriminant, m: int):
    """All integral ideals of norm m > 0."""
    assert m > 0
    choices = []
    for p, e in factorint(m).items():
        p, e = int(p), int(e)
        dec = primes_above(disc, p)
        if dec.kind == "inert":
            if e % 2:
                return
            choices.append([dec.primes[0] ** (e // 2)])
        elif dec.kind == "ramified":
            choices.append([dec.primes[0] ** e])
        else:
            pid, pbar = dec.primes
            choices.append([pid ** k * pbar ** (e - k) for k in range(e + 1)])
    for combo in product(*choices):
        out = FracIdeal.unit(disc)
        for j in combo:
            out = out * j
        assert out.norm() == m
        yield out


def solve_norm_equation(t, disc: Discriminant,
                        cg: ClassGroupData | None = None) -> QuadNum | None:
    """An x in F* with N(x) = t, or None if there is none.

    The principal ideal of a solution is an integral ideal above the primes
    dividing t times a norm-one twist A * conj(A)^-1, whose class is the
    square of [A]; so it suffices to run over the integral parts and over the
    square roots of the inverse class of each, and read off generators.
    """
    t = Fraction(t)
    assert t != 0
    if disc.delta < 0 and t < 0:
        return None
    if cg is None:
        cg = class_group(disc)
    units = fundamental_unit(disc)
    # clear the denominator: N(y) = t * den^2 with y = x * den
    m = t * t.denominator ** 2
    assert m.denominator == 1
    m = int(m)
    for j0 in _integral_ideals_of_norm(disc, abs(m)):
        target = cg.identity_key()
        k0 = cg.key_of_ideal(j0)
        for c in cg.elements():
            if cg.mul(cg.mul(c, c), k0) != target:
                continue
            a = cg.rep_ideal(c)
            j = j0 * a * a.conjugate().inverse()
            z = principal_generator(j)
            assert z is not None, "class arithmetic made j principal"
            n = z.norm()
            assert abs(n) == abs(m)
            if n != m:
                if units.eps is None or units.eps_norm != -1:
                    continue
                z = z * units.eps
                assert z.norm() == m
            return z.scale(Fraction(1, t.denominator))
    return None
