"""Exact fractional-ideal arithmetic in the maximal order of a quadratic field.

An ideal is stored as q * (a*Z + ((b+sqrt(D))/2)*Z) with a positive rational
scale q, a > 0 and -a < b <= a.  Products are computed as Z-module products
on the integral basis {1, w}, w = (D+sqrt(D))/2, followed by Hermite
normalization, which keeps everything exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .quadfield import Discriminant, QuadNum, kronecker, sqrt_mod


class DiscMismatch(ValueError):
    """Raised when combining ideals over different discriminants."""


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf2(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form of the Z-module spanned by 2-coordinate vectors.

    Returns (n, c, e) with module = Z*(n,0) + Z*(c,e), n > 0, e > 0.
    """
    c, e = 0, 0
    zs = []
    for u, v in vectors:
        if v == 0:
            if u:
                zs.append(u)
            continue
        if e == 0:
            c, e = u, v
            continue
        g, s, t = _xgcd(e, v)
        residual = (e * u - v * c) // g
        if residual:
            zs.append(residual)
        c, e = s * c + t * u, g
    if e < 0:
        c, e = -c, -e
    n = 0
    for z in zs:
        n = gcd(n, z)
    assert n > 0 and e > 0, "module does not have full rank"
    c %= n
    return n, c, e


@dataclass(frozen=True)
class FracIdeal:
    q: Fraction
    a: int
    b: int
    disc: Discriminant

    def __post_init__(self):
        D = self.disc.delta
        assert self.q > 0 and self.a > 0
        assert -self.a < self.b <= self.a
        assert (self.b * self.b - D) % (4 * self.a) == 0

    def __repr__(self):
        return f"FracIdeal({self.q}*[{self.a}, ({self.b}+sqrt({self.disc.delta}))/2])"

    @classmethod
    def make(cls, q, a: int, b: int, disc: Discriminant) -> "FracIdeal":
        b = b % (2 * a)
        if b > a:
            b -= 2 * a
        return cls(Fraction(q), a, b, disc)

    @classmethod
    def unit(cls, disc: Discriminant) -> "FracIdeal":
        return cls.make(1, 1, disc.delta % 2, disc)

    def is_unit_ideal(self) -> bool:
        return self.q == 1 and self.a == 1

    def is_integral(self) -> bool:
        return self.q.denominator == 1

    def norm(self) -> Fraction:
        return self.q * self.q * self.a

    def _coords(self) -> list[tuple[int, int]]:
        # basis vectors on {1, w}; (b+sqrt(D))/2 = (b-D)/2 + w
        D = self.disc.delta
        return [(self.a, 0), ((self.b - D) // 2, 1)]

    def conjugate(self) -> "FracIdeal":
        return FracIdeal.make(self.q, self.a, -self.b, self.disc)

    def inverse(self) -> "FracIdeal":
        c = self.conjugate()
        return FracIdeal(c.q / self.norm(), c.a, c.b, c.disc)

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        if not isinstance(other, FracIdeal):
            return NotImplemented
        if other.disc.delta != self.disc.delta:
            raise DiscMismatch(
                f"discriminants {self.disc.delta} and {other.disc.delta} differ")
        D = self.disc.delta
        nw = (D * D - D) // 4
        prods = []
        for u1, v1 in self._coords():
            for u2, v2 in other._coords():
                prods.append((u1 * u2 - v1 * v2 * nw,
                              u1 * v2 + u2 * v1 + v1 * v2 * D))
        n, c, e = _hnf2(prods)
        assert n % e == 0 and c % e == 0, "product is not an O_F-module"
        return FracIdeal.make(self.q * other.q * e, n // e, 2 * (c // e) + D,
                              self.disc)

    def __pow__(self, k: int) -> "FracIdeal":
        if k < 0:
            return self.inverse() ** (-k)
        result = FracIdeal.unit(self.disc)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def contains(self, z: QuadNum) -> bool:
        if not z:
            return True
        return (principal_ideal(z) * self.inverse()).is_integral()


def ideal_mul(i: FracIdeal, j: FracIdeal) -> FracIdeal:
    return i * j


def ideal_inverse(i: FracIdeal) -> FracIdeal:
    return i.inverse()


def ideal_conjugate(i: FracIdeal) -> FracIdeal:
    return i.conjugate()


def ideal_norm(i: FracIdeal) -> Fraction:
    return i.norm()


def principal_ideal(z: QuadNum) -> FracIdeal:
    """The fractional ideal z * O_F."""
    assert z, "zero generates no fractional ideal"
    disc = z.disc
    D = disc.delta
    # z = w / (2d) with w = x + y*sqrt(D) integral
    u0, v0 = z.x - z.y * D, 2 * z.y  # coords of w on {1, w-basis}... see below
    # w = x + y*sqrt(D) = (2x + 2y*sqrt(D))/2 -> v = 2y, u = x - y*D
    nw = (D * D - D) // 4
    gens = [(u0, v0), (-v0 * nw, u0 + v0 * D)]  # w, w*omega
    n, c, e = _hnf2(gens)
    assert n % e == 0 and c % e == 0
    return FracIdeal.make(Fraction(e, 2 * z.d), n // e, 2 * (c // e) + D, disc)


@dataclass(frozen=True)
class Decomposition:
    kind: str  # "split" | "inert" | "ramified"
    p: int
    primes: tuple[FracIdeal, ...]


def primes_above(disc: Discriminant, p: int) -> Decomposition:
    k = kronecker(disc, p)
    D = disc.delta
    if k == -1:
        inert = FracIdeal.make(p, 1, D % 2, disc)
        return Decomposition("inert", p, (inert,))
    b = sqrt_mod(D % (4 * p), 4 * p)
    assert b is not None, f"no square root of {D} mod {4 * p}"
    if (b - D) % 2 != 0:
        b = (2 * p - b) % (4 * p)
    assert (b * b - D) % (4 * p) == 0 and (b - D) % 2 == 0
    pid = FracIdeal.make(1, p, b, disc)
    if k == 0:
        assert pid * pid == FracIdeal.make(p, 1, D % 2, disc)
        return Decomposition("ramified", p, (pid,))
    pbar = pid.conjugate()
    assert pid * pbar == FracIdeal.make(p, 1, D % 2, disc)
    return Decomposition("split", p, (pid, pbar))


def _integral_valuation(j: FracIdeal, prime: FracIdeal) -> int:
    assert j.is_integral()
    v = 0
    pinv = prime.inverse()
    while True:
        nxt = j * pinv
        if not nxt.is_integral():
            return v
        j = nxt
        v += 1


def ideal_valuation(i: FracIdeal, prime: FracIdeal) -> int:
    """Exponent of the prime ideal in the factorization of i."""
    den = i.q.denominator
    if den == 1:
        return _integral_valuation(i, prime)
    scaled = FracIdeal(i.q * den, i.a, i.b, i.disc)
    den_ideal = FracIdeal.make(den, 1, i.disc.delta % 2, i.disc)
    return (_integral_valuation(scaled, prime)
            - _integral_valuation(den_ideal, prime))


def factor_integral_ideal(i: FracIdeal) -> dict[FracIdeal, int]:
    """Prime factorization of an integral ideal."""
    from sympy import factorint

    assert i.is_integral()
    out: dict[FracIdeal, int] = {}
    n = i.norm()
    assert n.denominator == 1
    for p in factorint(int(n)):
        p = int(p)
        dec = primes_above(i.disc, p)
        for prime in dec.primes:
            v = ideal_valuation(i, prime)
            if v:
                out[prime] = v
    return out


def is_principal_with_generator(i: FracIdeal) -> QuadNum | None:
    """A generator z with z*O_F = i, or None (wide sense: N(z) of any sign)."""
    from .classgroup import principal_generator

    return principal_generator(i)
