"""Fundamental discriminants and exact arithmetic in a quadratic field.

Elements are stored as (x + y*sqrt(D))/(2d) with integer x, y and positive
denominator d, reduced so that gcd(x, y, d) = 1.  With this convention the
ring of integers is exactly the set of elements with d = 1 (and the parity
constraint x = y*D mod 2), for both D = 0 and D = 1 mod 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint


class NotFundamental(ValueError):
    """Raised when an integer is not a fundamental quadratic discriminant."""


class NotIntegral(ValueError):
    """Raised when an algebraic integer was required."""


@dataclass(frozen=True)
class Discriminant:
    delta: int
    ramified_primes: tuple[int, ...]
    t_fin: int
    t_all: int
    is_real: bool

    def __repr__(self):
        return f"Discriminant({self.delta})"


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in factorint(n).values())


def is_fundamental(n: int) -> bool:
    if n == 0 or n == 1:
        return False
    if n % 4 == 1:
        return is_squarefree(n)
    if n % 4 == 0:
        m = n // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def make_discriminant(n: int) -> Discriminant:
    if not is_fundamental(n):
        raise NotFundamental(f"{n} is not a fundamental discriminant")
    ramified = tuple(sorted(int(p) for p in factorint(abs(n))))
    t_fin = len(ramified)
    t_all = t_fin if n > 0 else t_fin + 1
    return Discriminant(delta=n, ramified_primes=ramified, t_fin=t_fin,
                        t_all=t_all, is_real=n > 0)


class QuadNum:
    """An element (x + y*sqrt(delta))/(2d) of the quadratic field."""

    __slots__ = ("x", "y", "d", "disc")

    def __init__(self, x: int, y: int, d: int, disc: Discriminant):
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            x, y, d = -x, -y, -d
        g = gcd(gcd(x, y), d)
        if g > 1:
            x //= g
            y //= g
            d //= g
        self.x = x
        self.y = y
        self.d = d
        self.disc = disc

    @classmethod
    def from_rational(cls, q, disc: Discriminant) -> "QuadNum":
        q = Fraction(q)
        return cls(2 * q.numerator, 0, q.denominator, disc)

    @classmethod
    def from_integral(cls, x: int, y: int, disc: Discriminant) -> "QuadNum":
        """Element (x + y*sqrt(delta))/2; must satisfy x = y*delta mod 2."""
        if (x - y * disc.delta) % 2 != 0:
            raise NotIntegral(f"({x}+{y}*sqrt({disc.delta}))/2 is not integral")
        return cls(x, y, 1, disc)

    def _key(self):
        return (self.x, self.y, self.d, self.disc.delta)

    def __eq__(self, other):
        return isinstance(other, QuadNum) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"QuadNum(({self.x}+{self.y}*sqrt({self.disc.delta}))/{2*self.d})"

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def is_integral(self) -> bool:
        return self.d == 1 and (self.x - self.y * self.disc.delta) % 2 == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def as_rational(self) -> Fraction:
        assert self.y == 0
        return Fraction(self.x, 2 * self.d)

    def conj(self) -> "QuadNum":
        return QuadNum(self.x, -self.y, self.d, self.disc)

    def norm(self) -> Fraction:
        D = self.disc.delta
        return Fraction(self.x * self.x - D * self.y * self.y,
                        4 * self.d * self.d)

    def trace(self) -> Fraction:
        return Fraction(self.x, self.d)

    def __neg__(self):
        return QuadNum(-self.x, -self.y, self.d, self.disc)

    def __add__(self, other):
        other = self._coerce(other)
        return QuadNum(self.x * other.d + other.x * self.d,
                       self.y * other.d + other.y * self.d,
                       self.d * other.d, self.disc)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        D = self.disc.delta
        x = self.x * other.x + D * self.y * other.y
        y = self.x * other.y + self.y * other.x
        return QuadNum(x, y, 2 * self.d * other.d, self.disc)

    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self) -> "QuadNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/a = conj(a)/N(a)
        c = self.conj()
        return QuadNum(c.x * n.denominator, c.y * n.denominator,
                       c.d * n.numerator, self.disc)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def scale(self, q) -> "QuadNum":
        q = Fraction(q)
        return QuadNum(self.x * q.numerator, self.y * q.numerator,
                       self.d * q.denominator, self.disc)

    def _coerce(self, other):
        if isinstance(other, QuadNum):
            assert other.disc.delta == self.disc.delta
            return other
        return QuadNum.from_rational(other, self.disc)

    def sign_real(self) -> int:
        """Sign under the embedding sending sqrt(delta) to the positive root
        (delta > 0), or the sign of the element when it is rational."""
        x, y, D = self.x, self.y, self.disc.delta
        if y == 0:
            return 0 if x == 0 else (1 if x > 0 else -1)
        assert D > 0, "nonrational element of an imaginary field has no real sign"
        if x >= 0 and y > 0:
            return 1
        if x <= 0 and y < 0:
            return -1
        # x and y of opposite signs: compare x^2 with D y^2
        s = 1 if x > 0 else -1
        return s if x * x > D * y * y else -s

    def compare_rational(self, q) -> int:
        """Exact comparison with a rational (delta > 0 or rational self)."""
        diff = self - QuadNum.from_rational(q, self.disc)
        return diff.sign_real()


def norm_trace(a: QuadNum) -> tuple[Fraction, Fraction]:
    return a.norm(), a.trace()


def mult_matrix(u: QuadNum) -> tuple[tuple[int, int], tuple[int, int]]:
    """Matrix of multiplication by u on the basis {1, w}, w = (D+sqrt(D))/2.

    Its determinant is N(u) and its trace is Tr(u).
    """
    if not u.is_integral():
        raise NotIntegral(f"{u!r} is not an algebraic integer")
    D = u.disc.delta
    b = u.y
    a = (u.x - u.y * D) // 2
    # w^2 = D*w - (D^2-D)/4
    nw = (D * D - D) // 4
    return ((a, -b * nw), (b, a + b * D))


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def kronecker(disc: Discriminant, p: int) -> int:
    """0 if p ramifies, +1 if p splits, -1 if p is inert."""
    D = disc.delta
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 == 1 else -1
    if D % p == 0:
        return 0
    return _legendre(D, p)


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a mod p (Tonelli-Shanks), or None."""
    a %= p
    if p == 2:
        return a
    if a == 0:
        return 0
    if _legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod(a: int, m: int) -> int | None:
    """A square root of a modulo m, by CRT over the factorization of m."""
    from sympy.ntheory.modular import crt

    if m == 1:
        return 0
    residues, moduli = [], []
    for p, e in factorint(m).items():
        r = _sqrt_mod_prime_power(a, p, e)
        if r is None:
            return None
        residues.append(r)
        moduli.append(p ** e)
    res = crt(moduli, residues)
    if res is None:
        return None
    return int(res[0])


def _sqrt_mod_prime_power(a: int, p: int, e: int) -> int | None:
    pe = p ** e
    a %= pe
    if a == 0:
        return 0
    if p == 2:
        # small exhaustive search; e stays tiny in this artifact
        for z in range(pe):
            if z * z % pe == a:
                return z
        return None
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2 == 1:
        return None
    r = sqrt_mod_prime(a, p)
    if r is None:
        return None
    # Hensel lift to p^(e-v)
    k = 1
    while k < e - v:
        r = (r - (r * r - a) * pow(2 * r, -1, p ** (2 * k))) % (p ** (2 * k))
        k *= 2
    return (r % p ** (e - v)) * p ** (v // 2) % pe


def isqrt_floor(n: int) -> int:
    return isqrt(n)
