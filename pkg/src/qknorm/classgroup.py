"""Class groups of quadratic fields via binary quadratic forms.

The narrow group is computed first from proper equivalence classes of
primitive forms (unique reduced form for negative discriminants, reduction
cycles for positive ones).  The wide group is the quotient by the narrow
class of the principal ideal generated by sqrt(delta).

Composition is realized as a Z-module product of the corresponding ideals
followed by primitivization, which is Gauss composition at class level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .ideals import FracIdeal, _hnf2, principal_ideal
from .quadfield import Discriminant, QuadNum

Form = tuple[int, int, int]
Mat = tuple[int, int, int, int]  # row-major 2x2

_ID: Mat = (1, 0, 0, 1)


@dataclass(frozen=True)
class QForm:
    a: int
    b: int
    c: int
    disc: Discriminant

    def __post_init__(self):
        assert self.b * self.b - 4 * self.a * self.c == self.disc.delta

    def tup(self) -> Form:
        return (self.a, self.b, self.c)

    def __repr__(self):
        return f"QForm({self.a}, {self.b}, {self.c}; D={self.disc.delta})"


def principal_form(D: int) -> Form:
    b = D % 2
    return (1, b, (b * b - D) // 4)


def form_of_ideal(i: FracIdeal) -> QForm:
    D = i.disc.delta
    return QForm(i.a, i.b, (i.b * i.b - D) // (4 * i.a), i.disc)


def ideal_of_form(f: QForm) -> FracIdeal:
    assert f.a > 0, "only positive leading coefficients correspond to ideals"
    return FracIdeal.make(1, f.a, f.b, f.disc)


# ---------------------------------------------------------------------------
# reduction, with optional SL2 transformation tracking (f_red = f o M)

def _mat_mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mat_inv(m: Mat) -> Mat:
    a, b, c, d = m
    det = a * d - b * c
    assert det == 1
    return (d, -b, -c, a)


def _apply(f: Form, m: Mat, D: int) -> Form:
    a, b, c = f
    p, q, r, s = m
    a2 = a * p * p + b * p * r + c * r * r
    c2 = a * q * q + b * q * s + c * s * s
    b2 = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s
    assert b2 * b2 - 4 * a2 * c2 == D
    return (a2, b2, c2)


def reduce_definite(f: Form) -> Form:
    a, b, c = f
    assert a > 0
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            c = c + ((r - b) // (2 * a)) * ((r + b) // 2)
            b = r
            continue
        if (b == -a) or (a == c and b < 0):
            b = -b
            continue
        return (a, b, c)


def reduce_definite_t(f: Form, D: int) -> tuple[Form, Mat]:
    m = _ID
    a, b, c = f
    while True:
        if a > c:
            m = _mat_mul(m, (0, -1, 1, 0))
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            t = (r - b) // (2 * a)
            m = _mat_mul(m, (1, t, 0, 1))
            c = c + t * ((r + b) // 2)
            b = r
            continue
        if b == -a:
            m = _mat_mul(m, (1, 1, 0, 1))
            b = a
            continue
        if a == c and b < 0:
            m = _mat_mul(m, (0, -1, 1, 0))
            b = -b
            continue
        assert _apply(f, m, D) == (a, b, c)
        return (a, b, c), m


def is_reduced_indef(f: Form, s: int) -> bool:
    a, b, _ = f
    return 0 < b <= s and b >= s + 1 - 2 * abs(a) and b >= 2 * abs(a) - s


def _normalize_indef_t(f: Form, s: int) -> tuple[Form, Mat]:
    a, b, c = f
    hi = abs(a) if abs(a) > s else s
    step = 2 * abs(a)
    k = (hi - b) // step
    t = k if a > 0 else -k
    b2 = b + 2 * a * t
    c2 = c + t * ((b2 + b) // 2)
    return (a, b2, c2), (1, t, 0, 1)


def rho_t(f: Form, s: int) -> tuple[Form, Mat]:
    a, b, c = f
    g, m = _normalize_indef_t((c, -b, a), s)
    return g, _mat_mul((0, -1, 1, 0), m)


def reduce_indef_t(f: Form, D: int) -> tuple[Form, Mat]:
    s = isqrt(D)
    g, m = _normalize_indef_t(f, s)
    while not is_reduced_indef(g, s):
        g2, m2 = rho_t(g, s)
        g, m = g2, _mat_mul(m, m2)
    assert _apply(f, m, D) == g
    return g, m


def cycle_of(f: Form, D: int) -> list[Form]:
    """The rho-cycle through the reduced form equivalent to f."""
    s = isqrt(D)
    g, _ = reduce_indef_t(f, D)
    out = [g]
    h, _ = rho_t(g, s)
    while h != g:
        out.append(h)
        h, _ = rho_t(h, s)
    return out


def reduce_form(f: QForm) -> QForm:
    """Canonical representative: the reduced form (D<0) or cycle anchor (D>0)."""
    D = f.disc.delta
    if D < 0:
        return QForm(*reduce_definite(f.tup()), f.disc)
    return QForm(*min(cycle_of(f.tup(), D)), f.disc)


# ---------------------------------------------------------------------------
# composition (class level): module product of the two ideals, primitivized

def compose_forms(f1: Form, f2: Form, D: int) -> Form:
    a1, b1, _ = f1
    a2, b2, _ = f2
    assert a1 > 0 and a2 > 0
    nw = (D * D - D) // 4
    g1 = [(a1, 0), ((b1 - D) // 2, 1)]
    g2 = [(a2, 0), ((b2 - D) // 2, 1)]
    prods = []
    for u1, v1 in g1:
        for u2, v2 in g2:
            prods.append((u1 * u2 - v1 * v2 * nw,
                          u1 * v2 + u2 * v1 + v1 * v2 * D))
    n, c, e = _hnf2(prods)
    assert n % e == 0 and c % e == 0
    a3 = n // e
    b3 = (2 * (c // e) + D) % (2 * a3)
    if b3 > a3:
        b3 -= 2 * a3
    return (a3, b3, (b3 * b3 - D) // (4 * a3))


# ---------------------------------------------------------------------------
# enumeration of reduced forms

def enumerate_reduced_definite(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant D < 0 (b of both signs)."""
    assert D < 0
    n = -D
    out = []
    for a in range(1, isqrt(n // 3) + 1):
        for b in range(D % 2, a + 1, 2):
            if (b * b + n) % (4 * a):
                continue
            c = (b * b + n) // (4 * a)
            if c < a:
                continue
            out.append((a, b, c))
            if 0 < b < a and a < c:
                out.append((a, -b, c))
    return out


def enumerate_reduced_indefinite(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant D > 0 (both signs of a)."""
    assert D > 0
    s = isqrt(D)
    out = []
    for b in range(2 - D % 2, s + 1, 2):
        m = (D - b * b) // 4
        lo = max(1, (s + 2 - b) // 2)
        hi = (s + b) // 2
        for ap in range(lo, hi + 1):
            if m % ap == 0:
                cp = m // ap
                out.append((ap, b, -cp))
                out.append((-ap, b, cp))
    return out


def _partition_cycles(forms: list[Form], D: int) -> dict[Form, Form]:
    """Map each reduced form to its cycle anchor (lexicographic minimum)."""
    s = isqrt(D)
    form_set = set(forms)
    anchor: dict[Form, Form] = {}
    for f in forms:
        if f in anchor:
            continue
        cyc = [f]
        g, _ = rho_t(f, s)
        while g != f:
            assert g in form_set, f"cycle left the enumerated set at {g}"
            cyc.append(g)
            g, _ = rho_t(g, s)
        a0 = min(cyc)
        for h in cyc:
            anchor[h] = a0
    return anchor


# ---------------------------------------------------------------------------
# principality with explicit generator

def _generator_from_transform(i: FracIdeal, col: tuple[int, int],
                              expected_norm_sign: int) -> QuadNum:
    u, v = col
    D = i.disc.delta
    # z0 = a*u + ((b+sqrt(D))/2)*v on the primitive part
    z0 = QuadNum(2 * i.a * u + i.b * v, v, 1, i.disc)
    assert z0.norm() == expected_norm_sign * i.a
    return z0.scale(i.q)


def principal_generator(i: FracIdeal) -> QuadNum | None:
    """A generator z with z*O_F = i (either sign of N(z)), or None."""
    D = i.disc.delta
    f = form_of_ideal(i).tup()
    if D < 0:
        rf, m = reduce_definite_t(f, D)
        if rf != reduce_definite(principal_form(D)):
            return None
        z = _generator_from_transform(i, (m[0], m[2]), 1)
    else:
        rf, m0 = reduce_indef_t(f, D)
        z = None
        for sign in (1, -1):
            p0 = principal_form(D) if sign == 1 else _negative_unit_form(D)
            g, n = reduce_indef_t(p0, D)
            s = isqrt(D)
            while True:
                if g == rf:
                    ninv = _mat_inv(n)
                    m = _mat_mul(m0, ninv)
                    z = _generator_from_transform(i, (m[0], m[2]), sign)
                    break
                g2, step = rho_t(g, s)
                n = _mat_mul(n, step)
                g = g2
                if g == reduce_indef_t(p0, D)[0]:
                    break
            if z is not None:
                break
        if z is None:
            return None
    assert principal_ideal(z) == i
    return z


def _negative_unit_form(D: int) -> Form:
    b = D % 2
    return (-1, b, (D - b * b) // 4)


# ---------------------------------------------------------------------------
# the class group object

@dataclass
class ClassGroupData:
    h: int
    h_narrow: int
    divisors: list[int]
    generators: list[FracIdeal]
    rank2: int
    disc: Discriminant
    # internal handles (wide group as canonical keys)
    _elements: list = field(repr=False, default_factory=list)
    _mul: object = field(repr=False, default=None)
    _identity: object = field(repr=False, default=None)
    _key_of_form: object = field(repr=False, default=None)
    _rep_form: object = field(repr=False, default=None)

    def key_of_ideal(self, i: FracIdeal):
        return self._key_of_form(form_of_ideal(i).tup())

    def mul(self, k1, k2):
        return self._mul(k1, k2)

    def identity_key(self):
        return self._identity

    def elements(self):
        return list(self._elements)

    def rep_ideal(self, key) -> FracIdeal:
        return ideal_of_form(QForm(*self._rep_form(key), self.disc))


def _abelian_structure(elements, mul, identity):
    """Invariant factors d1 | d2 | ... and matching generators."""
    if len(elements) == 1:
        return [], []
    h = {identity}
    divisors, gens = [], []
    remaining = set(elements)
    while len(h) < len(elements):
        best, best_ord = None, 0
        for x in remaining:
            if x in h:
                continue
            k, y = 1, x
            while y not in h:
                y = mul(y, x)
                k += 1
            if k > best_ord:
                best, best_ord = x, k
        # correct best so that best^d lands on the identity, not just in h
        target = best
        for _ in range(best_ord - 1):
            target = mul(target, best)  # best^best_ord, an element of h
        root = None
        for y in h:
            z, zz = y, y
            for _ in range(best_ord - 1):
                zz = mul(zz, z)
            if zz == target:
                root = y
                break
        assert root is not None, "no d-th root in the accumulated subgroup"
        inv_root = root
        while mul(inv_root, root) != identity:
            inv_root = mul(inv_root, root)
        if mul(root, root) == root:  # root is the identity
            gen = best
        else:
            gen = mul(best, inv_root)
        divisors.append(best_ord)
        gens.append(gen)
        new_h = set()
        for x in h:
            y = x
            for _ in range(best_ord):
                new_h.add(y)
                y = mul(y, gen)
        h = new_h
    assert len(h) == len(elements)
    divisors.reverse()
    gens.reverse()
    return divisors, gens


def class_group(disc: Discriminant) -> ClassGroupData:
    D = disc.delta
    if D < 0:
        reduced = enumerate_reduced_definite(D)
        identity = reduce_definite(principal_form(D))

        def key_of_form(f: Form):
            return reduce_definite(f)

        def rep_form(k: Form) -> Form:
            return k

        def mul(k1, k2):
            return reduce_definite(compose_forms(k1, k2, D))

        narrow_keys = list(reduced)
        h_narrow = len(narrow_keys)
        wide_keys = narrow_keys
        wide_of_narrow = {k: k for k in narrow_keys}
        wide_mul = mul
        wide_identity = identity
    else:
        forms = enumerate_reduced_indefinite(D)
        anchors = _partition_cycles(forms, D)
        narrow_keys = sorted(set(anchors.values()))
        h_narrow = len(narrow_keys)
        s = isqrt(D)

        def anchor_of(f: Form):
            g, _ = reduce_indef_t(f, D)
            return anchors[g]

        def pos_rep(k: Form) -> Form:
            g = k
            while g[0] < 0:
                g, _ = rho_t(g, s)
            return g

        def narrow_mul(k1, k2):
            return anchor_of(compose_forms(pos_rep(k1), pos_rep(k2), D))

        identity = anchor_of(principal_form(D))
        sqrt_delta = QuadNum(0, 2, 1, disc)
        c0 = anchor_of(form_of_ideal(principal_ideal(sqrt_delta)).tup())
        if c0 == identity:
            wide_of_narrow = {k: k for k in narrow_keys}
        else:
            wide_of_narrow = {k: min(k, narrow_mul(k, c0))
                              for k in narrow_keys}
        wide_keys = sorted(set(wide_of_narrow.values()))

        def key_of_form(f: Form):
            return wide_of_narrow[anchor_of(f)]

        def rep_form(k: Form) -> Form:
            return pos_rep(k)

        def wide_mul(k1, k2):
            return wide_of_narrow[narrow_mul(k1, k2)]

        wide_identity = wide_of_narrow[identity]

    divisors, gen_keys = _abelian_structure(wide_keys, wide_mul, wide_identity)
    data = ClassGroupData(
        h=len(wide_keys), h_narrow=h_narrow, divisors=divisors,
        generators=[], rank2=sum(1 for d in divisors if d % 2 == 0),
        disc=disc, _elements=wide_keys, _mul=wide_mul,
        _identity=wide_identity, _key_of_form=key_of_form,
        _rep_form=rep_form)
    data.generators = [data.rep_ideal(k) for k in gen_keys]
    return data


@dataclass(frozen=True)
class Coinvariants:
    dim: int
    coset_reps: tuple[FracIdeal, ...]
    norm_kernel_is_all: bool = True  # base field Q has trivial class group


def coinvariants(cg: ClassGroupData) -> Coinvariants:
    """Cl/Cl^2 (the conjugation action inverts classes, so I_G Cl = Cl^2)."""
    squares = {cg.mul(k, k) for k in cg.elements()}
    reps, covered = [], set()
    for k in cg.elements():
        if k in covered:
            continue
        reps.append(k)
        covered |= {cg.mul(k, s) for s in squares}
    dim = len(reps).bit_length() - 1
    assert 1 << dim == len(reps) and dim == cg.rank2
    return Coinvariants(dim=dim, coset_reps=tuple(cg.rep_ideal(k) for k in reps))


# ---------------------------------------------------------------------------
# fast counting path for the large discriminant scan

def scan_counts(disc: Discriminant) -> tuple[int, int, int]:
    """(h, h_narrow, rank2 of the wide group), vectorized with numpy."""
    import numpy as np

    D = disc.delta
    if D < 0:
        n = -D
        amax = isqrt(n // 3)
        b0 = n % 2
        if amax == 0:  # D = -3 edge is covered by amax >= 1 otherwise
            amax = 1
        a_vals = np.arange(1, amax + 1, dtype=np.int64)
        lens = (a_vals - b0) // 2 + 1
        total = int(lens.sum())
        a_flat = np.repeat(a_vals, lens)
        starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
        b_flat = (np.arange(total, dtype=np.int64)
                  - np.repeat(starts, lens)) * 2 + b0
        num = b_flat * b_flat + n
        mask = num % (4 * a_flat) == 0
        c_flat = np.zeros_like(a_flat)
        c_flat[mask] = num[mask] // (4 * a_flat[mask])
        mask &= c_flat >= a_flat
        boundary = mask & ((b_flat == 0) | (b_flat == a_flat)
                           | (a_flat == c_flat))
        n_boundary = int(boundary.sum())
        n_interior = int(mask.sum()) - n_boundary
        h = n_boundary + 2 * n_interior
        assert n_boundary & (n_boundary - 1) == 0
        rank2 = n_boundary.bit_length() - 1
        return h, h, rank2

    s = isqrt(D)
    b0 = 2 - D % 2
    b_vals = np.arange(b0, s + 1, 2, dtype=np.int64)
    lo = np.maximum(1, (s + 2 - b_vals) // 2)
    hi = (s + b_vals) // 2
    lens = np.maximum(0, hi - lo + 1)
    total = int(lens.sum())
    b_flat = np.repeat(b_vals, lens)
    m_flat = (D - b_flat * b_flat) // 4
    starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
    a_flat = (np.arange(total, dtype=np.int64)
              - np.repeat(starts, lens)) + np.repeat(lo, lens)
    mask = m_flat % a_flat == 0
    aps = a_flat[mask]
    bs = b_flat[mask]
    cs = m_flat[mask] // aps
    forms: list[Form] = []
    for ap, b, cp in zip(aps.tolist(), bs.tolist(), cs.tolist()):
        forms.append((ap, b, -cp))
        forms.append((-ap, b, cp))
    anchors = _partition_cycles(forms, D)
    narrow_keys = sorted(set(anchors.values()))
    h_narrow = len(narrow_keys)

    def anchor_of(f: Form):
        g, _ = reduce_indef_t(f, D)
        return anchors[g]

    def pos_rep(k: Form) -> Form:
        g = k
        while g[0] < 0:
            g, _ = rho_t(g, s)
        return g

    identity = anchor_of(principal_form(D))
    sqrt_delta = QuadNum(0, 2, 1, disc)
    c0 = anchor_of(form_of_ideal(principal_ideal(sqrt_delta)).tup())

    inv = {k: anchor_of((k[2], k[1], k[0])) for k in narrow_keys}
    if c0 == identity:
        h = h_narrow
        torsion = sum(1 for k in narrow_keys if inv[k] == k)
    else:
        partner = {k: anchor_of(compose_forms(pos_rep(k), pos_rep(c0), D))
                   for k in narrow_keys}
        seen = set()
        h = 0
        torsion = 0
        for k in narrow_keys:
            if k in seen:
                continue
            seen.add(k)
            seen.add(partner[k])
            h += 1
            if inv[k] in (k, partner[k]):
                torsion += 1
    assert torsion & (torsion - 1) == 0
    return h, h_narrow, torsion.bit_length() - 1
