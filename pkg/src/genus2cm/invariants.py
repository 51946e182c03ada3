"""Conversions between the invariant systems of genus-2 moduli points.

Systems: Igusa-Clebsch (I2, I4, I6, I10) with weights (2, 4, 6, 10);
absolute Igusa (j1, j2, j3) = (I2^5/I10, I4 I2^3/I10, I6 I2^2/I10); Satake
power sums (s2, s3, s5, s6); Satake coordinates x1..x6 (roots of the Satake
sextic, s1 = 0 and s2^2 = 4 s4); theta fourth powers (f1^4..f4^4, g^4); and
theta tuples (f1..f4).

The linear conversions are rational formulas valid in characteristic 0 and
> 3 (char 5 goes through the cleared Satake coefficients); root extractions
(sextic roots, fourth roots) are finite-field operations that construct the
splitting extensions explicitly.
"""

from collections import namedtuple
from itertools import combinations, permutations

from .ffield import (FqElem, embed, from_ints, get_context, nth_roots, pdeg,
                     peval, pmul, poly_roots, subfield_descend)

IgusaClebsch = namedtuple("IgusaClebsch", "i2 i4 i6 i10")
AbsoluteIgusa = namedtuple("AbsoluteIgusa", "j1 j2 j3")
SatakeSums = namedtuple("SatakeSums", "s2 s3 s5 s6")


class SingularModelError(ValueError):
    """Raised for I10 = 0 (non-separable sextic / non-Jacobian point)."""


class ProductLocusError(ValueError):
    """Raised when 12 s5 - 5 s2 s3 = 0 (product-of-elliptic-curves locus)."""


class InconsistentThetaError(ValueError):
    """Raised when a theta tuple violates the Satake model identities."""


def _inv(ctx, n):
    return ctx.elem(n).inv()


# ---------------------------------------------------------------------------
# Igusa-Clebsch from a sextic

def splitting_roots(f, seed=0):
    """Roots of f over its splitting field: (roots, extension context)."""
    ctx = f[0].ctx
    from .ffield import distinct_degree_factor, squarefree_part
    sf = squarefree_part(f)
    degs = [d for d, g in distinct_degree_factor(sf) for _ in range(pdeg(g) // d)]
    m = 1
    for d in degs:
        m = m * d // __import__("math").gcd(m, d)
    if m == 1:
        return poly_roots(f, seed), ctx
    big = get_context(ctx.p, ctx.k * m)
    fbig = [embed(c, big) for c in f]
    return poly_roots(fbig, seed), big


def ic_from_sextic(f, seed=0):
    """Igusa-Clebsch invariants of y^2 = f(x), f separable of degree 6.

    Evaluates the symmetric 15-, 10- and 60-term sums over the roots in a
    splitting field; the results are descended back to the base field.
    """
    f = list(f)
    ctx = f[0].ctx
    if pdeg(f) != 6:
        raise ValueError("need a sextic (degree-5 handling out of scope)")
    a6 = f[6]
    roots, big = splitting_roots(f, seed)
    if len(set(roots)) != 6:
        raise SingularModelError("singular curve, I10 = 0")
    r = roots
    d = {}
    for i in range(6):
        for j in range(6):
            if i != j:
                d[(i, j)] = r[i] - r[j]

    def sq(i, j):
        t = d[(i, j)]
        return t * t

    # I2: 15 pair partitions
    i2 = big.zero()
    for pairing in _pair_partitions(range(6)):
        term = big.one()
        for (i, j) in pairing:
            term = term * sq(i, j)
        i2 = i2 + term
    # I4: 10 triple partitions
    i4 = big.zero()
    i6 = big.zero()
    for A, B in _triple_partitions(range(6)):
        tA = sq(A[0], A[1]) * sq(A[1], A[2]) * sq(A[2], A[0])
        tB = sq(B[0], B[1]) * sq(B[1], B[2]) * sq(B[2], B[0])
        i4 = i4 + tA * tB
        for perm in permutations(B):
            cross = sq(A[0], perm[0]) * sq(A[1], perm[1]) * sq(A[2], perm[2])
            i6 = i6 + tA * tB * cross
    i10 = big.one()
    for i in range(6):
        for j in range(i + 1, 6):
            i10 = i10 * sq(i, j)
    a6b = embed(a6, big) if big != ctx else a6
    out = (a6b ** 2 * i2, a6b ** 4 * i4, a6b ** 6 * i6, a6b ** 10 * i10)
    out = tuple(subfield_descend(x, ctx) for x in out) if big != ctx else out
    if out[3].is_zero():
        raise SingularModelError("singular curve, I10 = 0")
    return IgusaClebsch(*out)


def _pair_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first = items[0]
    for j in range(1, len(items)):
        pair = (first, items[j])
        rest = items[1:j] + items[j + 1:]
        for sub in _pair_partitions(rest):
            yield [pair] + sub


def _triple_partitions(items):
    items = list(items)
    first = items[0]
    for pairrest in combinations(items[1:], 2):
        A = (first,) + pairrest
        B = tuple(x for x in items if x not in A)
        yield A, B


# ---------------------------------------------------------------------------
# absolute Igusa <-> Igusa-Clebsch

def j_from_ic(ic):
    if ic.i10.is_zero():
        raise SingularModelError("I10 = 0")
    inv10 = ic.i10.inv()
    i2 = ic.i2
    return AbsoluteIgusa(i2 ** 5 * inv10, ic.i4 * i2 ** 3 * inv10,
                         ic.i6 * i2 ** 2 * inv10)


def ic_from_j(j):
    """Weighted-projective section: I2 = j1, I4 = j2 j1, I6 = j3 j1^2, I10 = j1^4."""
    if j.j1.is_zero():
        raise ValueError("j1 = 0 moduli unsupported (I2 = 0 locus)")
    j1 = j.j1
    return IgusaClebsch(j1, j.j2 * j1, j.j3 * j1 * j1, j1 ** 4)


# ---------------------------------------------------------------------------
# Satake power sums <-> Igusa-Clebsch

def sums_from_ic(ic):
    ctx = ic.i2.ctx
    if ctx.p <= 3:
        raise ValueError("characteristic must exceed 3")
    s2 = 3 * ic.i4
    s3 = 3 * _inv(ctx, 2) * (ic.i2 * ic.i4 - 3 * ic.i6)
    s5 = 5 * _inv(ctx, 12) * s2 * s3 + (3 ** 5 * 5) * ic.i10
    s6 = 27 * _inv(ctx, 16) * ic.i4 ** 3 + _inv(ctx, 6) * s3 * s3 \
        + (3 ** 6) * _inv(ctx, 4) * ic.i2 * ic.i10
    return SatakeSums(s2, s3, s5, s6)


def ic_from_sums(s):
    ctx = s.s2.ctx
    if ctx.p <= 3:
        raise ValueError("characteristic must exceed 3")
    den = 12 * s.s5 - 5 * s.s2 * s.s3
    if den.is_zero():
        raise ProductLocusError("12 s5 - 5 s2 s3 = 0")
    i2 = 5 * (48 * s.s6 - 3 * s.s2 ** 3 - 8 * s.s3 ** 2) * (3 * den).inv()
    i4 = _inv(ctx, 3) * s.s2
    i6 = _inv(ctx, 9) * (3 * i2 * i4 - 2 * s.s3)
    i10 = _inv(ctx, 4 * 3 ** 6 * 5 % ctx.p) * den
    return IgusaClebsch(i2, i4, i6, i10)


def satake_sextic(s, i10=None):
    """Coefficients (low->high) of the Satake sextic with roots x1..x6.

    In characteristic 5 the linear coefficient needs I10 through the
    denominator-cleared form (1/12) s2 s3 - 243 I10.
    """
    ctx = s.s2.ctx
    if ctx.p <= 3:
        raise ValueError("characteristic must exceed 3")
    s2, s3, s6 = s.s2, s.s3, s.s6
    c4 = -(_inv(ctx, 2) * s2)
    c3 = -(_inv(ctx, 3) * s3)
    c2 = _inv(ctx, 16) * s2 * s2
    if ctx.p == 5:
        if i10 is None:
            raise ValueError("characteristic 5 needs I10 for the cleared form")
        c1 = _inv(ctx, 12) * s2 * s3 - 243 * i10
    else:
        c1 = _inv(ctx, 6) * s2 * s3 - _inv(ctx, 5) * s.s5
    c0 = _inv(ctx, 96) * s2 ** 3 + _inv(ctx, 18) * s3 * s3 - _inv(ctx, 6) * s6
    return [c0, c1, c2, c3, c4, ctx.zero(), ctx.one()]


def power_sums(xs, ks=(1, 2, 3, 4, 5, 6)):
    ctx = xs[0].ctx
    out = {}
    for k in ks:
        acc = ctx.zero()
        for x in xs:
            acc = acc + x ** k
        out[k] = acc
    return out


# ---------------------------------------------------------------------------
# theta fourth powers

class ThetaFourth:
    """(f1^4, f2^4, f3^4, f4^4) with the companion g^4 and cross term.

    c = (f1 f2 f3 f4)^2 satisfies c^2 = prod f_i^4 and pins the quadratic
    P- = T^2 - (f1^4 - f2^4 + f3^4 - f4^4) T + (f1^4 f3^4 + f2^4 f4^4 - 2c)
    of which g^4 is a root.
    """

    __slots__ = ("f4", "g4", "c")

    def __init__(self, f4, g4, c, check=True):
        self.f4 = tuple(f4)
        self.g4 = g4
        self.c = c
        if check:
            prod = self.f4[0] * self.f4[1] * self.f4[2] * self.f4[3]
            if not (c * c == prod):
                raise InconsistentThetaError("c^2 != prod f_i^4")
            if not self.pminus_eval(g4).is_zero():
                raise InconsistentThetaError("g^4 is not a root of P-")

    @property
    def ctx(self):
        return self.g4.ctx

    def pminus_coeffs(self):
        u = self.f4[0] - self.f4[1] + self.f4[2] - self.f4[3]
        v = self.f4[0] * self.f4[2] + self.f4[1] * self.f4[3]
        return u, v - 2 * self.c

    def pplus_coeffs(self):
        u = self.f4[0] - self.f4[1] + self.f4[2] - self.f4[3]
        v = self.f4[0] * self.f4[2] + self.f4[1] * self.f4[3]
        return u, v + 2 * self.c

    def pminus_eval(self, t):
        u, c0 = self.pminus_coeffs()
        return t * t - u * t + c0

    def other_g4(self):
        u, _ = self.pminus_coeffs()
        return u - self.g4


def theta4_from_coords(xs, ordering=None):
    """Theta fourth powers from the six Satake coordinates.

    `ordering`, when given, is a tuple indexing xs; otherwise the
    lexicographically smallest ordering (under the coefficient encoding)
    satisfying the P- constraint is chosen, which makes the output
    deterministic.  Any ordering of a genuine coordinate set is admissible.
    """
    ctx = xs[0].ctx
    if ordering is not None:
        perms = [tuple(ordering)]
    else:
        xs = sorted(xs, key=lambda x: x.co)
        perms = permutations(range(6))
    inv3 = _inv(ctx, 3)
    for perm in perms:
        x = [xs[i] for i in perm]
        f14 = -(x[1] + x[2] + x[4]) * inv3
        f24 = -(x[2] + x[3] + x[4]) * inv3
        f34 = -(x[1] + x[2] + x[3]) * inv3
        f44 = -(x[1] + x[3] + x[4]) * inv3
        g4 = (x[0] + f14 - 2 * f24 + f34 - 2 * f44) * inv3
        # P- membership: W = (g4^2 - u g4 + v)/2 must square to prod f_i^4
        u = f14 - f24 + f34 - f44
        v = f14 * f34 + f24 * f44
        W = (g4 * g4 - u * g4 + v) * _inv(ctx, 2)
        if W * W == f14 * f24 * f34 * f44:
            return ThetaFourth((f14, f24, f34, f44), g4, W, check=False)
    raise InconsistentThetaError("no root ordering satisfies the P- constraint")


def coords_from_theta4(t4):
    """The six Satake coordinates of a ThetaFourth (model identities checked)."""
    f14, f24, f34, f44 = t4.f4
    g4 = t4.g4
    x1 = -f14 + 2 * f24 - f34 + 2 * f44 + 3 * g4
    x2 = -f14 + 2 * f24 - f34 - f44
    x3 = -f14 - f24 - f34 + 2 * f44
    x4 = 2 * f14 - f24 - f34 - f44
    x5 = -f14 - f24 + 2 * f34 - f44
    x6 = 2 * f14 - f24 + 2 * f34 - f44 - 3 * g4
    xs = [x1, x2, x3, x4, x5, x6]
    ctx = x1.ctx
    ps = power_sums(xs, (1, 2, 4))
    if not ps[1].is_zero() or not (ps[2] * ps[2] == 4 * ps[4]):
        raise InconsistentThetaError("Satake model identities fail")
    return xs


class ThetaTuple:
    """Values (f1, f2, f3, f4) of the fundamental theta quotients."""

    __slots__ = ("f",)

    def __init__(self, f):
        self.f = tuple(f)

    @property
    def ctx(self):
        return self.f[0].ctx

    def fourth(self):
        f = self.f
        prod = f[0] * f[1] * f[2] * f[3]
        c = prod * prod
        f4 = tuple(x ** 4 for x in f)
        u = f4[0] - f4[1] + f4[2] - f4[3]
        v = f4[0] * f4[2] + f4[1] * f4[3]
        # g^4 = root of P-: solve T^2 - uT + (v - 2c) = 0
        disc = u * u - 4 * (v - 2 * c)
        r = _sqrt_in_field_or_ext(disc)
        if r is None:
            raise InconsistentThetaError("P- has no root over the tuple field")
        half = _inv(self.ctx, 2)
        g4 = (u + r) * half
        return ThetaFourth(f4, g4, c)


def _sqrt_in_field_or_ext(x):
    from .ffield import sqrt_fq
    return sqrt_fq(x)


def resolve_fourth_roots(t4, seed=0):
    """A theta tuple (f1..f4) with f_i^4 the given fourth powers.

    Works in the smallest extension where all fourth roots and a primitive
    fourth root of unity exist; the product constraint (f1 f2 f3 f4)^2 = c
    selects a valid branch (flipping f1 by sqrt(-1) toggles it).
    """
    ctx = t4.ctx
    m = 1
    while True:
        big = ctx if m == 1 else get_context(ctx.p, ctx.k * m)
        if (big.q - 1) % 4 == 0:
            vals = [embed(v, big) if m > 1 else v for v in t4.f4]
            roots = [nth_roots(v, 4, seed) for v in vals]
            if all(roots):
                break
        m *= 2
        if m > 8:
            raise InconsistentThetaError("fourth roots not found in bounded tower")
    i4 = nth_roots(big.one(), 4, seed)
    imag = [r for r in i4 if r * r == -big.one()][0]
    r = [ro[0] for ro in roots]
    c = embed(t4.c, big) if m > 1 else t4.c
    prod = r[0] * r[1] * r[2] * r[3]
    if prod * prod == c:
        return ThetaTuple(r)
    r[0] = r[0] * imag
    prod = r[0] * r[1] * r[2] * r[3]
    if prod * prod == c:
        return ThetaTuple(r)
    raise InconsistentThetaError("no fourth-root branch matches the cross term")


# ---------------------------------------------------------------------------
# full descent theta -> absolute Igusa

def ic_from_theta4(t4):
    xs = coords_from_theta4(t4)
    ps = power_sums(xs, (2, 3, 5, 6))
    s = SatakeSums(ps[2], ps[3], ps[5], ps[6])
    return ic_from_sums(s)


def j_from_theta(t):
    """Absolute Igusa triple of a theta tuple or ThetaFourth.

    Well defined on the Igusa-triple level: independent of root orderings,
    of the P- root choice, and of the fourth-root branch.
    """
    t4 = t.fourth() if isinstance(t, ThetaTuple) else t
    return j_from_ic(ic_from_theta4(t4))


def theta_from_j(j, seed=0):
    """A theta tuple over an extension mapping to the given Igusa triple."""
    ic = ic_from_j(j)
    s = sums_from_ic(ic)
    sext = satake_sextic(s, i10=ic.i10)
    roots, big = splitting_roots(sext, seed)
    t4 = theta4_from_coords(roots)
    return resolve_fourth_roots(t4, seed)


def descend_j(j, target_ctx):
    """Coerce an Igusa triple into a smaller field (raises if not rational)."""
    return AbsoluteIgusa(*(subfield_descend(x, target_ctx) for x in j))
