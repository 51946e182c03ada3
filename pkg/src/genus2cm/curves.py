"""Genus-2 curves y^2 = f(x) over finite fields and their Jacobians.

The divisor class group is implemented through an odd-degree (quintic)
model: every sextic acquires a rational Weierstrass point over the
extension generated by one root of f, where textbook Cantor composition
and reduction apply and reduced representatives are unique.  Classes of
the original model embed injectively into the extension class group
(Lang's theorem), so equality, orders and torsion computed there are
faithful.  The public Mumford presentation (u, v) on the sextic model is
recovered by the inverse fractional-linear substitution; Frobenius acts
through the supporting points of the sextic model, which keeps it honest
even though the odd model itself is not Galois-stable.
"""

import random

import numpy as np

from .ffield import (embed, from_ints, get_context, is_square_fq, padd, pdeg,
                     pdivmod, peval, pgcd, pmod, pmonic, pmul, poly_roots,
                     pscale, psub, ptrim, sqrt_fq)


class HyperCurve:
    """y^2 = f(x) with f a separable sextic (a6 != 0) over F_q, q odd."""

    def __init__(self, f, check=True):
        f = ptrim(list(f))
        if pdeg(f) != 6:
            raise ValueError("need degree exactly 6 (quintic models rejected)")
        self.f = f
        self.ctx = f[0].ctx
        if check:
            d = pgcd(f, ptrim([c * i for i, c in enumerate(f)][1:]))
            if pdeg(d) > 0:
                raise ValueError("f is not separable")
        self._engines = {}

    @classmethod
    def from_ints(cls, ctx, coeffs, check=True):
        return cls(from_ints(ctx, coeffs), check=check)

    def coeffs(self):
        return list(self.f)

    def __eq__(self, other):
        return isinstance(other, HyperCurve) and self.ctx == other.ctx \
            and len(self.f) == len(other.f) \
            and all(a == b for a, b in zip(self.f, other.f))

    def __hash__(self):
        return hash((self.ctx._key, tuple(c.co for c in self.f)))

    def __repr__(self):
        from .ffield import pstr
        return f"HyperCurve(y^2 = {pstr(self.f, 'x')} over {self.ctx})"

    def twist(self, c=None):
        """Quadratic twist y^2 = c f(x), c a non-square (found if None)."""
        ctx = self.ctx
        if c is None:
            rng = random.Random((ctx._key, 71))
            c = ctx.one()
            while is_square_fq(c):
                c = ctx.random(rng)
        return HyperCurve(pscale(self.f, c), check=False)

    def engine(self, ctx=None):
        """Cantor engine over ctx (an extension of the root field)."""
        base = self._engines.get(None)
        if base is None:
            base = JacEngine(self)
            self._engines[None] = base
        if ctx is None or ctx == base.ext:
            return base
        key = ctx._key
        if key not in self._engines:
            self._engines[key] = base.base_change(ctx)
        return self._engines[key]

    def point_count(self):
        return count_curve(self)

    def jacobian_order(self):
        return jacobian_order(self)


# ---------------------------------------------------------------------------
# point counting

def _chi_table(p):
    t = np.full(p, -1, dtype=np.int64)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    t[sq] = 1
    t[0] = 0
    return t


def count_curve(C):
    """#C(F_q) on the smooth model: sum_x (1 + chi(f(x))) + infinity points."""
    ctx = C.ctx
    if ctx.k == 1:
        p = ctx.p
        chi = _chi_table(p)
        xs = np.arange(p, dtype=np.int64)
        vals = np.zeros(p, dtype=np.int64)
        for c in reversed(C.f):
            vals = (vals * xs + c.to_int()) % p
        n = int(p + chi[vals].sum())
    else:
        n = 0
        for x in _all_elements(ctx):
            v = peval(C.f, x)
            if v.is_zero():
                n += 1
            elif is_square_fq(v):
                n += 2
    return n + (2 if is_square_fq(C.f[6]) else 0)


def _all_elements(ctx):
    p, k = ctx.p, ctx.k
    co = [0] * k
    while True:
        yield ctx.elem(list(co))
        i = 0
        while i < k:
            co[i] += 1
            if co[i] < p:
                break
            co[i] = 0
            i += 1
        if i == k:
            return


def count_curve_ext2(C):
    """#C(F_{q^2}) for a prime-field curve, vectorized via the norm map."""
    ctx = C.ctx
    assert ctx.k == 1
    p = ctx.p
    big = get_context(p, 2)
    n0, n1 = [(-c) % p for c in big.modulus[:2]]  # alpha^2 = n0 + n1 alpha
    chi = _chi_table(p)
    total = 0
    coeffs = [c.to_int() for c in C.f]
    rows = max(1, (1 << 22) // p)
    for ustart in range(0, p, rows):
        uend = min(p, ustart + rows)
        u = np.arange(ustart, uend, dtype=np.int64)[:, None]
        v = np.arange(p, dtype=np.int64)[None, :]
        a = np.zeros((uend - ustart, p), dtype=np.int64)
        b = np.zeros_like(a)
        for c in reversed(coeffs):
            a, b = (a * u + b * v * n0 + c) % p, (a * v + b * u + b * v * n1) % p
        nrm = (a * a + n1 * a * b - n0 * b * b) % p
        total += int(chi[nrm].sum())
    total += p * p
    return total + (2 if is_square_fq(embed(C.f[6], big)) else 0)


def jacobian_order(C):
    """#Jac(C/F_q) = (N1^2 + N2)/2 - q."""
    ctx = C.ctx
    n1 = count_curve(C)
    if ctx.k == 1:
        n2 = count_curve_ext2(C)
    else:
        big = get_context(ctx.p, 2 * ctx.k)
        n2 = count_curve(HyperCurve([embed(c, big) for c in C.f], check=False))
    return (n1 * n1 + n2) // 2 - ctx.q


def frobenius_power_sums(fpi_coeffs, upto):
    """Power sums of the roots of a monic integer quartic (Newton, exact)."""
    c = list(fpi_coeffs)
    assert len(c) == 5 and c[4] == 1
    e = [1, -c[3], c[2], -c[1], c[0]]
    ps = [4]
    for k in range(1, upto + 1):
        acc = 0
        for i in range(1, min(k, 4) + 1):
            if i < k:
                acc += (-1) ** (i - 1) * e[i] * ps[k - i]
        if k <= 4:
            acc += (-1) ** (k - 1) * k * e[k]
        else:
            acc += (-1) ** 3 * e[4] * ps[k - 4]
        ps.append(acc)
    return ps


def jacobian_order_from_frobenius(fpi_coeffs, s=1):
    """#Jac(F_{p^s}) = prod (1 - alpha_i^s) from the Frobenius charpoly."""
    ps = frobenius_power_sums(fpi_coeffs, 4 * s)
    q = [4] + [ps[s * j] for j in range(1, 5)]
    E = [1]
    for j in range(1, 5):
        acc = 0
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * E[j - i] * q[i]
        assert acc % j == 0
        E.append(acc // j)
    return E[0] - E[1] + E[2] - E[3] + E[4]


# ---------------------------------------------------------------------------
# Cantor engine on the odd model

class JacEngine:
    """Cantor arithmetic on X^6 f(r + 1/X) (degree 5) over the root field."""

    def __init__(self, C, ext=None, r=None, f5=None, fext=None):
        self.C = C
        if ext is not None:
            self.ext, self.r, self.f5, self.fext = ext, r, f5, fext
            return
        ctx = C.ctx
        from .ffield import distinct_degree_factor
        degs = sorted(d for d, g in distinct_degree_factor(pmonic(C.f)))
        m = degs[0]
        self.ext = ctx if m == 1 else get_context(ctx.p, ctx.k * m)
        self.fext = [embed(c, self.ext) for c in C.f] if m > 1 else list(C.f)
        roots = poly_roots(self.fext)
        self.r = sorted(roots, key=lambda x: x.co)[0]
        shifted = _taylor_shift(self.fext, self.r)
        shifted += [self.ext.zero()] * (7 - len(shifted))
        assert shifted[0].is_zero()
        self.f5 = ptrim([shifted[6 - j] for j in range(7)])
        assert pdeg(self.f5) == 5, "quintic model degeneration"

    def base_change(self, ctx):
        assert ctx.k % self.ext.k == 0 and ctx.p == self.ext.p
        return JacEngine(self.C, ext=ctx, r=embed(self.r, ctx),
                         f5=[embed(c, ctx) for c in self.f5],
                         fext=[embed(c, ctx) for c in self.fext])

    def zero(self):
        return ([self.ext.one()], [])

    def is_zero(self, D):
        return pdeg(D[0]) == 0

    def neg(self, D):
        return (D[0], [-c for c in D[1]])

    def add(self, D1, D2):
        u1, v1 = D1
        u2, v2 = D2
        f = self.f5
        e1, a1, b1 = _poly_xgcd(u1, u2)
        if pdeg(e1) == 0:
            u3 = pmul(u1, u2)
            mid = pmul(pmul(a1, u1), psub(v2, v1))
            v3 = pmod(padd(v1, mid), u3)
        else:
            vsum = padd(v1, v2)
            d, c1, c2 = _poly_xgcd(e1, vsum)
            dd = pmul(d, d)
            u3, rem = pdivmod(pmul(u1, u2), dd)
            assert not rem
            t1 = padd(pmul(pmul(pmul(c1, a1), u1), v2),
                      pmul(pmul(pmul(c1, b1), u2), v1))
            t2 = pmul(c2, padd(pmul(v1, v2), f))
            num = padd(t1, t2)
            q, rem = pdivmod(num, d)
            assert not rem
            v3 = pmod(q, u3)
        u3 = pmonic(u3)
        while pdeg(u3) > 2:
            u3n, rem = pdivmod(psub(f, pmul(v3, v3)), u3)
            assert not rem
            u3n = pmonic(u3n)
            v3 = pmod([-c for c in v3], u3n)
            u3 = u3n
        return (u3, pmod(v3, u3))

    def scalar(self, n, D):
        if n < 0:
            return self.scalar(-n, self.neg(D))
        out = self.zero()
        base = D
        while n:
            if n & 1:
                out = self.add(out, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return out

    def eq(self, D1, D2):
        return self.key(D1) == self.key(D2)

    def key(self, D):
        return (tuple(c.co for c in D[0]), tuple(c.co for c in D[1]))

    def support_points(self, D):
        """[(X, Y), ...] with multiplicity, over ext or its quadratic extension."""
        U, V = D
        if pdeg(U) == 0:
            return []
        ctx = self.ext
        roots = poly_roots(U)
        if len(roots) < pdeg(U):
            big = get_context(ctx.p, ctx.k * 2)
            roots = poly_roots([embed(c, big) for c in U])
            V = [embed(c, big) for c in V]
        out = []
        for X0 in roots:
            Y0 = peval(V, X0) if V else X0.ctx.zero()
            out.append((X0, Y0))
        return out

    def class_from_points(self, pts):
        """Class sum of [(X_i, Y_i) - infinity] from quintic points."""
        D = self.zero()
        for (X0, Y0) in pts:
            if X0.ctx != self.ext:
                eng = self
                if X0.ctx.k % self.ext.k == 0 and X0.ctx != self.ext:
                    eng = self.base_change(X0.ctx)
                return eng.class_from_points(pts)
            D = self.add(D, ([-X0, self.ext.one()], [Y0] if Y0 else []))
        return D

    def frobenius_class(self, D, times=1):
        """Class image under the base-field Frobenius of the sextic curve.

        Acts on supporting points: quintic (X, Y) corresponds to the sextic
        point (r + 1/X, Y X^-3) when X != 0 and to a point at infinity when
        X = 0; powering the sextic coordinates and mapping back gives the
        image points on the same odd model.
        """
        q = self.C.ctx.q ** times
        pts = self.support_points(D)
        img = []
        big = None
        for (X0, Y0) in pts:
            ctx0 = X0.ctx
            if big is None or big.k < ctx0.k:
                big = ctx0
        for (X0, Y0) in pts:
            if X0.ctx != big:
                X0, Y0 = embed(X0, big), embed(Y0, big)
            rbig = embed(self.r, big) if big != self.ext else self.r
            if X0.is_zero():
                img.append((X0, Y0 ** q))
                continue
            x0 = rbig + X0.inv()
            y0 = Y0 * (X0.inv() ** 3)
            x1, y1 = x0 ** q, y0 ** q
            if x1 == rbig:
                continue  # lands on the engine infinity: trivial contribution
            X1 = (x1 - rbig).inv()
            img.append((X1, y1 * X1 ** 3))
        eng = self if big == self.ext else self.base_change(big)
        out = eng.class_from_points(img)
        # descend the reduced representative back if possible
        if big != self.ext:
            try:
                from .ffield import subfield_descend
                u = [subfield_descend(c, self.ext) for c in out[0]]
                v = [subfield_descend(c, self.ext) for c in out[1]]
                return (u, v)
            except ValueError:
                raise ArithmeticError("frobenius image did not descend")
        return out

    def to_sextic_mumford(self, D):
        """Mumford pair (u, v) on the sextic model with u | v^2 - f."""
        U, V = D
        ctx = self.ext
        r = self.r
        if pdeg(U) == 0:
            return ([ctx.one()], [])
        k = 0
        Uw = list(U)
        while Uw and Uw[0].is_zero():
            Uw = Uw[1:]
            k += 1
        d = len(Uw) - 1
        if d < 0:
            return ([ctx.one()], [])
        u = [ctx.zero()] * (d + 1)
        for i, c in enumerate(Uw):
            for t, a in enumerate(_power_shift(ctx, r, d - i)):
                u[t] = u[t] + c * a
        u = pmonic(ptrim(u))
        if pdeg(u) >= 1 and V:
            # y = Y / X^3 and X = 1/(x-r): v(x) = V0 (x-r)^3 + V1 (x-r)^2
            V0 = V[0]
            V1 = V[1] if len(V) > 1 else ctx.zero()
            num = padd(pscale(_power_shift(ctx, r, 3), V0),
                       pscale(_power_shift(ctx, r, 2), V1))
            v = pmod(num, u)
        else:
            v = []
        if pdeg(u) >= 1 and v:
            chk = pmod(psub(pmul(v, v), self.fext), u)
            assert not chk, "Mumford condition failed in back transform"
        return (u, v)


def _power_shift(ctx, r, e):
    out = [ctx.one()]
    for _ in range(e):
        out = pmul(out, [-r, ctx.one()])
    return out


def _taylor_shift(f, r):
    ctx = f[0].ctx
    out = [ctx.zero()] * len(f)
    cur = [ctx.one()]
    for c in f:
        for t, a in enumerate(cur):
            out[t] = out[t] + c * a
        cur = pmul(cur, [r, ctx.one()])
    return ptrim(out)


def _poly_xgcd(a, b):
    ctx = (a or b)[0].ctx
    r0, r1 = list(a), list(b)
    s0, s1 = [ctx.one()], []
    t0, t1 = [], [ctx.one()]
    while ptrim(list(r1)):
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
        t0, t1 = t1, psub(t0, pmul(q, t1))
    if r0:
        c = r0[-1].inv()
        r0, s0, t0 = pscale(r0, c), pscale(s0, c), pscale(t0, c)
    return r0, s0, t0


class MumfordDivisor:
    """Divisor class on Jac(C); engine representative plus field tag."""

    __slots__ = ("C", "ctx", "rep")

    def __init__(self, C, rep, ctx=None):
        self.C = C
        self.ctx = ctx or C.engine().ext
        self.rep = rep

    @classmethod
    def zero(cls, C, ctx=None):
        eng = C.engine(ctx)
        return cls(C, eng.zero(), eng.ext)

    @classmethod
    def from_sextic_points(cls, C, pts, ctx=None):
        """Class of sum (P_i - infinity average) from affine sextic points."""
        if ctx is None:
            ctx = C.engine().ext
            for (x0, _) in pts:
                if x0.ctx.k > ctx.k:
                    ctx = x0.ctx
        eng = C.engine(ctx)
        qpts = []
        for (x0, y0) in pts:
            x0 = embed(x0, ctx)
            y0 = embed(y0, ctx)
            if x0 == eng.r:
                continue  # maps to the engine infinity
            X0 = (x0 - eng.r).inv()
            qpts.append((X0, y0 * X0 ** 3))
        return cls(C, eng.class_from_points(qpts), ctx)

    def _common(self, other):
        assert self.C == other.C
        if self.ctx == other.ctx:
            return self.C.engine(self.ctx), self.rep, other.rep
        a, b = self.ctx, other.ctx
        big = a if a.k >= b.k else b
        assert big.k % a.k == 0 and big.k % b.k == 0
        eng = self.C.engine(big)
        r1 = (_embed_poly(self.rep[0], big), _embed_poly(self.rep[1], big))
        r2 = (_embed_poly(other.rep[0], big), _embed_poly(other.rep[1], big))
        return eng, r1, r2

    def __add__(self, other):
        eng, r1, r2 = self._common(other)
        return MumfordDivisor(self.C, eng.add(r1, r2), eng.ext)

    def __neg__(self):
        return MumfordDivisor(self.C, self.C.engine(self.ctx).neg(self.rep), self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        eng = self.C.engine(self.ctx)
        return MumfordDivisor(self.C, eng.scalar(int(n), self.rep), self.ctx)

    def __eq__(self, other):
        eng, r1, r2 = self._common(other)
        return eng.eq(r1, r2)

    def __hash__(self):
        eng = self.C.engine(self.ctx)
        return hash((self.C.ctx._key, eng.key(self.rep)))

    def is_zero(self):
        return self.C.engine(self.ctx).is_zero(self.rep)

    def mumford(self):
        return self.C.engine(self.ctx).to_sextic_mumford(self.rep)

    def frobenius(self, times=1):
        eng = self.C.engine(self.ctx)
        return MumfordDivisor(self.C, eng.frobenius_class(self.rep, times), self.ctx)

    def order(self, multiple):
        """Exact order given a known annihilating multiple."""
        from .exactalg import factor_trial
        n = multiple
        D = self
        assert (n * D).is_zero()
        for p, e in factor_trial(n).items():
            for _ in range(e):
                if ((n // p) * D).is_zero():
                    n //= p
                else:
                    break
        return n

    def __repr__(self):
        u, v = self.mumford()
        from .ffield import pstr
        return f"Div(u={pstr(u, 'x')}, v={pstr(v, 'x')})"


def _embed_poly(poly, ctx):
    return [embed(c, ctx) for c in poly]


def jac_add(D1, D2):
    return D1 + D2


def jac_neg(D):
    return -D


def jac_scalar_mul(n, D):
    return n * D


def random_jac_point(C, rng, ctx=None):
    """Random divisor class rational over ctx (default: the curve's field).

    Samples two affine points of the sextic model with coordinates in ctx,
    so the class [P1 + P2 - infinity pair] is ctx-rational even though the
    engine representative lives over the root extension.
    """
    ctx = ctx or C.ctx
    f = [embed(c, ctx) for c in C.f] if ctx != C.ctx else C.f
    pts = []
    while len(pts) < 2:
        x0 = ctx.random(rng)
        y0 = sqrt_fq(peval(f, x0), seed=rng.randrange(1 << 30))
        if y0 is None:
            continue
        if rng.randrange(2):
            y0 = -y0
        pts.append((x0, y0))
    return MumfordDivisor.from_sextic_points(C, pts)
