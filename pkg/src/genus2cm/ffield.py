"""Prime fields F_p and explicit extensions F_{p^k}.

A context holds (p, k, monic irreducible modulus over F_p); elements are
coefficient tuples reduced mod p.  Contexts for the same (p, k) are built
deterministically from a seed unless an explicit modulus is prescribed
(golden test vectors fix the moduli printed in worked examples).  Embeddings
between compatible contexts are computed by root finding and cached, so all
arithmetic against a given target context is consistent.
"""

import random
from math import isqrt

from .exactalg import is_probable_prime

_context_cache = {}
_embed_cache = {}


class FqContext:
    """Finite field F_{p^k} = F_p[a]/(modulus)."""

    __slots__ = ("p", "k", "modulus", "name", "_red", "_key")

    def __init__(self, p, k, modulus=None, name="a", check=True):
        if check and not is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 not supported")
        self.p = p
        self.k = k
        if modulus is None:
            if k == 1:
                modulus = (0, 1)
            else:
                modulus = _find_irreducible(p, k)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if check and k > 1 and not _is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self.name = name
        # reduction rows: x^(k+j) mod modulus for j = 0..k-2
        red = []
        cur = [(-c) % p for c in modulus[:-1]]  # x^k
        red.append(tuple(cur))
        for _ in range(k - 2):
            cur = _shift_reduce(cur, modulus, p)
            red.append(tuple(cur))
        self._red = red
        self._key = (p, k, self.modulus)

    @property
    def q(self):
        return self.p ** self.k

    def __eq__(self, other):
        return isinstance(other, FqContext) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"F_{self.p}^{self.k}({self.name})"

    # -- element constructors ------------------------------------------------

    def zero(self):
        return FqElem(self, (0,) * self.k)

    def one(self):
        return FqElem(self, (1,) + (0,) * (self.k - 1))

    def gen(self):
        if self.k == 1:
            raise ValueError("prime field has no generator over F_p")
        c = [0] * self.k
        c[1] = 1
        return FqElem(self, tuple(c))

    def elem(self, coeffs):
        if isinstance(coeffs, int):
            return FqElem(self, (coeffs % self.p,) + (0,) * (self.k - 1))
        c = [int(x) % self.p for x in coeffs]
        c += [0] * (self.k - len(c))
        if len(c) != self.k:
            raise ValueError("coefficient vector too long")
        return FqElem(self, tuple(c))

    def random(self, rng):
        return FqElem(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    # -- raw tuple arithmetic --------------------------------------------------

    def radd(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def rsub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def rneg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def rmul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:k])
        for j in range(2 * k - 2, k - 1, -1):
            c = prod[j] % p
            if c:
                row = self._red[j - k]
                for i in range(k):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(x % p for x in out)

    def rinv(self, a):
        if all(x == 0 for x in a):
            raise ZeroDivisionError("division by zero in F_q")
        p = self.p
        if self.k == 1:
            return (pow(a[0], p - 2, p),)
        # extended euclid in F_p[x]
        r0 = list(self.modulus)
        r1 = list(a)
        s0, s1 = [0], [1]
        while any(r1):
            q, r = _fp_poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _fp_poly_sub(s0, _fp_poly_mul(q, s1, p), p)
        lead = _fp_trim(r0)
        if len(lead) != 1:
            raise ZeroDivisionError("element not invertible")
        c = pow(lead[0], p - 2, p)
        s0 = [x * c % p for x in s0]
        s0 += [0] * (self.k - len(s0))
        return tuple(s0[: self.k])

    def rpow(self, a, e):
        if e < 0:
            return self.rpow(self.rinv(a), -e)
        out = (1,) + (0,) * (self.k - 1)
        base = a
        while e:
            if e & 1:
                out = self.rmul(out, base)
            e >>= 1
            if e:
                base = self.rmul(base, base)
        return out


def _shift_reduce(row, modulus, p):
    k = len(modulus) - 1
    out = [0] + list(row[: k - 1])
    c = row[k - 1]
    if c:
        for i in range(k):
            out[i] = (out[i] - c * modulus[i]) % p
    return [x % p for x in out]


class FqElem:
    """Element of an FqContext; immutable coefficient tuple."""

    __slots__ = ("ctx", "co")

    def __init__(self, ctx, co):
        self.ctx = ctx
        self.co = co

    def __add__(self, other):
        other = self._coerce(other)
        return FqElem(self.ctx, self.ctx.radd(self.co, other.co))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FqElem(self.ctx, self.ctx.rsub(self.co, other.co))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FqElem(self.ctx, self.ctx.rneg(self.co))

    def __mul__(self, other):
        other = self._coerce(other)
        return FqElem(self.ctx, self.ctx.rmul(self.co, other.co))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return FqElem(self.ctx, self.ctx.rmul(self.co, self.ctx.rinv(other.co)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        return FqElem(self.ctx, self.ctx.rpow(self.co, int(e)))

    def inv(self):
        return FqElem(self.ctx, self.ctx.rinv(self.co))

    def frobenius(self, times=1):
        """Image under x -> x^(p^times)."""
        out = self
        for _ in range(times % self.ctx.k if self.ctx.k > 1 else 0):
            out = out ** self.ctx.p
        return out

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            if other.ctx.k == 1 and other.ctx.p == self.ctx.p:
                return self.ctx.elem(other.co[0])
            raise ValueError("elements from incompatible contexts; embed first")
        if isinstance(other, int):
            return self.ctx.elem(other)
        return NotImplemented

    def is_zero(self):
        return all(x == 0 for x in self.co)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ctx.elem(other)
        return (isinstance(other, FqElem) and self.ctx == other.ctx
                and self.co == other.co)

    def __hash__(self):
        return hash((self.ctx._key, self.co))

    def to_int(self):
        """The integer value for prime-field (or constant) elements."""
        if any(self.co[1:]):
            raise ValueError("element not in the prime field")
        return self.co[0]

    def in_prime_field(self):
        return not any(self.co[1:])

    def __repr__(self):
        n = self.ctx.name
        bits = []
        for i in range(self.ctx.k - 1, -1, -1):
            c = self.co[i]
            if not c:
                continue
            if i == 0:
                bits.append(f"{c}")
            elif i == 1:
                bits.append(f"{c}*{n}" if c != 1 else n)
            else:
                bits.append(f"{c}*{n}^{i}" if c != 1 else f"{n}^{i}")
        return " + ".join(bits) if bits else "0"


# ---------------------------------------------------------------------------
# F_p[x] helpers on plain int lists (low -> high degree)

def _fp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _fp_poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_trim(out)


def _fp_poly_sub(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out[i] = (a - b) % p
    return _fp_trim(out)


def _fp_poly_divmod(f, g, p):
    f = list(f)
    _fp_trim(f)
    g = list(g)
    _fp_trim(g)
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for i in range(len(g)):
            f[d + i] = (f[d + i] - c * g[i]) % p
        _fp_trim(f)
    return _fp_trim(q), f


def _find_irreducible(p, k, seed=0):
    rng = random.Random((p, k, seed))
    while True:
        co = [rng.randrange(p) for _ in range(k)] + [1]
        if _is_irreducible(tuple(co), p):
            return tuple(co)


def _is_irreducible(modulus, p):
    k = len(modulus) - 1
    if k == 1:
        return True
    # x^(p^k) == x mod modulus and gcd(x^(p^(k/l)) - x, modulus) = 1
    def powx(e):
        # x^(p^e) mod modulus by repeated p-th powering
        cur = [0, 1]
        for _ in range(e):
            cur = _fp_poly_powmod(cur, p, modulus, p)
        return cur

    xk = powx(k)
    if _fp_trim(_fp_poly_sub(xk, [0, 1], p)):
        return False
    for l in set(_small_prime_factors(k)):
        xe = powx(k // l)
        g = _fp_poly_gcd(_fp_poly_sub(xe, [0, 1], p), list(modulus), p)
        if len(g) != 1:
            return False
    return True


def _fp_poly_powmod(f, e, m, p):
    out = [1]
    base = _fp_poly_divmod(f, m, p)[1]
    while e:
        if e & 1:
            out = _fp_poly_divmod(_fp_poly_mul(out, base, p), m, p)[1]
        e >>= 1
        if e:
            base = _fp_poly_divmod(_fp_poly_mul(base, base, p), m, p)[1]
    return out


def _fp_poly_gcd(f, g, p):
    f, g = list(f), list(g)
    while _fp_trim(g):
        f, g = g, _fp_poly_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [x * inv % p for x in f]
    return f


def _small_prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def get_context(p, k, modulus=None, name=None):
    """Shared deterministic context for F_{p^k} (explicit modulus allowed)."""
    if modulus is not None:
        key = (p, k, tuple(c % p for c in modulus))
        if key not in _context_cache:
            _context_cache[key] = FqContext(p, k, modulus, name or "a")
        return _context_cache[key]
    key = (p, k, None)
    if key not in _context_cache:
        _context_cache[key] = FqContext(p, k, None, name or ("a" if k > 1 else "x"))
    return _context_cache[key]


# ---------------------------------------------------------------------------
# polynomials over F_q: lists of FqElem, low -> high degree

def ptrim(f):
    while f and f[-1].is_zero():
        f.pop()
    return f


def pdeg(f):
    return len(f) - 1


def padd(f, g):
    if not f and not g:
        return []
    n = max(len(f), len(g))
    ctx = (f or g)[0].ctx
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else ctx.zero()
        b = g[i] if i < len(g) else ctx.zero()
        out.append(a + b)
    return ptrim(out)


def psub(f, g):
    return padd(f, [-x for x in g])


def pmul(f, g):
    if not f or not g:
        return []
    ctx = f[0].ctx
    out = [ctx.zero()] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                if y:
                    out[i + j] = out[i + j] + x * y
    return ptrim(out)


def pscale(f, c):
    return ptrim([x * c for x in f])


def pdivmod(f, g):
    f = list(f)
    ptrim(f)
    g = list(g)
    ptrim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    ctx = g[0].ctx
    inv = g[-1].inv()
    q = [ctx.zero()] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = f[-1] * inv
        d = len(f) - len(g)
        q[d] = q[d] + c
        for i in range(len(g)):
            f[d + i] = f[d + i] - c * g[i]
        ptrim(f)
    return ptrim(q), f


def pmod(f, g):
    return pdivmod(f, g)[1]


def pgcd(f, g):
    f, g = list(f), list(g)
    while ptrim(list(g)):
        f, g = g, pdivmod(f, g)[1]
        g = list(g)
    f = list(f)
    ptrim(f)
    if f:
        f = pscale(f, f[-1].inv())
    return f


def pmonic(f):
    f = list(f)
    ptrim(f)
    if f and not (f[-1] == f[0].ctx.one()):
        f = pscale(f, f[-1].inv())
    return f


def ppowmod(f, e, m):
    ctx = m[0].ctx
    out = [ctx.one()]
    base = pmod(f, m)
    while e:
        if e & 1:
            out = pmod(pmul(out, base), m)
        e >>= 1
        if e:
            base = pmod(pmul(base, base), m)
    return out


def peval(f, x):
    ctx = x.ctx
    acc = ctx.zero()
    for c in reversed(f):
        acc = acc * x + (c if isinstance(c, FqElem) else ctx.elem(c))
    return acc


def pderiv(f):
    out = [c * i for i, c in enumerate(f)][1:]
    return ptrim(out)


def from_ints(ctx, coeffs):
    return ptrim([ctx.elem(c) for c in coeffs])


def pstr(f, var="X"):
    if not f:
        return "0"
    bits = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c.is_zero():
            continue
        cs = repr(c)
        needs_paren = "+" in cs or "*" in cs
        if i == 0:
            bits.append(f"({cs})" if needs_paren else cs)
        else:
            xs = var if i == 1 else f"{var}^{i}"
            if cs == "1":
                bits.append(xs)
            else:
                bits.append((f"({cs})" if needs_paren else cs) + "*" + xs)
    return " + ".join(bits)


# ---------------------------------------------------------------------------
# root finding and factoring (seeded equal-degree splitting)

def squarefree_part(f):
    d = pderiv(f)
    if not d:
        # f is a p-th power: reduce exponents
        ctx = f[0].ctx
        p = ctx.p
        g = []
        for i, c in enumerate(f):
            if i % p == 0:
                # c^(q/p): the p-th root in F_q
                g.append(c ** (ctx.q // p))
        return squarefree_part(ptrim(g))
    return pdivmod(f, pgcd(f, d))[0]


def poly_roots(f, seed=0):
    """All roots of f in its coefficient field, with multiplicity."""
    f = pmonic(f)
    if not f:
        raise ValueError("zero polynomial")
    ctx = f[0].ctx
    if len(f) == 1:
        return []
    # linear-factor part: gcd(x^q - x, f)
    xq = ppowmod([ctx.zero(), ctx.one()], ctx.q, f)
    lin = pgcd(psub(xq, [ctx.zero(), ctx.one()]), f)
    roots = []
    rng = random.Random((seed, ctx._key, 17))
    _split_linear(lin, roots, ctx, rng)
    roots.sort(key=lambda r: r.co)
    # multiplicities by trial division
    out = []
    for r in roots:
        g = [-r, ctx.one()]
        m = 0
        h = f
        while True:
            q, rem = pdivmod(h, g)
            if rem:
                break
            m += 1
            h = q
        out.extend([r] * m)
    return out


def _split_linear(f, acc, ctx, rng):
    f = pmonic(f)
    d = pdeg(f)
    if d <= 0:
        return
    if d == 1:
        acc.append(-f[0])
        return
    q = ctx.q
    while True:
        b = ctx.random(rng)
        # gcd((x+b)^((q-1)/2) - 1, f)
        g = ppowmod([b, ctx.one()], (q - 1) // 2, f)
        g = psub(g, [ctx.one()])
        h = pgcd(g, f)
        if 0 < pdeg(h) < d:
            _split_linear(h, acc, ctx, rng)
            _split_linear(pdivmod(f, h)[0], acc, ctx, rng)
            return


def distinct_degree_factor(f):
    """[(degree d, product of irreducible factors of degree d)] for squarefree monic f."""
    f = pmonic(f)
    ctx = f[0].ctx
    out = []
    h = [ctx.zero(), ctx.one()]
    x = [ctx.zero(), ctx.one()]
    d = 0
    while pdeg(f) > 0:
        d += 1
        if 2 * d > pdeg(f):
            out.append((pdeg(f), f))
            break
        h = ppowmod(h, ctx.q, f)
        g = pgcd(psub(h, x), f)
        if pdeg(g) > 0:
            out.append((d, g))
            f = pdivmod(f, g)[0]
            h = pmod(h, f)
    return out


def equal_degree_factor(f, d, seed=0):
    """Split a product of degree-d irreducibles (Cantor-Zassenhaus)."""
    ctx = f[0].ctx
    out = []
    rng = random.Random((seed, ctx._key, d, pdeg(f)))

    def rec(g):
        if pdeg(g) == d:
            out.append(pmonic(g))
            return
        qd = ctx.q ** d
        while True:
            b = [ctx.random(rng) for _ in range(pdeg(g))] + [ctx.one()]
            h = ppowmod(b, (qd - 1) // 2, g)
            h = psub(h, [ctx.one()])
            w = pgcd(h, g)
            if 0 < pdeg(w) < pdeg(g):
                rec(w)
                rec(pdivmod(g, w)[0])
                return

    rec(pmonic(f))
    out.sort(key=lambda h: tuple(c.co for c in h))
    return out


def factor_poly(f, seed=0):
    """Full factorization of monic f into irreducibles [(g, multiplicity)]."""
    f = pmonic(f)
    ctx = f[0].ctx
    factors = {}
    rem = f
    while pdeg(rem) > 0:
        sf = squarefree_part(rem)
        for d, g in distinct_degree_factor(sf):
            for h in (equal_degree_factor(g, d, seed) if pdeg(g) > d else [g]):
                m = 0
                while True:
                    q, r = pdivmod(rem, h)
                    if r:
                        break
                    rem = q
                    m += 1
                key = tuple(c.co for c in h)
                factors[key] = (h, factors.get(key, (h, 0))[1] + m)
    out = sorted(factors.values(), key=lambda t: (pdeg(t[0]), tuple(c.co for c in t[0])))
    return out


def nth_roots(c, n, seed=0):
    """All solutions of x^n = c in the field of c (possibly empty)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ctx = c.ctx
    if c.is_zero():
        return [ctx.zero()]
    f = [-c] + [ctx.zero()] * (n - 1) + [ctx.one()]
    return sorted(set(poly_roots(f, seed)), key=lambda r: r.co)


def sqrt_fq(c, seed=0):
    r = nth_roots(c, 2, seed)
    return r[0] if r else None


def is_square_fq(c):
    if c.is_zero():
        return True
    q = c.ctx.q
    return (c ** ((q - 1) // 2)) == c.ctx.one()


# ---------------------------------------------------------------------------
# towers

def embed(a, target):
    """Field embedding of a into the target context (fixing F_p)."""
    src = a.ctx
    if src == target:
        return a
    if src.p != target.p:
        raise ValueError("different characteristics")
    if target.k % src.k != 0:
        raise ValueError(f"no embedding F_{src.p}^{src.k} -> F_{target.p}^{target.k}")
    if src.k == 1:
        return target.elem(a.co[0])
    key = (src._key, target._key)
    img = _embed_cache.get(key)
    if img is None:
        mod = from_ints(target, src.modulus)
        roots = poly_roots(mod, seed=0)
        if not roots:
            raise ValueError("embedding root not found")
        img = roots[0]  # smallest root under the coefficient encoding
        _embed_cache[key] = img
    # evaluate a's coefficient polynomial at img
    acc = target.zero()
    for c in reversed(a.co):
        acc = acc * img + target.elem(c)
    return acc


def minimal_poly(a):
    """Monic minimal polynomial of a over F_p, as an int list (low -> high)."""
    ctx = a.ctx
    p, k = ctx.p, ctx.k
    # find the least d with a linear dependency among 1, a, ..., a^d
    pows = [ctx.one()]
    for _ in range(k):
        pows.append(pows[-1] * a)
    for d in range(1, k + 1):
        # solve sum_{i<d} c_i a^i = -a^d over F_p
        rows = [[pows[i].co[j] for i in range(d)] for j in range(k)]
        rhs = [(-pows[d].co[j]) % p for j in range(k)]
        sol = _fp_solve(rows, rhs, p)
        if sol is not None:
            return sol + [1]
    raise ArithmeticError("no minimal polynomial found")


def _fp_solve(rows, rhs, p):
    n = len(rows)
    m = len(rows[0]) if rows else 0
    A = [list(map(int, row)) + [int(b)] for row, b in zip(rows, rhs)]
    r = 0
    piv = []
    for c in range(m):
        pr = None
        for i in range(r, n):
            if A[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    for i in range(r, n):
        if A[i][m] % p:
            return None
    sol = [0] * m
    for i, c in enumerate(piv):
        sol[c] = A[i][m]
    return sol


def subfield_descend(a, target):
    """Express a in a smaller context when it lies in that subfield."""
    src = a.ctx
    if src == target:
        return a
    if target.k == 1:
        return target.elem(a.to_int())
    if src.k % target.k != 0:
        raise ValueError("not a subfield")
    # a lies in the image of embed(target -> src); invert on the basis
    gen_img = embed(target.gen(), src)
    pows = [src.one()]
    for _ in range(target.k - 1):
        pows.append(pows[-1] * gen_img)
    rows = [[pows[i].co[j] for i in range(target.k)] for j in range(src.k)]
    rhs = list(a.co)
    sol = _fp_solve(rows, rhs, src.p)
    if sol is None:
        raise ValueError("element does not descend to the subfield")
    return target.elem(sol)
