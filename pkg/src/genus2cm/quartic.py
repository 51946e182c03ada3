"""Primitive quartic CM fields K = Q[X]/(X^4 + a X^2 + b).

Elements live over the power basis (1, theta, theta^2, theta^3) with exact
rational coordinates; complex conjugation is theta -> -theta.  The maximal
order is computed by p-radical idealizer refinement at the primes whose
square divides the polynomial discriminant.  Ideals are full-rank lattices
in Hermite normal form with respect to the integral basis.

Principality testing enumerates short vectors of the trace form
Tr(x conj(y)) up to a bound modulated by the fundamental unit of the real
quadratic subfield; exhausting the bound proves non-principality, and a
configurable effort cap raises Inconclusive instead of guessing.
"""

import random
from fractions import Fraction
from math import ceil, gcd, isqrt, sqrt

from .exactalg import (MultiPoly, factor_trial, hnf, is_probable_prime,
                       is_square, lll_reduce, mat_det, mat_inv,
                       poly_resultant, rank_and_rref, rat_kernel_basis,
                       solve_exact)
from .ffield import factor_poly, from_ints, get_context, pdeg
from .realquad import RealQuadData


class InconclusiveError(RuntimeError):
    """Bounded search exhausted without an answer; never a silent guess."""


def _sqfree_decompose(n):
    """n = s * f^2 with s squarefree; returns (s, f)."""
    s, f = 1, 1
    for p, e in factor_trial(abs(n)).items():
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    if n < 0:
        s = -s
    return s, f


class CMField:
    """Primitive quartic CM field defined by X^4 + a X^2 + b."""

    def __init__(self, a, b):
        a, b = int(a), int(b)
        if a <= 0 or b <= 0 or a * a - 4 * b <= 0:
            raise ValueError("need a > 0, b > 0, a^2 - 4b > 0 (CM signature)")
        if is_square(a * a - 4 * b):
            raise ValueError("X^4 + aX^2 + b is reducible")
        if is_square(b):
            raise ValueError("b is a square: biquadratic (non-primitive) or reducible")
        self.a, self.b = a, b
        self.galois_type = "cyclic" if is_square(b * (a * a - 4 * b)) else "dihedral"
        # reduction rows for theta^4, theta^5, theta^6 over the power basis
        self._theta_pows = ((-b, 0, -a, 0),
                            (0, -b, 0, -a),
                            (a * b, 0, a * a - b, 0))
        d0 = _sqfree_decompose(a * a - 4 * b)[0]
        self.D0 = d0 if d0 % 4 == 1 else 4 * d0
        self.real = RealQuadData(self.D0)
        self._build_maximal_order()
        self._sigma = None
        self._cache = {}

    # -- elements -----------------------------------------------------------

    def elem(self, coords):
        co = [Fraction(c) for c in coords]
        co += [Fraction(0)] * (4 - len(co))
        return KElem(self, tuple(co[:4]))

    def zero(self):
        return self.elem([0])

    def one(self):
        return self.elem([1])

    def theta(self):
        return self.elem([0, 1])

    def sqrt_core(self):
        """sqrt(a^2 - 4b) = 2 theta^2 + a, an element of K+ inside K."""
        return self.elem([self.a, 0, 2, 0])

    def from_integral_coords(self, v):
        co = [Fraction(0)] * 4
        for i, c in enumerate(v):
            if c:
                for j in range(4):
                    co[j] += Fraction(c) * self.wb[i][j]
        return KElem(self, tuple(co))

    def fundamental_unit(self):
        """Fundamental unit of O_{K+} as an element of K."""
        s, t = self.real.unit_s, self.real.unit_t
        core, f = _sqfree_decompose(self.a * self.a - 4 * self.b)
        if self.D0 % 4 == 1:
            sq = self.sqrt_core() * Fraction(1, f)     # sqrt(D0) = sqrt(core)
        else:
            sq = self.sqrt_core() * Fraction(2, f)     # sqrt(D0) = 2 sqrt(core)
        return (self.one() * s + sq * t) * Fraction(1, 2)

    # -- maximal order --------------------------------------------------------

    def _build_maximal_order(self):
        a, b = self.a, self.b
        polydisc = 16 * b * (a * a - 4 * b) ** 2
        den = 1
        M = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
        for p, e in sorted(factor_trial(polydisc).items()):
            if e < 2:
                continue
            while True:
                newden, newM = _p_enlarge(self, den, M, p)
                if (newden, newM) == (den, M):
                    break
                den, M = newden, newM
        self.order_den = den
        self.order_mat = M
        self.wb = [tuple(Fraction(M[i][j], den) for j in range(4)) for i in range(4)]
        self._winv = mat_inv([[self.wb[i][j] for j in range(4)] for i in range(4)])
        disc = mat_det([[(self.elem(self.wb[i]) * self.elem(self.wb[j])).trace()
                         for j in range(4)] for i in range(4)])
        assert disc.denominator == 1
        self.disc = int(disc)
        assert self.disc % (self.D0 * self.D0) == 0, "discriminant not D1*D0^2"
        self.D1 = self.disc // (self.D0 * self.D0)
        self.polydisc = polydisc
        self.index = isqrt(polydisc // self.disc)
        assert self.index ** 2 * self.disc == polydisc, "index bookkeeping failed"
        self.mult_table = []
        for i in range(4):
            row = []
            for j in range(4):
                prod = self.elem(self.wb[i]) * self.elem(self.wb[j])
                co = self.to_integral_coords(prod)
                assert all(c.denominator == 1 for c in co), "order not closed"
                row.append(tuple(int(x) for x in co))
            self.mult_table.append(row)

    def to_integral_coords(self, x):
        return tuple(sum(x.co[j] * self._winv[j][i] for j in range(4))
                     for i in range(4))

    def is_integral(self, x):
        return all(c.denominator == 1 for c in self.to_integral_coords(x))

    def __repr__(self):
        return f"CMField(X^4 + {self.a}X^2 + {self.b}, {self.galois_type})"

    def __eq__(self, other):
        return isinstance(other, CMField) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    # -- cyclic automorphism --------------------------------------------------

    def cyclic_sigma(self):
        """Power-basis matrix of a generator of Gal(K/Q), for cyclic K.

        sigma(theta) = x theta + y theta^3 must satisfy sigma(theta)^2 =
        -a - theta^2 (the other pair of roots); eliminating x by a resultant
        leaves a polynomial with a rational root y.
        """
        if self.galois_type != "cyclic":
            raise ValueError("field is not cyclic")
        if self._sigma is not None:
            return self._sigma
        a = self.a
        X = MultiPoly.variable(2, 0)
        Y = MultiPoly.variable(2, 1)
        one = MultiPoly.constant(2, 1)
        t4, _, t6 = self._theta_pows
        # eta = x theta + y theta^3; eta^2 = x^2 th^2 + 2xy th^4 + y^2 th^6
        coords = [MultiPoly(2) for _ in range(4)]
        coords[2] = coords[2] + X * X
        for k in range(4):
            if t4[k]:
                coords[k] = coords[k] + 2 * t4[k] * X * Y
            if t6[k]:
                coords[k] = coords[k] + t6[k] * Y * Y
        c2 = coords[2] + one          # coeff of theta^2 must be -1
        c0 = coords[0] + a * one      # constant must be -a
        res = poly_resultant(c2, c0, 0)
        for y0 in _rational_roots(res, var=1):
            if y0 == 0:
                continue
            for x0 in _solve_x_candidates(c0, y0):
                if _poly2_eval(c2, x0, y0) == 0:
                    self._sigma = _sigma_matrix(self, x0, y0)
                    return self._sigma
        raise ArithmeticError("automorphism not found (non-cyclic misclassification)")

    def apply_matrix(self, mat, x):
        co = [sum(mat[i][j] * x.co[i] for i in range(4)) for j in range(4)]
        return KElem(self, tuple(Fraction(c) for c in co))


def _poly2_eval(p, x0, y0):
    return sum(c * x0 ** e[0] * y0 ** e[1] for e, c in p.terms.items())


def _rational_roots(poly1var, var):
    """Rational roots of a MultiPoly involving only variable index var."""
    coeffs = {}
    deg = 0
    for e, c in poly1var.terms.items():
        k = e[var]
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        deg = max(deg, k)
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ic = {k: int(c * den) for k, c in coeffs.items() if c}
    if not ic:
        return []
    deg = max(ic)
    roots = set()
    low = min(ic)
    if low > 0:
        roots.add(Fraction(0))
        ic = {k - low: v for k, v in ic.items()}
        deg -= low
    lead, cons = ic.get(deg, 0), ic.get(0, 0)
    for pnum in _divisors(abs(cons)):
        for qden in _divisors(abs(lead)):
            for s in (1, -1):
                cand = Fraction(s * pnum, qden)
                if sum(c * cand ** k for k, c in ic.items()) == 0:
                    roots.add(cand)
    return sorted(roots)


def _divisors(n):
    if n == 0:
        return []
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _solve_x_candidates(c0, y0):
    """x with c0(x, y0) = 0; c0 is at most quadratic in x."""
    qa = qb = qc = Fraction(0)
    for e, c in c0.terms.items():
        val = c * y0 ** e[1]
        if e[0] == 2:
            qa += val
        elif e[0] == 1:
            qb += val
        else:
            qc += val
    if qa == 0:
        return [] if qb == 0 else [-qc / qb]
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return []
    num = disc.numerator * disc.denominator
    r = isqrt(num)
    if r * r != num:
        return []
    sq = Fraction(r, disc.denominator)
    return [(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)]


def _sigma_matrix(K, x0, y0):
    eta = K.elem([0, x0, 0, y0])
    rows = [K.one(), eta, eta * eta, eta * eta * eta]
    mat = [list(r.co) for r in rows]
    th = K.theta()
    img = K.apply_matrix(mat, th)
    assert (img ** 4 + img * img * K.a + K.elem([K.b])).is_zero()
    assert K.apply_matrix(mat, img) == -th, "sigma^2 should be conjugation"
    return mat


# ---------------------------------------------------------------------------
# round-2 at a prime

def _p_enlarge(K, den, M, p):
    """One idealizer step at p on the order with basis rows M / den."""
    basis = [K.elem([Fraction(M[i][j], den) for j in range(4)]) for i in range(4)]
    B = [[Fraction(M[i][j], den) for j in range(4)] for i in range(4)]
    Binv = mat_inv(B)

    def coords(x):
        return [sum(x.co[j] * Binv[j][i] for j in range(4)) for i in range(4)]

    m = 1
    while p ** m < 4:
        m += 1
    F = []
    for bi in basis:
        y = bi ** (p ** m)
        co = coords(y)
        assert all(c.denominator == 1 for c in co)
        F.append([int(c) % p for c in co])
    rad = _fp_kernel(F, p)
    rows = [[p if i == j else 0 for j in range(4)] for i in range(4)]
    rows += [[int(c) for c in v] for v in rad]
    H = hnf(rows)
    detH = 1
    for i in range(4):
        detH *= H[i][i]
    r = 0
    dd = detH
    while dd % p == 0:
        dd //= p
        r += 1
    Hadj = _int_adjugate(H)
    mod = p ** (r + 1)
    # y in O (coords over `basis`) with y * g_i in p*I_p for all I_p basis g_i
    conds = []
    for i in range(4):
        g = K.zero()
        for j in range(4):
            if H[i][j]:
                g = g + basis[j] * H[i][j]
        Mg = []
        for j in range(4):
            co = coords(basis[j] * g)
            assert all(c.denominator == 1 for c in co)
            Mg.append([int(c) for c in co])
        conds.append([[sum(Mg[j][t] * Hadj[t][s] for t in range(4)) for s in range(4)]
                      for j in range(4)])
    stacked = [sum((C[j] for C in conds), []) for j in range(4)]
    lat = _int_kernel_mod_rect(stacked, mod)
    rows2 = [[p * M[i][j] for j in range(4)] for i in range(4)]
    for v in lat:
        acc = [0] * 4
        for j in range(4):
            if v[j]:
                for t in range(4):
                    acc[t] += v[j] * M[j][t]
        rows2.append(acc)
    H2 = hnf(rows2)
    big_den = den * p
    g = big_den
    for row in H2:
        for x in row:
            g = gcd(g, abs(x))
    if g > 1:
        H2 = [[x // g for x in row] for row in H2]
        big_den //= g
    return big_den, H2


def _fp_kernel(rows, p):
    """Kernel of v -> v*rows over F_p (rows: n x m)."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    A = [[rows[i][j] % p for j in range(m)] + [1 if k == i else 0 for k in range(n)]
         for i in range(n)]
    r = 0
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
        r += 1
    return [[A[i][m + k] % p for k in range(n)] for i in range(r, n)]


def _int_adjugate(H):
    d = mat_det(H)
    Hi = mat_inv(H)
    return [[int(x * d) for x in row] for row in Hi]


def _int_kernel_mod_rect(rows, mod):
    """Basis of {y in Z^n : y*rows == 0 mod `mod`} (includes mod*Z^n)."""
    n = len(rows)
    m = len(rows[0])
    big = []
    for i in range(n):
        big.append([x % mod for x in rows[i]] + [1 if k == i else 0 for k in range(n)])
    for j in range(m):
        big.append([mod if t == j else 0 for t in range(m)] + [0] * n)
    H = hnf(big)
    out = []
    for row in H:
        if all(x % mod == 0 for x in row[:m]) and any(row[m:]):
            out.append(list(row[m:]))
    out.extend([[mod if k == i else 0 for k in range(n)] for i in range(n)])
    return out


class KElem:
    """Element of a quartic CM field over the power basis."""

    __slots__ = ("K", "co")

    def __init__(self, K, co):
        self.K = K
        self.co = co

    def __add__(self, other):
        other = self._coerce(other)
        return KElem(self.K, tuple(x + y for x, y in zip(self.co, other.co)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return KElem(self.K, tuple(x - y for x, y in zip(self.co, other.co)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return KElem(self.K, tuple(-x for x in self.co))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return KElem(self.K, tuple(x * other for x in self.co))
        other = self._coerce(other)
        a, b = self.co, other.co
        prod = [Fraction(0)] * 7
        for i in range(4):
            if a[i]:
                for j in range(4):
                    if b[j]:
                        prod[i + j] += a[i] * b[j]
        out = list(prod[:4])
        for k in range(4, 7):
            c = prod[k]
            if c:
                row = self.K._theta_pows[k - 4]
                for t in range(4):
                    if row[t]:
                        out[t] += c * row[t]
        return KElem(self.K, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return KElem(self.K, tuple(x / Fraction(other) for x in self.co))
        return self * self._coerce(other).inv()

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inv() ** (-e)
        out = self.K.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def _coerce(self, other):
        if isinstance(other, KElem):
            return other
        if isinstance(other, (int, Fraction)):
            return self.K.elem([other])
        return NotImplemented

    def conj(self):
        c = self.co
        return KElem(self.K, (c[0], -c[1], c[2], -c[3]))

    def mult_matrix(self):
        rows = []
        for i in range(4):
            e = [Fraction(0)] * 4
            e[i] = Fraction(1)
            rows.append((self * KElem(self.K, tuple(e))).co)
        return [list(r) for r in rows]

    def trace(self):
        a = self.K.a
        # Tr(theta^0..3) = (4, 0, -2a, 0)
        return 4 * self.co[0] - 2 * a * self.co[2]

    def norm(self):
        return mat_det(self.mult_matrix())

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError
        m = self.mult_matrix()
        sol = solve_exact([[m[i][j] for i in range(4)] for j in range(4)],
                          [1, 0, 0, 0])
        return KElem(self.K, tuple(sol))

    def is_zero(self):
        return all(x == 0 for x in self.co)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.K.elem([other])
        return isinstance(other, KElem) and self.co == other.co

    def __hash__(self):
        return hash(self.co)

    def is_rational(self):
        return not any(self.co[1:])

    def in_real_subfield(self):
        return self.co[1] == 0 and self.co[3] == 0

    def is_totally_positive(self):
        """Total positivity, for elements of the real subfield K+."""
        if not self.in_real_subfield():
            raise ValueError("not in the real quadratic subfield")
        u, v = self.co[0], self.co[2]
        core = self.K.a * self.K.a - 4 * self.K.b
        # x = u + v theta^2, theta^2 = (-a +- sqrt(core))/2
        A = 2 * u - self.K.a * v
        if A <= 0:
            return False
        return A * A > v * v * core

    def t2(self):
        """Tr(x * conj(x)): the positive definite size form."""
        return (self * self.conj()).trace()

    def min_poly(self):
        """Monic minimal polynomial over Q (integer list, low -> high)."""
        pows = [self.K.one()]
        for _ in range(4):
            pows.append(pows[-1] * self)
        for d in (1, 2, 4):
            M = [[pows[i].co[j] for i in range(d + 1)] for j in range(4)]
            ker = rat_kernel_basis(M)
            for v in ker:
                if v[d] != 0:
                    if all(x % v[d] == 0 for x in v):
                        return [x // v[d] for x in v]
        raise ArithmeticError("no minimal polynomial found")

    def __repr__(self):
        bits = []
        for i in range(3, -1, -1):
            c = self.co[i]
            if c == 0:
                continue
            if i == 0:
                bits.append(f"{c}")
            else:
                mono = "t" if i == 1 else f"t^{i}"
                bits.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(bits) if bits else "0"


class KIdeal:
    """Fractional O_K-ideal: integer HNF basis over the integral basis / den."""

    __slots__ = ("K", "M", "den")

    def __init__(self, K, M, den=1):
        g = den
        for row in M:
            for x in row:
                g = gcd(g, abs(x))
        if g > 1:
            M = [[x // g for x in row] for row in M]
            den //= g
        self.K = K
        self.M = tuple(tuple(row) for row in M)
        self.den = den

    @classmethod
    def from_generators(cls, K, gens, module_gens=None):
        """Ideal generated over O_K by `gens` (plus plain lattice generators)."""
        coords = []
        den = 1
        for g in gens:
            for i in range(4):
                wi = K.from_integral_coords([1 if t == i else 0 for t in range(4)])
                co = K.to_integral_coords(g * wi)
                coords.append(co)
                for c in co:
                    den = den * c.denominator // gcd(den, c.denominator)
        for g in module_gens or []:
            co = K.to_integral_coords(g)
            coords.append(co)
            for c in co:
                den = den * c.denominator // gcd(den, c.denominator)
        rows = [[int(c * den) for c in co] for co in coords]
        H = hnf(rows)
        if len(H) < 4:
            raise ValueError("ideal not of full rank")
        return cls(K, H, den)

    @classmethod
    def principal(cls, K, g):
        return cls.from_generators(K, [g])

    @classmethod
    def unit_ideal(cls, K):
        return cls(K, [[1 if i == j else 0 for j in range(4)] for i in range(4)], 1)

    def basis_elements(self):
        return [self.K.from_integral_coords(row) * Fraction(1, self.den)
                for row in self.M]

    def norm(self):
        d = 1
        for i in range(4):
            d *= self.M[i][i]
        return Fraction(abs(d), self.den ** 4)

    def __mul__(self, other):
        if isinstance(other, KIdeal):
            bs, bo = self.basis_elements(), other.basis_elements()
            return KIdeal.from_generators(
                self.K, [], module_gens=[x * y for x in bs for y in bo])
        return KIdeal.from_generators(
            self.K, [], module_gens=[b * other for b in self.basis_elements()])

    def __pow__(self, e):
        e = int(e)
        if e == 0:
            return KIdeal.unit_ideal(self.K)
        if e < 0:
            return self.inverse() ** (-e)
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def conj(self):
        return KIdeal.from_generators(
            self.K, [], module_gens=[b.conj() for b in self.basis_elements()])

    def scale(self, c):
        """The ideal c * self for rational c."""
        c = Fraction(c)
        M = [[x * c.numerator for x in row] for row in self.M]
        return KIdeal(self.K, M, self.den * c.denominator)

    def __eq__(self, other):
        return (isinstance(other, KIdeal) and self.K == other.K
                and self.den == other.den and self.M == other.M)

    def __hash__(self):
        return hash((self.K.a, self.K.b, self.den, self.M))

    def contains(self, x):
        v = [c * self.den for c in self.K.to_integral_coords(x)]
        sol = solve_exact([[Fraction(self.M[i][j]) for i in range(4)] for j in range(4)], v)
        return sol is not None and all(s.denominator == 1 for s in sol)

    def is_integral(self):
        return self.den == 1

    def inverse(self):
        """Fractional inverse {x : x * self subset O_K} (cached per field)."""
        K = self.K
        cache = K._cache.setdefault("ideal_inverse", {})
        ckey = (self.M, self.den)
        if ckey in cache:
            return cache[ckey]
        # integral model J = den * self, then self^-1 = den * J^-1
        J = KIdeal(K, [list(r) for r in self.M], 1)
        NJ = int(J.norm())
        bs = J.basis_elements()
        # x = (1/NJ) sum y_i w_i lies in J^-1 iff sum y_i coords(w_i b_j) = 0
        # mod NJ for every basis element b_j (the coords are integers since
        # J is integral)
        stacked = []
        for i in range(4):
            row = []
            wi = K.from_integral_coords([1 if t == i else 0 for t in range(4)])
            for bj in bs:
                co = K.to_integral_coords(wi * bj)
                for c in co:
                    assert c.denominator == 1
                    row.append(int(c))
            stacked.append(row)
        lat = _int_kernel_mod_rect(stacked, NJ)
        H = hnf(lat)
        inv_J = KIdeal(K, H, NJ)
        out = inv_J.scale(self.den)
        cache[ckey] = out
        return out

    def divide(self, other):
        return self * other.inverse()

    def valuation(self, P):
        v = 0
        Pinv = P.inverse()
        cur = self
        while True:
            nxt = cur * Pinv
            if not nxt.is_integral():
                return v
            v += 1
            cur = nxt
            if v > 64:
                raise ArithmeticError("valuation runaway")

    def __repr__(self):
        return f"KIdeal(norm={self.norm()})"


def build_cm_field(a, b):
    return CMField(a, b)


# ---------------------------------------------------------------------------
# factoring rational primes

def factor_rational_prime(K, l):
    """Factor (l) O_K into primes: list of (P, e, f) with sum e*f = 4."""
    if not is_probable_prime(l):
        raise ValueError("l must be prime")
    if K.index % l:
        if l == 2:
            factors = _factor_quartic_mod2(K.a, K.b)
        else:
            F = get_context(l, 1)
            fx = from_ints(F, [K.b, 0, K.a, 0, 1])
            factors = [([c.to_int() for c in g], e) for g, e in factor_poly(fx)]
        out = []
        for gco, e in factors:
            ge = K.zero()
            th = K.theta()
            for i, c in enumerate(gco):
                ge = ge + th ** i * int(c)
            P = KIdeal.from_generators(K, [K.elem([l]), ge])
            out.append((P, e, len(gco) - 1))
    else:
        out = _factor_via_order(K, l)
    out.sort(key=lambda t: (t[2], t[0].M))
    assert sum(e * f for _, e, f in out) == 4, "ramification bookkeeping failed"
    return out


def _factor_quartic_mod2(a, b):
    """Brute-force factorization of X^4 + aX^2 + b over F_2."""
    f = [b & 1, 0, a & 1, 0, 1]

    def mul2(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    out[i + j] ^= y
        while out and not out[-1]:
            out.pop()
        return out

    def divmod2(u, v):
        u = list(u)
        q = [0] * max(0, len(u) - len(v) + 1)
        while len(u) >= len(v) and any(u):
            if not u[-1]:
                u.pop()
                continue
            d = len(u) - len(v)
            q[d] = 1
            for i in range(len(v)):
                u[d + i] ^= v[i]
            while u and not u[-1]:
                u.pop()
        return q, u

    irreducibles = [[0, 1], [1, 1], [1, 1, 1],
                    [1, 1, 0, 1], [1, 0, 1, 1],
                    [1, 1, 0, 0, 1], [1, 0, 0, 1, 1], [1, 1, 1, 1, 1]]
    out = []
    rem = list(f)
    for g in irreducibles:
        e = 0
        while len(rem) >= len(g):
            q, r = divmod2(rem, g)
            if any(r):
                break
            rem = q
            e += 1
        if e:
            out.append((g, e))
    assert len(rem) == 1, "mod-2 factorization incomplete"
    return out


def _b_ops(K, l):
    """Multiplication and structure helpers for B = O_K / l O_K."""
    table = K.mult_table

    def bmul(u, v):
        out = [0, 0, 0, 0]
        for i in range(4):
            if u[i]:
                for j in range(4):
                    if v[j]:
                        c = u[i] * v[j]
                        row = table[i][j]
                        for t in range(4):
                            out[t] += c * row[t]
        return [x % l for x in out]

    one = [int(c) % l for c in K.to_integral_coords(K.one())]

    def bpow(u, e):
        out = one
        base = u
        while e:
            if e & 1:
                out = bmul(out, base)
            e >>= 1
            if e:
                base = bmul(base, base)
        return out

    return bmul, bpow, one


def _rref_info(rows, l):
    """RREF a list of F_l vectors; returns (basis rows, pivot cols)."""
    A = [list(r) for r in rows]
    n = len(A)
    m = len(A[0]) if A else 0
    r = 0
    piv = []
    for c in range(m):
        pr = None
        for i in range(r, n):
            if A[i][c] % l:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], l - 2, l)
        A[r] = [x * inv % l for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] % l:
                f = A[i][c]
                A[i] = [(x - f * y) % l for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    return A[:r], piv


def _reduce_mod_subspace(v, basis, piv, l):
    v = list(v)
    for row, c in zip(basis, piv):
        if v[c] % l:
            f = v[c]
            v = [(x - f * y) % l for x, y in zip(v, row)]
    return v


def _factor_via_order(K, l):
    """Factor (l) when l divides the index.

    Computes the radical of B = O/lO, then splits the etale quotient into
    field components by recursive refinement of orthogonal idempotents
    (a random Frobenius-fixed element can separate at most l components per
    round, so refinement iterates until every component is a field).
    """
    bmul, bpow, bone = _b_ops(K, l)
    m = 1
    while l ** m < 4:
        m += 1
    F = [bpow(_unit4(i), l ** m) for i in range(4)]
    rad = _fp_kernel(F, l)
    radbasis, radpiv = _rref_info(rad, l) if rad else ([], [])

    def red(v):
        return _reduce_mod_subspace(v, radbasis, radpiv, l)

    # Frobenius-fixed subspace mod radical: x^l - x in rad
    rows = []
    for i in range(4):
        x = bpow(_unit4(i), l)
        x = [(x[t] - (1 if t == i else 0)) % l for t in range(4)]
        rows.append(red(x))
    fixed = _fp_kernel(rows, l)

    def fixed_rank_in(e):
        vecs = [red(bmul(e, v)) for v in fixed]
        basis, _ = _rref_info([v for v in vecs if any(v)], l) if vecs else ([], [])
        return len(basis)

    def is_field_component(e):
        return fixed_rank_in(e) == 1

    rng = random.Random((K.a, K.b, l, 23))
    components = [bone]
    for _ in range(600):
        if all(is_field_component(e) for e in components):
            break
        nxt = []
        # random Frobenius-fixed element used to eigen-split every component
        z = [0, 0, 0, 0]
        for v in fixed:
            c = rng.randrange(l)
            if c:
                z = [(z[t] + c * v[t]) % l for t in range(4)]
        for e in components:
            if is_field_component(e):
                nxt.append(e)
                continue
            w = bmul(e, z)
            # minimal polynomial of w in the component eB (identity e), mod rad
            pows = [e]
            for _ in range(4):
                pows.append(bmul(pows[-1], w))
            h = None
            for d in range(1, 5):
                rows = [[red(pows[i])[t] for i in range(d)] for t in range(4)]
                rhs = [(-red(pows[d])[t]) % l for t in range(4)]
                sol = _fp_solve_list(rows, rhs, l)
                if sol is not None:
                    h = sol + [1]
                    break
            if h is None:
                nxt.append(e)
                continue
            roots = sorted(lam for lam in range(l)
                           if sum(c * pow(lam, i, l) for i, c in enumerate(h)) % l == 0)
            if len(roots) <= 1:
                nxt.append(e)
                continue
            pieces = []
            for lam in roots:
                enew = e
                for mu in roots:
                    if mu != lam:
                        zm = [(w[t] - mu * e[t]) % l for t in range(4)]
                        enew = bmul(enew, zm)
                enew = bpow(enew, l ** m)  # kill nilpotent drift
                if any(red(enew)):
                    pieces.append(enew)
            nxt.extend(pieces if pieces else [e])
        components = nxt
    if not all(is_field_component(e) for e in components):
        raise ArithmeticError("prime splitting did not stabilize")
    out = []
    seen = set()
    lO = KIdeal.principal(K, K.elem([l]))
    for e in components:
        rows = [red(bmul(e, _unit4(j))) for j in range(4)]
        ker = _fp_kernel(rows, l)
        sb, _ = _rref_info(ker, l)
        gen_rows = [[l if i == j else 0 for j in range(4)] for i in range(4)]
        gen_rows += [list(v) for v in sb]
        H = hnf(gen_rows)
        P = KIdeal(K, H, 1)
        if P.M in seen:
            # distinct idempotent representatives can name the same prime
            continue
        seen.add(P.M)
        n = int(P.norm())
        f = 0
        while n > 1:
            assert n % l == 0
            n //= l
            f += 1
        e_mult = lO.valuation(P)
        out.append((P, e_mult, f))
    return out


def _unit4(i):
    v = [0, 0, 0, 0]
    v[i] = 1
    return v


def _b_min_poly(z, bmul, bone, l):
    """Minimal polynomial of z in B = O/lO (int list, low -> high, monic)."""
    pows = [bone]
    for _ in range(4):
        pows.append(bmul(pows[-1], z))
    for d in range(1, 5):
        # solve sum_{i<=d} c_i z^i = 0 with c_d = 1
        rows = [[pows[i][t] for i in range(d)] for t in range(4)]
        rhs = [(-pows[d][t]) % l for t in range(4)]
        sol = _fp_solve_list(rows, rhs, l)
        if sol is not None:
            return sol + [1]
    raise ArithmeticError("no minimal polynomial in B")


def _fp_solve_list(rows, rhs, l):
    n = len(rows)
    m = len(rows[0]) if rows else 0
    A = [list(map(int, row)) + [int(b)] for row, b in zip(rows, rhs)]
    r = 0
    piv = []
    for c in range(m):
        pr = None
        for i in range(r, n):
            if A[i][c] % l:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], l - 2, l)
        A[r] = [x * inv % l for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] % l:
                f = A[i][c]
                A[i] = [(x - f * y) % l for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    for i in range(r, n):
        if A[i][m] % l:
            return None
    sol = [0] * m
    for i, c in enumerate(piv):
        sol[c] = A[i][m]
    return sol


# ---------------------------------------------------------------------------
# short vectors and principality

def ideal_gram(I):
    """Gram matrix Tr(b_i conj(b_j)) of the ideal basis (exact Fractions)."""
    bs = I.basis_elements()
    return [[(x * y.conj()).trace() for y in bs] for x in bs], bs


def _fincke_pohst(gram, bound, limit=None):
    """Integer vectors v != 0 with v G v^T <= bound (exact arithmetic).

    Yields coefficient vectors; enumeration order is deterministic.
    """
    n = len(gram)
    G = [[Fraction(x) for x in row] for row in gram]
    # Cholesky-style decomposition: Q(x) = sum_i q_ii (x_i + sum_j>i q_ij x_j)^2
    q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q[i][j] = G[i][j] - sum(q[k][k] * q[k][i] * q[k][j] for k in range(i))
            if j > i:
                q[i][j] = q[i][j] / q[i][i] if q[i][i] else q[i][j]
    for i in range(n):
        if q[i][i] <= 0:
            raise ArithmeticError("form not positive definite")
    out = []
    count = 0
    x = [0] * n

    def rec(i, rem, shift_acc):
        nonlocal count
        if limit is not None and count > limit:
            raise InconclusiveError("short vector enumeration limit exceeded")
        if i < 0:
            if any(x):
                out.append(tuple(x))
                count += 1
            return
        # x_i ranges over |q_ii (x_i + s)^2 <= rem|, s = sum_{j>i} q_ij x_j
        s = shift_acc[i]
        # (x_i + s)^2 <= rem / q_ii
        rhs = rem / q[i][i]
        # integer range: ceil(-sqrt(rhs) - s) .. floor(sqrt(rhs) - s)
        lo, hi = _frac_sqrt_range(rhs, s)
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = Fraction(xi) + s
            rem2 = rem - q[i][i] * t * t
            if rem2 < 0:
                continue
            # update shifts for lower indices
            new_shift = list(shift_acc)
            for t2 in range(i):
                new_shift[t2] = new_shift[t2] + q[t2][i] * xi
            rec(i - 1, rem2, new_shift)
        x[i] = 0

    rec(n - 1, Fraction(bound), [Fraction(0)] * n)
    return out


def _frac_sqrt_range(rhs, s):
    """Integer range of x with (x + s)^2 <= rhs, exact."""
    if rhs < 0:
        return 0, -1
    # sqrt bound: isqrt on scaled integers
    num, den = rhs.numerator, rhs.denominator
    r = isqrt(num * den)  # floor(sqrt(num*den)): sqrt(rhs) = r/den approx
    # sqrt(rhs) >= r/den ; use (r+1)/den as upper over-approx
    hi_f = Fraction(r + 1, den) - s
    lo_f = -Fraction(r + 1, den) - s
    lo = int(ceil(lo_f))
    hi = int(hi_f) if hi_f >= 0 else -int(ceil(-hi_f))
    while (Fraction(lo) + s) ** 2 > rhs:
        lo += 1
        if lo > hi:
            return 0, -1
    while (Fraction(hi) + s) ** 2 > rhs:
        hi -= 1
        if hi < lo:
            return 0, -1
    return lo, hi


def short_vectors(I, bound, limit=200000):
    """Elements x of the ideal with Tr(x conj(x)) <= bound."""
    gram, bs = ideal_gram(I)
    basis = [[1 if i == j else 0 for j in range(4)] for i in range(4)]

    def g(u, v):
        return sum(Fraction(u[i]) * gram[i][j] * v[j] for i in range(4) for j in range(4))

    red = lll_reduce(basis, g)
    gram2 = [[g(u, v) for v in red] for u in red]
    vecs = _fincke_pohst(gram2, bound, limit)
    out = []
    for v in vecs:
        x = I.K.zero()
        for c, (rv) in zip(v, red):
            for t in range(4):
                if rv[t] and c:
                    x = x + bs[t] * (c * rv[t])
        out.append(x)
    return out


class QD:
    """Exact arithmetic in Q(sqrt(D)): value A + B sqrt(D)."""

    __slots__ = ("A", "B", "D")

    def __init__(self, A, B, D):
        self.A = Fraction(A)
        self.B = Fraction(B)
        self.D = D

    def __mul__(self, other):
        if isinstance(other, QD):
            return QD(self.A * other.A + self.B * other.B * self.D,
                      self.A * other.B + self.B * other.A, self.D)
        return QD(self.A * other, self.B * other, self.D)

    def conj(self):
        return QD(self.A, -self.B, self.D)

    def is_positive(self):
        A, B = self.A, self.B
        if A >= 0 and B >= 0:
            return A != 0 or B != 0
        if A < 0 and B <= 0:
            return False
        if A >= 0:  # B < 0
            return A * A > B * B * self.D
        return B * B * self.D > A * A

    def __lt__(self, other):
        return (other - self).is_positive()

    def __le__(self, other):
        return not (self - other).is_positive()

    def __sub__(self, other):
        return QD(self.A - other.A, self.B - other.B, self.D)

    def norm(self):
        return self.A * self.A - self.B * self.B * self.D

    def to_float(self):
        return float(self.A) + float(self.B) * sqrt(self.D)


def _unit_window_weights(K, w=Fraction(2)):
    """Totally positive weights mu covering the unit normalization window.

    Any generator can be scaled by the fundamental unit so that the ratio
    rho of its two embedding norms lies in [eps^-2, eps^2]; each weight mu
    gives a positive form Tr(mu x conj(x)) whose small ball captures
    generators with rho in [rho_mu / w^2, rho_mu * w^2].  The returned list
    is verified (exactly, in Q(sqrt D0)) to cover the whole window.
    Cached per field.
    """
    import math
    key = ("unit_window", w)
    if key in K._cache:
        return K._cache[key]
    core = K.a * K.a - 4 * K.b
    s, t = K.real.unit_s, K.real.unit_t
    # eps in Q(sqrt(core)): sqrt(D0) = sqrt(core)/f (odd D0) or 2 sqrt(core)/f
    _, f = _sqfree_decompose(core)
    if K.D0 % 4 == 1:
        eps = QD(Fraction(s, 2), Fraction(t, 2 * f), core)
    else:
        eps = QD(Fraction(s, 2), Fraction(t, f), core)
    assert abs(eps.norm()) == 1 and eps.is_positive()
    # target window for rho = mu_bar/mu: [eps^-2, 1], mirrored by conjugates.
    # eps^-2 = conj(eps)^2 since N(eps) = +-1.
    lo = eps.conj() * eps.conj()   # eps^-2, totally positive
    w2 = QD(Fraction(w * w), 0, core)
    w4 = QD(Fraction(w ** 4), 0, core)

    def rho_of(mu):
        # mu_bar / mu = mu_bar^2 / N(mu)
        mb = mu.conj()
        return (mb * mb) * (Fraction(1) / mu.norm())

    def center_for(rho_target):
        # mu = c + sqrt(core) with (c - sqrt(core))/(c + sqrt(core)) ~ rho
        cf = math.sqrt(core) * (1 + rho_target) / (1 - rho_target)
        c = Fraction(int(math.ceil(cf * 256)), 256)
        mu = QD(c, 1, core)
        assert mu.norm() > 0 and mu.is_positive()
        return mu

    e1f = eps.to_float()
    wf = float(w)
    mus = [QD(1, 0, core)]
    j = 1
    while True:
        rho_t = math.exp(-(4 * j - 2) * math.log(wf))
        if rho_t * wf * wf <= 1 / (e1f * e1f):
            mus.append(center_for(max(rho_t, 0.5 / (e1f * e1f))))
            break
        mus.append(center_for(rho_t))
        j += 1
        if j > 200:
            raise InconclusiveError("unit window ladder too long")
    # exact verification with densification: adjacent overlap and endpoint
    guard = 0
    while True:
        guard += 1
        if guard > 500:
            raise InconclusiveError("unit window ladder did not converge")
        rhos = [rho_of(mu) for mu in mus]
        gap = None
        for i in range(len(rhos) - 1):
            if (rhos[i + 1] * w4) < rhos[i]:
                gap = i
                break
        if gap is not None:
            if mus[gap].B == 0:
                # first entry is mu = 1 (rho = 1); insert a center just below
                cmid = mus[gap + 1].A * 2
            else:
                cmid = (mus[gap].A + mus[gap + 1].A) / 2
            mu = QD(cmid, 1, core)
            if not (mu.norm() > 0 and mu.is_positive()):
                mu = QD(cmid + 1, 1, core)
            mus.insert(gap + 1, mu)
            continue
        if not (rhos[-1] <= lo * w2):
            # push the last center further down: c closer to sqrt(core)
            clast = mus[-1].A
            cnew = clast - (clast * clast - core) / (2 * clast) / 2
            mu = QD(cnew, 1, core)
            if not (mu.norm() > 0 and mu.is_positive()):
                raise InconclusiveError("unit window ladder stuck at endpoint")
            mus.append(mu)
            continue
        break
    out = []
    for mu in mus:
        out.append(mu)
        if mu.B != 0:
            out.append(mu.conj())
    K._cache[key] = (out, w)
    return K._cache[key]


def _qd_to_elem(K, q):
    """QD value A + B sqrt(core) as an element of K (core = a^2 - 4b)."""
    return K.one() * q.A + K.sqrt_core() * q.B


def principal_generator(I, limit=400000):
    """A generator when I is principal, else None (proof by enumeration).

    Enumerates short vectors of the weighted trace forms Tr(mu x conj(x))
    over the verified unit-window ladder; a generator normalized by the
    fundamental unit must land in one of the balls, so exhausting them all
    is a proof of non-principality.
    """
    K = I.K
    den = I.den
    J = KIdeal(K, [list(r) for r in I.M], 1)
    Nm = J.norm()
    assert Nm.denominator == 1
    Nm = int(Nm)
    mus, w = _unit_window_weights(K)
    wfac = w + 1 / w
    gram0, bs = ideal_gram(J)
    seen = set()
    for mu in mus:
        mu_el = _qd_to_elem(K, mu)
        gram = [[((bs[i] * bs[j].conj()) * mu_el).trace() for j in range(4)]
                for i in range(4)]
        Nmu = mu.norm()
        # bound = 2 (w + 1/w) sqrt(Nmu * Nm), rounded up exactly
        val = Fraction(Nmu) * Nm * (wfac * wfac * 4)
        bound = Fraction(isqrt(val.numerator // val.denominator) + 1)
        vecs = _fp_ball(gram, bound, limit)
        for v in vecs:
            if v in seen:
                continue
            seen.add(v)
            x = K.zero()
            for c, b in zip(v, bs):
                if c:
                    x = x + b * c
            if not x.is_zero() and abs(x.norm()) == Nm:
                return x * Fraction(1, den)
    return None


def _fp_ball(gram, bound, limit):
    def g(u, v):
        return sum(Fraction(u[i]) * gram[i][j] * v[j]
                   for i in range(4) for j in range(4))

    basis = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    red = lll_reduce(basis, g)
    gram2 = [[g(u, v) for v in red] for u in red]
    vecs = _fincke_pohst(gram2, bound, limit)
    out = []
    for v in vecs:
        w = [0, 0, 0, 0]
        for c, rv in zip(v, red):
            for t in range(4):
                w[t] += c * rv[t]
        out.append(tuple(w))
    return out


def is_principal(I, limit=400000):
    return principal_generator(I, limit) is not None
