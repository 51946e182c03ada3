"""The polarized class group C(K), typenorms, and the CRT prime filter.

C(K) consists of pairs (ideal J, totally positive alpha in K+) with
J conj(J) = (alpha), modulo (u J, u conj(u) alpha).  Its order is
u h(K) / h+(K+) with u the index of relative unit norms inside the totally
positive units.

The typenorm m sends a degree-1 prime of the reflex field into C(K).  For
cyclic K the reflex is K and m(P) = P sigma^3(P) with sigma an explicit
generator of the Galois group.  For dihedral K the reflex generator is
eta = theta + t where t^2 = -a - theta^2; element typenorms are products
x(theta + t) x(theta - t) computed in K[t], and the ideal typenorm is the
unique divisor of (l) with the right norm and conjugate-product that
contains the sampled element typenorms.
"""

import random
from fractions import Fraction
from math import gcd, log, sqrt

from .classgroup import class_group
from .exactalg import is_probable_prime, primes_up_to
from .quartic import (CMField, InconclusiveError, KIdeal,
                      factor_rational_prime, principal_generator,
                      short_vectors)


class ShimuraElem:
    """Element (J, alpha) of C(K); alpha totally positive in K+."""

    __slots__ = ("K", "J", "alpha")

    def __init__(self, K, J, alpha, check=True):
        self.K = K
        self.J = J
        self.alpha = alpha
        if check:
            if not alpha.in_real_subfield() or not alpha.is_totally_positive():
                raise ValueError("alpha must be totally positive in K+")
            if J * J.conj() != KIdeal.principal(K, alpha):
                raise ValueError("J conj(J) != (alpha)")

    @classmethod
    def identity(cls, K):
        return cls(K, KIdeal.unit_ideal(K), K.one(), check=False)

    def __mul__(self, other):
        return ShimuraElem(self.K, self.J * other.J, self.alpha * other.alpha,
                           check=False)

    def inv(self):
        return ShimuraElem(self.K, self.J.inverse(), self.alpha.inv(), check=False)

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inv() ** (-e)
        out = ShimuraElem.identity(self.K)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def is_identity(self):
        """(J, alpha) trivial iff J = (u) with alpha / (u conj u) a relative norm."""
        K = self.K
        # scale to an integral ideal; principality is scaling-invariant
        J = self.J
        g = principal_generator(J)
        if g is None:
            return False
        w = self.alpha / (g * g.conj())
        if not w.in_real_subfield():
            return False
        if not K.is_integral(w) or not K.is_integral(w.inv()):
            return False
        if not w.is_totally_positive():
            return False
        m = _unit_dlog(K, w)
        if m is None:
            return False
        if m % 2 == 0:
            return True
        return hasse_unit_is_norm(K)

    def __eq__(self, other):
        return (self * other.inv()).is_identity()

    def order(self, cap=64):
        cur = self
        for n in range(1, cap + 1):
            if cur.is_identity():
                return n
            cur = cur * self
        raise InconclusiveError("element order exceeds cap")

    def cl_ideal_class_order(self, cap=64):
        """Order of the ideal part in Cl(O_K) (the map f of the sequence)."""
        cg = class_group(self.K)
        c = cg.dlog(self.J)
        from .classgroup import _coord_order
        return _coord_order(c, cg.divisors)

    def __repr__(self):
        return f"ShimuraElem(N(J)={self.J.norm()}, alpha={self.alpha})"


def _unit_dlog(K, w):
    """m with w = eps0^m for a totally positive unit w of O_{K+}, else None."""
    if w == K.one():
        return 0
    eps = K.fundamental_unit()
    # float log for the exponent guess, exact verification
    u, v = w.co[0], w.co[2]
    core = K.a * K.a - 4 * K.b
    emb = float(u) + float(v) * (-K.a + sqrt(core)) / 2
    le = log((K.real.unit_s + K.real.unit_t * sqrt(K.D0)) / 2)
    if emb <= 0:
        return None
    m0 = round(log(emb) / le)
    for m in (m0, m0 - 1, m0 + 1, m0 - 2, m0 + 2):
        if w == eps ** m:
            return m
    return None


def hasse_unit_is_norm(K):
    """Whether eps0 = eta conj(eta) for some unit eta of O_K."""
    if "hasse_norm" in K._cache:
        return K._cache["hasse_norm"]
    eps = K.fundamental_unit()
    out = False
    if eps.is_totally_positive():
        t2 = eps.trace()  # Tr_K(eta conj(eta)) = Tr_K(eps) for eta a witness
        O = KIdeal.unit_ideal(K)
        for x in short_vectors(O, int(t2) + 1, limit=600000):
            if x * x.conj() == eps:
                out = True
                break
    else:
        # eps not totally positive: the totally positive units are <eps^2>,
        # all of which are norms of eps^k, so u = 1
        out = True
    K._cache["hasse_norm"] = out
    return out


def unit_norm_index(K):
    """u = [(O_{K+}^*)^+ : N_{K/K+}(O_K^*)], either 1 or 2."""
    eps = K.fundamental_unit()
    if not eps.is_totally_positive():
        return 1  # totally positive units are the even powers, all norms
    return 1 if hasse_unit_is_norm(K) else 2


def shimura_order(K):
    """|C(K)| = u h(K) / h+(K+)."""
    cg = class_group(K)
    u = unit_norm_index(K)
    num = u * cg.h
    assert num % K.real.narrow_class_number == 0, "exact sequence violated"
    return num // K.real.narrow_class_number


def s_cardinality(K):
    """|S(K)|: the number of p.p.a.s. with CM by O_K over all CM types."""
    n = shimura_order(K)
    return n if K.galois_type == "cyclic" else 2 * n


# ---------------------------------------------------------------------------
# reflex fields

class ReflexData:
    """Reflex field K_Phi with the data needed to compute typenorms."""

    def __init__(self, K):
        self.K = K
        if K.galois_type == "cyclic":
            self.field = K
            self.scale = 1
        else:
            A0, B0 = 2 * K.a, K.a * K.a - 4 * K.b
            kk = 1
            j = 2
            while j * j * j * j <= B0:
                if A0 % (j * j) == 0 and B0 % (j ** 4) == 0:
                    # keep the largest valid rescaling eta -> eta / j
                    if CMFieldSafe(A0 // (j * j), B0 // (j ** 4)):
                        kk = j
                j += 1
            self.field = CMField(A0 // (kk * kk), B0 // (kk ** 4))
            self.scale = kk

    def __repr__(self):
        return f"ReflexData({self.field})"


def CMFieldSafe(a, b):
    try:
        CMField(a, b)
        return True
    except (ValueError, AssertionError):
        return False


def reflex_field(K):
    if "reflex" not in K._cache:
        K._cache["reflex"] = ReflexData(K)
    return K._cache["reflex"]


# ---------------------------------------------------------------------------
# typenorms

def _ideal_sigma_image(K, I, mat):
    return KIdeal.from_generators(
        K, [], module_gens=[K.apply_matrix(mat, x) for x in I.basis_elements()])


def _mat_compose(m1, m2):
    # row-vector convention: apply(m1) then apply(m2) is the product m1*m2
    return [[sum(m1[i][t] * m2[t][j] for t in range(4)) for j in range(4)]
            for i in range(4)]


def typenorm(K, P, l=None):
    """m(P) in C(K) for a degree-1 prime P of the reflex field.

    For cyclic K the input is an ideal of K itself; for dihedral K it is an
    ideal of reflex_field(K).field.
    """
    if l is None:
        nrm = P.norm()
        assert nrm.denominator == 1
        l = int(nrm)
    if not is_probable_prime(l):
        raise ValueError("typenorm requires a degree-1 prime (prime norm)")
    if K.galois_type == "cyclic":
        sig = K.cyclic_sigma()
        sig3 = _mat_compose(_mat_compose(sig, sig), sig)
        J = P * _ideal_sigma_image(K, P, sig3)
        alpha = K.elem([l])
        elem = ShimuraElem(K, J, alpha)
        return elem
    return _typenorm_dihedral(K, P, l)


class _SElem:
    """Element u + v t of S = K[t]/(t^2 + a + theta^2)."""

    __slots__ = ("u", "v", "K")

    def __init__(self, K, u, v):
        self.K = K
        self.u = u
        self.v = v

    def __mul__(self, other):
        K = self.K
        tsq = K.elem([-K.a, 0, -1, 0])
        return _SElem(K, self.u * other.u + self.v * other.v * tsq,
                      self.u * other.v + self.v * other.u)

    def __add__(self, other):
        return _SElem(self.K, self.u + other.u, self.v + other.v)

    def scalar(self, c):
        return _SElem(self.K, self.u * c, self.v * c)


def reflex_elem_typenorm(K, coords):
    """N_Phi of the reflex element with power-basis coords (dihedral K).

    The reflex generator is eta = (theta + t)/scale; the typenorm of
    x = sum c_i eta^i is x(eta) * x(eta') with eta' = (theta - t)/scale,
    computed in K[t]; the t-component must cancel.
    """
    rd = reflex_field(K)
    kk = rd.scale
    th = K.theta()
    etap = _SElem(K, th * Fraction(1, kk), K.one() * Fraction(1, kk))
    etam = _SElem(K, th * Fraction(1, kk), -(K.one() * Fraction(1, kk)))

    def evaluate(eta):
        acc = _SElem(K, K.zero(), K.zero())
        power = _SElem(K, K.one(), K.zero())
        for c in coords:
            if c:
                acc = acc + power.scalar(c)
            power = power * eta
        return acc

    prod = evaluate(etap) * evaluate(etam)
    assert prod.v.is_zero(), "typenorm did not land in K"
    return prod.u


def _typenorm_dihedral(K, P, l):
    rd = reflex_field(K)
    KP = rd.field
    # candidate divisors J | (l) with J conj(J) = (l), N(J) = l^2
    fac = factor_rational_prime(K, l)
    lO = KIdeal.principal(K, K.elem([l]))
    cands = []

    def build(idx, cur_exp):
        if idx == len(fac):
            J = None
            for (Q, e, f), g in zip(fac, cur_exp):
                if g:
                    J = Q ** g if J is None else J * Q ** g
            if J is None:
                return
            if int(J.norm()) != l * l:
                return
            if J * J.conj() == lO:
                cands.append(J)
            return
        for g in range(fac[idx][1] + 1):
            build(idx + 1, cur_exp + [g])

    build(0, [])
    uniq = []
    for J in cands:
        if J not in uniq:
            uniq.append(J)
    # sample element typenorms that the true N_Phi(P) must contain
    samples = []
    for row in P.M:
        x = [Fraction(r, P.den) for r in _integral_to_power(KP, row)]
        z = reflex_elem_typenorm(K, x)
        assert K.is_integral(z)
        samples.append(z)
    rng = random.Random((K.a, K.b, l, 5))
    basis_rows = [_integral_to_power(KP, row) for row in P.M]
    for _ in range(8):
        co = [Fraction(0)] * 4
        for row in basis_rows:
            c = rng.randrange(-2, 3)
            if c:
                for t in range(4):
                    co[t] += c * Fraction(row[t], P.den)
        z = reflex_elem_typenorm(K, co)
        samples.append(z)
    good = [J for J in uniq if all(J.contains(z) for z in samples)]
    if len(good) != 1:
        raise InconclusiveError(
            f"dihedral typenorm candidates not unique: {len(good)} of {len(uniq)}")
    return ShimuraElem(K, good[0], K.elem([l]))


def _integral_to_power(KP, row):
    """Power-basis coordinates of an integral-basis row of the reflex field."""
    co = [Fraction(0)] * 4
    for i, c in enumerate(row):
        if c:
            for j in range(4):
                co[j] += Fraction(c) * KP.wb[i][j]
    return co


# ---------------------------------------------------------------------------
# CRT prime filter

def crt_prime_filter(K, p):
    """True iff Igusa class polynomial computation mod p is possible.

    Requires p to split completely in the reflex field and the typenorm of
    a prime above p to be trivial in C(K) (the section 6.3 condition
    m(P1) = (mu), N(P1) = mu conj(mu)).
    """
    if p < 5 or not is_probable_prime(p):
        return False
    if (6 * K.disc) % p == 0:
        return False
    rd = reflex_field(K)
    KP = rd.field
    if KP.disc % p == 0 or KP.polydisc % p == 0:
        return False
    fac = factor_rational_prime(KP, p)
    if len(fac) != 4 or any(f != 1 or e != 1 for _, e, f in fac):
        return False
    P1 = fac[0][0]
    m = typenorm(K, P1, p)
    return m.is_identity()


def find_crt_primes(K, count=1, start=5, limit=200000):
    out = []
    for p in primes_up_to(limit):
        if p < start:
            continue
        if crt_prime_filter(K, p):
            out.append(p)
            if len(out) >= count:
                return out
    raise InconclusiveError("not enough CRT primes below the limit")
