"""Class groups of quartic CM fields via relation matrices and certification.

The factor base is every prime of norm below the Minkowski bound (which
generates the class group unconditionally).  Relations come from smooth
principal ideals found by a seeded box search; the Smith normal form of the
relation matrix presents a candidate group, which is then certified by
proving each nontrivial candidate class non-principal through exhaustive
short-vector enumeration.  A principal class found during certification is
added as a relation and the presentation recomputed, so the final answer is
correct, not heuristic.
"""

import random
from fractions import Fraction
from math import gcd, isqrt

from .exactalg import factor_trial, primes_up_to, smith_normal_form
from .quartic import (InconclusiveError, KIdeal, factor_rational_prime,
                      principal_generator, short_vectors)


def minkowski_bound(K):
    # (4!/4^4) (4/pi)^2 sqrt(|D|), rounded up with a safety margin
    from math import pi, sqrt
    return int((24 / 256) * (16 / (pi * pi)) * sqrt(abs(K.disc)) * (1 + 1e-9)) + 1


class ClassGroupData:
    """Elementary divisors, generator primes and discrete logs for Cl(O_K)."""

    def __init__(self, K, divisors, base, base_coords):
        self.K = K
        self.divisors = [d for d in divisors if d > 1]
        self.base = base          # list of (prime ideal, e, f, rational prime)
        self.base_coords = base_coords  # coords of each base prime in the group
        self.h = 1
        for d in self.divisors:
            self.h *= d
        self._dlog_cache = {}
        self._gen_primes = None

    def coords_reduce(self, v):
        return tuple(x % d for x, d in zip(v, self.divisors))

    def class_of_prime_index(self, i):
        return self.coords_reduce(self.base_coords[i])

    def dlog(self, I, rng_seed=0):
        """Coordinates of the class of I in the product of cyclic factors."""
        key = (I.M, I.den)
        if key in self._dlog_cache:
            return self._dlog_cache[key]
        # reduce I to a smooth equivalent: find short x in I, pass to (x) I^-1
        coords, _ = self._dlog_with_witness(I, rng_seed)
        self._dlog_cache[key] = coords
        return coords

    def _dlog_with_witness(self, I, rng_seed=0):
        K = self.K
        # clear denominator: class unchanged by rational scaling
        J = KIdeal(K, [list(r) for r in I.M], 1)
        rng = random.Random((rng_seed, J.M))
        for attempt in range(64):
            # multiply by a random smooth prime power to randomize, then reduce
            if attempt == 0:
                J2 = J
                shift = [0] * len(self.base)
            else:
                i = rng.randrange(len(self.base))
                J2 = J * self.base[i][0]
                shift = [0] * len(self.base)
                shift[i] = 1
            x = _short_nonzero(J2)
            Jr = KIdeal.principal(K, x) * J2.inverse()
            assert Jr.is_integral()
            v = _factor_over_base(Jr, self.base)
            if v is not None:
                # [J2] = [ (x) Jr^-1 ] => [J] = -[Jr] - shift
                total = [-(a + s) for a, s in zip(v, shift)]
                coords = [0] * len(self.divisors)
                for i, e in enumerate(total):
                    if e:
                        for t in range(len(self.divisors)):
                            coords[t] += e * self.base_coords[i][t]
                return self.coords_reduce(coords), None
        raise InconclusiveError("discrete log reduction did not smooth")

    def generator_primes(self):
        """Degree-1 base primes generating the group, with their orders."""
        if self._gen_primes is not None:
            return self._gen_primes
        chosen = []
        span = {(0,) * len(self.divisors)}
        # prefer degree-1 primes of small norm
        order_pref = sorted(range(len(self.base)),
                            key=lambda i: (self.base[i][2], int(self.base[i][0].norm())))
        for i in order_pref:
            if len(span) == self.h:
                break
            c = self.class_of_prime_index(i)
            if c in span:
                continue
            chosen.append(i)
            new = set()
            order = _coord_order(c, self.divisors)
            for s in span:
                cur = s
                for _ in range(order):
                    new.add(cur)
                    cur = self.coords_reduce([a + b for a, b in zip(cur, c)])
            span = new
        if len(span) != self.h:
            raise InconclusiveError("no generating set of base primes found")
        self._gen_primes = [(self.base[i][0],
                             _coord_order(self.class_of_prime_index(i), self.divisors),
                             self.class_of_prime_index(i),
                             self.base[i][3])
                            for i in chosen]
        return self._gen_primes

    def __repr__(self):
        return f"ClassGroup({' x '.join(f'Z/{d}' for d in self.divisors) or 'trivial'})"


def _coord_order(c, divisors):
    o = 1
    for x, d in zip(c, divisors):
        if d == 1:
            continue
        dd = d // gcd(x, d)
        o = o * dd // gcd(o, dd)
    return o


def _short_nonzero(I, salt=0):
    """A short nonzero element of the ideal (LLL-reduced basis vector)."""
    from .exactalg import lll_reduce
    from .quartic import ideal_gram
    gram, bs = ideal_gram(I)

    def g(u, v):
        return sum(Fraction(u[i]) * gram[i][j] * v[j]
                   for i in range(4) for j in range(4))

    basis = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    if salt:
        rng = random.Random(salt)
        for i in range(4):
            j = rng.randrange(4)
            if j != i:
                basis[i] = [a + rng.choice((-1, 1)) * b
                            for a, b in zip(basis[i], basis[j])]
    red = lll_reduce(basis, g)
    best = None
    for v in red:
        x = I.K.zero()
        for c, b in zip(v, bs):
            if c:
                x = x + b * c
        if x.is_zero():
            continue
        t = x.t2()
        if best is None or t < best[0]:
            best = (t, x)
    if best is None:
        raise InconclusiveError("no short vector found")
    return best[1]


def _factor_over_base(J, base):
    """Exponent vector of integral J over the factor base, or None."""
    n = int(J.norm())
    if n == 0:
        raise ValueError
    rest = n
    vec = [0] * len(base)
    for i, (P, e, f, l) in enumerate(base):
        if n % l == 0:
            v = J.valuation(P)
            vec[i] = v
            rest //= (l ** f) ** v
    if rest != 1:
        return None
    return vec


def class_group(K, effort=3, seed=0):
    """Certified class group of O_K.  Returns ClassGroupData."""
    if "class_group" in K._cache:
        return K._cache["class_group"]
    mb = minkowski_bound(K)
    base = []
    for l in primes_up_to(mb):
        for P, e, f in factor_rational_prime(K, l):
            if l ** f <= mb:
                base.append((P, e, f, l))
    n = len(base)
    relations = []
    # free relations: rational primes (l) = prod P^e
    by_l = {}
    for i, (P, e, f, l) in enumerate(base):
        by_l.setdefault(l, []).append(i)
    for l, idxs in by_l.items():
        full = sum(base[i][1] * base[i][2] for i in idxs)
        if full == 4:  # all primes above l are in the base
            v = [0] * n
            for i in idxs:
                v[i] = base[i][1]
            relations.append(v)
    # reduction relations: reduce each base prime (and random products) by a
    # short vector; the cofactor is small of norm O(sqrt disc) and usually
    # factors over the base
    rng = random.Random((seed, K.a, K.b))

    def reduction_relation(J, vec):
        for salt in range(6):
            x = _short_nonzero(J, salt=salt and rng.randrange(1 << 30))
            B = KIdeal.principal(K, x) * J.inverse()
            assert B.is_integral()
            w = _factor_over_base(B, base)
            if w is not None:
                # [J] * [B] = principal
                return [a + b for a, b in zip(vec, w)]
        return None

    for i in range(n):
        e_i = [1 if t == i else 0 for t in range(n)]
        rel = reduction_relation(base[i][0], e_i)
        if rel is not None:
            relations.append(rel)
    # SNF presentation + certification loop; saturate free parts first
    stall = 0
    while True:
        divisors, coords = _present(relations, n)
        if any(d == 0 for d in divisors):
            stall += 1
            if stall > 200:
                raise InconclusiveError("relation search did not saturate")
            ex = [0] * n
            J = None
            for _ in range(1 + rng.randrange(3)):
                i = rng.randrange(n)
                ex[i] += 1
                J = base[i][0] if J is None else J * base[i][0]
            rel = reduction_relation(J, ex)
            if rel is not None:
                relations.append(rel)
            continue
        data = ClassGroupData(K, divisors, base, coords)
        extra = _certify(data)
        if extra is None:
            break
        relations.append(extra)
    K._cache["class_group"] = data
    return data


def _present(relations, n):
    """Group presentation from relation rows: divisors + base-prime coords."""
    if not relations:
        relations = [[0] * n]
    D, U, V = smith_normal_form(relations)
    m = len(relations)
    diag = [D[i][i] if i < len(D) and i < len(D[0]) else 0 for i in range(n)]
    # Z^n / rowspace(R): with R V = U^-1 D, lattice L*V = rowspace(D).
    # Coordinates of e_i: row i of V gives e_i in the new basis f_j where
    # the quotient is + Z/d_j (d_j = diag, 0 meaning Z).
    # Since Cl is finite, certification forces no zero diagonals to remain.
    divisors = [d if d != 0 else 0 for d in diag]
    coords = []
    for i in range(n):
        coords.append([V[i][j] for j in range(n)])
    keep = [j for j in range(n) if divisors[j] != 1]
    divs = [divisors[j] for j in keep]
    coords = [[row[j] for j in keep] for row in coords]
    return divs, coords


def _certify(data):
    """Return a new relation vector if a candidate class is principal."""
    if data.h == 1:
        return None
    # enumerate nontrivial classes as small products of base primes
    n = len(data.base)
    # walk group elements via generator primes greedily
    elems = {(0,) * len(data.divisors): [0] * n}
    frontier = list(elems)
    while len(elems) < data.h:
        newfront = []
        for c in frontier:
            for i in range(n):
                nc = data.coords_reduce([a + b for a, b in
                                         zip(c, data.base_coords[i])])
                if nc not in elems:
                    v = list(elems[c])
                    v[i] += 1
                    elems[nc] = v
                    newfront.append(nc)
        if not newfront:
            raise InconclusiveError("base primes do not generate candidate group")
        frontier = newfront
    for c, v in elems.items():
        if not any(c):
            continue
        J = None
        for i, e in enumerate(v):
            if e:
                J = data.base[i][0] ** e if J is None else J * data.base[i][0] ** e
        # reduce to a small equivalent ideal before the principality test
        x = _short_nonzero(J)
        Jr = KIdeal.principal(data.K, x) * J.inverse()
        g = principal_generator(Jr)
        if g is not None:
            # [J]^-1 principal => relation v
            return v
    return None
