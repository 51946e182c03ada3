"""Truncated trivariate integer power series in p, q, r.

Truncation is by total degree: a series of truncation degree D stores only
exponent triples with i+j+k <= D, and arithmetic never reports coefficients
beyond the truncation.  Coefficients are exact python ints (Fractions appear
only transiently through division-free construction, so they are rejected).
"""


class SeriesPQR:
    """Sparse {(i,j,k): int} with total-degree truncation."""

    __slots__ = ("D", "c")

    def __init__(self, D, coeffs=None):
        if D < 0:
            raise ValueError("negative truncation degree")
        self.D = D
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v and sum(e) <= D:
                    self.c[e] = int(v)

    @classmethod
    def one(cls, D):
        return cls(D, {(0, 0, 0): 1})

    @classmethod
    def zero(cls, D):
        return cls(D)

    def copy(self):
        s = SeriesPQR(self.D)
        s.c = dict(self.c)
        return s

    def truncate(self, D):
        if D >= self.D:
            s = self.copy()
            s.D = D if D < self.D else self.D
            return s
        return SeriesPQR(D, {e: v for e, v in self.c.items() if sum(e) <= D})

    def constant_term(self):
        return self.c.get((0, 0, 0), 0)

    def is_zero(self):
        return not self.c

    def __eq__(self, other):
        return self.D == other.D and self.c == other.c

    def __add__(self, other):
        D = min(self.D, other.D)
        out = {e: v for e, v in self.c.items() if sum(e) <= D}
        for e, v in other.c.items():
            if sum(e) > D:
                continue
            nv = out.get(e, 0) + v
            if nv:
                out[e] = nv
            else:
                out.pop(e, None)
        s = SeriesPQR(D)
        s.c = out
        return s

    def __neg__(self):
        s = SeriesPQR(self.D)
        s.c = {e: -v for e, v in self.c.items()}
        return s

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, k):
        k = int(k)
        s = SeriesPQR(self.D)
        if k:
            s.c = {e: v * k for e, v in self.c.items()}
        return s

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        D = min(self.D, other.D)
        a, b = self.c, other.c
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for (i1, j1, k1), v1 in a.items():
            if i1 + j1 + k1 > D:
                continue
            rem = D - (i1 + j1 + k1)
            for (i2, j2, k2), v2 in b.items():
                if i2 + j2 + k2 > rem:
                    continue
                e = (i1 + i2, j1 + j2, k1 + k2)
                nv = out.get(e, 0) + v1 * v2
                if nv:
                    out[e] = nv
                else:
                    del out[e]
        s = SeriesPQR(D)
        s.c = out
        return s

    __rmul__ = __mul__

    def pow(self, n):
        out = SeriesPQR.one(self.D)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self):
        """Multiplicative inverse; constant term must be a unit of Z (+-1)."""
        c0 = self.constant_term()
        if c0 not in (1, -1):
            raise ValueError("non-unit constant term")
        D = self.D
        # group terms of the tail by total degree, then solve degree by degree
        tail_by_deg = {}
        for e, v in self.c.items():
            d = sum(e)
            if d:
                tail_by_deg.setdefault(d, []).append((e, v))
        inv_by_deg = {0: {(0, 0, 0): c0}}
        for d in range(1, D + 1):
            cur = {}
            for dt, terms in tail_by_deg.items():
                if dt > d:
                    continue
                src = inv_by_deg.get(d - dt)
                if not src:
                    continue
                for (i1, j1, k1), v1 in terms:
                    for (i2, j2, k2), v2 in src.items():
                        e = (i1 + i2, j1 + j2, k1 + k2)
                        cur[e] = cur.get(e, 0) - v1 * v2
            if c0 == -1:
                cur = {e: -v for e, v in cur.items()}
            inv_by_deg[d] = {e: v for e, v in cur.items() if v}
        out = {}
        for layer in inv_by_deg.values():
            out.update(layer)
        s = SeriesPQR(D)
        s.c = {e: v for e, v in out.items() if v}
        return s

    def scale_substitute(self, l):
        """Substitute p,q,r -> p^l, q^l, r^l; terms beyond truncation drop."""
        if l < 1:
            raise ValueError("l must be >= 1")
        D = self.D
        out = {}
        for (i, j, k), v in self.c.items():
            if l * (i + j + k) <= D:
                out[(l * i, l * j, l * k)] = v
        s = SeriesPQR(D)
        s.c = out
        return s

    def __repr__(self):
        n = len(self.c)
        lead = sorted(self.c.items())[:4]
        return f"SeriesPQR(D={self.D}, {n} terms, leading {lead})"


def series_mul(a, b):
    return a * b


def series_inverse(a):
    return a.inverse()
