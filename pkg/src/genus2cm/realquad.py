"""Real quadratic fields: fundamental units, class numbers, narrow class groups.

Units come from the continued fraction of (b0 + sqrt(D))/2; narrow class
numbers count cycles of reduced indefinite binary quadratic forms, which are
in bijection with the narrow ideal classes for a fundamental discriminant.
"""

from math import isqrt

from .exactalg import is_square


class RealQuadData:
    """Invariants of the real quadratic field of fundamental discriminant D0."""

    def __init__(self, D0):
        if D0 <= 0 or is_square(D0):
            raise ValueError("need a positive nonsquare discriminant")
        if D0 % 4 not in (0, 1):
            raise ValueError("not a discriminant")
        d = D0 if D0 % 4 == 1 else D0 // 4
        if D0 % 4 == 0 and (d % 4 == 1 or not _squarefree(d)):
            raise ValueError("not a fundamental discriminant")
        if D0 % 4 == 1 and not _squarefree(D0):
            raise ValueError("not a fundamental discriminant")
        self.D0 = D0
        s, t = _fundamental_unit_st(D0)
        # epsilon = (s + t*sqrt(D0)) / 2
        self.unit_s = s
        self.unit_t = t
        self.unit_norm = (s * s - D0 * t * t) // 4
        self.narrow_class_number = _form_class_number(D0)
        if self.unit_norm == -1:
            self.class_number = self.narrow_class_number
        else:
            # norm +1 fundamental unit: narrow class number is exactly 2h
            assert self.narrow_class_number % 2 == 0
            self.class_number = self.narrow_class_number // 2

    @property
    def unit_is_totally_positive(self):
        # norm +1 and positive leading embedding means both embeddings positive
        return self.unit_norm == 1

    def __repr__(self):
        return (f"RealQuadData(D0={self.D0}, h={self.class_number}, "
                f"h+={self.narrow_class_number}, N(eps)={self.unit_norm})")


def _squarefree(n):
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _fundamental_unit_st(D):
    """Smallest (s, t), t > 0, with s^2 - D t^2 = +-4.

    Continued fraction of (b0 + sqrt(D))/2 where b0 matches D's parity; the
    first convergent giving norm +-4 is the fundamental unit (s + t sqrt(D))/2.
    """
    sq = isqrt(D)
    b0 = D & 1
    # alpha = (P + sqrt(D)) / Q
    P, Q = b0, 2
    h0, h1 = 1, (b0 + sq) // 2
    k0, k1 = 0, 1
    for _ in range(10 ** 7):
        # unit candidate from convergent h1/k1: x = h1 - k1 * conj(omega)
        # omega = (b0 + sqrt D)/2, conj(omega) = (b0 - sqrt D)/2
        s = 2 * h1 - b0 * k1
        t = k1
        n4 = s * s - D * t * t
        if n4 == 4 or n4 == -4:
            return s, t
        P = ((P + sq) // Q) * Q - P
        Q = (D - P * P) // Q
        a = (P + sq) // Q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
    raise ArithmeticError("continued fraction did not terminate")


def _reduced_forms(D):
    """All reduced indefinite forms (a,b,c) of discriminant D."""
    sq = isqrt(D)
    out = []
    for b in range(1, sq + 1):
        if (D - b * b) % 4:
            continue
        ac = (b * b - D) // 4  # negative
        # reduced: |sqrt(D) - 2|a|| < b < sqrt(D)
        for a in range(1, sq + 1):
            if (-ac) % a:
                continue
            c = ac // a
            for aa, cc in ((a, c), (-a, -c), (c, a), (-c, -a)):
                if _is_reduced(aa, b, cc, D, sq):
                    out.append((aa, b, cc))
    return sorted(set(out))


def _is_reduced(a, b, c, D, sq):
    if b <= 0 or b * b - 4 * a * c != D:
        return False
    # reduced: |sqrt(D) - 2|a|| < b < sqrt(D), exact integer comparisons
    if b > sq:
        return False
    twoa = 2 * abs(a)
    # sqrt(D) - b < twoa  <=>  D < (twoa + b)^2  when twoa + b > 0
    if D >= (twoa + b) * (twoa + b):
        return False
    # twoa < sqrt(D) + b  <=>  (twoa - b)^2 < D or twoa <= b
    if twoa > b and (twoa - b) * (twoa - b) >= D:
        return False
    return True


def _rho(form, D, sq):
    a, b, c = form
    # next form: (c, r, (r^2 - D)/(4c)) with r = -b mod 2|c| in the right window
    cc = abs(c)
    r = (-b) % (2 * cc)
    # choose representative: if |c| > sqrt(D): -|c| < r <= |c|; else sqrt(D)-2|c| < r < sqrt(D)
    if cc > sq:
        if r > cc:
            r -= 2 * cc
    else:
        # lift r into (sq - 2cc, sq]: largest value <= sq congruent to r
        r = r + ((sq - r) // (2 * cc)) * 2 * cc
    return (c, r, (r * r - D) // (4 * c))


def _form_class_number(D):
    forms = _reduced_forms(D)
    sq = isqrt(D)
    seen = set()
    cycles = 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        for _ in range(10 ** 6):
            g = _rho(g, D, sq)
            if g in seen:
                break
            seen.add(g)
            if g == f:
                break
        seen.add(f)
    return cycles


def real_quadratic_data(D0):
    return RealQuadData(D0)
