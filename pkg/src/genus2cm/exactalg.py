"""Exact arbitrary-precision linear algebra and sparse multivariate polynomials.

Everything here is over Z or Q (python ints / fractions.Fraction); no floats.
Matrices are plain lists of lists.  Kernel bases, Smith normal forms and
Hermite normal forms are the workhorses for relation mining and for ideal
arithmetic in quartic CM fields.
"""

from fractions import Fraction
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# vectors

def vec_content(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive_vector(v):
    """Scale a rational vector to a primitive integer vector, positive leading."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    g = vec_content(w)
    if g > 1:
        w = [x // g for x in w]
    for x in w:
        if x != 0:
            if x < 0:
                w = [-y for y in w]
            break
    return w


# ---------------------------------------------------------------------------
# kernel over Q (fraction-free elimination)

def rat_kernel_basis(M):
    """Basis of the right kernel of M (rows x cols, int/Fraction entries).

    Fraction-free (Bareiss) forward elimination, then back-substitution.
    Returned vectors are primitive integer vectors with positive leading
    entry, one per free column, in RREF shape: vector j has a 1 (up to
    scaling) at its free column and support only on pivot columns before it.
    Empty list for a trivial kernel.
    """
    if not M:
        return []
    ncols = len(M[0])
    # clear denominators row by row
    A = []
    for row in M:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        A.append([int(x * den) for x in row])
    nrows = len(A)
    piv_cols = []
    piv_rows = []
    r = 0
    prev = 1
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            A[r], A[pr] = A[pr], A[r]
        for i in range(r + 1, nrows):
            if A[i][c] == 0 and prev == 1:
                # still must rescale for Bareiss consistency
                pass
            for j in range(c + 1, ncols):
                A[i][j] = (A[r][c] * A[i][j] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        piv_cols.append(c)
        piv_rows.append(r)
        r += 1
        if r == nrows:
            break
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    piv_set = dict(zip(piv_cols, range(len(piv_cols))))
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        # back substitute over the echelon rows
        for k in range(len(piv_cols) - 1, -1, -1):
            c = piv_cols[k]
            if c > fc:
                continue
            i = piv_rows[k]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if v[j]:
                    s += Fraction(A[i][j]) * v[j]
            v[c] = -s / A[i][c]
        basis.append(primitive_vector(v))
    return basis


def rank_and_rref(M):
    """(rank, rref rows over Fraction) of a rational matrix.  Small inputs only."""
    A = [[Fraction(x) for x in row] for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == nrows:
            break
    return r, A[:r]


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms over Z

def hnf(M, with_transform=False):
    """Row-style Hermite normal form of an integer matrix.

    Returns H (and U with U*M = H when requested).  H is upper triangular
    under column order, pivots positive, entries above a pivot reduced into
    [0, pivot).  Zero rows are dropped from H.
    """
    A = [list(map(int, row)) for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(m):
        # find pivot via gcd chain
        pr = None
        for i in range(r, n):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        U[r], U[pr] = U[pr], U[r]
        for i in range(r + 1, n):
            while A[i][c] != 0:
                q = A[r][c] // A[i][c]
                A[r] = [a - q * b for a, b in zip(A[r], A[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == n:
            break
    H = [row for row in A[:r]]
    if with_transform:
        return H, U
    return H


def smith_normal_form(M):
    """Smith normal form: returns (D, U, V) with U*M*V = D, d_i | d_{i+1}.

    U, V unimodular.  D returned as a full matrix of the same shape as M.
    """
    A = [list(map(int, row)) for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(n, m):
        # find a nonzero pivot
        pi = pj = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] != 0:
                    pi, pj = i, j
                    break
            if pi is not None:
                break
        if pi is None:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # clear column t
            done = True
            for i in range(t + 1, n):
                if A[i][t] % A[t][t] != 0:
                    q = A[i][t] // A[t][t]
                    addmul_row(i, t, -q)
                    swap_rows(t, i)
                    done = False
                elif A[i][t] != 0:
                    addmul_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, m):
                if A[t][j] % A[t][t] != 0:
                    q = A[t][j] // A[t][t]
                    addmul_col(j, t, -q)
                    swap_cols(t, j)
                    done = False
                elif A[t][j] != 0:
                    addmul_col(j, t, -(A[t][j] // A[t][t]))
            if done:
                break
        # ensure divisibility into the rest of the matrix
        bad = False
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % A[t][t] != 0:
                    addmul_row(t, i, 1)
                    bad = True
                    break
            if bad:
                break
        if bad:
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_det(M):
    """Exact determinant (Bareiss) of a square integer/rational matrix."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            return Fraction(0)
        if pr != c:
            A[c], A[pr] = A[pr], A[c]
            sign = -sign
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    d = Fraction(sign)
    for i in range(n):
        d *= A[i][i]
    return d


def mat_inv(M):
    """Exact inverse of a square rational matrix."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    r, R = rank_and_rref(A)
    if r < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve_exact(M, b):
    """One exact solution x of M x = b over Q, or None."""
    n = len(M)
    m = len(M[0]) if n else 0
    A = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(M, b)]
    _, R = rank_and_rref(A)
    x = [Fraction(0)] * m
    for row in R:
        piv = None
        for j in range(m):
            if row[j] != 0:
                piv = j
                break
        if piv is None:
            if row[m] != 0:
                return None
            continue
        x[piv] = row[m] - sum(row[j] * x[j] for j in range(piv + 1, m))
    # verify (handles free columns set to 0)
    for row, bb in zip(M, b):
        if sum(Fraction(a) * v for a, v in zip(row, x)) != Fraction(bb):
            return None
    return x


# ---------------------------------------------------------------------------
# lattice reduction (small dimensions, exact Gram)

def lll_reduce(basis, gram):
    """LLL-reduce a lattice basis given an exact Gram form.

    `basis` is a list of integer vectors, `gram(u, v)` returns a Fraction.
    Returns the reduced basis.  Dimensions here are tiny (<= 8).
    """
    b = [list(v) for v in basis]
    n = len(b)
    # straightforward textbook LLL with exact arithmetic
    starv = [None] * n
    B = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]

    def gso():
        for i in range(n):
            starv[i] = [Fraction(x) for x in b[i]]
            for j in range(i):
                if B[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = gram(b[i], starv[j]) / B[j]
                starv[i] = [a - mu[i][j] * c for a, c in zip(starv[i], starv[j])]
            B[i] = gram(starv[i], starv[i])

    gso()
    k = 1
    delta = Fraction(3, 4)
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:
            break
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [a - q * c for a, c in zip(b[k], b[j])]
                gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            gso()
            k = max(k - 1, 1)
    return b


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q (grevlex order)

def grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class MultiPoly:
    """Sparse multivariate polynomial: {exponent tuple: Fraction coefficient}.

    Terms with zero coefficient are never stored.  The monomial order used
    for display, serialization and leading terms is graded reverse
    lexicographic.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items() if isinstance(terms, dict) else terms:
                c = Fraction(c)
                if c:
                    e = tuple(e)
                    nc = self.terms.get(e, Fraction(0)) + c
                    if nc:
                        self.terms[e] = nc
                    else:
                        self.terms.pop(e, None)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            nc = out.get(e, Fraction(0)) + c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        p = MultiPoly(self.nvars)
        p.terms = out
        return p

    def __neg__(self):
        p = MultiPoly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly(self.nvars)
            p = MultiPoly(self.nvars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                nc = out.get(e, Fraction(0)) + c1 * c2
                if nc:
                    out[e] = nc
                else:
                    out.pop(e, None)
        p = MultiPoly(self.nvars)
        p.terms = out
        return p

    __rmul__ = __mul__

    def leading_term(self):
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def content_normalize(self):
        """Integer coefficients, content 1, positive leading coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator * (den // c.denominator)))
        scale = Fraction(den, num)
        if self.terms[max(self.terms, key=grevlex_key)] < 0:
            scale = -scale
        return self * scale

    def evaluate(self, vals):
        """Evaluate at a tuple of field elements (any ring with *, +)."""
        acc = None
        for e, c in self.terms.items():
            term = None
            for x, k in zip(vals, e):
                for _ in range(k):
                    term = x if term is None else term * x
            cc = c.numerator if c.denominator == 1 else c
            t = cc if term is None else term * cc
            acc = t if acc is None else acc + t
        return acc

    def serialize(self):
        """One line per term: `c e1 e2 ... en`, grevlex-descending order."""
        p = self.content_normalize()
        lines = []
        for e in sorted(p.terms, key=grevlex_key, reverse=True):
            c = p.terms[e]
            lines.append(" ".join([str(int(c))] + [str(k) for k in e]))
        return "\n".join(lines)

    @classmethod
    def deserialize(cls, text, nvars):
        terms = {}
        for line in text.strip().splitlines():
            parts = line.split()
            c = int(parts[0])
            e = tuple(int(x) for x in parts[1:])
            if len(e) != nvars:
                raise ValueError("bad exponent vector length")
            terms[e] = Fraction(c)
        return cls(nvars, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def poly_exact_div(num, den):
    """Exact division of multivariate polynomials (raises if not divisible)."""
    if den.is_zero():
        raise ZeroDivisionError
    q = MultiPoly(num.nvars)
    r = num
    de, dc = den.leading_term()
    while not r.is_zero():
        re, rc = r.leading_term()
        qe = tuple(a - b for a, b in zip(re, de))
        if any(x < 0 for x in qe):
            raise ArithmeticError("not divisible")
        t = MultiPoly(num.nvars, {qe: rc / dc})
        q = q + t
        r = r - t * den
    return q


def poly_coeffs_in(f, var):
    """Coefficients of f as a polynomial in variable index `var`.

    Returns list [c0, c1, ...] of MultiPoly in the remaining grading (same
    variable count, exponent of `var` zeroed).
    """
    d = f.degree_in(var)
    out = [MultiPoly(f.nvars) for _ in range(d + 1)]
    for e, c in f.terms.items():
        k = e[var]
        e2 = list(e)
        e2[var] = 0
        out[k] = out[k] + MultiPoly(f.nvars, {tuple(e2): c})
    return out


def poly_resultant(f, g, var):
    """Sylvester resultant of f and g with respect to variable index `var`.

    Raises ValueError when both inputs are constant in `var`.
    """
    fc = poly_coeffs_in(f, var)
    gc = poly_coeffs_in(g, var)
    m = len(fc) - 1
    n = len(gc) - 1
    if m <= 0 and n <= 0:
        raise ValueError("both inputs constant in the elimination variable")
    if m < 0 or n < 0:
        return MultiPoly(f.nvars)
    size = m + n
    zero = MultiPoly(f.nvars)
    S = [[zero] * size for _ in range(size)]
    for i in range(n):
        for j, c in enumerate(reversed(fc)):
            S[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(reversed(gc)):
            S[n + i][i + j] = c
    # Bareiss determinant over the polynomial ring (exact divisions)
    A = [row[:] for row in S]
    sign = 1
    prev = MultiPoly.constant(f.nvars, 1)
    for c in range(size - 1):
        if A[c][c].is_zero():
            pr = None
            for i in range(c + 1, size):
                if not A[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                return MultiPoly(f.nvars)
            A[c], A[pr] = A[pr], A[c]
            sign = -sign
        for i in range(c + 1, size):
            for j in range(c + 1, size):
                A[i][j] = poly_exact_div(A[c][c] * A[i][j] - A[i][c] * A[c][j], prev)
            A[i][c] = zero
        prev = A[c][c]
    det = A[size - 1][size - 1]
    return det if sign == 1 else -det


# ---------------------------------------------------------------------------
# misc integer helpers

def is_square(n):
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def factor_trial(n, bound=10 ** 7):
    """Trial-division factorization {p: e}.  Raises on incomplete factorization."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("factor 0")
    out = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while p * p <= n and p <= bound:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += wheel[w]
        w = (w + 1) % 8
    if n > 1:
        if n > bound * bound and not is_probable_prime(n):
            raise ArithmeticError(f"incomplete factorization, cofactor {n}")
        out[n] = out.get(n, 0) + 1
    return out


def is_probable_prime(n):
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i in range(n + 1) if sieve[i]]
