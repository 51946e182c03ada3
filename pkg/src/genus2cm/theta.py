"""Genus-2 theta constant Fourier expansions and (l,l)-relation mining.

Expansions follow the 1/8-power convention: with tau = [[t1, t2], [t2, t3]],
set p = e^{2 pi i (t1 - t2)/8}, q = e^{2 pi i t2 / 8}, r = e^{2 pi i (t3 - t2)/8}.
Then

    theta_{(a,b),(c,d)} = (-1)^{(ac+bd)/2} * sum over (x1, x2) in Z^2 of
        (-1)^{x1 c + x2 d} p^{(2 x1 + a)^2} q^{(2 x1 + a + 2 x2 + b)^2} r^{(2 x2 + b)^2}

with integer exponent triples.  Only the 10 even characteristics are nonzero.

Relation mining: homogeneous degree-n monomials in the four fundamental
constants at tau and at l*tau are expanded as truncated series, and the exact
right kernel of the coefficient matrix gives the relation ideal.  For l = 3,
n = 6 this yields the 85 generators cutting out the (3,3)-isogeny
correspondence.
"""

import hashlib
from fractions import Fraction
from math import comb, isqrt
from math import gcd as gcd_int

import numpy as np

from .exactalg import MultiPoly, grevlex_key
from .fastrref import rref_mod
from .series import SeriesPQR

MOD_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579)
# certification moduli stay below 2^25 so int64 matmuls cannot overflow
CERT_PRIMES = (33554393, 33554383, 33554371, 33554347, 33554341, 33554317)


class ThetaChar:
    """Theta characteristic: x = (a, b), y = (c, d) with entries in {0, 1}."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = (x[0] & 1, x[1] & 1)
        self.y = (y[0] & 1, y[1] & 1)

    @property
    def is_odd(self):
        return (self.x[0] * self.y[0] + self.x[1] * self.y[1]) % 2 == 1

    def __eq__(self, other):
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"theta[{self.x},{self.y}]"


ALL_CHARS = [ThetaChar((a, b), (c, d))
             for a in (0, 1) for b in (0, 1) for c in (0, 1) for d in (0, 1)]
EVEN_CHARS = [ch for ch in ALL_CHARS if not ch.is_odd]
ODD_CHARS = [ch for ch in ALL_CHARS if ch.is_odd]

# the four fundamental constants f1..f4 and the companion g
F_CHARS = [ThetaChar((0, 0), (0, 0)),
           ThetaChar((0, 0), (1, 1)),
           ThetaChar((0, 0), (1, 0)),
           ThetaChar((0, 0), (0, 1))]
G_CHAR = ThetaChar((0, 1), (0, 0))


def theta_series(ch, D):
    """Fourier expansion of a theta constant, truncated at total degree D."""
    if ch.is_odd:
        return SeriesPQR.zero(D)
    a, b = ch.x
    c, d = ch.y
    sign0 = 1 if ((a * c + b * d) // 2) % 2 == 0 else -1
    out = {}
    # u = 2 x1 + a, v = 2 x2 + b; total degree u^2 + (u+v)^2 + v^2
    um = isqrt(D) + 1
    for u in range(-um, um + 1):
        if (u - a) % 2:
            continue
        uu = u * u
        if uu > D:
            continue
        for v in range(-um, um + 1):
            if (v - b) % 2:
                continue
            e = (uu, (u + v) * (u + v), v * v)
            if e[0] + e[1] + e[2] > D:
                continue
            x1 = (u - a) // 2
            x2 = (v - b) // 2
            s = -1 if (x1 * c + x2 * d) % 2 else 1
            out[e] = out.get(e, 0) + s
    ser = SeriesPQR(D, out)
    return ser.scalar_mul(sign0)


def f_series(i, D):
    """Quotient series f_i / f_4 = theta_i * theta_4^{-1}, truncated at D.

    i is 1-based; f_series(4, D) is identically 1.
    """
    if i not in (1, 2, 3, 4):
        raise ValueError("i must be in 1..4")
    num = theta_series(F_CHARS[i - 1], D)
    den = theta_series(F_CHARS[3], D)
    return num * den.inverse()


def g_series(D):
    """Quotient series g / f_4 = theta_{(0,1),(0,0)} * theta_4^{-1}."""
    return theta_series(G_CHAR, D) * theta_series(F_CHARS[3], D).inverse()


# ---------------------------------------------------------------------------
# mining engine
#
# All eight mined series (the four fundamental constants at tau and at
# l*tau) have exponent triples divisible by 4, so internally we work on the
# quarter-exponent lattice: dense int64 cubes indexed by exponents of
# P = p^4, Q = q^4, R = r^4 up to total degree M = D // 4.

VAR_NAMES = ("W1", "X1", "Y1", "Z1", "W2", "X2", "Y2", "Z2")


def _theta_quarter_terms(ci, l, M):
    """Sparse terms [(i, j, k, sign)] of theta f_{ci+1}(l*tau) on the quarter lattice."""
    c, d = F_CHARS[ci].y
    out = {}
    mm = isqrt(M // l) + 1
    for m in range(-mm, mm + 1):
        for n in range(-mm, mm + 1):
            e = (l * m * m, l * (m + n) * (m + n), l * n * n)
            if e[0] + e[1] + e[2] > M:
                continue
            s = -1 if (m * c + n * d) % 2 else 1
            out[e] = out.get(e, 0) + s
    return [(i, j, k, s) for (i, j, k), s in out.items() if s]


def _atoms_dense(l, M):
    """Dense quarter-lattice cubes for the 8 atoms, plus their exact L1 norms."""
    atoms = []
    l1s = []
    for blk, ll in ((0, 1), (1, l)):
        for ci in range(4):
            terms = _theta_quarter_terms(ci, ll, M)
            A = np.zeros((M + 1, M + 1, M + 1), dtype=np.int64)
            for i, j, k, s in terms:
                A[i, j, k] = s
            atoms.append(A)
            l1s.append(sum(abs(s) for _, _, _, s in terms))
    return atoms, l1s


def _shift_mul(A, terms, M):
    """Multiply dense cube A by a sparse theta (list of (i,j,k,s) shifts)."""
    out = np.zeros_like(A)
    n = M + 1
    for i, j, k, s in terms:
        if s == 1:
            out[i:, j:, k:] += A[: n - i, : n - j, : n - k]
        elif s == -1:
            out[i:, j:, k:] -= A[: n - i, : n - j, : n - k]
        else:
            out[i:, j:, k:] += s * A[: n - i, : n - j, : n - k]
    return out


def degree_monomials(n, nvars=8):
    """Exponent vectors of all degree-n monomials, grevlex descending."""
    monos = []

    def rec(pos, rem, cur):
        if pos == nvars - 1:
            monos.append(tuple(cur + [rem]))
            return
        for e in range(rem, -1, -1):
            rec(pos + 1, rem - e, cur + [e])

    rec(0, n, [])
    monos.sort(key=grevlex_key, reverse=True)
    return monos


def _simplex_index(M):
    """Flat index map for {(i,j,k): i+j+k <= M} and its inverse list."""
    idx = {}
    inv = []
    for i in range(M + 1):
        for j in range(M + 1 - i):
            for k in range(M + 1 - i - j):
                idx[(i, j, k)] = len(inv)
                inv.append((i, j, k))
    return idx, inv


def build_monomial_matrix(l, n, D, progress=None):
    """Exact integer coefficient matrix of all degree-n monomials.

    Returns (matrix int64 array of shape (#monomials of (p,q,r), #columns),
    monomial exponent vectors in column order, quarter degree M).  Raises
    OverflowError only if the certified L1 bound does not fit in int64
    (never happens at the scales used here).
    """
    M = D // 4
    atoms, l1s = _atoms_dense(l, M)
    # worst-case product coefficient bound: product of the largest 6 L1 norms
    bound = 1
    for v in sorted(l1s, reverse=True)[:n]:
        bound *= v
    if bound >= 2 ** 62:
        raise OverflowError("series coefficient bound exceeds int64")
    monos = degree_monomials(n)
    idx, inv = _simplex_index(M)
    terms_per_atom = [_theta_quarter_terms(ci, ll, M)
                      for ll in (1, l) for ci in range(4)]
    mat = np.zeros((len(monos), len(inv)), dtype=np.int64)
    sel = _simplex_selector(M)
    # walk monomials in atom-sequence order so consecutive ones share prefixes
    order = sorted(range(len(monos)), key=lambda t: _atom_seq(monos[t]))
    stack_seq = ()
    stack = []
    for cnt, t in enumerate(order):
        seq = _atom_seq(monos[t])
        cp = 0
        while cp < len(stack) and cp < len(seq) and stack_seq[cp] == seq[cp]:
            cp += 1
        del stack[cp:]
        for a in seq[cp:]:
            if not stack:
                stack.append(atoms[a].copy())
            else:
                stack.append(_shift_mul(stack[-1], terms_per_atom[a], M))
        stack_seq = seq
        mat[t] = stack[-1][sel]
        if progress and cnt % 200 == 0:
            progress(cnt, len(monos))
    return mat.T.copy(), monos, M


def _atom_seq(expvec):
    seq = []
    for a, e in enumerate(expvec):
        seq.extend([a] * e)
    return tuple(seq)


def _simplex_selector(M):
    ii, jj, kk = np.indices((M + 1, M + 1, M + 1))
    mask = (ii + jj + kk) <= M
    return mask


def _rational_reconstruct(a, p):
    """Balanced rational reconstruction of a mod p (Wang's algorithm)."""
    bound = isqrt(p // 2)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or s1 == 0:
        raise ArithmeticError("rational reconstruction failed")
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


class InsufficientPrecisionError(ValueError):
    pass


class RelationIdeal:
    """Stored homogeneous relation ideal for the (l,l)-correspondence."""

    def __init__(self, l, degree, polys, D, normalized=True):
        self.l = l
        self.degree = degree
        self.polys = list(polys)
        self.D = D
        self.normalized = normalized

    def __len__(self):
        return len(self.polys)

    def serialize(self):
        head = f"V f l={self.l} n={self.degree} count={len(self.polys)} D={self.D}"
        blocks = [p.serialize() for p in self.polys]
        return head + "\n\n" + "\n\n".join(blocks) + "\n"

    @classmethod
    def deserialize(cls, text):
        blocks = text.strip().split("\n\n")
        head = blocks[0].split()
        kv = dict(kvpair.split("=") for kvpair in head[2:])
        polys = [MultiPoly.deserialize(b, 8) for b in blocks[1:]]
        return cls(int(kv["l"]), int(kv["n"]), polys, int(kv["D"]))

    def digest(self):
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.serialize())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.deserialize(fh.read())

    def bidegrees(self):
        """Set of (deg in tau-block, deg in l*tau-block) over all terms."""
        out = set()
        for p in self.polys:
            for e in p.terms:
                out.add((sum(e[:4]), sum(e[4:])))
        return out


def occupied_monomials_estimate(l, n, D):
    """Number of (p,q,r)-monomials the degree-n products can occupy at D.

    Boolean support dilation (ignores coefficient cancellation, which is
    rare for these lattices), so this closely tracks the true row count.
    """
    M = D // 4
    S = np.zeros((M + 1, M + 1, M + 1), dtype=bool)
    for ll in (1, l):
        for ci in range(4):
            for i, j, k, _ in _theta_quarter_terms(ci, ll, M):
                S[i, j, k] = True
    cur = S.copy()
    nn = M + 1
    for _ in range(n - 1):
        nxt = np.zeros_like(cur)
        for i, j, k in zip(*np.nonzero(S)):
            nxt[i:, j:, k:] |= cur[: nn - i, : nn - j, : nn - k]
        cur = nxt
    return int(cur[_simplex_selector(M)].sum())


def default_mining_degree(n=6, nvars=8, factor=4.5, l=3):
    """Smallest D (multiple of 4) whose occupied row count is comfortable.

    The matrix needs strictly more independent rows than its rank
    (columns minus kernel); a 4.5x margin over the column count is what it
    empirically takes for the rank to saturate for l = 3, n = 6 (D = 220).
    """
    cols = comb(n + nvars - 1, nvars - 1)
    D = 40
    while occupied_monomials_estimate(l, n, D) < factor * cols:
        D += 20
    return D


def mine_relations(l, n, D=None, progress=None):
    """Mine the degree-n homogeneous relations between f_i(tau), f_i(l*tau).

    Returns a RelationIdeal whose generators are content-1 integer
    polynomials in (W1, X1, Y1, Z1, W2, X2, Y2, Z2), canonically normalized:
    the kernel basis is in reduced row echelon form with respect to the
    grevlex-descending monomial order.

    Exactness: the kernel is found modulo a word-size prime and every
    reconstructed vector is certified by checking M . v = 0 through enough
    independent moduli to exceed the exact coefficient bound.
    """
    if D is None:
        D = default_mining_degree(n)
    mat, monos, M = build_monomial_matrix(l, n, D, progress=progress)
    mat = mat[np.any(mat != 0, axis=1)]
    rows, cols = mat.shape
    if rows < cols:
        need = default_mining_degree(n, factor=3)
        raise InsufficientPrecisionError(
            f"matrix has {rows} occupied rows < {cols} columns; use D >= {need}")
    p = MOD_PRIMES[0]
    work = mat % p
    piv = rref_mod(work, p)
    free = [c for c in range(cols) if c not in set(piv)]
    piv_index = {c: i for i, c in enumerate(piv)}
    vectors = []
    for fc in free:
        entries = {fc: Fraction(1)}
        col = work[: len(piv), fc]
        for c in piv:
            val = int(col[piv_index[c]])
            if val:
                entries[c] = -_rational_reconstruct(val, p)
        den = 1
        for v in entries.values():
            den = den * v.denominator // gcd_int(den, v.denominator)
        vec = {c: int(v * den) for c, v in entries.items()}
        g = 0
        for v in vec.values():
            g = gcd_int(g, abs(v))
        if g > 1:
            vec = {c: v // g for c, v in vec.items()}
        lead = min(vec)  # grevlex-descending column order: smallest index leads
        if vec[lead] < 0:
            vec = {c: -v for c, v in vec.items()}
        vectors.append(vec)
    _certify_kernel(mat, vectors)
    polys = []
    for vec in vectors:
        terms = {monos[c]: Fraction(v) for c, v in vec.items()}
        polys.append(MultiPoly(8, terms))
    # order generators by their leading (free) column
    return RelationIdeal(l, n, polys, D)


def _certify_kernel(mat, vectors):
    """Exact proof that every sparse vector lies in the kernel of mat.

    Checks M.v = 0 modulo enough 25-bit primes that their product exceeds
    the exact bound |M.v|_inf <= nnz(v) * max|M| * max|v|; entries and
    residues are small enough that the int64 matmuls are exact.
    """
    cmax = int(np.abs(mat).max())
    for vec in vectors:
        vmax = max(abs(v) for v in vec.values()) if vec else 0
        bound = 2 * len(vec) * cmax * vmax + 1
        prod = 1
        used = []
        for q in CERT_PRIMES:
            prod *= q
            used.append(q)
            if prod > bound:
                break
        if prod <= bound:
            raise ArithmeticError("not enough certification moduli")
        cols = np.array(sorted(vec), dtype=np.int64)
        vals = np.array([vec[c] for c in sorted(vec)], dtype=np.int64)
        sub = mat[:, cols]
        for q in used:
            acc = (sub % q) @ (vals % q) % q
            if np.any(acc):
                raise ArithmeticError("kernel certification failed")


def annihilation_check(ideal, D):
    """Exact check that every generator kills the expansions at precision D.

    Returns the list of offending generator indices (empty when all pass).
    """
    M = D // 4
    atoms, l1s = _atoms_dense(ideal.l, M)
    terms_per_atom = [_theta_quarter_terms(ci, ll, M)
                      for ll in (1, ideal.l) for ci in range(4)]
    sel = _simplex_selector(M)
    bad = []
    cache = {}

    def mono_vec(e):
        seq = _atom_seq(e)
        if seq in cache:
            return cache[seq]
        cur = atoms[seq[0]].copy()
        for a in seq[1:]:
            cur = _shift_mul(cur, terms_per_atom[a], M)
        v = cur[sel]
        if len(cache) < 2200:
            cache[seq] = v
        return v

    for gi, poly in enumerate(ideal.polys):
        # exact coefficient bound decides whether int64 accumulation is safe
        bound = 0
        for e, c in poly.terms.items():
            lb = 1
            for a, k in enumerate(e):
                lb *= l1s[a] ** k
            bound += abs(int(c)) * lb
        exact = bound >= 2 ** 62
        acc = None
        for e, c in poly.terms.items():
            v = mono_vec(e)
            term = (v.astype(object) if exact else v) * int(c)
            acc = term if acc is None else acc + term
        if acc is None or np.any(acc != 0):
            bad.append(gi)
    return bad


def verify_ideal(ideal, extra_precision=8, solver=None, rng_seed=0):
    """Verification report for a mined or loaded relation ideal.

    Checks: (i) every generator is homogeneous of the stated degree;
    (ii) every generator annihilates the theta expansions at D + extra
    precision; (iii) when a solver is supplied, specializing at a random
    valid theta tuple gives a zero-dimensional system of degree
    (l^4-1)/(l-1); (iv) bidegree balance across the two variable blocks is
    recorded.
    """
    report = {"count": len(ideal.polys), "degree": ideal.degree, "l": ideal.l}
    bad_hom = [i for i, p in enumerate(ideal.polys)
               if any(sum(e) != ideal.degree for e in p.terms)]
    report["homogeneous"] = not bad_hom
    report["bad_homogeneous"] = bad_hom
    bad = annihilation_check(ideal, ideal.D + extra_precision)
    report["annihilates"] = not bad
    report["bad_generators"] = bad
    report["bidegrees"] = sorted(ideal.bidegrees())
    report["bidegree_balanced"] = all(
        a == b for a, b in report["bidegrees"])
    cmax = 0
    coeffs = set()
    for p in ideal.polys:
        for c in p.terms.values():
            coeffs.add(int(c))
            cmax = max(cmax, abs(int(c)))
    report["max_coefficient"] = cmax
    report["seven_smooth"] = all(_is_7smooth(abs(c)) for c in coeffs if c)
    if solver is not None:
        report["projection_degree"] = solver(ideal, rng_seed)
        report["expected_degree"] = (ideal.l ** 4 - 1) // (ideal.l - 1)
    return report


def _is_7smooth(n):
    if n == 0:
        return True
    for p in (2, 3, 5, 7):
        while n % p == 0:
            n //= p
    return n == 1
