"""Derive the universal Mestre conic/cubic coefficient formulas.

For a binary sextic f, the order-2 covariants
    i  = (f, f)^4,  y1 = (f, i)^4,  y2 = (i, y1)^2,  y3 = (i, y2)^2
give a map x -> (y1 : y2 : y3) whose image is a conic; the adjugate
construction Q = adj(G)^T M adj(G) (G = coefficient matrix of the y's,
M the Veronese conic) produces a conic matrix whose entries are invariant
polynomials; the cubic T with T(y1, y2, y3)(x) = f(x) on the slice
t[u1^3] = t[u1^2 u2] = t[u1^2 u3] = 0 has invariant-ratio coefficients.

This script interpolates those coefficients as elements of
Q[I2, I4, I6, I10] (numerator/denominator for the cubic) by sampling random
sextics over two large prime fields, solving the linear systems mod p, and
rationally reconstructing.  The results are frozen into genus2cm/mestre.py
and spot-verified at runtime by the test suite.
"""

import random
import sys
from fractions import Fraction
from math import comb, gcd, isqrt

sys.path.insert(0, "src")

from genus2cm.ffield import get_context, from_ints
from genus2cm.invariants import ic_from_sextic

PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
          2147483543, 2147483497)


# binary forms: coefficient list c[0..m], form = sum c_i x^i z^(m-i), over F_p

def dx(c, p):
    return [c[i + 1] * (i + 1) % p for i in range(len(c) - 1)]


def dz(c, p):
    m = len(c) - 1
    return [c[i] * (m - i) % p for i in range(m)]


def fmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def transvectant(g, h, r, p):
    out = None
    for k in range(r + 1):
        gg = list(g)
        hh = list(h)
        for _ in range(r - k):
            gg = dx(gg, p)
        for _ in range(k):
            gg = dz(gg, p)
        for _ in range(k):
            hh = dx(hh, p)
        for _ in range(r - k):
            hh = dz(hh, p)
        term = fmul(gg, hh, p)
        s = comb(r, k) * (-1) ** k
        term = [x * s % p for x in term]
        if out is None:
            out = term
        else:
            out = [(x + y) % p for x, y in zip(out, term)]
    return out


def covariants(f, p):
    i = transvectant(f, f, 4, p)
    y1 = transvectant(f, i, 4, p)
    y2 = transvectant(i, y1, 2, p)
    y3 = transvectant(i, y2, 2, p)
    return y1, y2, y3


def adjugate3(G, p):
    def m2(a, b, c, d):
        return (a * d - b * c) % p
    A = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [t for t in range(3) if t != i]
            c = [t for t in range(3) if t != j]
            minor = m2(G[r[0]][c[0]], G[r[0]][c[1]], G[r[1]][c[0]], G[r[1]][c[1]])
            A[j][i] = minor * (-1) ** (i + j) % p
    return A


def conic_matrix(y1, y2, y3, p):
    G = [list(y1), list(y2), list(y3)]          # rows over basis z^2, xz, x^2
    adj = adjugate3(G, p)
    M = [[0, 0, 1], [0, -2, 0], [1, 0, 0]]       # vanishes on (s^2, st, t^2)
    out = [[0] * 3 for _ in range(3)]
    for a in range(3):
        for b in range(3):
            s = 0
            for r in range(3):
                for t in range(3):
                    s += adj[r][a] * M[r][t] * adj[t][b]
            out[a][b] = s % p
    return out


MONOS3 = [(3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2),
          (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)]
SLICE_ZERO = [(3, 0, 0), (2, 1, 0), (2, 0, 1)]
CUBIC_FREE = [m for m in MONOS3 if m not in SLICE_ZERO]


def cubic_coeffs(f, y1, y2, y3, p):
    """Solve T(y1,y2,y3) = f with the slice coefficients zero (7 unknowns)."""
    ys = {1: y1, 2: y2, 3: y3}
    cols = []
    for mono in CUBIC_FREE:
        term = [1]
        for var, e in enumerate(mono, start=1):
            for _ in range(e):
                term = fmul(term, ys[var], p)
        cols.append(term)
    # term lists have length 7 (degree 6 forms)
    A = [[cols[j][i] for j in range(7)] for i in range(7)]
    b = [f[i] % p for i in range(7)]
    sol = solve_mod(A, b, p)
    return sol


def solve_mod(A, b, p):
    n = len(A)
    M = [row[:] + [bb] for row, bb in zip(A, b)]
    r = 0
    piv = []
    for c in range(n):
        pr = None
        for i in range(r, n):
            if M[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] % p:
                fct = M[i][c]
                M[i] = [(x - fct * y) % p for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if r < n:
        return None
    sol = [0] * n
    for i, c in enumerate(piv):
        sol[c] = M[i][n]
    return sol


def invariant_monomials(weight):
    out = []
    for e2 in range(weight // 2 + 1):
        for e4 in range(weight // 4 + 1):
            for e6 in range(weight // 6 + 1):
                rest = weight - 2 * e2 - 4 * e4 - 6 * e6
                if rest >= 0 and rest % 10 == 0:
                    out.append((e2, e4, e6, rest // 10))
    return out


def eval_mono(mono, I, p):
    e2, e4, e6, e10 = mono
    return pow(I[0], e2, p) * pow(I[1], e4, p) % p * pow(I[2], e6, p) % p \
        * pow(I[3], e10, p) % p


def nullspace_mod(rows, p):
    n = len(rows[0])
    M = [r[:] for r in rows]
    m = len(M)
    r = 0
    piv = []
    for c in range(n):
        pr = None
        for i in range(r, m):
            if M[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] % p:
                fct = M[i][c]
                M[i] = [(x - fct * y) % p for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv]
    out = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, c in enumerate(piv):
            v[c] = (-M[i][fc]) % p
        out.append(v)
    return out


def samples_for_prime(p, count, seed):
    ctx = get_context(p, 1)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        co = [rng.randrange(p) for _ in range(6)] + [1 + rng.randrange(p - 1)]
        try:
            ic = ic_from_sextic(from_ints(ctx, co))
        except Exception:
            continue
        I = tuple(x.to_int() for x in ic)
        if 0 in I:
            continue
        y1, y2, y3 = covariants([c % p for c in co], p)
        Q = conic_matrix(y1, y2, y3, p)
        T = cubic_coeffs([c % p for c in co], y1, y2, y3, p)
        if T is None:
            continue
        out.append((I, Q, T))
    return out


def rat_reconstruct(a, p):
    bound = isqrt(p // 2)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise ArithmeticError
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


def interpolate_poly(pairs, weight, p, verify):
    """pairs: [(I, value)]; find P in Q[I] of weighted degree `weight`."""
    monos = invariant_monomials(weight)
    rows = []
    for I, val in pairs:
        rows.append([eval_mono(m, I, p) for m in monos] + [(-val) % p])
    ns = nullspace_mod(rows, p)
    cands = [v for v in ns if v[-1] % p]
    if len(cands) != 1:
        return None
    v = cands[0]
    inv = pow(v[-1], p - 2, p)
    coeffs = [x * inv % p for x in v[:-1]]
    for I, val in verify:
        acc = 0
        for c, m in zip(coeffs, monos):
            acc = (acc + c * eval_mono(m, I, p)) % p
        if acc != val % p:
            return None
    return monos, coeffs


def interpolate_ratio(pairs, wnum, wden, p, verify):
    """find P/Q with P, Q in Q[I], weighted degrees wnum, wden."""
    mn = invariant_monomials(wnum)
    md = invariant_monomials(wden)
    rows = []
    for I, val in pairs:
        row = [eval_mono(m, I, p) for m in mn]
        row += [(-val * eval_mono(m, I, p)) % p for m in md]
        rows.append(row)
    ns = nullspace_mod(rows, p)
    if not ns:
        return None
    # prefer a nullspace vector with a nonzero denominator part
    for v in ns:
        num, den = v[:len(mn)], v[len(mn):]
        if not any(den):
            continue
        ok = True
        for I, val in verify:
            nv = sum(c * eval_mono(m, I, p) for c, m in zip(num, mn)) % p
            dv = sum(c * eval_mono(m, I, p) for c, m in zip(den, md)) % p
            if dv == 0 or nv != val * dv % p:
                ok = False
                break
        if ok:
            return (mn, num), (md, den)
    return None


def reconstruct_poly(monos, coeff_lists, primes):
    out = {}
    for i, m in enumerate(monos):
        vals = [cl[i] for cl in coeff_lists]
        # CRT then rational reconstruction
        x, mod = 0, 1
        for v, p in zip(vals, primes):
            t = (v - x) * pow(mod, -1, p) % p
            x += mod * t
            mod *= p
        bound = isqrt(mod // 2)
        r0, r1 = mod, x % mod
        s0, s1 = 0, 1
        while r1 > bound:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        assert s1 != 0 and abs(s1) <= bound
        fr = Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)
        if fr:
            out[m] = fr
    return out


def main():
    NP = 6
    nsamples = 140
    per_prime = {}
    for p in PRIMES[:NP]:
        per_prime[p] = samples_for_prime(p, nsamples, seed=11)
        print(f"samples mod {p}: {len(per_prime[p])}")
    conic_exprs = {}
    weights = {(0, 0): 24, (0, 1): 22, (0, 2): 20, (1, 1): 20, (1, 2): 18,
               (2, 2): 16}
    for (a, b), w in weights.items():
        per_p_coeffs = []
        monos_ref = None
        for p in PRIMES[:NP]:
            S = per_prime[p]
            pairs = [(I, Q[a][b]) for I, Q, T in S[:90]]
            verify = [(I, Q[a][b]) for I, Q, T in S[90:]]
            got = interpolate_poly(pairs, w, p, verify)
            assert got, (a, b, w)
            monos, coeffs = got
            monos_ref = monos
            per_p_coeffs.append(coeffs)
        expr = reconstruct_poly(monos_ref, per_p_coeffs, PRIMES[:NP])
        conic_exprs[(a, b)] = expr
        print(f"conic[{a}][{b}] weight {w}: {len(expr)} terms")
    cubic_exprs = {}
    dvec = {1: 3, 2: 5, 3: 7}
    for idx, mono in enumerate(CUBIC_FREE):
        wt = sum(e * dvec[v] for v, e in enumerate(mono, start=1))
        # coefficient degree 1 - wt; try denominators of increasing weight
        got_expr = None
        for wden in range(0, 41, 2):
            wnum = wden + 1 - wt
            if wnum < 0 or (wnum % 2):
                continue
            ok_all = []
            monos_pair = None
            for p in PRIMES[:NP]:
                S = per_prime[p]
                pairs = [(I, T[idx]) for I, Q, T in S[:90]]
                verify = [(I, T[idx]) for I, Q, T in S[90:]]
                got = interpolate_ratio(pairs, wnum, wden, p, verify)
                if got is None:
                    ok_all = None
                    break
                monos_pair = (got[0][0], got[1][0])
                ok_all.append((got[0][1], got[1][1]))
            if ok_all:
                num_expr = reconstruct_poly(monos_pair[0],
                                            [x[0] for x in ok_all], PRIMES[:NP])
                den_expr = reconstruct_poly(monos_pair[1],
                                            [x[1] for x in ok_all], PRIMES[:NP])
                got_expr = (num_expr, den_expr, wnum, wden)
                break
        assert got_expr, f"cubic coefficient {mono} not interpolated"
        cubic_exprs[mono] = got_expr
        print(f"cubic {mono}: num {len(got_expr[0])} terms / den {len(got_expr[1])} terms "
              f"(weights {got_expr[2]}/{got_expr[3]})")
    # emit
    with open("/tmp/mestre_data.py", "w") as fh:
        fh.write("CONIC = {\n")
        for k, expr in conic_exprs.items():
            fh.write(f"    {k}: {{\n")
            for m, c in sorted(expr.items()):
                fh.write(f"        {m}: ({c.numerator}, {c.denominator}),\n")
            fh.write("    },\n")
        fh.write("}\n\nCUBIC = {\n")
        for k, (num, den, wn, wd) in cubic_exprs.items():
            fh.write(f"    {k}: (\n        {{\n")
            for m, c in sorted(num.items()):
                fh.write(f"            {m}: ({c.numerator}, {c.denominator}),\n")
            fh.write("        },\n        {\n")
            for m, c in sorted(den.items()):
                fh.write(f"            {m}: ({c.numerator}, {c.denominator}),\n")
            fh.write("        }),\n")
        fh.write("}\n")
    print("wrote /tmp/mestre_data.py")


if __name__ == "__main__":
    main()
