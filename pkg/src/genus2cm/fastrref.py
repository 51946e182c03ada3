"""Row reduction mod a word-size prime, jit-compiled when numba is present.

The pure-numpy fallback produces bit-identical results; numba only changes
speed.  Inputs are int64 arrays with entries already reduced into [0, p).
"""

import numpy as np

try:
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _rref_mod_numpy(A, p):
    rows, cols = A.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[np.ix_(nzr, np.arange(c, cols))] = (
                A[np.ix_(nzr, np.arange(c, cols))]
                - np.outer(col[nzr], A[r, c:])) % p
        piv_cols.append(c)
        r += 1
    return piv_cols


if HAVE_NUMBA:

    @njit(cache=True)
    def _pow_mod(a, e, p):
        out = 1
        b = a % p
        while e:
            if e & 1:
                out = out * b % p
            b = b * b % p
            e >>= 1
        return out

    @njit(cache=True, parallel=True)
    def _rref_mod_jit(A, p):
        rows, cols = A.shape
        piv = np.empty(cols, dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            pr = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(c, cols):
                    t = A[r, j]
                    A[r, j] = A[pr, j]
                    A[pr, j] = t
            inv = _pow_mod(A[r, c], p - 2, p)
            for j in range(c, cols):
                A[r, j] = A[r, j] * inv % p
            for i in prange(rows):
                if i != r and A[i, c] != 0:
                    f = A[i, c]
                    for j in range(c, cols):
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
            piv[npiv] = c
            npiv += 1
            r += 1
        return piv[:npiv]

    def rref_mod(A, p):
        return [int(c) for c in _rref_mod_jit(A, p)]

else:  # pragma: no cover

    def rref_mod(A, p):
        return _rref_mod_numpy(A, p)
