# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Row reduction over GF(p) for word-size primes p < 2**31."""

import numpy as np

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_mod(i64[:, ::1] A, i64 p):
    """Reduce ``A`` (entries in [0, p)) to reduced row echelon form in place.

    Returns the list of pivot columns.
    """
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, piv, nnz
    cdef i64 inv, f, tmp
    cdef i64[::1] nzcols = np.empty(max(n, 1), dtype=np.int64)
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv(A[r, c], p)
        nnz = 0
        for j in range(c, n):
            if A[r, j] != 0:
                A[r, j] = (A[r, j] * inv) % p
                nzcols[nnz] = j
                nnz += 1
        for i in range(m):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            f = p - f
            for k in range(nnz):
                j = nzcols[k]
                A[i, j] = (A[i, j] + f * A[r, j]) % p
        pivots.append(c)
        r += 1
    return pivots
