# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``_kernels_py``."""

from fractions import Fraction
from math import lcm

import numpy as np


cdef tuple _scaled(list coeffs):
    cdef object den = 1
    cdef object c
    for c in coeffs:
        if type(c) is not int:
            den = lcm(den, c.denominator)
    if den == 1:
        return [int(c) for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def rational_convolve(a, b):
    cdef list na, nb, out
    cdef object da, db, den, x, y
    cdef Py_ssize_t i, j, la, lb
    na, da = _scaled(list(a))
    nb, db = _scaled(list(b))
    la = len(na)
    lb = len(nb)
    out = [0] * (la + lb - 1)
    for i in range(la):
        x = na[i]
        if x:
            for j in range(lb):
                y = nb[j]
                if y:
                    out[i + j] += x * y
    den = da * db
    if den == 1:
        return out
    return [Fraction(s, den) for s in out]


cdef void _accumulate(double complex[:, :, :, :, ::1] dW, Py_ssize_t g,
                      double complex[:, ::1] P, double complex[:, ::1] S,
                      double complex sign) noexcept nogil:
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t i, j, r, c
    cdef double complex p
    for i in range(n):
        for r in range(n):
            p = sign * P[i, r]
            if p == 0:
                continue
            for c in range(n):
                for j in range(n):
                    dW[i, j, g, r, c] += p * S[c, j]


cdef void _matmul(double complex[:, ::1] A, double complex[:, ::1] B,
                  double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double complex a
    for i in range(n):
        for j in range(n):
            out[i, j] = 0
        for k in range(n):
            a = A[i, k]
            if a == 0:
                continue
            for j in range(n):
                out[i, j] += a * B[k, j]


def word_jacobian(gens, inv_gens, letters, inverted):
    cdef double complex[:, :, ::1] G_ = np.ascontiguousarray(gens, dtype=complex)
    cdef double complex[:, :, ::1] Gi = np.ascontiguousarray(inv_gens, dtype=complex)
    cdef long[::1] let = np.ascontiguousarray(letters, dtype=np.int_)
    cdef unsigned char[::1] inv = np.ascontiguousarray(inverted, dtype=np.uint8)
    cdef Py_ssize_t ng = G_.shape[0], n = G_.shape[1], L = let.shape[0]
    cdef Py_ssize_t k, g
    prefix_arr = np.zeros((L + 1, n, n), dtype=complex)
    suffix_arr = np.zeros((L + 1, n, n), dtype=complex)
    cdef double complex[:, :, ::1] pre = prefix_arr
    cdef double complex[:, :, ::1] suf = suffix_arr
    tmp_arr = np.zeros((n, n), dtype=complex)
    tmp2_arr = np.zeros((n, n), dtype=complex)
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef double complex[:, ::1] tmp2 = tmp2_arr
    dW_arr = np.zeros((n, n, ng, n, n), dtype=complex)
    cdef double complex[:, :, :, :, ::1] dW = dW_arr
    for k in range(n):
        pre[0, k, k] = 1
        suf[L, k, k] = 1
    with nogil:
        for k in range(L):
            g = let[k]
            if inv[k]:
                _matmul(pre[k], Gi[g], pre[k + 1])
            else:
                _matmul(pre[k], G_[g], pre[k + 1])
        for k in range(L - 1, -1, -1):
            g = let[k]
            if inv[k]:
                _matmul(Gi[g], suf[k + 1], suf[k])
            else:
                _matmul(G_[g], suf[k + 1], suf[k])
        for k in range(L):
            g = let[k]
            if inv[k]:
                _matmul(pre[k], Gi[g], tmp)
                _matmul(Gi[g], suf[k + 1], tmp2)
                _accumulate(dW, g, tmp, tmp2, -1)
            else:
                _accumulate(dW, g, pre[k], suf[k + 1], 1)
    return prefix_arr[L].copy(), dW_arr
