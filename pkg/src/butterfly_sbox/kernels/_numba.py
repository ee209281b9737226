"""numba-compiled kernels.  Loops release the GIL so threads can split work."""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def parity_table(m):
    par = np.zeros(1 << m, dtype=np.int64)
    for x in range(1, 1 << m):
        par[x] = par[x >> 1] ^ (x & 1)
    return par


@njit(cache=True, nogil=True)
def _fwht_inplace(a):
    size = a.shape[0]
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


def fwht(vec):
    a = np.array(vec, dtype=np.int64)
    if a.ndim == 1:
        _fwht_inplace(a)
        return a
    flat = a.reshape(-1, a.shape[-1])
    for row in flat:
        _fwht_inplace(row)
    return a


@njit(cache=True, nogil=True)
def walsh_hist(lut, n, m, b_lo, b_hi):
    size = 1 << n
    par = parity_table(m)
    hist = np.zeros(2 * size + 1, dtype=np.int64)
    w = np.empty(size, dtype=np.int64)
    for b in range(b_lo, b_hi):
        for x in range(size):
            w[x] = 1 - 2 * par[b & lut[x]]
        _fwht_inplace(w)
        for x in range(size):
            hist[w[x] + size] += 1
    return hist


@njit(cache=True, nogil=True)
def ddt_hist(lut, n, m, a_lo, a_hi):
    size = 1 << n
    row = np.zeros(1 << m, dtype=np.int64)
    hist = np.zeros(size + 1, dtype=np.int64)
    for a in range(a_lo, a_hi):
        row[:] = 0
        for x in range(size):
            row[lut[x ^ a] ^ lut[x]] += 1
        for b in range(1 << m):
            hist[row[b]] += 1
    return hist


@njit(cache=True, nogil=True)
def ddt_max(lut, n, m, limit):
    size = 1 << n
    row = np.zeros(1 << m, dtype=np.int64)
    best = 0
    for a in range(1, size):
        row[:] = 0
        for x in range(size):
            d = lut[x ^ a] ^ lut[x]
            row[d] += 1
            if row[d] > best:
                best = row[d]
        if best > limit:
            return best
    return best


@njit(cache=True, nogil=True)
def _moebius_inplace(a):
    size = a.shape[0]
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                a[j + h] ^= a[j]
        h *= 2


def moebius(words):
    a = np.array(words, dtype=np.int64)
    _moebius_inplace(a)
    return a
