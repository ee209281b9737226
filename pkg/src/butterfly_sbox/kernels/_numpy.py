"""Pure-numpy kernels.  Same signatures and results as the numba ones."""
import numpy as np

# rows per block, chosen so a block stays around 2^20 cells
_BLOCK_CELLS = 1 << 20


def parity_table(m):
    return (np.bitwise_count(np.arange(1 << m, dtype=np.int64)) & 1).astype(np.int64)


def fwht(vec):
    """Unnormalised Walsh-Hadamard transform along the last axis."""
    a = np.array(vec, dtype=np.int64)
    shape = a.shape
    size = shape[-1]
    a = a.reshape(-1, size)
    h = 1
    while h < size:
        a = a.reshape(a.shape[0], -1, 2, h)
        x = a[:, :, 0, :]
        y = a[:, :, 1, :]
        a = np.stack((x + y, x - y), axis=2)
        h *= 2
    return a.reshape(shape)


def walsh_hist(lut, n, m, b_lo, b_hi):
    size = 1 << n
    par = parity_table(m)
    hist = np.zeros(2 * size + 1, dtype=np.int64)
    block = max(1, _BLOCK_CELLS >> n)
    for start in range(b_lo, b_hi, block):
        bs = np.arange(start, min(start + block, b_hi), dtype=np.int64)
        signs = 1 - 2 * par[bs[:, None] & lut[None, :]]
        w = fwht(signs)
        hist += np.bincount((w + size).ravel(), minlength=2 * size + 1)
    return hist


def ddt_hist(lut, n, m, a_lo, a_hi):
    size = 1 << n
    out = 1 << m
    xs = np.arange(size, dtype=np.int64)
    hist = np.zeros(size + 1, dtype=np.int64)
    block = max(1, _BLOCK_CELLS >> max(n, m))
    for start in range(a_lo, a_hi, block):
        a = np.arange(start, min(start + block, a_hi), dtype=np.int64)
        d = lut[xs[None, :] ^ a[:, None]] ^ lut[None, :]
        d += (np.arange(len(a), dtype=np.int64) * out)[:, None]
        counts = np.bincount(d.ravel(), minlength=len(a) * out)
        hist += np.bincount(counts, minlength=size + 1)
    return hist


def ddt_max(lut, n, m, limit):
    size = 1 << n
    out = 1 << m
    xs = np.arange(size, dtype=np.int64)
    best = 0
    block = max(1, _BLOCK_CELLS >> max(n, m))
    for start in range(1, size, block):
        a = np.arange(start, min(start + block, size), dtype=np.int64)
        d = lut[xs[None, :] ^ a[:, None]] ^ lut[None, :]
        d += (np.arange(len(a), dtype=np.int64) * out)[:, None]
        best = max(best, int(np.bincount(d.ravel()).max()))
        if best > limit:
            break
    return best


def moebius(words):
    """Binary Moebius transform applied to every output bit at once."""
    a = np.array(words, dtype=np.int64)
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h *= 2
    return a
