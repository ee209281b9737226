"""Arithmetic in GF(2^k), polynomial basis.

Elements are plain ints: bit j is the coefficient of X^j.  Scalar functions
(``mul``, ``power``, ...) use carry-less schoolbook multiplication; the
``FieldSpec.v*`` methods work on whole numpy arrays through log/exp tables
and are what the LUT builders use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (BadParameters, DegreeMismatch, ReducibleModulus,
                     UnsupportedDegree, ZeroInverse)

MIN_K = 2
MAX_K = 16


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit patterns."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    """Remainder of a modulo m, both as F2[X] bit patterns."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(m: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(m)//2."""
    d = m.bit_length() - 1
    if d < 1:
        return False
    for p in range(2, 1 << (d // 2 + 1)):
        if poly_mod(m, p) == 0:
            return False
    return True


def smallest_irreducible(k: int) -> int:
    for m in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_irreducible(m):
            return m
    raise AssertionError("no irreducible polynomial of degree %d" % k)


def w2(e: int) -> int:
    """2-weight: number of ones in the binary expansion."""
    return bin(e).count("1")


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldSpec:
    k: int
    modulus: int

    def __post_init__(self):
        if not MIN_K <= self.k <= MAX_K:
            raise UnsupportedDegree(f"k={self.k} outside [{MIN_K}, {MAX_K}]")
        if self.modulus.bit_length() - 1 != self.k:
            raise DegreeMismatch(
                f"modulus {self.modulus:#x} does not have degree {self.k}")
        if not self.modulus & 1 or not is_irreducible(self.modulus):
            raise ReducibleModulus(f"modulus {self.modulus:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.k

    @property
    def group_order(self) -> int:
        return (1 << self.k) - 1

    @property
    def modulus_hex(self) -> str:
        return f"{self.modulus:#x}"

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    # -- table-driven vector arithmetic ------------------------------------

    @cached_property
    def generator(self) -> int:
        """Smallest generator of the multiplicative group."""
        q1 = self.group_order
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(power(self, g, q1 // p) != 1 for p in factors):
                return g
        raise AssertionError("multiplicative group has no generator")

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q1 = self.group_order
        exp = np.empty(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        g = self.generator
        for j in range(q1):
            exp[j] = x
            log[x] = j
            x = mul(self, x, g)
        exp[q1:] = exp[:q1]
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    @cached_property
    def trace_mask(self) -> int:
        """Bit mask t with Tr(a) = parity(a & t)."""
        return sum(1 << j for j in range(self.k) if trace(self, 1 << j))

    def vmul(self, a, b) -> np.ndarray:
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, e: int) -> np.ndarray:
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        q1 = self.group_order
        r = exp[(log[a] * (e % q1)) % q1]
        return np.where(a == 0, 0, r)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroInverse("0 has no inverse")
        return self.vpow(a, self.group_order - 1)

    def vfrob(self, a, j: int) -> np.ndarray:
        return self.vpow(a, 1 << (j % self.k))

    def vtrace(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) & self.trace_mask
        return (np.bitwise_count(a) & 1).astype(np.int64)


def make_field(k: int, modulus: int | None = None) -> FieldSpec:
    """Build a validated field; the default modulus is the smallest irreducible."""
    if not MIN_K <= k <= MAX_K:
        raise UnsupportedDegree(f"k={k} outside [{MIN_K}, {MAX_K}]")
    if modulus is None:
        modulus = smallest_irreducible(k)
    return FieldSpec(k, modulus)


def add(f: FieldSpec, a: int, b: int) -> int:
    return a ^ b


def mul(f: FieldSpec, a: int, b: int) -> int:
    return poly_mod(clmul(a, b), f.modulus)


def power(f: FieldSpec, a: int, e: int) -> int:
    """Square-and-multiply.  power(a, 0) = 1 for every a, including 0."""
    if e < 0:
        raise BadParameters("negative exponent")
    if e == 0:
        return 1
    if a == 0:
        return 0
    e %= f.group_order
    r = 1
    while e:
        if e & 1:
            r = mul(f, r, a)
        a = mul(f, a, a)
        e >>= 1
    return r


def inv(f: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroInverse("0 has no inverse")
    return power(f, a, f.group_order - 1)


def frobenius(f: FieldSpec, a: int, j: int) -> int:
    """a^(2^j), j taken mod k."""
    for _ in range(j % f.k):
        a = mul(f, a, a)
    return a


def trace(f: FieldSpec, a: int) -> int:
    s = 0
    x = a
    for _ in range(f.k):
        s ^= x
        x = mul(f, x, x)
    # s is 0 or 1 for a well-formed field
    return s


def inverse_exponent(i: int, k: int) -> int:
    """Exponent t with x^t the compositional inverse of x^(2^i+1).

    Needs k odd and gcd(i, k) = 1; then t = sum_{j=0}^{(k-1)/2} 2^(2ji)
    reduced mod 2^k - 1.
    """
    if k % 2 == 0 or math.gcd(i, k) != 1:
        raise BadParameters(f"inverse exponent needs k odd and gcd(i,k)=1 (i={i}, k={k})")
    q1 = (1 << k) - 1
    return sum(pow(2, 2 * j * i, q1) for j in range((k - 1) // 2 + 1)) % q1

