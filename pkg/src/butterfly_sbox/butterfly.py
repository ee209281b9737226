"""Open and closed butterflies over GF(2^k)^2 and their lookup tables.

Pairs (x, y) are packed as ``x << k | y``: the left branch sits in the high
k bits, both for inputs and outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadParameters, TooLarge
from .gf2k import FieldSpec, inverse_exponent
from .vbf import Vbf

OPEN = "open"
CLOSED = "closed"
PACKING = "left-high"
MAX_LUT_BITS = 18


def gold_exponent(i: int, t: int, k: int) -> int:
    """(2^i + 1) * 2^t reduced mod 2^k - 1 (reduction keeps x^e unchanged on GF(2^k)*)."""
    return ((1 << i) + 1) * (1 << t) % ((1 << k) - 1)


@dataclass(frozen=True)
class ButterflyParams:
    field: FieldSpec
    i: int | None
    t: int
    alpha: int
    variant: str = CLOSED
    raw_e: int | None = None

    def __post_init__(self):
        k = self.field.k
        if self.variant not in (OPEN, CLOSED):
            raise BadParameters(f"variant must be 'open' or 'closed', not {self.variant!r}")
        if not 0 <= self.alpha < self.field.order:
            raise BadParameters(f"alpha {self.alpha:#x} is not an element of GF(2^{k})")
        if self.raw_e is None:
            if self.i is None or self.i < 1:
                raise BadParameters("Gold parameter i must be >= 1")
            if not 0 <= self.t < k:
                raise BadParameters(f"t={self.t} outside [0, {k - 1}]")
        elif self.raw_e < 1:
            raise BadParameters("exponent must be positive")
        if math.gcd(self.e, self.field.group_order) != 1:
            raise BadParameters(
                f"x^{self.e} is not a permutation of GF(2^{k}) (gcd with {self.field.group_order} != 1)")

    @classmethod
    def gold(cls, field: FieldSpec, i: int, t: int, alpha: int, variant: str = CLOSED):
        return cls(field, i, t, alpha, variant)

    @classmethod
    def from_exponent(cls, field: FieldSpec, e: int, alpha: int, variant: str = CLOSED):
        """Raw-exponent constructor for sweeps over arbitrary e."""
        return cls(field, None, 0, alpha, variant, raw_e=e)

    @property
    def k(self) -> int:
        return self.field.k

    @property
    def e(self) -> int:
        if self.raw_e is not None:
            return self.raw_e
        return gold_exponent(self.i, self.t, self.k)

    @property
    def e_inv(self) -> int:
        """Multiplicative inverse of e mod 2^k - 1."""
        k, q1 = self.k, self.field.group_order
        if self.raw_e is None and k % 2 and math.gcd(self.i, k) == 1:
            # undo the 2^t twist with 2^(k - t), then invert the Gold part
            return inverse_exponent(self.i, k) * pow(2, (k - self.t) % k, q1) % q1
        return pow(self.e, -1, q1)

    @property
    def gold_hypotheses(self) -> bool:
        """k odd and gcd(i, k) = 1, with e given in Gold form."""
        return self.raw_e is None and self.k % 2 == 1 and math.gcd(self.i, self.k) == 1

    @property
    def strict(self) -> bool:
        return self.gold_hypotheses and self.alpha not in (0, 1)

    def with_variant(self, variant: str) -> "ButterflyParams":
        return ButterflyParams(self.field, self.i, self.t, self.alpha, variant, self.raw_e)

    def echo(self) -> dict:
        return {
            "k": self.k, "i": self.i, "t": self.t, "e": self.e,
            "alpha_hex": f"{self.alpha:#x}", "modulus_hex": self.field.modulus_hex,
            "variant": self.variant, "packing": PACKING, "strict": self.strict,
        }

    def header(self) -> str:
        return (f"# butterfly k={self.k} e={self.e} alpha={self.alpha:#x} "
                f"modulus={self.field.modulus_hex} variant={self.variant} packing={PACKING}")


def _out(r, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return int(r)
    return r


def keyed_perm(p: ButterflyParams, z, x):
    """R_z(x) = (x + alpha z)^e + z^e; accepts ints or arrays."""
    f = p.field
    z = np.asarray(z, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    r = f.vpow(x ^ f.vmul(p.alpha, z), p.e) ^ f.vpow(z, p.e)
    return _out(r, z, x)


def keyed_perm_inv(p: ButterflyParams, z, y):
    """R_z^{-1}(y) = (y + z^e)^(1/e) + alpha z."""
    f = p.field
    z = np.asarray(z, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    r = f.vpow(y ^ f.vpow(z, p.e), p.e_inv) ^ f.vmul(p.alpha, z)
    return _out(r, z, y)


def open_eval(p: ButterflyParams, x, y):
    """H(x, y) = (R_w(y), w) with w = R_y^{-1}(x)."""
    w = keyed_perm_inv(p, y, x)
    return keyed_perm(p, w, y), w


def closed_eval(p: ButterflyParams, x, y):
    """V(x, y) = (R_x(y), R_y(x))."""
    return keyed_perm(p, x, y), keyed_perm(p, y, x)


def evaluate(p: ButterflyParams, x, y):
    return open_eval(p, x, y) if p.variant == OPEN else closed_eval(p, x, y)


def materialize_lut(p: ButterflyParams) -> Vbf:
    k = p.k
    if 2 * k > MAX_LUT_BITS:
        raise TooLarge(f"2k = {2 * k} exceeds the {MAX_LUT_BITS}-bit table limit")
    idx = np.arange(1 << (2 * k), dtype=np.int64)
    left, right = evaluate(p, idx >> k, idx & ((1 << k) - 1))
    return Vbf(2 * k, 2 * k, (left << k) | right)


def export_text(p: ButterflyParams, F: Vbf, path) -> None:
    lines = [p.header()] + [str(int(v)) for v in F.lut]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_binary(p: ButterflyParams, F: Vbf, path) -> None:
    """16-bit little-endian words in index order."""
    if F.m > 16:
        raise TooLarge("binary export stores 16-bit words; needs 2k <= 16")
    Path(path).write_bytes(F.lut.astype("<u2").tobytes())


def read_text(path) -> tuple[str, np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0] if lines and lines[0].startswith("#") else ""
    body = lines[1:] if header else lines
    return header, np.array([int(s) for s in body if s.strip()], dtype=np.int64)


def read_binary(path) -> np.ndarray:
    return np.frombuffer(Path(path).read_bytes(), dtype="<u2").astype(np.int64)
