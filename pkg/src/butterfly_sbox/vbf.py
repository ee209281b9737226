"""Property analysis of vectorial Boolean functions given as lookup tables.

Walsh values use the bit-pattern dot product <a, x> instead of the trace
pairing Tr(ax); the two differ by a fixed invertible relabelling of a (and
of b), so value multisets, nonlinearity and the degree bound are the same.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BadRange, ShapeMismatch, SingularMatrix, TooLarge

MAX_SPECTRAL_BITS = 18
MAX_FULL_DDT_BITS = 12


@dataclass(frozen=True, eq=False)
class Vbf:
    """n input bits -> m output bits, stored as a table of 2^n entries."""

    n: int
    m: int
    lut: np.ndarray

    def __post_init__(self):
        lut = np.ascontiguousarray(self.lut, dtype=np.int64)
        if lut.ndim != 1 or lut.shape[0] != 1 << self.n:
            raise ShapeMismatch(f"table has {lut.shape} entries, expected {1 << self.n}")
        if lut.size and (lut.min() < 0 or lut.max() >= 1 << self.m):
            raise ShapeMismatch(f"table entries must be {self.m}-bit patterns")
        lut.setflags(write=False)
        object.__setattr__(self, "lut", lut)

    @classmethod
    def from_table(cls, table, m: int | None = None) -> "Vbf":
        lut = np.asarray(table, dtype=np.int64)
        n = int(lut.shape[0]).bit_length() - 1
        if m is None:
            m = max(1, int(lut.max()).bit_length()) if lut.size else 1
        return cls(n, m, lut)

    @classmethod
    def identity(cls, n: int) -> "Vbf":
        return cls(n, n, np.arange(1 << n, dtype=np.int64))

    def __len__(self):
        return 1 << self.n

    def __eq__(self, other):
        if not isinstance(other, Vbf):
            return NotImplemented
        return self.n == other.n and self.m == other.m and np.array_equal(self.lut, other.lut)

    __hash__ = None


def _chunks(lo: int, hi: int, parts: int):
    parts = max(1, min(parts, hi - lo))
    step = -(-(hi - lo) // parts)
    return [(s, min(s + step, hi)) for s in range(lo, hi, step)]


def _summed(kernel, F: Vbf, lo: int, hi: int, workers: int) -> np.ndarray:
    if hi <= lo:
        return None
    ranges = _chunks(lo, hi, workers)
    if len(ranges) == 1:
        return kernel(F.lut, F.n, F.m, lo, hi)
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        parts = list(pool.map(lambda r: kernel(F.lut, F.n, F.m, r[0], r[1]), ranges))
    # integer sums: merge order does not matter
    return np.sum(parts, axis=0)


# -- differential properties ------------------------------------------------

def differential_uniformity(F: Vbf, workers: int = 1) -> tuple[int, dict[int, int]]:
    """delta_F and the tally {count: how many (a != 0, b) have that count}."""
    hist = _summed(kernels.ddt_hist, F, 1, 1 << F.n, workers)
    if hist is None:
        return 0, {}
    spectrum = {int(v): int(c) for v, c in enumerate(hist) if c}
    return max(spectrum), spectrum


def ddt(F: Vbf) -> np.ndarray:
    """Full DDT, rows indexed by a (row 0 included).  Only for n, m <= 12."""
    if max(F.n, F.m) > MAX_FULL_DDT_BITS:
        raise TooLarge(f"full DDT limited to {MAX_FULL_DDT_BITS} bits")
    size = 1 << F.n
    xs = np.arange(size)
    table = np.zeros((size, 1 << F.m), dtype=np.int64)
    for a in range(size):
        table[a] = np.bincount(F.lut[xs ^ a] ^ F.lut, minlength=1 << F.m)
    return table


def is_apn(F: Vbf) -> bool:
    return kernels.ddt_max(F.lut, F.n, F.m, 2) <= 2


# -- Walsh spectrum -----------------------------------------------------------

def walsh_value(F: Vbf, a: int, b: int) -> int:
    x = np.arange(1 << F.n, dtype=np.int64)
    e = np.bitwise_count((b & F.lut) ^ (a & x)) & 1
    return int((1 - 2 * e.astype(np.int64)).sum())


def walsh_column(F: Vbf, b: int) -> np.ndarray:
    """W_F(a, b) for every a."""
    par = np.bitwise_count(b & F.lut) & 1
    return kernels.fwht(1 - 2 * par.astype(np.int64))


def walsh_spectrum(F: Vbf, workers: int = 1) -> tuple[dict[int, int], int]:
    """Multiset {W_F(a, b): multiplicity} over all a and b != 0, plus NL."""
    if F.n > MAX_SPECTRAL_BITS:
        raise TooLarge(f"Walsh sweep limited to n <= {MAX_SPECTRAL_BITS}")
    size = 1 << F.n
    hist = _summed(kernels.walsh_hist, F, 1, 1 << F.m, workers)
    spectrum = {int(v) - size: int(c) for v, c in enumerate(hist) if c}
    return spectrum, nonlinearity_from_spectrum(F.n, spectrum)


def nonlinearity_from_spectrum(n: int, spectrum) -> int:
    peak = max(abs(v) for v in spectrum)
    return (1 << (n - 1)) - peak // 2


def walsh_divisibility_degree_bound(F: Vbf, spectrum: dict[int, int] | None = None) -> int:
    """n - l + 1 where 2^l is the largest power of two dividing every W_F(a, b != 0)."""
    if spectrum is None:
        spectrum, _ = walsh_spectrum(F)
    nonzero = [abs(v) for v in spectrum if v]
    if not nonzero:
        l = F.n + 1
    else:
        l = min((v & -v).bit_length() - 1 for v in nonzero)
    return F.n - l + 1


# -- ANF and degree -------------------------------------------------------------

def anf_words(F: Vbf) -> np.ndarray:
    """Entry u has bit j set iff monomial x^u appears in output bit j."""
    return kernels.moebius(F.lut)


def anf(F: Vbf) -> list[set[int]]:
    words = anf_words(F)
    return [set(np.flatnonzero((words >> j) & 1).tolist()) for j in range(F.m)]


def _degree_of_mask(words: np.ndarray, mask: int) -> int:
    hit = np.flatnonzero(words & mask)
    if hit.size == 0:
        return 0
    return int(np.bitwise_count(hit).max())


def degree(F: Vbf, words: np.ndarray | None = None) -> int:
    if words is None:
        words = anf_words(F)
    return _degree_of_mask(words, (1 << F.m) - 1)


def degree_of_output_slice(F: Vbf, hi: int, lo: int, words: np.ndarray | None = None) -> int:
    """Degree of output bits lo..hi inclusive."""
    if not 0 <= lo <= hi < F.m:
        raise BadRange(f"slice [{lo}, {hi}] outside 0..{F.m - 1}")
    if words is None:
        words = anf_words(F)
    mask = ((1 << (hi + 1)) - 1) ^ ((1 << lo) - 1)
    return _degree_of_mask(words, mask)


# -- bijectivity ---------------------------------------------------------------

def _require_square(F: Vbf):
    if F.n != F.m:
        raise ShapeMismatch(f"needs n == m, got n={F.n}, m={F.m}")


def is_permutation(F: Vbf) -> bool:
    _require_square(F)
    seen = np.zeros(1 << F.m, dtype=bool)
    seen[F.lut] = True
    return bool(seen.all())


def is_involution(F: Vbf) -> bool:
    _require_square(F)
    return bool(np.array_equal(F.lut[F.lut], np.arange(1 << F.n)))


def fixed_points(F: Vbf) -> int:
    _require_square(F)
    return int(np.count_nonzero(F.lut == np.arange(1 << F.n)))


# -- EA transforms ---------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """x -> M x + const with M given as output-bit rows (row r: bits of x feeding bit r)."""

    rows: tuple[int, ...]
    const: int = 0
    n_in: int | None = None

    @property
    def n_out(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(1 << r for r in range(n)), 0, n)

    @classmethod
    def zero(cls, n_in: int, n_out: int) -> "AffineMap":
        return cls((0,) * n_out, 0, n_in)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        out = np.full(x.shape, self.const, dtype=np.int64)
        for r, row in enumerate(self.rows):
            out ^= (np.bitwise_count(x & row).astype(np.int64) & 1) << r
        return out

    def is_invertible(self) -> bool:
        if self.n_in is not None and self.n_in != self.n_out:
            return False
        return gf2_rank(self.rows) == self.n_out


def gf2_rank(rows) -> int:
    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def random_affine(rng: np.random.Generator, n_in: int, n_out: int, invertible: bool = False) -> AffineMap:
    while True:
        rows = tuple(int(r) for r in rng.integers(0, 1 << n_in, size=n_out))
        const = int(rng.integers(0, 1 << n_out))
        A = AffineMap(rows, const, n_in)
        if not invertible or A.is_invertible():
            return A


def compose_affine(F: Vbf, A_out: AffineMap, A_in: AffineMap, A_add: AffineMap | None = None) -> Vbf:
    """G(x) = A_out(F(A_in(x))) + A_add(x)."""
    if not A_out.is_invertible() or not A_in.is_invertible():
        raise SingularMatrix("outer and inner maps must be affine permutations")
    if A_in.n_out != F.n or A_out.n_out != F.m:
        raise ShapeMismatch("affine map sizes do not match the function")
    x = np.arange(1 << F.n, dtype=np.int64)
    g = A_out(F.lut[A_in(x)])
    if A_add is not None:
        g ^= A_add(x)
    return Vbf(F.n, F.m, g)


# -- full report -----------------------------------------------------------------

@dataclass
class AnalysisReport:
    delta: int | None = None
    diff_spectrum: dict[int, int] | None = None
    walsh_spectrum: dict[int, int] | None = None
    nonlinearity: int | None = None
    degree_total: int | None = None
    degree_left: int | None = None
    degree_right: int | None = None
    degree_bound: int | None = None
    is_permutation: bool | None = None
    is_involution: bool | None = None
    fixed_point_count: int | None = None
    params_echo: dict = field(default_factory=dict)
    timing_ms: float = 0.0

    def walsh_values(self) -> set[int]:
        return set(self.walsh_spectrum or ())

    def diff_values(self) -> set[int]:
        return set(self.diff_spectrum or ())

    def to_dict(self) -> dict:
        def tally(d):
            if d is None:
                return None
            return {str(v): d[v] for v in sorted(d)}

        return {
            "params": self.params_echo,
            "delta": self.delta,
            "diff_spectrum": tally(self.diff_spectrum),
            "walsh_spectrum": tally(self.walsh_spectrum),
            "nonlinearity": self.nonlinearity,
            "degree": {"total": self.degree_total, "left": self.degree_left,
                       "right": self.degree_right},
            "is_permutation": self.is_permutation,
            "is_involution": self.is_involution,
            "fixed_points": self.fixed_point_count,
            "timing_ms": round(self.timing_ms, 3),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        def untally(t):
            return None if t is None else {int(v): c for v, c in t.items()}

        deg = d.get("degree") or {}
        return cls(delta=d.get("delta"), diff_spectrum=untally(d.get("diff_spectrum")),
                   walsh_spectrum=untally(d.get("walsh_spectrum")),
                   nonlinearity=d.get("nonlinearity"), degree_total=deg.get("total"),
                   degree_left=deg.get("left"), degree_right=deg.get("right"),
                   is_permutation=d.get("is_permutation"), is_involution=d.get("is_involution"),
                   fixed_point_count=d.get("fixed_points"), params_echo=d.get("params") or {},
                   timing_ms=d.get("timing_ms") or 0.0)

    def invariants(self) -> tuple:
        """Fields that EA/CCZ-equivalent functions share; used for comparisons."""
        return (self.delta,
                tuple(sorted((self.diff_spectrum or {}).items())),
                tuple(sorted((self.walsh_spectrum or {}).items())),
                self.nonlinearity)


ALL_ANALYSES = frozenset({"delta", "walsh", "degree", "bijectivity"})


def analyze(F: Vbf, analyses=ALL_ANALYSES, branch_bits: int | None = None,
            params: dict | None = None, workers: int = 1) -> AnalysisReport:
    """Run the requested analyses.  ``branch_bits`` = k enables left/right degrees."""
    t0 = time.perf_counter()
    rep = AnalysisReport(params_echo=dict(params or {}))
    if "delta" in analyses:
        rep.delta, rep.diff_spectrum = differential_uniformity(F, workers)
    if "walsh" in analyses:
        rep.walsh_spectrum, rep.nonlinearity = walsh_spectrum(F, workers)
        rep.degree_bound = walsh_divisibility_degree_bound(F, rep.walsh_spectrum)
    if "degree" in analyses:
        words = anf_words(F)
        rep.degree_total = degree(F, words)
        if branch_bits:
            k = branch_bits
            rep.degree_left = degree_of_output_slice(F, F.m - 1, k, words)
            rep.degree_right = degree_of_output_slice(F, k - 1, 0, words)
    if "bijectivity" in analyses and F.n == F.m:
        rep.is_permutation = is_permutation(F)
        rep.is_involution = is_involution(F)
        rep.fixed_point_count = fixed_points(F)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    return rep

