"""Brute-force checks of the equation-counting lemmas behind the butterfly bounds.

Everything here works over small fields by exhaustive evaluation: root sets of
linearized polynomials, solution sets of two-variable linearized systems, and
the "iff" characterisations used to rule out degenerate coefficient choices.

Notation used in the coefficient helpers (q = 2^i):

    P = a^(q+1) c + c + d      Q = a^(q+1) d + c + d
    S = a^q c + a d            T = a c + a^q d

for the Walsh-side systems in (c, d), and for the differential side in (u, v)

    s = a u + v    r = a v + u    g = a^q s + u    h = a s^q + u^q
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import BadHypotheses
from .gf2k import FieldSpec


# -- linearized polynomials ---------------------------------------------------

@dataclass(frozen=True)
class LinearizedPoly:
    """sum of coef * x^(2^j).  Coefficients may be arrays (a batch of polynomials)."""

    terms: tuple

    def __call__(self, f: FieldSpec, x):
        x = np.asarray(x, dtype=np.int64)
        out = None
        for coef, j in self.terms:
            c = np.asarray(coef, dtype=np.int64)
            if c.ndim:
                c = c[..., None]
            v = f.vmul(c, f.vfrob(x, j))
            out = v if out is None else out ^ v
        if out is None:
            return np.zeros_like(x)
        return out


@dataclass(frozen=True)
class PairSystem:
    """Two equations  Lu_r(u) + Lv_r(v) = 0,  r = 1, 2."""

    u1: LinearizedPoly
    v1: LinearizedPoly
    u2: LinearizedPoly
    v2: LinearizedPoly


def roots(f: FieldSpec, P: LinearizedPoly) -> np.ndarray:
    xs = f.elements()
    return xs[P(f, xs) == 0]


def count_roots(f: FieldSpec, P: LinearizedPoly) -> tuple[int, int]:
    """(number of roots in GF(2^k), its log2)."""
    n = len(roots(f, P))
    return n, n.bit_length() - 1


def solve_pair_system(f: FieldSpec, S: PairSystem) -> tuple[np.ndarray, int]:
    """All (u, v) solving S, as an (N, 2) array, and the dimension log2 N."""
    k = f.k
    xs = f.elements()
    ku = (S.u1(f, xs) << k) | S.u2(f, xs)
    kv = (S.v1(f, xs) << k) | S.v2(f, xs)
    order = np.argsort(kv, kind="stable")
    ks = kv[order]
    lo = np.searchsorted(ks, ku, "left")
    hi = np.searchsorted(ks, ku, "right")
    cnt = hi - lo
    us = np.repeat(xs, cnt)
    starts = np.repeat(lo, cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    vs = order[starts + offs]
    sol = np.stack((us, vs), axis=1)
    return sol, len(sol).bit_length() - 1


def _gf2_rank_batch(cols: np.ndarray) -> np.ndarray:
    """Rank over F2 of each row of ``cols`` (a batch of column-word lists)."""
    cols = cols.copy()
    n_rows, _ = cols.shape
    rank = np.zeros(n_rows, dtype=np.int64)
    idx = np.arange(n_rows)
    nbits = int(cols.max()).bit_length() if cols.size else 0
    for bit in range(nbits):
        has_bit = ((cols >> bit) & 1).astype(bool)
        found = has_bit.any(axis=1)
        piv = cols[idx, has_bit.argmax(axis=1)]
        cols ^= np.where(has_bit & found[:, None], piv[:, None], 0)
        rank += found
    return rank


def solution_dimensions(f: FieldSpec, S: PairSystem) -> np.ndarray:
    """Solution-space dimension for a batch system (array coefficients).

    Uses 2k - rank of the F2-matrix of (u, v) -> (eq1, eq2); solve_pair_system
    is the exhaustive counterpart.
    """
    k = f.k
    basis = np.array([1 << j for j in range(k)], dtype=np.int64)
    cu = (S.u1(f, basis) << k) | S.u2(f, basis)
    cv = (S.v1(f, basis) << k) | S.v2(f, basis)
    cols = np.concatenate(np.broadcast_arrays(cu, cv), axis=-1)
    cols = cols.reshape(-1, 2 * k)
    return 2 * k - _gf2_rank_batch(cols)


# -- named coefficient expressions --------------------------------------------

def _pw(f, a, j):
    return f.vfrob(a, j)


def walsh_coeffs(f: FieldSpec, i: int, alpha: int, c, d):
    """(P, Q, S, T) of the closed-butterfly component Tr(c L + d R)."""
    a_q = int(_pw(f, alpha, i))
    a_q1 = int(f.vmul(a_q, alpha))
    c = np.asarray(c, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    P = f.vmul(a_q1, c) ^ c ^ d
    Q = f.vmul(a_q1, d) ^ c ^ d
    S = f.vmul(a_q, c) ^ f.vmul(alpha, d)
    T = f.vmul(alpha, c) ^ f.vmul(a_q, d)
    return P, Q, S, T


def B4(f, i, alpha, c, d):
    P, Q, S, T = walsh_coeffs(f, i, alpha, c, d)
    return f.vmul(P, _pw(f, S, i)) ^ f.vmul(_pw(f, P, i), T)


def B5(f, i, alpha, c, d):
    P, Q, S, T = walsh_coeffs(f, i, alpha, c, d)
    return f.vmul(_pw(f, T, i), _pw(f, S, i)) ^ f.vmul(_pw(f, P, i), _pw(f, Q, i))


def B6(f, i, alpha, c, d):
    P, Q, S, T = walsh_coeffs(f, i, alpha, c, d)
    return f.vmul(S, _pw(f, S, i)) ^ f.vmul(_pw(f, P, i), Q)


def B7(f, i, alpha, c, d):
    _, Q, S, _ = walsh_coeffs(f, i, alpha, c, d)
    return (f.vmul(_pw(f, S, i), _pw(f, B6(f, i, alpha, c, d), 2 * i))
            ^ f.vmul(_pw(f, Q, i), _pw(f, B4(f, i, alpha, c, d), 2 * i)))


def diff_coeffs(f: FieldSpec, i: int, alpha: int, u, v):
    """(s, r, g, h) of the closed-butterfly derivative in direction (u, v)."""
    a_q = int(_pw(f, alpha, i))
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    s = f.vmul(alpha, u) ^ v
    r = f.vmul(alpha, v) ^ u
    g = f.vmul(a_q, s) ^ u
    h = f.vmul(alpha, _pw(f, s, i)) ^ _pw(f, u, i)
    return s, r, g, h


def A4(f, i, alpha, u, v):
    s, r, g, h = diff_coeffs(f, i, alpha, u, v)
    return f.vmul(r, h) ^ f.vmul(_pw(f, r, i), g)


def A5(f, i, alpha, u, v):
    s, r, g, h = diff_coeffs(f, i, alpha, u, v)
    a_q = int(_pw(f, alpha, i))
    return f.vmul(r, s) ^ f.vmul(g, f.vmul(a_q, r) ^ v)


def A6(f, i, alpha, u, v):
    s, r, g, h = diff_coeffs(f, i, alpha, u, v)
    return f.vmul(r, _pw(f, s, i)) ^ f.vmul(g, f.vmul(alpha, _pw(f, r, i)) ^ _pw(f, v, i))


def perm_coeffs(f: FieldSpec, i: int, u, v):
    """(C1, C2, C3) from eliminating y^(2^i) in the alpha = 1 bijectivity system."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    uq, vq = _pw(f, u, i), _pw(f, v, i)
    C1 = f.vmul(u, u) ^ f.vmul(u, v) ^ f.vmul(v, v)
    C2 = f.vmul(uq, v) ^ f.vmul(u, vq)
    C3 = f.vmul(uq, u) ^ f.vmul(uq, v) ^ f.vmul(vq, v)
    return C1, C2, C3


# -- the systems ---------------------------------------------------------------

def walsh_system(f: FieldSpec, i: int, alpha: int, c, d) -> PairSystem:
    """System in (u, v) whose solution space R(c, d) fixes |W|^2 for the component (c, d)."""
    P, Q, S, T = walsh_coeffs(f, i, alpha, c, d)
    L = LinearizedPoly
    return PairSystem(
        L(((_pw(f, P, i), 2 * i), (P, 0))), L(((_pw(f, T, i), 2 * i), (S, 0))),
        L(((_pw(f, S, i), 2 * i), (T, 0))), L(((_pw(f, Q, i), 2 * i), (Q, 0))))


def differential_system(f: FieldSpec, i: int, alpha: int, u, v) -> PairSystem:
    """Homogeneous system in (x, y) for V(x, y) + V(x + u, y + v) = const."""
    s, r, g, h = diff_coeffs(f, i, alpha, u, v)
    a_q = int(_pw(f, alpha, i))
    v = np.asarray(v, dtype=np.int64)
    L = LinearizedPoly
    return PairSystem(
        L(((g, i), (h, 0))), L(((s, i), (_pw(f, s, i), 0))),
        L(((r, i), (_pw(f, r, i), 0))),
        L(((f.vmul(a_q, r) ^ v, i), (f.vmul(alpha, _pw(f, r, i)) ^ _pw(f, v, i), 0))))


def _back(f, i):
    return f.k - i


def cdxy_system(f: FieldSpec, i: int, c, d) -> PairSystem:
    """Two-variable system in (x, y) from the alpha = 1 (three-round Feistel) analysis."""
    c = np.asarray(c, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    j = _back(f, i)
    cd = c ^ d
    L = LinearizedPoly

    def pair(z):
        return L(((_pw(f, z, i), 0), (_pw(f, z, j), j)))

    return PairSystem(pair(d), pair(cd), pair(c), pair(d))


def cduv_system(f: FieldSpec, i: int, c, d) -> PairSystem:
    """alpha = 1 analogue of walsh_system, written with 2^(k-i) powers."""
    c = np.asarray(c, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    j = _back(f, i)
    cd = c ^ d
    L = LinearizedPoly

    def pair(z):
        return L(((z, i), (_pw(f, z, j), j)))

    return PairSystem(pair(d), pair(cd), pair(cd), pair(c))


# -- verifiers -----------------------------------------------------------------

@dataclass
class LemmaResult:
    name: str
    passed: bool
    params: dict
    coverage: dict = field(default_factory=dict)
    runtime_ms: float = 0.0

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        return {"lemma": self.name, "passed": bool(self.passed), "params": self.params,
                "coverage": self.coverage, "runtime_ms": round(self.runtime_ms, 3)}


def _check_field(f: FieldSpec, i: int):
    if f.k % 2 == 0 or math.gcd(i, f.k) != 1:
        raise BadHypotheses(f"needs k odd and gcd(i, k) = 1 (k={f.k}, i={i})")


def _check_alpha(f: FieldSpec, alpha: int):
    if alpha in (0, 1) or not 0 <= alpha < f.order:
        raise BadHypotheses(f"alpha must be a field element outside {{0, 1}}, got {alpha:#x}")


def _nontrivial_alphas(f):
    return list(range(2, f.order))


def _grid(f):
    xs = f.elements()
    a, b = np.meshgrid(xs, xs, indexing="ij")
    return a.ravel(), b.ravel()


def _result(name, ok, params, cov, t0):
    return LemmaResult(name, bool(ok), params, cov, (time.perf_counter() - t0) * 1e3)


def verify_characterization_uv(f: FieldSpec, i: int, alpha: int) -> LemmaResult:
    """A4 = A5 = A6 = 0 exactly when a v + u = 0 and a^q (a u + v) + u = 0."""
    _check_field(f, i)
    _check_alpha(f, alpha)
    t0 = time.perf_counter()
    u, v = _grid(f)
    lhs = (A4(f, i, alpha, u, v) == 0) & (A5(f, i, alpha, u, v) == 0) & (A6(f, i, alpha, u, v) == 0)
    s, r, g, _ = diff_coeffs(f, i, alpha, u, v)
    rhs = (r == 0) & (g == 0)
    cov = {"points": int(u.size), "system_holds": int(lhs.sum()), "characterized": int(rhs.sum()),
           "mismatches": int((lhs != rhs).sum())}
    return _result("characterization_uv", np.array_equal(lhs, rhs),
                   {"k": f.k, "i": i, "alpha": alpha}, cov, t0)


def verify_characterization_cd(f: FieldSpec, i: int, alpha: int) -> LemmaResult:
    """B4 = B5 = B6 = 0 exactly when P = 0 and S = 0."""
    _check_field(f, i)
    _check_alpha(f, alpha)
    t0 = time.perf_counter()
    c, d = _grid(f)
    lhs = (B4(f, i, alpha, c, d) == 0) & (B5(f, i, alpha, c, d) == 0) & (B6(f, i, alpha, c, d) == 0)
    P, _, S, _ = walsh_coeffs(f, i, alpha, c, d)
    rhs = (P == 0) & (S == 0)
    cov = {"points": int(c.size), "system_holds": int(lhs.sum()), "characterized": int(rhs.sum()),
           "mismatches": int((lhs != rhs).sum())}
    return _result("characterization_cd", np.array_equal(lhs, rhs),
                   {"k": f.k, "i": i, "alpha": alpha}, cov, t0)


def _orbit(x: int, y: int) -> frozenset:
    return frozenset({(x, y), (y, x ^ y), (x ^ y, x)})


def verify_cdxy(f: FieldSpec, i: int) -> LemmaResult:
    """Exactly 4 solutions for every (c, d) != 0, nonzero ones forming one 3-orbit."""
    _check_field(f, i)
    t0 = time.perf_counter()
    counts = {}
    orbit_ok = True
    zero_present = True
    for c in range(f.order):
        for d in range(f.order):
            if c == 0 and d == 0:
                continue
            sol, _ = solve_pair_system(f, cdxy_system(f, i, c, d))
            counts[len(sol)] = counts.get(len(sol), 0) + 1
            pts = {(int(x), int(y)) for x, y in sol}
            zero_present &= (0, 0) in pts
            nonzero = pts - {(0, 0)}
            if nonzero:
                x, y = next(iter(nonzero))
                orbit_ok &= nonzero == _orbit(x, y)
    ok = set(counts) == {4} and orbit_ok and zero_present
    cov = {"systems": sum(counts.values()), "solution_counts": counts, "orbit_ok": orbit_ok}
    return _result("cdxy_exact4", ok, {"k": f.k, "i": i}, cov, t0)


def _nonzero_cd(f):
    c, d = _grid(f)
    keep = (c | d) != 0
    return c[keep], d[keep]


def verify_cduv(f: FieldSpec, i: int) -> LemmaResult:
    """alpha = 1 Walsh system has exactly 4 solutions for every (c, d) != 0."""
    _check_field(f, i)
    t0 = time.perf_counter()
    c, d = _nonzero_cd(f)
    dims = solution_dimensions(f, cduv_system(f, i, c, d))
    tally = {int(1 << m): int(n) for m, n in zip(*np.unique(dims, return_counts=True))}
    return _result("cduv_exact4", set(tally) == {4}, {"k": f.k, "i": i},
                   {"systems": int(c.size), "solution_counts": tally}, t0)


def verify_walsh_system_counts(f: FieldSpec, i: int, alphas=None) -> LemmaResult:
    """Walsh-side system has 1 or 4 solutions for all alpha != 0, 1 and (c, d) != 0."""
    _check_field(f, i)
    t0 = time.perf_counter()
    alphas = _nontrivial_alphas(f) if alphas is None else list(alphas)
    c, d = _nonzero_cd(f)
    tally: dict[int, int] = {}
    for alpha in alphas:
        _check_alpha(f, alpha)
        dims = solution_dimensions(f, walsh_system(f, i, alpha, c, d))
        for m, n in zip(*np.unique(dims, return_counts=True)):
            tally[int(1 << m)] = tally.get(int(1 << m), 0) + int(n)
    ok = set(tally) <= {1, 4}
    return _result("walsh_system_1_or_4", ok, {"k": f.k, "i": i, "alphas": len(alphas)},
                   {"systems": int(c.size) * len(alphas), "solution_counts": dict(sorted(tally.items()))}, t0)


def verify_differential_system_counts(f: FieldSpec, i: int, alphas=None) -> LemmaResult:
    """Homogeneous derivative system has at most 4 solutions for every (u, v) != 0."""
    _check_field(f, i)
    t0 = time.perf_counter()
    alphas = _nontrivial_alphas(f) if alphas is None else list(alphas)
    u, v = _nonzero_cd(f)
    tally: dict[int, int] = {}
    for alpha in alphas:
        _check_alpha(f, alpha)
        dims = solution_dimensions(f, differential_system(f, i, alpha, u, v))
        for m, n in zip(*np.unique(dims, return_counts=True)):
            tally[int(1 << m)] = tally.get(int(1 << m), 0) + int(n)
    ok = max(tally) <= 4
    return _result("differential_system_at_most_4", ok, {"k": f.k, "i": i, "alphas": len(alphas)},
                   {"systems": int(u.size) * len(alphas), "solution_counts": dict(sorted(tally.items()))}, t0)


def verify_b7_nonzero(f: FieldSpec, i: int, alphas=None) -> LemmaResult:
    """B7 != 0 whenever P != 0, S != 0, B4 != 0, B5 = 0 and B6 != 0."""
    _check_field(f, i)
    t0 = time.perf_counter()
    alphas = _nontrivial_alphas(f) if alphas is None else list(alphas)
    c, d = _nonzero_cd(f)
    reached = zeros = 0
    for alpha in alphas:
        _check_alpha(f, alpha)
        P, _, S, _ = walsh_coeffs(f, i, alpha, c, d)
        b4, b5, b6 = B4(f, i, alpha, c, d), B5(f, i, alpha, c, d), B6(f, i, alpha, c, d)
        case = (P != 0) & (S != 0) & (b4 != 0) & (b5 == 0) & (b6 != 0)
        reached += int(case.sum())
        zeros += int((B7(f, i, alpha, c[case], d[case]) == 0).sum())
    cov = {"alphas": len(alphas), "branch_reached": reached, "b7_zero": zeros,
           "vacuous": reached == 0}
    return _result("b7_nonzero", zeros == 0, {"k": f.k, "i": i}, cov, t0)


def galois_kernel_dimension(f: FieldSpec, i: int, coeffs) -> int:
    """dim of {x : sum_j coeffs[j] sigma^(ij)(x) = 0} with sigma the Frobenius."""
    P = LinearizedPoly(tuple((c, i * j) for j, c in enumerate(coeffs)))
    return count_roots(f, P)[1]


def verify_root_bounds(f: FieldSpec, i: int, rng: np.random.Generator, samples: int = 200) -> LemmaResult:
    """c1 x^(q^2) + c2 x^q + c3 x (and the q^4, q^2 variant) has <= 4 roots."""
    if math.gcd(i, f.k) != 1:
        raise BadHypotheses(f"needs gcd(i, k) = 1 (k={f.k}, i={i})")
    t0 = time.perf_counter()
    shapes = [(2 * i, i, 0)]
    if f.k % 2:
        shapes.append((4 * i, 2 * i, 0))
    worst = 0
    tally: dict[int, int] = {}
    for _ in range(samples):
        cs = [int(x) for x in rng.integers(0, f.order, size=3)]
        if not any(cs):
            cs[2] = 1
        for shape in shapes:
            n, _ = count_roots(f, LinearizedPoly(tuple(zip(cs, shape))))
            worst = max(worst, n)
            tally[n] = tally.get(n, 0) + 1
    return _result("root_bound_4", worst <= 4, {"k": f.k, "i": i, "samples": samples},
                   {"solution_counts": dict(sorted(tally.items()))}, t0)


# above this k the alpha loops are sampled
EXHAUSTIVE_MAX_K = 7


def verify_all(f: FieldSpec, i: int, seed: int = 0, alpha_samples: int = 8) -> list[LemmaResult]:
    """Run every verifier for one (field, i); used by the ``verify-lemmas`` command."""
    _check_field(f, i)
    rng = np.random.default_rng(seed)
    alphas = _nontrivial_alphas(f)
    if f.k > EXHAUSTIVE_MAX_K:
        alphas = sorted(int(a) for a in rng.choice(alphas, size=min(alpha_samples, len(alphas)), replace=False))
    out = [verify_characterization_uv(f, i, a) for a in alphas]
    out += [verify_characterization_cd(f, i, a) for a in alphas]
    out.append(verify_walsh_system_counts(f, i, alphas))
    out.append(verify_differential_system_counts(f, i, alphas))
    out.append(verify_b7_nonzero(f, i, alphas))
    out.append(verify_cduv(f, i))
    if f.k <= EXHAUSTIVE_MAX_K:
        out.append(verify_cdxy(f, i))
    out.append(verify_root_bounds(f, i, rng))
    return out
