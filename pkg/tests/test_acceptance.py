"""Acceptance criteria 1-8, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line, shown in the
pytest terminal summary (and printed directly when run as a script).  JIT
compilation is triggered once up front and excluded from the timings.
"""
import json
import os
import sys
import time
from collections import Counter
from contextlib import contextmanager

import numpy as np
import pytest

from butterfly_sbox import cli, kernels, lemma_oracle as lo, search, vbf
from butterfly_sbox.butterfly import CLOSED, OPEN, ButterflyParams, materialize_lut
from butterfly_sbox.gf2k import make_field
from conftest import ACCEPTANCE_LINES
from oracles import ddt_bruteforce, walsh_naive

WORKERS = os.cpu_count() or 1
SEED = 20240601

# LUTs analysed by criteria 1-4, reused by the property criterion
ANALYZED: dict[str, vbf.Vbf] = {}


@pytest.fixture(scope="module", autouse=True)
def _warm():
    kernels.warmup()


@contextmanager
def criterion(n, label):
    info = {}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        line = f"criterion {n}: FAIL  {label}  ({type(exc).__name__}: {exc})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    dt = time.perf_counter() - t0
    line = f"criterion {n}: PASS  {label}  [{dt:.2f} s] {info.get('note', '')}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


def lut(k, alpha, variant=CLOSED, i=1, t=0):
    p = ButterflyParams.gold(make_field(k), i, t, alpha, variant)
    F = materialize_lut(p)
    ANALYZED[f"k={k} alpha={alpha:#x} {variant}"] = F
    return p, F


def strict_alphas(k, count):
    rng = np.random.default_rng(SEED + k)
    return sorted(int(a) for a in rng.choice(np.arange(2, 1 << k), size=count, replace=False))


def test_criterion_1_k3_all_alphas():
    with criterion(1, "k=3 e=3 all alpha: delta<=4, NL=24, Walsh {0,+-8,+-16}, deg 2; open involution, deg 4/3") as info:
        t0 = time.perf_counter()
        for alpha in range(2, 8):
            _, F = lut(3, alpha)
            rep = vbf.analyze(F, branch_bits=3)
            assert rep.delta <= 4, alpha
            assert rep.nonlinearity == 24, alpha
            assert rep.walsh_values() == {0, 8, -8, 16, -16}, alpha
            assert rep.degree_total == 2, alpha
            _, H = lut(3, alpha, OPEN)
            rep = vbf.analyze(H, branch_bits=3)
            assert rep.is_involution and rep.is_permutation, alpha
            assert (rep.degree_left, rep.degree_right) == (4, 3), alpha
        dt = time.perf_counter() - t0
        assert dt < 1.0, f"{dt:.2f} s"
        info["note"] = "6 alphas"


def test_criterion_2_k5_sampled():
    alphas = strict_alphas(5, 8)
    with criterion(2, "k=5 e=3 sampled alpha: delta<=4, NL=480, Walsh {0,+-32,+-64}") as info:
        worst = 0.0
        for alpha in alphas:
            t0 = time.perf_counter()
            _, F = lut(5, alpha)
            delta, _ = vbf.differential_uniformity(F, WORKERS)
            spec, nl = vbf.walsh_spectrum(F, WORKERS)
            worst = max(worst, time.perf_counter() - t0)
            assert delta <= 4, alpha
            assert nl == 480, alpha
            assert set(spec) == {0, 32, -32, 64, -64}, alpha
        assert worst < 5.0, f"{worst:.2f} s for one alpha"
        info["note"] = f"alphas={[hex(a) for a in alphas]} worst {worst:.2f} s/alpha"


def test_criterion_3_k7_sampled():
    alphas = strict_alphas(7, 2)
    with criterion(3, "k=7 e=3 sampled alpha: NL=8064, Walsh {0,+-128,+-256}") as info:
        t0 = time.perf_counter()
        for alpha in alphas:
            _, F = lut(7, alpha)
            spec, nl = vbf.walsh_spectrum(F, WORKERS)
            assert nl == 8064, alpha
            assert set(spec) == {0, 128, -128, 256, -256}, alpha
        dt = time.perf_counter() - t0
        assert dt < 300, f"{dt:.1f} s"
        info["note"] = f"alphas={[hex(a) for a in alphas]} workers={WORKERS} backend={kernels.BACKEND_NAME}"


def test_criterion_4_alpha_one():
    with criterion(4, "alpha=1, k in {3,5}: closed permutation, diff {0,4}, delta 4, Walsh {0,+-2^(k+1)}, open deg k"):
        t0 = time.perf_counter()
        for k in (3, 5):
            _, F = lut(k, 1)
            rep = vbf.analyze(F, workers=WORKERS)
            assert rep.is_permutation, k
            assert rep.delta == 4 and rep.diff_values() <= {0, 4}, k
            w = 1 << (k + 1)
            assert rep.walsh_values() == {0, w, -w}, k
            _, H = lut(k, 1, OPEN)
            assert vbf.degree(H) == k, k
        dt = time.perf_counter() - t0
        assert dt < 10, f"{dt:.2f} s"


def test_criterion_5_apn_search_k3():
    with criterion(5, "apn_search k=3 (all e coprime to 7, all alpha): nonempty, each hit delta=2 by brute force") as info:
        t0 = time.perf_counter()
        hits = search.apn_search(3, "all")
        assert hits
        f = make_field(3)
        for e, alpha in hits:
            table = ddt_bruteforce(
                materialize_lut(ButterflyParams.from_exponent(f, e, alpha, OPEN)).lut.tolist(), 6)
            assert max(max(row) for row in table[1:]) == 2, (e, alpha)
        dt = time.perf_counter() - t0
        assert dt < 10, f"{dt:.2f} s"
        info["note"] = f"{len(hits)} hits, e in {sorted({e for e, _ in hits})}"


def test_criterion_6_lemma_suite():
    with criterion(6, "lemma suite k in {3,5}: characterizations, cdxy exact 4 + orbits, Walsh-system counts {1,4}, B7 != 0") as info:
        t0 = time.perf_counter()
        coverage = {}
        for k in (3, 5):
            f = make_field(k)
            reached = 0
            for i in (i for i in range(1, k) if np.gcd(i, k) == 1):
                for alpha in range(2, f.order):
                    assert lo.verify_characterization_uv(f, i, alpha), (k, i, alpha)
                    assert lo.verify_characterization_cd(f, i, alpha), (k, i, alpha)
                r = lo.verify_cdxy(f, i)
                assert r and r.coverage["orbit_ok"], (k, i)
                assert r.coverage["solution_counts"] == {4: f.order ** 2 - 1}, (k, i)
                r = lo.verify_walsh_system_counts(f, i)
                assert r and set(r.coverage["solution_counts"]) <= {1, 4}, (k, i)
                r = lo.verify_b7_nonzero(f, i)
                assert r, (k, i)
                assert "branch_reached" in r.coverage and "vacuous" in r.coverage
                coverage[(k, i)] = r.coverage["branch_reached"]
                reached += r.coverage["branch_reached"]
            assert reached > 0, f"B7 branch never reached for k={k}"
        dt = time.perf_counter() - t0
        assert dt < 120, f"{dt:.1f} s"
        info["note"] = "B7 branch hits " + ", ".join(f"(k={k},i={i}):{n}" for (k, i), n in coverage.items())


def _parseval_ok(F: vbf.Vbf) -> bool:
    x = np.arange(len(F))
    target = 1 << (2 * F.n)
    for lo_b in range(1, 1 << F.m, 256):
        bs = np.arange(lo_b, min(lo_b + 256, 1 << F.m))
        signs = 1 - 2 * (np.bitwise_count(bs[:, None] & F.lut[x][None, :]) & 1).astype(np.int64)
        cols = kernels.fwht(signs)
        if not np.all((cols * cols).sum(axis=1) == target):
            return False
    return True


def _abs_multiset(spectrum):
    out = Counter()
    for v, c in spectrum.items():
        out[abs(v)] += c
    return out


def test_criterion_7_properties():
    with criterion(7, "Parseval, fast vs naive Walsh, DDT vs brute force, EA invariance k=3, degree bound") as info:
        rng = np.random.default_rng(SEED)
        if not ANALYZED:
            for alpha in (1, 2, 5):
                lut(3, alpha)
                lut(5, alpha)
        for name, F in ANALYZED.items():
            assert _parseval_ok(F), name
            spec, _ = vbf.walsh_spectrum(F, WORKERS)
            assert vbf.walsh_divisibility_degree_bound(F, spec) >= vbf.degree(F), name

        table = ANALYZED["k=5 alpha=0x1 closed"].lut.tolist()
        for _ in range(100):
            a, b = int(rng.integers(0, 1024)), int(rng.integers(1, 1024))
            assert vbf.walsh_column(ANALYZED["k=5 alpha=0x1 closed"], b)[a] == walsh_naive(table, a, b)

        ddt_cases = [F for F in ANALYZED.values() if F.n <= 10][:6]
        ddt_cases.append(vbf.Vbf(10, 10, rng.integers(0, 1024, size=1024)))
        for F in ddt_cases:
            want = np.array(ddt_bruteforce(F.lut.tolist(), F.m))
            assert np.array_equal(vbf.ddt(F), want)
            delta, hist = vbf.differential_uniformity(F)
            assert delta == want[1:].max()
            assert hist == dict(Counter(want[1:].ravel().tolist()))

        for alpha in (1, 2, 3):
            F = materialize_lut(ButterflyParams.gold(make_field(3), 1, 0, alpha))
            base = vbf.analyze(F)
            for _ in range(10):
                G = vbf.compose_affine(F, vbf.random_affine(rng, 6, 6, True),
                                       vbf.random_affine(rng, 6, 6, True), vbf.random_affine(rng, 6, 6))
                rep = vbf.analyze(G)
                assert (rep.delta, rep.diff_spectrum) == (base.delta, base.diff_spectrum)
                assert _abs_multiset(rep.walsh_spectrum) == _abs_multiset(base.walsh_spectrum)
                assert rep.nonlinearity == base.nonlinearity
                assert rep.degree_total == base.degree_total
                # same check with purely linear maps keeps signed values too
                lin = lambda: vbf.AffineMap(vbf.random_affine(rng, 6, 6, True).rows, 0, 6)
                assert vbf.walsh_spectrum(vbf.compose_affine(F, lin(), lin()))[0] == base.walsh_spectrum
        info["note"] = f"{len(ANALYZED)} LUTs, {len(ddt_cases)} DDTs, 30 EA transforms"


def test_criterion_8_determinism(tmp_path):
    with criterion(8, "identical CLI runs give identical reports; worker count irrelevant"):
        docs = []
        for name, workers in (("a", 1), ("b", 1), ("c", 4), ("d", 7)):
            out = tmp_path / f"{name}.jsonl"
            rc = cli.run(["sweep", "--k", "3", "5", "--alphas", "0x2,0x3", "--variant", "both",
                          "--workers", str(workers), "--out", str(out)])
            assert rc == 0
            rows = [json.loads(s) for s in out.read_text().splitlines()]
            for r in rows:
                r.pop("timing_ms")
            docs.append(json.dumps(rows, sort_keys=True))
        assert len(set(docs)) == 1
        reps = [lo.verify_all(make_field(5), 1, seed=3) for _ in range(2)]
        assert [r.coverage for r in reps[0]] == [r.coverage for r in reps[1]]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
