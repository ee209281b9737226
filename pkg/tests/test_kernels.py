import numpy as np
import pytest

from butterfly_sbox import kernels
from oracles import ddt_bruteforce, walsh_naive

backends = [kernels.numpy_backend]
if kernels.NUMBA_AVAILABLE:
    backends.append(kernels.numba_backend)


@pytest.fixture(params=backends, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


def hadamard(n):
    H = np.array([[1]])
    for _ in range(n):
        H = np.block([[H, H], [H, -H]])
    return H


def test_fwht_matches_hadamard_matrix(backend, rng):
    for n in range(1, 8):
        v = rng.integers(-5, 6, size=1 << n).astype(np.int64)
        assert np.array_equal(backend.fwht(v), hadamard(n) @ v)


def test_walsh_hist_matches_naive(backend, rng):
    n, m = 6, 5
    lut = rng.integers(0, 1 << m, size=1 << n).astype(np.int64)
    hist = backend.walsh_hist(lut, n, m, 1, 1 << m)
    want = np.zeros_like(hist)
    for b in range(1, 1 << m):
        for a in range(1 << n):
            want[walsh_naive(lut.tolist(), a, b) + (1 << n)] += 1
    assert np.array_equal(hist, want)


def test_ddt_hist_matches_bruteforce(backend, rng):
    n = 6
    lut = rng.integers(0, 1 << n, size=1 << n).astype(np.int64)
    table = ddt_bruteforce(lut.tolist())
    want = np.zeros(len(lut) + 1, dtype=np.int64)
    for row in table[1:]:
        for c in row:
            want[c] += 1
    assert np.array_equal(backend.ddt_hist(lut, n, n, 1, 1 << n), want)
    delta = max(max(r) for r in table[1:])
    assert backend.ddt_max(lut, n, n, 1 << n) == delta


def test_moebius_is_involution(backend, rng):
    words = rng.integers(0, 1 << 8, size=1 << 7).astype(np.int64)
    once = backend.moebius(words.copy())
    assert np.array_equal(backend.moebius(once.copy()), words)


@pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")
def test_backends_agree(rng):
    n = 8
    lut = rng.permutation(1 << n).astype(np.int64)
    a, b = kernels.numpy_backend, kernels.numba_backend
    assert np.array_equal(a.walsh_hist(lut, n, n, 1, 1 << n), b.walsh_hist(lut, n, n, 1, 1 << n))
    assert np.array_equal(a.ddt_hist(lut, n, n, 1, 1 << n), b.ddt_hist(lut, n, n, 1, 1 << n))
    assert np.array_equal(a.moebius(lut.copy()), b.moebius(lut.copy()))


def test_env_flag_selects_numpy(tmp_path):
    import json
    import os
    import subprocess
    import sys

    outs = {}
    for flag in ("0", "1"):
        out = tmp_path / f"r{flag}.json"
        env = dict(os.environ, BUTTERFLY_NUMBA=flag)
        code = ("from butterfly_sbox import kernels, cli; print(kernels.BACKEND_NAME); "
                f"cli.run(['analyze', '--k', '5', '--i', '1', '--alpha', '0x7', '--out', {str(out)!r}])")
        proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs[flag] = (proc.stdout.strip(), json.loads(out.read_text()))
        outs[flag][1].pop("timing_ms")
    assert outs["0"][0] == "numpy"
    if kernels.NUMBA_AVAILABLE:
        assert outs["1"][0] == "numba"
    assert outs["0"][1] == outs["1"][1]
