import numpy as np
import pytest

from moltext import kernels


def _rand_codes(rng, max_len=30):
    return rng.integers(0, 5, size=rng.integers(0, max_len + 1), dtype=np.uint32)


def test_backends_agree_levenshtein():
    rng = np.random.default_rng(0)
    for _ in range(300):
        a, b = _rand_codes(rng), _rand_codes(rng)
        assert kernels.levenshtein_codes(a, b) == kernels.levenshtein_codes_py(a, b)


def test_backends_agree_lcs():
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = _rand_codes(rng).astype(np.int64)
        b = _rand_codes(rng).astype(np.int64)
        assert kernels.lcs_len_codes(a, b) == kernels.lcs_len_codes_py(a, b)


def test_selfcheck_agrees_small():
    rng = np.random.default_rng(2)
    n = 40
    arr = np.zeros((n, 8), dtype=np.uint8)
    lens = np.zeros(n, dtype=np.int64)
    for i in range(n):
        lens[i] = rng.integers(0, 9)
        arr[i, : lens[i]] = rng.integers(0, 3, size=lens[i])
    assert kernels.levenshtein_selfcheck(arr, lens) == 0
    assert kernels.levenshtein_selfcheck_py(arr, lens) == 0


def test_python_fallback_env_flag():
    import subprocess
    import sys

    code = (
        "import os; os.environ['MOLTEXT_NUMBA'] = '0';"
        "from moltext import kernels;"
        "assert kernels.BACKEND == 'python';"
        "import numpy as np;"
        "a = np.array([1, 2, 3], dtype=np.uint32);"
        "b = np.array([1, 3], dtype=np.uint32);"
        "assert kernels.levenshtein_codes(a, b) == 1;"
        "print('ok')"
    )
    result = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert "ok" in result.stdout


@pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba backend disabled")
def test_numba_backend_active_by_default():
    assert kernels.BACKEND == "numba"
