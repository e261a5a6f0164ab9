"""Hot numeric kernels with numba-compiled and pure-Python implementations.

The JIT path is the default. Setting the environment variable
``MOLTEXT_NUMBA=0`` (or ``false``/``no``) before import selects the pure
fallback, which computes identical results; ``benchmarks/bench_kernels.py``
times both. ``BACKEND`` reports which path is active.

Kernels operate on integer code arrays; string encoding lives with the
callers (textmetrics).
"""

from __future__ import annotations

import os

import numpy as np


def _numba_enabled() -> bool:
    flag = os.environ.get("MOLTEXT_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


# --- pure-Python reference implementations --------------------------------

def levenshtein_codes_py(a: np.ndarray, b: np.ndarray) -> int:
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:  # keep the row short
        a, b = b, a
        la, lb = lb, la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            m = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            if prev[j] + 1 < m:
                m = prev[j] + 1
            if cur[j - 1] + 1 < m:
                m = cur[j - 1] + 1
            cur[j] = m
        prev, cur = cur, prev
    return prev[lb]


def lcs_len_codes_py(a: np.ndarray, b: np.ndarray) -> int:
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0
    prev = [0] * (lb + 1)
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        ai = a[i - 1]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        prev, cur = cur, prev
        for j in range(lb + 1):
            cur[j] = 0
    return prev[lb]


def _recurrence_top_down_py(a, la, b, lb, memo) -> int:
    # Definitional recurrence evaluated top-down with memoization; kept
    # separate from the two-row DP so the self-check compares two paths.
    stride = lb + 1
    for q in range(lb + 1):
        memo[q] = q
    for p in range(1, la + 1):
        memo[p * stride] = p
    stack = [la * stride + lb]
    while stack:
        key = stack[-1]
        if memo[key] >= 0:
            stack.pop()
            continue
        ia, ib = divmod(key, stride)
        k_diag = key - stride - 1
        k_up = key - stride
        k_left = key - 1
        if memo[k_diag] < 0 or memo[k_up] < 0 or memo[k_left] < 0:
            if memo[k_diag] < 0:
                stack.append(k_diag)
            if memo[k_up] < 0:
                stack.append(k_up)
            if memo[k_left] < 0:
                stack.append(k_left)
            continue
        cost = 0 if a[ia - 1] == b[ib - 1] else 1
        d = memo[k_diag] + cost
        if memo[k_up] + 1 < d:
            d = memo[k_up] + 1
        if memo[k_left] + 1 < d:
            d = memo[k_left] + 1
        memo[key] = d
        stack.pop()
    return memo[la * stride + lb]


def levenshtein_selfcheck_py(arr: np.ndarray, lens: np.ndarray) -> int:
    """Compare the two-row DP against the memoized recurrence on every
    ordered pair of rows in ``arr``; returns the number of disagreements."""
    n = arr.shape[0]
    max_len = arr.shape[1]
    memo = [-1] * ((max_len + 1) * (max_len + 1))
    bad = 0
    for i in range(n):
        for j in range(n):
            a, la = arr[i], int(lens[i])
            b, lb = arr[j], int(lens[j])
            d1 = levenshtein_codes_py(a[:la], b[:lb])
            for q in range((la + 1) * (lb + 1)):
                memo[q] = -1
            d2 = _recurrence_top_down_py(a, la, b, lb, memo)
            if d1 != d2:
                bad += 1
    return bad


# --- numba path -----------------------------------------------------------

NUMBA_AVAILABLE = False
if _numba_enabled():
    try:
        from numba import njit, prange

        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _lev_nb(a, la, b, lb):
        if la == 0:
            return lb
        if lb == 0:
            return la
        prev = np.empty(lb + 1, dtype=np.int64)
        cur = np.empty(lb + 1, dtype=np.int64)
        for j in range(lb + 1):
            prev[j] = j
        for i in range(1, la + 1):
            cur[0] = i
            ai = a[i - 1]
            for j in range(1, lb + 1):
                m = prev[j - 1] + (0 if ai == b[j - 1] else 1)
                if prev[j] + 1 < m:
                    m = prev[j] + 1
                if cur[j - 1] + 1 < m:
                    m = cur[j - 1] + 1
                cur[j] = m
            for j in range(lb + 1):
                prev[j] = cur[j]
        return prev[lb]

    @njit(cache=True)
    def _lcs_nb(a, la, b, lb):
        if la == 0 or lb == 0:
            return 0
        prev = np.zeros(lb + 1, dtype=np.int64)
        cur = np.zeros(lb + 1, dtype=np.int64)
        for i in range(1, la + 1):
            ai = a[i - 1]
            for j in range(1, lb + 1):
                if ai == b[j - 1]:
                    cur[j] = prev[j - 1] + 1
                elif prev[j] >= cur[j - 1]:
                    cur[j] = prev[j]
                else:
                    cur[j] = cur[j - 1]
            for j in range(lb + 1):
                prev[j] = cur[j]
                cur[j] = 0
        return prev[lb]

    @njit(parallel=True, cache=True)
    def _selfcheck_nb(arr, lens):
        n = arr.shape[0]
        stride = arr.shape[1] + 1
        bad = np.int64(0)
        for i in prange(n):
            a = arr[i]
            la = lens[i]
            memo = np.empty(stride * stride, dtype=np.int8)
            stack = np.empty(3 * stride * stride, dtype=np.int64)
            prev = np.empty(stride, dtype=np.int64)
            cur = np.empty(stride, dtype=np.int64)
            sub = np.int64(0)
            for j in range(n):
                b = arr[j]
                lb = lens[j]
                # production-style two-row DP
                for q in range(lb + 1):
                    prev[q] = q
                for p in range(1, la + 1):
                    cur[0] = p
                    ap = a[p - 1]
                    for q in range(1, lb + 1):
                        m = prev[q - 1] + (0 if ap == b[q - 1] else 1)
                        if prev[q] + 1 < m:
                            m = prev[q] + 1
                        if cur[q - 1] + 1 < m:
                            m = cur[q - 1] + 1
                        cur[q] = m
                    for q in range(lb + 1):
                        prev[q] = cur[q]
                d1 = prev[lb] if la > 0 else lb
                # memoized top-down recurrence
                for q in range((la + 1) * stride):
                    memo[q] = -1
                for q in range(lb + 1):
                    memo[q] = q
                for p in range(1, la + 1):
                    memo[p * stride] = p
                sp = 0
                stack[sp] = la * stride + lb
                sp += 1
                while sp > 0:
                    key = stack[sp - 1]
                    if memo[key] >= 0:
                        sp -= 1
                        continue
                    ia = key // stride
                    ib = key % stride
                    k_diag = key - stride - 1
                    k_up = key - stride
                    k_left = key - 1
                    if memo[k_diag] < 0 or memo[k_up] < 0 or memo[k_left] < 0:
                        if memo[k_diag] < 0:
                            stack[sp] = k_diag
                            sp += 1
                        if memo[k_up] < 0:
                            stack[sp] = k_up
                            sp += 1
                        if memo[k_left] < 0:
                            stack[sp] = k_left
                            sp += 1
                        continue
                    cost = 0 if a[ia - 1] == b[ib - 1] else 1
                    d = memo[k_diag] + cost
                    if memo[k_up] + 1 < d:
                        d = memo[k_up] + 1
                    if memo[k_left] + 1 < d:
                        d = memo[k_left] + 1
                    memo[key] = d
                    sp -= 1
                d2 = memo[la * stride + lb]
                if d1 != d2:
                    sub += 1
            bad += sub
        return bad

    def levenshtein_codes(a: np.ndarray, b: np.ndarray) -> int:
        return int(_lev_nb(a, len(a), b, len(b)))

    def lcs_len_codes(a: np.ndarray, b: np.ndarray) -> int:
        return int(_lcs_nb(a, len(a), b, len(b)))

    def levenshtein_selfcheck(arr: np.ndarray, lens: np.ndarray) -> int:
        return int(_selfcheck_nb(arr, lens))

    BACKEND = "numba"
else:
    levenshtein_codes = levenshtein_codes_py
    lcs_len_codes = lcs_len_codes_py
    levenshtein_selfcheck = levenshtein_selfcheck_py
    BACKEND = "python"
