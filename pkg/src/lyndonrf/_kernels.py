"""Linear-time word kernels compiled with numba.

All kernels take ``uint8`` letter arrays. They are the hot path of the
Monte Carlo harness; the slow, obviously-correct versions live in the
test-suite as oracles.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def smallest_period(a):
    """Smallest period of ``a`` from the KMP prefix function."""
    n = a.shape[0]
    if n == 0:
        return 0
    fail = np.zeros(n, dtype=np.int64)
    k = 0
    for i in range(1, n):
        while k > 0 and a[i] != a[k]:
            k = fail[k - 1]
        if a[i] == a[k]:
            k += 1
        fail[i] = k
    return n - fail[n - 1]


@njit(cache=True)
def is_primitive(a):
    n = a.shape[0]
    p = smallest_period(a)
    return p == n or n % p != 0


@njit(cache=True)
def least_rotation(a):
    """Start index of the lexicographically least rotation (two-pointer scan)."""
    n = a.shape[0]
    i = 0
    j = 1
    k = 0
    while i < n and j < n and k < n:
        x = a[(i + k) % n]
        y = a[(j + k) % n]
        if x == y:
            k += 1
            continue
        if x > y:
            i = i + k + 1
        else:
            j = j + k + 1
        if i == j:
            j += 1
        k = 0
    return min(i, j)


@njit(cache=True)
def is_lyndon(a):
    n = a.shape[0]
    if n == 0:
        return False
    j = 1
    k = 0
    while j < n and a[k] <= a[j]:
        if a[k] < a[j]:
            k = 0
        else:
            k += 1
        j += 1
    return j == n and k == 0


@njit(cache=True)
def cfl_starts(a):
    """Start offsets of the Chen-Fox-Lyndon factors of ``a`` (Duval)."""
    n = a.shape[0]
    out = np.empty(n, dtype=np.int64)
    m = 0
    i = 0
    while i < n:
        j = i + 1
        k = i
        while j < n and a[k] <= a[j]:
            if a[k] < a[j]:
                k = i
            else:
                k += 1
            j += 1
        p = j - k
        while i <= k:
            out[m] = i
            m += 1
            i += p
    return out[:m]


@njit(cache=True)
def min_suffix_start(a, lo):
    """Start of the least suffix of ``a[lo:]``: the last factor of its CFL."""
    n = a.shape[0]
    last = lo
    i = lo
    while i < n:
        j = i + 1
        k = i
        while j < n and a[k] <= a[j]:
            if a[k] < a[j]:
                k = i
            else:
                k += 1
            j += 1
        p = j - k
        while i <= k:
            last = i
            i += p
    return last


@njit(cache=True)
def canonicalize_rows(mat, out):
    """Rotate each primitive row of ``mat`` into ``out``; return the ok mask."""
    rows, n = mat.shape
    ok = np.zeros(rows, dtype=np.bool_)
    for r in range(rows):
        row = mat[r]
        if not is_primitive(row):
            continue
        ok[r] = True
        s = least_rotation(row)
        for t in range(n):
            out[r, t] = row[(s + t) % n]
    return ok


@njit(cache=True)
def right_factor_rows(mat):
    """Standard right factor length of every (Lyndon) row."""
    rows, n = mat.shape
    out = np.empty(rows, dtype=np.int64)
    for r in range(rows):
        out[r] = n - min_suffix_start(mat[r], 1)
    return out


@njit(cache=True)
def tail_is_lyndon_rows(mat):
    """Whether deleting the first letter of each row leaves a Lyndon word."""
    rows, n = mat.shape
    out = np.empty(rows, dtype=np.bool_)
    for r in range(rows):
        out[r] = is_lyndon(mat[r, 1:])
    return out
