"""Worst-case linear-time selection (median of medians), vectorized with numpy.

Two entry points: :func:`select_value` for plain float arrays and
:func:`select_point` for the lexicographic ``(x, y, id)`` order of a point set.
The default ``method="introselect"`` delegates to ``np.partition``, whose
introselect falls back to median of medians and so stays linear in the worst
case.  ``method="mom"`` runs the explicit median-of-medians loop below; the
two are cross-checked in the tests.
"""
from __future__ import annotations

import numpy as np

_SMALL = 256


def _medians_of_five(rows: np.ndarray) -> np.ndarray:
    return np.sort(rows, axis=1)[:, 2]


def select_value(values: np.ndarray, k: int, method: str = "introselect") -> float:
    """Return the k-th smallest (0-based) element of ``values``."""
    a = np.asarray(values, dtype=float)
    n = len(a)
    if not 0 <= k < n:
        raise IndexError(f"rank {k} out of range for {n} values")
    if method == "introselect":
        return float(np.partition(a, k)[k])
    while True:
        n = len(a)
        if n <= _SMALL:
            return float(np.sort(a)[k])
        g = n // 5
        meds = _medians_of_five(a[: 5 * g].reshape(g, 5))
        pivot = select_value(meds, g // 2, "mom")
        lo = a[a < pivot]
        if k < len(lo):
            a = lo
            continue
        n_eq = int(np.count_nonzero(a == pivot))
        if k < len(lo) + n_eq:
            return pivot
        k -= len(lo) + n_eq
        a = a[a > pivot]


def key_less(x, y, ids, px: float, py: float, pid: int) -> np.ndarray:
    """Mask of points strictly before ``(px, py, pid)`` in (x, y, id) order."""
    return (x < px) | ((x == px) & ((y < py) | ((y == py) & (ids < pid))))


def select_point(x: np.ndarray, y: np.ndarray, ids: np.ndarray, k: int,
                 method: str = "introselect") -> int:
    """Position (into the given arrays) of the k-th smallest point by (x, y, id)."""
    n = len(x)
    if not 0 <= k < n:
        raise IndexError(f"rank {k} out of range for {n} points")
    if method == "introselect":
        return _select_lex(x, y, ids, k)
    pos = np.arange(n)
    if method == "introselect" and n > _SMALL and np.unique(x).size == n:
        return int(np.argpartition(x, k)[k])
    while True:
        n = len(pos)
        if n <= _SMALL:
            o = np.lexsort((ids[pos], y[pos], x[pos]))
            return int(pos[o[k]])
        g = n // 5
        grp = pos[: 5 * g].reshape(g, 5)
        gx = x[grp]
        o = np.argsort(gx, axis=1, kind="stable")
        tied = (np.diff(np.take_along_axis(gx, o, axis=1), axis=1) == 0).any(axis=1)
        if tied.any():
            t = grp[tied]
            o[tied] = np.lexsort((ids[t], y[t], x[t]), axis=1)
        meds = np.take_along_axis(grp, o[:, 2:3], axis=1)[:, 0]
        piv = meds[select_point(x[meds], y[meds], ids[meds], g // 2, "mom")]
        px, py, pid = x[piv], y[piv], ids[piv]
        less = key_less(x[pos], y[pos], ids[pos], px, py, pid)
        n_less = int(np.count_nonzero(less))
        if k < n_less:
            pos = pos[less]
        elif k == n_less:
            return int(piv)
        else:
            k -= n_less + 1
            more = ~less
            more[pos == piv] = False
            pos = pos[more]


def _select_lex(x, y, ids, k: int) -> int:
    pos = np.arange(len(x))
    for key in (x, y):
        v = key[pos][np.argpartition(key[pos], k)[k]]
        below = key[pos] < v
        k -= int(np.count_nonzero(below))
        pos = pos[key[pos] == v]
        if len(pos) == 1:
            return int(pos[0])
    return int(pos[np.argpartition(ids[pos], k)[k]])


def argmin_point(x: np.ndarray, y: np.ndarray, ids: np.ndarray) -> int:
    """Position of the smallest point by (x, y, id); linear time."""
    c = np.flatnonzero(x == x.min())
    if len(c) > 1:
        c = c[y[c] == y[c].min()]
        if len(c) > 1:
            c = c[[int(np.argmin(ids[c]))]]
    return int(c[0])


def argmax_point(x: np.ndarray, y: np.ndarray, ids: np.ndarray) -> int:
    c = np.flatnonzero(x == x.max())
    if len(c) > 1:
        c = c[y[c] == y[c].max()]
        if len(c) > 1:
            c = c[[int(np.argmax(ids[c]))]]
    return int(c[0])


def split_lower(x, y, ids, m: int, method: str = "introselect") -> np.ndarray:
    """Boolean mask of the m smallest points by (x, y, id)."""
    n = len(x)
    if m <= 0:
        return np.zeros(n, dtype=bool)
    if m >= n:
        return np.ones(n, dtype=bool)
    p = select_point(x, y, ids, m - 1, method)
    mask = key_less(x, y, ids, x[p], y[p], ids[p])
    mask[p] = True
    return mask
