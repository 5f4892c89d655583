"""Numba-jitted backend for the hot kernels.

Loop transcriptions of the numpy backend; outputs are bit-identical.
All kernels compile with cache=True so repeat runs skip compilation.
"""

from __future__ import annotations

import numpy as np
from numba import njit

CONSIDER = 0
POTENTIAL = 1
CONFLICT = 2


@njit(cache=True, nogil=True)
def session_starts(ts, gap_ms):
    n = ts.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    count = 1
    for i in range(1, n):
        if ts[i] - ts[i - 1] >= gap_ms:
            count += 1
    out = np.empty(count, dtype=np.int64)
    out[0] = 0
    k = 1
    for i in range(1, n):
        if ts[i] - ts[i - 1] >= gap_ms:
            out[k] = i
            k += 1
    return out


@njit(cache=True, nogil=True)
def switch_points(author):
    n = author.shape[0]
    count = 0
    for i in range(1, n):
        if author[i] != author[i - 1]:
            count += 1
    out = np.empty(count, dtype=np.int64)
    k = 0
    for i in range(1, n):
        if author[i] != author[i - 1]:
            out[k] = i
            k += 1
    return out


@njit(cache=True, nogil=True)
def insertion_spans(author):
    n = author.shape[0]
    if n < 3:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    nruns = 1
    for i in range(1, n):
        if author[i] != author[i - 1]:
            nruns += 1
    starts = np.empty(nruns, dtype=np.int64)
    starts[0] = 0
    k = 1
    for i in range(1, n):
        if author[i] != author[i - 1]:
            starts[k] = i
            k += 1
    count = 0
    for r in range(1, nruns - 1):
        if author[starts[r - 1]] == author[starts[r + 1]]:
            count += 1
    x1 = np.empty(count, dtype=np.int64)
    x2 = np.empty(count, dtype=np.int64)
    k = 0
    for r in range(1, nruns - 1):
        if author[starts[r - 1]] == author[starts[r + 1]]:
            x1[k] = starts[r] - 1
            x2[k] = starts[r + 1]
            k += 1
    return x1, x2


@njit(cache=True, nogil=True)
def border_outcomes(ts, pos, author, y_idx, t_ms, p_chars, symmetric):
    n = ts.shape[0]
    m = y_idx.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    for k in range(m):
        y = y_idx[k]
        x = y - 1
        dt = ts[y] - ts[x]
        dp = pos[y] - pos[x]
        if dp < 0:
            dp = -dp
        if dt >= t_ms or dp >= p_chars:
            continue
        out[k] = POTENTIAL
        xp = y + 1
        if xp >= n:
            continue
        if author[xp] != author[x] and author[xp] != author[y]:
            continue
        if ts[xp] - ts[y] >= t_ms:
            continue
        px = pos[x]
        py = pos[y]
        pxp = pos[xp]
        ok = px < pxp < py and pxp - px < p_chars and py - pxp < p_chars
        if symmetric and not ok:
            ok = py < pxp < px and pxp - py < p_chars and px - pxp < p_chars
        if ok:
            out[k] = CONFLICT
    return out


@njit(cache=True, nogil=True)
def insertion_outcomes(ts, pos, author, x1, x2, t_ms, p_chars):
    n = ts.shape[0]
    m = x1.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    for k in range(m):
        a = x1[k]
        b = x2[k]
        ordered = True
        for i in range(a, b):
            if ts[i + 1] - ts[i] >= t_ms:
                ordered = False
                break
        if not ordered:
            continue
        lo = pos[a]
        hi = pos[b]
        if lo > hi:
            lo, hi = hi, lo
        if lo == hi:
            continue
        inside = np.empty(b - a - 1, dtype=np.int64)
        cnt = 0
        for i in range(a + 1, b):
            q = pos[i]
            if lo < q < hi:
                inside[cnt] = q
                cnt += 1
        if cnt == 0:
            continue
        inside = np.sort(inside[:cnt])
        prev = lo
        chained = True
        for i in range(cnt):
            q = inside[i]
            if q == prev:
                continue
            if q - prev >= p_chars:
                chained = False
                break
            prev = q
        if not chained or hi - prev >= p_chars:
            continue
        out[k] = POTENTIAL
        follow = b + 1
        if follow >= n:
            continue
        if author[follow] != author[a] and author[follow] != author[a + 1]:
            continue
        if ts[follow] - ts[b] >= t_ms:
            continue
        if lo < pos[follow] < hi:
            out[k] = CONFLICT
    return out


@njit(cache=True, nogil=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True, nogil=True)
def cluster_labels(ts, pos, t_ms, p_chars):
    n = ts.shape[0]
    labels = np.empty(n, dtype=np.int64)
    if n == 0:
        return labels
    parent = np.arange(n, dtype=np.int64)
    w = 0
    for i in range(1, n):
        ti = ts[i]
        pi = pos[i]
        while ti - ts[w] >= t_ms:
            w += 1
        for j in range(w, i):
            d = pi - pos[j]
            if -p_chars < d < p_chars:
                ri = _find(parent, i)
                rj = _find(parent, j)
                if ri != rj:
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj
    remap = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for i in range(n):
        r = _find(parent, i)
        if remap[r] < 0:
            remap[r] = nxt
            nxt += 1
        labels[i] = remap[r]
    return labels
