"""Pure numpy/Python backend for the hot kernels.

Every function here operates on int64 numpy arrays describing one
time-ordered slice of edits (timestamps in ms, positions in characters,
author codes) and returns numpy arrays. Comparisons are strict `<` for
window gaps and `>=` for session splits throughout, matching the
definitions implemented in the higher-level modules. The numba backend
must produce bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

CONSIDER = 0
POTENTIAL = 1
CONFLICT = 2

_EMPTY = np.empty(0, dtype=np.int64)


def session_starts(ts: np.ndarray, gap_ms: int) -> np.ndarray:
    """Indices that start a new session: index 0 plus every op whose time
    distance to the previous op is >= gap_ms."""
    if ts.shape[0] == 0:
        return _EMPTY.copy()
    starts = np.flatnonzero(np.diff(ts) >= gap_ms).astype(np.int64) + 1
    return np.concatenate((np.zeros(1, dtype=np.int64), starts))


def switch_points(author: np.ndarray) -> np.ndarray:
    """Indices i >= 1 where the author differs from the previous op."""
    if author.shape[0] < 2:
        return _EMPTY.copy()
    return np.flatnonzero(author[1:] != author[:-1]).astype(np.int64) + 1


def insertion_spans(author: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(x1, x2) index pairs enclosing a maximal single-author run whose
    neighbours on both sides share a different author.

    x1 is the op immediately before the run, x2 the op immediately after;
    both belong to the same author, every op strictly between belongs to
    exactly one other author.
    """
    n = author.shape[0]
    if n < 3:
        return _EMPTY.copy(), _EMPTY.copy()
    change = np.flatnonzero(author[1:] != author[:-1]).astype(np.int64) + 1
    starts = np.concatenate((np.zeros(1, dtype=np.int64), change))
    if starts.shape[0] < 3:
        return _EMPTY.copy(), _EMPTY.copy()
    run_author = author[starts]
    mid = np.flatnonzero(run_author[:-2] == run_author[2:]).astype(np.int64) + 1
    return starts[mid] - 1, starts[mid + 1]


def border_outcomes(
    ts: np.ndarray,
    pos: np.ndarray,
    author: np.ndarray,
    y_idx: np.ndarray,
    t_ms: int,
    p_chars: int,
    symmetric: bool,
) -> np.ndarray:
    """Outcome code per border case; y_idx holds the index of the second
    edit of each author switch (the first is y-1, the follow-up y+1)."""
    n = ts.shape[0]
    m = y_idx.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    if m == 0:
        return out
    x = y_idx - 1
    y = y_idx
    dt = ts[y] - ts[x]
    dp = np.abs(pos[y] - pos[x])
    potential = (dt < t_ms) & (dp < p_chars)
    has_next = y + 1 < n
    xp = np.minimum(y + 1, n - 1)
    author_ok = (author[xp] == author[x]) | (author[xp] == author[y])
    time_ok = (ts[xp] - ts[y]) < t_ms
    px, py, pxp = pos[x], pos[y], pos[xp]
    orient = (px < pxp) & (pxp < py) & (pxp - px < p_chars) & (py - pxp < p_chars)
    if symmetric:
        orient |= (py < pxp) & (pxp < px) & (pxp - py < p_chars) & (px - pxp < p_chars)
    conflict = potential & has_next & author_ok & time_ok & orient
    out[potential] = POTENTIAL
    out[conflict] = CONFLICT
    return out


def insertion_outcomes(
    ts: np.ndarray,
    pos: np.ndarray,
    author: np.ndarray,
    x1: np.ndarray,
    x2: np.ndarray,
    t_ms: int,
    p_chars: int,
) -> np.ndarray:
    """Outcome code per insertion case (x1/x2 pairs from insertion_spans)."""
    n = ts.shape[0]
    m = x1.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    if m == 0:
        return out
    dts = np.diff(ts)
    ts_l = ts.tolist()
    pos_l = pos.tolist()
    author_l = author.tolist()
    for k in range(m):
        a = int(x1[k])
        b = int(x2[k])
        if int(np.max(dts[a:b])) >= t_ms:
            continue
        lo = pos_l[a]
        hi = pos_l[b]
        if lo > hi:
            lo, hi = hi, lo
        if lo == hi:
            continue
        block = pos[a + 1 : b]
        inside = np.sort(block[(block > lo) & (block < hi)])
        if inside.shape[0] == 0:
            continue
        prev = lo
        chained = True
        for q in inside.tolist():
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
        if author_l[follow] != author_l[a] and author_l[follow] != author_l[a + 1]:
            continue
        if ts_l[follow] - ts_l[b] >= t_ms:
            continue
        if lo < pos_l[follow] < hi:
            out[k] = CONFLICT
    return out


def cluster_labels(ts: np.ndarray, pos: np.ndarray, t_ms: int, p_chars: int) -> np.ndarray:
    """Single-linkage component label per op (two ops link iff their time
    distance is < t_ms AND their position distance is < p_chars).

    Sweep over the time-sorted ops with a candidate buffer bounded by t_ms;
    labels are numbered by each component's earliest member.
    """
    n = ts.shape[0]
    labels = np.empty(n, dtype=np.int64)
    if n == 0:
        return labels
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    ts_l = ts.tolist()
    pos_l = pos.tolist()
    w = 0
    for i in range(1, n):
        ti = ts_l[i]
        pi = pos_l[i]
        while ti - ts_l[w] >= t_ms:
            w += 1
        for j in range(w, i):
            d = pi - pos_l[j]
            if -p_chars < d < p_chars:
                ri = find(i)
                rj = find(j)
                if ri != rj:
                    # root = smaller index, so roots stay earliest members
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj
    remap: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        lbl = remap.get(r)
        if lbl is None:
            lbl = len(remap)
            remap[r] = lbl
        labels[i] = lbl
    return labels
