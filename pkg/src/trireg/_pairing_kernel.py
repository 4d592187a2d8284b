"""Compiled sweep over all perfect matchings of d*n labeled half-edges.

Half-edge ``h`` belongs to node ``h // d`` and carries port label ``h % d + 1``.
At every depth the lowest free half-edge is matched, which reproduces the
configuration order of the resulting edges.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sweep(n, d, lo, hi, prune, hist_profile, hist_triangles):
    """Enumerate matchings whose first edge pairs half-edge 0 with a partner in
    ``[lo, hi)``. Fills the histograms in place for simple matchings.

    Returns ``(leaves, simple)``; with ``prune`` the leaves below a loop or
    repeated edge are counted as a double factorial instead of visited.
    """
    H = n * d
    E = H // 2
    dfact = np.ones(E + 1, dtype=np.int64)
    for r in range(1, E + 1):
        dfact[r] = dfact[r - 1] * (2 * r - 1)

    partner = np.full(H, -1, dtype=np.int64)
    A = np.zeros((n, n), dtype=np.int64)
    a_st = np.zeros(E, dtype=np.int64)
    b_st = np.zeros(E, dtype=np.int64)
    placed = np.zeros(E, dtype=np.bool_)
    kind_st = np.zeros(E, dtype=np.int64)  # 0 simple, 1 loop, 2 repeated
    tri_st = np.zeros(E, dtype=np.int64)

    leaves = 0
    simple = 0
    bad = 0
    T = 0
    prof = 0

    depth = 0
    a_st[0] = 0
    b_st[0] = lo - 1
    while depth >= 0:
        a = a_st[depth]
        if placed[depth]:
            b = b_st[depth]
            i = a // d
            j = b // d
            partner[a] = -1
            partner[b] = -1
            k = kind_st[depth]
            if k == 1:
                bad -= 1
            else:
                A[i, j] -= 1
                A[j, i] -= 1
                if k == 2:
                    bad -= 1
                else:
                    T -= tri_st[depth]
                    if tri_st[depth] > 0:
                        prof ^= 1 << depth
            placed[depth] = False

        b = b_st[depth] + 1
        while b < H and partner[b] != -1:
            b += 1
        if b >= H or (depth == 0 and b >= hi):
            depth -= 1
            continue
        b_st[depth] = b

        i = a // d
        j = b // d
        partner[a] = b
        partner[b] = a
        if i == j:
            kind_st[depth] = 1
            bad += 1
        elif A[i, j] > 0:
            kind_st[depth] = 2
            bad += 1
            A[i, j] += 1
            A[j, i] += 1
        else:
            kind_st[depth] = 0
            t = 0
            if bad == 0:
                for h in range(n):
                    if A[i, h] > 0 and A[j, h] > 0:
                        t += 1
            tri_st[depth] = t
            T += t
            if t > 0:
                prof ^= 1 << depth
            A[i, j] += 1
            A[j, i] += 1
        placed[depth] = True

        if depth == E - 1:
            leaves += 1
            if bad == 0:
                simple += 1
                hist_profile[prof] += 1
                hist_triangles[T] += 1
        elif prune and bad > 0:
            leaves += dfact[E - depth - 1]
        else:
            depth += 1
            f = a + 1
            while partner[f] != -1:
                f += 1
            a_st[depth] = f
            b_st[depth] = f
            placed[depth] = False
    return leaves, simple
