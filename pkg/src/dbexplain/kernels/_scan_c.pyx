# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled participation scan.

Mirrors the pure-Python kernel: depth-first companion search with early
exit, at most the product of the other atoms' extension sizes per
candidate row.  Rows arrive as one int32 matrix (all atoms concatenated,
padded to a common width); pairwise positional equality constraints come
flattened with a (start, length) table indexed by atom pair.
"""

import numpy as np


cdef bint _extend(int depth, int nord, const int[:] order, int k,
                  const int[:, :] big, const int[:] offs,
                  const int[:] cstart, const int[:] clen,
                  const int[:] ca, const int[:] cb,
                  int[:] chosen) noexcept:
    cdef int j, r, b, c, base, n
    cdef bint ok
    if depth == nord:
        return True
    j = order[depth]
    for r in range(offs[j], offs[j + 1]):
        ok = True
        for b in range(k):
            if chosen[b] < 0:
                continue
            base = cstart[j * k + b]
            n = clen[j * k + b]
            for c in range(n):
                if big[r, ca[base + c]] != big[chosen[b], cb[base + c]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chosen[j] = r
            if _extend(depth + 1, nord, order, k, big, offs, cstart, clen,
                       ca, cb, chosen):
                chosen[j] = -1
                return True
            chosen[j] = -1
    return False


def participation_masks_c(big_arr, offs_arr, cstart_arr, clen_arr, ca_arr, cb_arr):
    """Return a uint8 mask over all rows: 1 iff the row extends to a full
    satisfying combination when pinned at its own atom position."""
    cdef const int[:, :] big = big_arr
    cdef const int[:] offs = offs_arr
    cdef const int[:] cstart = cstart_arr
    cdef const int[:] clen = clen_arr
    cdef const int[:] ca = ca_arr
    cdef const int[:] cb = cb_arr
    cdef int k = offs_arr.shape[0] - 1
    cdef int i, j, r, d

    out_arr = np.zeros(big_arr.shape[0], dtype=np.uint8)
    cdef unsigned char[:] out = out_arr
    order_arr = np.zeros(max(k - 1, 1), dtype=np.int32)
    cdef int[:] order = order_arr
    chosen_arr = np.full(k, -1, dtype=np.int32)
    cdef int[:] chosen = chosen_arr

    for i in range(k):
        d = 0
        for j in range(k):
            if j != i:
                order[d] = j
                d += 1
        for r in range(offs[i], offs[i + 1]):
            for j in range(k):
                chosen[j] = -1
            chosen[i] = r
            if _extend(0, k - 1, order, k, big, offs, cstart, clen, ca, cb, chosen):
                out[r] = 1
    return out_arr
