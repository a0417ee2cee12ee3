# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel over packed 64-bit word bitsets.

Mirrors orsplit._kernel.fallback exactly: same search order, same
incumbent and pruning rules, same evaluation counting.  Keep the two in
lockstep when changing either.
"""

from libc.stdint cimport int64_t, uint8_t, uint64_t
from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy

import time


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int orsplit_popcount64(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    #else
    static inline int orsplit_popcount64(unsigned long long x) {
        x = x - ((x >> 1) & 0x5555555555555555ULL);
        x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
        x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0FULL;
        return (int)((x * 0x0101010101010101ULL) >> 56);
    }
    #endif
    """
    int orsplit_popcount64(uint64_t x) nogil


DEF TIME_CHECK_MASK = 0x3FF

cdef int64_t NU_INF = <int64_t>1 << 62


cdef inline int64_t tau_of(int64_t pos, int64_t neg, int64_t fp, int64_t fn,
                           int64_t nu) nogil:
    if 2 * fn < pos:
        if 2 * fp > neg:
            return nu
        return pos * fp
    if 2 * fp > neg:
        return neg * (pos - fn)
    return 0


def enum_search(const uint8_t[:, :] B, const uint8_t[:] y,
                long max_rules, long min_node_size, bint same_gender_veto,
                long node_budget, double time_limit):
    """See orsplit._kernel.fallback.enum_search for the full contract."""
    cdef Py_ssize_t n = B.shape[0]
    cdef Py_ssize_t m = B.shape[1]
    cdef Py_ssize_t W = (n + 63) >> 6
    cdef Py_ssize_t i, k, w, f
    cdef int64_t pos = 0, neg

    cdef uint64_t *colw = <uint64_t *>calloc(m * W, sizeof(uint64_t))
    cdef uint64_t *ymask = <uint64_t *>calloc(W, sizeof(uint64_t))
    cdef uint64_t *zparent = <uint64_t *>malloc(W * sizeof(uint64_t))
    cdef uint64_t *zchild = <uint64_t *>malloc(W * sizeof(uint64_t))
    # frontier buffers, swapped between levels
    cdef int *cur_idx = NULL
    cdef int64_t *cur_tau = NULL
    cdef int64_t *cur_zsum = NULL
    cdef int *nxt_idx = NULL
    cdef int64_t *nxt_tau = NULL
    cdef int64_t *nxt_zsum = NULL
    cdef int *best_buf = <int *>malloc((max_rules if max_rules > 0 else 1) * sizeof(int))

    if (colw == NULL or ymask == NULL or zparent == NULL or zchild == NULL
            or best_buf == NULL):
        free(colw); free(ymask); free(zparent); free(zchild); free(best_buf)
        raise MemoryError()

    for i in range(n):
        if y[i]:
            pos += 1
            ymask[i >> 6] |= (<uint64_t>1) << (i & 63)
        for k in range(m):
            if B[i, k]:
                colw[k * W + (i >> 6)] |= (<uint64_t>1) << (i & 63)
    neg = n - pos

    cdef int64_t mns = min_node_size
    cdef int64_t gender_rhs = 2 * pos - n
    if gender_rhs < 0:
        gender_rhs = 0
    cdef double deadline = -1.0
    if time_limit > 0:
        deadline = time.monotonic() + time_limit

    cdef int64_t nu_best = NU_INF
    cdef int best_len = 0
    cdef int64_t best_tp = 0, best_fp = 0, best_zsum = 0, best_nu = 0
    cdef int64_t evals = 0
    cdef bint truncated = False
    cdef bint have_best = False

    cdef long levels = max_rules if max_rules < m else m
    cdef Py_ssize_t cur_n = 0, nxt_n = 0, nxt_cap = 0
    cdef long level, width
    cdef int64_t z_sum, tp, fp, fn, nu, tau
    cdef uint64_t word
    cdef Py_ssize_t kmax
    cdef bint store_children, feasible

    try:
        # level 1: every singleton roots a search subtree
        cur_idx = <int *>malloc(m * sizeof(int))
        cur_tau = <int64_t *>malloc(m * sizeof(int64_t))
        cur_zsum = <int64_t *>malloc(m * sizeof(int64_t))
        if cur_idx == NULL or cur_tau == NULL or cur_zsum == NULL:
            raise MemoryError()
        for k in range(m):
            if node_budget >= 0 and evals >= node_budget:
                truncated = True
                break
            if deadline >= 0 and (evals & TIME_CHECK_MASK) == 0:
                if time.monotonic() > deadline:
                    truncated = True
                    break
            z_sum = 0
            tp = 0
            for w in range(W):
                word = colw[k * W + w]
                z_sum += orsplit_popcount64(word)
                tp += orsplit_popcount64(word & ymask[w])
            fp = z_sum - tp
            fn = pos - tp
            nu = pos * fp + neg * fn - 2 * fn * fp
            tau = tau_of(pos, neg, fp, fn, nu)
            evals += 1
            if (z_sum >= mns and n - z_sum >= mns
                    and (not same_gender_veto or tp - fp >= gender_rhs)
                    and nu < nu_best):
                nu_best = nu
                have_best = True
                best_len = 1
                best_buf[0] = <int>k
                best_tp = tp; best_fp = fp; best_zsum = z_sum; best_nu = nu
            cur_idx[cur_n] = <int>k
            cur_tau[cur_n] = tau
            cur_zsum[cur_n] = z_sum
            cur_n += 1

        level = 1
        width = 1
        while level < levels and cur_n > 0 and not truncated:
            store_children = level + 1 < levels
            # capacity bound: every frontier entry could expand to all
            # larger indices; filters only shrink the actual count
            nxt_cap = 0
            if store_children:
                for f in range(cur_n):
                    nxt_cap += m - 1 - cur_idx[f * width + width - 1]
            if nxt_cap > 0:
                nxt_idx = <int *>malloc(nxt_cap * (width + 1) * sizeof(int))
                nxt_tau = <int64_t *>malloc(nxt_cap * sizeof(int64_t))
                nxt_zsum = <int64_t *>malloc(nxt_cap * sizeof(int64_t))
                if nxt_idx == NULL or nxt_tau == NULL or nxt_zsum == NULL:
                    raise MemoryError()
            else:
                nxt_idx = NULL; nxt_tau = NULL; nxt_zsum = NULL
            nxt_n = 0
            for f in range(cur_n):
                if cur_zsum[f] > n - mns:
                    continue
                if cur_tau[f] >= nu_best:
                    continue
                memcpy(zparent, &colw[cur_idx[f * width] * W], W * sizeof(uint64_t))
                for i in range(1, width):
                    k = cur_idx[f * width + i]
                    for w in range(W):
                        zparent[w] |= colw[k * W + w]
                kmax = cur_idx[f * width + width - 1]
                for k in range(kmax + 1, m):
                    if node_budget >= 0 and evals >= node_budget:
                        truncated = True
                        break
                    if deadline >= 0 and (evals & TIME_CHECK_MASK) == 0:
                        if time.monotonic() > deadline:
                            truncated = True
                            break
                    z_sum = 0
                    tp = 0
                    for w in range(W):
                        word = zparent[w] | colw[k * W + w]
                        zchild[w] = word
                        z_sum += orsplit_popcount64(word)
                        tp += orsplit_popcount64(word & ymask[w])
                    fp = z_sum - tp
                    fn = pos - tp
                    nu = pos * fp + neg * fn - 2 * fn * fp
                    tau = tau_of(pos, neg, fp, fn, nu)
                    evals += 1
                    if (z_sum >= mns and n - z_sum >= mns
                            and (not same_gender_veto or tp - fp >= gender_rhs)
                            and nu < nu_best):
                        nu_best = nu
                        have_best = True
                        best_len = width + 1
                        for i in range(width):
                            best_buf[i] = cur_idx[f * width + i]
                        best_buf[width] = <int>k
                        best_tp = tp; best_fp = fp; best_zsum = z_sum; best_nu = nu
                    if store_children:
                        for i in range(width):
                            nxt_idx[nxt_n * (width + 1) + i] = cur_idx[f * width + i]
                        nxt_idx[nxt_n * (width + 1) + width] = <int>k
                        nxt_tau[nxt_n] = tau
                        nxt_zsum[nxt_n] = z_sum
                        nxt_n += 1
                if truncated:
                    break
            free(cur_idx); free(cur_tau); free(cur_zsum)
            cur_idx = nxt_idx; cur_tau = nxt_tau; cur_zsum = nxt_zsum
            nxt_idx = NULL; nxt_tau = NULL; nxt_zsum = NULL
            cur_n = nxt_n
            width += 1
            level += 1

        if have_best:
            best = tuple(best_buf[i] for i in range(best_len))
            counts = (best_tp, best_fp, best_zsum, best_nu)
        else:
            best = None
            counts = None
        return best, counts, evals, truncated
    finally:
        free(colw); free(ymask); free(zparent); free(zchild); free(best_buf)
        free(cur_idx); free(cur_tau); free(cur_zsum)
        free(nxt_idx); free(nxt_tau); free(nxt_zsum)
