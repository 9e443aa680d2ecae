# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled extension-computation kernels.

Behaviorally identical to ``pure.py``; selected at import by the
package ``__init__`` when the extension built successfully.
"""

from libc.stdlib cimport free, malloc


def grounded_kernel(int n, int[:] att_indptr, int[:] att_indices,
                    int[:] tgt_indptr, int[:] tgt_indices):
    cdef int i, k, t, top
    cdef unsigned char *labels = <unsigned char *> malloc(n * sizeof(unsigned char))
    cdef int *remaining = <int *> malloc(n * sizeof(int))
    cdef int *stack = <int *> malloc((2 * n + 1) * sizeof(int))
    if labels == NULL or remaining == NULL or stack == NULL:
        free(labels); free(remaining); free(stack)
        raise MemoryError()
    top = 0
    try:
        for i in range(n):
            labels[i] = 0
            remaining[i] = att_indptr[i + 1] - att_indptr[i]
            if remaining[i] == 0:
                labels[i] = 1
                stack[top] = i
                top += 1
        while top > 0:
            top -= 1
            i = stack[top]
            if labels[i] == 1:
                for k in range(tgt_indptr[i], tgt_indptr[i + 1]):
                    t = tgt_indices[k]
                    if labels[t] != 2:
                        labels[t] = 2
                        stack[top] = t
                        top += 1
            else:
                for k in range(tgt_indptr[i], tgt_indptr[i + 1]):
                    t = tgt_indices[k]
                    remaining[t] -= 1
                    if remaining[t] == 0 and labels[t] == 0:
                        labels[t] = 1
                        stack[top] = t
                        top += 1
        return [labels[i] for i in range(n)]
    finally:
        free(labels)
        free(remaining)
        free(stack)


cdef unsigned long long _attacked_by(unsigned long long mask,
                                     unsigned long long *tgt, int n):
    cdef unsigned long long out = 0
    cdef int i
    for i in range(n):
        if mask & (<unsigned long long> 1 << i):
            out |= tgt[i]
    return out


cdef bint _is_admissible(unsigned long long mask, unsigned long long *att,
                         unsigned long long *tgt, int n):
    cdef unsigned long long hit = _attacked_by(mask, tgt, n)
    cdef int i
    for i in range(n):
        if mask & (<unsigned long long> 1 << i):
            if att[i] & ~hit:
                return False
    return True


cdef void _search(int i, unsigned long long included, int n,
                  unsigned long long *att, unsigned long long *tgt,
                  list found):
    cdef unsigned long long bit
    if i == n:
        if _is_admissible(included, att, tgt, n):
            found.append(included)
        return
    _search(i + 1, included, n, att, tgt, found)
    bit = <unsigned long long> 1 << i
    if (att[i] & (included | bit)) == 0 and (tgt[i] & (included | bit)) == 0:
        _search(i + 1, included | bit, n, att, tgt, found)


def preferred_kernel(int n, att_masks, tgt_masks):
    if n > 63:
        raise ValueError("bitmask kernel supports at most 63 nodes")
    cdef unsigned long long *att = <unsigned long long *> malloc(
        (n + 1) * sizeof(unsigned long long))
    cdef unsigned long long *tgt = <unsigned long long *> malloc(
        (n + 1) * sizeof(unsigned long long))
    if att == NULL or tgt == NULL:
        free(att); free(tgt)
        raise MemoryError()
    cdef int i
    try:
        for i in range(n):
            att[i] = att_masks[i]
            tgt[i] = tgt_masks[i]
        found: list = []
        _search(0, 0, n, att, tgt, found)
    finally:
        free(att)
        free(tgt)
    maximal: list = []
    for cand in sorted(found, key=lambda m: (-bin(m).count("1"), m)):
        if not any(kept & cand == cand for kept in maximal):
            maximal.append(cand)
    maximal.sort()
    return maximal
