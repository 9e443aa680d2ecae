"""Pure-Python extension-computation kernels.

Mirror of the compiled kernels in ``_speedups.pyx``; the two must stay
behaviorally identical (tested). Graphs arrive in CSR form (grounded)
or as per-node bitmasks (preferred enumeration, node count <= 63).
"""

from __future__ import annotations

UNDEC, IN, OUT = 0, 1, 2


def grounded_kernel(n, att_indptr, att_indices, tgt_indptr, tgt_indices):
    """Least-fixpoint labelling of the defense function.

    Nodes whose attackers are all OUT become IN; targets of IN nodes
    become OUT; repeat to the fixpoint. Returns a list of labels.
    """
    labels = [UNDEC] * n
    remaining = [att_indptr[i + 1] - att_indptr[i] for i in range(n)]
    stack = [i for i in range(n) if remaining[i] == 0]
    for i in stack:
        labels[i] = IN
    while stack:
        i = stack.pop()
        if labels[i] == IN:
            for k in range(tgt_indptr[i], tgt_indptr[i + 1]):
                t = tgt_indices[k]
                if labels[t] != OUT:
                    labels[t] = OUT
                    stack.append(t)
        else:  # OUT: each target loses one live attacker
            for k in range(tgt_indptr[i], tgt_indptr[i + 1]):
                t = tgt_indices[k]
                remaining[t] -= 1
                if remaining[t] == 0 and labels[t] == UNDEC:
                    labels[t] = IN
                    stack.append(t)
    return labels


def preferred_kernel(n, att_masks, tgt_masks):
    """All maximal admissible sets as bitmasks, ascending order.

    Exhaustive DFS over conflict-free candidate sets with an
    admissibility check at the leaves.
    """
    admissible: list[int] = []

    def attacked_by(mask: int) -> int:
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= tgt_masks[low.bit_length() - 1]
            m ^= low
        return out

    def is_admissible(mask: int) -> bool:
        hit = attacked_by(mask)
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if att_masks[i] & ~hit:
                return False
            m ^= low
        return True

    def search(i: int, included: int) -> None:
        if i == n:
            if is_admissible(included):
                admissible.append(included)
            return
        search(i + 1, included)
        bit = 1 << i
        if (att_masks[i] & (included | bit)) == 0 and (tgt_masks[i] & (included | bit)) == 0:
            search(i + 1, included | bit)

    search(0, 0)

    maximal: list[int] = []
    for cand in sorted(admissible, key=lambda m: (-bin(m).count("1"), m)):
        if not any(kept & cand == cand for kept in maximal):
            maximal.append(cand)
    maximal.sort()
    return maximal
