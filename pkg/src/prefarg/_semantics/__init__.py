"""Extension-computation kernels with backend selection at import.

The compiled kernels are used when the extension built; the pure-Python
mirror is the fallback. ``PREFARG_PURE=1`` forces the fallback (useful
for the benchmark and for backend-equivalence tests).
"""

from __future__ import annotations

import os
from array import array

if os.environ.get("PREFARG_PURE") == "1":
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import pure as _impl  # type: ignore[no-redef]

        BACKEND = "pure"

UNDEC, IN, OUT = 0, 1, 2


def _csr(n: int, rows: list[list[int]]) -> tuple[array, array]:
    indptr = array("i", [0] * (n + 1))
    indices = array("i")
    for i, row in enumerate(rows):
        indices.extend(row)
        indptr[i + 1] = len(indices)
    if not indices:
        indices.append(0)  # keep buffers non-empty for memoryviews
        indices.pop()
        indices = array("i", [0])
        indptr_last = indptr[n]
        assert indptr_last == 0
    return indptr, indices


def _targets_from(attackers: list[list[int]]) -> list[list[int]]:
    targets: list[list[int]] = [[] for _ in attackers]
    for node, atts in enumerate(attackers):
        for a in atts:
            targets[a].append(node)
    return targets


def grounded_partition(attackers: list[list[int]]) -> tuple[set[int], set[int]]:
    """(accepted, defeated) node sets of the grounded labelling.

    ``attackers[i]`` lists the nodes with a defeat edge into ``i``.
    """
    n = len(attackers)
    if n == 0:
        return set(), set()
    targets = _targets_from(attackers)
    att_indptr, att_indices = _csr(n, attackers)
    tgt_indptr, tgt_indices = _csr(n, targets)
    labels = _impl.grounded_kernel(n, att_indptr, att_indices,
                                   tgt_indptr, tgt_indices)
    accepted = {i for i in range(n) if labels[i] == IN}
    defeated = {i for i in range(n) if labels[i] == OUT}
    return accepted, defeated


def preferred_subsets(attackers: list[list[int]]) -> list[frozenset[int]]:
    """All maximal admissible node sets, deterministic order."""
    n = len(attackers)
    if n == 0:
        return [frozenset()]
    if n > 63:
        raise ValueError("preferred enumeration supports at most 63 nodes")
    att_masks = [0] * n
    for i, atts in enumerate(attackers):
        for a in atts:
            att_masks[i] |= 1 << a
    tgt_masks = [0] * n
    for i in range(n):
        for a in attackers[i]:
            tgt_masks[a] |= 1 << i
    masks = _impl.preferred_kernel(n, att_masks, tgt_masks)
    return [frozenset(i for i in range(n) if m >> i & 1) for m in masks]
