"""Small shared helpers: enumeration caps, worker counts, subset iterators."""

import math
import os

# Default ceiling on the number of enumerated subsets / (L, S) pairs.
# C(29, 10) > 2e7, so 2k-sparse eigenvalues on 29-variable inputs fall back
# to bounds at the default, while C(29, 8) stays exact.
DEFAULT_ENUM_CAP = 20_000_000


def worker_count():
    """Worker cap from GS_THREADS (unset or 0 means one per CPU)."""
    raw = os.environ.get("GS_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


def _subsets_lex(items, max_size):
    if max_size > 0:
        for i, x in enumerate(items):
            head = (x,)
            yield head
            for rest in _subsets_lex(items[i + 1 :], max_size - 1):
                yield head + rest


def lex_subsets(items, max_size=None):
    """All subsets of `items` (given in increasing order), lexicographic.

    Yields the empty tuple first, then (a0,), (a0, a1), ..., matching the
    tie-break order used by the enumeration kernels.
    """
    items = tuple(items)
    if max_size is None:
        max_size = len(items)
    yield ()
    yield from _subsets_lex(items, max_size)


def count_pairs(n_candidates, u_size, k):
    """Number of (L, S) pairs with L in a u_size-set, 1 <= |S| <= k.

    S is drawn from n_candidates total variables minus the l chosen into L.
    """
    total = 0
    for l in range(u_size + 1):
        per_l = sum(
            math.comb(n_candidates - l, s)
            for s in range(1, min(k, n_candidates - l) + 1)
        )
        total += math.comb(u_size, l) * per_l
    return total
