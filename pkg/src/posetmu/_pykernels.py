"""Pure-Python versions of the hot loops; the compiled module mirrors these."""


def _gap_indices(pattern):
    # For each pattern index j, the earlier index holding the nearest smaller
    # value and the one holding the nearest larger value (-1 when absent).
    k = len(pattern)
    lo = [-1] * k
    hi = [-1] * k
    for j in range(k):
        best_lo = 0
        best_hi = k + 1
        for i in range(j):
            v = pattern[i]
            if best_lo < v < pattern[j]:
                best_lo = v
                lo[j] = i
            if pattern[j] < v < best_hi:
                best_hi = v
                hi[j] = i
    return lo, hi


def occurrence_masks(pattern, host, limit=0):
    """Bitmasks of all occurrences of ``pattern`` in ``host`` in lexicographic order.

    ``limit > 0`` stops after that many occurrences.
    """
    k = len(pattern)
    n = len(host)
    if k > n:
        return []
    lo, hi = _gap_indices(pattern)
    chosen = [0] * k
    out = []

    def extend(j, start, bits):
        if j == k:
            out.append(bits)
            return limit and len(out) >= limit
        lo_j = lo[j]
        hi_j = hi[j]
        low_val = host[chosen[lo_j]] if lo_j >= 0 else 0
        high_val = host[chosen[hi_j]] if hi_j >= 0 else n + 1
        for p in range(start, n - (k - j) + 1):
            v = host[p]
            if low_val < v < high_val:
                chosen[j] = p
                if extend(j + 1, p + 1, bits | (1 << p)):
                    return True
        return False

    extend(0, 0, 0)
    return out


def signed_face_sum(facets, n):
    """Sum of (-1)^|T| over every T contained in at least one facet."""
    seen = set()
    stack = []
    for f in facets:
        if f not in seen:
            seen.add(f)
            stack.append(f)
    total = 0
    while stack:
        t = stack.pop()
        total += -1 if t.bit_count() & 1 else 1
        rest = t
        while rest:
            low = rest & -rest
            rest ^= low
            child = t ^ low
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return total


def ez_subset_sum(zero_masks):
    """Sum of (-1)^|S| over nonempty S whose zero masks have empty intersection.

    Depth-first over subsets with the running intersection. A branch whose
    intersection is already empty contributes only when no elements remain
    (the completions cancel in pairs otherwise); a branch that cannot empty
    its intersection with everything left is cut.
    """
    zs = list(zero_masks)
    m = len(zs)
    if m == 0:
        return 0
    suffix = [-1] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] & zs[i]
    total = 0

    def walk(i, cur, size):
        nonlocal total
        if cur & suffix[i]:
            return
        for j in range(i, m):
            nxt = cur & zs[j]
            if nxt == 0:
                if j == m - 1:
                    total += 1 if (size + 1) % 2 == 0 else -1
                continue
            walk(j + 1, nxt, size + 1)

    walk(0, -1, 0)
    return total
