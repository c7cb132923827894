"""Pure-Python versions of the hot loops in ``_kernels.pyx``.

Same signatures and same results as the compiled module; used when the
extension is not built (or ``MESP_PURE_PYTHON=1``), and for keys too wide
for int64.
"""


def advance_stage(keys, options, counts, base, T, max_count):
    """One stage of the reachability table.

    ``keys`` are the sorted encoded states of the previous stage.  A state
    encodes ``(L_1, ..., L_m, count)`` as ``sum L_j base**(j-1) + count *
    base**m``.  Each option adds its vector with saturation at ``T + 1`` and
    its count increment; states with ``count > max_count`` are dropped
    (``max_count < 0`` disables the check).

    Returns ``(new_keys, parent, choice)``: sorted unique keys, and for each
    the first ``(parent index, option index)`` pair producing it.
    """
    ndims = len(options[0])
    sat = T + 1
    stride = base ** ndims
    seen = {}
    for p, key in enumerate(keys):
        comps = []
        rest = key
        for _ in range(ndims):
            rest, c = divmod(rest, base)
            comps.append(c)
        for o, vec in enumerate(options):
            cnt = rest + counts[o]
            if 0 <= max_count < cnt:
                continue
            new = cnt * stride
            mul = 1
            for a, b in zip(comps, vec):
                s = a + b
                new += (s if s < sat else sat) * mul
                mul *= base
            if new not in seen:
                seen[new] = (p, o)
    out = sorted(seen)
    return out, [seen[k][0] for k in out], [seen[k][1] for k in out]


def min_index_counts(raw, thresholds, d):
    """Histogram of the grid index of ``min`` over the selected variables.

    ``raw[t][v]`` is a 64-bit draw for trial t and variable v; its top 53
    bits give ``U``.  Variable v lands at or above ``l_j`` iff
    ``U < thresholds[v][j-1]``.
    """
    counts = [0] * d
    top = d - 1
    for row in raw:
        m = top
        for u, th in zip(row, thresholds):
            u >>= 11
            j = 0
            while j < m and u < th[j]:
                j += 1
            if j < m:
                m = j
                if m == 0:
                    break
        counts[m] += 1
    return counts
