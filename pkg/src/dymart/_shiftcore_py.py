"""Pure-Python kernels for sums/maxima of product-form betting strategies.

A *product-form* strategy assigns to a word ``w`` the value

    d(w) = prod_i factor(state_i, class(i), w[i])

where the factors are nonnegative dyadics ``num / 2**dexp``, the state
machine starts in ``start`` and steps along the bits, and ``class(i)`` is a
per-position tag (pattern phase, insertion-set membership, ...).  The
normalization d(empty) = 1 is the kernel's convention.

Descriptor layout (plain tuples so the compiled twin can unpack cheaply)::

    desc = (n_states, start, edges, max_num, max_dexp)
    edges[state][cls][bit] = (num, dexp, next_state)

The fairness condition -- the two child factors of every (state, class)
average to one -- is what makes block sums collapsible; ``validate``
checks it exactly and ``subtree_sum`` relies on it.

All arithmetic is exact integer arithmetic.  The compiled twin in
``_shiftcore.pyx`` implements ``cell_value`` and ``range_sum_max`` with the
same signatures and bit-identical results (within its overflow guard).
"""


def validate(desc):
    """Check the exact fairness identity f0 + f1 == 2 per (state, class)."""
    _, _, edges, _, _ = desc
    for state, per_state in enumerate(edges):
        for cls, ((n0, d0, _), (n1, d1, _)) in enumerate(per_state):
            if n0 < 0 or n1 < 0:
                raise ValueError(f"negative factor at state {state} "
                                 f"class {cls}")
            if (n0 << (d1 + 1)) + (n1 << (d0 + 1)) != 1 << (d0 + d1 + 2):
                raise ValueError(f"factors at state {state} class {cls} "
                                 "do not average to one")
    return True


def cell_value(desc, classes, n, k):
    """d(word) for the depth-n cell with index k, as a (num, dexp) pair."""
    _, state, edges, _, _ = desc
    num, dexp = 1, 0
    for i in range(n):
        bit = (k >> (n - 1 - i)) & 1
        fnum, fdexp, state = edges[state][classes[i]][bit]
        num *= fnum
        dexp += fdexp
        if num == 0:
            return 0, 0
    return num, dexp


def range_sum_max(desc, classes, n, a, b, want_max=True):
    """Literal cell-by-cell scan over k in [a, b) at depth n.

    Returns (sum_num, sum_dexp, max_num, max_dexp).  The scan walks the
    cells in order, reusing the unchanged prefix of the previous path, so
    the total work is O(b - a) factor steps.
    """
    if a >= b:
        return 0, 0, 0, 0
    _, start, edges, _, _ = desc
    states = [start] * (n + 1)
    nums = [1] * (n + 1)
    dexps = [0] * (n + 1)

    def descend(frm, k):
        for i in range(frm, n):
            bit = (k >> (n - 1 - i)) & 1
            fnum, fdexp, nxt = edges[states[i]][classes[i]][bit]
            nums[i + 1] = nums[i] * fnum
            dexps[i + 1] = dexps[i] + fdexp
            states[i + 1] = nxt

    descend(0, a)
    s_num, s_dexp = 0, 0
    m_num, m_dexp = 0, 0
    k = a
    while True:
        p_num, p_dexp = nums[n], dexps[n]
        if p_num:
            if s_dexp < p_dexp:
                s_num <<= p_dexp - s_dexp
                s_dexp = p_dexp
            s_num += p_num << (s_dexp - p_dexp)
            if want_max and (p_num << m_dexp) > (m_num << p_dexp):
                m_num, m_dexp = p_num, p_dexp
        k += 1
        if k >= b:
            break
        descend(n - ((k ^ (k - 1)).bit_length()), k)
    return s_num, s_dexp, m_num, m_dexp


def subtree_sum(desc, classes, n, a, b):
    """Sum of d over cells [a, b) at depth n via aligned-block collapse.

    Splits [a, b) into O(n) maximal aligned blocks; a block of 2**lev cells
    below the word w contributes 2**lev * d(w) by the fairness identity.
    Exact for any depth, however large.
    """
    if a >= b:
        return 0, 0
    blocks = []
    lo, hi, lev = a, b, 0
    while lo < hi:
        if lo & 1:
            blocks.append((lev, lo))
            lo += 1
        if hi & 1:
            hi -= 1
            blocks.append((lev, hi))
        lo >>= 1
        hi >>= 1
        lev += 1
    s_num, s_dexp = 0, 0
    for lev, idx in blocks:
        num, dexp = cell_value(desc, classes, n - lev, idx)
        if not num:
            continue
        num <<= lev
        if s_dexp < dexp:
            s_num <<= dexp - s_dexp
            s_dexp = dexp
        s_num += num << (s_dexp - dexp)
    return s_num, s_dexp
