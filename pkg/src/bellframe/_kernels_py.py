"""Pure-Python versions of the bitmask kernels.

Events are integer bitmasks over the history ordering and measures are
integer weights over a common denominator, so every kernel below works in
exact integer arithmetic.  ``_kernels.pyx`` mirrors these signatures.
"""


def mask_weight(weights, mask):
    total = 0
    while mask:
        low = mask & -mask
        total += weights[low.bit_length() - 1]
        mask ^= low
    return total


def refine(nbits, masks):
    """Atoms of the algebra generated by ``masks`` over ``nbits`` histories.

    Histories share an atom iff they agree on membership in every mask.
    Atoms come out ordered by their lowest member.
    """
    blocks = {}
    for i in range(nbits):
        key = 0
        for j, m in enumerate(masks):
            if (m >> i) & 1:
                key |= 1 << j
        blocks[key] = blocks.get(key, 0) | (1 << i)
    return tuple(blocks.values())


def screen(weights, conds, lefts, rights):
    """Find every triple where ``left`` and ``right`` are dependent given ``cond``.

    Returns ``(violations, nulls)``.  Each violation is
    ``(ci, li, ri, w_joint, w_left, w_right, w_cond)`` with all weights
    restricted to the conditioning event; independence means
    ``w_joint * w_cond == w_left * w_right``.  Null conditioning events are
    skipped and counted.
    """
    violations = []
    nulls = 0
    for ci, c in enumerate(conds):
        wc = mask_weight(weights, c)
        if wc == 0:
            nulls += 1
            continue
        lw = [mask_weight(weights, left & c) for left in lefts]
        rw = [mask_weight(weights, right & c) for right in rights]
        for li, left in enumerate(lefts):
            lc = left & c
            for ri, right in enumerate(rights):
                joint = mask_weight(weights, lc & right)
                if joint * wc != lw[li] * rw[ri]:
                    violations.append((ci, li, ri, joint, lw[li], rw[ri], wc))
    return violations, nulls
