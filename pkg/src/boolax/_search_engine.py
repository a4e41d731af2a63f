"""Compiled core of the model search: DFS plus unit propagation on flat arrays.

The algorithm matches the pure-Python reference in ``models``; this module
only exists so exhaustive searches at sizes 5 and 6 stay fast.  Instances
are straight-line programs over int32 arrays: op sources >= 0 name an
earlier op's register, sources < 0 encode the domain element -(src+1).
Each undecided cell carries a bitmask of still-possible values; an instance
blocked on one cell refutes the values that evaluate to unequal sides, and
a cell whose mask shrinks to one value is forced, to a fixpoint.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _eval(n, rows, ops, start, length, ls, rs, regs, hcell, hv):
    """Evaluate one instance; (lhs, rhs, blocked): -1 values when blocked.

    hcell >= 0 reads hv for that cell when it is undecided (lookahead).
    """
    block = -1
    for k in range(length):
        a = ops[start + k, 0]
        b = ops[start + k, 1]
        av = regs[a] if a >= 0 else -a - 1
        bv = regs[b] if b >= 0 else -b - 1
        if av < 0 or bv < 0:
            regs[k] = -1
            continue
        cell = av * n + bv
        v = rows[cell]
        if v < 0:
            if cell == hcell:
                v = hv
            else:
                if block < 0:
                    block = cell
                regs[k] = -1
                continue
        regs[k] = v
    lv = regs[ls] if ls >= 0 else -ls - 1
    rv = regs[rs] if rs >= 0 else -rs - 1
    return lv, rv, block


@njit(cache=True)
def _propagate(
    n, rows, domains, ops, prog_ofs, prog_len, lsrc, rsrc, regs,
    pend, src_level, dst_level, pend_len,
    trail, trail_len, mtrail_cell, mtrail_old, mtrail_len,
):
    """Fixpoint of checking, domain narrowing, and forcing.

    Returns (ok, trail_len, mtrail_len).  Reads the pending-instance list at
    src_level, leaves the surviving list at dst_level.  Satisfied instances
    are dropped for the whole subtree.
    """
    count = pend_len[src_level]
    src = src_level
    while True:
        out_count = 0
        changed = False
        for idx in range(count):
            inst = pend[src, idx]
            start = prog_ofs[inst]
            length = prog_len[inst]
            ls = lsrc[inst]
            rs = rsrc[inst]
            lv, rv, block = _eval(n, rows, ops, start, length, ls, rs, regs, -1, -1)
            if block < 0:
                if lv != rv:
                    pend_len[dst_level] = 0
                    return False, trail_len, mtrail_len
                continue
            allowed = 0
            for v in range(n):
                lv2, rv2, block2 = _eval(
                    n, rows, ops, start, length, ls, rs, regs, block, v
                )
                if block2 >= 0 or lv2 == rv2:
                    allowed |= 1 << v
            old = domains[block]
            new = old & allowed
            if new == 0:
                pend_len[dst_level] = 0
                return False, trail_len, mtrail_len
            if new != old:
                domains[block] = new
                mtrail_cell[mtrail_len] = block
                mtrail_old[mtrail_len] = old
                mtrail_len += 1
                changed = True
                if new & (new - 1) == 0:
                    # Exactly one value left: force it.
                    value = 0
                    while not (new >> value) & 1:
                        value += 1
                    rows[block] = value
                    trail[trail_len] = block
                    trail_len += 1
            pend[dst_level, out_count] = inst
            out_count += 1
        count = out_count
        src = dst_level
        if not changed:
            break
    pend_len[dst_level] = count
    return True, trail_len, mtrail_len


@njit(cache=True)
def run_search(
    n, ops, prog_ofs, prog_len, lsrc, rsrc, max_ops,
    least_number, out, stop_after,
):
    """Depth-first search; returns the number of full tables found.

    Cells are decided in row-major order with values ascending, so results
    land in ``out`` (up to its capacity) in deterministic order.
    stop_after > 0 stops the search after that many solutions.
    """
    ncells = n * n
    ninst = prog_ofs.shape[0]
    full_mask = (1 << n) - 1
    rows = np.full(ncells, -1, np.int32)
    domains = np.full(ncells, full_mask, np.int64)
    regs = np.empty(max(max_ops, 1), np.int32)
    pend = np.empty((ncells + 2, max(ninst, 1)), np.int32)
    pend_len = np.zeros(ncells + 2, np.int64)
    trail = np.empty(ncells + 1, np.int32)
    # Mask narrowings can outnumber cells within one propagation wave, and
    # waves nest once per depth.
    mcap = (ncells + 1) * ncells * n
    mtrail_cell = np.empty(mcap, np.int32)
    mtrail_old = np.empty(mcap, np.int64)
    dec_cell = np.full(ncells + 1, -1, np.int32)
    dec_val = np.full(ncells + 1, -1, np.int32)
    t_start = np.zeros(ncells + 1, np.int64)
    m_start = np.zeros(ncells + 1, np.int64)
    max_store = out.shape[0]
    found = 0

    for i in range(ninst):
        pend[0, i] = i
    pend_len[0] = ninst
    ok, trail_len, mtrail_len = _propagate(
        n, rows, domains, ops, prog_ofs, prog_len, lsrc, rsrc, regs,
        pend, 0, 1, pend_len, trail, 0, mtrail_cell, mtrail_old, 0,
    )
    if not ok:
        return 0

    d = 0
    entering = True
    while d >= 0:
        if entering:
            t_start[d] = trail_len
            m_start[d] = mtrail_len
            cell = -1
            for c in range(ncells):
                if rows[c] < 0:
                    cell = c
                    break
            dec_cell[d] = cell
            dec_val[d] = -1
            if cell < 0:
                if found < max_store:
                    for c in range(ncells):
                        out[found, c] = rows[c]
                found += 1
                if stop_after > 0 and found >= stop_after:
                    return found
                entering = False
                d -= 1
                continue
        else:
            while trail_len > t_start[d]:
                trail_len -= 1
                rows[trail[trail_len]] = -1
            while mtrail_len > m_start[d]:
                mtrail_len -= 1
                domains[mtrail_cell[mtrail_len]] = mtrail_old[mtrail_len]
        upper = n
        if least_number:
            used = 0
            for c in range(ncells):
                if rows[c] > used:
                    used = rows[c]
            if used + 2 < n:
                upper = used + 2
        v = dec_val[d] + 1
        advanced = False
        while v < upper:
            if not (domains[dec_cell[d]] >> v) & 1:
                v += 1
                continue
            rows[dec_cell[d]] = v
            trail[trail_len] = dec_cell[d]
            trail_len += 1
            ok, trail_len, mtrail_len = _propagate(
                n, rows, domains, ops, prog_ofs, prog_len, lsrc, rsrc, regs,
                pend, d + 1, d + 2, pend_len,
                trail, trail_len, mtrail_cell, mtrail_old, mtrail_len,
            )
            if ok:
                dec_val[d] = v
                d += 1
                entering = True
                advanced = True
                break
            while trail_len > t_start[d]:
                trail_len -= 1
                rows[trail[trail_len]] = -1
            while mtrail_len > m_start[d]:
                mtrail_len -= 1
                domains[mtrail_cell[mtrail_len]] = mtrail_old[mtrail_len]
            v += 1
        if not advanced:
            entering = False
            d -= 1
    return found
