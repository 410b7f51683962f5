"""Compiled depth-first traversal.

The traversal state is a stack of child cursors ``nxt``: ``nxt[j]`` is the
index of the next child to try below the node at depth ``j``, so the node at
depth ``d`` was reached through children ``nxt[0]-1, ..., nxt[d-1]-1``.
Depths are relative to the seed. Coloring and cover elements are bit masks
over the color/set ids (bit ``q`` is id ``q+1``); sequence elements are gaps.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..filters import K_ADDITIVE_POWER, K_MAX_CLASS_GAPS, K_MONO_AP, K_MONO_DOUBLE_AP, K_RAINBOW_AP

STATUS_COMPLETE = 0
STATUS_PAUSED = 1


# _push/_pop rebuild the state for a seed or cursor; the hot loop has them inlined


@njit(cache=True)
def _push(is_seq, need_cls, v, L, P, masks, cls, clen, t):
    L += 1
    if is_seq:
        P[L] = P[L - 1] + v
    else:
        masks[L] = v
        if not need_cls:
            return L
        for q in range(t):
            if (v >> q) & 1:
                cls[q, clen[q]] = L
                clen[q] += 1
    return L


@njit(cache=True)
def _pop(is_seq, need_cls, L, masks, clen, t):
    if need_cls:
        v = masks[L]
        for q in range(t):
            if (v >> q) & 1:
                clen[q] -= 1
    return L - 1


@njit(cache=True, inline="always")
def _seq_ok(codes, kparams, P, L):
    top = P[L]
    for f in range(codes.shape[0]):
        if codes[f] == K_ADDITIVE_POWER:
            p = kparams[f]
            for b in range(1, L // p + 1):
                s = top - P[L - b]
                j = 1
                while j < p and P[L - j * b] - P[L - (j + 1) * b] == s:
                    j += 1
                if j == p:
                    return False
    return True


# k-specialised variants of the hot checks; the generic loops are markedly
# slower for the common k


@njit(cache=True)
def _mono_ap3_ok(m, masks, pos):
    for s in range(1, (pos - 1) // 2 + 1):
        if m & masks[pos - s] & masks[pos - 2 * s]:
            return False
    return True


@njit(cache=True)
def _mono_ap_ok(m, masks, pos, k):
    for s in range(1, (pos - 1) // (k - 1) + 1):
        common = m
        for j in range(1, k):
            common &= masks[pos - j * s]
        if common:
            return False
    return True


@njit(cache=True)
def _rainbow_ap4_ok(m, masks, pos):
    for s in range(1, (pos - 1) // 3 + 1):
        a = masks[pos - s]
        b = masks[pos - 2 * s]
        c = masks[pos - 3 * s]
        if not (m & a or m & b or a & b) and not (c & (m | a | b)):
            return False
    return True


@njit(cache=True)
def _rainbow_ap_ok(m, masks, pos, k):
    for s in range(1, (pos - 1) // (k - 1) + 1):
        seen = m
        j = 1
        while j < k and not (seen & masks[pos - j * s]):
            seen |= masks[pos - j * s]
            j += 1
        if j == k:
            return False
    return True


@njit(cache=True)
def _mono_double_ap_ok(m, cls, clen, t, k):
    ok = True
    for q in range(t):
        if not (m >> q) & 1:
            continue
        n = clen[q] - 1
        top = cls[q, n]
        for d in range(1, n // (k - 1) + 1):
            diff = top - cls[q, n - d]
            j = 2
            while j < k and cls[q, n - (j - 1) * d] - cls[q, n - j * d] == diff:
                j += 1
            if j == k:
                ok = False
                break
        if not ok:
            break
    return ok


@njit(cache=True)
def _class_gaps_ok(m, gapb, cls, clen, pos, t):
    ok = True
    for q in range(t):
        if (m >> q) & 1 and gapb[q] > 0 and clen[q] >= 2:
            if pos - cls[q, clen[q] - 2] > gapb[q]:
                ok = False
                break
    return ok


@njit(cache=True)
def traverse(is_seq, children, codes, kparams, gapb, t, seed, max_depth, max_iter,
             iterations, nxt, base, dcur, gen, pas, best_path, best_depth,
             collect_depth, collected):
    """Run the traversal from cursor depth ``dcur`` until the subtree at ``base`` is done.

    Counters ``gen``/``pas``/``best_*``/``nxt`` are updated in place. Returns
    ``(status, iterations, depth, n_collected)``; on ``STATUS_PAUSED`` the
    cursor ``nxt[base..depth]`` resumes exactly at the next node.
    """
    nseed = seed.shape[0]
    cap = nseed + max_depth + 2
    tt = max(t, 1)
    P = np.zeros(cap, np.int64)
    masks = np.zeros(cap, np.int64)
    cls = np.zeros((tt, cap), np.int64)
    clen = np.zeros(tt, np.int64)
    need_cls = False
    if not is_seq:
        for f in range(codes.shape[0]):
            if codes[f] == K_MONO_DOUBLE_AP or codes[f] == K_MAX_CLASS_GAPS:
                need_cls = True
    L = 0
    for i in range(nseed):
        L = _push(is_seq, need_cls, seed[i], L, P, masks, cls, clen, t)
    for j in range(dcur):
        L = _push(is_seq, need_cls, children[nxt[j] - 1], L, P, masks, cls, clen, t)

    nchild = children.shape[0]
    ncodes = codes.shape[0]
    ncollect = 0
    status = STATUS_COMPLETE
    bd = best_depth[0]
    d = dcur
    while True:
        if d >= max_depth or nxt[d] >= nchild:
            if d <= base:
                break
            if need_cls:
                v = masks[L]
                for q in range(t):
                    if (v >> q) & 1:
                        clen[q] -= 1
            L -= 1
            d -= 1
            continue
        if iterations >= max_iter:
            status = STATUS_PAUSED
            break
        ci = nxt[d]
        nxt[d] = ci + 1
        # push/pop are written out here: as helper calls they dominate the loop
        v = children[ci]
        L += 1
        if is_seq:
            P[L] = P[L - 1] + v
        else:
            masks[L] = v
            if need_cls:
                for q in range(t):
                    if (v >> q) & 1:
                        cls[q, clen[q]] = L
                        clen[q] += 1
        iterations += 1
        gen[d + 1] += 1
        if is_seq:
            ok = _seq_ok(codes, kparams, P, L)
        else:
            # dispatch stays inline: behind a call it runs ~3x slower
            m = children[ci]
            ok = True
            for f in range(ncodes):
                code = codes[f]
                k = kparams[f]
                if code == K_MONO_AP:
                    if k == 3:
                        ok = _mono_ap3_ok(m, masks, L)
                    else:
                        ok = _mono_ap_ok(m, masks, L, k)
                elif code == K_RAINBOW_AP:
                    if k == 4:
                        ok = _rainbow_ap4_ok(m, masks, L)
                    else:
                        ok = _rainbow_ap_ok(m, masks, L, k)
                elif code == K_MONO_DOUBLE_AP:
                    ok = _mono_double_ap_ok(m, cls, clen, t, k)
                elif code == K_MAX_CLASS_GAPS:
                    ok = _class_gaps_ok(m, gapb, cls, clen, L, t)
                if not ok:
                    break
        if ok:
            d += 1
            pas[d] += 1
            nxt[d] = 0
            if d > bd:
                bd = d
                for j in range(d):
                    best_path[j] = nxt[j] - 1
            if d == collect_depth:
                if ncollect < collected.shape[0]:
                    for j in range(d):
                        collected[ncollect, j] = nxt[j] - 1
                ncollect += 1
        else:
            if need_cls:
                v = masks[L]
                for q in range(t):
                    if (v >> q) & 1:
                        clen[q] -= 1
            L -= 1
    best_depth[0] = bd
    return status, iterations, d, ncollect
