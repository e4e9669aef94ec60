"""Compiled strictly-local colourer over flat edge arrays.

Makes the same choices as :func:`vizchain.strict_local.colour_graph` (smallest
eligible colour everywhere, edges in index order, fan centred at the first
endpoint), so both produce identical colourings.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# stats slots
CHAINS, CUTS, FAN_RISE, CUT_NO_DROP, AUG_RISE, PHI_OOB, PHI_INITIAL, PHI_FINAL, PHI_MAX, SHIFT_ERR = range(10)
NSTATS = 10


@njit(cache=True)
def _pot(at, deg, v):
    c = 0
    for k in range(1, deg[v] + 2):
        if at[v, k] < 0:
            c += 1
    return c


@njit(cache=True)
def _set(at, col, eu, ev, e, k):
    old = col[e]
    if old > 0:
        at[eu[e], old] = -1
        at[ev[e], old] = -1
    if k > 0:
        at[eu[e], k] = e
        at[ev[e], k] = e
    col[e] = k


@njit(cache=True)
def _shift(at, col, eu, ev, chain, start, stop):
    # pairs (chain[i], chain[i+1]) for start <= i < stop-1; returns False on an illegal pair
    for i in range(start, stop - 1):
        e1 = chain[i]
        e2 = chain[i + 1]
        if col[e1] != 0 or col[e2] == 0:
            return False
        k = col[e2]
        _set(at, col, eu, ev, e2, 0)
        if at[eu[e1], k] >= 0 or at[ev[e1], k] >= 0:
            return False
        _set(at, col, eu, ev, e1, k)
    return True


@njit(cache=True)
def _touched_phi(at, deg, eu, ev, chain, clen, mark, stamp):
    s = 0
    for i in range(clen):
        e = chain[i]
        for x in (eu[e], ev[e]):
            if mark[x] != stamp:
                mark[x] = stamp
                s += _pot(at, deg, x)
    return s


@njit(cache=True)
def strict_local_colour(n, eu, ev, check_potential):
    m = eu.shape[0]
    deg = np.zeros(n, np.int64)
    for e in range(m):
        deg[eu[e]] += 1
        deg[ev[e]] += 1
    maxdeg = 0
    for v in range(n):
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    C = maxdeg + 2
    at = np.full((n, C + 1), -1, np.int64)
    col = np.zeros(m, np.int64)
    stats = np.zeros(NSTATS, np.int64)

    leaves = np.empty(maxdeg + 2, np.int64)
    fedges = np.empty(maxdeg + 2, np.int64)
    reps = np.empty(maxdeg + 2, np.int64)
    fan_idx = np.full(C + 1, -1, np.int64)
    pedges = np.empty(n + 1, np.int64)
    pverts = np.empty(n + 2, np.int64)
    chain = np.empty(n + maxdeg + 4, np.int64)
    mark = np.zeros(n, np.int64)
    stamp = 0

    phi = 0
    for v in range(n):
        phi += _pot(at, deg, v)
    bound = n * (maxdeg + 1)
    stats[PHI_INITIAL] = phi
    stats[PHI_MAX] = phi
    if phi > bound:
        stats[PHI_OOB] += 1

    for e0 in range(m):
        e = e0
        u = eu[e]
        while True:
            stats[CHAINS] += 1
            v = eu[e] + ev[e] - u
            # fan
            k = 1
            leaves[0] = v
            fedges[0] = e
            nrep = 0
            end = 0  # 1 shared, 2 repeated
            repeat = -1
            w = v
            while True:
                dw = deg[w] + 1
                pick = 0
                for c in range(1, dw + 1):
                    if at[w, c] < 0 and at[u, c] < 0:
                        pick = c
                        break
                if pick > 0:
                    reps[nrep] = pick
                    nrep += 1
                    end = 1
                    break
                for c in range(1, dw + 1):
                    if at[w, c] < 0 and fan_idx[c] >= 0:
                        pick = c
                        break
                if pick > 0:
                    reps[nrep] = pick
                    nrep += 1
                    end = 2
                    repeat = fan_idx[pick] - 1
                    break
                for c in range(1, dw + 1):
                    if at[w, c] < 0:
                        pick = c
                        break
                if pick == 0:
                    stats[SHIFT_ERR] += 1
                    return col, stats
                ux = at[u, pick]
                x = eu[ux] + ev[ux] - u
                reps[nrep] = pick
                nrep += 1
                leaves[k] = x
                fedges[k] = ux
                fan_idx[pick] = k
                k += 1
                w = x
            for i in range(1, k):
                fan_idx[col[fedges[i]]] = -1

            status = 0  # 0 augmenting, 1 cut
            final = 0
            fan_size = k
            clen = 0
            end_vertex = -1
            if end == 1:
                for i in range(k):
                    chain[i] = fedges[i]
                clen = k
                final = reps[nrep - 1]
            else:
                k2 = reps[nrep - 1]
                k1 = 0
                for c in range(1, deg[u] + 2):
                    if at[u, c] < 0:
                        k1 = c
                        break
                wk = leaves[k - 1]
                # walk, stopping at the first strictness violation
                plen = 0
                pverts[0] = wk
                x = wk
                if at[wk, k1] >= 0:
                    nxt = k1
                elif at[wk, k2] >= 0:
                    nxt = k2
                else:
                    nxt = 0
                viol = -1
                while nxt > 0:
                    pe = at[x, nxt]
                    if pe < 0:
                        break
                    y = eu[pe] + ev[pe] - x
                    pedges[plen] = pe
                    plen += 1
                    pverts[plen] = y
                    newc = k1 + k2 - nxt
                    dmax = deg[x] if deg[x] > deg[y] else deg[y]
                    if newc > dmax + 1:
                        viol = plen - 1
                        break
                    x = y
                    nxt = k1 + k2 - nxt
                if viol >= 0:
                    for i in range(k):
                        chain[i] = fedges[i]
                    for i in range(viol + 1):
                        chain[k + i] = pedges[i]
                    clen = k + viol + 1
                    status = 1
                    end_vertex = pverts[viol]
                else:
                    zend = pverts[plen]
                    if plen > 0 and zend == u:
                        ii = repeat + 1
                        for i in range(ii + 1):
                            chain[i] = fedges[i]
                        clen = ii + 1
                        for i in range(plen - 2, -1, -1):
                            chain[clen] = pedges[i]
                            clen += 1
                        final = k2
                        fan_size = ii + 1
                    elif plen > 0 and zend == leaves[repeat]:
                        ii = repeat + 1
                        for i in range(ii):
                            chain[i] = fedges[i]
                        clen = ii
                        for i in range(plen - 1, -1, -1):
                            chain[clen] = pedges[i]
                            clen += 1
                        final = k2
                        fan_size = ii
                    else:
                        for i in range(k):
                            chain[i] = fedges[i]
                        for i in range(plen):
                            chain[k + i] = pedges[i]
                        clen = k + plen
                        if plen == 0:
                            final = k1
                        else:
                            final = k1 + k2 - col[pedges[plen - 1]]

            before = 0
            if check_potential:
                stamp += 1
                before = _touched_phi(at, deg, eu, ev, chain, clen, mark, stamp)
            if not _shift(at, col, eu, ev, chain, 0, fan_size):
                stats[SHIFT_ERR] += 1
                return col, stats
            if check_potential:
                stamp += 1
                if _touched_phi(at, deg, eu, ev, chain, clen, mark, stamp) > before:
                    stats[FAN_RISE] += 1
            if not _shift(at, col, eu, ev, chain, fan_size - 1, clen):
                stats[SHIFT_ERR] += 1
                return col, stats
            last = chain[clen - 1]
            if status == 0:
                if at[eu[last], final] >= 0 or at[ev[last], final] >= 0:
                    stats[SHIFT_ERR] += 1
                    return col, stats
                _set(at, col, eu, ev, last, final)
            if check_potential:
                stamp += 1
                after = _touched_phi(at, deg, eu, ev, chain, clen, mark, stamp)
                drop = before - after
                if status == 1 and drop < 1:
                    stats[CUT_NO_DROP] += 1
                if status == 0 and drop < 0:
                    stats[AUG_RISE] += 1
                phi -= drop
                if phi > stats[PHI_MAX]:
                    stats[PHI_MAX] = phi
                if phi < 0 or phi > bound:
                    stats[PHI_OOB] += 1
            if status == 0:
                break
            stats[CUTS] += 1
            e = last
            u = end_vertex
    stats[PHI_FINAL] = phi
    return col, stats
