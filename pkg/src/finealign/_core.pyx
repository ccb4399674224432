# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels: suffix tree construction, tree queries and DP.

Every function here has a pure-Python twin in ``_pycore`` with the same
signature and return types; ``_backend`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, int32_t, int64_t
from libcpp.vector cimport vector

cnp.import_array()

DEF ALPHA = 8
DEF SEP1 = 6
DEF NEG = -1000000000


def build_tree(const uint8_t[::1] text):
    """Ukkonen construction over ``text`` (codes 0..7, last code unique).

    Returns ``(start, end, link, child)`` trimmed to the node count. Leaves
    have ``end == len(text)``.
    """
    cdef Py_ssize_t n = text.shape[0]
    cdef Py_ssize_t cap = 2 * n + 2
    start_a = np.zeros(cap, dtype=np.int32)
    end_a = np.zeros(cap, dtype=np.int32)
    link_a = np.zeros(cap, dtype=np.int32)
    child_a = np.full((cap, ALPHA), -1, dtype=np.int32)
    cdef int32_t[::1] start = start_a
    cdef int32_t[::1] end = end_a
    cdef int32_t[::1] link = link_a
    cdef int32_t[:, ::1] child = child_a

    cdef int32_t count = 1
    cdef int32_t active_node = 0, active_edge = 0, active_len = 0
    cdef int32_t remainder = 0, last_new, nxt, leaf, split, elen, e
    cdef int32_t i
    cdef uint8_t c, ae

    for i in range(n):
        c = text[i]
        remainder += 1
        last_new = -1
        while remainder > 0:
            if active_len == 0:
                active_edge = i
            ae = text[active_edge]
            nxt = child[active_node, ae]
            if nxt == -1:
                leaf = count
                count += 1
                start[leaf] = i
                end[leaf] = <int32_t>n
                child[active_node, ae] = leaf
                if last_new != -1:
                    link[last_new] = active_node
                    last_new = -1
            else:
                e = end[nxt] if end[nxt] < i + 1 else i + 1
                elen = e - start[nxt]
                if active_len >= elen:
                    active_edge += elen
                    active_len -= elen
                    active_node = nxt
                    continue
                if text[start[nxt] + active_len] == c:
                    if last_new != -1 and active_node != 0:
                        link[last_new] = active_node
                        last_new = -1
                    active_len += 1
                    break
                split = count
                count += 1
                start[split] = start[nxt]
                end[split] = start[nxt] + active_len
                child[active_node, ae] = split
                leaf = count
                count += 1
                start[leaf] = i
                end[leaf] = <int32_t>n
                child[split, c] = leaf
                start[nxt] += active_len
                child[split, text[start[nxt]]] = nxt
                if last_new != -1:
                    link[last_new] = split
                last_new = split
            remainder -= 1
            if active_node == 0 and active_len > 0:
                active_len -= 1
                active_edge = i - remainder + 1
            elif active_node != 0:
                active_node = link[active_node]

    return (start_a[:count].copy(), end_a[:count].copy(),
            link_a[:count].copy(), child_a[:count].copy())


def annotate_tree(Py_ssize_t n, const int32_t[::1] start, const int32_t[::1] end,
                  const int32_t[:, ::1] child):
    """String depth, DFS leaf ranges and suffix starts for every node."""
    cdef Py_ssize_t nn = start.shape[0]
    depth_a = np.zeros(nn, dtype=np.int32)
    lo_a = np.zeros(nn, dtype=np.int32)
    hi_a = np.zeros(nn, dtype=np.int32)
    suffix_a = np.full(nn, -1, dtype=np.int32)
    order_a = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] depth = depth_a
    cdef int32_t[::1] lo = lo_a
    cdef int32_t[::1] hi = hi_a
    cdef int32_t[::1] suffix = suffix_a
    cdef int32_t[::1] order = order_a
    cdef vector[int32_t] stk_node
    cdef vector[int32_t] stk_ci
    cdef int32_t nleaf = 0, v, k, c
    stk_node.push_back(0)
    stk_ci.push_back(0)
    lo[0] = 0
    while stk_node.size() > 0:
        v = stk_node.back()
        k = stk_ci.back()
        if v != 0 and end[v] == n:
            order[nleaf] = v
            suffix[v] = <int32_t>n - depth[v]
            lo[v] = nleaf
            nleaf += 1
            hi[v] = nleaf
            stk_node.pop_back()
            stk_ci.pop_back()
            continue
        while k < ALPHA and child[v, k] == -1:
            k += 1
        if k < ALPHA:
            stk_ci[stk_ci.size() - 1] = k + 1
            c = child[v, k]
            depth[c] = depth[v] + end[c] - start[c]
            lo[c] = nleaf
            stk_node.push_back(c)
            stk_ci.push_back(0)
        else:
            hi[v] = nleaf
            stk_node.pop_back()
            stk_ci.pop_back()
    return depth_a, lo_a, hi_a, suffix_a, order_a


cdef inline int _leaf_class(const uint8_t[::1] text, int32_t p, int32_t len1):
    cdef int seq = 0 if p < len1 else 1
    cdef int cls
    cdef uint8_t t
    if p == 0 or p == len1 + 1:
        cls = 4
    else:
        t = text[p - 1]
        cls = t if t < 4 else 4
    return seq * 5 + cls


def enumerate_mems(const uint8_t[::1] text, Py_ssize_t len1,
                   const int32_t[::1] end, const int32_t[:, ::1] child,
                   const int32_t[::1] depth, const int32_t[::1] suffix,
                   const int32_t[::1] cnt1, const int32_t[::1] cnt2,
                   int min_len, bint unique):
    """All maximal exact matches between the two halves of the joined text.

    Leaves are bucketed by (sequence, left character) and merged bottom-up,
    so only left-maximal pairs are ever visited.
    """
    cdef Py_ssize_t n = text.shape[0]
    cdef Py_ssize_t nn = end.shape[0]
    cdef int32_t off2 = <int32_t>len1 + 1
    cdef int32_t v, k, c, p, a, b, i, j, nslots = 0
    slot_a = np.full(nn, -1, dtype=np.int32)
    cdef int32_t[::1] slot = slot_a
    # single-sided subtrees below a mixed node still hand their lists up
    for v in range(1, nn):
        if end[v] != n and depth[v] >= min_len:
            slot[v] = nslots
            nslots += 1
    heads_a = np.full((max(nslots, 1), 10), -1, dtype=np.int32)
    tails_a = np.full((max(nslots, 1), 10), -1, dtype=np.int32)
    nxt_a = np.full(n, -1, dtype=np.int32)
    cdef int32_t[:, ::1] heads = heads_a
    cdef int32_t[:, ::1] tails = tails_a
    cdef int32_t[::1] nxt = nxt_a
    cdef int32_t ch[10]
    cdef int32_t ct[10]
    cdef int32_t s, cs
    cdef bint emit
    cdef vector[int32_t] out1, out2, outl
    cdef vector[int32_t] stk_node, stk_ci
    stk_node.push_back(0)
    stk_ci.push_back(0)
    while stk_node.size() > 0:
        v = stk_node.back()
        k = stk_ci.back()
        while k < ALPHA and (child[v, k] == -1 or end[child[v, k]] == n):
            k += 1
        if k < ALPHA:
            stk_ci[stk_ci.size() - 1] = k + 1
            stk_node.push_back(child[v, k])
            stk_ci.push_back(0)
            continue
        stk_node.pop_back()
        stk_ci.pop_back()
        if v == 0 or depth[v] < min_len:
            continue
        s = slot[v]
        emit = cnt1[v] > 0 and cnt2[v] > 0
        if unique and not (cnt1[v] == 1 and cnt2[v] == 1):
            emit = False
        for k in range(ALPHA):
            c = child[v, k]
            if c == -1:
                continue
            for i in range(10):
                ch[i] = -1
                ct[i] = -1
            if end[c] == n:
                p = suffix[c]
                if p < len1 or (p > len1 and p < n - 1):
                    i = _leaf_class(text, p, <int32_t>len1)
                    ch[i] = p
                    ct[i] = p
                    nxt[p] = -1
                else:
                    continue
            else:
                cs = slot[c]
                for i in range(10):
                    ch[i] = heads[cs, i]
                    ct[i] = tails[cs, i]
            if emit:
                for i in range(5):
                    for j in range(5):
                        if i == j and i != 4:
                            continue
                        # an empty partner list means nothing to pair with
                        a = heads[s, i] if ch[5 + j] != -1 else -1
                        while a != -1:
                            b = ch[5 + j]
                            while b != -1:
                                out1.push_back(a)
                                out2.push_back(b - off2)
                                outl.push_back(depth[v])
                                b = nxt[b]
                            a = nxt[a]
                        a = ch[i] if heads[s, 5 + j] != -1 else -1
                        while a != -1:
                            b = heads[s, 5 + j]
                            while b != -1:
                                out1.push_back(a)
                                out2.push_back(b - off2)
                                outl.push_back(depth[v])
                                b = nxt[b]
                            a = nxt[a]
            for i in range(10):
                if ch[i] == -1:
                    continue
                if heads[s, i] == -1:
                    heads[s, i] = ch[i]
                else:
                    nxt[tails[s, i]] = ch[i]
                tails[s, i] = ct[i]

    cdef Py_ssize_t m = out1.size()
    r1 = np.empty(m, dtype=np.int64)
    r2 = np.empty(m, dtype=np.int64)
    rl = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] w1 = r1
    cdef int64_t[::1] w2 = r2
    cdef int64_t[::1] wl = rl
    cdef Py_ssize_t q
    for q in range(m):
        w1[q] = out1[q]
        w2[q] = out2[q]
        wl[q] = outl[q]
    return r1, r2, rl


def descend(const uint8_t[::1] text, const int32_t[::1] start,
            const int32_t[::1] end, const int32_t[:, ::1] child,
            const int32_t[::1] lo, const int32_t[::1] hi,
            const int32_t[::1] order, const int32_t[::1] suffix,
            const uint8_t[::1] queries, int qlen, int budget):
    """Bounded-mismatch descent for a batch of equal-length queries.

    ``queries`` holds the queries back to back. Returns arrays
    ``(query_index, text_position, mismatches)``.
    """
    cdef Py_ssize_t nq = queries.shape[0] // qlen if qlen > 0 else 0
    cdef vector[int32_t] oq, op, om
    cdef vector[int32_t] sn, sk, su
    cdef Py_ssize_t q, qoff
    cdef int32_t v, k, u, c, code, kk, uu, s, e, r
    cdef uint8_t t
    cdef bint ok
    with nogil:
        for q in range(nq):
            qoff = q * qlen
            sn.push_back(0)
            sk.push_back(0)
            su.push_back(0)
            while sn.size() > 0:
                v = sn.back()
                k = sk.back()
                u = su.back()
                sn.pop_back()
                sk.pop_back()
                su.pop_back()
                for code in range(ALPHA):
                    c = child[v, code]
                    if c == -1:
                        continue
                    s = start[c]
                    e = end[c]
                    kk = k
                    uu = u
                    ok = True
                    while kk < qlen and s < e:
                        t = text[s]
                        if t >= SEP1:
                            ok = False
                            break
                        if t >= 4 or t != queries[qoff + kk]:
                            uu += 1
                            if uu > budget:
                                ok = False
                                break
                        kk += 1
                        s += 1
                    if not ok:
                        continue
                    if kk == qlen:
                        for r in range(lo[c], hi[c]):
                            oq.push_back(<int32_t>q)
                            op.push_back(suffix[order[r]])
                            om.push_back(uu)
                    else:
                        sn.push_back(c)
                        sk.push_back(kk)
                        su.push_back(uu)
    cdef Py_ssize_t m = oq.size()
    rq = np.empty(m, dtype=np.int64)
    rp = np.empty(m, dtype=np.int64)
    rm = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] wq = rq
    cdef int64_t[::1] wp = rp
    cdef int64_t[::1] wm = rm
    for q in range(m):
        wq[q] = oq[q]
        wp[q] = op[q]
        wm[q] = om[q]
    return rq, rp, rm


def xdrop_extend(const uint8_t[::1] a, const uint8_t[::1] b,
                 Py_ssize_t i, Py_ssize_t j, int direction, Py_ssize_t limit,
                 int x_drop, int match, int mismatch):
    """Ungapped X-drop walk from (i, j); returns the best extension length.

    Rightwards compares a[i+t], b[j+t]; leftwards a[i-1-t], b[j-1-t].
    """
    cdef Py_ssize_t t, best_t = 0
    cdef int64_t score = 0, best = 0
    cdef uint8_t x, y
    for t in range(limit):
        if direction > 0:
            x = a[i + t]
            y = b[j + t]
        else:
            x = a[i - 1 - t]
            y = b[j - 1 - t]
        if x == y and x < 4:
            score += match
        else:
            score += mismatch
        if score > best:
            best = score
            best_t = t + 1
        elif best - score >= x_drop:
            break
    return best_t


def global_affine(const uint8_t[::1] a, const uint8_t[::1] b, Py_ssize_t w,
                  int match, int mismatch, int gap_open, int gap_extend):
    """Banded global alignment with three states (pair, gap in a, gap in b).

    Cells with |j - i| > w are excluded. A gap run of length L always costs
    gap_open + (L - 1) * gap_extend; a new run may only open from a
    different state. Returns ``(score, ops)`` with ops 0=match, 1=mismatch,
    2=residue of ``a`` only, 3=residue of ``b`` only, in forward order.
    """
    cdef Py_ssize_t m = a.shape[0], n = b.shape[0]
    cdef Py_ssize_t width = 2 * w + 1
    M_a = np.full((m + 1, width), NEG, dtype=np.int32)
    E_a = np.full((m + 1, width), NEG, dtype=np.int32)
    F_a = np.full((m + 1, width), NEG, dtype=np.int32)
    tb_a = np.zeros((m + 1, width), dtype=np.uint8)
    cdef int32_t[:, ::1] M = M_a
    cdef int32_t[:, ::1] E = E_a
    cdef int32_t[:, ::1] F = F_a
    cdef uint8_t[:, ::1] tb = tb_a
    cdef Py_ssize_t i, j, col, jlo, jhi
    cdef int32_t best, x, y, z
    cdef uint8_t bits
    # tb layout: bits 0-1 origin of M, 2-3 origin of E, 4-5 origin of F
    # (0 = M, 1 = E, 2 = F)
    M[0, w] = 0
    for i in range(m + 1):
        jlo = i - w if i - w > 0 else 0
        jhi = i + w if i + w < n else n
        for j in range(jlo, jhi + 1):
            if i == 0 and j == 0:
                continue
            col = j - i + w
            bits = 0
            if i > 0 and j > 0:
                x = M[i - 1, col]
                y = E[i - 1, col]
                z = F[i - 1, col]
                best = x
                if z > best:
                    best = z
                    bits = 2
                if y > best:
                    best = y
                    bits = 1
                if best > NEG:
                    if a[i - 1] == b[j - 1] and a[i - 1] < 4:
                        M[i, col] = best + match
                    else:
                        M[i, col] = best + mismatch
            if j > 0 and col >= 1:
                x = M[i, col - 1]
                z = F[i, col - 1]
                y = E[i, col - 1]
                if z > x:
                    x = z
                    best = 2
                else:
                    best = 0
                x = x + gap_open if x > NEG else NEG
                y = y + gap_extend if y > NEG else NEG
                if y > x:
                    E[i, col] = y
                    bits |= 1 << 2
                else:
                    E[i, col] = x
                    bits |= best << 2
            if i > 0 and col + 1 < width:
                x = M[i - 1, col + 1]
                y = E[i - 1, col + 1]
                z = F[i - 1, col + 1]
                if y > x:
                    x = y
                    best = 1
                else:
                    best = 0
                x = x + gap_open if x > NEG else NEG
                z = z + gap_extend if z > NEG else NEG
                if z > x:
                    F[i, col] = z
                    bits |= 2 << 4
                else:
                    F[i, col] = x
                    bits |= best << 4
            tb[i, col] = bits

    col = n - m + w
    cdef int state = 0
    best = M[m, col]
    if F[m, col] > best:
        best = F[m, col]
        state = 2
    if E[m, col] > best:
        best = E[m, col]
        state = 1
    if m == 0 and n == 0:
        best = 0
    ops = []
    i = m
    j = n
    while i > 0 or j > 0:
        col = j - i + w
        bits = tb[i, col]
        if state == 0:
            ops.append(0 if (a[i - 1] == b[j - 1] and a[i - 1] < 4) else 1)
            state = bits & 3
            i -= 1
            j -= 1
        elif state == 1:
            ops.append(3)
            state = (bits >> 2) & 3
            j -= 1
        else:
            ops.append(2)
            state = (bits >> 4) & 3
            i -= 1
    ops.reverse()
    return int(best), np.asarray(ops, dtype=np.uint8)
