"""Pure-Python kernels, line-for-line twins of the compiled ``_core``.

Slow but dependency-free apart from numpy; used when the extension is not
built or when ``FINEALIGN_PURE=1`` is set.
"""

import numpy as np

ALPHA = 8
SEP1 = 6
NEG = -1000000000


def build_tree(text):
    text = text.tolist()
    n = len(text)
    cap = 2 * n + 2
    start = [0] * cap
    end = [0] * cap
    link = [0] * cap
    child = [-1] * (cap * ALPHA)

    count = 1
    active_node = active_edge = active_len = 0
    remainder = 0
    for i in range(n):
        c = text[i]
        remainder += 1
        last_new = -1
        while remainder > 0:
            if active_len == 0:
                active_edge = i
            ae = text[active_edge]
            nxt = child[active_node * ALPHA + ae]
            if nxt == -1:
                leaf = count
                count += 1
                start[leaf] = i
                end[leaf] = n
                child[active_node * ALPHA + ae] = leaf
                if last_new != -1:
                    link[last_new] = active_node
                    last_new = -1
            else:
                elen = min(end[nxt], i + 1) - start[nxt]
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
                child[active_node * ALPHA + ae] = split
                leaf = count
                count += 1
                start[leaf] = i
                end[leaf] = n
                child[split * ALPHA + c] = leaf
                start[nxt] += active_len
                child[split * ALPHA + text[start[nxt]]] = nxt
                if last_new != -1:
                    link[last_new] = split
                last_new = split
            remainder -= 1
            if active_node == 0 and active_len > 0:
                active_len -= 1
                active_edge = i - remainder + 1
            elif active_node != 0:
                active_node = link[active_node]

    i32 = np.int32
    return (np.array(start[:count], dtype=i32), np.array(end[:count], dtype=i32),
            np.array(link[:count], dtype=i32),
            np.array(child[:count * ALPHA], dtype=i32).reshape(count, ALPHA))


def annotate_tree(n, start, end, child):
    nn = len(start)
    start = start.tolist()
    end = end.tolist()
    child = child.tolist()
    depth = [0] * nn
    lo = [0] * nn
    hi = [0] * nn
    suffix = [-1] * nn
    order = [0] * n
    nleaf = 0
    stack = [[0, 0]]
    while stack:
        frame = stack[-1]
        v, k = frame
        if v != 0 and end[v] == n:
            order[nleaf] = v
            suffix[v] = n - depth[v]
            lo[v] = nleaf
            nleaf += 1
            hi[v] = nleaf
            stack.pop()
            continue
        row = child[v]
        while k < ALPHA and row[k] == -1:
            k += 1
        if k < ALPHA:
            frame[1] = k + 1
            c = row[k]
            depth[c] = depth[v] + end[c] - start[c]
            lo[c] = nleaf
            stack.append([c, 0])
        else:
            hi[v] = nleaf
            stack.pop()
    i32 = np.int32
    return (np.array(depth, dtype=i32), np.array(lo, dtype=i32),
            np.array(hi, dtype=i32), np.array(suffix, dtype=i32),
            np.array(order, dtype=i32))


def enumerate_mems(text, len1, end, child, depth, suffix, cnt1, cnt2,
                   min_len, unique):
    n = len(text)
    text = text.tolist()
    end = end.tolist()
    child = child.tolist()
    depth = depth.tolist()
    suffix = suffix.tolist()
    cnt1 = cnt1.tolist()
    cnt2 = cnt2.tolist()
    off2 = len1 + 1

    def leaf_class(p):
        seq = 0 if p < len1 else 1
        if p == 0 or p == len1 + 1:
            cls = 4
        else:
            t = text[p - 1]
            cls = t if t < 4 else 4
        return seq * 5 + cls

    # bucket lists per internal node: ten lists of leaf positions
    buckets = {}
    out1, out2, outl = [], [], []
    stack = [[0, 0]]
    while stack:
        frame = stack[-1]
        v, k = frame
        row = child[v]
        while k < ALPHA and (row[k] == -1 or end[row[k]] == n):
            k += 1
        if k < ALPHA:
            frame[1] = k + 1
            stack.append([row[k], 0])
            continue
        stack.pop()
        if v == 0 or depth[v] < min_len:
            continue
        acc = [[] for _ in range(10)]
        emit = cnt1[v] > 0 and cnt2[v] > 0
        if unique and not (cnt1[v] == 1 and cnt2[v] == 1):
            emit = False
        d = depth[v]
        for c in row:
            if c == -1:
                continue
            if end[c] == n:
                p = suffix[c]
                if not (p < len1 or len1 < p < n - 1):
                    continue
                lists = [[] for _ in range(10)]
                lists[leaf_class(p)].append(p)
            else:
                lists = buckets.pop(c)
            if emit:
                for i in range(5):
                    for j in range(5):
                        if i == j and i != 4:
                            continue
                        if lists[5 + j]:
                            for a in acc[i]:
                                for b in lists[5 + j]:
                                    out1.append(a)
                                    out2.append(b - off2)
                                    outl.append(d)
                        if acc[5 + j]:
                            for a in lists[i]:
                                for b in acc[5 + j]:
                                    out1.append(a)
                                    out2.append(b - off2)
                                    outl.append(d)
            for i in range(10):
                acc[i].extend(lists[i])
        buckets[v] = acc
    i64 = np.int64
    return (np.array(out1, dtype=i64), np.array(out2, dtype=i64),
            np.array(outl, dtype=i64))


def descend(text, start, end, child, lo, hi, order, suffix, queries, qlen,
            budget):
    text = text.tolist()
    start = start.tolist()
    end = end.tolist()
    child = child.tolist()
    lo = lo.tolist()
    hi = hi.tolist()
    order = order.tolist()
    suffix = suffix.tolist()
    queries = queries.tolist()
    nq = len(queries) // qlen if qlen > 0 else 0
    oq, op, om = [], [], []
    for q in range(nq):
        query = queries[q * qlen:(q + 1) * qlen]
        stack = [(0, 0, 0)]
        while stack:
            v, k, u = stack.pop()
            for c in child[v]:
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
                    if t >= 4 or t != query[kk]:
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
                        oq.append(q)
                        op.append(suffix[order[r]])
                        om.append(uu)
                else:
                    stack.append((c, kk, uu))
    i64 = np.int64
    return (np.array(oq, dtype=i64), np.array(op, dtype=i64),
            np.array(om, dtype=i64))


def xdrop_extend(a, b, i, j, direction, limit, x_drop, match, mismatch):
    score = best = best_t = 0
    for t in range(limit):
        if direction > 0:
            x = a[i + t]
            y = b[j + t]
        else:
            x = a[i - 1 - t]
            y = b[j - 1 - t]
        score += match if (x == y and x < 4) else mismatch
        if score > best:
            best = score
            best_t = t + 1
        elif best - score >= x_drop:
            break
    return best_t


def global_affine(a, b, w, match, mismatch, gap_open, gap_extend):
    a = a.tolist()
    b = b.tolist()
    m, n = len(a), len(b)
    width = 2 * w + 1
    M = [[NEG] * width for _ in range(m + 1)]
    E = [[NEG] * width for _ in range(m + 1)]
    F = [[NEG] * width for _ in range(m + 1)]
    tb = [[0] * width for _ in range(m + 1)]
    M[0][w] = 0
    for i in range(m + 1):
        Mi, Ei, Fi, tbi = M[i], E[i], F[i], tb[i]
        if i > 0:
            Mp, Ep, Fp = M[i - 1], E[i - 1], F[i - 1]
        for j in range(max(i - w, 0), min(i + w, n) + 1):
            if i == 0 and j == 0:
                continue
            col = j - i + w
            bits = 0
            if i > 0 and j > 0:
                best = Mp[col]
                if Fp[col] > best:
                    best = Fp[col]
                    bits = 2
                if Ep[col] > best:
                    best = Ep[col]
                    bits = 1
                if best > NEG:
                    ok = a[i - 1] == b[j - 1] and a[i - 1] < 4
                    Mi[col] = best + (match if ok else mismatch)
            if j > 0 and col >= 1:
                x, z, y = Mi[col - 1], Fi[col - 1], Ei[col - 1]
                origin = 0
                if z > x:
                    x, origin = z, 2
                x = x + gap_open if x > NEG else NEG
                y = y + gap_extend if y > NEG else NEG
                if y > x:
                    Ei[col] = y
                    bits |= 1 << 2
                else:
                    Ei[col] = x
                    bits |= origin << 2
            if i > 0 and col + 1 < width:
                x, y, z = Mp[col + 1], Ep[col + 1], Fp[col + 1]
                origin = 0
                if y > x:
                    x, origin = y, 1
                x = x + gap_open if x > NEG else NEG
                z = z + gap_extend if z > NEG else NEG
                if z > x:
                    Fi[col] = z
                    bits |= 2 << 4
                else:
                    Fi[col] = x
                    bits |= origin << 4
            tbi[col] = bits

    col = n - m + w
    state = 0
    best = M[m][col]
    if F[m][col] > best:
        best, state = F[m][col], 2
    if E[m][col] > best:
        best, state = E[m][col], 1
    if m == 0 and n == 0:
        best = 0
    ops = []
    i, j = m, n
    while i > 0 or j > 0:
        bits = tb[i][j - i + w]
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
