"""Pure-Python hot loops, used when the compiled extension is unavailable.

Must stay operation-for-operation identical to ``_ckernels.pyx`` so both
backends make the same floating-point decisions.

Layout shared by both backends: ``codes`` is (n, r) int32, ``offsets`` has
r + 1 entries and attribute ``i`` owns columns ``offsets[i]:offsets[i+1]``
of the (k, P) count matrix ``cah``.
"""
import numpy as np


def assign_initial(codes, offsets, k):
    """Seed clusters with the first k records, then assign each later record
    to the cluster with the largest matched-frequency share (lowest id on ties).
    """
    n, r = codes.shape
    P = int(offsets[r])
    rows = (codes.astype(np.int64) + np.asarray(offsets[:r], dtype=np.int64)).tolist()
    cah = [0] * (k * P)
    sizes = [0] * k
    labels = [0] * n
    for j in range(n):
        row = rows[j]
        if j < k:
            best = j
        else:
            best = 0
            best_sim = -1.0
            for c in range(k):
                base = c * P
                matched = 0
                for col in row:
                    matched += cah[base + col]
                sim = matched / sizes[c]
                if sim > best_sim:
                    best_sim = sim
                    best = c
        labels[j] = best
        sizes[best] += 1
        base = best * P
        for col in row:
            cah[base + col] += 1
    return (np.asarray(labels, dtype=np.int64),
            np.asarray(cah, dtype=np.int64).reshape(k, P),
            np.asarray(sizes, dtype=np.int64))


def sweep(codes, offsets, labels, cah, sizes, xlx, weights, eps):
    """One pass over all records in order; moves each record to the cluster
    with the largest ANMI gain if that gain exceeds ``eps``.

    ``weights[i]`` converts attribute i's change in sum(c ln c) into its
    change in ANMI. Arrays are updated in place; returns the move count.
    """
    n, r = codes.shape
    k, P = cah.shape
    rows = (codes.astype(np.int64) + np.asarray(offsets[:r], dtype=np.int64)).tolist()
    lab = labels.tolist()
    cnt = cah.ravel().tolist()
    sz = sizes.tolist()
    t = xlx.tolist()
    w = weights.tolist()
    moves = 0
    for j in range(n):
        a = lab[j]
        sa = sz[a]
        if sa == 1:
            continue
        row = rows[j]
        abase = a * P
        dsa = t[sa - 1] - t[sa]
        best = a
        best_gain = eps
        for b in range(k):
            if b == a:
                continue
            sb = sz[b]
            dsize = dsa + (t[sb + 1] - t[sb])
            bbase = b * P
            gain = 0.0
            for i in range(r):
                col = row[i]
                ca = cnt[abase + col]
                cb = cnt[bbase + col]
                dcell = (t[ca - 1] - t[ca]) + (t[cb + 1] - t[cb])
                gain += w[i] * (dcell - dsize)
            if gain > best_gain:
                best_gain = gain
                best = b
        if best != a:
            bbase = best * P
            for col in row:
                cnt[abase + col] -= 1
                cnt[bbase + col] += 1
            sz[a] -= 1
            sz[best] += 1
            lab[j] = best
            moves += 1
    labels[:] = lab
    cah[:, :] = np.asarray(cnt, dtype=np.int64).reshape(k, P)
    sizes[:] = sz
    return moves
