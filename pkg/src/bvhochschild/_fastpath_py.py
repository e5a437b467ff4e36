"""Pure-Python hot kernels (integer arithmetic).

These mirror the compiled module `_fastpath` line for line; `kernels`
picks whichever is importable.  All functions work on plain int tables:
a modulus of 0 means exact integers (the rationals after denominator
checks), a positive modulus means arithmetic in F_p where only residues
mod p matter.

Conventions shared with the generic layer:

* a cochain tuple is a tuple of basis indices, vectors are int lists
* by_target[k] lists (i, j, c) with (e_i e_j)_k = c != 0
* left[a] / right[b] are module-dim x module-dim action matrices
"""


def _matvec(mat, v, md):
    out = [0] * md
    for r in range(md):
        row = mat[r]
        s = 0
        for c in range(md):
            x = row[c]
            if x:
                s += x * v[c]
        out[r] = s
    return out


def _coboundary_terms(t, v, sign, d, md, by_target, left, right):
    """All (tuple, vector) contributions of the coboundary of the cochain
    sending t to sign*v, with multiplicities; no accumulation."""
    n = len(t)
    out = []
    for a in range(d):
        w = _matvec(left[a], v, md)
        if sign != 1:
            w = [sign * x for x in w]
        out.append(((a,) + t, w))
    for p in range(n):
        s = -sign if (p + 1) % 2 else sign
        head, mid, tail = t[:p], t[p], t[p + 1:]
        for (i, j, c) in by_target[mid]:
            cs = s * c
            out.append((head + (i, j) + tail, [cs * x for x in v]))
    s = -sign if (n + 1) % 2 else sign
    for b in range(d):
        w = _matvec(right[b], v, md)
        out.append((t + (b,), [s * x for x in w]))
    return out


def delta_squared_sweep(d, md, by_target, left, right, mod, n):
    """Check delta(delta e) = 0 for every elementary cochain of arity n.
    Returns None, or the offending (tuple, out_index)."""
    stack = [0] * n
    while True:
        t0 = tuple(stack)
        for k in range(md):
            v0 = [0] * md
            v0[k] = 1
            acc = {}
            for (t1, v1) in _coboundary_terms(t0, v0, 1, d, md,
                                              by_target, left, right):
                for (t2, v2) in _coboundary_terms(t1, v1, 1, d, md,
                                                  by_target, left, right):
                    cur = acc.get(t2)
                    if cur is None:
                        acc[t2] = list(v2)
                    else:
                        for r in range(md):
                            cur[r] += v2[r]
            for vec in acc.values():
                for x in vec:
                    if (x % mod) if mod else x:
                        return (t0, k)
        p = n - 1
        while p >= 0 and stack[p] == d - 1:
            stack[p] = 0
            p -= 1
        if p < 0:
            return None
        stack[p] += 1


def _cyclic_terms(t, w, d, gu, cols, lo, hi, base_sign, big_n):
    """Signed single-tuple contributions of sum_{i=lo..hi}
    (-1)^{i(big_n-1)} Delta_i applied to the one-entry cochain t -> w."""
    tau = 0
    for r in range(d):
        if gu[r]:
            tau += w[r] * gu[r]
    if not tau:
        return []
    n = len(t)
    out = []
    for i in range(lo, hi + 1):
        s0 = t[n - i]
        new_t = t[n - i + 1:] + t[:n - i]
        sgn = -base_sign if (i * (big_n - 1)) % 2 else base_sign
        coeff = sgn * tau
        out.append((new_t, [coeff * cols[s0][r] for r in range(d)]))
    return out


def swap_identity_sweep(d, md, mult, pairing, gu, cols, mod, n, m):
    """Check that the first-m cyclic part of Delta(f cup g) equals
    (-1)^{nm} times the last-n cyclic part of Delta(g cup f) for all
    elementary f (arity n) and g (arity m).  Values must live in the
    algebra itself (md == d).  Returns None or a witness."""
    big_n = n + m
    swap_sign = -1 if (n * m) % 2 else 1
    f_stack = [0] * n
    while True:
        tf = tuple(f_stack)
        g_stack = [0] * m
        while True:
            tg = tuple(g_stack)
            for k1 in range(d):
                for k2 in range(d):
                    if not pairing[k1][k2]:
                        # <e_k1 e_k2, 1> = <e_k1, e_k2> by invariance: both
                        # cyclic images vanish identically
                        continue
                    acc = {}
                    w1 = mult[k1][k2]
                    for (t2, v2) in _cyclic_terms(tf + tg, w1, d, gu, cols,
                                                  1, m, 1, big_n):
                        cur = acc.get(t2)
                        if cur is None:
                            acc[t2] = list(v2)
                        else:
                            for r in range(d):
                                cur[r] += v2[r]
                    w2 = mult[k2][k1]
                    for (t2, v2) in _cyclic_terms(tg + tf, w2, d, gu, cols,
                                                  n + 1, big_n, -swap_sign,
                                                  big_n):
                        cur = acc.get(t2)
                        if cur is None:
                            acc[t2] = list(v2)
                        else:
                            for r in range(d):
                                cur[r] += v2[r]
                    for vec in acc.values():
                        for x in vec:
                            if (x % mod) if mod else x:
                                return (tf, k1, tg, k2)
            p = m - 1
            while p >= 0 and g_stack[p] == d - 1:
                g_stack[p] = 0
                p -= 1
            if p < 0:
                break
            g_stack[p] += 1
        p = n - 1
        while p >= 0 and f_stack[p] == d - 1:
            f_stack[p] = 0
            p -= 1
        if p < 0:
            return None
        f_stack[p] += 1
