"""Hot integer kernels.

Every public function dispatches to a numba-compiled loop or to a numpy
(or plain Python, for coset enumeration) fallback, depending on
``heredpoly._accel.USE_NUMBA``.  Both paths return identical results.
"""
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ._accel import USE_NUMBA, njit

INDEX = np.int64


# ---------------------------------------------------------------------------
# adjacency-commuting extension


@njit
def _extend_nb(adj_a, adj_b, src, dst, out):
    n, size = adj_a.shape
    for k in range(size):
        out[k] = -1
    out[src] = dst
    queue = np.empty(size, np.int64)
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        mx = out[x]
        for i in range(n):
            y = adj_a[i, x]
            my = adj_b[i, mx]
            if out[y] == -1:
                out[y] = my
                queue[tail] = y
                tail += 1
            elif out[y] != my:
                return False
    return tail == size


def _extend_np(adj_a, adj_b, src, dst):
    n, size = adj_a.shape
    out = np.full(size, -1, dtype=INDEX)
    out[src] = dst
    frontier = np.array([src], dtype=INDEX)
    seen = 1
    while frontier.size:
        fresh = []
        for i in range(n):
            y = adj_a[i, frontier]
            my = adj_b[i, out[frontier]]
            cur = out[y]
            known = cur >= 0
            if np.any(cur[known] != my[known]):
                return None
            y = y[~known]
            my = my[~known]
            if y.size == 0:
                continue
            order = np.argsort(y, kind="stable")
            y = y[order]
            my = my[order]
            dup = y[1:] == y[:-1]
            if np.any(my[1:][dup] != my[:-1][dup]):
                return None
            keep = np.concatenate(([True], ~dup))
            y = y[keep]
            out[y] = my[keep]
            fresh.append(y)
        frontier = np.concatenate(fresh) if fresh else np.empty(0, dtype=INDEX)
        seen += frontier.size
    if seen != size:
        return None
    return out


def extend(adj_a, adj_b, src, dst):
    """Return the unique map A -> B with src -> dst commuting with every adjacency.

    ``None`` when no such map exists.  Both graphs are connected and of
    equal size by precondition, so a returned map is a bijection.
    """
    if USE_NUMBA:
        out = np.empty(adj_a.shape[1], dtype=INDEX)
        if _extend_nb(adj_a, adj_b, INDEX(src), INDEX(dst), out):
            return out
        return None
    return _extend_np(adj_a, adj_b, int(src), int(dst))


# ---------------------------------------------------------------------------
# union-find over flags


@njit
def _find(parent, x):
    r = x
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        nxt = parent[x]
        parent[x] = r
        x = nxt
    return r


@njit
def _union_perm_nb(parent, perm):
    for x in range(parent.shape[0]):
        a = _find(parent, x)
        b = _find(parent, perm[x])
        if a < b:
            parent[b] = a
        elif b < a:
            parent[a] = b


@njit
def _flatten_nb(parent):
    for x in range(parent.shape[0]):
        parent[x] = _find(parent, x)


@njit
def _union_ranks_nb(parent, adj, ranks):
    for i in ranks:
        _union_perm_nb(parent, adj[i])
    _flatten_nb(parent)


def _min_labels(size, rows, cols):
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(size, size))
    ncomp, comp = connected_components(graph, directed=False)
    least = np.full(ncomp, size, dtype=INDEX)
    np.minimum.at(least, comp, np.arange(size, dtype=INDEX))
    return least[comp]


def merge_labels(labels, perm):
    """Merge the partition ``labels`` (min-element labels) with the cycles of ``perm``."""
    labels = np.asarray(labels, dtype=INDEX)
    if USE_NUMBA:
        parent = labels.copy()
        _union_perm_nb(parent, np.asarray(perm, dtype=INDEX))
        _flatten_nb(parent)
        return parent
    size = labels.size
    idx = np.arange(size, dtype=INDEX)
    rows = np.concatenate((idx, idx))
    cols = np.concatenate((labels, np.asarray(perm, dtype=INDEX)))
    return _min_labels(size, rows, cols)


def components(adj, ranks):
    """Connected components of the graph on flags using adjacencies in ``ranks``.

    Returns labels numbered 0.. in order of each component's least flag.
    """
    size = adj.shape[1]
    ranks = np.asarray(sorted(ranks), dtype=INDEX)
    if USE_NUMBA:
        parent = np.arange(size, dtype=INDEX)
        _union_ranks_nb(parent, adj, ranks)
        least = parent
    elif ranks.size == 0:
        least = np.arange(size, dtype=INDEX)
    else:
        idx = np.arange(size, dtype=INDEX)
        rows = np.concatenate([idx] * ranks.size)
        cols = np.concatenate([adj[i] for i in ranks])
        least = _min_labels(size, rows, cols)
    _, labels = np.unique(least, return_inverse=True)
    return labels.astype(INDEX)


def row_ids(rows):
    """Dense ids of the rows of a 2-d integer array, numbered in lexicographic row order."""
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[:, None]
    key = np.zeros(rows.shape[0], dtype=INDEX)
    for c in range(rows.shape[1]):
        col = rows[:, c].astype(INDEX)
        col = col - col.min() if col.size else col
        width = int(col.max()) + 1 if col.size else 1
        if key.size and int(key.max()) + 1 > (1 << 62) // width:
            key = np.unique(key, return_inverse=True)[1].ravel().astype(INDEX)
        key = key * width + col
    ids = np.unique(key, return_inverse=True)[1].ravel()
    return ids.astype(INDEX)


def unique_rows(rows):
    """Distinct rows in lexicographic order."""
    rows = np.asarray(rows)
    _, first = np.unique(row_ids(rows), return_index=True)
    return rows[first]


def cycle_lengths(perm):
    """Length of the cycle of ``perm`` through each point."""
    labels = components(np.asarray(perm, dtype=INDEX)[None, :], [0])
    return np.bincount(labels)[labels]


def refine_colors(adj, colors, rounds=None):
    """Colour refinement on an edge-labelled regular graph (invariant under automorphisms)."""
    colors = row_ids(colors)
    ncolors = colors.max() + 1 if colors.size else 0
    step = 0
    while rounds is None or step < rounds:
        step += 1
        sig = np.column_stack([colors] + [colors[a] for a in adj])
        new = row_ids(sig)
        k = new.max() + 1
        colors = new
        if k == ncolors:
            break
        ncolors = k
    return colors


# ---------------------------------------------------------------------------
# Felsch-style coset enumeration


@njit
def _rep(p, a):
    r = a
    while p[r] != r:
        r = p[r]
    while p[a] != r:
        nxt = p[a]
        p[a] = r
        a = nxt
    return r


@njit
def _push(stack, top, a, x):
    if top[0] + 2 > stack.shape[0]:
        bigger = np.empty(stack.shape[0] * 2, np.int64)
        bigger[: stack.shape[0]] = stack
        stack = bigger
    stack[top[0]] = a
    stack[top[0] + 1] = x
    top[0] += 2
    return stack


@njit
def _merge(p, queue, qlen, k, l):
    a = _rep(p, k)
    b = _rep(p, l)
    if a != b:
        if a > b:
            a, b = b, a
        p[b] = a
        queue[qlen[0]] = b
        qlen[0] += 1


@njit
def _coincidence(table, inv, p, queue, stack, top, alpha, beta):
    ncols = table.shape[1]
    qlen = np.zeros(1, np.int64)
    _merge(p, queue, qlen, alpha, beta)
    i = 0
    while i < qlen[0]:
        g = queue[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                table[d, inv[x]] = -1
                mu = _rep(p, g)
                nu = _rep(p, d)
                if table[mu, x] >= 0:
                    _merge(p, queue, qlen, nu, table[mu, x])
                elif table[nu, inv[x]] >= 0:
                    _merge(p, queue, qlen, mu, table[nu, inv[x]])
                else:
                    table[mu, x] = nu
                    table[nu, inv[x]] = mu
                    stack = _push(stack, top, mu, x)
    return stack


@njit
def _scan(table, inv, p, queue, stack, top, alpha, flat, start, length):
    # returns updated stack; deduces or triggers coincidences, never defines
    f = alpha
    i = 0
    while i < length and table[f, flat[start + i]] >= 0:
        f = table[f, flat[start + i]]
        i += 1
    if i == length:
        if f != alpha:
            stack = _coincidence(table, inv, p, queue, stack, top, f, alpha)
        return stack
    b = alpha
    j = length - 1
    while j >= i and table[b, inv[flat[start + j]]] >= 0:
        b = table[b, inv[flat[start + j]]]
        j -= 1
    if j < i:
        stack = _coincidence(table, inv, p, queue, stack, top, f, b)
    elif j == i:
        x = flat[start + i]
        table[f, x] = b
        table[b, inv[x]] = f
        stack = _push(stack, top, f, x)
    return stack


@njit
def _process(table, inv, p, queue, stack, top, conj_flat, conj_off, col_ptr):
    while top[0] > 0:
        top[0] -= 2
        a = stack[top[0]]
        x = stack[top[0] + 1]
        if p[a] != a:
            continue
        for k in range(col_ptr[x], col_ptr[x + 1]):
            stack = _scan(table, inv, p, queue, stack, top, a,
                          conj_flat, conj_off[k], conj_off[k + 1] - conj_off[k])
            if p[a] != a:
                break
        if p[a] != a:
            continue
        b = table[a, x]
        if b < 0:
            continue
        y = inv[x]
        for k in range(col_ptr[y], col_ptr[y + 1]):
            if p[b] != b:
                break
            stack = _scan(table, inv, p, queue, stack, top, b,
                          conj_flat, conj_off[k], conj_off[k + 1] - conj_off[k])
    return stack


@njit
def _felsch(ncols, inv, conj_flat, conj_off, col_ptr, sub_flat, sub_off, limit):
    table = np.full((limit, ncols), -1, np.int64)
    p = np.arange(limit)
    queue = np.empty(limit, np.int64)
    stack = np.empty(1024, np.int64)
    top = np.zeros(1, np.int64)
    nxt = 1
    # subgroup generators: scan-and-fill at coset 0
    for s in range(sub_off.shape[0] - 1):
        start = sub_off[s]
        length = sub_off[s + 1] - start
        while True:
            a = _rep(p, 0)
            f = a
            i = 0
            while i < length and table[f, sub_flat[start + i]] >= 0:
                f = table[f, sub_flat[start + i]]
                i += 1
            if i == length:
                if f != a:
                    stack = _coincidence(table, inv, p, queue, stack, top, f, a)
                    stack = _process(table, inv, p, queue, stack, top, conj_flat, conj_off, col_ptr)
                break
            b = a
            j = length - 1
            while j >= i and table[b, inv[sub_flat[start + j]]] >= 0:
                b = table[b, inv[sub_flat[start + j]]]
                j -= 1
            if j < i:
                stack = _coincidence(table, inv, p, queue, stack, top, f, b)
                stack = _process(table, inv, p, queue, stack, top, conj_flat, conj_off, col_ptr)
                break
            x = sub_flat[start + i]
            if j == i:
                table[f, x] = b
                table[b, inv[x]] = f
            else:
                if nxt >= limit:
                    return table, -1, nxt
                table[f, x] = nxt
                table[nxt, inv[x]] = f
                nxt += 1
            stack = _push(stack, top, f, x)
            stack = _process(table, inv, p, queue, stack, top, conj_flat, conj_off, col_ptr)
    ptr = 0
    col = 0
    while True:
        stack = _process(table, inv, p, queue, stack, top, conj_flat, conj_off, col_ptr)
        # next undefined entry in (coset, column) order
        found = False
        while ptr < nxt:
            if p[ptr] == ptr:
                while col < ncols:
                    if table[ptr, col] < 0:
                        found = True
                        break
                    col += 1
                if found:
                    break
            ptr += 1
            col = 0
        if not found:
            break
        if nxt >= limit:
            return table, -1, nxt
        table[ptr, col] = nxt
        table[nxt, inv[col]] = ptr
        nxt += 1
        stack = _push(stack, top, ptr, col)
    # standardize: renumber live cosets in order of first appearance
    new = np.full(nxt, -1, np.int64)
    order = np.empty(nxt, np.int64)
    root = _rep(p, 0)
    new[root] = 0
    order[0] = root
    count = 1
    k = 0
    while k < count:
        a = order[k]
        k += 1
        for x in range(ncols):
            b = _rep(p, table[a, x])
            if new[b] < 0:
                new[b] = count
                order[count] = b
                count += 1
    out = np.empty((count, ncols), np.int64)
    for r in range(count):
        a = order[r]
        for x in range(ncols):
            out[r, x] = new[_rep(p, table[a, x])]
    return out, count, nxt


def felsch(ncols, inv, conj_flat, conj_off, col_ptr, sub_flat, sub_off, limit):
    """Run the enumeration; returns ``(table, index, cosets_defined)``; index -1 on overflow."""
    args = [np.asarray(a, dtype=INDEX) for a in (inv, conj_flat, conj_off, col_ptr, sub_flat, sub_off)]
    table, index, used = _felsch(INDEX(ncols), *args, INDEX(limit))
    return table, int(index), int(used)
