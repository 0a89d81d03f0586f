"""Ranked face posets, flag graphs, and the operations on them that need no symmetry."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import config, kernels

INDEX = np.int64


class PolytopeError(ValueError):
    """Input is not (or does not produce) an abstract polytope."""


class FlagGraphError(PolytopeError):
    pass


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class FacePoset:
    """A ranked poset with implicit least and greatest faces.

    ``covers[i][f]`` lists the rank ``i-1`` faces covered by face ``f`` of
    rank ``i``; ``covers[0]`` holds empty tuples.
    """

    rank: int
    counts: tuple
    covers: tuple

    def faces(self, i):
        return range(self.counts[i])

    @cached_property
    def _csr(self):
        out = [None]
        for i in range(1, self.rank):
            lens = np.fromiter((len(c) for c in self.covers[i]), dtype=INDEX, count=self.counts[i])
            ptr = np.zeros(self.counts[i] + 1, dtype=INDEX)
            np.cumsum(lens, out=ptr[1:])
            idx = np.fromiter((g for c in self.covers[i] for g in c), dtype=INDEX, count=int(ptr[-1]))
            out.append((ptr, idx))
        return out

    @cached_property
    def covered_by(self):
        """``covered_by[i][f]``: rank ``i+1`` faces covering face ``f`` of rank ``i``."""
        up = [[[] for _ in range(self.counts[i])] for i in range(self.rank)]
        for i in range(1, self.rank):
            for f, cov in enumerate(self.covers[i]):
                for g in cov:
                    up[i - 1][g].append(f)
        return tuple(tuple(tuple(u) for u in level) for level in up)

    @cached_property
    def flags(self):
        """All flags as an ``(N, rank)`` array, column ``i`` holding the rank-``i`` face."""
        n = self.rank
        chains = np.arange(self.counts[n - 1], dtype=INDEX)[:, None]
        for r in range(n - 1, 0, -1):
            ptr, idx = self._csr[r]
            last = chains[:, -1]
            cnt = ptr[last + 1] - ptr[last]
            total = int(cnt.sum())
            if total > config.MAX_FLAGS:
                raise PolytopeError(f"more than {config.MAX_FLAGS} flags")
            rows = np.repeat(np.arange(len(chains), dtype=INDEX), cnt)
            offs = np.arange(total, dtype=INDEX) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            col = idx[np.repeat(ptr[last], cnt) + offs]
            chains = np.column_stack((chains[rows], col))
        return np.ascontiguousarray(chains[:, ::-1])

    @property
    def flag_count(self):
        return len(self.flags)

    @cached_property
    def _validation(self):
        return _run_validation(self)

    @cached_property
    def graph(self):
        """Cached flag graph (validates on first access)."""
        return flag_graph(self)

    def __repr__(self):
        return f"FacePoset(rank={self.rank}, counts={self.counts})"


@dataclass(frozen=True, eq=False)
class FlagGraph:
    """Flags with one fixed-point-free adjacency involution per rank.

    ``adj[i][x]`` is the ``i``-adjacent flag of ``x``.  ``chains`` is
    present when the graph was read off a poset.
    """

    adj: np.ndarray
    chains: Optional[np.ndarray] = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self):
        return self.adj.shape[0]

    @property
    def flag_count(self):
        return self.adj.shape[1]

    def face_labels(self):
        """``(N, rank)`` array: the rank-``i`` face containing each flag."""
        if self.chains is not None:
            return self.chains
        if "faces" not in self._cache:
            n = self.rank
            cols = [kernels.components(self.adj, [j for j in range(n) if j != i]) for i in range(n)]
            self._cache["faces"] = np.column_stack(cols) if cols else np.zeros((self.flag_count, 0), INDEX)
        return self._cache["faces"]


@dataclass
class ValidationReport:
    ok: bool
    violations: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def lines(self):
        if self.ok:
            return ["valid"]
        return [f"invalid {axiom}: {witness}" for axiom, witness in self.violations.items()]


# ---------------------------------------------------------------------------
# construction


def build_poset(rank: int, covers: Sequence, counts: Optional[Sequence[int]] = None) -> FacePoset:
    """Assemble a poset from per-rank cover lists.

    ``covers`` has one entry per rank ``1..rank-1``, or ``rank`` entries
    with a leading placeholder for the vertices.  Vertex count defaults to
    one more than the largest index covered by an edge.
    """
    if rank < 1:
        raise PolytopeError("rank must be at least 1")
    if rank > config.MAX_RANK:
        raise PolytopeError(f"rank {rank} exceeds limit {config.MAX_RANK}")
    covers = list(covers)
    if len(covers) == rank - 1:
        covers = [None] + covers
    if len(covers) != rank:
        raise PolytopeError(f"expected cover lists for ranks 1..{rank - 1}")
    if counts is None:
        if rank == 1:
            raise PolytopeError("rank-1 poset needs an explicit vertex count")
        nv = 1 + max((g for c in covers[1] for g in c), default=-1)
        counts = [nv] + [len(covers[i]) for i in range(1, rank)]
    counts = tuple(int(c) for c in counts)
    if len(counts) != rank:
        raise PolytopeError("counts must list one size per rank")
    out = [tuple(() for _ in range(counts[0]))]
    for i, m in enumerate(counts):
        if m == 0:
            raise PolytopeError(f"rank {i} has no faces")
    for i in range(1, rank):
        level = covers[i]
        if len(level) != counts[i]:
            raise PolytopeError(f"rank {i}: {len(level)} cover lists for {counts[i]} faces")
        fixed = []
        for f, cov in enumerate(level):
            cov = tuple(sorted(int(g) for g in cov))
            if len(set(cov)) != len(cov):
                raise PolytopeError(f"face ({i},{f}) lists a covered face twice")
            if any(g < 0 or g >= counts[i - 1] for g in cov):
                raise PolytopeError(f"face ({i},{f}) covers an index out of range")
            if len(cov) < 2:
                raise PolytopeError(f"face ({i},{f}) covers fewer than two faces")
            fixed.append(cov)
        out.append(tuple(fixed))
    return FacePoset(rank, counts, tuple(out))


def canonical(p: FacePoset) -> FacePoset:
    """Relabel faces rank by rank, stably sorted by their (relabelled) cover lists."""
    new_covers = [p.covers[0]]
    perm = list(range(p.counts[0]))  # old index -> new index at previous rank
    for i in range(1, p.rank):
        keyed = [tuple(sorted(perm[g] for g in cov)) for cov in p.covers[i]]
        order = sorted(range(len(keyed)), key=keyed.__getitem__)
        new_covers.append(tuple(keyed[f] for f in order))
        perm = [0] * len(order)
        for new, old in enumerate(order):
            perm[old] = new
    return FacePoset(p.rank, p.counts, tuple(new_covers))


# ---------------------------------------------------------------------------
# validation and flag graphs


def _pair_flags(flags, i):
    """Group flags differing only at rank ``i``; returns (order, group starts, group sizes)."""
    n = flags.shape[1]
    keep = [j for j in range(n) if j != i]
    if not keep:
        order = np.arange(len(flags), dtype=INDEX)
        return order, np.array([0], dtype=INDEX), np.array([len(flags)], dtype=INDEX)
    key = kernels.row_ids(flags[:, keep])
    order = np.argsort(key, kind="stable")
    sk = key[order]
    brk = np.flatnonzero(sk[1:] != sk[:-1]) + 1
    starts = np.concatenate(([0], brk)).astype(INDEX)
    sizes = np.diff(np.concatenate((starts, [len(flags)]))).astype(INDEX)
    return order, starts, sizes


def _face_ref(rank, n, idx):
    if rank < 0:
        return "F-1"
    if rank >= n:
        return f"F{n}"
    return f"({rank},{idx})"


def _structure_violations(p: FacePoset):
    bad = {}
    n = p.rank
    for i in range(1, n):
        for f, cov in enumerate(p.covers[i]):
            if len(cov) < 2:
                bad.setdefault("min-covers", f"face ({i},{f}) covers {len(cov)} faces")
    for i in range(n - 1):
        for f, ups in enumerate(p.covered_by[i]):
            if not ups:
                bad.setdefault("graded", f"face ({i},{f}) is maximal below F{n}")
                break
    return bad


def _adjacency(flags, n):
    """Adjacency array, or a diamond witness string."""
    size = len(flags)
    adj = np.empty((n, size), dtype=INDEX)
    for i in range(n):
        order, starts, sizes = _pair_flags(flags, i)
        wrong = np.flatnonzero(sizes != 2)
        if wrong.size:
            x = order[starts[wrong[0]]]
            lo = _face_ref(i - 1, n, flags[x, i - 1] if i > 0 else -1)
            hi = _face_ref(i + 1, n, flags[x, i + 1] if i + 1 < n else -1)
            return f"{sizes[wrong[0]]} faces of rank {i} between {lo} and {hi}"
        a = order[0::2]
        b = order[1::2]
        adj[i, a] = b
        adj[i, b] = a
    return adj


def _connectivity_witness(flags, adj):
    n = flags.shape[1]
    for lo in range(-1, n):
        for hi in range(lo + 3, n + 1):
            inner = list(range(lo + 1, hi))
            comp = kernels.components(adj, inner)
            outer = [j for j in range(n) if j <= lo or j >= hi]
            if outer:
                key = kernels.row_ids(flags[:, outer])
            else:
                key = np.zeros(len(flags), dtype=INDEX)
            pairs = kernels.unique_rows(np.column_stack((key, comp)))
            per_key = np.bincount(pairs[:, 0])
            split = np.flatnonzero(per_key > 1)
            if split.size:
                x = int(np.flatnonzero(key == split[0])[0])
                a = _face_ref(lo, n, flags[x, lo] if lo >= 0 else -1)
                b = _face_ref(hi, n, flags[x, hi] if hi < n else -1)
                return f"section {b}/{a} has a disconnected flag graph"
    return None


def _run_validation(p: FacePoset):
    bad = _structure_violations(p)
    adj = None
    if "graded" not in bad:
        flags = p.flags
        adj = _adjacency(flags, p.rank)
        if isinstance(adj, str):
            bad["diamond"] = adj
            adj = None
        else:
            witness = _connectivity_witness(flags, adj)
            if witness:
                bad["connectivity"] = witness
    return ValidationReport(not bad, bad), adj


def validate(p: FacePoset) -> ValidationReport:
    return p._validation[0]


def flag_graph(p: FacePoset) -> FlagGraph:
    report, adj = p._validation
    if not report:
        raise PolytopeError("; ".join(report.lines()))
    return FlagGraph(adj, p.flags)


def check_flag_graph(adj) -> None:
    adj = np.asarray(adj)
    n, size = adj.shape
    ident = np.arange(size)
    for i in range(n):
        a = adj[i]
        if a.min() < 0 or a.max() >= size:
            raise FlagGraphError(f"adjacency {i} has an index out of range")
        if np.any(a[a] != ident):
            raise FlagGraphError(f"adjacency {i} is not an involution")
        if np.any(a == ident):
            raise FlagGraphError(f"adjacency {i} has a fixed point")
        for j in range(i + 2, n):
            if np.any(a[adj[j]] != adj[j][a]):
                raise FlagGraphError(f"adjacencies {i} and {j} do not commute")
    if kernels.components(adj, range(n)).max() != 0:
        raise FlagGraphError("flag graph is disconnected")


def poset_from_flag_graph(fg: FlagGraph) -> FacePoset:
    """Rebuild the face poset: rank-i faces are components avoiding adjacency i."""
    check_flag_graph(fg.adj)
    n = fg.rank
    faces = fg.face_labels()
    if kernels.row_ids(faces).max() + 1 != fg.flag_count:
        raise PolytopeError("distinct flags share all their faces (not polytopal)")
    counts = [int(faces[:, i].max()) + 1 for i in range(n)]
    covers = [None]
    for i in range(1, n):
        pairs = kernels.unique_rows(faces[:, [i, i - 1]])
        level = [[] for _ in range(counts[i])]
        for f, g in pairs:
            level[f].append(int(g))
        covers.append(level)
    for i in range(1, n):
        for f, cov in enumerate(covers[i]):
            if len(cov) < 2:
                raise PolytopeError(f"face ({i},{f}) covers fewer than two faces (not polytopal)")
    p = build_poset(n, covers[1:], counts) if n > 1 else FacePoset(1, tuple(counts), (((),) * counts[0],))
    report = validate(p)
    if not report:
        raise PolytopeError("not polytopal: " + "; ".join(report.lines()))
    if p.flag_count != fg.flag_count:
        raise PolytopeError("not polytopal: flag count changed on reconstruction")
    return p


# ---------------------------------------------------------------------------
# derived posets


def _closure(p: FacePoset, face, down: bool):
    """Faces below (or above) ``face`` per rank, as sets of indices."""
    rank, idx = face
    n = p.rank
    out = {rank: {idx}}
    if down:
        r = rank
        while r > 0:
            out[r - 1] = {g for f in out[r] for g in p.covers[r][f]}
            r -= 1
    else:
        r = rank
        while r < n - 1:
            out[r + 1] = {g for f in out[r] for g in p.covered_by[r][f]}
            r += 1
    return out


def section(p: FacePoset, lower=None, upper=None) -> FacePoset:
    """Section ``upper/lower``; faces are ``(rank, index)`` pairs, ``None`` meaning F-1 or Fn."""
    n = p.rank
    lo = -1 if lower is None else lower[0]
    hi = n if upper is None else upper[0]
    if hi - lo < 2:
        raise PolytopeError("section bounds must be at least two ranks apart")
    below = _closure(p, upper, True) if upper is not None else {r: set(p.faces(r)) for r in range(n)}
    above = _closure(p, lower, False) if lower is not None else {r: set(p.faces(r)) for r in range(n)}
    if lower is not None and lower[1] not in below.get(lo, {lower[1]}):
        raise PolytopeError(f"{lower} is not below {upper}")
    keep = [sorted(below[r] & above[r]) for r in range(lo + 1, hi)]
    if any(not k for k in keep):
        raise PolytopeError(f"{lower} is not below {upper}")
    m = hi - lo - 1
    index = [{f: k for k, f in enumerate(level)} for level in keep]
    covers = [None]
    for r in range(1, m):
        old = lo + 1 + r
        covers.append([[index[r - 1][g] for g in p.covers[old][f] if g in index[r - 1]] for f in keep[r]])
    counts = [len(k) for k in keep]
    if m == 1:
        return FacePoset(1, tuple(counts), (((),) * counts[0],))
    return build_poset(m, covers[1:], counts)


def dual(p: FacePoset) -> FacePoset:
    n = p.rank
    counts = tuple(reversed(p.counts))
    covers = [None]
    for i in range(1, n):
        # new rank-i faces are old rank n-1-i faces; they cover old rank n-i faces above them
        covers.append([list(up) for up in p.covered_by[n - 1 - i]])
    if n == 1:
        return FacePoset(1, counts, p.covers)
    return build_poset(n, covers[1:], counts)


def schlafli_type(p: FacePoset) -> Optional[tuple]:
    fg = p.graph
    out = []
    for i in range(1, p.rank):
        lengths = kernels.cycle_lengths(fg.adj[i - 1][fg.adj[i]])
        if lengths.min() != lengths.max():
            return None
        out.append(int(lengths[0]))
    return tuple(out)


def vertex_sets(p: FacePoset):
    """Vertex set of every proper face, keyed by ``(rank, index)``."""
    flags = p.flags
    sets = {}
    for r in range(p.rank):
        pairs = kernels.unique_rows(flags[:, [r, 0]])
        level = [set() for _ in range(p.counts[r])]
        for f, v in pairs:
            level[f].add(int(v))
        for f, s in enumerate(level):
            sets[(r, f)] = frozenset(s)
    return sets


def is_describable(p: FacePoset, mode: str = "vertex") -> bool:
    if mode == "facet":
        return is_describable(dual(p), "vertex")
    if mode != "vertex":
        raise ValueError(f"unknown mode {mode!r}")
    sets = list(vertex_sets(p).values())
    sets.append(frozenset(range(p.counts[0])))
    return len(set(sets)) == len(sets)


def edge_bipartition(p: FacePoset) -> Optional[np.ndarray]:
    """Vertex 2-colouring (0 = yellow, 1 = red) with vertex 0 yellow, or ``None``."""
    if p.rank < 2:
        raise PolytopeError("edge graph needs rank at least 2")
    nbrs = [[] for _ in range(p.counts[0])]
    for a, b in p.covers[1]:
        nbrs[a].append(b)
        nbrs[b].append(a)
    color = np.full(p.counts[0], -1, dtype=np.int8)
    color[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if color[w] < 0:
                color[w] = 1 - color[v]
                queue.append(w)
            elif color[w] == color[v]:
                return None
    return color


# ---------------------------------------------------------------------------
# isomorphism


def _local_invariant(adj):
    n = adj.shape[0]
    cols = [kernels.cycle_lengths(adj[i][adj[i + 1]]) for i in range(n - 1)]
    if not cols:
        return np.zeros(adj.shape[1], dtype=INDEX)
    return np.column_stack(cols)


def flag_colors(adj, rounds=None):
    """Automorphism-invariant flag colours: section gon sizes refined along adjacencies."""
    return kernels.refine_colors(adj, _local_invariant(adj), rounds)


def find_isomorphism(a: FlagGraph, b: FlagGraph):
    """Flag map ``a -> b`` commuting with adjacencies, or ``None``."""
    if a.rank != b.rank or a.flag_count != b.flag_count:
        return None
    size = a.flag_count
    joint = np.concatenate((a.adj, b.adj + size), axis=1)
    colors = flag_colors(joint, rounds=12)
    ca, cb = colors[:size], colors[size:]
    if not np.array_equal(np.sort(ca), np.sort(cb)):
        return None
    for cand in np.flatnonzero(cb == ca[0]):
        m = kernels.extend(a.adj, b.adj, 0, int(cand))
        if m is not None:
            return m
    return None


def isomorphic(p, q) -> bool:
    fa = p if isinstance(p, FlagGraph) else p.graph
    fb = q if isinstance(q, FlagGraph) else q.graph
    return find_isomorphism(fa, fb) is not None
