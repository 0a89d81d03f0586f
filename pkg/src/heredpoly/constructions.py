"""Polytope-valued constructions: medial, generalized halving, 2^K, extensions, alternation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import config, symmetry
from .poset import (FacePoset, PolytopeError, build_poset, dual, edge_bipartition, is_describable,
                    schlafli_type, section, validate, vertex_sets)

INDEX = np.int64


def _validated(p: FacePoset) -> FacePoset:
    report = validate(p)
    if not report.ok:
        raise PolytopeError("construction output is not a polytope: " + "; ".join(report.lines()))
    return p


def _need_rank(p: FacePoset, rank: int, what: str):
    if p.rank != rank:
        raise PolytopeError(f"{what} needs a rank-{rank} polytope, got rank {p.rank}")


def _edge_ends(p: FacePoset):
    return [tuple(c) for c in p.covers[1]]


# ---------------------------------------------------------------------------
# rank 3


def _corners(p: FacePoset):
    """Incident (vertex, 2-face) pairs in sorted order, with the two face edges at each."""
    ends = _edge_ends(p)
    corners = {}
    for f, edges in enumerate(p.covers[2]):
        for e in edges:
            for v in ends[e]:
                corners.setdefault((v, f), []).append(e)
    for key, edges in corners.items():
        if len(edges) != 2:
            raise PolytopeError(f"vertex {key[0]} meets face {key[1]} in {len(edges)} edges")
    return dict(sorted(corners.items()))


def medial(p: FacePoset) -> FacePoset:
    """Vertices at edge midpoints, joined when the edges are consecutive around a face."""
    _need_rank(p, 3, "medial")
    corners = _corners(p)
    index = {c: k for k, c in enumerate(corners)}
    edges = [sorted(pair) for pair in corners.values()]
    by_face = [[] for _ in range(p.counts[2])]
    by_vertex = [[] for _ in range(p.counts[0])]
    for (v, f), k in index.items():
        by_face[f].append(k)
        by_vertex[v].append(k)
    return _validated(build_poset(3, [edges, by_face + by_vertex], (p.counts[1], len(edges), p.counts[2] + p.counts[0])))


def halved(p: FacePoset, check: bool = True) -> FacePoset:
    """Generalized halving of a bipartite map of type {2p,q} on its yellow vertices."""
    _need_rank(p, 3, "halving")
    kind = schlafli_type(p)
    if kind is None or kind[0] % 2:
        raise PolytopeError(f"halving needs an equivelar map of type {{2p,q}}, got {kind}")
    colour = edge_bipartition(p)
    if colour is None:
        raise PolytopeError("edge graph is not bipartite")
    if check and not symmetry.transitivity(p, 0, "face"):
        raise PolytopeError("map is not vertex-transitive")
    half = kind[0] // 2
    yellow = np.flatnonzero(colour == 0)
    vnew = {int(v): k for k, v in enumerate(yellow)}
    ends = _edge_ends(p)
    # an edge of the result for every red corner: the two yellow neighbours of the corner
    corner_edges = {}
    for (v, f), (e1, e2) in _corners(p).items():
        if colour[v] == 1:
            y1 = ends[e1][0] if ends[e1][1] == v else ends[e1][1]
            y2 = ends[e2][0] if ends[e2][1] == v else ends[e2][1]
            corner_edges[(v, f)] = tuple(sorted((vnew[y1], vnew[y2])))
    if half == 2:
        # a square face has two red corners spanning the same diagonal; no digon facets
        key = {c: c[1] for c in corner_edges}
        edges = [None] * p.counts[2]
        for c, pair in corner_edges.items():
            edges[c[1]] = list(pair)
        faces_red = [[] for _ in range(p.counts[0])]
        for (v, f) in corner_edges:
            faces_red[v].append(key[(v, f)])
        facets = [sorted(set(x)) for v, x in enumerate(faces_red) if colour[v] == 1]
    else:
        index = {c: k for k, c in enumerate(corner_edges)}
        edges = [list(pair) for pair in corner_edges.values()]
        faces_red = [[] for _ in range(p.counts[0])]
        faces_old = [[] for _ in range(p.counts[2])]
        for (v, f), k in index.items():
            faces_red[v].append(k)
            faces_old[f].append(k)
        facets = [x for v, x in enumerate(faces_red) if colour[v] == 1] + faces_old
    return _validated(build_poset(3, [edges, facets], (len(yellow), len(edges), len(facets))))


# ---------------------------------------------------------------------------
# 2^K


def _compress(values, keep_mask, nbits):
    """Pack the bits of ``values`` selected by ``keep_mask`` into the low bits (order kept)."""
    out = np.zeros_like(values)
    k = 0
    for b in range(nbits):
        if keep_mask >> b & 1:
            out |= ((values >> b) & 1) << k
            k += 1
    return out


def _subsets(mask):
    """All submasks of ``mask``, increasing."""
    bits = [b for b in range(mask.bit_length()) if mask >> b & 1]
    subs = np.zeros(1 << len(bits), dtype=INDEX)
    for k, b in enumerate(bits):
        subs[1 << k: 2 << k] = subs[: 1 << k] | (1 << b)
    return np.sort(subs)


def _free_vectors(fixed_mask, nbits):
    """All vectors that vanish on ``fixed_mask``, in increasing compressed order."""
    return _subsets(((1 << nbits) - 1) & ~fixed_mask)


def two_power(k: FacePoset, check: bool = True, max_vertices: Optional[int] = None) -> FacePoset:
    """Faces are pairs (face F of k, 0/1 vector on the vertices outside F)."""
    limit = config.MAX_TWO_POWER_VERTICES if max_vertices is None else max_vertices
    v = k.counts[0]
    if v > limit:
        raise PolytopeError(f"{v} vertices exceeds the limit {limit} (raise max_vertices to override)")
    if not is_describable(k, "vertex"):
        raise PolytopeError("input is not vertex-describable")
    n = k.rank + 1
    sets = vertex_sets(k)
    masks = [np.zeros(0, dtype=INDEX)] + [
        np.asarray([sum(1 << u for u in sets[(r, f)]) for f in k.faces(r)], dtype=INDEX) for r in range(k.rank)]
    # masks[j] holds the vertex masks of the faces of k that index rank-j faces of the result
    masks[0] = np.zeros(1, dtype=INDEX)  # the empty face of k
    offsets, counts = [], []
    for j in range(n):
        sizes = np.asarray([1 << (v - int(m).bit_count()) for m in masks[j]], dtype=INDEX)
        offsets.append(np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(INDEX))
        counts.append(int(sizes.sum()))
    covers = [None]
    for j in range(1, n):
        level = []
        lower_ranks = k.covers[j - 1] if j >= 2 else None
        for f, fmask in enumerate(masks[j]):
            fmask = int(fmask)
            eps = _free_vectors(fmask, v)
            below = lower_ranks[f] if lower_ranks is not None else [0]
            cols = []
            for g in below:
                gmask = int(masks[j - 1][g])
                ext = _subsets(fmask & ~gmask)
                full = (eps[:, None] | ext[None, :]).ravel()
                cols.append((offsets[j - 1][g] + _compress(full, ((1 << v) - 1) & ~gmask, v)).reshape(len(eps), -1))
            block = np.concatenate(cols, axis=1)
            level.extend(map(tuple, block.tolist()))
        covers.append(level)
    out = _validated(build_poset(n, covers[1:], counts))
    if check:
        got = symmetry.automorphisms(out).order
        want = (1 << v) * symmetry.automorphisms(k).order
        if got != want:
            raise AssertionError(f"group order {got}, expected 2^{v} * |Aut(K)| = {want}")
    return out


def chiral_extension(q: FacePoset, check: bool = True, max_vertices: Optional[int] = None) -> FacePoset:
    """Dual of 2^(dual q): every facet is a copy of ``q``."""
    if symmetry.flag_orbits(q).verdict != "chiral":
        raise PolytopeError("input is not chiral")
    if not is_describable(q, "facet"):
        raise PolytopeError("input is not facet-describable")
    return dual(two_power(dual(q), check=check, max_vertices=max_vertices))


# ---------------------------------------------------------------------------
# alternating rank-4 construction


@dataclass
class AlternatingPreconditionReport:
    bipartite: bool
    vertex_describable_P: bool
    vertex_describable_L: bool
    opposite_vertex_clash: Optional[tuple] = None  # (2-face, 2-face, shared opposite pair)
    squares: bool = True
    facets_vertex_transitive: bool = True

    @property
    def ok(self):
        return (self.bipartite and self.vertex_describable_P and self.vertex_describable_L
                and self.opposite_vertex_clash is None and self.squares and self.facets_vertex_transitive)

    def lines(self):
        out = [f"bipartite {str(self.bipartite).lower()}",
               f"vertex-describable {str(self.vertex_describable_P).lower()}",
               f"vertex-figures vertex-describable {str(self.vertex_describable_L).lower()}",
               f"square 2-faces {str(self.squares).lower()}",
               f"vertex-transitive facets {str(self.facets_vertex_transitive).lower()}"]
        if self.opposite_vertex_clash is not None:
            a, b, pair = self.opposite_vertex_clash
            out.append(f"opposite-vertex clash: 2-faces {a} and {b} share opposite vertices {pair}")
        return out


def _square_diagonals(p: FacePoset):
    """For every square 2-face, its two opposite-vertex pairs; ``None`` if some 2-face is not a square."""
    ends = _edge_ends(p)
    out = []
    for edges in p.covers[2]:
        if len(edges) != 4:
            return None
        nbr = {}
        for e in edges:
            a, b = ends[e]
            nbr.setdefault(a, set()).add(b)
            nbr.setdefault(b, set()).add(a)
        verts = sorted(nbr)
        a = verts[0]
        opp = next(x for x in verts if x != a and x not in nbr[a])
        rest = tuple(sorted(nbr[a]))
        out.append((tuple(sorted((a, opp))), rest))
    return out


def alternating_preconditions(p: FacePoset) -> AlternatingPreconditionReport:
    _need_rank(p, 4, "alternating construction")
    colour = edge_bipartition(p)
    vd_p = is_describable(p, "vertex")
    vd_l = all(is_describable(section(p, (0, v), None), "vertex") for v in p.faces(0))
    diagonals = _square_diagonals(p)
    clash = None
    if diagonals is not None:
        seen = {}
        for f, pairs in enumerate(diagonals):
            for pair in pairs:
                if pair in seen and clash is None:
                    clash = (seen[pair], f, pair)
                seen.setdefault(pair, f)
    transitive = all(symmetry.transitivity(section(p, None, (3, f)), 0, "face") for f in p.faces(3))
    return AlternatingPreconditionReport(colour is not None, vd_p, vd_l, clash, diagonals is not None, transitive)


def alternating(p: FacePoset) -> FacePoset:
    """Rank-4 polytope on the yellow vertices with halved facets and red vertex-figures."""
    report = alternating_preconditions(p)
    if not report.ok:
        raise PolytopeError("alternating construction preconditions fail: " + "; ".join(report.lines()))
    colour = edge_bipartition(p)
    yellow = np.flatnonzero(colour == 0)
    vnew = {int(v): k for k, v in enumerate(yellow)}
    diagonals = _square_diagonals(p)
    # edges: the yellow diagonal of each square 2-face
    edges = []
    for pairs in diagonals:
        pair = next(pr for pr in pairs if colour[pr[0]] == 0)
        edges.append(sorted(vnew[x] for x in pair))
    ends = _edge_ends(p)
    # 2-faces: (red vertex, facet) incidences; they contain the squares at that vertex in that facet
    squares_at = {}
    for s, edge_list in enumerate(p.covers[2]):
        for e in edge_list:
            for x in ends[e]:
                if colour[x] == 1:
                    squares_at.setdefault(x, set()).add(s)
    cells = {}
    for c, sq in enumerate(p.covers[3]):
        for s in sq:
            for x in {x for e in p.covers[2][s] for x in ends[e]}:
                if colour[x] == 1:
                    cells.setdefault((x, c), set()).add(s)
    two_faces = sorted(cells)
    index = {key: k for k, key in enumerate(two_faces)}
    faces2 = [sorted(cells[key]) for key in two_faces]
    first_kind = [[] for _ in range(p.counts[3])]
    second_kind = {}
    for (x, c), k in index.items():
        first_kind[c].append(k)
        second_kind.setdefault(x, []).append(k)
    facets = first_kind + [second_kind[x] for x in sorted(second_kind)]
    out = build_poset(4, [edges, faces2, facets], (len(yellow), len(edges), len(faces2), len(facets)))
    _check_vertex_set_incidence(out)
    return _validated(out)


def _check_vertex_set_incidence(p: FacePoset):
    """Faces must be distinct as vertex sets, and every incidence must be an inclusion.

    Inclusion can hold without incidence when the result is dense (a 2-face
    whose vertices also span edges of other 2-faces), so the converse is not
    required.
    """
    sets = vertex_sets(p)
    for r in range(1, p.rank):
        level = [sets[(r, f)] for f in p.faces(r)]
        if len(set(level)) != len(level):
            raise PolytopeError(f"two rank-{r} faces share a vertex set")
        for f, cov in enumerate(p.covers[r]):
            if any(not sets[(r - 1, g)] <= level[f] for g in cov):
                raise PolytopeError(f"face ({r},{f}) is incident to a face it does not contain")
