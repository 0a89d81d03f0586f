"""Automorphism groups, flag orbits, and hereditary predicates.

An automorphism is determined by the image of a single flag, so the group
is stored as a generating set plus the orbit of a base flag.  Generators
are found by extending ``base -> candidate`` over the flag graph; a failed
candidate rules out its whole orbit under the group found so far.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import config, kernels
from .poset import FacePoset, FlagGraph, PolytopeError, flag_colors

INDEX = np.int64


def _graph(x) -> FlagGraph:
    return x.graph if isinstance(x, FacePoset) else x


@dataclass(eq=False)
class AutomorphismGroup:
    flag_count: int
    base_flag: int
    generators: list
    labels: np.ndarray  # orbit label (least flag) of every flag under the group
    adj: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return int(np.count_nonzero(self.labels == self.labels[self.base_flag]))

    @property
    def base_orbit(self) -> np.ndarray:
        return np.flatnonzero(self.labels == self.labels[self.base_flag])

    def element(self, image) -> np.ndarray:
        """The automorphism sending the base flag to ``image``, as a flag permutation."""
        m = kernels.extend(self.adj, self.adj, self.base_flag, int(image))
        if m is None:
            raise ValueError(f"no automorphism maps {self.base_flag} to {image}")
        return m

    def elements(self):
        for image in self.base_orbit:
            yield self.element(image)

    def same_orbit(self, x, y) -> bool:
        return self.labels[x] == self.labels[y]


def automorphisms(fg, base: int = 0) -> AutomorphismGroup:
    fg = _graph(fg)
    key = ("aut", base)
    if key in fg._cache:
        return fg._cache[key]
    adj = fg.adj
    size = fg.flag_count
    colors = flag_colors(adj)
    labels = np.arange(size, dtype=INDEX)
    gens = []
    failed = []  # one representative flag per orbit known not to contain an image of base
    failed_roots = set()
    for cand in np.flatnonzero(colors == colors[base]):
        root = labels[cand]
        if root == labels[base] or root in failed_roots:
            continue
        m = kernels.extend(adj, adj, base, int(cand))
        if m is None:
            failed.append(int(cand))
            failed_roots.add(root)
            continue
        gens.append(m)
        labels = kernels.merge_labels(labels, m)
        failed_roots = {labels[f] for f in failed}
    group = AutomorphismGroup(size, base, gens, labels, adj)
    fg._cache[key] = group
    return group


@dataclass
class OrbitClassification:
    k: int
    orbit_of: np.ndarray
    class_I: Optional[tuple]
    verdict: str

    def class_text(self):
        if not self.class_I:
            return "none"
        return ",".join(str(i) for i in self.class_I)


def flag_orbits(fg) -> OrbitClassification:
    fg = _graph(fg)
    group = automorphisms(fg)
    labels = group.labels
    roots = np.unique(labels)
    k = len(roots)
    if k * group.order != fg.flag_count:
        raise AssertionError("automorphism action is not free")
    class_I = None
    if k == 2:
        members = []
        for i in range(fg.rank):
            same = labels[fg.adj[i]] == labels
            if same.all():
                members.append(i)
            elif same.any():
                raise AssertionError(f"class membership of rank {i} varies between flags")
        class_I = tuple(members)
    if k == 1:
        verdict = "regular"
    elif k == 2 and not class_I:
        verdict = "chiral"
    else:
        verdict = f"{k}-orbit"
    return OrbitClassification(k, labels, class_I, verdict)


def _transitive_on(keys, labels, base_labels) -> bool:
    ids = kernels.row_ids(keys)
    hit = np.zeros(ids.max() + 1, dtype=bool)
    hit[ids[np.isin(labels, base_labels)]] = True
    return bool(hit.all())


def transitivity(fg, i: int, mode: str = "face") -> bool:
    """Transitivity on rank-``i`` faces (``face``) or on chains of type {0..i} (``chain``)."""
    fg = _graph(fg)
    if not 0 <= i < fg.rank:
        raise ValueError(f"rank {i} out of range")
    faces = fg.face_labels()
    labels = automorphisms(fg).labels
    if mode == "face":
        keys = faces[:, [i]]
    elif mode == "chain":
        keys = faces[:, : i + 1]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    base_labels = np.unique(labels[np.all(keys == keys[0], axis=1)])
    return _transitive_on(keys, labels, base_labels)


# ---------------------------------------------------------------------------
# section extension tests


@dataclass
class SectionResult:
    lower: Optional[tuple]
    upper: Optional[tuple]
    group_order: int
    extendable_order: int
    rotation_order: int = 0
    rotation_extendable: int = 0
    section_orbits: int = 1
    witness: Optional[int] = None  # image of the base flag under a non-extending automorphism

    @property
    def extends(self):
        return self.extendable_order == self.group_order

    @property
    def rotations_extend(self):
        return self.rotation_extendable == self.rotation_order


def _sub_graph(adj, flags, ranks):
    flags = np.sort(flags)
    local = np.stack([np.searchsorted(flags, adj[r][flags]) for r in ranks]) if ranks else np.zeros((0, 1), INDEX)
    return flags, FlagGraph(local.astype(INDEX))


def _parity(sub: FlagGraph):
    """Proper 2-colouring of the section flag graph, or ``None`` if it has odd cycles."""
    size = sub.flag_count
    idx = np.arange(size)
    rows = np.concatenate([idx] * sub.rank)
    cols = np.concatenate(list(sub.adj))
    # bipartite double cover: flag x -> (x, colour); the graph is bipartite iff the cover splits
    g = coo_matrix((np.ones(2 * rows.size, np.int8),
                    (np.concatenate((rows, rows + size)), np.concatenate((cols + size, cols)))),
                   shape=(2 * size, 2 * size))
    ncomp, comp = connected_components(g, directed=False)
    if ncomp == 1:
        return None
    return (comp[:size] != comp[0]).astype(np.int8)


def _assert_closed(group: AutomorphismGroup, images, sample: int = 32):
    """Check that the automorphisms sending the base flag into ``images`` form a subgroup."""
    inside = np.zeros(group.flag_count, dtype=bool)
    inside[images] = True
    if not inside[group.base_flag]:
        raise AssertionError("identity missing from extendable set")
    picks = images[np.linspace(0, len(images) - 1, min(sample, len(images))).astype(INDEX)]
    for a in picks:
        g = group.element(a)
        for b in picks:
            if not inside[g[b]]:
                raise AssertionError("extendable automorphisms not closed under composition")
        if not inside[np.flatnonzero(g == group.base_flag)[0]]:
            raise AssertionError("extendable automorphisms not closed under inversion")


class _Sections:
    """Shared machinery for testing sections ``G/F`` with rank(F)=lo, rank(G)=hi."""

    def __init__(self, fg: FlagGraph, lo: int, hi: int):
        self.fg = fg
        self.lo, self.hi = lo, hi
        n = fg.rank
        self.inner = list(range(lo + 1, hi))
        self.outer = [r for r in range(n) if r < lo or r > hi]
        self.group = automorphisms(fg)
        faces = fg.face_labels()
        bound = [r for r in (lo, hi) if 0 <= r < n]
        if bound:
            keys = faces[:, bound]
            self.sid = kernels.row_ids(keys)
        else:
            self.sid = np.zeros(fg.flag_count, dtype=INDEX)
        self.nsections = int(self.sid.max()) + 1
        first = np.full(self.nsections, fg.flag_count, dtype=INDEX)
        np.minimum.at(first, self.sid, np.arange(fg.flag_count, dtype=INDEX))
        self.first = first
        self.inner_comp = kernels.components(fg.adj, self.inner)
        self.outer_comp = kernels.components(fg.adj, self.outer)

    def refs(self, s):
        x = self.first[s]
        faces = self.fg.face_labels()
        n = self.fg.rank
        lower = (self.lo, int(faces[x, self.lo])) if self.lo >= 0 else None
        upper = (self.hi, int(faces[x, self.hi])) if self.hi < n else None
        return lower, upper

    def orbit_reps(self):
        """Representative section per orbit of the automorphism group, and the rep of each section."""
        ns = self.nsections
        if not self.group.generators:
            reps = np.arange(ns)
            return reps, reps
        rows = np.concatenate([self.sid for _ in self.group.generators])
        cols = np.concatenate([self.sid[g] for g in self.group.generators])
        g = coo_matrix((np.ones(rows.size, np.int8), (rows, cols)), shape=(ns, ns))
        _, comp = connected_components(g, directed=False)
        least = np.full(comp.max() + 1, ns, dtype=INDEX)
        np.minimum.at(least, comp, np.arange(ns, dtype=INDEX))
        return np.unique(least), least[comp]

    def test(self, s, strong=False, method="auto", rotations=False) -> SectionResult:
        fg = self.fg
        base = int(self.first[s])
        flags = np.flatnonzero(self.inner_comp == self.inner_comp[base])
        flags, sub = _sub_graph(fg.adj, flags, self.inner)
        sgroup = automorphisms(sub) if sub.rank else None
        images_local = sgroup.base_orbit if sgroup is not None else np.array([0])
        order = len(images_local)
        labels = self.group.labels
        target = labels[base]

        if strong:
            def ok(psi):
                return labels[psi] == target
        else:
            outer_comp = self.outer_comp
            members = {}

            def ok(psi):
                c = outer_comp[psi]
                if c not in members:
                    members[c] = np.any(labels[outer_comp == c] == target)
                return bool(members[c])

        if method == "auto":
            method = "full" if order <= config.FULL_SECTION_GROUP_LIMIT else "generators"
        witness = None
        if method == "full":
            good = np.fromiter((ok(flags[t]) for t in images_local), dtype=bool, count=order)
            ext = int(good.sum())
            if sgroup is not None:
                _assert_closed(sgroup, images_local[good])
            if ext < order:
                witness = int(flags[images_local[np.argmin(good)]])
        elif method == "generators":
            ext = order
            for gen in (sgroup.generators if sgroup is not None else []):
                psi = int(flags[gen[0]])
                cands = [psi] if strong else np.flatnonzero(self.outer_comp == self.outer_comp[psi])
                if not any(kernels.extend(fg.adj, fg.adj, base, int(c)) is not None for c in cands):
                    witness = psi
                    break
            if witness is not None:
                ext = int(sum(ok(flags[t]) for t in images_local))
        else:
            raise ValueError(f"unknown method {method!r}")

        result = SectionResult(*self.refs(s), order, ext, witness=witness,
                               section_orbits=sub.flag_count // order)
        if rotations:
            parity = _parity(sub)
            rot = images_local if parity is None else images_local[parity[images_local] == parity[0]]
            result.rotation_order = len(rot)
            result.rotation_extendable = int(sum(ok(flags[t]) for t in rot))
        return result

    def run(self, strong=False, method="auto", rotations=False, stop_early=False):
        reps, rep_of = self.orbit_reps()
        done = {}
        for s in reps:
            done[int(s)] = self.test(int(s), strong, method, rotations)
            if stop_early and not done[int(s)].extends:
                return [done[int(s)]], False
        out = []
        for s in range(self.nsections):
            r = done[int(rep_of[s])]
            lower, upper = self.refs(s)
            out.append(SectionResult(lower, upper, r.group_order, r.extendable_order, r.rotation_order,
                                     r.rotation_extendable, r.section_orbits,
                                     r.witness if s == rep_of[s] else None))
        return out, all(r.extends for r in done.values())


def facet_results(p, method="auto", rotations=True):
    fg = _graph(p)
    if fg.rank < 2:
        raise PolytopeError("hereditary tests need rank at least 2")
    results, _ = _Sections(fg, -1, fg.rank - 1).run(method=method, rotations=rotations)
    return results


def is_hereditary(p, method="auto") -> bool:
    fg = _graph(p)
    return _Sections(fg, -1, fg.rank - 1).run(method=method, stop_early=True)[1]


def j_face_hereditary(p, j: int, strong: bool = False, method="auto") -> bool:
    fg = _graph(p)
    if not 1 <= j <= fg.rank - 1:
        raise ValueError(f"j={j} out of range 1..{fg.rank - 1}")
    return _Sections(fg, -1, j).run(strong=strong, method=method, stop_early=True)[1]


def section_hereditary(p, i: int, j: int, strong: bool = False, method="auto") -> bool:
    fg = _graph(p)
    if not 0 <= i < j <= fg.rank - 1:
        raise ValueError(f"need 0 <= i < j <= {fg.rank - 1}, got ({i}, {j})")
    if j - i < 2:
        return True  # the section is a single flag
    return _Sections(fg, i, j).run(strong=strong, method=method, stop_early=True)[1]


def chirally_hereditary(p) -> bool:
    fg = _graph(p)
    if fg.rank < 2:
        raise PolytopeError("hereditary tests need rank at least 2")
    return all(r.rotations_extend for r in facet_results(fg, rotations=True))


@dataclass
class HereditaryReport:
    facet_hereditary: bool
    per_facet: list
    chirally_hereditary: bool
    j_face: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)


def hereditary_report(p, extended: bool = False, method="auto") -> HereditaryReport:
    """Facet-level report; ``extended`` adds every j-face and (i,j)-section predicate."""
    fg = _graph(p)
    per_facet = facet_results(fg, method=method)
    report = HereditaryReport(all(r.extends for r in per_facet), per_facet,
                              all(r.rotations_extend for r in per_facet))
    if extended:
        n = fg.rank
        for j in range(1, n):
            for strong in (False, True):
                report.j_face[(j, strong)] = j_face_hereditary(fg, j, strong, method)
        for i in range(n):
            for j in range(i + 1, n):
                for strong in (False, True):
                    report.sections[(i, j, strong)] = section_hereditary(fg, i, j, strong, method)
    return report


# ---------------------------------------------------------------------------
# reports


def analysis_lines(p, fmt="machine"):
    fg = _graph(p)
    orbits = flag_orbits(fg)
    facets = facet_results(fg, rotations=False)
    hered = all(r.extends for r in facets)
    verdict = orbits.verdict if orbits.verdict in ("regular", "chiral") else (
        "2-orbit" if orbits.k == 2 else orbits.verdict)
    if fmt == "machine":
        lines = [f"orbits k={orbits.k}", f"class I={orbits.class_text()}", f"verdict {verdict}",
                 f"hereditary {'true' if hered else 'false'}"]
        lines += [f"facet {r.upper[1]} group={r.group_order} extends={r.extendable_order}" for r in facets]
        return lines
    group = automorphisms(fg)
    lines = [f"flags: {fg.flag_count}", f"automorphism group order: {group.order}",
             f"flag orbits: {orbits.k}"]
    if orbits.k == 2:
        lines.append(f"class: 2_{{{orbits.class_text() if orbits.class_I else ''}}}")
    lines.append(f"verdict: {verdict}")
    lines.append(f"hereditary: {'yes' if hered else 'no'}")
    bad = [r for r in facets if not r.extends]
    if bad:
        lines.append(f"facets with non-extending automorphisms: {len(bad)} of {len(facets)}")
    return lines
