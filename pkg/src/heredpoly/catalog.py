"""Named polytopes: combinatorial families, convex polyhedra, and group presentations.

Entries and their expected invariants are listed in ``catalog.yaml`` in the
catalog directory (the packaged ``data`` directory unless
``HEREDPOLY_CATALOG`` points elsewhere).
"""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import yaml
from scipy.spatial import ConvexHull

from . import symmetry
from .io import read_poset
from .poset import FacePoset, PolytopeError, build_poset, poset_from_flag_graph, schlafli_type, validate
from .presentation import build_flag_graph, read_presentation

ENV_VAR = "HEREDPOLY_CATALOG"


class CatalogError(LookupError):
    pass


def catalog_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else Path(__file__).with_name("data")


# ---------------------------------------------------------------------------
# combinatorial families


def polygon(m: int) -> FacePoset:
    if m < 2:
        raise PolytopeError("a polygon needs at least 2 vertices")
    return build_poset(2, [[(i, (i + 1) % m) for i in range(m)]])


def simplex(n: int) -> FacePoset:
    """The n-simplex (rank n): faces are the nonempty proper vertex subsets."""
    if n < 1:
        raise PolytopeError("simplex rank must be positive")
    if n == 1:
        return FacePoset(1, (2,), (((), ()),))
    levels = [[frozenset([v]) for v in range(n + 1)]]
    covers = []
    for r in range(1, n):
        index = {f: k for k, f in enumerate(levels[-1])}
        faces = [frozenset(c) for c in itertools.combinations(range(n + 1), r + 1)]
        covers.append([[index[f - {v}] for v in sorted(f)] for f in faces])
        levels.append(faces)
    return build_poset(n, covers)


# ---------------------------------------------------------------------------
# convex polyhedra from coordinates

PHI = (1 + 5 ** 0.5) / 2


def _signs(point):
    point = np.asarray(point, dtype=float)
    nz = np.flatnonzero(point)
    for s in itertools.product((1, -1), repeat=len(nz)):
        q = point.copy()
        q[nz] *= s
        yield q


def _cyclic(points):
    return [np.roll(p, k) for p in points for k in range(3)]


def _unique_points(points):
    pts = np.unique(np.round(np.asarray(points, dtype=float), 9), axis=0)
    return pts


def _coordinates(name):
    if name == "cube":
        return list(_signs((1, 1, 1)))
    if name == "octahedron":
        return [q for p in _cyclic([(1, 0, 0)]) for q in _signs(p)]
    if name == "icosahedron":
        return [q for p in _cyclic([(0, 1, PHI)]) for q in _signs(p)]
    if name == "dodecahedron":
        return list(_signs((1, 1, 1))) + [q for p in _cyclic([(0, 1 / PHI, PHI)]) for q in _signs(p)]
    if name == "cuboctahedron":
        return [q for p in _cyclic([(1, 1, 0)]) for q in _signs(p)]
    if name == "icosidodecahedron":
        return ([q for p in _cyclic([(0, 0, PHI)]) for q in _signs(p)]
                + [q for p in _cyclic([(0.5, PHI / 2, PHI * PHI / 2)]) for q in _signs(p)])
    if name == "truncated-tetrahedron":
        pts = [p for perm in itertools.permutations((3, 1, 1)) for p in _signs(perm)]
        return [p for p in pts if np.sum(p < 0) % 2 == 0]
    raise KeyError(name)


HULL_NAMES = ("cube", "octahedron", "icosahedron", "dodecahedron", "cuboctahedron",
              "icosidodecahedron", "truncated-tetrahedron")


def hull_polyhedron(points) -> FacePoset:
    """Face lattice of the convex hull of ``points`` (coplanar facets merged)."""
    pts = _unique_points(points)
    hull = ConvexHull(pts)
    planes = np.round(hull.equations, 6)
    _, group = np.unique(planes, axis=0, return_inverse=True)
    group = group.ravel()
    edge_count = {}
    for s, tri in enumerate(hull.simplices):
        for a, b in ((0, 1), (1, 2), (0, 2)):
            key = (group[s],) + tuple(sorted((int(tri[a]), int(tri[b]))))
            edge_count[key] = edge_count.get(key, 0) + 1
    boundary = sorted({k[1:] for k, c in edge_count.items() if c == 1})
    edge_index = {e: i for i, e in enumerate(boundary)}
    faces = [[] for _ in range(group.max() + 1)]
    for k, c in edge_count.items():
        if c == 1:
            faces[k[0]].append(edge_index[k[1:]])
    faces = sorted(sorted(f) for f in faces)
    return build_poset(3, [boundary, faces], (len(pts), len(boundary), len(faces)))


# ---------------------------------------------------------------------------
# registry


@dataclass
class CatalogEntry:
    name: str
    source: str
    expected: dict = field(default_factory=dict)
    note: str = ""


_PARAMETRIC = {
    "polygon": (re.compile(r"polygon-(\d+)$"), polygon),
    "simplex": (re.compile(r"simplex-(\d+)$"), simplex),
}
_ALIASES = {"triangle": "polygon-3", "square": "polygon-4", "pentagon": "polygon-5",
            "hexagon": "polygon-6", "tetrahedron": "simplex-3", "segment": "simplex-1"}


@lru_cache(maxsize=None)
def _manifest(directory: str):
    path = Path(directory) / "catalog.yaml"
    if not path.exists():
        return {}
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    out = {}
    for name, item in (data.get("entries") or {}).items():
        out[name] = CatalogEntry(name, item["source"], dict(item.get("expect") or {}), item.get("note", ""))
    return out


def catalog_entries():
    return dict(_manifest(str(catalog_dir())))


def catalog_names():
    return list(catalog_entries())


def catalog_entry(name: str) -> CatalogEntry:
    name = _ALIASES.get(name, name)
    entries = catalog_entries()
    if name in entries:
        return entries[name]
    for kind, (pattern, _) in _PARAMETRIC.items():
        if pattern.match(name):
            return CatalogEntry(name, f"{kind}:{pattern.match(name).group(1)}")
    raise CatalogError(f"unknown catalog entry {name!r}")


def presentation_path(name: str) -> Path:
    entry = catalog_entry(name)
    if not entry.source.startswith("grp:"):
        raise CatalogError(f"{name!r} is not built from a presentation")
    return catalog_dir() / entry.source[4:]


def _build(entry: CatalogEntry) -> FacePoset:
    kind, _, arg = entry.source.partition(":")
    if kind == "polygon":
        return polygon(int(arg))
    if kind == "simplex":
        return simplex(int(arg))
    if kind == "hull":
        return hull_polyhedron(_coordinates(arg))
    if kind == "grp":
        return poset_from_flag_graph(build_flag_graph(read_presentation(catalog_dir() / arg)))
    if kind == "apoly":
        return read_poset(catalog_dir() / arg)
    raise CatalogError(f"{entry.name}: unknown source kind {kind!r}")


@lru_cache(maxsize=64)
def _cached(name: str, directory: str) -> FacePoset:
    return _build(catalog_entry(name))


def catalog_get(name: str, check: bool = True) -> FacePoset:
    name = _ALIASES.get(name, name)
    p = _cached(name, str(catalog_dir()))
    if check:
        problems = check_entry(name, p)
        if problems:
            raise CatalogError(f"{name}: " + "; ".join(problems))
    return p


def observed(p: FacePoset, keys) -> dict:
    """Compute the invariants named in ``keys`` (the keys used in catalog assertions)."""
    out = {}
    for key in keys:
        if key == "flags":
            out[key] = p.flag_count
        elif key == "counts":
            out[key] = list(p.counts)
        elif key == "order":
            out[key] = symmetry.automorphisms(p).order
        elif key == "k":
            out[key] = symmetry.flag_orbits(p).k
        elif key == "class":
            cls = symmetry.flag_orbits(p).class_I
            out[key] = None if cls is None else list(cls)
        elif key == "type":
            t = schlafli_type(p)
            out[key] = None if t is None else list(t)
        elif key == "hereditary":
            out[key] = symmetry.is_hereditary(p)
        else:
            raise CatalogError(f"unknown assertion key {key!r}")
    return out


def check_entry(name: str, p: FacePoset = None) -> list:
    entry = catalog_entry(name)
    if p is None:
        p = _cached(entry.name, str(catalog_dir()))
    if not validate(p).ok:
        return ["not a valid polytope"]
    got = observed(p, entry.expected)
    return [f"{k}: expected {entry.expected[k]!r}, got {got[k]!r}"
            for k in entry.expected if got[k] != entry.expected[k]]
