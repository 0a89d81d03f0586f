import numpy as np
import pytest

import oracles
from heredpoly import constructions as cons
from heredpoly import symmetry as sym
from heredpoly.catalog import catalog_get, catalog_names
from heredpoly.poset import (PolytopeError, build_poset, dual, edge_bipartition, isomorphic, schlafli_type,
                             section)
from heredpoly.verify import _edge_facet_alternation

RANK3 = [n for n in catalog_names() if catalog_get(n).rank == 3 and n != "u5512"] + ["tetrahedron"]


def facets(p):
    return [section(p, None, (p.rank - 1, f)) for f in p.faces(p.rank - 1)]


def swap_vertices(p, a, b):
    """Relabel vertices ``a`` and ``b``."""
    perm = list(range(p.counts[0]))
    perm[a], perm[b] = b, a
    covers = [[[perm[v] for v in e] for e in p.covers[1]]] + [list(map(list, lvl)) for lvl in p.covers[2:]]
    return build_poset(p.rank, covers, p.counts)


# --- medial -----------------------------------------------------------------


@pytest.mark.parametrize("name", RANK3)
def test_medial_doubles_flags_and_tracks_self_duality(name):
    p = catalog_get(name)
    m = cons.medial(p)
    assert m.flag_count == 2 * p.flag_count
    assert m.counts[0] == p.counts[1]
    self_dual = isomorphic(p, dual(p))
    assert (sym.flag_orbits(m).verdict == "regular") == (self_dual and sym.flag_orbits(p).k == 1)
    if sym.flag_orbits(p).k == 1:
        factor = 2 if self_dual else 1
        assert sym.automorphisms(m).order == factor * sym.automorphisms(p).order


def test_medial_examples(get):
    assert isomorphic(cons.medial(get("cube")), get("cuboctahedron"))
    assert isomorphic(cons.medial(get("tetrahedron")), get("octahedron"))
    assert sym.automorphisms(cons.medial(get("n98-6"))).order == 1920
    with pytest.raises(PolytopeError, match="rank-3"):
        cons.medial(get("t434-4-0-0"))


# --- halving ----------------------------------------------------------------


def test_halved_cube_is_tetrahedron(get):
    assert isomorphic(cons.halved(get("cube")), get("tetrahedron"))


def test_halved_facet_types(get):
    h = cons.halved(get("t63-2-2"))
    assert sorted({f.counts[0] for f in facets(h)}) == [3]
    h = cons.halved(get("t44-2-2"))
    assert schlafli_type(h) == (4, 4)
    assert h.flag_count * 2 == get("t44-2-2").flag_count


@pytest.mark.parametrize("name", ["cube", "t44-2-2", "t63-2-2", "t44-1-3"])
def test_halved_colour_choice_is_immaterial(name):
    p = catalog_get(name)
    red = int(np.flatnonzero(edge_bipartition(p) == 1)[0])
    assert isomorphic(cons.halved(p), cons.halved(swap_vertices(p, 0, red)))


def test_halved_rejections(get):
    with pytest.raises(PolytopeError, match="2p"):
        cons.halved(get("tetrahedron"))
    with pytest.raises(PolytopeError, match="bipartite"):
        cons.halved(get("t44-1-2"))
    with pytest.raises(PolytopeError):
        cons.halved(get("t44-2-0"))  # the halves would form a degenerate map
    assert isomorphic(cons.halved(get("cube"), check=False), get("tetrahedron"))


# --- 2^K --------------------------------------------------------------------


def test_two_power_examples(get):
    assert isomorphic(cons.two_power(get("triangle")), get("cube"))
    sq = cons.two_power(get("square"))
    assert sq.counts[0] == 16
    assert sym.automorphisms(sq).order == 128


@pytest.mark.parametrize("name", ["triangle", "pentagon", "tetrahedron", "cube", "truncated-tetrahedron",
                                  "t44-1-2", "cuboctahedron"])
def test_two_power_invariants(name):
    k = catalog_get(name)
    x = cons.two_power(k)
    v = k.counts[0]
    assert x.counts[0] == 2 ** v
    assert x.flag_count == 2 ** v * k.flag_count
    assert sym.automorphisms(x).order == 2 ** v * sym.automorphisms(k).order
    ok, ox = sym.flag_orbits(k), sym.flag_orbits(x)
    assert ox.k == ok.k
    if ok.k == 2:
        assert ox.class_I == (0,) + tuple(i + 1 for i in ok.class_I)


def test_two_power_rejections(get):
    with pytest.raises(PolytopeError, match="vertex-describable"):
        cons.two_power(get("hemicube"))
    with pytest.raises(PolytopeError, match="limit"):
        cons.two_power(get("square"), max_vertices=3)
    with pytest.raises(PolytopeError, match="limit"):
        cons.two_power(get("icosidodecahedron"))


# --- chiral extension -------------------------------------------------------


def test_chiral_extension(get):
    q = get("t44-1-2")
    e = cons.chiral_extension(q)
    assert e.counts == (10, 80, 80, 32)
    o = sym.flag_orbits(e)
    assert (o.k, o.class_I) == (2, (3,))
    assert sym.is_hereditary(e)
    assert all(isomorphic(f, q) for f in facets(e))
    assert all(sym.flag_orbits(f).verdict == "chiral" for f in facets(e))
    assert sym.automorphisms(e).order == 2 ** q.counts[-1] * sym.automorphisms(q).order


def test_chiral_extension_rejections(get):
    with pytest.raises(PolytopeError, match="chiral"):
        cons.chiral_extension(get("cube"))


# --- alternating ------------------------------------------------------------


def test_alternating_cubic_torus(get):
    p = get("t434-4-0-0")
    pa = cons.alternating(p)
    assert pa.flag_count == p.flag_count
    assert sorted({schlafli_type(f) for f in facets(pa)}) == [(3, 3), (3, 4)]
    co = get("cuboctahedron")
    assert all(isomorphic(section(pa, (0, v), None), co) for v in pa.faces(0))
    assert _edge_facet_alternation(pa)
    assert sym.is_hereditary(pa)


def _colour_preserving_order(p):
    group = sym.automorphisms(p)
    colour = edge_bipartition(p)
    flags = p.flags
    v = flags[group.base_flag, 0]
    return sum(colour[flags[img, 0]] == colour[v] for img in group.base_orbit)


def test_alternating_chiral_toroid(get):
    p = get("chiral-4413")
    pa = cons.alternating(p)
    assert pa.flag_count == p.flag_count
    assert sym.flag_orbits(pa).k == 4
    assert sym.is_hereditary(pa)
    kinds = {}
    for f in facets(pa):
        kinds.setdefault(f.flag_count, f)
        assert sym.flag_orbits(f).verdict == "chiral"
    assert sorted(kinds) == [40, 80]
    assert not isomorphic(*kinds.values())
    assert _edge_facet_alternation(pa)
    ratio = sym.automorphisms(pa).order / _colour_preserving_order(p)
    assert ratio in (1, 2)


def test_alternating_preconditions(get):
    report = cons.alternating_preconditions(get("chiral-4413-mirror"))
    assert report.bipartite and not report.ok
    assert report.opposite_vertex_clash is not None
    assert any("opposite-vertex clash" in line for line in report.lines())
    with pytest.raises(PolytopeError, match="opposite-vertex"):
        cons.alternating(get("chiral-4413-mirror"))
    with pytest.raises(PolytopeError, match="rank-4"):
        cons.alternating(get("cube"))
    assert cons.alternating_preconditions(get("t434-4-0-0")).ok
