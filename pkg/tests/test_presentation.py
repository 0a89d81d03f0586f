import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heredpoly import constructions as cons
from heredpoly.catalog import catalog_get, presentation_path
from heredpoly.poset import PolytopeError, isomorphic, poset_from_flag_graph
from heredpoly.presentation import (CosetLimitError, PresentationError, build_flag_graph, coset_enumerate,
                                    enantiomorph, flag_graph_from_reflection_group,
                                    flag_graph_from_rotation_group, format_word, halving, invert,
                                    parse_presentation, parse_word, read_presentation, reduce_word)
from heredpoly.symmetry import flag_orbits


def coxeter(p, q, extra=""):
    return parse_presentation(f"cgroup 1\nkind reflection\nrank 3\nauto-relators on\n"
                              f"rel (g0 g1)^{p}\nrel (g1 g2)^{q}\n{extra}")


def test_parse_word_forms():
    assert parse_word("g0 g1") == ((0, 1), (1, 1))
    assert parse_word("g1'") == ((1, -1),)
    assert parse_word("(g0 g1)^2") == ((0, 1), (1, 1)) * 2
    assert parse_word("(g1 g2)'") == ((2, -1), (1, -1))
    assert parse_word("g2^-2") == ((2, -1), (2, -1))
    assert parse_word("") == ()


@pytest.mark.parametrize("text, fragment", [
    ("^3", "power without base"),
    ("g1 ^", "power without exponent"),
    ("(g1 g2", "unbalanced '('"),
    ("g1)", "unbalanced ')'"),
    ("g1 * g2", "unknown token"),
])
def test_parse_word_errors(text, fragment):
    with pytest.raises(PresentationError, match=re.escape(fragment)):
        parse_word(text)


words = st.lists(st.tuples(st.integers(0, 3), st.sampled_from([1, -1])), max_size=12).map(tuple)


@settings(max_examples=100, deadline=None)
@given(words)
def test_word_algebra(w):
    r = reduce_word(w)
    assert reduce_word(r + invert(r)) == ()
    assert reduce_word(r) == r
    assert parse_word(format_word(w)) == w or reduce_word(parse_word(format_word(w))) == r


@pytest.mark.parametrize("p, q, order", [(3, 3, 24), (4, 3, 48), (5, 3, 120), (3, 5, 120), (2, 7, 28)])
def test_finite_coxeter_orders(p, q, order):
    assert coset_enumerate(coxeter(p, q), []).coset_count == order


def test_subgroup_index():
    pres = coxeter(4, 3)
    assert coset_enumerate(pres, [parse_word("g0"), parse_word("g1")]).coset_count == 6  # faces of the cube
    assert coset_enumerate(pres, [parse_word("g1"), parse_word("g2")]).coset_count == 8  # vertices


def test_infinite_group_hits_limit():
    with pytest.raises(CosetLimitError):
        coset_enumerate(coxeter(4, 4), [], limit=10**5)


def test_enumeration_is_deterministic():
    pres = read_presentation(presentation_path("n98-6"))
    a, b = coset_enumerate(pres, []), coset_enumerate(pres, [])
    assert a.digest() == b.digest()
    assert a.coset_count == 1920 and a.complete


def test_u5512_count():
    assert coset_enumerate(read_presentation(presentation_path("u5512")), []).coset_count == 30720


@pytest.mark.parametrize("text, line, fragment", [
    ("cgroup 1\nkind mirror\n", 2, "unknown kind"),
    ("cgroup 1\nkind reflection\nrank 3\nrel g0 g9 ^\n", 4, "power without exponent"),
    ("cgroup 1\nfoo\n", 2, "unknown directive"),
    ("cgroup 2\n", 1, "unsupported version"),
])
def test_presentation_errors_with_line(text, line, fragment):
    with pytest.raises(PresentationError, match=f"line {line}: .*{fragment}"):
        parse_presentation(text)


def test_presentation_structural_errors():
    with pytest.raises(PresentationError, match="header"):
        parse_presentation("kind reflection\nrank 3\n")
    with pytest.raises(PresentationError, match="not available"):
        parse_presentation("cgroup 1\nkind rotation\nrank 3\nauto-relators on\nrel g0^2\n")
    with pytest.raises(PresentationError, match="mandatory"):
        parse_presentation("cgroup 1\nkind reflection\nrank 3\nrel (g0 g1)^4\nrel (g1 g2)^3\n")
    with pytest.raises(PresentationError, match="period"):
        parse_presentation("cgroup 1\nkind reflection\nrank 3\nauto-relators on\nrel (g0 g1)^4\n")


def test_text_round_trip():
    pres = read_presentation(presentation_path("t44-1-2"))
    again = parse_presentation(pres.to_text())
    assert coset_enumerate(again, []).digest() == coset_enumerate(pres, []).digest()


def test_order_assertion_checked(tmp_path):
    pres = coxeter(4, 3)
    pres.order = 47
    with pytest.raises(PresentationError, match="expected 47"):
        build_flag_graph(pres)


def test_reflection_flag_graph_is_cube(get):
    p = poset_from_flag_graph(build_flag_graph(coxeter(4, 3)))
    assert isomorphic(p, get("cube"))


def test_rotation_group_of_tetrahedron(get):
    pres = parse_presentation("cgroup 1\nkind rotation\nrank 3\nauto-relators on\nrel g1^3\nrel g2^3\n")
    p = poset_from_flag_graph(build_flag_graph(pres))
    assert p.flag_count == 24
    assert isomorphic(p, get("tetrahedron"))


def test_non_polytopal_quotient_rejected():
    # {4,4}_(1,1): two squares on a torus, a degenerate map
    with pytest.raises(PolytopeError):
        build_flag_graph(coxeter(4, 4, "rel (g0 g1 g2)^2\n"))


def test_enantiomorph_of_chiral_torus(get):
    pres = read_presentation(presentation_path("t44-1-2"))
    mirror = enantiomorph(pres)
    assert coset_enumerate(mirror, []).coset_count == 20
    p = poset_from_flag_graph(build_flag_graph(mirror))
    assert isomorphic(p, get("t44-2-1"))
    assert flag_orbits(p).verdict == "chiral"
    with pytest.raises(PresentationError):
        enantiomorph(coxeter(4, 3))


@pytest.mark.parametrize("name", ["cube", "t44-2-2", "t44-1-3"])
@pytest.mark.parametrize("variant", ["eta", "eta0"])
def test_group_halving_matches_combinatorial_halving(name, variant):
    if name == "cube":
        pres = coxeter(4, 3)
    else:
        pres = read_presentation(presentation_path(name))
    group = coset_enumerate(pres, []).group()
    half = halving(group, variant)
    assert 2 * half.order() == group.order()
    build = flag_graph_from_reflection_group if group.kind == "reflection" else flag_graph_from_rotation_group
    q = poset_from_flag_graph(build(half))
    assert isomorphic(q, cons.halved(catalog_get(name)))


def test_halving_preconditions():
    with pytest.raises(PresentationError, match="4"):
        halving(coset_enumerate(coxeter(3, 3), []).group())
    odd = coset_enumerate(read_presentation(presentation_path("t44-1-2")), []).group()
    with pytest.raises(PresentationError, match="bipartite"):
        halving(odd)
    with pytest.raises(PresentationError):
        halving(odd, "zeta")


def test_permutation_group_words():
    group = coset_enumerate(coxeter(4, 3), []).group()
    ident = np.arange(group.degree)
    assert np.array_equal(group.word(parse_word("(g0 g1)^4")), ident)
    assert not np.array_equal(group.word(parse_word("(g0 g1)^2")), ident)
    assert group.order() == 48
