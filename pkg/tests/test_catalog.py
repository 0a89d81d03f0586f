import shutil

import pytest

import oracles
from heredpoly import catalog
from heredpoly.poset import isomorphic, validate


@pytest.mark.parametrize("name", catalog.catalog_names())
def test_entry_passes_its_assertions(name):
    p = catalog.catalog_get(name, check=False)
    assert validate(p).ok
    assert catalog.check_entry(name, p) == []


@pytest.mark.parametrize("b, c", [(1, 2), (1, 3), (2, 0), (2, 2), (2, 1)])
def test_square_tori_match_lattice_quotients(b, c):
    assert isomorphic(catalog.catalog_get(f"t44-{b}-{c}"), oracles.torus_44(b, c))


def test_cubic_torus_matches_lattice_quotient():
    assert isomorphic(catalog.catalog_get("t434-4-0-0"), oracles.cubic_torus(4))


def test_required_entries_present():
    names = set(catalog.catalog_names())
    for required in ("cube", "octahedron", "dodecahedron", "icosahedron", "cuboctahedron",
                     "icosidodecahedron", "truncated-tetrahedron", "hemicube", "t63-2-2", "n98-6",
                     "u5512", "t434-4-0-0", "chiral-4413", "chiral-4413-mirror"):
        assert required in names


def test_parametric_and_alias_entries():
    assert catalog.catalog_get("polygon-7").flag_count == 14
    assert catalog.catalog_get("simplex-4").counts == (5, 10, 10, 5)
    assert catalog.catalog_get("square").counts == (4, 4)


def test_unknown_name():
    with pytest.raises(catalog.CatalogError, match="unknown"):
        catalog.catalog_get("tesseract-of-doom")
    with pytest.raises(catalog.CatalogError):
        catalog.presentation_path("cube")


def test_directory_override(tmp_path, monkeypatch):
    shutil.copytree(catalog.catalog_dir() / "groups", tmp_path / "groups")
    (tmp_path / "catalog.yaml").write_text(
        "entries:\n"
        "  cube:\n    source: \"hull:cube\"\n    expect: {flags: 48}\n"
        "  wrong:\n    source: \"grp:groups/hemicube.grp\"\n    expect: {order: 23}\n")
    monkeypatch.setenv(catalog.ENV_VAR, str(tmp_path))
    assert catalog.catalog_names() == ["cube", "wrong"]
    assert catalog.catalog_get("cube").flag_count == 48
    with pytest.raises(catalog.CatalogError, match="order: expected 23, got 24"):
        catalog.catalog_get("wrong")
