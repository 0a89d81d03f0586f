import pytest

from heredpoly.io import FormatError, format_poset, parse_poset, read_poset, write_poset
from heredpoly.poset import canonical, isomorphic


def test_cube_matches_golden_file(get, data_dir):
    assert format_poset(get("cube")) == (data_dir / "cube.apoly").read_text()


def test_round_trip(get, tmp_path):
    for name in ("cube", "t44-1-2", "t434-4-0-0", "segment"):
        p = get(name)
        path = tmp_path / f"{name}.apoly"
        write_poset(p, path)
        q = read_poset(path)
        assert q == canonical(p)
        assert format_poset(q) == path.read_text()


def test_reader_accepts_any_order(data_dir):
    lines = (data_dir / "cube.apoly").read_text().splitlines()
    shuffled = lines[:5] + list(reversed(lines[5:]))
    text = "# comment first\n" + "\n".join(shuffled) + "\n"
    p = parse_poset(text)
    assert isomorphic(p, read_poset(data_dir / "cube.apoly"))


TRIANGLE = "apoly 1\nrank 2\ncount 0 3\ncount 1 3\nf 1 0: 0 1\nf 1 1: 1 2\nf 1 2: 2 {last}\n"


def test_triangle_parses():
    assert parse_poset(TRIANGLE.format(last=0)).flag_count == 6


@pytest.mark.parametrize("text, line, fragment", [
    (TRIANGLE.format(last=7), 7, "dangling index 7"),
    ("apoly 2\n", 1, "header"),
    ("apoly 1\nrank 2\ncount 0 3\nf 1 0: 0 1\n", 4, "count for rank"),
    (TRIANGLE.format(last=0) + "f 1 2: 2 0\n", 8, "given twice"),
    ("apoly 1\nrank x\n", 2, "malformed number"),
    ("apoly 1\nrank 2\nbogus 1\n", 3, "unknown directive"),
    ("apoly 1\nrank 2\ncount 0 3\ncount 1 3\nf 1 5: 0 1\n", 5, "out of range"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatError) as info:
        parse_poset(text, path="x.apoly")
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"x.apoly:{line}:")


def test_missing_face_line():
    with pytest.raises(FormatError, match="no 'f' line"):
        parse_poset("apoly 1\nrank 2\ncount 0 3\ncount 1 3\nf 1 0: 0 1\n")


def test_non_polytope_is_reported_by_validation_not_parser():
    from heredpoly.poset import validate
    p = parse_poset("apoly 1\nrank 2\ncount 0 4\ncount 1 4\nf 1 0: 0 1\nf 1 1: 0 2\nf 1 2: 0 3\nf 1 3: 1 2\n")
    assert not validate(p).ok
