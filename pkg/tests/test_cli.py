import subprocess
import sys

import pytest

from heredpoly.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_cuboctahedron_file(capsys, tmp_path, data_dir):
    path = tmp_path / "co.apoly"
    assert run(capsys, "catalog", "show", "cuboctahedron", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    assert out.splitlines()[:4] == ["orbits k=2", "class I=0,1", "verdict 2-orbit", "hereditary true"]
    assert out == (data_dir / "cuboctahedron.machine").read_text()


def test_construct_then_analyze(capsys, tmp_path, data_dir):
    cube = data_dir / "cube.apoly"
    out_path = tmp_path / "medial.apoly"
    assert run(capsys, "construct", "medial", str(cube), "-o", str(out_path))[0] == 0
    code, out, _ = run(capsys, "analyze", str(out_path))
    assert out.splitlines()[:4] == ["orbits k=2", "class I=0,1", "verdict 2-orbit", "hereditary true"]


def test_text_report(capsys):
    code, out, _ = run(capsys, "analyze", "truncated-tetrahedron", "--report-format", "text")
    assert code == 0
    assert "flag orbits: 3" in out and "hereditary: no" in out


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", "cube")[0] == 0
    bad = tmp_path / "bowtie.apoly"
    bad.write_text("apoly 1\nrank 2\ncount 0 5\ncount 1 6\n"
                   "f 1 0: 0 1\nf 1 1: 1 2\nf 1 2: 0 2\nf 1 3: 0 3\nf 1 4: 3 4\nf 1 5: 0 4\n")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "invalid" in out
    malformed = tmp_path / "bad.apoly"
    malformed.write_text("apoly 1\nrank 2\ncount 0 3\ncount 1 3\nf 1 0: 0 9\n")
    code, _, err = run(capsys, "validate", str(malformed))
    assert code == 2 and ":5:" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    assert run(capsys, "analyze", "no-such-thing")[0] == 2


def test_construct_failures_exit_1(capsys):
    code, _, err = run(capsys, "construct", "alternating", "chiral-4413-mirror")
    assert code == 1 and "opposite-vertex clash" in err
    code, _, err = run(capsys, "construct", "halved", "tetrahedron")
    assert code == 1
    code, _, err = run(capsys, "construct", "twopower", "square", "--max-vertices", "2")
    assert code == 1 and "limit" in err


def test_construct_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "dual", "cube")
    assert code == 0 and out.startswith("apoly 1\nrank 3\ncount 0 6\n")


def test_group_commands(capsys, tmp_path):
    from heredpoly.catalog import presentation_path
    code, out, _ = run(capsys, "group", str(presentation_path("n98-6")), "--order")
    assert (code, out) == (0, "order 1920\n")
    target = tmp_path / "t.apoly"
    assert run(capsys, "group", str(presentation_path("t44-1-2")), "--build", "-o", str(target))[0] == 0
    assert run(capsys, "analyze", str(target))[1].startswith("orbits k=2\nclass I=none\nverdict chiral\n")
    code, _, err = run(capsys, "group", str(presentation_path("u5512")), "--order", "--limit", "1000")
    assert code == 1 and "limit" in err


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "n98-6\tgrp:groups/n98-6.grp" in out
    code, out, _ = run(capsys, "catalog", "check", "hemicube")
    assert (code, out) == (0, "hemicube: ok\n")


def test_machine_output_is_stable_across_processes():
    cmd = [sys.executable, "-m", "heredpoly.cli", "analyze", "t44-1-3"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and first.startswith("orbits k=2")
