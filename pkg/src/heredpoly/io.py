"""Reading and writing the line-oriented ``.apoly`` polytope format.

::

    apoly 1
    rank 3
    count 0 8
    count 1 12
    count 2 6
    f 1 0: 0 1
    ...

Readers accept faces in any order; the writer emits canonical order.
"""
from __future__ import annotations

import os

from .poset import FacePoset, PolytopeError, build_poset, canonical


class FormatError(ValueError):
    def __init__(self, message, line=None, path=None):
        where = "" if line is None else f"line {line}: "
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.line = line


def parse_poset(text: str, path=None) -> FacePoset:
    rank = None
    counts = {}
    covers = {}
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()

        def fail(msg):
            return FormatError(msg, lineno, path)

        if not header:
            if fields != ["apoly", "1"]:
                raise fail("expected header 'apoly 1'")
            header = True
            continue
        try:
            if fields[0] == "rank":
                if len(fields) != 2:
                    raise fail("expected 'rank <n>'")
                rank = int(fields[1])
            elif fields[0] == "count":
                if len(fields) != 3:
                    raise fail("expected 'count <rank> <size>'")
                counts[int(fields[1])] = int(fields[2])
            elif fields[0] == "f":
                head, sep, tail = line[1:].partition(":")
                if not sep:
                    raise fail("expected 'f <rank> <index>: <covered indices>'")
                i, f = (int(x) for x in head.split())
                if rank is None or not 1 <= i < rank:
                    raise fail(f"face rank {i} out of range")
                if i - 1 not in counts or i not in counts:
                    raise fail(f"count for rank {i - 1} or {i} not declared before faces")
                if not 0 <= f < counts[i]:
                    raise fail(f"face index {f} out of range for rank {i}")
                cov = [int(x) for x in tail.split()]
                bad = [g for g in cov if not 0 <= g < counts[i - 1]]
                if bad:
                    raise fail(f"dangling index {bad[0]} (rank {i - 1} has {counts[i - 1]} faces)")
                if (i, f) in covers:
                    raise fail(f"face ({i},{f}) given twice")
                covers[(i, f)] = cov
            else:
                raise fail(f"unknown directive {fields[0]!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise fail(f"malformed number ({exc})") from None
    if not header:
        raise FormatError("empty file", path=path)
    if rank is None:
        raise FormatError("missing rank", path=path)
    missing = [i for i in range(rank) if i not in counts]
    if missing:
        raise FormatError(f"missing count for rank {missing[0]}", path=path)
    levels = []
    for i in range(1, rank):
        level = []
        for f in range(counts[i]):
            if (i, f) not in covers:
                raise FormatError(f"face ({i},{f}) has no 'f' line", path=path)
            level.append(covers[(i, f)])
        levels.append(level)
    try:
        if rank == 1:
            return FacePoset(1, (counts[0],), (((),) * counts[0],))
        return build_poset(rank, levels, [counts[i] for i in range(rank)])
    except PolytopeError as exc:
        raise FormatError(str(exc), path=path) from None


def format_poset(p: FacePoset) -> str:
    p = canonical(p)
    lines = ["apoly 1", f"rank {p.rank}"]
    lines += [f"count {i} {m}" for i, m in enumerate(p.counts)]
    for i in range(1, p.rank):
        for f, cov in enumerate(p.covers[i]):
            lines.append(f"f {i} {f}: " + " ".join(map(str, cov)))
    return "\n".join(lines) + "\n"


def read_poset(path) -> FacePoset:
    with open(path) as fh:
        return parse_poset(fh.read(), path=os.fspath(path))


def write_poset(p: FacePoset, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_poset(p))
