"""Group presentations, coset enumeration, and flag graphs built from groups.

Reflection presentations use generators ``g0..g{n-1}`` (all involutions);
rotation presentations use ``g1..g{n-1}``.  Words are tuples of
``(generator, exponent)`` pairs with exponent ``+1`` or ``-1``.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernels
from .poset import FlagGraph, FlagGraphError, PolytopeError, check_flag_graph, poset_from_flag_graph, validate

INDEX = np.int64
DEFAULT_LIMIT = 2_000_000


class PresentationError(ValueError):
    pass


class CosetLimitError(RuntimeError):
    """Coset enumeration defined more cosets than allowed."""


# ---------------------------------------------------------------------------
# words


def invert(word):
    return tuple((g, -e) for g, e in reversed(word))


def reduce_word(word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def substitute(word, images):
    """Replace each generator by a word (inverse letters by the inverted word)."""
    out = []
    for g, e in word:
        w = images.get(g, ((g, 1),))
        out.extend(w if e > 0 else invert(w))
    return reduce_word(out)


def format_word(word):
    return " ".join(f"g{g}" + ("'" if e < 0 else "") for g, e in word)


_TOKEN = re.compile(r"\s*(?:(g\d+)|(')|(\^\s*-?\d+)|(\()|(\))|(\^)|(\S))")


def parse_word(text: str):
    """Parse tokens ``gK``, ``gK'``, ``gK^m``, ``(w)^m``, ``(w)'``."""
    stack = [[]]
    last = None  # the most recent complete item, as (start index in current list)
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        gen, prime, power, lpar, rpar, bare, junk = m.groups()
        cur = stack[-1]
        if gen:
            last = len(cur)
            cur.append((int(gen[1:]), 1))
        elif lpar:
            stack.append([])
            last = None
        elif rpar:
            if len(stack) == 1:
                raise PresentationError(f"unbalanced ')' in {text!r}")
            inner = stack.pop()
            last = len(stack[-1])
            stack[-1].extend(inner)
        elif prime or power:
            if last is None:
                raise PresentationError(f"{'inverse' if prime else 'power'} without base in {text!r}")
            base = tuple(cur[last:])
            del cur[last:]
            if prime:
                cur.extend(invert(base))
            else:
                m_ = int(power[1:].strip())
                cur.extend((invert(base) if m_ < 0 else base) * abs(m_))
        elif bare:
            raise PresentationError(f"power without exponent in {text!r}")
        else:
            raise PresentationError(f"unknown token {junk!r} in {text!r}")
    if len(stack) != 1:
        raise PresentationError(f"unbalanced '(' in {text!r}")
    return tuple(stack[0])


# ---------------------------------------------------------------------------
# presentations


@dataclass
class GroupPresentation:
    kind: str  # "reflection" or "rotation"
    rank: int
    relators: list
    subgroup: list = field(default_factory=list)
    order: Optional[int] = None
    name: str = ""

    @property
    def generators(self):
        return list(range(self.rank)) if self.kind == "reflection" else list(range(1, self.rank))

    @property
    def ngens(self):
        return len(self.generators)

    def columns(self):
        """Column per generator letter and the column inverse map."""
        if self.kind == "reflection":
            col = {(g, e): g for g in self.generators for e in (1, -1)}
            inv = list(range(self.rank))
        else:
            col = {}
            for k, g in enumerate(self.generators):
                col[(g, 1)] = 2 * k
                col[(g, -1)] = 2 * k + 1
            inv = [c ^ 1 for c in range(2 * self.ngens)]
        return col, np.asarray(inv, dtype=INDEX)

    def to_text(self):
        lines = ["cgroup 1", f"kind {self.kind}", f"rank {self.rank}"]
        if self.order is not None:
            lines.append(f"order {self.order}")
        lines += [f"rel {format_word(r)}" for r in self.relators]
        lines += [f"sub {format_word(s)}" for s in self.subgroup]
        return "\n".join(lines) + "\n"


def mandatory_relators(kind, rank):
    rels = []
    if kind == "reflection":
        rels += [((g, 1), (g, 1)) for g in range(rank)]
        rels += [((i, 1), (j, 1)) * 2 for i in range(rank) for j in range(i + 2, rank)]
    else:
        for i in range(1, rank):
            for j in range(i + 1, rank):
                rels.append(tuple((g, 1) for g in range(i, j + 1)) * 2)
    return rels


def _cyclic_forms(word):
    w = reduce_word(word)
    forms = set()
    for x in (w, invert(w)):
        for s in range(max(len(x), 1)):
            forms.add(x[s:] + x[:s])
    return forms


def _is_power_of(word, base):
    word = reduce_word(word)
    for b in (base, invert(base)):
        if len(word) % len(b) == 0 and len(word) and any(
                f == b * (len(word) // len(b)) for f in _cyclic_forms(word)):
            return True
    return False


def _check_mandatory(pres: GroupPresentation):
    have = set()
    for r in pres.relators:
        have |= _cyclic_forms(r)
    for r in mandatory_relators(pres.kind, pres.rank):
        if reduce_word(r) not in have:
            raise PresentationError(f"missing mandatory relator {format_word(r)} (or use 'auto-relators on')")
    for i in range(1, pres.rank):
        base = ((i - 1, 1), (i, 1)) if pres.kind == "reflection" else ((i, 1),)
        if not any(_is_power_of(r, base) for r in pres.relators):
            raise PresentationError(f"no period relator ({format_word(base)})^p")


def parse_presentation(text: str, check: bool = True) -> GroupPresentation:
    kind = rank = order = None
    auto = False
    rels, subs = [], []
    name = ""
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "cgroup":
                if rest != "1":
                    raise PresentationError(f"unsupported version {rest!r}")
                seen_header = True
            elif key == "kind":
                if rest not in ("reflection", "rotation"):
                    raise PresentationError(f"unknown kind {rest!r}")
                kind = rest
            elif key == "rank":
                rank = int(rest)
            elif key == "order":
                order = int(rest)
            elif key == "name":
                name = rest
            elif key == "auto-relators":
                auto = rest == "on"
            elif key == "rel":
                rels.append(parse_word(rest))
            elif key == "sub":
                subs.append(parse_word(rest))
            else:
                raise PresentationError(f"unknown directive {key!r}")
        except (PresentationError, ValueError) as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if not seen_header:
        raise PresentationError("missing 'cgroup 1' header")
    if kind is None:
        raise PresentationError("missing kind")
    if rank is None or rank < 1:
        raise PresentationError("missing or invalid rank")
    pres = GroupPresentation(kind, rank, [], subs, order, name)
    valid = set(pres.generators)
    for w in rels + subs:
        for g, _ in w:
            if g not in valid:
                raise PresentationError(f"generator g{g} not available for {kind} rank {rank}")
    if auto:
        rels = mandatory_relators(kind, rank) + rels
    pres.relators = rels
    if check:
        _check_mandatory(pres)
    return pres


def read_presentation(path, check=True) -> GroupPresentation:
    with open(path) as fh:
        return parse_presentation(fh.read(), check=check)


# ---------------------------------------------------------------------------
# coset enumeration


@dataclass(eq=False)
class CosetTable:
    table: np.ndarray  # cosets x columns
    presentation: GroupPresentation
    cosets_defined: int

    @property
    def coset_count(self):
        return self.table.shape[0]

    @property
    def complete(self):
        return bool((self.table >= 0).all())

    def digest(self):
        return hashlib.sha256(np.ascontiguousarray(self.table).tobytes()).hexdigest()

    def permutation(self, gen, exponent=1):
        col, _ = self.presentation.columns()
        return self.table[:, col[(gen, exponent)]].copy()

    def group(self) -> "PermutationGroup":
        pres = self.presentation
        return PermutationGroup(self.coset_count, [self.permutation(g) for g in pres.generators], pres.kind)


def _encode(words, col, inv):
    """Freely reduce words in column space."""
    out = []
    for w in words:
        seq = []
        for letter in w:
            c = col[letter]
            if seq and seq[-1] == inv[c]:
                seq.pop()
            else:
                seq.append(c)
        out.append(seq)
    return out


def coset_enumerate(pres: GroupPresentation, subgroup=None, limit: int = DEFAULT_LIMIT) -> CosetTable:
    """Felsch-style enumeration; lexicographic (coset, column) definition order."""
    if limit < 1:
        raise ValueError("limit must be positive")
    col, inv = pres.columns()
    ncols = len(inv)
    subgroup = pres.subgroup if subgroup is None else subgroup
    conj = {}
    for seq in _encode(pres.relators, col, inv):
        while len(seq) > 1 and seq[0] == inv[seq[-1]]:
            seq = seq[1:-1]
        if not seq:
            continue
        back = [int(inv[c]) for c in reversed(seq)]
        for form in (seq, back):
            for s in range(len(form)):
                rot = tuple(form[s:] + form[:s])
                conj.setdefault(rot, None)
    ordered = sorted(conj, key=lambda w: w[0])  # stable: keeps input order within a column
    flat = [c for w in ordered for c in w]
    offs = np.cumsum([0] + [len(w) for w in ordered])
    col_ptr = np.searchsorted(np.asarray([w[0] for w in ordered], dtype=INDEX), np.arange(ncols + 1))
    subs = [s for s in _encode(subgroup, col, inv) if s]
    sub_flat = [c for s in subs for c in s]
    sub_off = np.cumsum([0] + [len(s) for s in subs])
    table, index, used = kernels.felsch(ncols, inv, flat, offs, col_ptr, sub_flat, sub_off, limit)
    if index < 0:
        raise CosetLimitError(f"coset limit {limit} exceeded (presentation may define an infinite group)")
    return CosetTable(table, pres, used)


# ---------------------------------------------------------------------------
# permutation groups and flag graphs


@dataclass(eq=False)
class PermutationGroup:
    """Distinguished generators acting freely (on the right) on ``degree`` points."""

    degree: int
    generators: list
    kind: str = "reflection"

    def word(self, word, offset=None):
        """Permutation of a word; ``offset`` maps generator names to positions (default by kind)."""
        perm = np.arange(self.degree, dtype=INDEX)
        for g, e in word:
            p = self.generators[g - (0 if self.kind == "reflection" else 1) if offset is None else offset[g]]
            if e < 0:
                q = np.empty_like(p)
                q[p] = np.arange(self.degree, dtype=INDEX)
                p = q
            perm = p[perm]
        return perm

    def orbit(self, point=0):
        """Points reachable from ``point``, in increasing order."""
        comp = kernels.components(np.stack(self.generators), range(len(self.generators)))
        return np.flatnonzero(comp == comp[point]).astype(INDEX)

    def order(self) -> int:
        """Group order; the action is free, so this is the length of an orbit."""
        return len(self.orbit())

    def restricted(self):
        """Generators restricted to the orbit of point 0, renumbered in orbit order."""
        pts = self.orbit()
        index = np.full(self.degree, -1, dtype=INDEX)
        index[pts] = np.arange(len(pts), dtype=INDEX)
        return [index[p[pts]] for p in self.generators]


def _checked(adj) -> FlagGraph:
    try:
        check_flag_graph(adj)
    except FlagGraphError as exc:
        raise PolytopeError(f"not a polytope flag graph: {exc}") from None
    fg = FlagGraph(adj)
    p = poset_from_flag_graph(fg)
    report = validate(p)
    if not report.ok:
        raise PolytopeError("non-polytopal: " + "; ".join(report.lines()))
    return fg


def flag_graph_from_reflection_group(group: PermutationGroup) -> FlagGraph:
    gens = group.restricted()
    for i, g in enumerate(gens):
        if (g[g] != np.arange(len(g))).any():
            raise PolytopeError(f"generator {i} is not an involution")
    return _checked(np.stack(gens))


def kappa_words(rank):
    """Words for the white-to-black and black-to-white adjacency multipliers."""
    white = [(), ((1, -1),)] + [tuple((g, 1) for g in range(1, i + 1)) for i in range(2, rank)]
    black = [(), ((1, 1),)] + [tuple((g, 1) for g in range(1, i + 1)) for i in range(2, rank)]
    return white[:rank], black[:rank]


def flag_graph_from_rotation_group(group: PermutationGroup) -> FlagGraph:
    rank = len(group.generators) + 1
    gens = group.restricted()
    local = PermutationGroup(len(gens[0]), gens, "rotation")
    size = local.degree
    white, black = kappa_words(rank)
    ident = np.arange(size, dtype=INDEX)
    adj = np.empty((rank, 2 * size), dtype=INDEX)
    for i in range(rank):
        kw, kb = local.word(white[i]), local.word(black[i])
        if (kb[kw] != ident).any():
            raise PresentationError(f"kappa relation fails at rank {i}: not a rotation presentation")
        adj[i, :size] = kw + size
        adj[i, size:] = kb
    return _checked(adj)


def build_flag_graph(pres: GroupPresentation, limit: int = DEFAULT_LIMIT) -> FlagGraph:
    table = coset_enumerate(pres, [], limit)
    if pres.order is not None and table.coset_count != pres.order:
        raise PresentationError(f"group order {table.coset_count}, expected {pres.order}")
    group = table.group()
    if pres.kind == "reflection":
        return flag_graph_from_reflection_group(group)
    return flag_graph_from_rotation_group(group)


# ---------------------------------------------------------------------------
# generator substitutions


def enantiomorph(pres: GroupPresentation) -> GroupPresentation:
    """Presentation on the mirror-image distinguished generators."""
    if pres.kind != "rotation":
        raise PresentationError("enantiomorph needs a rotation presentation")
    images = {1: ((1, -1),)}
    if pres.rank > 2:
        images[2] = ((1, 1), (1, 1), (2, 1))
    rels = [substitute(r, images) for r in pres.relators]
    # the new generators keep the periods of the old ones
    for g in (1, 2)[: pres.rank - 1]:
        for r in pres.relators:
            if _is_power_of(r, ((g, 1),)):
                rels.append(((g, 1),) * len(reduce_word(r)))
                break
    rels = mandatory_relators("rotation", pres.rank) + rels
    return replace(pres, relators=rels, subgroup=[substitute(s, images) for s in pres.subgroup],
                   name=pres.name + "-mirror" if pres.name else "")


HALVING_WORDS = {
    ("reflection", "eta"): [((0, 1), (1, 1), (0, 1)), ((2, 1),), ((1, 1),)],
    ("reflection", "eta0"): [((1, 1),), ((2, 1),), ((0, 1), (1, 1), (0, 1))],
    ("rotation", "eta"): [((1, 1), (1, 1), (2, 1)), ((2, -1),)],
    ("rotation", "eta0"): [((2, 1),), ((2, -1), (1, 1), (1, 1))],
}


def halving(group: PermutationGroup, variant: str = "eta") -> PermutationGroup:
    """New distinguished generators generating an index-2 subgroup of a {4,q} group."""
    key = (group.kind, variant)
    if key not in HALVING_WORDS:
        raise PresentationError(f"unknown halving variant {variant!r}")
    if len(group.generators) != (3 if group.kind == "reflection" else 2):
        raise PresentationError("halving needs a rank-3 group")
    face = group.word(((0, 1), (1, 1)) if group.kind == "reflection" else ((1, 1),))
    lengths = np.unique(kernels.cycle_lengths(face))
    if lengths.tolist() != [4]:
        raise PresentationError(f"type is not {{4,q}} (2-face period {lengths.tolist()})")
    new = PermutationGroup(group.degree, [group.word(w) for w in HALVING_WORDS[key]], group.kind)
    if 2 * new.order() != group.order():
        raise PresentationError("edge graph not bipartite: halving generators give the whole group")
    return new
