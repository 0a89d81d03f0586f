"""Numbered acceptance criteria, runnable from the CLI and from the test suite.

Each criterion returns a list of ``Check`` rows; a criterion passes when all
of its rows do.  Slow rows are skipped unless ``slow=True``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import catalog, constructions as cons, symmetry as sym
from .poset import is_describable, isomorphic, schlafli_type, section
from .presentation import coset_enumerate, read_presentation


@dataclass
class Check:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    budget: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks) and self.seconds <= self.budget

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        bad = [c for c in self.checks if not c.passed]
        extra = f" ({bad[0].label}: {bad[0].detail})" if bad else ""
        if self.seconds > self.budget:
            extra += f" (over time budget {self.budget:g} s)"
        return f"criterion {self.number} {status} {self.title} [{self.seconds:.1f} s]{extra}"


def _expect(label, got, want):
    return Check(label, got == want, f"expected {want!r}, got {got!r}")


def _classification(p):
    o = sym.flag_orbits(p)
    return o.k, o.class_I


def _facets(p):
    return [section(p, None, (p.rank - 1, f)) for f in p.faces(p.rank - 1)]


# ---------------------------------------------------------------------------
# criteria


def medial_suite(slow=False):
    out = []
    cube = catalog.catalog_get("cube")
    m = cons.medial(cube)
    out.append(Check("medial(cube) is the cuboctahedron", isomorphic(m, catalog.catalog_get("cuboctahedron"))))
    out.append(_expect("medial(cube) orbits", _classification(m), (2, (0, 1))))
    out.append(_expect("medial(cube) hereditary", sym.is_hereditary(m), True))
    m = cons.medial(catalog.catalog_get("dodecahedron"))
    out.append(Check("medial(dodecahedron) is the icosidodecahedron",
                     isomorphic(m, catalog.catalog_get("icosidodecahedron"))))
    out.append(_expect("medial(dodecahedron) orbits", _classification(m), (2, (0, 1))))
    out.append(_expect("medial(dodecahedron) hereditary", sym.is_hereditary(m), True))
    m = cons.medial(catalog.catalog_get("tetrahedron"))
    out.append(_expect("medial(tetrahedron) verdict", sym.flag_orbits(m).verdict, "regular"))
    return out


def n98_suite(slow=False):
    p = catalog.catalog_get("n98-6")
    out = [_expect("N98.6 type", schlafli_type(p), (5, 5)), _expect("N98.6 flags", p.flag_count, 1920)]
    m = cons.medial(p)
    out.append(_expect("medial type", schlafli_type(m), (5, 4)))
    out.append(_expect("medial group order", sym.automorphisms(m).order, 1920))
    out.append(_expect("medial flags", m.flag_count, 3840))
    out.append(_expect("medial orbits", _classification(m), (2, (0, 1))))
    out.append(_expect("medial hereditary", sym.is_hereditary(m), True))
    out.append(_expect("medial regular", sym.flag_orbits(m).verdict == "regular", False))
    return out


def universal_cosets_suite(slow=False):
    pres = read_presentation(catalog.presentation_path("u5512"))
    table = coset_enumerate(pres, [])
    return [_expect("cosets over the trivial subgroup", table.coset_count, 30720)]


def rank3_instances():
    """Rank-3 catalog entries plus constructed polyhedra."""
    items = [(n, catalog.catalog_get(n)) for n in catalog.catalog_names()]
    items = [(n, p) for n, p in items if p.rank == 3]
    items.append(("tetrahedron", catalog.catalog_get("tetrahedron")))
    items.append(("medial(n98-6)", cons.medial(catalog.catalog_get("n98-6"))))
    items.append(("medial(t44-1-2)", cons.medial(catalog.catalog_get("t44-1-2"))))
    items.append(("halved(t63-2-2)", cons.halved(catalog.catalog_get("t63-2-2"))))
    items.append(("halved(t44-2-2)", cons.halved(catalog.catalog_get("t44-2-2"))))
    return items


def rank3_hereditary_suite(slow=False):
    out = []
    for name, p in rank3_instances():
        k, cls = _classification(p)
        rhs = k == 1 or (k == 2 and cls == (0, 1))
        out.append(_expect(f"{name}: hereditary iff regular or class {{0,1}}", sym.is_hereditary(p), rhs))
    return out


def two_power_suite(slow=False):
    out = [Check("2^triangle is the cube",
                 isomorphic(cons.two_power(catalog.catalog_get("triangle")), catalog.catalog_get("cube")))]
    out.append(_expect("|Aut(2^square)|", sym.automorphisms(cons.two_power(catalog.catalog_get("square"))).order, 128))
    out.append(_expect("2^cuboctahedron orbits",
                       _classification(cons.two_power(catalog.catalog_get("cuboctahedron"))), (2, (0, 1, 2))))
    out.append(_expect("2^(chiral torus) orbits",
                       _classification(cons.two_power(catalog.catalog_get("t44-1-2"))), (2, (0,))))
    return out


def smallest_chiral_toroid():
    """The facet-describable chiral {4,4} toroid with the fewest flags."""
    names = [n for n in catalog.catalog_names() if n.startswith("t44-")]
    candidates = []
    for n in names:
        q = catalog.catalog_get(n)
        if sym.flag_orbits(q).verdict == "chiral" and is_describable(q, "facet"):
            candidates.append((q.flag_count, n))
    return min(candidates)[1]


def extension_suite(slow=False):
    name = smallest_chiral_toroid()
    q = catalog.catalog_get(name)
    e = cons.chiral_extension(q)
    f = q.counts[-1]
    out = [Check(f"input {name}", True)]
    out.append(_expect("hereditary", sym.is_hereditary(e), True))
    out.append(_expect("orbits", _classification(e), (2, (3,))))
    out.append(Check("all facets isomorphic to the input", all(isomorphic(s, q) for s in _facets(e))))
    out.append(_expect("group order", sym.automorphisms(e).order, 2 ** f * sym.automorphisms(q).order))
    return out


def truncated_tetrahedron_suite(slow=False):
    tt = catalog.catalog_get("truncated-tetrahedron")
    out = [_expect("k", sym.flag_orbits(tt).k, 3),
           _expect("1-face hereditary", sym.j_face_hereditary(tt, 1), True),
           _expect("2-face hereditary", sym.j_face_hereditary(tt, 2), False),
           _expect("hereditary", sym.is_hereditary(tt), False),
           _expect("chirally hereditary", sym.chirally_hereditary(tt), False)]
    if slow:
        x = cons.two_power(tt)
        out.append(_expect("2^tt 2-face hereditary", sym.j_face_hereditary(x, 2), True))
        out.append(_expect("2^tt 3-face hereditary", sym.j_face_hereditary(x, 3), False))
        facets = _facets(x)
        cube = catalog.catalog_get("cube")
        hexagon_power = cons.two_power(catalog.catalog_get("hexagon"))
        small = [s for s in facets if s.flag_count == 48]
        big = [s for s in facets if s.flag_count == 768]
        out.append(_expect("2^tt facet flag counts", sorted({s.flag_count for s in facets}), [48, 768]))
        out.append(Check("48-flag facets are cubes", all(isomorphic(s, cube) for s in small)))
        out.append(Check("768-flag facets are 2^hexagon", all(isomorphic(s, hexagon_power) for s in big)))
    return out


def _edge_facet_alternation(pa):
    """Every edge lies in 4 facets, and the two facets at each 2-face around it differ in kind."""
    n = pa.rank
    kind = [section(pa, None, (n - 1, f)).flag_count for f in pa.faces(n - 1)]
    if len(set(kind)) != 2:
        return False
    for e in pa.faces(1):
        if section(pa, (1, e), None).counts != (4, 4):
            return False
        for g in pa.covered_by[1][e]:
            a, b = pa.covered_by[2][g]
            if kind[a] == kind[b]:
                return False
    return True


def alternating_suite(slow=False):
    out = []
    p = catalog.catalog_get("t434-4-0-0")
    pa = cons.alternating(p)
    types = sorted({schlafli_type(s) for s in _facets(pa)})
    out.append(_expect("facet types", types, [(3, 3), (3, 4)]))
    cubo = catalog.catalog_get("cuboctahedron")
    out.append(Check("vertex-figures are cuboctahedra",
                     all(isomorphic(section(pa, (0, v), None), cubo) for v in pa.faces(0))))
    out.append(_expect("flag count", pa.flag_count, p.flag_count))
    out.append(Check("every edge in 4 alternating facets", _edge_facet_alternation(pa)))
    out.append(_expect("hereditary", sym.is_hereditary(pa), True))
    if slow:
        c = catalog.catalog_get("chiral-4413")
        out.append(_expect("input vertices/facets", (c.counts[0], c.counts[3]), (50, 50)))
        out.append(_expect("input group order", sym.automorphisms(c).order, 2000))
        ca = cons.alternating(c)
        out.append(_expect("hereditary", sym.is_hereditary(ca), True))
        out.append(_expect("k", sym.flag_orbits(ca).k, 4))
        facets = _facets(ca)
        kinds = [facets[0], facets[-1]]
        out.append(Check("facets chiral", all(sym.flag_orbits(s).verdict == "chiral" for s in facets)))
        out.append(Check("two facet kinds not isomorphic", not isomorphic(*kinds)))
        out.append(Check("facet kinds are {4,4}_(1,3) and {4,4}_(1,2)",
                         sorted(s.flag_count for s in kinds) == [40, 80]
                         and isomorphic(kinds[1], catalog.catalog_get("t44-1-3"))
                         and isomorphic(kinds[0], catalog.catalog_get("t44-1-2"))))
        report = cons.alternating_preconditions(catalog.catalog_get("chiral-4413-mirror"))
        out.append(Check("mirror variant rejected by opposite-vertex clash",
                         report.opposite_vertex_clash is not None, "; ".join(report.lines())))
    return out


# ---------------------------------------------------------------------------
# property suites


def property_instances():
    """Catalog entries plus instances produced by the constructions."""
    items = [(n, catalog.catalog_get(n)) for n in catalog.catalog_names()]
    items += [(n, catalog.catalog_get(n)) for n in ("triangle", "square", "pentagon", "hexagon", "tetrahedron",
                                                    "simplex-4")]
    items.append(("medial(n98-6)", cons.medial(catalog.catalog_get("n98-6"))))
    items.append(("2^cuboctahedron", cons.two_power(catalog.catalog_get("cuboctahedron"))))
    items.append(("2^t44-1-2", cons.two_power(catalog.catalog_get("t44-1-2"))))
    items.append(("extension(t44-1-2)", cons.chiral_extension(catalog.catalog_get("t44-1-2"))))
    items.append(("extension(t44-1-3)", cons.chiral_extension(catalog.catalog_get("t44-1-3"))))
    items.append(("alternating(t434)", cons.alternating(catalog.catalog_get("t434-4-0-0"))))
    items.append(("alternating(chiral-4413)", cons.alternating(catalog.catalog_get("chiral-4413"))))
    return items


def _free_action(p):
    group = sym.automorphisms(p)
    ident = np.arange(p.flag_count)
    no_fixed = all(not np.any(g == ident) for g in group.generators)
    return no_fixed and group.order * sym.flag_orbits(p).k == p.flag_count


def property_suite(slow=False):
    out = []
    for name, p in property_instances():
        out.append(Check(f"{name}: free action and |Aut|*k = flags", _free_action(p)))
        if p.rank < 2:
            continue
        # exercises the closure assertion on every facet section
        try:
            results = sym.facet_results(p, method="full")
            out.append(Check(f"{name}: extendable sets closed", True))
        except AssertionError as exc:
            out.append(Check(f"{name}: extendable sets closed", False, str(exc)))
            continue
        hereditary = all(r.extends for r in results)
        facets = _facets(p) if p.rank >= 3 else []
        if hereditary and facets:
            for i in range(p.rank - 1):
                for mode in ("chain", "face"):
                    if all(sym.transitivity(f, i, mode) for f in facets):
                        out.append(Check(f"{name}: {mode} transitivity lifts at rank {i}",
                                         sym.transitivity(p, i, mode)))
            verdicts = {sym.flag_orbits(f).verdict for f in facets}
            if verdicts <= {"regular", "chiral"}:
                out.append(Check(f"{name}: facets not mixed regular and chiral", verdicts != {"regular", "chiral"}))
            if verdicts == {"regular"}:
                out.append(_oddq(name, p))
                k, cls = _classification(p)
                out.append(Check(f"{name}: regular-facetted hereditary is regular or class 0..n-2",
                                 k == 1 or (k == 2 and cls == tuple(range(p.rank - 1)))))
            if verdicts == {"chiral"}:
                k, cls = _classification(p)
                ok = k in (2, 4) and (k == 4 or cls in ((), (p.rank - 1,)))
                out.append(Check(f"{name}: chiral-facetted orbit trichotomy", ok, f"k={k} class={cls}"))
        if facets and not hereditary and all(sym.flag_orbits(f).verdict == "regular" for f in facets):
            k, cls = _classification(p)
            out.append(Check(f"{name}: non-hereditary regular-facetted is neither regular nor class 0..n-2",
                             not (k == 1 or (k == 2 and cls == tuple(range(p.rank - 1))))))
    return out


def _oddq(name, p):
    n = p.rank
    odd = False
    for f in p.faces(n - 3) if n >= 3 else []:
        if section(p, (n - 3, f), None).counts[0] % 2:
            odd = True
            break
    if not odd:
        return Check(f"{name}: odd co-face gon forces regularity (not applicable)", True)
    return Check(f"{name}: odd co-face gon forces regularity", sym.flag_orbits(p).verdict == "regular")


CRITERIA = [
    (1, "medial suite", medial_suite, 1.0),
    (2, "N98.6 and its medial", n98_suite, 10.0),
    (3, "universal {5,5|12} coset count", universal_cosets_suite, 60.0),
    (4, "rank-3 hereditary characterisation", rank3_hereditary_suite, 30.0),
    (5, "2^K suite", two_power_suite, 60.0),
    (6, "chiral extension", extension_suite, 120.0),
    (7, "truncated tetrahedron suite", truncated_tetrahedron_suite, 30 * 60.0),
    (8, "alternating suite", alternating_suite, 30 * 60.0),
    (9, "property suites", property_suite, 600.0),
]


def run_criterion(number, slow=False) -> CriterionResult:
    for num, title, fn, budget in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                checks = fn(slow=slow)
            except Exception as exc:  # a crash is a failed criterion, reported rather than raised
                checks = [Check("raised", False, f"{type(exc).__name__}: {exc}")]
            title = title + (" (with slow checks)" if slow and num in (7, 8) else "")
            return CriterionResult(num, title, checks, time.perf_counter() - start, budget)
    raise KeyError(number)


def run_all(slow=False):
    return [run_criterion(num, slow) for num, *_ in CRITERIA]
