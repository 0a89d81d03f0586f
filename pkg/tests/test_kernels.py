import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from heredpoly import kernels
from heredpoly.catalog import catalog_get


@settings(max_examples=60, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 40), st.integers(1, 4)), elements=st.integers(-5, 5)))
def test_row_ids_match_numpy_unique(rows):
    _, want = np.unique(rows, axis=0, return_inverse=True)
    assert np.array_equal(kernels.row_ids(rows), want.ravel())
    assert np.array_equal(kernels.unique_rows(rows), np.unique(rows, axis=0))


def test_row_ids_survive_wide_keys():
    rng = np.random.default_rng(7)
    rows = rng.integers(0, 2**40, size=(200, 5))
    rows[100:] = rows[:100]
    ids = kernels.row_ids(rows)
    assert np.array_equal(ids[:100], ids[100:])
    assert len(np.unique(ids)) == 100


def _random_involutions(rng, size, count):
    out = []
    for _ in range(count):
        perm = rng.permutation(size)
        inv = np.arange(size)
        a, b = perm[0::2], perm[1::2]
        inv[a], inv[b] = b, a
        out.append(inv)
    return np.stack(out).astype(np.int64)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 30), st.integers(1, 3))
def test_components_match_scipy(seed, half, count):
    rng = np.random.default_rng(seed)
    adj = _random_involutions(rng, 2 * half, count)
    ranks = list(range(count - 1)) or [0]
    got = kernels.components(adj, ranks)
    rows = np.concatenate([np.arange(2 * half)] * len(ranks))
    cols = np.concatenate([adj[r] for r in ranks])
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(2 * half, 2 * half))
    _, want = connected_components(graph, directed=False)
    # same partition: labels correspond one-to-one
    pairs = set(zip(got.tolist(), want.tolist()))
    assert len(pairs) == len(set(got.tolist())) == len(set(want.tolist()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 50))
def test_merge_labels_is_orbit_closure(seed, size):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(size).astype(np.int64)
    labels = np.arange(size, dtype=np.int64)
    got = kernels.merge_labels(labels, perm)
    for x in range(size):
        cycle, y = {x}, perm[x]
        while y != x:
            cycle.add(int(y))
            y = perm[y]
        assert got[x] == min(cycle)


def test_cycle_lengths():
    perm = np.array([1, 2, 0, 4, 3, 5])
    assert kernels.cycle_lengths(perm).tolist() == [3, 3, 3, 2, 2, 1]


def test_extend_gives_automorphism_or_none():
    adj = catalog_get("cube").graph.adj
    for dst in range(adj.shape[1]):
        m = kernels.extend(adj, adj, 0, dst)
        assert m is not None  # the cube is regular
        assert np.array_equal(np.sort(m), np.arange(adj.shape[1]))
        for i in range(adj.shape[0]):
            assert np.array_equal(m[adj[i]], adj[i][m])
    adj = catalog_get("truncated-tetrahedron").graph.adj
    failures = sum(kernels.extend(adj, adj, 0, dst) is None for dst in range(adj.shape[1]))
    assert failures == adj.shape[1] - 24


def test_refine_colors_is_invariant():
    adj = catalog_get("cuboctahedron").graph.adj
    colors = kernels.refine_colors(adj, np.zeros(adj.shape[1], dtype=np.int64))
    assert len(np.unique(colors)) <= 2


_PROBE = """
import json
from heredpoly import backend, catalog, symmetry
from heredpoly.presentation import coset_enumerate, read_presentation
pres = read_presentation(catalog.presentation_path("t434-4-0-0"))
table = coset_enumerate(pres, [])
cube = catalog.catalog_get("cuboctahedron")
print(json.dumps({"backend": backend(), "digest": table.digest(),
                  "order": symmetry.automorphisms(cube).order, "hereditary": symmetry.is_hereditary(cube)}))
"""


def _probe(flag):
    env = dict(os.environ, HEREDPOLY_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", _PROBE], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


@pytest.mark.slow
def test_backends_agree_bit_for_bit():
    fast, slow = _probe("0"), _probe("1")
    assert fast["backend"] == "numba" and slow["backend"] == "numpy"
    assert fast["digest"] == slow["digest"]
    assert fast["order"] == slow["order"] == 48
    assert fast["hereditary"] is slow["hereditary"] is True
