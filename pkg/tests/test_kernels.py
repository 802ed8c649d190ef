"""Kernel-level checks: JIT/fallback equivalence and layout relabeling."""

import os
import subprocess
import sys
import textwrap

import numpy as np

import oracles
from castnet import _kernels
from castnet.centrality import _locality_layout
from conftest import make_graph

SCRIPT = textwrap.dedent(
    """
    import random, sys
    import numpy as np
    sys.path.insert(0, {tests_dir!r})
    import oracles
    from castnet.centrality import betweenness_centrality, closeness_centrality
    from castnet.graph import CoGraph

    rng = random.Random(12345)
    n = 60
    edges = oracles.random_graph(rng, n, 0.12)
    g = CoGraph.from_weighted_edges(
        [f"a{{i:02d}}" for i in range(n)], [(u, v, 1) for u, v in edges]
    )
    b = betweenness_centrality(g, threads=2).scores
    c = closeness_centrality(g, threads=2).scores
    print(b.tobytes().hex())
    print(c.tobytes().hex())
    """
)


def _run_scores(disable_jit: bool) -> list[str]:
    env = dict(os.environ)
    if disable_jit:
        env["NUMBA_DISABLE_JIT"] = "1"
    else:
        env.pop("NUMBA_DISABLE_JIT", None)
    script = SCRIPT.format(tests_dir=os.path.dirname(__file__))
    proc = subprocess.run(
        [sys.executable, "-c", script],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return proc.stdout.strip().splitlines()


def test_jit_and_pure_python_paths_bit_identical():
    """The numba kernels and their interpreted fallback share one code path;
    the float results must agree to the last bit."""
    assert _run_scores(disable_jit=False) == _run_scores(disable_jit=True)


def test_locality_layout_is_a_permutation():
    import random

    g = make_graph(50, oracles.random_graph(random.Random(6), 50, 0.1))
    indptr, indices, new_of_old = _locality_layout(g)
    assert sorted(new_of_old) == list(range(g.n))
    assert indptr[-1] == len(g.indices)
    # relabeled degrees match the originals
    degrees = np.diff(indptr)
    assert np.array_equal(degrees[new_of_old], g.degrees())


def test_forest_order_groups_components_contiguously():
    g = make_graph(6, [(0, 3), (3, 5), (1, 4)])  # components {0,3,5}, {1,4}, {2}
    order = np.empty(6, np.int64)
    _kernels.bfs_forest_order(g.indptr, g.indices, order)
    assert list(order) == [0, 3, 5, 1, 4, 2]


def test_histogram_chunk_counts_unreachable():
    g = make_graph(4, [(0, 1), (2, 3)])
    hist = np.zeros(4, np.int64)
    unreachable = np.zeros(1, np.int64)
    _kernels.histogram_chunk(
        g.indptr, g.indices, np.array([0, 2], np.int64), hist, unreachable
    )
    assert hist[1] == 2
    assert unreachable[0] == 4  # two sources x two nodes in the other component
