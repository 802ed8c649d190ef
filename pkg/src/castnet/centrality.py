"""The four actor-influence measures on the co-appearance graph.

All measures use binary adjacency (co-appearance counts do not boost
influence scores). Betweenness counts ordered pairs and divides by
(g-1)(g-2); closeness is component-scaled so disconnected graphs get finite
scores that reduce to (g-1)/sum(d) on connected ones; eigenvector scores come
from power iteration run to a tolerance, with the dominant-eigenvalue
estimate recorded in ``params``.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import EmptyGraphError, TooFewNodesError
from .graph import CoGraph


class Measure(str, Enum):
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"
    EIGENVECTOR = "eigenvector"
    PARTICIPATION = "participation"  # crossover scores share this table type


@dataclass
class ScoreTable:
    """Per-node scores for one measure plus the solver settings used."""

    scores: np.ndarray  # float64, dense by node index
    measure: Measure
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.scores)) or np.any(self.scores < 0):
            raise ValueError(f"{self.measure.value} scores must be finite and non-negative")

    def ranked(self, labels: Sequence[str]) -> list[tuple[str, float]]:
        """(name, score) sorted by descending score, ties by ascending name."""
        order = sorted(range(len(labels)), key=lambda i: (-self.scores[i], labels[i]))
        return [(labels[i], float(self.scores[i])) for i in order]

    def top(self, labels: Sequence[str], k: int) -> list[tuple[str, float]]:
        return self.ranked(labels)[:k]


def degree_centrality(g: CoGraph) -> ScoreTable:
    """Connection count scaled by the g-1 possible partners."""
    if g.n < 2:
        raise TooFewNodesError("degree centrality needs at least 2 nodes")
    scores = g.degrees().astype(np.float64) / (g.n - 1)
    return ScoreTable(scores, Measure.DEGREE)


def _locality_layout(g: CoGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR relabeled into BFS-forest order for cache locality.

    Returns (indptr, indices, new_of_old); per-node results computed in the
    relabeled space map back as ``scores_old = scores_new[new_of_old]``.
    """
    order = np.empty(g.n, np.int64)
    _kernels.bfs_forest_order(g.indptr, g.indices, order)
    new_of_old = np.empty(g.n, np.int64)
    new_of_old[order] = np.arange(g.n)
    indptr_out = np.empty(g.n + 1, np.int64)
    indices_out = np.empty(len(g.indices), np.int32)
    _kernels.permute_csr(g.indptr, g.indices, order, new_of_old, indptr_out, indices_out)
    return _kernels.row_offsets(indptr_out), indices_out, new_of_old


def betweenness_centrality(g: CoGraph, threads: int = 1) -> ScoreTable:
    """Normalized count of shortest paths between other pairs through a node.

    Brandes accumulation per source on the unweighted graph; pairs in
    different components contribute nothing. The raw ordered-pair sum is
    divided by (g-1)(g-2).
    """
    if g.n < 3:
        raise TooFewNodesError("betweenness centrality needs at least 3 nodes")
    indptr, indices, new_of_old = _locality_layout(g)

    def chunk_task(lo: int, hi: int) -> np.ndarray:
        part = np.zeros(g.n, np.float64)
        _kernels.brandes_chunk(indptr, indices, lo, hi, part)
        return part

    raw = np.zeros(g.n, np.float64)
    tasks = [partial(chunk_task, lo, hi) for lo, hi in _kernels.chunk_ranges(g.n)]
    for part in _kernels.run_chunks(tasks, threads):
        raw += part
    scores = raw[new_of_old] / float((g.n - 1) * (g.n - 2))
    return ScoreTable(scores, Measure.BETWEENNESS, {"algorithm": "brandes", "pairs": "ordered"})


def closeness_centrality(g: CoGraph, threads: int = 1) -> ScoreTable:
    """Inverse average BFS distance to reachable nodes, component-scaled."""
    if g.n < 2:
        raise TooFewNodesError("closeness centrality needs at least 2 nodes")
    indptr, indices, new_of_old = _locality_layout(g)
    relabeled = np.zeros(g.n, np.float64)

    def chunk_task(lo: int, hi: int) -> tuple[int, int]:
        _kernels.closeness_chunk(indptr, indices, lo, hi, relabeled)
        return lo, hi

    tasks = [partial(chunk_task, lo, hi) for lo, hi in _kernels.chunk_ranges(g.n)]
    for _ in _kernels.run_chunks(tasks, threads):
        pass
    return ScoreTable(relabeled[new_of_old], Measure.CLOSENESS, {"scaling": "component"})


def eigenvector_centrality(
    g: CoGraph, tol: float = 1e-10, max_iter: int = 1000
) -> ScoreTable:
    """Dominant-eigenvector scores on the binary adjacency.

    Power iteration from the uniform positive vector, L2-normalized each
    step. Iterating A+I instead of bare A keeps the same eigenvectors while
    guaranteeing convergence on bipartite-like graphs whose extreme
    eigenvalues tie in magnitude. Stops when successive iterates are within
    ``tol`` in L2; if ``max_iter`` is hit the last iterate is returned with
    ``params["converged"] = False``.
    """
    if g.n < 2:
        raise TooFewNodesError("eigenvector centrality needs at least 2 nodes")
    if g.edge_count == 0:
        raise EmptyGraphError("eigenvector centrality needs at least one edge")
    x = np.full(g.n, 1.0 / np.sqrt(g.n))
    y = np.empty_like(x)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        _kernels.matvec_shifted(g.indptr, g.indices, x, y)
        norm = float(np.linalg.norm(y))
        y /= norm
        if float(np.linalg.norm(y - x)) < tol:
            x, y = y, x
            converged = True
            break
        x, y = y, x
    # Rayleigh quotient of the unshifted adjacency at the final iterate.
    _kernels.matvec_shifted(g.indptr, g.indices, x, y)
    lam = float(x @ y) - 1.0
    return ScoreTable(
        x,
        Measure.EIGENVECTOR,
        {
            "tol": tol,
            "max_iter": max_iter,
            "iterations": iterations,
            "converged": converged,
            "lambda": lam,
        },
    )


def fmt_score(x: float) -> str:
    """Floats rendered with 6 significant digits for stable output files."""
    return f"{x:.6g}"


def write_scores_csv(path: str | os.PathLike, g: CoGraph, table: ScoreTable) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["name", "score"])
        for name, score in table.ranked(g.labels):
            writer.writerow([name, fmt_score(score)])


def write_scores_json(path: str | os.PathLike, g: CoGraph, table: ScoreTable) -> None:
    payload = {
        "measure": table.measure.value,
        "params": _round_params(table.params),
        "scores": [
            {"name": name, "score": float(fmt_score(score))}
            for name, score in table.ranked(g.labels)
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def _round_params(params: dict) -> dict:
    out = {}
    for key, value in params.items():
        if isinstance(value, float):
            out[key] = float(fmt_score(value))
        else:
            out[key] = value
    return out
