"""Link-prediction indices over non-adjacent actor pairs.

All five indices are set/count based on binary adjacency. Scores are raw
index values, explicitly not probabilities; only the Jaccard coefficient is
bounded to [0, 1].
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import CandidateExplosionError
from .graph import CoGraph

DEFAULT_CANDIDATE_CAP = 10_000_000


class Method(str, Enum):
    COMMON_NEIGHBORS = "common_neighbors"
    JACCARD = "jaccard"
    RESOURCE_ALLOCATION = "resource_allocation"
    ADAMIC_ADAR = "adamic_adar"
    PREFERENTIAL_ATTACHMENT = "preferential_attachment"


@dataclass(frozen=True)
class PairScore:
    """Scored candidate pair, canonically ordered u < v by name."""

    u: str
    v: str
    method: Method
    score: float


def _pair(g: CoGraph, u: int, v: int) -> tuple[np.ndarray, np.ndarray]:
    if u == v:
        raise ValueError("link prediction needs two distinct nodes")
    return g.neighbors(u), g.neighbors(v)


def common_neighbors(g: CoGraph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)|."""
    nu, nv = _pair(g, u, v)
    return int(np.intersect1d(nu, nv, assume_unique=True).size)


def jaccard(g: CoGraph, u: int, v: int) -> float:
    """Intersection over union of the neighborhoods; 0 when both empty."""
    nu, nv = _pair(g, u, v)
    if len(nu) == 0 and len(nv) == 0:
        return 0.0
    inter = int(np.intersect1d(nu, nv, assume_unique=True).size)
    union = len(nu) + len(nv) - inter
    return inter / union


def resource_allocation(g: CoGraph, u: int, v: int) -> float:
    """Sum of 1/degree over common neighbors."""
    nu, nv = _pair(g, u, v)
    common = np.intersect1d(nu, nv, assume_unique=True)
    total = 0.0
    for z in common:
        total += 1.0 / g.degree(int(z))
    return total


def adamic_adar(g: CoGraph, u: int, v: int) -> float:
    """Sum of 1/ln(degree) over common neighbors (natural log).

    A common neighbor always has degree >= 2, so the log never vanishes.
    """
    nu, nv = _pair(g, u, v)
    common = np.intersect1d(nu, nv, assume_unique=True)
    total = 0.0
    for z in common:
        total += 1.0 / math.log(g.degree(int(z)))
    return total


def preferential_attachment(g: CoGraph, u: int, v: int) -> float:
    """degree(u) * degree(v)."""
    _pair(g, u, v)
    return float(g.degree(u) * g.degree(v))


def predict_top(
    g: CoGraph,
    method: Method,
    k: int,
    min_common: int = 1,
    *,
    allow_zero_common: bool = False,
    cap: int = DEFAULT_CANDIDATE_CAP,
) -> list[PairScore]:
    """Top-k non-adjacent pairs by the chosen index.

    Candidates are non-adjacent pairs with at least ``min_common`` common
    neighbors, enumerated over 2-hop neighborhoods rather than all pairs.
    ``min_common=0`` is only meaningful for preferential attachment and must
    be opted into with ``allow_zero_common`` (it enumerates every
    non-adjacent pair). Raises CandidateExplosionError when the candidate
    count exceeds ``cap``; ties break lexicographically on the name pair.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if min_common < 1:
        if not (allow_zero_common and method is Method.PREFERENTIAL_ATTACHMENT):
            raise ValueError(
                "min_common=0 requires allow_zero_common and the "
                "preferential_attachment method"
            )
        candidates = _all_nonadjacent_pairs(g, cap)
    else:
        candidates = _two_hop_candidates(g, method, min_common, cap)
    best = heapq.nsmallest(k, candidates)
    return [PairScore(a, b, method, -neg) for neg, a, b in best]


def _two_hop_candidates(
    g: CoGraph, method: Method, min_common: int, cap: int
) -> Iterator[tuple[float, str, str]]:
    """Yield (-score, name_a, name_b) for every qualifying candidate pair."""
    degrees = g.degrees()
    log_deg = np.zeros(g.n)
    multi = degrees > 1
    log_deg[multi] = np.log(degrees[multi])

    count = 0
    for u in range(g.n):
        row_u = g.neighbors(u)
        if len(row_u) == 0:
            continue
        adjacent = set(int(x) for x in row_u)
        common: dict[int, int] = {}
        ra: dict[int, float] = {}
        aa: dict[int, float] = {}
        for w in row_u:
            w = int(w)
            inv_d = 1.0 / int(degrees[w])
            inv_log = 1.0 / log_deg[w] if degrees[w] > 1 else 0.0
            for v in g.neighbors(w):
                v = int(v)
                if v <= u or v in adjacent:
                    continue
                common[v] = common.get(v, 0) + 1
                if method is Method.RESOURCE_ALLOCATION:
                    ra[v] = ra.get(v, 0.0) + inv_d
                elif method is Method.ADAMIC_ADAR:
                    aa[v] = aa.get(v, 0.0) + inv_log
        for v, cnt in common.items():
            if cnt < min_common:
                continue
            count += 1
            if count > cap:
                raise CandidateExplosionError(count, cap)
            if method is Method.COMMON_NEIGHBORS:
                score = float(cnt)
            elif method is Method.JACCARD:
                union = int(degrees[u]) + int(degrees[v]) - cnt
                score = cnt / union
            elif method is Method.RESOURCE_ALLOCATION:
                score = ra[v]
            elif method is Method.ADAMIC_ADAR:
                score = aa[v]
            else:
                score = float(degrees[u]) * float(degrees[v])
            a, b = sorted((g.labels[u], g.labels[v]))
            yield (-score, a, b)


def _all_nonadjacent_pairs(g: CoGraph, cap: int) -> Iterator[tuple[float, str, str]]:
    total = g.n * (g.n - 1) // 2 - g.edge_count
    if total > cap:
        raise CandidateExplosionError(total, cap)
    degrees = g.degrees()
    for u in range(g.n):
        adjacent = set(int(x) for x in g.neighbors(u))
        for v in range(u + 1, g.n):
            if v in adjacent:
                continue
            score = float(degrees[u]) * float(degrees[v])
            a, b = sorted((g.labels[u], g.labels[v]))
            yield (-score, a, b)
