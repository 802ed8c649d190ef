"""Hot graph kernels over CSR adjacency arrays.

Written as plain array code so numba can JIT them; when numba is missing the
same functions run untouched (identical arithmetic, just slower). All loops
visit neighbors in CSR order and sources in ascending index order, so results
are bit-identical regardless of compilation or worker count: callers combine
per-chunk partials in chunk-index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def deco(fn):
            return fn

        return deco


# Sources per work chunk. Fixed (never derived from the thread count) so the
# chunk partition, and therefore the reduction order, is always the same.
CHUNK_SOURCES = 256


@njit(cache=True, nogil=True)
def bfs_distances(indptr, indices, source, dist):
    """Fill ``dist`` with hop counts from ``source`` (-1 = unreachable)."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
    queue = np.empty(n, np.int32)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        dv1 = dist[v] + 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dv1
                queue[tail] = w
                tail += 1


def row_offsets(indptr: np.ndarray) -> np.ndarray:
    """int32 copy of the CSR offsets when they fit (less memory traffic)."""
    if int(indptr[-1]) < 2**31:
        return indptr.astype(np.int32)
    return indptr


@njit(cache=True, nogil=True)
def bfs_forest_order(indptr, indices, order):
    """Fill ``order`` with a BFS-forest visit order (roots in index order).

    Neighbors end up with nearby ids, which makes the per-source scratch
    arrays in the centrality kernels far more cache-friendly.
    """
    n = indptr.shape[0] - 1
    seen = np.zeros(n, np.uint8)
    pos = 0
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = 1
        order[pos] = s
        pos += 1
        head = pos - 1
        while head < pos:
            v = order[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if seen[w] == 0:
                    seen[w] = 1
                    order[pos] = w
                    pos += 1


@njit(cache=True, nogil=True)
def permute_csr(indptr, indices, order, new_of_old, indptr_out, indices_out):
    """Rewrite the CSR under a node relabeling (rows in new-id order)."""
    n = order.shape[0]
    indptr_out[0] = 0
    for new_v in range(n):
        old = order[new_v]
        indptr_out[new_v + 1] = indptr_out[new_v] + (indptr[old + 1] - indptr[old])
    for new_v in range(n):
        old = order[new_v]
        base = indptr_out[new_v]
        k = 0
        for p in range(indptr[old], indptr[old + 1]):
            indices_out[base + k] = new_of_old[indices[p]]
            k += 1


@njit(cache=True, nogil=True)
def brandes_chunk(indptr, indices, s_start, s_end, out):
    """Accumulate ordered-pair shortest-path dependencies for the given
    source range into ``out`` (raw, unnormalized betweenness)."""
    n = out.shape[0]
    dist = np.full(n, -1, np.int32)
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    queue = np.empty(n, np.int32)
    for s in range(s_start, s_end):
        dist[s] = 0
        sigma[s] = 1.0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v]
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                dw = dist[w]
                if dw < 0:
                    dist[w] = dv1
                    queue[tail] = w
                    tail += 1
                    sigma[w] += sv
                elif dw == dv1:
                    sigma[w] += sv
        # queue holds vertices in non-decreasing distance order; walk it
        # backwards, pushing dependencies onto same-level-minus-one neighbors.
        for i in range(tail - 1, 0, -1):
            w = queue[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            dwm = dist[w] - 1
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dwm:
                    delta[v] += sigma[v] * coeff
            out[w] += delta[w]
        # undo only what this source touched
        for i in range(tail):
            v = queue[i]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0


@njit(cache=True, nogil=True)
def closeness_chunk(indptr, indices, s_start, s_end, out):
    """Component-scaled closeness for each source in the range.

    score(s) = (r / (n-1)) * (r / S) with r reachable nodes (excluding s)
    and S the sum of their distances; 0 when nothing is reachable.
    """
    n = out.shape[0]
    dist = np.full(n, -1, np.int32)
    queue = np.empty(n, np.int32)
    for s in range(s_start, s_end):
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            total += dv
            dv1 = dv + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv1
                    queue[tail] = w
                    tail += 1
        reached = tail - 1
        if reached > 0:
            out[s] = (reached / (n - 1.0)) * (reached / total)
        else:
            out[s] = 0.0
        for i in range(tail):
            dist[queue[i]] = -1


@njit(cache=True, nogil=True)
def histogram_chunk(indptr, indices, sources, hist, unreachable_out):
    """Count ordered-pair distances from each listed source.

    ``hist[d]`` accumulates pairs at distance d >= 1; pairs with no path
    accumulate into ``unreachable_out[0]``.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int32)
    queue = np.empty(n, np.int32)
    for si in range(sources.shape[0]):
        s = sources[si]
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            dv1 = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv1
                    queue[tail] = w
                    tail += 1
        for i in range(1, tail):
            hist[dist[queue[i]]] += 1
        unreachable_out[0] += n - tail
        for i in range(tail):
            dist[queue[i]] = -1


@njit(cache=True, nogil=True)
def matvec_shifted(indptr, indices, x, out):
    """out = (A + I) x on the binary adjacency."""
    n = x.shape[0]
    for v in range(n):
        acc = x[v]
        for p in range(indptr[v], indptr[v + 1]):
            acc += x[indices[p]]
        out[v] = acc


def chunk_ranges(n_sources: int, chunk: int = CHUNK_SOURCES) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, n_sources)) for lo in range(0, n_sources, chunk)]


def run_chunks(tasks: Sequence[Callable[[], np.ndarray]], threads: int) -> Iterator[np.ndarray]:
    """Run chunk tasks, yielding results in submission order.

    The ordered yield is what makes reductions independent of the worker
    count; the kernels release the GIL so threads give real parallelism.
    """
    if threads <= 1:
        for task in tasks:
            yield task()
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(lambda t: t(), tasks)


def warmup() -> None:
    """Trigger JIT compilation on a toy graph (no-op without numba)."""
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int32)
    dist = np.empty(2, np.int32)
    bfs_distances(indptr, indices, 0, dist)
    order = np.empty(2, np.int64)
    bfs_forest_order(indptr, indices, order)
    new_of_old = np.array([0, 1], np.int64)
    permute_csr(indptr, indices, order, new_of_old, np.empty(3, np.int64), np.empty(2, np.int32))
    indptr32 = indptr.astype(np.int32)
    out = np.zeros(2, np.float64)
    brandes_chunk(indptr32, indices, 0, 2, out)
    closeness_chunk(indptr32, indices, 0, 2, out)
    hist = np.zeros(2, np.int64)
    unreachable = np.zeros(1, np.int64)
    histogram_chunk(indptr, indices, np.array([0], np.int64), hist, unreachable)
    x = np.full(2, 0.5)
    matvec_shifted(indptr, indices, x, np.empty(2))
