"""Bipartite person-title store and its projection to the co-appearance graph.

The projected :class:`CoGraph` is the analysis substrate for every other
module. It is immutable once built: adjacency is CSR-style (sorted neighbor
arrays), node indices are dense and assigned in first-seen order, and all
outputs downstream report names, never indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyInputError, NodeOutOfRangeError, UnknownActorError
from .ingest import TitleKind, TitleRecord

DEFAULT_MAX_CAST = 500


@dataclass(frozen=True)
class TitleMeta:
    year: int | None
    kind: TitleKind
    country: str | None
    directors: tuple[str, ...]


@dataclass
class BipartiteStore:
    """Interned person/title tables plus per-title cast incidence."""

    person_index: dict[str, int]
    person_keys: list[str]
    person_labels: list[str]
    title_index: dict[str, int]
    title_ids: list[str]
    title_names: list[str]
    incidence: list[list[int]]  # per title: sorted, duplicate-free person indices
    title_meta: list[TitleMeta]
    oversize_titles: int = 0  # casts above the cap, rejected as data errors

    @property
    def n_persons(self) -> int:
        return len(self.person_keys)

    @property
    def n_titles(self) -> int:
        return len(self.title_ids)


def build_bipartite(
    records: Sequence[TitleRecord],
    *,
    kind: TitleKind | None = None,
    year_range: tuple[int | None, int | None] | None = None,
    min_cast: int = 0,
    max_cast: int = DEFAULT_MAX_CAST,
    names: Mapping[str, str] | None = None,
) -> BipartiteStore:
    """Intern persons/titles from ``records``, excluding titles that fail
    the filters.

    ``names`` optionally maps person keys to display labels (IMDb nconst to
    primaryName); colliding display labels are disambiguated with the key.
    Titles with more than ``max_cast`` cast members are rejected as data
    errors and counted, since projection is quadratic per title.
    """
    store = BipartiteStore(
        person_index={},
        person_keys=[],
        person_labels=[],
        title_index={},
        title_ids=[],
        title_names=[],
        incidence=[],
        title_meta=[],
    )
    lo, hi = year_range if year_range else (None, None)
    for rec in records:
        if kind is not None and rec.kind != kind:
            continue
        if year_range is not None:
            if rec.release_year is None:
                continue
            if lo is not None and rec.release_year < lo:
                continue
            if hi is not None and rec.release_year > hi:
                continue
        if len(rec.cast) < min_cast:
            continue
        if len(rec.cast) > max_cast:
            store.oversize_titles += 1
            continue
        if rec.title_id in store.title_index:
            continue
        tidx = len(store.title_ids)
        store.title_index[rec.title_id] = tidx
        store.title_ids.append(rec.title_id)
        store.title_names.append(rec.title)
        members: list[int] = []
        for key in rec.cast:
            pidx = store.person_index.get(key)
            if pidx is None:
                pidx = len(store.person_keys)
                store.person_index[key] = pidx
                store.person_keys.append(key)
            members.append(pidx)
        members.sort()
        store.incidence.append(members)
        store.title_meta.append(
            TitleMeta(
                year=rec.release_year,
                kind=rec.kind,
                country=rec.country,
                directors=rec.directors,
            )
        )
    if not store.title_ids:
        raise EmptyInputError("no titles survive the configured filters")
    store.person_labels = _display_labels(store.person_keys, names)
    return store


def _display_labels(keys: Sequence[str], names: Mapping[str, str] | None) -> list[str]:
    if names is None:
        return list(keys)
    labels = [names.get(k, k) for k in keys]
    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    # Colliding display names are disambiguated with the underlying key.
    return [
        f"{label} [{key}]" if counts[label] > 1 else label
        for label, key in zip(labels, keys)
    ]


@dataclass(eq=False)
class CoGraph:
    """Weighted undirected actor co-appearance graph (CSR adjacency).

    Edge weight counts shared titles. Neighbor arrays are sorted by index;
    there are no self-loops and all weights are >= 1. ``total_edge_weight``
    sums weights over undirected edges (each edge once).
    """

    labels: list[str]
    indptr: np.ndarray  # int64, len n+1
    indices: np.ndarray  # int32, sorted within each row
    weights: np.ndarray  # int64, parallel to indices
    total_edge_weight: int
    edge_titles: dict[tuple[int, int], tuple[int, ...]] | None = None
    title_names: list[str] | None = None
    node_country: list[str | None] | None = None
    _label_index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._label_index:
            self._label_index = {name: i for i, name in enumerate(self.labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def _check(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise NodeOutOfRangeError(f"node {u} outside [0, {self.n})")

    def degree(self, u: int) -> int:
        self._check(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor indices of ``u`` (a read-only view)."""
        self._check(u)
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def neighbor_weights(self, u: int) -> np.ndarray:
        self._check(u)
        return self.weights[self.indptr[u] : self.indptr[u + 1]]

    def weight(self, u: int, v: int) -> int:
        """Shared-title count for the pair, 0 if not adjacent."""
        self._check(u)
        self._check(v)
        row = self.neighbors(u)
        pos = int(np.searchsorted(row, v))
        if pos < len(row) and row[pos] == v:
            return int(self.weights[self.indptr[u] + pos])
        return 0

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def node(self, name: str) -> int:
        try:
            return self._label_index[name]
        except KeyError:
            raise UnknownActorError(name) from None

    def has_node(self, name: str) -> bool:
        return name in self._label_index

    def titles_for_edge(self, u: int, v: int) -> tuple[str, ...]:
        """Names of titles connecting an adjacent pair, sorted by name."""
        if self.edge_titles is None or self.title_names is None:
            return ()
        key = (u, v) if u < v else (v, u)
        ids = self.edge_titles.get(key, ())
        return tuple(sorted(self.title_names[t] for t in ids))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
            and self.total_edge_weight == other.total_edge_weight
            and self.edge_titles == other.edge_titles
            and self.title_names == other.title_names
            and self.node_country == other.node_country
        )

    def edges(self) -> Iterable[tuple[int, int, int]]:
        """Yield each undirected edge once as (u, v, weight) with u < v."""
        for u in range(self.n):
            for pos in range(int(self.indptr[u]), int(self.indptr[u + 1])):
                v = int(self.indices[pos])
                if u < v:
                    yield u, v, int(self.weights[pos])

    @classmethod
    def from_weighted_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int, int]],
        *,
        edge_titles: dict[tuple[int, int], tuple[int, ...]] | None = None,
        title_names: Sequence[str] | None = None,
        node_country: Sequence[str | None] | None = None,
    ) -> "CoGraph":
        """Build a graph directly from an undirected weighted edge list."""
        n = len(labels)
        pair_w: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise NodeOutOfRangeError(f"edge ({u},{v}) outside [0,{n})")
            if w < 1:
                raise ValueError("edge weights must be >= 1")
            key = (u, v) if u < v else (v, u)
            pair_w[key] = pair_w.get(key, 0) + int(w)
        return _from_pairs(
            cls,
            list(labels),
            pair_w,
            edge_titles=edge_titles,
            title_names=list(title_names) if title_names is not None else None,
            node_country=list(node_country) if node_country is not None else None,
        )


def _from_pairs(cls, labels, pair_w, *, edge_titles=None, title_names=None, node_country=None):
    n = len(labels)
    pairs = sorted(pair_w.items())
    nnz = 2 * len(pairs)
    deg = np.zeros(n + 1, dtype=np.int64)
    for (u, v), _ in pairs:
        deg[u + 1] += 1
        deg[v + 1] += 1
    indptr = np.cumsum(deg)
    indices = np.empty(nnz, dtype=np.int32)
    weights = np.empty(nnz, dtype=np.int64)
    cursor = indptr[:-1].copy()
    for (u, v), w in pairs:
        indices[cursor[u]] = v
        weights[cursor[u]] = w
        cursor[u] += 1
        indices[cursor[v]] = u
        weights[cursor[v]] = w
        cursor[v] += 1
    return cls(
        labels=labels,
        indptr=indptr,
        indices=indices,
        weights=weights,
        total_edge_weight=int(sum(pair_w.values())),
        edge_titles=edge_titles,
        title_names=title_names,
        node_country=node_country,
    )


def project(store: BipartiteStore, keep_titles: bool = False) -> CoGraph:
    """Project the bipartite store onto actors.

    Edge (u, v) has weight = number of titles whose cast contains both.
    Isolated persons (solo casts) remain as degree-0 nodes. With
    ``keep_titles`` every edge also records the connecting title indices.
    """
    pair_w: dict[tuple[int, int], int] = {}
    edge_titles: dict[tuple[int, int], list[int]] | None = {} if keep_titles else None
    for tidx, members in enumerate(store.incidence):
        k = len(members)
        for i in range(k):
            u = members[i]
            for j in range(i + 1, k):
                key = (u, members[j])
                pair_w[key] = pair_w.get(key, 0) + 1
                if edge_titles is not None:
                    edge_titles.setdefault(key, []).append(tidx)
    graph = _from_pairs(
        CoGraph,
        list(store.person_labels),
        pair_w,
        edge_titles=(
            {k: tuple(v) for k, v in edge_titles.items()} if edge_titles is not None else None
        ),
        title_names=list(store.title_names),
        node_country=_plurality_countries(store),
    )
    return graph


def _plurality_countries(store: BipartiteStore) -> list[str | None]:
    """Most frequent title country per person (ties to the smaller string)."""
    counts: list[dict[str, int] | None] = [None] * store.n_persons
    for tidx, members in enumerate(store.incidence):
        country = store.title_meta[tidx].country
        if country is None:
            continue
        for p in members:
            bucket = counts[p]
            if bucket is None:
                bucket = {}
                counts[p] = bucket
            bucket[country] = bucket.get(country, 0) + 1
    out: list[str | None] = []
    for bucket in counts:
        if not bucket:
            out.append(None)
        else:
            out.append(min(bucket.items(), key=lambda kv: (-kv[1], kv[0]))[0])
    return out
