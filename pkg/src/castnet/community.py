"""Louvain communities, modularity, cluster meta-graphs and evolution.

Louvain here is the classic two-phase scheme: local moving over a seeded
Fisher-Yates visit order (reshuffled every pass), then aggregation, repeated
until a full pass moves nothing. At the default resolution all gain
comparisons are done in exact integer arithmetic (weights are counts), so a
fixed seed gives bit-identical partitions and the recorded quality trace is
non-decreasing by construction, not by luck.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .centrality import Measure, ScoreTable
from .errors import EmptyGraphError, EmptyInputError
from .graph import CoGraph, build_bipartite, project
from .ingest import TitleRecord


@dataclass
class Partition:
    """Community assignment per node (dense contiguous ids) plus quality."""

    assignment: tuple[int, ...]
    q: float
    seed: int
    resolution: float = 1.0
    passes: int = 0
    q_history: tuple[float, ...] = ()

    @property
    def n_communities(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_communities)]
        for node, cid in enumerate(self.assignment):
            out[cid].append(node)
        return out


def modularity(g: CoGraph, assignment: Sequence[int]) -> float:
    """Weighted modularity: sum over communities of e_c/m - (d_c/2m)^2."""
    if len(assignment) != g.n:
        raise ValueError(f"assignment covers {len(assignment)} of {g.n} nodes")
    m = g.total_edge_weight
    if m == 0:
        raise EmptyGraphError("modularity is undefined on an edgeless graph")
    comm = np.asarray(assignment, dtype=np.int64)
    n_comm = int(comm.max()) + 1
    rows = np.repeat(np.arange(g.n), np.diff(g.indptr))
    cu = comm[rows]
    cv = comm[g.indices]
    w = g.weights.astype(np.float64)
    # Each undirected edge appears twice in CSR, so intra sums halve.
    intra = np.bincount(cu[cu == cv], weights=w[cu == cv], minlength=n_comm) / 2.0
    strength = np.bincount(cu, weights=w, minlength=n_comm)
    return float(np.sum(intra / m - (strength / (2.0 * m)) ** 2))


class _Level:
    """One Louvain level: adjacency dicts plus running community sums."""

    __slots__ = ("n", "adj", "selfw", "k", "comm", "sigma", "intra")

    def __init__(self, n: int, adj: list[dict[int, int]], selfw: list[int]):
        self.n = n
        self.adj = adj
        self.selfw = selfw
        self.k = [2 * selfw[v] + sum(adj[v].values()) for v in range(n)]
        self.comm = list(range(n))
        self.sigma = list(self.k)  # total degree per community
        self.intra = list(selfw)  # intra-community edge weight per community

    def quality_numerator(self, m: int, resolution: float):
        """Modularity numerator over denominator 4m^2 (exact int at res=1)."""
        if resolution == 1.0:
            return sum(4 * m * e - s * s for e, s in zip(self.intra, self.sigma) if s or e)
        return sum(
            4.0 * m * e - resolution * float(s) * float(s)
            for e, s in zip(self.intra, self.sigma)
            if s or e
        )


def louvain(g: CoGraph, seed: int, resolution: float = 1.0) -> Partition:
    """Two-phase Louvain on the weighted co-appearance graph.

    Nodes are visited in a freshly shuffled order every pass; a node moves
    to the neighbor community with the largest quality gain, strictly
    positive gains only. Aggregation repeats until a full pass yields no
    move. ``q`` is the weighted modularity of the final assignment on the
    original graph.
    """
    if g.edge_count == 0:
        raise EmptyGraphError("louvain needs at least one edge")
    rng = random.Random(seed)
    m = g.total_edge_weight
    m2 = 2 * m

    adj: list[dict[int, int]] = []
    for u in range(g.n):
        lo, hi = int(g.indptr[u]), int(g.indptr[u + 1])
        adj.append(
            {int(v): int(w) for v, w in zip(g.indices[lo:hi], g.weights[lo:hi])}
        )
    level = _Level(g.n, adj, [0] * g.n)
    node_map = list(range(g.n))

    passes = 0
    q_num_history: list = []
    while True:
        moved_in_level = False
        while True:
            moved = _sweep(level, m2, resolution, rng)
            passes += 1
            q_num_history.append(level.quality_numerator(m, resolution))
            if moved == 0:
                break
            moved_in_level = True
        if not moved_in_level:
            break
        prev_n = level.n
        level, remap = _aggregate(level)
        node_map = [remap[node_map[i]] for i in range(g.n)]
        if level.n >= prev_n or level.n <= 1:
            break  # no compression left (every accepted move shrinks live communities)

    # Flatten to original nodes and renumber contiguously in node order.
    raw = [level.comm[node_map[i]] for i in range(g.n)]
    relabel: dict[int, int] = {}
    assignment = []
    for cid in raw:
        if cid not in relabel:
            relabel[cid] = len(relabel)
        assignment.append(relabel[cid])
    assignment = tuple(assignment)

    denom = 4.0 * m * m
    q_history = tuple(float(num) / denom for num in q_num_history)
    return Partition(
        assignment=assignment,
        q=modularity(g, assignment),
        seed=seed,
        resolution=resolution,
        passes=passes,
        q_history=q_history,
    )


def _sweep(level: _Level, m2: int, resolution: float, rng: random.Random) -> int:
    """One full pass of local moving; returns the number of nodes moved."""
    order = list(range(level.n))
    rng.shuffle(order)
    moved = 0
    exact = resolution == 1.0
    for v in order:
        home = level.comm[v]
        kv = level.k[v]
        to_comm: dict[int, int] = {}
        for w, weight in level.adj[v].items():
            c = level.comm[w]
            to_comm[c] = to_comm.get(c, 0) + weight
        # Remove v from its community, then compare insertion scores.
        level.sigma[home] -= kv
        kin_home = to_comm.get(home, 0)
        if exact:
            best_score = m2 * kin_home - level.sigma[home] * kv
        else:
            best_score = m2 * kin_home - resolution * level.sigma[home] * kv
        best = home
        for c in sorted(to_comm):
            if c == home:
                continue
            if exact:
                score = m2 * to_comm[c] - level.sigma[c] * kv
            else:
                score = m2 * to_comm[c] - resolution * level.sigma[c] * kv
            if score > best_score:
                best_score = score
                best = c
        level.sigma[best] += kv
        if best != home:
            level.comm[v] = best
            level.intra[home] -= kin_home + level.selfw[v]
            level.intra[best] += to_comm.get(best, 0) + level.selfw[v]
            moved += 1
    return moved


def _aggregate(level: _Level) -> tuple[_Level, dict[int, int]]:
    """Collapse communities into nodes of the next level."""
    live = sorted({level.comm[v] for v in range(level.n)})
    remap = {old: new for new, old in enumerate(live)}
    n_new = len(live)
    adj: list[dict[int, int]] = [{} for _ in range(n_new)]
    selfw = [0] * n_new
    for old_cid in live:
        selfw[remap[old_cid]] = level.intra[old_cid]
    for v in range(level.n):
        cv = remap[level.comm[v]]
        for w, weight in level.adj[v].items():
            cw = remap[level.comm[w]]
            if cv != cw:
                adj[cv][cw] = adj[cv].get(cw, 0) + weight
    # Each inter-community edge was added from both endpoints; halve it.
    for d in adj:
        for key in d:
            d[key] //= 2
    new_level = _Level(n_new, adj, selfw)
    new_remap = {v: remap[level.comm[v]] for v in range(level.n)}
    return new_level, new_remap


# ---------------------------------------------------------------------------
# Cluster meta-graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterInfo:
    label: str
    size: int
    volume: int  # total incident edge weight of members


@dataclass(frozen=True)
class ClusterLink:
    weight: int
    frequency: float  # weight / min(volume_a, volume_b)


@dataclass
class ClusterGraph:
    clusters: dict[int, ClusterInfo]
    links: dict[tuple[int, int], ClusterLink] = field(default_factory=dict)


Labeler = Callable[[int, Sequence[int]], str]


def build_cluster_graph(
    g: CoGraph,
    partition: Partition,
    labeler: Labeler | None = None,
    overrides: Mapping[int, str] | None = None,
) -> ClusterGraph:
    """Community-level meta-graph with interaction frequencies.

    Frequency between two clusters is the inter-cluster edge weight divided
    by the smaller cluster volume. The default labeler picks the plurality
    country of member actors, falling back to ``cluster-<id>``.
    """
    if len(partition.assignment) != g.n:
        raise ValueError("partition does not cover the graph")
    comm = partition.assignment
    n_comm = partition.n_communities
    sizes = [0] * n_comm
    volumes = [0] * n_comm
    for v in range(g.n):
        sizes[comm[v]] += 1
    strengths = np.bincount(
        np.repeat(np.arange(g.n), np.diff(g.indptr)), weights=g.weights, minlength=g.n
    )
    for v in range(g.n):
        volumes[comm[v]] += int(strengths[v])

    inter: dict[tuple[int, int], int] = {}
    for u, v, w in g.edges():
        cu, cv = comm[u], comm[v]
        if cu != cv:
            key = (cu, cv) if cu < cv else (cv, cu)
            inter[key] = inter.get(key, 0) + w

    members = partition.members()
    pick = labeler if labeler is not None else _country_plurality_labeler(g)
    clusters = {}
    for cid in range(n_comm):
        label = pick(cid, members[cid])
        if overrides and cid in overrides:
            label = overrides[cid]
        clusters[cid] = ClusterInfo(label=label, size=sizes[cid], volume=volumes[cid])
    links = {
        key: ClusterLink(weight=w, frequency=w / min(volumes[key[0]], volumes[key[1]]))
        for key, w in sorted(inter.items())
    }
    return ClusterGraph(clusters=clusters, links=links)


def _country_plurality_labeler(g: CoGraph) -> Labeler:
    def pick(cid: int, member_nodes: Sequence[int]) -> str:
        counts: dict[str, int] = {}
        if g.node_country is not None:
            for v in member_nodes:
                country = g.node_country[v]
                if country:
                    counts[country] = counts.get(country, 0) + 1
        if not counts:
            return f"cluster-{cid}"
        return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]

    return pick


def filter_interactions(cg: ClusterGraph, tau: float) -> ClusterGraph:
    """Retain links with frequency >= tau; clusters are always retained."""
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must be in (0, 1]")
    return ClusterGraph(
        clusters=dict(cg.clusters),
        links={key: link for key, link in cg.links.items() if link.frequency >= tau},
    )


def crossover_scores(g: CoGraph, partition: Partition) -> ScoreTable:
    """Participation coefficient: 1 - sum((edges into c / degree)^2).

    Measures how evenly an actor's collaborations spread across communities;
    0 for degree-0 nodes and for actors confined to one community.
    """
    if len(partition.assignment) != g.n:
        raise ValueError("partition does not cover the graph")
    comm = partition.assignment
    scores = np.zeros(g.n, np.float64)
    for u in range(g.n):
        row = g.neighbors(u)
        deg = len(row)
        if deg == 0:
            continue
        counts: dict[int, int] = {}
        for v in row:
            c = comm[int(v)]
            counts[c] = counts.get(c, 0) + 1
        scores[u] = 1.0 - sum((cnt / deg) ** 2 for cnt in counts.values())
    return ScoreTable(scores, Measure.PARTICIPATION, {"definition": "participation"})


# ---------------------------------------------------------------------------
# Temporal community evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommunityMatch:
    new_cid: int
    overlap: float  # Jaccard of member-name sets


@dataclass
class EvolutionWindow:
    years: tuple[int, int]
    names: tuple[str, ...]
    partition: Partition | None  # None for windows with no titles or no edges


@dataclass
class EvolutionTimeline:
    windows: list[EvolutionWindow]
    matches: list[dict[int, CommunityMatch]]  # one map per consecutive pair


def community_evolution(
    records: Sequence[TitleRecord],
    window_years: int,
    step_years: int,
    seed: int,
    *,
    names: Mapping[str, str] | None = None,
) -> EvolutionTimeline:
    """Windowed Louvain over release years with best-overlap matching.

    Windows of ``window_years`` advance by ``step_years``; each window's
    graph is built from titles whose release year falls inside it. Windows
    with no titles (or no co-appearances) are recorded as empty. Consecutive
    windows are matched community-by-community via maximum Jaccard overlap
    of member-name sets, ties to the smallest new community id.
    """
    if step_years < 1 or window_years < step_years:
        raise ValueError("need window_years >= step_years >= 1")
    years = [r.release_year for r in records if r.release_year is not None]
    if not years:
        raise EmptyInputError("no records carry release years")
    lo, hi = min(years), max(years)

    windows: list[EvolutionWindow] = []
    start = lo
    while start <= hi:
        end = start + window_years - 1
        subset = [
            r for r in records if r.release_year is not None and start <= r.release_year <= end
        ]
        window = EvolutionWindow(years=(start, end), names=(), partition=None)
        if subset:
            try:
                store = build_bipartite(subset, names=names)
                graph = project(store)
                window = EvolutionWindow(
                    years=(start, end),
                    names=tuple(graph.labels),
                    partition=louvain(graph, seed=seed) if graph.edge_count else None,
                )
            except EmptyInputError:
                pass
        windows.append(window)
        start += step_years

    matches: list[dict[int, CommunityMatch]] = []
    for prev, cur in zip(windows, windows[1:]):
        matches.append(_match_windows(prev, cur))
    return EvolutionTimeline(windows=windows, matches=matches)


def _member_name_sets(window: EvolutionWindow) -> list[set[str]]:
    if window.partition is None:
        return []
    return [
        {window.names[v] for v in group} for group in window.partition.members()
    ]


def _match_windows(prev: EvolutionWindow, cur: EvolutionWindow) -> dict[int, CommunityMatch]:
    old_sets = _member_name_sets(prev)
    new_sets = _member_name_sets(cur)
    out: dict[int, CommunityMatch] = {}
    if not old_sets or not new_sets:
        return out
    for old_cid, old_members in enumerate(old_sets):
        best_cid = 0
        best_overlap = -1.0
        for new_cid, new_members in enumerate(new_sets):
            inter = len(old_members & new_members)
            union = len(old_members | new_members)
            overlap = inter / union if union else 0.0
            if overlap > best_overlap:
                best_overlap = overlap
                best_cid = new_cid
        out[old_cid] = CommunityMatch(new_cid=best_cid, overlap=best_overlap)
    return out
