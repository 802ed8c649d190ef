"""Graph serialization: DOT and GraphML exports plus a binary cache.

The cache is a little-endian versioned container so analyses can reload a
built graph without re-parsing the raw dumps; see ``docs/cache-format.md``
for the byte layout. The loader rejects unknown magic or versions.
"""

from __future__ import annotations

import csv
import json
import math
import os
import struct
import xml.etree.ElementTree as ET

import numpy as np

from .centrality import fmt_score
from .community import ClusterGraph, Partition
from .errors import CacheFormatError
from .graph import CoGraph

CACHE_MAGIC = b"CASTNETG"
CACHE_VERSION = 1

_FLAG_EDGE_TITLES = 1
_FLAG_NODE_COUNTRY = 2
_FLAG_TITLE_NAMES = 4


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(path: str | os.PathLike, g: CoGraph) -> None:
    """DOT export: node attribute ``name``, edge attribute ``weight``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("graph coappearance {\n")
        for i, label in enumerate(g.labels):
            fh.write(f"  n{i} [name={_dot_quote(label)}];\n")
        for u, v, w in g.edges():
            fh.write(f"  n{u} -- n{v} [weight={w}];\n")
        fh.write("}\n")


def write_graphml(path: str | os.PathLike, g: CoGraph) -> None:
    """GraphML export: node attribute ``name``, edge attribute ``weight``."""
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ET.SubElement(
        root, "key", id="d0", attrib={"for": "node", "attr.name": "name", "attr.type": "string"}
    )
    ET.SubElement(
        root, "key", id="d1", attrib={"for": "edge", "attr.name": "weight", "attr.type": "long"}
    )
    graph = ET.SubElement(root, "graph", edgedefault="undirected")
    for i, label in enumerate(g.labels):
        node = ET.SubElement(graph, "node", id=f"n{i}")
        data = ET.SubElement(node, "data", key="d0")
        data.text = label
    for u, v, w in g.edges():
        edge = ET.SubElement(graph, "edge", source=f"n{u}", target=f"n{v}")
        data = ET.SubElement(edge, "data", key="d1")
        data.text = str(w)
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# Binary cache
# ---------------------------------------------------------------------------


def _write_str(fh, text: str) -> None:
    data = text.encode("utf-8")
    fh.write(struct.pack("<I", len(data)))
    fh.write(data)


def _read_str(fh) -> str:
    (length,) = struct.unpack("<I", _read_exact(fh, 4))
    return _read_exact(fh, length).decode("utf-8")


def _read_exact(fh, size: int) -> bytes:
    data = fh.read(size)
    if len(data) != size:
        raise CacheFormatError("truncated cache file")
    return data


def save_cache(path: str | os.PathLike, g: CoGraph) -> None:
    flags = 0
    if g.edge_titles is not None:
        flags |= _FLAG_EDGE_TITLES
    if g.node_country is not None:
        flags |= _FLAG_NODE_COUNTRY
    if g.title_names is not None:
        flags |= _FLAG_TITLE_NAMES
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<II", CACHE_VERSION, flags))
        fh.write(struct.pack("<QQQ", g.n, len(g.indices), g.total_edge_weight))
        for label in g.labels:
            _write_str(fh, label)
        fh.write(g.indptr.astype("<i8").tobytes())
        fh.write(g.indices.astype("<i4").tobytes())
        fh.write(g.weights.astype("<i8").tobytes())
        if g.title_names is not None:
            fh.write(struct.pack("<Q", len(g.title_names)))
            for name in g.title_names:
                _write_str(fh, name)
        if g.node_country is not None:
            for country in g.node_country:
                if country is None:
                    fh.write(struct.pack("<I", 0xFFFFFFFF))
                else:
                    _write_str(fh, country)
        if g.edge_titles is not None:
            fh.write(struct.pack("<Q", len(g.edge_titles)))
            for (u, v), titles in sorted(g.edge_titles.items()):
                fh.write(struct.pack("<III", u, v, len(titles)))
                fh.write(struct.pack(f"<{len(titles)}I", *titles))


def load_cache(path: str | os.PathLike) -> CoGraph:
    with open(path, "rb") as fh:
        magic = fh.read(len(CACHE_MAGIC))
        if magic != CACHE_MAGIC:
            raise CacheFormatError("not a graph cache file")
        version, flags = struct.unpack("<II", _read_exact(fh, 8))
        if version != CACHE_VERSION:
            raise CacheFormatError(
                f"cache version {version} unsupported (expected {CACHE_VERSION}); rebuild"
            )
        n, nnz, total = struct.unpack("<QQQ", _read_exact(fh, 24))
        labels = [_read_str(fh) for _ in range(n)]
        indptr = np.frombuffer(_read_exact(fh, 8 * (n + 1)), dtype="<i8").astype(np.int64)
        indices = np.frombuffer(_read_exact(fh, 4 * nnz), dtype="<i4").astype(np.int32)
        weights = np.frombuffer(_read_exact(fh, 8 * nnz), dtype="<i8").astype(np.int64)
        title_names = None
        if flags & _FLAG_TITLE_NAMES:
            (count,) = struct.unpack("<Q", _read_exact(fh, 8))
            title_names = [_read_str(fh) for _ in range(count)]
        node_country: list[str | None] | None = None
        if flags & _FLAG_NODE_COUNTRY:
            node_country = []
            for _ in range(n):
                (length,) = struct.unpack("<I", _read_exact(fh, 4))
                if length == 0xFFFFFFFF:
                    node_country.append(None)
                else:
                    node_country.append(_read_exact(fh, length).decode("utf-8"))
        edge_titles = None
        if flags & _FLAG_EDGE_TITLES:
            (count,) = struct.unpack("<Q", _read_exact(fh, 8))
            edge_titles = {}
            for _ in range(count):
                u, v, k = struct.unpack("<III", _read_exact(fh, 12))
                titles = struct.unpack(f"<{k}I", _read_exact(fh, 4 * k))
                edge_titles[(u, v)] = tuple(int(t) for t in titles)
        if fh.read(1):
            raise CacheFormatError("trailing bytes after cache payload")
    return CoGraph(
        labels=labels,
        indptr=indptr,
        indices=indices,
        weights=weights,
        total_edge_weight=int(total),
        edge_titles=edge_titles,
        title_names=title_names,
        node_country=node_country,
    )


# ---------------------------------------------------------------------------
# Partition and cluster meta-graph outputs
# ---------------------------------------------------------------------------


def write_partition_csv(path: str | os.PathLike, labels: list[str], partition: Partition) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["name", "community"])
        for name, cid in sorted(zip(labels, partition.assignment)):
            writer.writerow([name, cid])


def write_cluster_json(path: str | os.PathLike, cg: ClusterGraph) -> None:
    payload = {
        "clusters": [
            {"id": cid, "label": info.label, "size": info.size, "volume": info.volume}
            for cid, info in sorted(cg.clusters.items())
        ],
        "links": [
            {
                "a": a,
                "b": b,
                "weight": link.weight,
                "frequency": float(fmt_score(link.frequency)),
            }
            for (a, b), link in sorted(cg.links.items())
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def write_cluster_dot(path: str | os.PathLike, cg: ClusterGraph) -> None:
    """Cluster meta-graph DOT: nodes sized by membership, edges by frequency."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("graph clusters {\n")
        for cid, info in sorted(cg.clusters.items()):
            width = 0.3 + 0.15 * math.sqrt(info.size)
            fh.write(
                f"  c{cid} [label={_dot_quote(f'{info.label} ({info.size})')}"
                f", width={width:.2f}];\n"
            )
        for (a, b), link in sorted(cg.links.items()):
            fh.write(f"  c{a} -- c{b} [label={_dot_quote(fmt_score(link.frequency))}];\n")
        fh.write("}\n")
