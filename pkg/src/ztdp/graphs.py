"""Graphs, hypergraphs, grid builders and the plain-text file formats.

Vertices are always 0..n-1.  Edges are stored as (min, max) pairs in a
stable order.  Hyperedges are frozensets kept in input order, duplicates
allowed (multiset semantics).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


class GraphError(ValueError):
    """Malformed graph, hypergraph, grid spec or input file."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    multigraph: bool = False

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class Hypergraph:
    n: int
    hyperedges: tuple[frozenset[int], ...]


def make_graph(n: int, edges, multigraph: bool = False) -> Graph:
    """Build a validated Graph from an iterable of vertex pairs."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    out: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {e!r} references a vertex outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen and not multigraph:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    return Graph(n, tuple(out), multigraph)


def make_hypergraph(n: int, hyperedges) -> Hypergraph:
    """Build a validated Hypergraph; hyperedges must be nonempty subsets of 0..n-1."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    out = []
    for h in hyperedges:
        hs = frozenset(h)
        if not hs:
            raise GraphError("empty hyperedge")
        if not all(0 <= v < n for v in hs):
            raise GraphError(f"hyperedge {sorted(hs)} outside 0..{n - 1}")
        out.append(hs)
    return Hypergraph(n, tuple(out))


@dataclass(frozen=True)
class GridSpec:
    """Axis lengths of a d-dimensional grid; vertex ids are row-major."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        if len(self.lengths) == 0:
            raise GraphError("grid needs at least one dimension")
        if any(l < 1 for l in self.lengths):
            raise GraphError("grid lengths must be >= 1")

    @property
    def dims(self) -> int:
        return len(self.lengths)

    @property
    def volume(self) -> int:
        v = 1
        for l in self.lengths:
            v *= l
        return v

    @property
    def min_length(self) -> int:
        return min(self.lengths)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        # last dimension varies fastest
        s = [1] * self.dims
        for i in range(self.dims - 2, -1, -1):
            s[i] = s[i + 1] * self.lengths[i + 1]
        return tuple(s)

    def encode(self, coords) -> int:
        return sum(c * s for c, s in zip(coords, self.strides))

    def decode(self, vid: int) -> tuple[int, ...]:
        out = []
        for s in self.strides:
            out.append(vid // s)
            vid %= s
        return tuple(out)


def grid_graph(spec: GridSpec) -> Graph:
    """Axis-aligned grid graph on spec.volume vertices."""
    edges = []
    for vid in range(spec.volume):
        coords = spec.decode(vid)
        for i in range(spec.dims):
            if coords[i] + 1 < spec.lengths[i]:
                edges.append((vid, vid + spec.strides[i]))
    return Graph(spec.volume, tuple(edges))


def closed_neighborhood_hypergraph(g: Graph) -> Hypergraph:
    """One hyperedge N[v] per vertex, in vertex order.  Set covers of this
    hypergraph are exactly the dominating sets of g."""
    return Hypergraph(g.n, tuple(frozenset({v, *g.adjacency[v]}) for v in range(g.n)))


def graph_as_hypergraph(g: Graph) -> Hypergraph:
    return Hypergraph(g.n, tuple(frozenset(e) for e in g.edges))


def primal_graph(hg: Hypergraph) -> Graph:
    """Graph on the same vertices with a clique on every hyperedge."""
    pairs: list[tuple[int, int]] = []
    seen = set()
    for h in hg.hyperedges:
        for u, v in itertools.combinations(sorted(h), 2):
            if (u, v) not in seen:
                seen.add((u, v))
                pairs.append((u, v))
    return Graph(hg.n, tuple(pairs))


# ---------------------------------------------------------------------------
# text formats: "c <comment>", "p gr <n> <m>" with 1-based edge lines, and
# "p hg <n> <m>" with one 1-based member list per hyperedge


def format_graph(g: Graph, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p gr {g.n} {len(g.edges)}")
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def format_hypergraph(hg: Hypergraph, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p hg {hg.n} {len(hg.hyperedges)}")
    for h in hg.hyperedges:
        lines.append(" ".join(str(v + 1) for v in sorted(h)))
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield ln, line.split()


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    try:
        ln, head = next(lines)
    except StopIteration:
        raise GraphError("empty graph file") from None
    if len(head) != 4 or head[0] != "p" or head[1] != "gr":
        raise GraphError(f"line {ln}: expected 'p gr <n> <m>' header")
    n, m = int(head[2]), int(head[3])
    edges = []
    for ln, parts in lines:
        if len(parts) != 2:
            raise GraphError(f"line {ln}: expected 'u v'")
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        edges.append((u, v))
    if len(edges) != m:
        raise GraphError(f"header promises {m} edges, found {len(edges)}")
    return make_graph(n, edges)


def parse_hypergraph(text: str) -> Hypergraph:
    lines = _content_lines(text)
    try:
        ln, head = next(lines)
    except StopIteration:
        raise GraphError("empty hypergraph file") from None
    if len(head) != 4 or head[0] != "p" or head[1] != "hg":
        raise GraphError(f"line {ln}: expected 'p hg <n> <m>' header")
    n, m = int(head[2]), int(head[3])
    hyperedges = []
    for ln, parts in lines:
        hyperedges.append([int(p) - 1 for p in parts])
    if len(hyperedges) != m:
        raise GraphError(f"header promises {m} hyperedges, found {len(hyperedges)}")
    return make_hypergraph(n, hyperedges)


def file_comments(text: str) -> list[str]:
    """The 'c ...' comment payloads of a graph/hypergraph file, in order."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("c"):
            out.append(line[1:].strip())
    return out
