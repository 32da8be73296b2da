"""Tree decompositions: validation, metrics, constructors and file formats.

Two shapes live here.  TreeDecomposition is the ordinary rooted bag tree.
ModifiedNiceDecomposition is its typed normal form used by the engine:
empty root and leaf bags, unary introduce/forget chains, binary joins, and
every (hyper)edge attached at exactly one introduce-edge node whose second
child is an auxiliary leaf carrying that edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .graphs import Graph, GraphError, GridSpec, Hypergraph, grid_graph


class DecompositionError(ValueError):
    pass


NODE_LEAF = "leaf"
NODE_AUX = "aux-leaf"
NODE_INTRODUCE = "introduce-vertex"
NODE_INTRODUCE_EDGE = "introduce-edge"
NODE_FORGET = "forget-vertex"
NODE_JOIN = "join"


@dataclass
class TreeDecomposition:
    """Rooted tree of bags; parent[root] == -1."""

    bags: list[frozenset[int]]
    parent: list[int]

    def __post_init__(self):
        k = len(self.bags)
        if len(self.parent) != k or k == 0:
            raise DecompositionError("bags and parent arrays must match and be nonempty")
        roots = [i for i, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise DecompositionError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.children: list[list[int]] = [[] for _ in range(k)]
        for i, p in enumerate(self.parent):
            if p != -1:
                if not (0 <= p < k):
                    raise DecompositionError(f"node {i} has invalid parent {p}")
                self.children[p].append(i)
        # every node must reach the root
        seen = 0
        stack = [self.root]
        while stack:
            x = stack.pop()
            seen += 1
            stack.extend(self.children[x])
        if seen != k:
            raise DecompositionError("parent array does not describe a tree")


def single_bag_decomposition(n: int) -> TreeDecomposition:
    return TreeDecomposition([frozenset(range(n))], [-1])


@dataclass(frozen=True)
class MNDNode:
    kind: str
    bag: tuple[int, ...]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: tuple[int, ...] | None = None
    edge_index: int | None = None


@dataclass
class ModifiedNiceDecomposition:
    nodes: list[MNDNode]
    root: int

    @property
    def leaf_count(self) -> int:
        return sum(1 for nd in self.nodes if nd.kind in (NODE_LEAF, NODE_AUX))


@dataclass
class ValidationReport:
    violations: list[tuple[str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        parts = [f"{kind}: {witness!r}" for kind, witness in self.violations[:5]]
        more = len(self.violations) - len(parts)
        if more > 0:
            parts.append(f"... {more} more")
        return "; ".join(parts)


def _tree_view(td) -> tuple[list[frozenset[int]], list[list[int]], int]:
    """Bags, children and root for either decomposition shape."""
    if isinstance(td, ModifiedNiceDecomposition):
        bags = [frozenset(nd.bag) for nd in td.nodes]
        children = [list(nd.children) for nd in td.nodes]
        return bags, children, td.root
    return list(td.bags), [list(c) for c in td.children], td.root


def _edge_family(obj) -> list[tuple[int, ...]]:
    if isinstance(obj, Hypergraph):
        return [tuple(sorted(h)) for h in obj.hyperedges]
    return [tuple(e) for e in obj.edges]


def validate(obj, td) -> ValidationReport:
    """Check the three decomposition properties against a graph or hypergraph.

    Returns a report listing every violation with a witness; bags that
    reference vertices outside 0..n-1 are rejected outright.
    """
    bags, children, root = _tree_view(td)
    n = obj.n
    for i, bag in enumerate(bags):
        for v in bag:
            if not (0 <= v < n):
                raise DecompositionError(f"bag {i} references invalid vertex {v}")
    report = ValidationReport()

    covered = set().union(*bags) if bags else set()
    for v in range(n):
        if v not in covered:
            report.violations.append(("vertex-coverage", v))

    for e in _edge_family(obj):
        es = set(e)
        if not any(es <= bag for bag in bags):
            report.violations.append(("edge-coverage", tuple(e)))

    # occurrence sets must induce connected subtrees
    occ: dict[int, list[int]] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            occ.setdefault(v, []).append(i)
    adj: list[list[int]] = [[] for _ in bags]
    for p, cs in enumerate(children):
        for c in cs:
            adj[p].append(c)
            adj[c].append(p)
    for v, nodes in occ.items():
        if len(nodes) == 1:
            continue
        members = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in members and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(members):
            missing = min(members - seen)
            report.violations.append(("connectivity", (v, nodes[0], missing)))
    return report


@dataclass(frozen=True)
class DecompositionMetrics:
    width: int
    tree_depth_h: int
    node_count: int
    join_count: int
    max_forget_nodes_per_path: int | None = None


def metrics(td) -> DecompositionMetrics:
    """Width, the path-union depth parameter h, and node counts."""
    bags, children, root = _tree_view(td)
    width = max(len(b) for b in bags) - 1
    join_count = sum(1 for c in children if len(c) >= 2)

    counts: dict[int, int] = {}
    distinct = 0
    best = 0
    forgets = 0
    best_forgets = 0
    is_mnd = isinstance(td, ModifiedNiceDecomposition)
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        x, done = stack.pop()
        bag = bags[x]
        if done:
            for v in bag:
                counts[v] -= 1
                if counts[v] == 0:
                    distinct -= 1
            if is_mnd and td.nodes[x].kind == NODE_FORGET:
                forgets -= 1
            continue
        for v in bag:
            c = counts.get(v, 0)
            counts[v] = c + 1
            if c == 0:
                distinct += 1
        if is_mnd and td.nodes[x].kind == NODE_FORGET:
            forgets += 1
        stack.append((x, True))
        if children[x]:
            for c in children[x]:
                stack.append((c, False))
        else:
            best = max(best, distinct)
            best_forgets = max(best_forgets, forgets)
    return DecompositionMetrics(
        width=width,
        tree_depth_h=best,
        node_count=len(bags),
        join_count=join_count,
        max_forget_nodes_per_path=best_forgets if is_mnd else None,
    )


# ---------------------------------------------------------------------------
# transform to the modified nice form


def to_modified_nice(td: TreeDecomposition, obj) -> ModifiedNiceDecomposition:
    """Normalize a valid decomposition of obj into the typed nice form.

    Joins are binarized left to right, bag changes become unary chains, and
    each (hyper)edge is attached at the shallowest node whose bag contains
    it, directly above the introduction of its last endpoint.
    """
    report = validate(obj, td)
    if not report.ok:
        raise DecompositionError(f"decomposition invalid: {report.summary()}")
    edges = _edge_family(obj)
    bags = [set(b) for b in td.bags]
    k = len(bags)

    depth = [0] * k
    order = [td.root]
    for x in order:
        for c in td.children[x]:
            depth[c] = depth[x] + 1
            order.append(c)

    hosted: dict[int, list[int]] = {i: [] for i in range(k)}
    for ei, e in enumerate(edges):
        es = set(e)
        host = min(
            (i for i in range(k) if es <= bags[i]),
            key=lambda i: (depth[i], i),
        )
        hosted[host].append(ei)

    nodes: list[MNDNode] = []

    def add(kind, bag, children=(), vertex=None, edge=None, edge_index=None) -> int:
        nodes.append(
            MNDNode(kind, tuple(sorted(bag)), tuple(children), vertex, edge, edge_index)
        )
        return len(nodes) - 1

    def splice_edge(cur: int, bag: set[int], ei: int) -> int:
        aux = add(NODE_AUX, bag, edge=edges[ei], edge_index=ei)
        return add(NODE_INTRODUCE_EDGE, bag, (cur, aux), edge=edges[ei], edge_index=ei)

    def rise(cur: int, cur_bag: set[int], target: set[int], edge_ids: list[int]) -> int:
        """Forget then introduce one vertex at a time, splicing hosted edges
        as soon as all their endpoints are present."""
        pending = list(edge_ids)
        bag = set(cur_bag)
        for v in sorted(bag - target):
            bag.discard(v)
            cur = add(NODE_FORGET, bag, (cur,), vertex=v)
        for v in sorted(target - bag):
            bag.add(v)
            cur = add(NODE_INTRODUCE, bag, (cur,), vertex=v)
            ready = [ei for ei in pending if v in edges[ei] and set(edges[ei]) <= bag]
            for ei in ready:
                cur = splice_edge(cur, bag, ei)
                pending.remove(ei)
        for ei in pending:  # edge already complete at the chain start
            cur = splice_edge(cur, bag, ei)
        return cur

    built: dict[int, int] = {}
    for x in reversed(order):
        kids = td.children[x]
        if not kids:
            cur = add(NODE_LEAF, ())
            cur = rise(cur, set(), bags[x], hosted[x])
        elif len(kids) == 1:
            cur = rise(built[kids[0]], bags[kids[0]], bags[x], hosted[x])
        else:
            tops = [rise(built[c], bags[c], bags[x], []) for c in kids]
            cur = tops[0]
            for t in tops[1:]:
                cur = add(NODE_JOIN, bags[x], (cur, t))
            for ei in hosted[x]:
                cur = splice_edge(cur, bags[x], ei)
        built[x] = cur

    cur = built[td.root]
    bag = set(bags[td.root])
    for v in sorted(bag):
        bag.discard(v)
        cur = add(NODE_FORGET, bag, (cur,), vertex=v)
    return ModifiedNiceDecomposition(nodes, cur)


# ---------------------------------------------------------------------------
# balanced construction from separator oracles

SeparatorOracle = Callable[[Graph, frozenset], tuple[set, set, set]]


def balanced_td(g: Graph, sep: SeparatorOracle, base_size: int = 2) -> TreeDecomposition:
    """Recursive-separator construction.

    Each node's bag is its part's separator plus the ancestor vertices that
    still have neighbors in the part; parts of size <= base_size become
    leaf bags.  The oracle must return a partition (S, A, B) of the given
    part with no A-B edges; anything else is rejected with a witness.
    """
    nbr = g.neighbor_masks
    bags: list[frozenset[int]] = []
    parent: list[int] = []

    def add(bag, par) -> int:
        bags.append(frozenset(bag))
        parent.append(par)
        return len(bags) - 1

    stack: list[tuple[frozenset, frozenset, int]] = [
        (frozenset(range(g.n)), frozenset(), -1)
    ]
    while stack:
        part, active, par = stack.pop()
        if len(part) <= base_size:
            add(part | active, par)
            continue
        s_raw, a_raw, b_raw = sep(g, part)
        s, a, b = frozenset(s_raw), frozenset(a_raw), frozenset(b_raw)
        if (s | a | b) != part or len(s) + len(a) + len(b) != len(part):
            raise DecompositionError(
                f"oracle returned a non-partition of a part of size {len(part)}"
            )
        a_mask = sum(1 << v for v in a)
        b_mask = sum(1 << v for v in b)
        for u in a:
            if nbr[u] & b_mask:
                w = (nbr[u] & b_mask).bit_length() - 1
                raise DecompositionError(f"oracle separator leaks edge ({u}, {w})")
        if len(a) == len(part) or len(b) == len(part):
            raise DecompositionError("separator made no progress")
        x = add(s | active, par)
        grown = active | s
        for p, p_mask in ((a, a_mask), (b, b_mask)):
            if p:
                child_active = frozenset(u for u in grown if nbr[u] & p_mask)
                stack.append((p, child_active, x))
    return TreeDecomposition(bags, parent)


def bfs_layer_separator(g: Graph, part: frozenset) -> tuple[set, set, set]:
    """Generic oracle: split off a component, or cut at a balanced BFS layer."""
    members = set(part)
    start = min(members)
    comp = {start}
    frontier = [start]
    layers = [{start}]
    while frontier:
        nxt = set()
        for u in frontier:
            for w in g.adjacency[u]:
                if w in members and w not in comp:
                    comp.add(w)
                    nxt.add(w)
        if nxt:
            layers.append(nxt)
        frontier = sorted(nxt)
    if len(comp) != len(members):
        return set(), comp, members - comp
    sizes = [len(l) for l in layers]
    total = len(members)
    best_i, best_cost = 0, None
    below = 0
    for i, sz in enumerate(sizes):
        cost = max(below, total - below - sz)
        if best_cost is None or cost < best_cost:
            best_i, best_cost = i, cost
        below += sz
    s = layers[best_i]
    a = set().union(*layers[:best_i]) if best_i else set()
    b = members - s - a
    return s, a, b


def trivial_separator(g: Graph, part: frozenset) -> tuple[set, set, set]:
    return set(part), set(), set()


# ---------------------------------------------------------------------------
# grid constructions


@dataclass(frozen=True)
class GridRegion:
    """Axis-aligned box inside a grid, bounds inclusive."""

    spec: GridSpec
    low: tuple[int, ...]
    high: tuple[int, ...]

    def __post_init__(self):
        d = self.spec.dims
        if len(self.low) != d or len(self.high) != d:
            raise DecompositionError("region bounds must match grid dimensions")
        for i in range(d):
            if not (0 <= self.low[i] <= self.high[i] < self.spec.lengths[i]):
                raise DecompositionError(f"region bounds invalid in dimension {i}")

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.low, self.high))

    def vertices(self):
        ranges = [range(l, h + 1) for l, h in zip(self.low, self.high)]
        for coords in itertools.product(*ranges):
            yield self.spec.encode(coords)


def grid_separator(region: GridRegion) -> tuple[set, set, set]:
    """Cut the longest dimension (lowest index on ties) with a middle slab of
    thickness one; A and B are the open sides."""
    lengths = region.lengths
    if max(lengths) == 1:
        raise DecompositionError("region of single vertex cannot be cut")
    dim = max(range(len(lengths)), key=lambda i: (lengths[i], -i))
    cut = region.low[dim] + (lengths[dim] - 1) // 2
    s: set[int] = set()
    a: set[int] = set()
    b: set[int] = set()
    spec = region.spec
    ranges = [range(l, h + 1) for l, h in zip(region.low, region.high)]
    for coords in itertools.product(*ranges):
        vid = spec.encode(coords)
        if coords[dim] == cut:
            s.add(vid)
        elif coords[dim] < cut:
            a.add(vid)
        else:
            b.add(vid)
    return s, a, b


def make_grid_separator_oracle(spec: GridSpec) -> SeparatorOracle:
    """Separator oracle cutting the bounding box of the given part."""

    def oracle(g: Graph, part: frozenset) -> tuple[set, set, set]:
        coords = [spec.decode(v) for v in part]
        low = tuple(min(c[i] for c in coords) for i in range(spec.dims))
        high = tuple(max(c[i] for c in coords) for i in range(spec.dims))
        s, a, b = grid_separator(GridRegion(spec, low, high))
        return s & part, a & part, b & part

    return oracle


def grid_balanced_td(spec: GridSpec) -> TreeDecomposition:
    return balanced_td(grid_graph(spec), make_grid_separator_oracle(spec))


def grid_path_decomposition(spec: GridSpec) -> TreeDecomposition:
    """Layer-by-layer path decomposition: between consecutive layers of the
    first dimension, alternately add one vertex of the next layer and forget
    its partner in the current one.  Max bag size is cross-section + 1."""
    stride = spec.strides[0]
    n1 = spec.lengths[0]
    bags: list[frozenset[int]] = []
    parent: list[int] = []

    def add(bag):
        bags.append(frozenset(bag))
        parent.append(len(bags) - 2)

    cur = set(range(stride))
    add(cur)
    for j in range(n1 - 1):
        base = j * stride
        for c in range(stride):
            cur = cur | {base + stride + c}
            add(cur)
            cur = cur - {base + c}
            add(cur)
    return TreeDecomposition(bags, parent)


# ---------------------------------------------------------------------------
# file formats


def format_tree_decomposition(td: TreeDecomposition, n: int) -> str:
    """PACE-style text: 's td <bags> <max-bag-size> <n>', 'b' lines, tree edges."""
    lines = [f"s td {len(td.bags)} {max(len(b) for b in td.bags)} {n}"]
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1), *[str(v + 1) for v in sorted(bag)]]))
    for i, p in enumerate(td.parent):
        if p != -1:
            u, v = sorted((i + 1, p + 1))
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def parse_tree_decomposition(text: str, root: int = 0) -> TreeDecomposition:
    """Parse the PACE-style format and re-root at the given node (default 0)."""
    header = None
    bag_lines: dict[int, list[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise DecompositionError(f"line {ln}: duplicate header")
            if len(parts) != 5 or parts[1] != "td":
                raise DecompositionError(f"line {ln}: expected 's td <bags> <width+1> <n>'")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            idx = int(parts[1]) - 1
            if idx in bag_lines:
                raise DecompositionError(f"line {ln}: duplicate bag {idx + 1}")
            bag_lines[idx] = [int(t) - 1 for t in parts[2:] if t != "0"]
        else:
            if len(parts) != 2:
                raise DecompositionError(f"line {ln}: expected a tree edge 'u v'")
            tree_edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise DecompositionError("missing 's td' header")
    k = header[0]
    if set(bag_lines) != set(range(k)):
        raise DecompositionError("bag lines do not cover 1..#bags exactly")
    if len(tree_edges) != k - 1:
        raise DecompositionError(f"expected {k - 1} tree edges, found {len(tree_edges)}")
    adj: list[list[int]] = [[] for _ in range(k)]
    for u, v in tree_edges:
        if not (0 <= u < k and 0 <= v < k):
            raise DecompositionError(f"tree edge ({u + 1}, {v + 1}) out of range")
        adj[u].append(v)
        adj[v].append(u)
    if not (0 <= root < k):
        raise DecompositionError(f"root {root} out of range")
    parent = [-2] * k
    parent[root] = -1
    queue = [root]
    for x in queue:
        for y in adj[x]:
            if parent[y] == -2:
                parent[y] = x
                queue.append(y)
    if any(p == -2 for p in parent):
        raise DecompositionError("decomposition tree is disconnected")
    bags = [frozenset(bag_lines[i]) for i in range(k)]
    return TreeDecomposition(bags, parent)


MND_SCHEMA = "ztdp/nice-decomposition/1"


def mnd_to_json(mnd: ModifiedNiceDecomposition) -> dict:
    nodes = []
    for i, nd in enumerate(mnd.nodes):
        entry: dict = {"id": i, "kind": nd.kind, "bag": list(nd.bag)}
        if nd.children:
            entry["children"] = list(nd.children)
        if nd.vertex is not None:
            entry["vertex"] = nd.vertex
        if nd.edge is not None:
            entry["edge"] = list(nd.edge)
            entry["edge_index"] = nd.edge_index
        nodes.append(entry)
    return {"schema": MND_SCHEMA, "root": mnd.root, "nodes": nodes}


def mnd_from_json(data: dict) -> ModifiedNiceDecomposition:
    if data.get("schema") != MND_SCHEMA:
        raise DecompositionError(f"unknown schema {data.get('schema')!r}")
    raw = sorted(data["nodes"], key=lambda e: e["id"])
    if [e["id"] for e in raw] != list(range(len(raw))):
        raise DecompositionError("node ids must be 0..k-1")
    nodes = [
        MNDNode(
            kind=e["kind"],
            bag=tuple(e["bag"]),
            children=tuple(e.get("children", ())),
            vertex=e.get("vertex"),
            edge=tuple(e["edge"]) if "edge" in e else None,
            edge_index=e.get("edge_index"),
        )
        for e in raw
    ]
    return ModifiedNiceDecomposition(nodes, data["root"])
