"""Shared instance generators and the acceptance summary hook."""

import itertools
import random

from ztdp import make_graph, make_hypergraph

# filled by tests/test_acceptance.py, one line per criterion
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def all_pairs(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def connected_mask(n, mask, pairs):
    if n == 0:
        return False
    adj = [0] * n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    seen = frontier = 1
    while frontier:
        nxt = 0
        for v in range(n):
            if frontier >> v & 1:
                nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


def connected_iso_classes(n):
    """One edge list per isomorphism class of connected graphs on n vertices.

    Masks are scanned in increasing order, so the first member of each class
    found is its representative; the whole orbit is then marked as seen.
    """
    pairs = all_pairs(n)
    index = {p: i for i, p in enumerate(pairs)}
    remaps = [
        [index[tuple(sorted((perm[u], perm[v])))] for (u, v) in pairs]
        for perm in itertools.permutations(range(n))
    ]
    seen = set()
    reps = []
    for mask in range(1 << len(pairs)):
        if mask in seen or not connected_mask(n, mask, pairs):
            continue
        reps.append([pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        for remap in remaps:
            pm = 0
            rest = mask
            while rest:
                low = rest & -rest
                pm |= 1 << remap[low.bit_length() - 1]
                rest ^= low
            seen.add(pm)
    return reps


def random_connected_graph(rng, n, max_edges=None):
    """Random spanning tree plus a random number of extra edges."""
    verts = list(range(n))
    rng.shuffle(verts)
    edges = set()
    for i in range(1, n):
        u = verts[rng.randrange(i)]
        edges.add(tuple(sorted((u, verts[i]))))
    others = [p for p in all_pairs(n) if p not in edges]
    cap = len(all_pairs(n)) if max_edges is None else max_edges
    extra = rng.randrange(0, cap - len(edges) + 1)
    edges.update(rng.sample(others, min(extra, len(others))))
    return make_graph(n, sorted(edges))


def random_hypergraph(rng, max_universe=6, max_sets=6):
    n = rng.randrange(1, max_universe + 1)
    s = rng.randrange(1, max_sets + 1)
    hes = []
    for _ in range(s):
        size = rng.randrange(1, n + 1)
        hes.append(frozenset(rng.sample(range(n), size)))
    return make_hypergraph(n, hes)
