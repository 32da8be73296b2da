"""Brute-force reference counters.

Everything here is deliberately transform-free so it can arbitrate the
engine: plain recursion over vertices, edges or hyperedge subsets.
Budgets keep accidental huge inputs from hanging a test run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, Hypergraph


class BudgetError(ValueError):
    """An oracle was asked to exceed its instance-size budget."""


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 20
    max_edges: int = 24
    max_hyperedges: int = 22
    max_tree_depth_vertices: int = 12


DEFAULT_BUDGET = OracleBudget()


def bf_perfect_matchings(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Count perfect matchings by always matching the lowest uncovered vertex."""
    if g.n > budget.max_vertices:
        raise BudgetError(f"{g.n} vertices exceeds budget {budget.max_vertices}")
    if g.n == 0:
        return 1
    if g.n % 2 == 1:
        return 0
    nbr = g.neighbor_masks
    full = (1 << g.n) - 1

    def rec(uncovered: int) -> int:
        if uncovered == 0:
            return 1
        v = (uncovered & -uncovered).bit_length() - 1
        total = 0
        cands = nbr[v] & uncovered
        while cands:
            low = cands & -cands
            cands ^= low
            total += rec(uncovered ^ low ^ (1 << v))
        return total

    return rec(full)


def bf_matchings_by_size(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> list[int]:
    """Counts of matchings bucketed by size, indices 0..floor(n/2).

    Walks the include/exclude tree over the edge list, which enumerates
    exactly the matchings among all edge subsets.
    """
    if len(g.edges) > budget.max_edges:
        raise BudgetError(f"{len(g.edges)} edges exceeds budget {budget.max_edges}")
    counts = [0] * (g.n // 2 + 1)
    edge_masks = [(1 << u) | (1 << v) for u, v in g.edges]
    m = len(edge_masks)

    def rec(i: int, used: int, size: int):
        if i == m:
            counts[size] += 1
            return
        rec(i + 1, used, size)
        em = edge_masks[i]
        if not (used & em):
            rec(i + 1, used | em, size + 1)

    rec(0, 0, 0)
    return counts


def _hyperedge_masks(hg: Hypergraph) -> list[int]:
    return [sum(1 << v for v in h) for h in hg.hyperedges]


def bf_set_covers(hg: Hypergraph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Count subcollections (minimal or not) whose union is the universe."""
    s = len(hg.hyperedges)
    if s > budget.max_hyperedges:
        raise BudgetError(f"{s} hyperedges exceeds budget {budget.max_hyperedges}")
    masks = _hyperedge_masks(hg)
    full = (1 << hg.n) - 1
    total = 0
    for pick in range(1 << s):
        covered = 0
        p = pick
        while p:
            low = p & -p
            covered |= masks[low.bit_length() - 1]
            p ^= low
        if covered == full:
            total += 1
    return total


def bf_l_packings(hg: Hypergraph, l: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Count sets of exactly l pairwise disjoint hyperedges."""
    s = len(hg.hyperedges)
    if s > budget.max_hyperedges:
        raise BudgetError(f"{s} hyperedges exceeds budget {budget.max_hyperedges}")
    if not (0 <= l <= s):
        raise ValueError(f"l must be within 0..{s}, got {l}")
    masks = _hyperedge_masks(hg)

    def rec(i: int, used: int, left: int) -> int:
        if left == 0:
            return 1
        if s - i < left:
            return 0
        total = rec(i + 1, used, left)
        if not (used & masks[i]):
            total += rec(i + 1, used | masks[i], left - 1)
        return total

    return rec(0, 0, l)


def exact_tree_depth(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Tree-depth via the recursive characterization: 0 for the empty graph,
    max over components when disconnected, else 1 + min over root removals."""
    if g.n > budget.max_tree_depth_vertices:
        raise BudgetError(
            f"{g.n} vertices exceeds tree-depth budget {budget.max_tree_depth_vertices}"
        )
    nbr = g.neighbor_masks
    memo: dict[int, int] = {}

    def components(mask: int) -> list[int]:
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                v = (frontier & -frontier).bit_length() - 1
                frontier ^= frontier & -frontier
                new = nbr[v] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def depth(mask: int) -> int:
        if mask == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        comps = components(mask)
        if len(comps) > 1:
            best = max(depth(c) for c in comps)
        else:
            best = None
            rest = mask
            while rest:
                low = rest & -rest
                rest ^= low
                d = 1 + depth(mask ^ low)
                if best is None or d < best:
                    best = d
        memo[mask] = best
        return best

    return depth((1 << g.n) - 1)
