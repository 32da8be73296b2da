"""Counting engines over modified nice decompositions.

evaluate() is the polynomial-space engine.  It works entirely in the zeta
domain: a query (node, X) returns the rank vector (zf^i)[X] for
i = 0..|bag|, where {f^i} is a relaxation of the node's set function
(f^i[X] = f[X] when |X| = i, 0 when |X| > i, unconstrained above the
diagonal).  Values at a node count configurations of its subtree whose
covered bag vertices are exactly X.  No tables are stored; recursion
branches only at forget nodes, so the live state is a handful of rank
vectors per node on the current root-to-leaf path.

Per node the recurrences are, writing c for the child vector:

  leaf           [one]
  aux leaf e     entry i = one, plus the edge weight when e <= X and i >= |e|
  introduce v    query the child at X minus v, top rank clamped
  forget v       entry i = c(X+v)[i+1] - c(X)[i+1], plus c(X)[i] in skip mode
  join           entry i = sum_j left(X)[j] * right(X)[i-j]

In rank-free mode (union joins, used for covering problems) vectors have
length one, joins multiply pointwise and the forget rule drops the shift.

table_dp_evaluate() is the deliberately independent exponential-space
baseline: value-space tables over all bag subsets, bottom up, with
definitional subset-convolution or union-product joins.  Its tables are
retained for the whole run, which is the memory profile the polynomial
space engine exists to avoid.
"""

from __future__ import annotations

import os
import sys
import threading
import time
from dataclasses import dataclass

from .algebra import IntegerRing, PolynomialRing
from .decomp import (
    NODE_AUX,
    NODE_FORGET,
    NODE_INTRODUCE,
    NODE_INTRODUCE_EDGE,
    NODE_JOIN,
    NODE_LEAF,
    ModifiedNiceDecomposition,
    balanced_td,
    bfs_layer_separator,
    to_modified_nice,
)
from .graphs import Graph, Hypergraph, primal_graph

DISJOINT_RANKED = "disjoint-ranked"
UNION_RANKFREE = "union-rankfree"
MUST_COVER = "must-cover"
MAY_SKIP = "may-skip"

DEFAULT_TABLE_MEMORY_BYTES = 512 * 1024 * 1024
TABLE_MEMORY_ENV = "ZTDP_MAX_MEMORY"


class EngineError(RuntimeError):
    pass


class EngineInvariantError(EngineError):
    """A malformed decomposition or an internal invariant violation."""


class TableLimitError(EngineError):
    """The table baseline would exceed its memory guard."""


@dataclass(frozen=True)
class ProblemSpec:
    """Axes that select one counting problem for the shared engine."""

    name: str
    ring_kind: str          # "scalar" | "poly"
    poly_cap: int | None
    join_mode: str          # DISJOINT_RANKED | UNION_RANKFREE
    forget_mode: str        # MUST_COVER | MAY_SKIP
    edge_weight: str        # "unit" | "marker"
    answer: str             # "scalar" | "coefficients" | "coefficient"
    answer_index: int | None = None

    def __post_init__(self):
        if self.ring_kind == "scalar" and self.edge_weight == "marker":
            raise ValueError("marker weights need the polynomial ring")
        if self.ring_kind == "poly" and (self.poly_cap is None or self.poly_cap < 0):
            raise ValueError("polynomial ring needs a nonnegative cap")

    def make_ring(self, modulus: int | None = None):
        if self.ring_kind == "scalar":
            return IntegerRing(modulus)
        return PolynomialRing(self.poly_cap, modulus)

    def aux_value(self, ring, edge) -> tuple:
        """Value-space pair (value at the empty set, value at the edge set)."""
        w = ring.one if self.edge_weight == "unit" else ring.monomial(1)
        return ring.one, w

    def leaf_value(self, ring):
        return ring.one

    def extract(self, root_value):
        if self.answer == "scalar":
            return root_value
        if self.answer == "coefficients":
            return list(root_value)
        return root_value[self.answer_index]


def perfect_matching_spec() -> ProblemSpec:
    return ProblemSpec(
        "perfect-matchings", "scalar", None, DISJOINT_RANKED, MUST_COVER, "unit", "scalar"
    )


def matching_polynomial_spec(n: int) -> ProblemSpec:
    return ProblemSpec(
        "matching-polynomial", "poly", n // 2, DISJOINT_RANKED, MAY_SKIP, "marker",
        "coefficients",
    )


def set_cover_spec() -> ProblemSpec:
    return ProblemSpec(
        "set-covers", "scalar", None, UNION_RANKFREE, MUST_COVER, "unit", "scalar"
    )


def packing_spec(l: int) -> ProblemSpec:
    return ProblemSpec(
        "l-packings", "poly", l, DISJOINT_RANKED, MAY_SKIP, "marker", "coefficient", l
    )


@dataclass
class EvalStats:
    leaf_evaluations: int
    peak_live_values: int
    wall_time: float
    table_entries: int | None = None
    max_node_table_entries: int | None = None


_LEAF, _AUX, _INTRO, _FORGET, _JOIN = range(5)

_KIND_CODE = {
    NODE_LEAF: _LEAF,
    NODE_AUX: _AUX,
    NODE_INTRODUCE: _INTRO,
    NODE_FORGET: _FORGET,
    NODE_JOIN: _JOIN,
    NODE_INTRODUCE_EDGE: _JOIN,
}


def _compile(mnd: ModifiedNiceDecomposition):
    """Flatten the node list into parallel arrays, checking shape invariants."""
    k = len(mnd.nodes)
    kind = [0] * k
    child = [(-1, -1)] * k
    vbit = [0] * k
    emask = [0] * k
    esize = [0] * k
    bmask = [0] * k
    blen = [0] * k
    for i, nd in enumerate(mnd.nodes):
        kind[i] = _KIND_CODE[nd.kind]
        bmask[i] = sum(1 << v for v in nd.bag)
        blen[i] = len(nd.bag)
        cs = nd.children
        if nd.kind in (NODE_LEAF, NODE_AUX):
            if cs:
                raise EngineInvariantError(f"node {i}: leaves cannot have children")
            if nd.kind == NODE_LEAF and nd.bag:
                raise EngineInvariantError(f"node {i}: leaf bag must be empty")
            if nd.kind == NODE_AUX:
                if nd.edge is None or not set(nd.edge) <= set(nd.bag):
                    raise EngineInvariantError(f"node {i}: aux edge must lie in its bag")
                emask[i] = sum(1 << v for v in nd.edge)
                esize[i] = len(nd.edge)
        elif nd.kind in (NODE_INTRODUCE, NODE_FORGET):
            if len(cs) != 1 or nd.vertex is None:
                raise EngineInvariantError(f"node {i}: bad {nd.kind} shape")
            cbag = set(mnd.nodes[cs[0]].bag)
            want = cbag | {nd.vertex} if nd.kind == NODE_INTRODUCE else cbag - {nd.vertex}
            ok = (nd.vertex not in cbag) if nd.kind == NODE_INTRODUCE else (nd.vertex in cbag)
            if set(nd.bag) != want or not ok:
                raise EngineInvariantError(f"node {i}: bag mismatch at {nd.kind}")
            child[i] = (cs[0], -1)
            vbit[i] = 1 << nd.vertex
        else:
            if len(cs) != 2:
                raise EngineInvariantError(f"node {i}: joins need two children")
            b0, b1 = mnd.nodes[cs[0]].bag, mnd.nodes[cs[1]].bag
            if b0 != nd.bag or b1 != nd.bag:
                raise EngineInvariantError(f"node {i}: join children bags differ")
            if nd.kind == NODE_INTRODUCE_EDGE and mnd.nodes[cs[1]].kind != NODE_AUX:
                raise EngineInvariantError(f"node {i}: second child must be the aux leaf")
            child[i] = (cs[0], cs[1])
    if mnd.nodes[mnd.root].bag:
        raise EngineInvariantError("root bag must be empty")
    return kind, child, vbit, emask, esize, bmask, blen


def evaluate(
    mnd: ModifiedNiceDecomposition,
    problem: ProblemSpec,
    modulus: int | None = None,
    parallel: int = 0,
) -> tuple:
    """Run the zeta-domain engine; returns (answer, EvalStats).

    With parallel >= 2 the two branches of the topmost forget nodes run on
    threads; answers and stats are identical to a serial run by
    construction (peak accounting models serial execution).
    """
    t0 = time.perf_counter()
    ring = problem.make_ring(modulus)
    ranked = problem.join_mode == DISJOINT_RANKED
    skip = problem.forget_mode == MAY_SKIP
    kind, child, vbit, emask, esize, bmask, blen = _compile(mnd)
    one = ring.one
    add, sub, mul = ring.add, ring.sub, ring.mul
    vw = ring.value_width()
    aux_empty, aux_edge = problem.aux_value(ring, None)
    leaf_val = problem.leaf_value(ring)
    split_levels = (parallel - 1).bit_length() if parallel >= 2 else 0

    def eval_node(x: int, xmask: int, split: int) -> tuple[list, int, int]:
        k = kind[x]
        if k == _INTRO:
            vec, leaves, peak = eval_node(child[x][0], xmask & ~vbit[x], split)
            if ranked:
                vec.append(vec[-1])
            return vec, leaves, max(peak, len(vec) * vw)
        if k == _LEAF:
            return [leaf_val], 1, vw
        if k == _AUX:
            n_ranks = blen[x] + 1 if ranked else 1
            vec = [one] * n_ranks
            if emask[x] & xmask == emask[x]:
                val = add(aux_empty, aux_edge)
                for i in range(esize[x] if ranked else 0, n_ranks):
                    vec[i] = val
            return vec, 1, n_ranks * vw
        if k == _FORGET:
            c = child[x][0]
            bit = vbit[x]
            if split > 0:
                box: list = [None]

                def run():
                    box[0] = eval_node(c, xmask | bit, split - 1)

                t = threading.Thread(target=run)
                t.start()
                v0, l0, p0 = eval_node(c, xmask, split - 1)
                t.join()
                v1, l1, p1 = box[0]
            else:
                v1, l1, p1 = eval_node(c, xmask | bit, split)
                v0, l0, p0 = eval_node(c, xmask, split)
            if ranked:
                n_ranks = blen[x] + 1
                if skip:
                    out = [add(sub(v1[i + 1], v0[i + 1]), v0[i]) for i in range(n_ranks)]
                else:
                    out = [sub(v1[i + 1], v0[i + 1]) for i in range(n_ranks)]
            else:
                out = [v1[0]] if skip else [sub(v1[0], v0[0])]
            peak = max(p1, len(v1) * vw + p0, (len(v1) + len(v0) + len(out)) * vw)
            return out, l1 + l0, peak
        # join, including introduce-edge (whose right child is the aux leaf)
        c0, c1 = child[x]
        v0, l0, p0 = eval_node(c0, xmask, split)
        v1, l1, p1 = eval_node(c1, xmask, split)
        if ranked:
            n_ranks = blen[x] + 1
            out = []
            for i in range(n_ranks):
                acc = mul(v0[0], v1[i])
                for j in range(1, i + 1):
                    acc = add(acc, mul(v0[j], v1[i - j]))
                out.append(acc)
        else:
            out = [mul(v0[0], v1[0])]
        peak = max(p0, len(v0) * vw + p1, (len(v0) + len(v1) + len(out)) * vw)
        return out, l0 + l1, peak

    limit = sys.getrecursionlimit()
    need = 3 * len(mnd.nodes) + 1000
    if need > limit:
        sys.setrecursionlimit(need)
    try:
        vec, leaves, peak = eval_node(mnd.root, 0, split_levels)
    finally:
        if need > limit:
            sys.setrecursionlimit(limit)
    if len(vec) != 1:
        raise EngineInvariantError("root must evaluate to a single rank")
    stats = EvalStats(leaves, peak, time.perf_counter() - t0)
    return problem.extract(vec[0]), stats


def _remove_bit(mask: int, p: int) -> int:
    return ((mask >> (p + 1)) << p) | (mask & ((1 << p) - 1))


def _insert_bit(mask: int, p: int, b: int) -> int:
    return ((mask >> p) << (p + 1)) | (b << p) | (mask & ((1 << p) - 1))


def table_dp_evaluate(
    mnd: ModifiedNiceDecomposition,
    problem: ProblemSpec,
    modulus: int | None = None,
    max_memory_bytes: int | None = None,
) -> tuple:
    """Exponential-space baseline: one dense value-space table per node.

    Independent of the zeta engine on purpose: no transforms, joins are the
    definitional subset convolution (disjoint mode) or union product.
    Returns (answer, EvalStats); stats record the table footprint.
    """
    t0 = time.perf_counter()
    ring = problem.make_ring(modulus)
    disjoint = problem.join_mode == DISJOINT_RANKED
    skip = problem.forget_mode == MAY_SKIP
    vw = ring.value_width()
    zero, one = ring.zero, ring.one
    add, mul = ring.add, ring.mul
    aux_empty, aux_edge = problem.aux_value(ring, None)

    if max_memory_bytes is None:
        env = os.environ.get(TABLE_MEMORY_ENV)
        max_memory_bytes = int(env) if env else DEFAULT_TABLE_MEMORY_BYTES
    total_entries = sum(1 << len(nd.bag) for nd in mnd.nodes)
    widest = max(len(nd.bag) for nd in mnd.nodes)
    est_bytes = total_entries * (28 * vw + 36)
    if widest > 26 or est_bytes > max_memory_bytes:
        raise TableLimitError(
            f"estimated {est_bytes} bytes of tables (max bag {widest}) "
            f"exceeds the {max_memory_bytes} byte guard"
        )

    nodes = mnd.nodes
    order: list[int] = []
    stack = [mnd.root]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(nodes[x].children)
    order.reverse()

    tables: dict[int, list] = {}
    leaf_builds = 0
    for x in order:
        nd = nodes[x]
        bag = nd.bag
        size = 1 << len(bag)
        if nd.kind == NODE_LEAF:
            tables[x] = [one]
            leaf_builds += 1
        elif nd.kind == NODE_AUX:
            t = [zero] * size
            t[0] = aux_empty
            el = sum(1 << bag.index(v) for v in nd.edge)
            t[el] = aux_edge
            tables[x] = t
            leaf_builds += 1
        elif nd.kind == NODE_INTRODUCE:
            c = tables[nd.children[0]]
            p = bag.index(nd.vertex)
            tables[x] = [
                zero if (m >> p) & 1 else c[_remove_bit(m, p)] for m in range(size)
            ]
        elif nd.kind == NODE_FORGET:
            c = tables[nd.children[0]]
            p = nodes[nd.children[0]].bag.index(nd.vertex)
            if skip:
                tables[x] = [
                    add(c[_insert_bit(m, p, 1)], c[_insert_bit(m, p, 0)])
                    for m in range(size)
                ]
            else:
                tables[x] = [c[_insert_bit(m, p, 1)] for m in range(size)]
        else:
            left = tables[nd.children[0]]
            right = tables[nd.children[1]]
            out = [zero] * size
            if disjoint:
                if nd.kind == NODE_INTRODUCE_EDGE:
                    # the aux table has at most two nonzero entries
                    for am, av in enumerate(right):
                        if av == zero:
                            continue
                        for lm in range(size):
                            if lm & am == 0 and left[lm] != zero:
                                out[lm | am] = add(out[lm | am], mul(left[lm], av))
                else:
                    for m in range(size):
                        acc = zero
                        s = m
                        while True:
                            lv = left[s]
                            if lv != zero:
                                rv = right[m ^ s]
                                if rv != zero:
                                    acc = add(acc, mul(lv, rv))
                            if s == 0:
                                break
                            s = (s - 1) & m
                        out[m] = acc
            else:
                nz_l = [(m, v) for m, v in enumerate(left) if v != zero]
                nz_r = [(m, v) for m, v in enumerate(right) if v != zero]
                for lm, lv in nz_l:
                    for rm, rv in nz_r:
                        u = lm | rm
                        out[u] = add(out[u], mul(lv, rv))
            tables[x] = out

    root_table = tables[mnd.root]
    if len(root_table) != 1:
        raise EngineInvariantError("root table must have a single entry")
    stats = EvalStats(
        leaf_evaluations=leaf_builds,
        peak_live_values=total_entries * vw,
        wall_time=time.perf_counter() - t0,
        table_entries=total_entries,
        max_node_table_entries=1 << widest,
    )
    return problem.extract(root_table[0]), stats


# ---------------------------------------------------------------------------
# problem-level wrappers


def default_decomposition(obj):
    g = obj if isinstance(obj, Graph) else primal_graph(obj)
    return balanced_td(g, bfs_layer_separator)


def _run(obj, problem, td, modulus):
    mnd = to_modified_nice(td if td is not None else default_decomposition(obj), obj)
    answer, _ = evaluate(mnd, problem, modulus)
    return answer


def count_perfect_matchings(g: Graph, td=None, modulus: int | None = None) -> int:
    return _run(g, perfect_matching_spec(), td, modulus)


def matching_polynomial(g: Graph, td=None, modulus: int | None = None) -> list[int]:
    """Counts of matchings by size, indices 0..floor(n/2)."""
    return _run(g, matching_polynomial_spec(g.n), td, modulus)


def count_set_covers(hg: Hypergraph, td=None, modulus: int | None = None) -> int:
    covered = set().union(*hg.hyperedges) if hg.hyperedges else set()
    if len(covered) < hg.n:
        return 0
    return _run(hg, set_cover_spec(), td, modulus)


def count_l_packings(hg: Hypergraph, l: int, td=None, modulus: int | None = None) -> int:
    if not (0 <= l <= len(hg.hyperedges)):
        raise ValueError(f"l must be within 0..{len(hg.hyperedges)}, got {l}")
    return _run(hg, packing_spec(l), td, modulus)
