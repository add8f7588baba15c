"""The combinatorial Bass-Serre graph of a two-factor free product.

Vertices are the cosets of the product modulo each factor (both left
quotients), edges are the irreducibles of the product, and the two quotient
maps give source and target.  Each windowed truncation of this graph is a
tree: it keeps the edges up to the given word length and exactly the
vertices they touch, so connectivity is preserved through prefixes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .fusion import FreeProduct, FusionRing, Irrep, make_ring
from .subgroups import FactorSubgroup, cosets_up_to


@dataclass(frozen=True)
class BassSerreGraph:
    """An oriented graph with labeled vertices and edges.

    ``vertices`` is a tuple of (side, representative word) pairs, sides 0 and
    1 naming the two quotients.  ``edges`` is a tuple of words; ``src`` and
    ``tgt`` give vertex indices per edge.
    """

    vertices: tuple
    edges: tuple
    src: tuple
    tgt: tuple
    depth: int

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_json_dict(self, render=None) -> dict:
        if render is None:
            render = lambda w: repr(tuple(w))
        return {
            "depth": self.depth,
            "vertices": [
                {"side": side, "representative": render(rep)}
                for side, rep in self.vertices
            ],
            "edges": [
                {"word": render(w), "src": s, "tgt": t}
                for w, s, t in zip(self.edges, self.src, self.tgt)
            ],
        }

    def to_dot(self, render=None) -> str:
        if render is None:
            render = lambda w: repr(tuple(w))
        lines = ["digraph bass_serre {"]
        for i, (side, rep) in enumerate(self.vertices):
            lines.append(
                '  v%d [label="%s | %s"];' % (i, side, render(rep))
            )
        for w, s, t in zip(self.edges, self.src, self.tgt):
            lines.append('  v%d -> v%d [label="%s"];' % (s, t, render(w)))
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class TreeVerdict:
    kind: str  # "tree", "disconnected" or "cycle"
    witness: tuple = ()

    @property
    def is_tree(self) -> bool:
        return self.kind == "tree"

    def describe(self) -> str:
        if self.kind == "tree":
            return "tree"
        if self.kind == "disconnected":
            return "disconnected: vertices %r and %r lie in different components" % (
                self.witness[0],
                self.witness[1],
            )
        return "cycle through edges %r" % (list(self.witness),)


def build_tree(G0, G1, depth: int, budget: int | None = None) -> BassSerreGraph:
    """Windowed Bass-Serre graph of the free product of two rings."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    ring = make_ring(FreeProduct(G0, G1))
    if ring.factor_count != 2:
        raise ValueError("build_tree needs exactly two factors")
    cosets0 = cosets_up_to(ring, FactorSubgroup(0), depth, budget=budget)
    cosets1 = cosets_up_to(ring, FactorSubgroup(1), depth, budget=budget)
    vertices = [(0, c.representative) for c in cosets0]
    vertices += [(1, c.representative) for c in cosets1]
    index = {v: i for i, v in enumerate(vertices)}
    rep0 = {}
    for c in cosets0:
        for m in c.members:
            rep0[m] = c.representative
    rep1 = {}
    for c in cosets1:
        for m in c.members:
            rep1[m] = c.representative
    edges = ring.irreps_up_to(depth)
    src = tuple(index[(0, rep0[w])] for w in edges)
    tgt = tuple(index[(1, rep1[w])] for w in edges)
    return BassSerreGraph(
        vertices=tuple(vertices),
        edges=tuple(edges),
        src=src,
        tgt=tgt,
        depth=depth,
    )


def verify_tree(graph: BassSerreGraph) -> TreeVerdict:
    """Check connectivity and the vertex/edge count of a tree; witnesses are
    a vertex pair (disconnected) or an edge cycle."""
    n = graph.vertex_count
    if n == 0:
        return TreeVerdict("disconnected", ())
    parent = list(range(n))
    # Spanning forest as (vertex -> (parent vertex, edge index)) for witnesses.
    tree_adj: dict = {i: [] for i in range(n)}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    cycle_edge = None
    for e, (s, t) in enumerate(zip(graph.src, graph.tgt)):
        rs, rt = find(s), find(t)
        if rs == rt:
            if cycle_edge is None:
                cycle_edge = e
            continue
        parent[rs] = rt
        tree_adj[s].append((t, e))
        tree_adj[t].append((s, e))

    if cycle_edge is not None:
        s, t = graph.src[cycle_edge], graph.tgt[cycle_edge]
        path = _forest_path(tree_adj, s, t)
        return TreeVerdict("cycle", tuple([cycle_edge] + path))

    roots = {find(i) for i in range(n)}
    if len(roots) > 1:
        it = iter(sorted(roots))
        a = next(it)
        b = next(it)
        return TreeVerdict("disconnected", (graph.vertices[a], graph.vertices[b]))
    if n != graph.edge_count + 1:
        # Connected with |V| = |E| + 1 is equivalent to acyclic; a connected
        # graph failing the count must have produced a cycle edge above.
        return TreeVerdict("cycle", ())
    return TreeVerdict("tree")


def _forest_path(tree_adj, s, t):
    """Edge path from s to t inside the spanning forest."""
    if s == t:
        return []
    prev = {s: (None, None)}
    stack = [s]
    while stack:
        v = stack.pop()
        if v == t:
            break
        for u, e in tree_adj[v]:
            if u not in prev:
                prev[u] = (v, e)
                stack.append(u)
    path = []
    v = t
    while v != s:
        v, e = prev[v]
        path.append(e)
    path.reverse()
    return path


def graph_json(graph: BassSerreGraph, render=None) -> str:
    return json.dumps(
        graph.to_json_dict(render), sort_keys=True, separators=(",", ":")
    )
