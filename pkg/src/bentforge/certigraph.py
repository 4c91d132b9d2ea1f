"""The 72-vertex carry-transition digraph and its nonnegativity certificate.

A vertex (u, a, b, c, d) holds the digits u_j, a_j, b_j and the incoming
carries c_{j-1}, d_{j-1} of the paired systems

    2 c_j + s_j = u_j - a_j + b_j + c_{j-1}
    2 d_j + t_j = u_j + a_j - b_j + d_{j-1}

and an arc carries the weight a_j + b_j - c_j - d_j.  Closed walks of
length n correspond to solutions; nonnegative closed walks are certified
by vertex potentials.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .carry import paired_systems


class Vertex(NamedTuple):
    u: int
    a: int
    b: int
    c: int
    d: int


class Arc(NamedTuple):
    tail: Vertex
    head: Vertex
    weight: int


class Graph:
    def __init__(self, vertices, arcs):
        self.vertices = sorted(vertices)
        self.arcs = sorted(arcs)
        self.out: dict[Vertex, list[Arc]] = {v: [] for v in self.vertices}
        for e in self.arcs:
            self.out[e.tail].append(e)

    def __len__(self):
        return len(self.vertices)

    def successors(self, v: Vertex) -> list[Vertex]:
        return [e.head for e in self.out[v]]

    def subgraph(self, vertices) -> "Graph":
        keep = set(vertices)
        return Graph(keep, [e for e in self.arcs if e.tail in keep and e.head in keep])

    def arc_weights(self) -> dict[tuple[Vertex, Vertex], int]:
        return {(e.tail, e.head): e.weight for e in self.arcs}

    def to_dict(self) -> dict:
        index = {v: i for i, v in enumerate(self.vertices)}
        return {
            "vertices": [list(v) for v in self.vertices],
            "arcs": [[index[e.tail], index[e.head], e.weight] for e in self.arcs],
        }


def build_graph() -> Graph:
    vertices = [Vertex(*v) for v in product((0, 1), (0, 1), (0, 1), (-1, 0, 1), (-1, 0, 1))]
    arcs = []
    for v in vertices:
        # floor division pins the outgoing carries so that s', t' are bits
        c2 = (v.u - v.a + v.b + v.c) // 2
        d2 = (v.u + v.a - v.b + v.d) // 2
        s1 = v.u - v.a + v.b + v.c - 2 * c2
        t1 = v.u + v.a - v.b + v.d - 2 * d2
        assert s1 in (0, 1) and t1 in (0, 1) and -1 <= c2 <= 1 and -1 <= d2 <= 1
        for a2, b2 in product((0, 1), repeat=2):
            head = Vertex(1 - v.u, a2, b2, c2, d2)
            arcs.append(Arc(v, head, v.a + v.b - c2 - d2))
    return Graph(vertices, arcs)


def scc_decompose(g: Graph) -> list[list[Vertex]]:
    """Tarjan's algorithm, iterative; components in order of completion."""
    index: dict[Vertex, int] = {}
    low: dict[Vertex, int] = {}
    on_stack: set[Vertex] = set()
    stack: list[Vertex] = []
    comps: list[list[Vertex]] = []
    counter = 0

    for root in g.vertices:
        if root in index:
            continue
        work = [(root, iter(g.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def largest_component(g: Graph) -> Graph:
    comps = scc_decompose(g)
    return g.subgraph(max(comps, key=len))


def weight_histogram(h: Graph) -> dict[int, int]:
    return dict(sorted(Counter(e.weight for e in h.arcs).items()))


@dataclass
class Certificate:
    potentials: dict[Vertex, int]

    def to_dict(self) -> dict:
        return {"potentials": [[*v, p] for v, p in sorted(self.potentials.items())]}


@dataclass
class NegativeCycle:
    arcs: list[Arc]

    @property
    def weight(self) -> int:
        return sum(e.weight for e in self.arcs)


class MalformedCertificate(ValueError):
    pass


def certify_nonnegative(h: Graph) -> Certificate | NegativeCycle:
    """Bellman-Ford from a virtual source joined to every vertex by weight 0.

    Distance labels are the potentials; a relaxation that still succeeds
    after |V| rounds exposes a negative cycle via the predecessor chain.
    """
    dist = {v: 0 for v in h.vertices}
    pred: dict[Vertex, Arc] = {}
    changed = None
    for _ in range(len(h.vertices) + 1):
        changed = None
        for e in h.arcs:
            if dist[e.tail] + e.weight < dist[e.head]:
                dist[e.head] = dist[e.tail] + e.weight
                pred[e.head] = e
                changed = e.head
        if changed is None:
            return Certificate(dist)

    v = changed
    for _ in range(len(h.vertices)):
        v = pred[v].tail
    cycle, w = [], v
    while True:
        e = pred[w]
        cycle.append(e)
        w = e.tail
        if w == v:
            break
    cycle.reverse()
    return NegativeCycle(cycle)


def verify_certificate(h: Graph, cert: Certificate) -> bool:
    """Every arc has nonnegative reduced weight w + p(tail) - p(head)."""
    missing = [v for v in h.vertices if v not in cert.potentials]
    if missing:
        raise MalformedCertificate(f"no potential for {missing[0]}")
    p = cert.potentials
    return all(e.weight + p[e.tail] - p[e.head] >= 0 for e in h.arcs)


def min_cycle_mean(h: Graph) -> Fraction | None:
    """Karp's minimum mean cycle weight; None for an acyclic graph."""
    verts = h.vertices
    n = len(verts)
    inf = None
    # D[k][v]: least weight of a walk with exactly k arcs ending at v,
    # starting anywhere (a zero-weight virtual source).
    D = [{v: 0 for v in verts}]
    for _ in range(n):
        prev, cur = D[-1], {v: inf for v in verts}
        for e in h.arcs:
            if prev[e.tail] is not None:
                cand = prev[e.tail] + e.weight
                if cur[e.head] is None or cand < cur[e.head]:
                    cur[e.head] = cand
        D.append(cur)
    best = None
    for v in verts:
        if D[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is not None:
                val = Fraction(D[n][v] - D[k][v], n - k)
                if worst is None or val > worst:
                    worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def trace_walk(m: int, u_choice: int, a: int, b: int) -> tuple[list[Arc], int]:
    """Closed walk of length 2m traced by the paired carry systems.

    Returns the arcs (weights recomputed from the digits) and the sum
    of a_j + b_j - c_j - d_j.
    """
    p = paired_systems(m, u_choice, a, b)
    n = p.n
    c, d = p.s.carries, p.t.carries
    verts = [Vertex(p.u[j], p.a[j], p.b[j], c[j - 1], d[j - 1]) for j in range(n)]
    arcs = [Arc(verts[j], verts[(j + 1) % n], p.a[j] + p.b[j] - c[j] - d[j]) for j in range(n)]
    return arcs, p.walk_weight


def walk_correspondence_check(m: int, g: Graph | None = None) -> bool:
    if m > 4:
        raise ValueError("exhaustive correspondence is limited to m <= 4")
    g = g or build_graph()
    weights = g.arc_weights()
    q1 = (1 << (2 * m)) - 1
    for u_choice in (0, 1):
        for a in range(q1):
            for b in range(q1):
                arcs, w = trace_walk(m, u_choice, a, b)
                if any(weights.get((e.tail, e.head)) != e.weight for e in arcs):
                    return False
                if any(arcs[j].tail.u == arcs[j].head.u for j in range(len(arcs))):
                    return False
                if sum(e.weight for e in arcs) != w or w < 0:
                    return False
    return True


def export_json(g: Graph, comps: list[list[Vertex]], cert: Certificate | None) -> str:
    index = {v: i for i, v in enumerate(g.vertices)}
    label = {}
    for k, comp in enumerate(sorted(comps, key=lambda c: (-len(c), c))):
        for v in comp:
            label[index[v]] = k
    out = g.to_dict()
    out["scc"] = [label[i] for i in range(len(g.vertices))]
    if cert is not None:
        out["potentials"] = [cert.potentials.get(v) for v in g.vertices]
    return json.dumps(out)
