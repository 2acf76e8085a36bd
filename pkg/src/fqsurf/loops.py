"""Geodesic loops in the 1-skeleton and what they generate.

A geodesic loop continues straight through every vertex: the successor of a
directed edge is the ray two steps around the clockwise rotation at its head,
which at a degree-4 vertex is the unique continuation leaving the crossing
pair untouched.  The successor map is a permutation of directed edges, its
cycles come in reversal pairs, and each pair is one undirected loop.  A cycle
equal to its own reversal traverses some edge in both senses; such loops are
flagged degenerate and disqualify the complex from the coloring hypotheses.

Also here: pairwise loop intersection counts, the Smith-normal-form check
that the loops (together with face boundaries) generate all of H1, the
decomposition of a difference of homologous cycles into face boundaries, and
the 2-coloring of the dual graph by face orientation.
"""

from collections import deque
from dataclasses import dataclass

from .surface_complex import (
    IntegerMatrix,
    boundary_matrices,
    dual_graph,
    integer_solve,
    smith_normal_form,
)


class NotACycle(ValueError):
    """An alleged 1-cycle has nonzero boundary."""


@dataclass
class GeodesicLoop:
    loop_id: int
    type: object
    directed_edges: tuple
    undirected_length: int
    parity: str
    degenerate: bool

    def edge_ids(self):
        return {e for e, _ in self.directed_edges}

    def vertex_ids(self, cx):
        return {cx.tail_vertex(d) for d in self.directed_edges}

    def as_one_cycle(self, num_edges):
        """The loop as an integer vector of edge coefficients."""
        vec = [0] * num_edges
        for e, fwd in self.directed_edges:
            vec[e] += 1 if fwd else -1
        return vec


@dataclass
class LoopReport:
    loops: list
    per_type_counts: dict
    odd_loops: list
    pairwise_intersections: dict
    hypotheses_ok: bool

    def loop(self, loop_id):
        return self.loops[loop_id]


def _dedge_key(d):
    return (d[0], 0 if d[1] else 1)


def trace_geodesic_loops(cx):
    """Trace every geodesic loop and assemble the hypothesis report."""
    order = sorted(
        [(e.id, True) for e in cx.edges] + [(e.id, False) for e in cx.edges],
        key=_dedge_key,
    )
    visited = set()
    loops = []
    for start in order:
        if start in visited:
            continue
        cycle = [start]
        visited.add(start)
        cur = cx.straight_continuation(start)
        while cur != start:
            cycle.append(cur)
            visited.add(cur)
            cur = cx.straight_continuation(cur)
        edge_ids = {e for e, _ in cycle}
        degenerate = len(edge_ids) < len(cycle)
        if not degenerate:
            # retire the reversed twin so the loop is reported once
            for e, fwd in cycle:
                visited.add((e, not fwd))
        types = {cx.edge_type(e) for e in edge_ids}
        length = len(edge_ids)
        loops.append(
            GeodesicLoop(
                loop_id=len(loops),
                type=types.pop() if len(types) == 1 else None,
                directed_edges=tuple(cycle),
                undirected_length=length,
                parity="odd" if length % 2 else "even",
                degenerate=degenerate,
            )
        )

    counts = {}
    for lp in loops:
        counts[lp.type] = counts.get(lp.type, 0) + 1
    odd = [lp.loop_id for lp in loops if lp.parity == "odd"]
    inter = pairwise_intersections(cx, loops)
    ok = (
        not odd
        and not any(lp.degenerate for lp in loops)
        and all(n <= 1 for n in inter.values())
    )
    return LoopReport(
        loops=loops,
        per_type_counts=counts,
        odd_loops=odd,
        pairwise_intersections=inter,
        hypotheses_ok=ok,
    )


def pairwise_intersections(cx, loops):
    """Shared-vertex counts for every unordered pair of distinct loops."""
    vsets = [lp.vertex_ids(cx) for lp in loops]
    out = {}
    for i in range(len(loops)):
        for j in range(i + 1, len(loops)):
            out[(i, j)] = len(vsets[i] & vsets[j])
    return out


def loops_generate_h1(cx, loops):
    """Do the loops plus face boundaries span the full cycle lattice?

    True iff the integer column lattice of [loop cycles | d2] equals ker(d1):
    the columns must be cycles, the rank must match the cycle lattice, and
    every invariant factor must be 1 (a saturated full-rank sublattice of a
    saturated lattice is the whole thing).
    """
    d2, d1 = boundary_matrices(cx)
    cols = [lp.as_one_cycle(cx.num_edges) for lp in loops]
    if cols:
        m = IntegerMatrix.from_columns(cols, rows=cx.num_edges).hstack(d2)
    else:
        m = d2
    if not d1.mul(m).is_zero():
        return False
    _, r1 = smith_normal_form(d1)
    diag, rank = smith_normal_form(m)
    if rank != cx.num_edges - r1:
        return False
    return all(d in (0, 1) for d in diag)


def difference_is_face_sum(cx, cycle1, cycle2):
    """Integer face coefficients x with cycle1 - cycle2 = d2·x, or None."""
    d2, d1 = boundary_matrices(cx)
    for c in (cycle1, cycle2):
        if any(d1.mul_vec(c)):
            raise NotACycle("input chain has nonzero boundary")
    diff = [x - y for x, y in zip(cycle1, cycle2)]
    return integer_solve(d2, diff)


@dataclass
class OrientationAssignment:
    colors: object
    odd_cycle: object

    @property
    def bipartite(self):
        return self.colors is not None


def assign_face_orientations(cx):
    """2-color the dual graph, or exhibit an odd dual cycle.

    Breadth-first from the lowest face of each component, visiting dual edges
    in primal-edge order.  A self-adjacent face is an odd cycle of length 1.
    """
    dg = dual_graph(cx)
    adj = {n: [] for n in dg.nodes}
    for a, b, e in dg.edges:
        if a == b:
            return OrientationAssignment(colors=None, odd_cycle=[a])
        adj[a].append((b, e))
        adj[b].append((a, e))
    for n in adj:
        adj[n].sort(key=lambda pair: pair[1])

    color = {}
    parent = {}
    for root in dg.nodes:
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for g, _e in adj[f]:
                if g not in color:
                    color[g] = 1 - color[f]
                    parent[g] = f
                    queue.append(g)
                elif color[g] == color[f]:
                    anc_f = [f]
                    while parent[anc_f[-1]] is not None:
                        anc_f.append(parent[anc_f[-1]])
                    in_f = set(anc_f)
                    anc_g = [g]
                    while anc_g[-1] not in in_f:
                        anc_g.append(parent[anc_g[-1]])
                    lca = anc_g[-1]
                    up = anc_f[: anc_f.index(lca) + 1]
                    cycle = list(reversed(up)) + anc_g[:-1]
                    return OrientationAssignment(colors=None, odd_cycle=cycle)
    return OrientationAssignment(colors=color, odd_cycle=None)


LOOPS_FORMAT = "fq-loops/1"


def loop_report_to_dict(report):
    inter = [
        {"a": i, "b": j, "vertices": n}
        for (i, j), n in sorted(report.pairwise_intersections.items())
        if n
    ]
    return {
        "format": LOOPS_FORMAT,
        "loops": [
            {
                "id": lp.loop_id,
                "type": lp.type,
                "length": lp.undirected_length,
                "parity": lp.parity,
                "degenerate": lp.degenerate,
                "edges": [[e, fwd] for e, fwd in lp.directed_edges],
            }
            for lp in report.loops
        ],
        "per_type_counts": {
            ("untyped" if t is None else str(t)): n
            for t, n in report.per_type_counts.items()
        },
        "odd_loops": report.odd_loops,
        "intersections": inter,
        "hypotheses_ok": report.hypotheses_ok,
    }
