"""Two-coloring of edges: the alternating and consistency conditions.

A *good coloring* assigns 0/1 to every edge so that colors alternate along
each geodesic loop and, for an oriented loop, the hanging edges on one side
all agree (likewise the other side).  Both conditions are parity relations
between pairs of edges, so the whole problem is a parity constraint system:
alternating pairs differ (parity 1), same-side hanging pairs agree
(parity 0).  A coloring exists iff no constraint cycle has odd total parity.

Sides are read off the stored rotation system: rotations list the rays at a
vertex clockwise, so for a passage arriving along a directed edge whose
reversed ray sits at index i, the outgoing ray is at i+2, the left hanging
ray at i+1 and the right at i-1.

The holonomy transport moves a pair (a, b) — the color of the edge being
walked and of its left neighbor — along an edge walk.  Each step is an
affine map of {0,1}^2 determined by the turn taken, and a closed walk
composes to the identity exactly when path-propagated colors are
well-defined around it.
"""

from collections import deque
from dataclasses import dataclass

from .loops import trace_geodesic_loops


class DegenerateLoop(ValueError):
    """A geodesic loop folds back on itself; coloring is undefined."""


class TooLargeForExhaustive(ValueError):
    """Exhaustive search is capped at 22 edges."""


class NotClosed(ValueError):
    """The walk does not return to its starting vertex."""


EXHAUSTIVE_EDGE_LIMIT = 22

ALTERNATING = "alternating"
CONSISTENCY = "consistency"


@dataclass(frozen=True)
class ParityConstraint:
    edge_a: int
    edge_b: int
    parity: int
    tag: str


class ParityConstraintSystem:
    """Parity relations between edge colors, with component structure."""

    def __init__(self, variables, constraints):
        self.variables = tuple(variables)
        self.constraints = tuple(constraints)
        self.components = self._components()

    def _components(self):
        adj = {v: [] for v in self.variables}
        for c in self.constraints:
            if c.edge_a not in adj or c.edge_b not in adj:
                raise ValueError("constraint references unknown edge")
            adj[c.edge_a].append(c.edge_b)
            adj[c.edge_b].append(c.edge_a)
        seen = set()
        comps = []
        for v in sorted(adj):
            if v in seen:
                continue
            comp = []
            queue = deque([v])
            seen.add(v)
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in sorted(adj[u]):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def __repr__(self):
        return (
            f"ParityConstraintSystem({len(self.variables)} vars, "
            f"{len(self.constraints)} constraints, "
            f"{len(self.components)} components)"
        )


def _passage_rays(cx, dedge):
    """Rays around the head of a directed edge: (back, left, straight, right)."""
    v = cx.head_vertex(dedge)
    rot = cx.rotation(v)
    if len(rot) != 4:
        raise ValueError(f"vertex {v} has degree {len(rot)}, not 4")
    eid, forward = dedge
    back = (eid, not forward)
    i = rot.index(back)
    return v, rot, i


def build_constraints(cx, loop_report):
    """Parity constraints for the good-coloring conditions.

    Alternating: consecutive edges of each loop differ.  Consistency: the
    left hanging edges at consecutive visited vertices agree, and likewise
    the right ones, chained cyclically around the loop.
    """
    constraints = []
    for loop in loop_report.loops:
        if loop.degenerate:
            raise DegenerateLoop(
                f"loop {loop.loop_id} folds back on itself"
            )
        cycle = loop.directed_edges
        n = len(cycle)
        for k in range(n):
            e = cycle[k][0]
            f = cycle[(k + 1) % n][0]
            constraints.append(ParityConstraint(e, f, 1, ALTERNATING))
        lefts = []
        rights = []
        for dedge in cycle:
            _v, rot, i = _passage_rays(cx, dedge)
            lefts.append(rot[(i + 1) % 4][0])
            rights.append(rot[(i - 1) % 4][0])
        for side in (lefts, rights):
            for k in range(n):
                constraints.append(
                    ParityConstraint(side[k], side[(k + 1) % n], 0, CONSISTENCY)
                )
    variables = [e.id for e in cx.edges]
    return ParityConstraintSystem(variables, constraints)


@dataclass
class EdgeColoring:
    """A total 0/1 coloring plus how it was seeded."""

    colors: dict
    base_vertex: int
    seed: tuple
    solution_count: int = None

    def color_of(self, edge_id):
        return self.colors[edge_id]


class ContradictionWitness:
    """A closed chain of constraints whose parities sum to 1."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)

    @property
    def total_parity(self):
        return sum(c.parity for c in self.cycle) % 2

    def edge_ids(self):
        out = []
        for c in self.cycle:
            out.append(c.edge_a)
            out.append(c.edge_b)
        return sorted(set(out))

    def __repr__(self):
        return f"ContradictionWitness({len(self.cycle)} constraints)"


def _seed_priorities(cx):
    """The paper's base-point seeding: four rays in counterclockwise order
    get colors 0, 0, 1, 1.  Rotations are stored clockwise, so reverse."""
    base = 0
    if cx.num_vertices == 0:
        return base, []
    rot = cx.rotation(base)
    if len(rot) != 4:
        return base, []
    ccw = [rot[0], rot[3], rot[2], rot[1]]
    return base, [
        (ccw[0][0], 0),
        (ccw[1][0], 0),
        (ccw[2][0], 1),
        (ccw[3][0], 1),
    ]


def _propagate(cx, system):
    """Color by breadth-first transport; return coloring or witness."""
    base, priorities = _seed_priorities(cx)
    adj = {v: [] for v in system.variables}
    for c in system.constraints:
        adj[c.edge_a].append((c.edge_b, c))
        adj[c.edge_b].append((c.edge_a, c))
    for v in adj:
        adj[v].sort(key=lambda item: (item[0], item[1].parity, item[1].tag))

    colors = {}
    parent = {}
    for comp in system.components:
        members = set(comp)
        root, root_color = comp[0], 0
        for eid, col in priorities:
            if eid in members:
                root, root_color = eid, col
                break
        colors[root] = root_color
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, c in adj[u]:
                if w not in colors:
                    colors[w] = colors[u] ^ c.parity
                    parent[w] = (u, c)
                    queue.append(w)

    for c in system.constraints:
        if colors[c.edge_a] ^ colors[c.edge_b] != c.parity:
            return _witness_from_tree(parent, c)

    seed = tuple((eid, colors[eid]) for eid, _c in priorities)
    final = {v: colors[v] for v in sorted(colors)}
    return EdgeColoring(colors=final, base_vertex=base, seed=seed)


def _witness_from_tree(parent, violated):
    """Close the violated constraint through the propagation tree."""
    def ancestry(e):
        chain = [e]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]][0])
        return chain

    chain_a = ancestry(violated.edge_a)
    chain_b = ancestry(violated.edge_b)
    in_a = {e: k for k, e in enumerate(chain_a)}
    lca = next(e for e in chain_b if e in in_a)
    up = []
    e = violated.edge_a
    while e != lca:
        e_next, c = parent[e]
        up.append(c)
        e = e_next
    down = []
    e = violated.edge_b
    while e != lca:
        e_next, c = parent[e]
        down.append(c)
        e = e_next
    cycle = up + list(reversed(down)) + [violated]
    return ContradictionWitness(cycle)


def _exhaustive(cx, system):
    """Pruned scan of all assignments in lexicographic order."""
    n = len(system.variables)
    order = sorted(system.variables)
    index = {v: k for k, v in enumerate(order)}
    by_later = [[] for _ in range(n)]
    unsat_var = None
    for c in system.constraints:
        ia, ib = index[c.edge_a], index[c.edge_b]
        if ia == ib:
            if c.parity == 1:
                unsat_var = c
            continue
        later, earlier = max(ia, ib), min(ia, ib)
        by_later[later].append((earlier, c.parity))

    best = None
    count = 0
    if unsat_var is None:
        assignment = [0] * n

        def scan(k):
            nonlocal best, count
            if k == n:
                count += 1
                if best is None:
                    best = tuple(assignment)
                return
            for color in (0, 1):
                assignment[k] = color
                if all(
                    assignment[earlier] ^ color == parity
                    for earlier, parity in by_later[k]
                ):
                    scan(k + 1)

        scan(0)
    if best is None:
        fallback = _propagate(cx, system)
        if isinstance(fallback, ContradictionWitness):
            return fallback
        raise AssertionError("exhaustive found no solution but propagate did")
    base, priorities = _seed_priorities(cx)
    colors = {order[k]: best[k] for k in range(n)}
    seed = tuple((eid, colors[eid]) for eid, _c in priorities)
    return EdgeColoring(
        colors=colors, base_vertex=base, seed=seed, solution_count=count
    )


def solve_good_coloring(cx, mode="propagate"):
    """Find a good coloring, or exhibit an odd constraint cycle.

    ``propagate`` transports colors over a spanning tree of the constraint
    graph from the canonical seeds; ``exhaustive`` scans assignments in
    lexicographic order (pruned), returning the least solution and the
    total number of solutions.
    """
    if mode not in ("propagate", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    report = trace_geodesic_loops(cx)
    system = build_constraints(cx, report)
    if mode == "exhaustive":
        if cx.num_edges > EXHAUSTIVE_EDGE_LIMIT:
            raise TooLargeForExhaustive(
                f"{cx.num_edges} edges exceeds the cap of {EXHAUSTIVE_EDGE_LIMIT}"
            )
        return _exhaustive(cx, system)
    return _propagate(cx, system)


def verify_good_coloring(cx, coloring):
    """Check the two conditions directly against the traced loops.

    Walks every geodesic loop and compares colors edge to edge — no
    constraint system involved, so this is an independent check of solver
    output.  Returns (ok, violations).
    """
    report = trace_geodesic_loops(cx)
    violations = []
    for loop in report.loops:
        if loop.degenerate:
            continue
        cycle = loop.directed_edges
        n = len(cycle)
        for k in range(n):
            e = cycle[k][0]
            f = cycle[(k + 1) % n][0]
            if coloring.color_of(e) == coloring.color_of(f):
                violations.append(
                    (ALTERNATING, loop.loop_id, e, f)
                )
        lefts = []
        rights = []
        for dedge in cycle:
            _v, rot, i = _passage_rays(cx, dedge)
            lefts.append(rot[(i + 1) % 4][0])
            rights.append(rot[(i - 1) % 4][0])
        for name, side in (("left", lefts), ("right", rights)):
            observed = {coloring.color_of(e) for e in side}
            if len(observed) > 1:
                violations.append(
                    (CONSISTENCY, loop.loop_id, name, tuple(sorted(set(side))))
                )
    return (not violations, violations)


class Holonomy:
    """Affine map of the color pair (a, b): optional coordinate swap plus
    an offset in each coordinate."""

    __slots__ = ("swap", "offset")

    def __init__(self, swap=False, offset=(0, 0)):
        self.swap = bool(swap)
        self.offset = (offset[0] % 2, offset[1] % 2)

    def apply(self, pair):
        a, b = pair
        if self.swap:
            a, b = b, a
        return ((a + self.offset[0]) % 2, (b + self.offset[1]) % 2)

    def after(self, earlier):
        """Composite map: self applied after ``earlier``."""
        t = earlier.offset
        if self.swap:
            t = (t[1], t[0])
        return Holonomy(
            swap=self.swap ^ earlier.swap,
            offset=((t[0] + self.offset[0]) % 2, (t[1] + self.offset[1]) % 2),
        )

    @property
    def is_identity(self):
        return not self.swap and self.offset == (0, 0)

    def __eq__(self, other):
        if not isinstance(other, Holonomy):
            return NotImplemented
        return self.swap == other.swap and self.offset == other.offset

    def __hash__(self):
        return hash((self.swap, self.offset))

    def __repr__(self):
        return f"Holonomy(swap={self.swap}, offset={self.offset})"


# transfer maps by turn: 0 = back, 1 = left, 2 = straight, 3 = right
_STEP_MAPS = {
    0: Holonomy(swap=False, offset=(0, 1)),
    1: Holonomy(swap=True, offset=(0, 0)),
    2: Holonomy(swap=False, offset=(1, 0)),
    3: Holonomy(swap=True, offset=(1, 1)),
}


def holonomy(cx, walk):
    """Compose the color-pair transport along a closed directed-edge walk."""
    walk = list(walk)
    total = Holonomy()
    if not walk:
        return total
    for k, dedge in enumerate(walk):
        following = walk[(k + 1) % len(walk)]
        if cx.head_vertex(dedge) != cx.tail_vertex(following):
            raise NotClosed(
                f"step {k} ends at vertex {cx.head_vertex(dedge)} but the next "
                f"starts at {cx.tail_vertex(following)}"
            )
    for k, dedge in enumerate(walk):
        following = walk[(k + 1) % len(walk)]
        _v, rot, i = _passage_rays(cx, dedge)
        j = rot.index(following)
        total = _STEP_MAPS[(j - i) % 4].after(total)
    return total


COLORING_FORMAT = "fq-coloring/1"


def coloring_to_dict(coloring):
    return {
        "format": COLORING_FORMAT,
        "satisfiable": True,
        "colors": [[eid, c] for eid, c in sorted(coloring.colors.items())],
        "base_vertex": coloring.base_vertex,
        "seed": [[eid, c] for eid, c in coloring.seed],
        "solution_count": coloring.solution_count,
    }


def coloring_from_dict(doc):
    if doc.get("format") != COLORING_FORMAT:
        raise ValueError(f"not a {COLORING_FORMAT} document")
    if not doc.get("satisfiable", True):
        raise ValueError("document records a contradiction, not a coloring")
    return EdgeColoring(
        colors={int(e): int(c) for e, c in doc["colors"]},
        base_vertex=int(doc["base_vertex"]),
        seed=tuple((int(e), int(c)) for e, c in doc["seed"]),
        solution_count=doc.get("solution_count"),
    )


def witness_to_dict(witness):
    return {
        "format": COLORING_FORMAT,
        "satisfiable": False,
        "witness": [
            {
                "edge_a": c.edge_a,
                "edge_b": c.edge_b,
                "parity": c.parity,
                "tag": c.tag,
            }
            for c in witness.cycle
        ],
    }
