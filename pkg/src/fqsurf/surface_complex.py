"""Closed surfaces tiled by typed right-angled polygons, with exact homology.

Data model
----------
A :class:`SurfaceComplex` stores ``p`` (sides per face), a dense list of typed
edges, and a dense list of faces.  Each face records its boundary as a cyclic
list of sides in the counterclockwise walk order of the surface.  A side names
an edge together with the sense in which the walk traverses it, so an edge of
a closed surface is mentioned by exactly two sides, once forward and once
reversed; storing coherent counterclockwise walks is what makes the surface
oriented.  ``chirality`` records whether the edge types ascend (``"ccw"``) or
descend (``"cw"``) along the stored walk — the stored side order itself never
flips.

Vertices are not stored.  Identifying the two sides that mention an edge glues
corners by the rule "the corner following my opposite side touches the same
point", so vertices are the orbits of

    sigma(corner) = next_in_face(opposite(corner))

where a corner is addressed as ``(face_id, position)`` and owns the side that
leaves it.  ``sigma`` preserves the tail vertex of the side, and successive
corners of an orbit list the outgoing edges around the vertex in clockwise
order.  All turn-based navigation (straight through a degree-4 vertex, left,
right) reduces to index arithmetic in that rotation; see
:meth:`SurfaceComplex.continue_through`.

The second half of the module is an exact integer linear algebra kit: an
arbitrary-precision matrix, Smith normal form (plain and with unimodular
transforms), integer linear solving, kernel bases, and the boundary matrices
of the cellular chain complex.  Everything is pure Python integers; entries
grow during elimination and must never be truncated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

CCW = "ccw"
CW = "cw"

STRUCTURAL_TAGS = frozenset(
    {"Closedness", "Disconnected", "RightAngledVertex", "EulerCharacteristic",
     "GenusMismatch"}
)
LABELING_TAGS = frozenset({"FaceLabeling", "VertexTypeAlternation"})


class DuplicateId(ValueError):
    """Two edges or two faces were declared with the same id."""


class DanglingEdgeReference(ValueError):
    """A face side names an edge id that was never declared."""


class WrongSideCount(ValueError):
    """A face does not have exactly p sides."""


@dataclass(frozen=True)
class Edge:
    id: int
    type: int


@dataclass(frozen=True)
class Side:
    edge: int
    reversed: bool


@dataclass(frozen=True)
class Face:
    id: int
    chirality: str
    sides: tuple


def succ_type(t, p):
    """The cyclic successor of a type in 1..p."""
    return t % p + 1


class SurfaceComplex:
    """A polygonal surface with typed edges; immutable once built."""

    def __init__(self, p, edges, faces):
        self.p = p
        self.edges = tuple(edges)
        self.faces = tuple(faces)
        self._occ = None
        self._vertex_data = None

    # ------------------------------------------------------------------
    # raw structure

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def num_faces(self):
        return len(self.faces)

    def edge_type(self, edge_id):
        return self.edges[edge_id].type

    def occurrences(self):
        """Map edge id -> list of (face_id, position) sides mentioning it."""
        if self._occ is None:
            occ = {e.id: [] for e in self.edges}
            for f in self.faces:
                for k, s in enumerate(f.sides):
                    occ[s.edge].append((f.id, k))
            self._occ = occ
        return self._occ

    def is_closed(self):
        """True when every edge is used exactly once in each sense."""
        for e in self.edges:
            locs = self.occurrences()[e.id]
            if len(locs) != 2:
                return False
            (fa, ka), (fb, kb) = locs
            if self.faces[fa].sides[ka].reversed == self.faces[fb].sides[kb].reversed:
                return False
        return True

    # ------------------------------------------------------------------
    # corner navigation

    def side_at(self, corner):
        f, k = corner
        return self.faces[f].sides[k]

    def directed_edge(self, corner):
        """The side leaving this corner, as (edge_id, forward)."""
        s = self.side_at(corner)
        return (s.edge, not s.reversed)

    def next_in_face(self, corner):
        f, k = corner
        return (f, (k + 1) % len(self.faces[f].sides))

    def prev_in_face(self, corner):
        f, k = corner
        return (f, (k - 1) % len(self.faces[f].sides))

    def opposite(self, corner):
        """The other corner whose side mentions the same edge."""
        locs = self.occurrences()[self.side_at(corner).edge]
        if len(locs) != 2:
            raise ValueError(
                f"edge {self.side_at(corner).edge} is not shared by exactly two sides"
            )
        a, b = locs
        return b if a == corner else a

    def sigma(self, corner):
        """Next corner clockwise around the tail vertex of this corner's side."""
        return self.next_in_face(self.opposite(corner))

    # ------------------------------------------------------------------
    # derived vertices

    def _derive(self):
        if self._vertex_data is None:
            if not self.is_closed():
                raise ValueError("vertex structure requires a closed complex")
            seen = set()
            orbits = []
            for f in self.faces:
                for k in range(len(f.sides)):
                    start = (f.id, k)
                    if start in seen:
                        continue
                    orbit = [start]
                    seen.add(start)
                    cur = self.sigma(start)
                    while cur != start:
                        orbit.append(cur)
                        seen.add(cur)
                        cur = self.sigma(cur)
                    orbits.append(tuple(orbit))
            corner_vertex = {}
            ray_corner = {}
            for vid, orbit in enumerate(orbits):
                for c in orbit:
                    corner_vertex[c] = vid
                    ray_corner[self.directed_edge(c)] = c
            self._vertex_data = (tuple(orbits), corner_vertex, ray_corner)
        return self._vertex_data

    def vertices(self):
        """Vertex corner orbits, each starting at its least (face, position)."""
        return self._derive()[0]

    @property
    def num_vertices(self):
        return len(self.vertices())

    def vertex_of(self, corner):
        return self._derive()[1][corner]

    def corner_of_directed(self, dedge):
        """The unique corner whose outgoing side is this directed edge."""
        return self._derive()[2][dedge]

    def tail_vertex(self, dedge):
        return self.vertex_of(self.corner_of_directed(dedge))

    def head_vertex(self, dedge):
        return self.vertex_of(self.next_in_face(self.corner_of_directed(dedge)))

    def rotation(self, vertex_id):
        """Outgoing directed edges at a vertex, in clockwise order."""
        return tuple(self.directed_edge(c) for c in self.vertices()[vertex_id])

    def continue_through(self, dedge, turn):
        """Continue an incoming directed edge through its head vertex.

        ``turn`` is an offset in the clockwise rotation measured from the
        reversal of the incoming edge: at a degree-4 vertex, ``2`` goes
        straight, ``1`` turns left, ``-1`` turns right and ``0`` doubles back.
        """
        v = self.head_vertex(dedge)
        rays = self.rotation(v)
        i = rays.index((dedge[0], not dedge[1]))
        return rays[(i + turn) % len(rays)]

    def straight_continuation(self, dedge):
        return self.continue_through(dedge, 2)

    def vertex_type_pair(self, vertex_id):
        """The ordered type pair (i, i+1) at a degree-4 vertex, else None."""
        rays = self.rotation(vertex_id)
        if len(rays) != 4:
            return None
        t = [self.edge_type(e) for e, _ in rays]
        if t[0] != t[2] or t[1] != t[3] or t[0] == t[1]:
            return None
        if succ_type(t[0], self.p) == t[1]:
            return (t[0], t[1])
        if succ_type(t[1], self.p) == t[0]:
            return (t[1], t[0])
        return None

    def directed_boundary(self, face_id):
        """The face boundary walk as a list of directed edges."""
        f = self.faces[face_id]
        return [(s.edge, not s.reversed) for s in f.sides]

    def __eq__(self, other):
        return (
            isinstance(other, SurfaceComplex)
            and self.p == other.p
            and self.edges == other.edges
            and self.faces == other.faces
        )

    def __repr__(self):
        return f"SurfaceComplex(p={self.p}, faces={self.num_faces}, edges={self.num_edges})"


def build_complex(p, edge_specs, face_specs):
    """Assemble a SurfaceComplex from plain id/type/side listings.

    Ids must be dense from 0; side counts must equal p; every referenced edge
    must exist.  Semantic surface axioms are deliberately not enforced here —
    run :func:`validate` for those.  Degenerate but well-formed inputs (a
    single face, a pair of squares) are accepted on purpose, and p may be as
    small as 3.
    """
    if p < 3:
        raise ValueError("p must be at least 3")
    edges = []
    seen = set()
    for eid, etype in edge_specs:
        if eid in seen:
            raise DuplicateId(f"edge id {eid} declared twice")
        seen.add(eid)
        if not 1 <= etype <= p:
            raise ValueError(f"edge {eid} has type {etype} outside 1..{p}")
        edges.append(Edge(eid, etype))
    edges.sort(key=lambda e: e.id)
    if [e.id for e in edges] != list(range(len(edges))):
        raise ValueError("edge ids must be dense 0..E-1")

    faces = []
    seen_f = set()
    for fid, chirality, sides in face_specs:
        if fid in seen_f:
            raise DuplicateId(f"face id {fid} declared twice")
        seen_f.add(fid)
        if chirality not in (CCW, CW):
            raise ValueError(f"face {fid} has chirality {chirality!r}")
        if len(sides) != p:
            raise WrongSideCount(f"face {fid} has {len(sides)} sides, expected {p}")
        packed = []
        for eid, rev in sides:
            if eid not in seen:
                raise DanglingEdgeReference(f"face {fid} references unknown edge {eid}")
            packed.append(Side(eid, bool(rev)))
        faces.append(Face(fid, chirality, tuple(packed)))
    faces.sort(key=lambda f: f.id)
    if [f.id for f in faces] != list(range(len(faces))):
        raise ValueError("face ids must be dense 0..F-1")

    cx = SurfaceComplex(p, edges, faces)
    if cx.is_closed():
        cx._derive()
    return cx


@dataclass(frozen=True)
class Finding:
    tag: str
    detail: str


@dataclass
class ValidationReport:
    passed: bool
    failures: list
    euler_characteristic: object
    genus: object

    @property
    def structurally_ok(self):
        """True when only the type-labeling axioms (if any) are violated."""
        return not any(f.tag in STRUCTURAL_TAGS for f in self.failures)

    def tags(self):
        return sorted({f.tag for f in self.failures})


def validate(cx, expected_genus=None):
    """Check the surface axioms and report every violation found.

    Structural axioms (closedness with coherent senses, connectedness,
    degree-4 vertices, Euler characteristic bookkeeping) are reported
    separately from the labeling axioms (faces reading a consecutive cyclic
    type sequence, vertex types alternating i, i+1); the report's
    ``structurally_ok`` distinguishes the tiers.
    """
    failures = []
    bad_edges = []
    for e in cx.edges:
        locs = cx.occurrences()[e.id]
        if len(locs) != 2:
            bad_edges.append((e.id, f"{len(locs)} sides"))
        else:
            (fa, ka), (fb, kb) = locs
            if cx.faces[fa].sides[ka].reversed == cx.faces[fb].sides[kb].reversed:
                bad_edges.append((e.id, "same sense twice"))
    if bad_edges:
        failures.append(
            Finding("Closedness", f"edges used wrongly: {bad_edges[:8]}")
        )

    euler = None
    genus = None
    if not bad_edges:
        orbits = cx.vertices()
        n_v, n_e, n_f = len(orbits), cx.num_edges, cx.num_faces
        euler = n_v - n_e + n_f

        # connectivity over the face-adjacency (dual) graph
        if n_f:
            reached = {0}
            stack = [0]
            while stack:
                f = stack.pop()
                for s in cx.faces[f].sides:
                    for (g, _k) in cx.occurrences()[s.edge]:
                        if g not in reached:
                            reached.add(g)
                            stack.append(g)
            if len(reached) != n_f:
                failures.append(
                    Finding("Disconnected",
                            f"only {len(reached)} of {n_f} faces reachable from face 0")
                )

        wrong_degree = [vid for vid, orb in enumerate(orbits) if len(orb) != 4]
        if wrong_degree:
            failures.append(
                Finding("RightAngledVertex",
                        f"vertices without exactly 4 corners: {wrong_degree[:8]}")
            )

        if euler % 2:
            failures.append(
                Finding("EulerCharacteristic", f"odd Euler characteristic {euler}")
            )
        else:
            genus = (2 - euler) // 2

        if not wrong_degree:
            bad_alt = [
                vid for vid in range(n_v) if cx.vertex_type_pair(vid) is None
            ]
            if bad_alt:
                failures.append(
                    Finding("VertexTypeAlternation",
                            f"vertices whose edge types do not alternate i, i+1: {bad_alt[:8]}")
                )

    if expected_genus is not None and genus != expected_genus:
        failures.append(
            Finding("GenusMismatch", f"computed genus {genus}, expected {expected_genus}")
        )

    for f in cx.faces:
        seq = [cx.edge_type(s.edge) for s in f.sides]
        if f.chirality == CW:
            seq = seq[::-1]
        n = len(seq)
        if any(seq[(k + 1) % n] != succ_type(seq[k], cx.p) for k in range(n)):
            failures.append(
                Finding("FaceLabeling",
                        f"face {f.id} does not read a consecutive type cycle: {seq}")
            )

    return ValidationReport(
        passed=not failures,
        failures=failures,
        euler_characteristic=euler,
        genus=genus,
    )


def euler_characteristic(cx):
    return cx.num_vertices - cx.num_edges + cx.num_faces


@dataclass
class DualGraph:
    """One node per face, one edge per primal edge (loops allowed)."""

    nodes: tuple
    edges: tuple  # (face_a, face_b, primal_edge_id), ordered by primal edge id

    def neighbors(self, node):
        out = []
        for a, b, e in self.edges:
            if a == node:
                out.append((b, e))
            elif b == node:
                out.append((a, e))
        return out

    def to_dot(self):
        lines = ["graph dual {"]
        for n in self.nodes:
            lines.append(f"  f{n};")
        for a, b, e in self.edges:
            lines.append(f'  f{a} -- f{b} [label="e{e}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def dual_graph(cx):
    """The face-adjacency multigraph, deterministically ordered."""
    if not cx.is_closed():
        raise ValueError("dual graph requires a closed complex")
    edges = []
    for e in cx.edges:
        (fa, _), (fb, _) = cx.occurrences()[e.id]
        edges.append((fa, fb, e.id))
    return DualGraph(tuple(f.id for f in cx.faces), tuple(edges))


# ----------------------------------------------------------------------
# exact integer linear algebra


class IntegerMatrix:
    """A dense matrix of Python ints.  No floats, ever."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        data = [list(row) for row in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError("ragged or mis-sized matrix data")
        for row in data:
            for x in row:
                if not isinstance(x, int):
                    raise TypeError(f"non-integer entry {x!r}")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, rows=None):
        cols = list(columns)
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls([[col[i] for col in cols] for i in range(rows)], rows, len(cols))

    def clone(self):
        return IntegerMatrix(self.data, self.rows, self.cols)

    def transpose(self):
        return IntegerMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntegerMatrix(
            [self.data[i] + other.data[i] for i in range(self.rows)],
            self.rows,
            self.cols + other.cols,
        )

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = [[0] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.data[i]
            for k in range(self.cols):
                x = row[k]
                if x:
                    ok = other.data[k]
                    oi = out[i]
                    for j in range(other.cols):
                        oi[j] += x * ok[j]
        return IntegerMatrix(out, self.rows, other.cols)

    def mul_vec(self, vec):
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(r[j] * vec[j] for j in range(self.cols)) for r in self.data]

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols})"


def _smith(entries, rows, cols, track):
    a = [row[:] for row in entries]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)] if track else None
    v = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        ad, asrc = a[dst], a[src]
        for idx in range(cols):
            ad[idx] += k * asrc[idx]
        if track:
            ud, usrc = u[dst], u[src]
            for idx in range(rows):
                ud[idx] += k * usrc[idx]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        if track:
            for row in v:
                row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if track:
            u[i] = [-x for x in u[i]]

    def find_pivot(t):
        best = None
        where = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    where = (i, j)
        return where

    n = min(rows, cols)
    t = 0
    while t < n:
        piv = find_pivot(t)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            if a[t][t] < 0:
                negate_row(t)
            p0 = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p0))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p0))
                    if a[t][j]:
                        dirty = True
            if dirty:
                piv = find_pivot(t)
                continue
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
            piv = (t, t)
        t += 1

    return a, u, v


def smith_normal_form(m):
    """Invariant factors of an integer matrix.

    Returns ``(diagonal, rank)`` where ``diagonal`` has ``min(rows, cols)``
    nonnegative entries forming a divisibility chain d1 | d2 | ... and
    ``rank`` counts the nonzero ones.
    """
    a, _, _ = _smith(m.data, m.rows, m.cols, track=False)
    n = min(m.rows, m.cols)
    diag = tuple(a[i][i] for i in range(n))
    return diag, sum(1 for d in diag if d)


def snf_with_transforms(m):
    """Smith normal form together with unimodular U, V so that U·M·V = D."""
    a, u, v = _smith(m.data, m.rows, m.cols, track=True)
    return (
        IntegerMatrix(a, m.rows, m.cols),
        IntegerMatrix(u, m.rows, m.rows),
        IntegerMatrix(v, m.cols, m.cols),
    )


def integer_solve(a, b):
    """One integer solution x of a·x = b, or None when none exists."""
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    d, u, v = snf_with_transforms(a)
    c = u.mul_vec(b)
    y = [0] * a.cols
    n = min(a.rows, a.cols)
    for j in range(n):
        dj = d.data[j][j]
        if dj:
            if c[j] % dj:
                return None
            y[j] = c[j] // dj
        elif c[j]:
            return None
    for j in range(n, a.rows):
        if c[j]:
            return None
    return v.mul_vec(y)

def kernel_basis(a):
    """A lattice basis of the integer kernel of the matrix."""
    d, _, v = snf_with_transforms(a)
    n = min(a.rows, a.cols)
    rank = sum(1 for j in range(n) if d.data[j][j])
    return [v.column(j) for j in range(rank, a.cols)]


def boundary_matrices(cx):
    """The cellular boundary maps (d2: faces→edges, d1: edges→vertices).

    Forward traversal contributes +1 in d2; an edge is oriented from the tail
    to the head of its forward side, giving head-minus-tail columns in d1.
    """
    d2 = IntegerMatrix.zeros(cx.num_edges, cx.num_faces)
    for f in cx.faces:
        for s in f.sides:
            d2.data[s.edge][f.id] += -1 if s.reversed else 1
    d1 = IntegerMatrix.zeros(cx.num_vertices, cx.num_edges)
    for e in cx.edges:
        d1.data[cx.head_vertex((e.id, True))][e.id] += 1
        d1.data[cx.tail_vertex((e.id, True))][e.id] -= 1
    return d2, d1


def betti_numbers(cx):
    """(b0, b1, b2) of the surface, via Smith normal form ranks."""
    d2, d1 = boundary_matrices(cx)
    _, r1 = smith_normal_form(d1)
    _, r2 = smith_normal_form(d2)
    return (
        cx.num_vertices - r1,
        cx.num_edges - r1 - r2,
        cx.num_faces - r2,
    )


# ----------------------------------------------------------------------
# serialization

COMPLEX_FORMAT = "fq-complex/1"


def canonical_json(obj):
    """Deterministic, diffable JSON: sorted keys, two-space indent, newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def complex_to_dict(cx):
    return {
        "format": COMPLEX_FORMAT,
        "p": cx.p,
        "edges": [{"id": e.id, "type": e.type} for e in cx.edges],
        "faces": [
            {
                "id": f.id,
                "chirality": f.chirality,
                "sides": [{"edge": s.edge, "reversed": s.reversed} for s in f.sides],
            }
            for f in cx.faces
        ],
    }


def complex_from_dict(doc):
    if doc.get("format") != COMPLEX_FORMAT:
        raise ValueError(f"unsupported complex format {doc.get('format')!r}")
    edge_specs = [(e["id"], e["type"]) for e in doc["edges"]]
    face_specs = [
        (f["id"], f["chirality"], [(s["edge"], s["reversed"]) for s in f["sides"]])
        for f in doc["faces"]
    ]
    return build_complex(doc["p"], edge_specs, face_specs)
