"""Thickness sequences, local group data, and the existence decision.

A thickness sequence q = (q_1, ..., q_p) is *alternating non-coprime* when
the entries split into two alternating classes with a common divisor d >= 2
on one and e >= 2 on the other (for odd p, after discarding one entry at
some offset).  Given such a decomposition and a good edge coloring, every
edge, vertex and face of a tessellation receives a subgroup of a product of
cyclic factors; the assignment certifies a quotient lattice when the local
data at each vertex reproduces a complete bipartite link of the right size.

Two independent routes check the vertex condition: direct arithmetic on
factor subsets (products, intersections and index sums), and an explicit
enumeration of cosets that builds the link graph and inspects it.

Odd-length geodesic loops obstruct existence: each one forces a reflection
symmetry on the sequence indices, and the closure of those reflections
partitions {1..p} into orbits on which q must be constant.  The decision
procedure combines the face-count residue, the symmetry obstructions and
the constructions into a verdict, optionally backed by a full certificate.
"""

from dataclasses import dataclass, field
from itertools import product as iter_product
from math import gcd

from .coloring import EdgeColoring, solve_good_coloring, verify_good_coloring
from .loops import trace_geodesic_loops
from .surface_complex import succ_type
from .tessellation import (
    BadDivisibility,
    build_block_tessellation,
    build_rect_tessellation,
    derived_sequence,
    face_count,
    subdivide_four,
    subdivide_two,
)


class NotGoodColoring(ValueError):
    """The supplied coloring is missing edges or breaks a condition."""


class NotAlternatingNonCoprime(ValueError):
    """The thickness sequence admits no alternating decomposition."""


class FaceGroupInconsistency(ValueError):
    """Different corners of one face yield different face groups."""


class OddPUnsupported(ValueError):
    """The decision procedure only covers even p."""


@dataclass(frozen=True)
class AlternatingDecomposition:
    """Common divisors of the two alternating classes of a sequence.

    ``offset`` is None for even length; for odd length it is the 1-based
    index left out of both classes.  ``reduced`` holds q_i divided by the
    divisor of its class (the offset entry is carried unchanged).
    """

    d: int
    e: int
    offset: object
    reduced: tuple


def _gcd_all(values):
    out = 0
    for v in values:
        out = gcd(out, v)
    return out


def alternating_noncoprime(q):
    """The alternating decomposition of a sequence, or None.

    Even length: odd positions share a divisor d >= 2 and even positions a
    divisor e >= 2.  Odd length: the same after removing one entry at some
    offset i, scanned in increasing order.
    """
    q = tuple(int(x) for x in q)
    p = len(q)
    if p == 0:
        return None

    def qi(j):
        return q[(j - 1) % p]

    if p % 2 == 0:
        d = _gcd_all(q[0::2])
        e = _gcd_all(q[1::2])
        if d >= 2 and e >= 2:
            reduced = tuple(
                q[k] // (d if k % 2 == 0 else e) for k in range(p)
            )
            return AlternatingDecomposition(d=d, e=e, offset=None, reduced=reduced)
        return None

    half = (p - 1) // 2
    for i in range(1, p + 1):
        first = [qi(i + 1 + 2 * t) for t in range(half)]
        second = [qi(i + 2 + 2 * t) for t in range(half)]
        d = _gcd_all(first)
        e = _gcd_all(second)
        if d >= 2 and e >= 2:
            reduced = list(q)
            for t in range(half):
                reduced[(i + 2 * t) % p] //= d
                reduced[(i + 1 + 2 * t) % p] //= e
            return AlternatingDecomposition(
                d=d, e=e, offset=i, reduced=tuple(reduced)
            )
    return None


def symmetric_axes(q, kind):
    """All axes m making the sequence 2- or 4-symmetric about m."""
    q = tuple(q)
    p = len(q)

    def qi(j):
        return q[(j - 1) % p]

    if kind == "two":
        return {
            m
            for m in range(1, p + 1)
            if all(qi(m + i) == qi(m - i) for i in range(1, p))
        }
    if kind == "four":
        if p % 4 != 0:
            raise BadDivisibility(
                f"4-symmetry needs length divisible by 4, got {p}"
            )
        return {
            m
            for m in range(1, p + 1)
            if all(
                qi(m + i) == qi(m - i) == qi(m + p // 2 - i) == qi(m + p // 2 + i)
                for i in range(1, p)
            )
        }
    raise ValueError(f"kind must be 'two' or 'four', got {kind!r}")


# ---------------------------------------------------------------------------
# group assignment

D_FACTOR = "D"
E_FACTOR = "E"


def _type_factor(t):
    return f"A{t}"


def _factor_orders(q, deco):
    orders = {D_FACTOR: deco.d - 1, E_FACTOR: deco.e - 1}
    for t in range(1, len(q) + 1):
        orders[_type_factor(t)] = deco.reduced[t - 1]
    return orders


def group_order(factors, orders):
    out = 1
    for f in factors:
        out *= orders[f]
    return out


@dataclass
class VertexCheck:
    """Results of the three local conditions at one vertex."""

    vertex: int
    types: tuple
    product_ok: bool
    intersection_ok: bool
    index_ok: bool
    index_sums: dict
    expected_sums: dict

    @property
    def ok(self):
        return self.product_ok and self.intersection_ok and self.index_ok


@dataclass
class LinkConditionReport:
    checks: dict

    @property
    def ok(self):
        return all(c.ok for c in self.checks.values())

    def failing_vertices(self):
        return sorted(v for v, c in self.checks.items() if not c.ok)


@dataclass
class GroupAssignment:
    """Factor subgroups on every cell, with the certification verdict."""

    cx: object
    q: tuple
    decomposition: AlternatingDecomposition
    orders: dict
    coloring: EdgeColoring
    edge_factors: dict
    vertex_types: dict
    vertex_universe: dict
    face_factors: dict
    face_conflicts: dict
    coloring_ok: bool
    vertex_checks: dict = field(default_factory=dict)
    certified: bool = False


def _edge_factor_set(edge_type, color, deco):
    a = _type_factor(edge_type)
    if edge_type % 2 == 1:
        base = {D_FACTOR, a}
        if color == 1:
            base.add(E_FACTOR)
    else:
        base = {E_FACTOR, a}
        if color == 1:
            base.add(D_FACTOR)
    return frozenset(base)


def assign_groups(cx, coloring, q, check=True):
    """Attach factor subgroups to edges, vertices and faces.

    Edge of type i: {D, A_i} plus E when colored 1 for odd i, and {E, A_i}
    plus D when colored 1 for even i.  A vertex on types (i, i+1) carries
    the full product universe; each face gets the intersection of the two
    edge groups at one of its corners, which the coloring's consistency
    makes independent of the corner.

    With ``check`` (the default) a bad coloring raises NotGoodColoring and
    disagreeing corners raise FaceGroupInconsistency; with ``check=False``
    both are recorded on the assignment instead, so deliberately broken
    instances can still be inspected by the link checkers.
    """
    q = tuple(int(x) for x in q)
    if cx.p % 2 != 0:
        raise ValueError(f"p must be even, got {cx.p}")
    if len(q) != cx.p:
        raise ValueError(f"sequence length {len(q)} does not match p={cx.p}")
    if any(x < 2 for x in q):
        raise ValueError("thickness entries must be at least 2")
    deco = alternating_noncoprime(q)
    if deco is None:
        raise NotAlternatingNonCoprime(f"{q} has no alternating decomposition")

    for e in cx.edges:
        if e.id not in coloring.colors:
            raise NotGoodColoring(f"edge {e.id} is not colored")
    coloring_ok, violations = verify_good_coloring(cx, coloring)
    if check and not coloring_ok:
        raise NotGoodColoring(f"coloring violates conditions: {violations[:3]}")

    orders = _factor_orders(q, deco)
    edge_factors = {
        e.id: _edge_factor_set(e.type, coloring.color_of(e.id), deco)
        for e in cx.edges
    }

    face_factors = {}
    face_conflicts = {}
    for f in cx.faces:
        n = len(f.sides)
        per_corner = []
        for k in range(n):
            ea = f.sides[(k - 1) % n].edge
            eb = f.sides[k].edge
            per_corner.append(edge_factors[ea] & edge_factors[eb])
        face_factors[f.id] = per_corner[0]
        if any(c != per_corner[0] for c in per_corner):
            if check:
                raise FaceGroupInconsistency(
                    f"face {f.id} corners disagree: {sorted(map(sorted, set(per_corner)))}"
                )
            face_conflicts[f.id] = tuple(per_corner)

    vertex_types = {}
    vertex_universe = {}
    for v in range(cx.num_vertices):
        pair = cx.vertex_type_pair(v)
        if pair is None:
            raise ValueError(f"vertex {v} has no alternating type pair")
        i, j = pair
        vertex_types[v] = pair
        vertex_universe[v] = frozenset(
            {D_FACTOR, E_FACTOR, _type_factor(i), _type_factor(j)}
        )

    assignment = GroupAssignment(
        cx=cx,
        q=q,
        decomposition=deco,
        orders=orders,
        coloring=coloring,
        edge_factors=edge_factors,
        vertex_types=vertex_types,
        vertex_universe=vertex_universe,
        face_factors=face_factors,
        face_conflicts=face_conflicts,
        coloring_ok=coloring_ok,
    )
    report = verify_link_conditions(assignment)
    assignment.vertex_checks = report.checks
    assignment.certified = (
        coloring_ok and not face_conflicts and report.ok
    )
    return assignment


def _corner_faces(cx, vertex):
    """Face ids of the four sectors around a vertex, sector k lying
    clockwise between rays k and k+1."""
    orbit = cx.vertices()[vertex]
    n = len(orbit)
    return [orbit[(k + 1) % n][0] for k in range(n)]


def verify_link_conditions(assignment):
    """Arithmetic check of the local conditions at every vertex.

    At a vertex on types (i, j): adjacent ray pairs must span the whole
    universe; their intersections must equal the groups of the faces
    between them; and the subgroup indices must sum so that each
    lifted type-i edge gets link degree q_i — the two type-i edges sum
    to q_j and the two type-j edges sum to q_i.
    """
    cx = assignment.cx
    q = assignment.q
    checks = {}
    for v in range(cx.num_vertices):
        i, j = assignment.vertex_types[v]
        universe = assignment.vertex_universe[v]
        rays = cx.rotation(v)
        ray_factors = [assignment.edge_factors[e] for e, _ in rays]
        ray_types = [cx.edge_type(e) for e, _ in rays]
        faces = _corner_faces(cx, v)

        product_ok = all(
            (ray_factors[k] | ray_factors[(k + 1) % 4]) == universe
            for k in range(4)
        )
        intersection_ok = all(
            (ray_factors[k] & ray_factors[(k + 1) % 4])
            == assignment.face_factors[faces[k]]
            for k in range(4)
        )

        vertex_order = group_order(universe, assignment.orders)
        sums = {i: 0, j: 0}
        for k in range(4):
            idx = vertex_order // group_order(ray_factors[k], assignment.orders)
            sums[ray_types[k]] += idx
        expected = {i: q[j - 1], j: q[i - 1]}
        index_ok = sums == expected

        checks[v] = VertexCheck(
            vertex=v,
            types=(i, j),
            product_ok=product_ok,
            intersection_ok=intersection_ok,
            index_ok=index_ok,
            index_sums=sums,
            expected_sums=expected,
        )
    return LinkConditionReport(checks=checks)


@dataclass
class LinkGraph:
    """The coset link at one vertex, with its completeness verdict."""

    vertex: int
    types: tuple
    side_vertices: dict
    edges: tuple
    simple: bool
    complete: bool
    sizes_ok: bool

    @property
    def ok(self):
        return self.simple and self.complete and self.sizes_ok

    def side_sizes(self):
        return {t: len(vs) for t, vs in self.side_vertices.items()}


def build_link_graph(assignment, vertex):
    """Enumerate the link of a vertex coset by coset.

    Link vertices are the cosets of the four edge groups in the vertex
    group, identified by rotation position; link edges are the cosets of
    the face groups of the four sectors, each joining the two edge-group
    cosets it refines.  The verdict asks for a simple complete bipartite
    graph whose type-i side has exactly q_j vertices (and vice versa) —
    the same conditions as verify_link_conditions, derived independently.
    """
    cx = assignment.cx
    q = assignment.q
    i, j = assignment.vertex_types[vertex]
    universe = assignment.vertex_universe[vertex]
    orders = assignment.orders
    rays = cx.rotation(vertex)
    ray_types = [cx.edge_type(e) for e, _ in rays]
    faces = _corner_faces(cx, vertex)

    def cosets(factors):
        absent = sorted(universe - factors)
        spaces = [range(orders[t]) for t in absent]
        return [
            tuple(zip(absent, values)) for values in iter_product(*spaces)
        ]

    ray_absent = [sorted(universe - assignment.edge_factors[e]) for e, _ in rays]
    side_vertices = {i: [], j: []}
    for k in range(4):
        for coset in cosets(assignment.edge_factors[rays[k][0]]):
            side_vertices[ray_types[k]].append((k, coset))

    edges = []
    for k in range(4):
        k2 = (k + 1) % 4
        for coset in cosets(assignment.face_factors[faces[k]]):
            values = dict(coset)
            a = (k, tuple((t, values.get(t, 0)) for t in ray_absent[k]))
            b = (k2, tuple((t, values.get(t, 0)) for t in ray_absent[k2]))
            edges.append((a, b) if ray_types[k] == i else (b, a))

    simple = len(edges) == len(set(edges))
    wanted = {
        (a, b)
        for a in side_vertices[i]
        for b in side_vertices[j]
    }
    complete = set(edges) == wanted
    sizes_ok = (
        len(side_vertices[i]) == q[j - 1] and len(side_vertices[j]) == q[i - 1]
    )
    return LinkGraph(
        vertex=vertex,
        types=(i, j),
        side_vertices={
            i: tuple(side_vertices[i]),
            j: tuple(side_vertices[j]),
        },
        edges=tuple(edges),
        simple=simple,
        complete=complete,
        sizes_ok=sizes_ok,
    )


# ---------------------------------------------------------------------------
# index symmetries

@dataclass(frozen=True)
class IndexMap:
    """A rotation or reflection of the type indices 1..p."""

    p: int
    sign: int
    shift: int

    @classmethod
    def rotation(cls, p, t):
        return cls(p=p, sign=1, shift=t % p)

    @classmethod
    def reflection(cls, p, m):
        return cls(p=p, sign=-1, shift=(2 * m) % p)

    def apply(self, k):
        return (self.sign * k + self.shift - 1) % self.p + 1

    def after(self, other):
        if self.p != other.p:
            raise ValueError("maps act on different index ranges")
        return IndexMap(
            p=self.p,
            sign=self.sign * other.sign,
            shift=(self.sign * other.shift + self.shift) % self.p,
        )

    @property
    def is_reflection(self):
        return self.sign == -1


@dataclass
class IndexSymmetry:
    """A subgroup of index maps and its orbit partition of {1..p}."""

    p: int
    generators: tuple
    elements: tuple
    orbits: tuple

    def orbit_of(self, k):
        for orbit in self.orbits:
            if k in orbit:
                return orbit
        raise ValueError(f"index {k} out of range")

    def constant_on_orbits(self, q):
        q = tuple(q)
        return all(
            len({q[k - 1] for k in orbit}) == 1 for orbit in self.orbits
        )


def loop_obstructions(cx, loop_report):
    """Reflections forced by odd geodesic loops.

    An odd-length loop whose edges all have type t makes any quotient
    identify type t+k with type t-k, i.e. the reflection k -> 2t - k.
    Loops of mixed type contribute nothing.
    """
    out = set()
    for lp in loop_report.loops:
        if lp.parity == "odd" and lp.type is not None:
            out.add(IndexMap.reflection(cx.p, lp.type))
    return sorted(out, key=lambda m: (m.sign, m.shift))


def symmetry_closure(p, generators):
    """The subgroup generated by index maps, with its orbits."""
    generators = tuple(generators)
    identity = IndexMap(p=p, sign=1, shift=0)
    elements = {identity}
    frontier = [identity]
    while frontier:
        cur = frontier.pop()
        for g in generators:
            nxt = g.after(cur)
            if nxt not in elements:
                elements.add(nxt)
                frontier.append(nxt)
    orbits = []
    seen = set()
    for k in range(1, p + 1):
        if k in seen:
            continue
        orbit = sorted({m.apply(k) for m in elements})
        seen.update(orbit)
        orbits.append(tuple(orbit))
    ordered = sorted(elements, key=lambda m: (m.sign, m.shift))
    return IndexSymmetry(
        p=p,
        generators=generators,
        elements=tuple(ordered),
        orbits=tuple(orbits),
    )


# ---------------------------------------------------------------------------
# the decision procedure

EXISTS = "Exists"
RULED_OUT = "RuledOut"
UNKNOWN = "Unknown"
INTERNAL_ERROR = "InternalError"


@dataclass
class Verdict:
    outcome: str
    method: object
    reason: str
    certificate: object = None


def _smallest_prime_factor(n):
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


CERT_FORMAT = "fq-cert/1"


def build_certificate(cx, coloring, q):
    """Certificate payload: the assignment plus both vertex oracles.

    A coloring that fails verification still yields a certificate; the
    failures end up in the per-vertex entries and the overall flag.
    """
    assignment = assign_groups(cx, coloring, q, check=False)
    report = verify_link_conditions(assignment)
    links = {v: build_link_graph(assignment, v) for v in range(cx.num_vertices)}
    ok = assignment.certified and report.ok and all(l.ok for l in links.values())
    deco = assignment.decomposition
    doc = {
        "format": CERT_FORMAT,
        "p": cx.p,
        "q": list(q),
        "d": deco.d,
        "e": deco.e,
        "reduced": list(deco.reduced),
        "edges": [
            {
                "id": e.id,
                "type": e.type,
                "color": coloring.color_of(e.id),
                "factors": sorted(assignment.edge_factors[e.id]),
            }
            for e in cx.edges
        ],
        "vertices": [
            {
                "id": v,
                "types": list(report.checks[v].types),
                "product_ok": report.checks[v].product_ok,
                "intersection_ok": report.checks[v].intersection_ok,
                "index_ok": report.checks[v].index_ok,
                "index_sums": {
                    str(t): s for t, s in sorted(report.checks[v].index_sums.items())
                },
                "link_sides": [
                    len(links[v].side_vertices[t]) for t in links[v].types
                ],
                "link_ok": links[v].ok,
            }
            for v in range(cx.num_vertices)
        ],
        "ok": ok,
    }
    return doc


def _transverse_gcd(q, m):
    """gcd of the entries at odd offsets from axis m."""
    p = len(q)
    return _gcd_all(q[(m - 1 + t) % p] for t in range(1, p, 2))


def _solve_or_fail(cx):
    col = solve_good_coloring(cx, "propagate")
    if not isinstance(col, EdgeColoring):
        raise RuntimeError("no good coloring on the constructed complex")
    return col


def _certify_block(p, q, g):
    cx = build_block_tessellation(p, g)
    cert = build_certificate(cx, _solve_or_fail(cx), q)
    cert["construction"] = {"method": "Block", "p": p, "genus": g}
    return cert


def _certify_subdiv2(p, q, g, F, axis):
    base = build_rect_tessellation(p, F // 2, 2)
    sub, _smap = subdivide_two(base, axis=1)
    q2 = derived_sequence(q, 2, axis)
    cert = build_certificate(sub, _solve_or_fail(sub), q2)
    cert["construction"] = {
        "method": "Subdiv2",
        "p": p,
        "genus": g,
        "grid": [F // 2, 2],
        "symmetry_axis": axis,
        "derived_q": list(q2),
    }
    return cert


def _certify_subdiv4(p, q, g, F, axis):
    a = _smallest_prime_factor(F)
    base = build_rect_tessellation(p, a, F // a)
    sub, _smap = subdivide_four(base, axis=1)
    q4 = derived_sequence(q, 4, axis)
    cert = build_certificate(sub, _solve_or_fail(sub), q4)
    cert["construction"] = {
        "method": "Subdiv4",
        "p": p,
        "genus": g,
        "grid": [a, F // a],
        "symmetry_axis": axis,
        "derived_q": list(q4),
    }
    return cert


def decide(p, q, g, certify=False):
    """Does a quotient lattice exist for (p, q, genus)?

    Branches on the residue of the face count F: divisible by 4 uses the
    block construction directly; F = 2 mod 4 requires 2-symmetry (ruled
    out otherwise) and subdivides in two; odd F requires 4-symmetry and a
    composite F and subdivides in four.  Gaps between the necessary and
    sufficient conditions come back as Unknown.  With certify=True every
    Exists verdict carries a full checked certificate; a construction or
    check failure downgrades the verdict to InternalError, never to a
    silent success.
    """
    q = tuple(int(x) for x in q)
    if p % 2 != 0:
        raise OddPUnsupported(f"p={p}: only even p is supported")
    if p < 6:
        raise ValueError(f"p must be at least 6, got {p}")
    if len(q) != p:
        raise ValueError(f"sequence length {len(q)} does not match p={p}")
    if any(x < 2 for x in q):
        raise ValueError("thickness entries must be at least 2")
    if g < 2:
        raise ValueError(f"genus must be at least 2, got {g}")
    F = face_count(p, g)
    deco = alternating_noncoprime(q)

    def exists(method, reason, certifier):
        if not certify:
            return Verdict(EXISTS, method, reason)
        try:
            cert = certifier()
        except Exception as exc:
            return Verdict(
                INTERNAL_ERROR, method, f"certification crashed: {exc}"
            )
        if not cert["ok"]:
            return Verdict(
                INTERNAL_ERROR, method, "certificate checks failed", cert
            )
        return Verdict(EXISTS, method, reason, cert)

    if F % 4 == 0:
        if deco is None:
            return Verdict(UNKNOWN, None, "not alternating non-coprime")
        return exists(
            "Block",
            f"F={F} divisible by 4 and q alternating non-coprime",
            lambda: _certify_block(p, q, g),
        )

    if F % 2 == 0:
        axes = sorted(symmetric_axes(q, "two"))
        if not axes:
            return Verdict(
                RULED_OUT, "TwoSymmetry", f"F={F} = 2 mod 4 but q is not 2-symmetric"
            )
        if deco is None:
            return Verdict(UNKNOWN, None, "not alternating non-coprime")
        even_axes = [m for m in axes if _transverse_gcd(q, m) % 2 == 0]
        if not even_axes:
            return Verdict(
                UNKNOWN, None, "no symmetry axis with even transverse gcd"
            )
        m0 = even_axes[0]
        return exists(
            "Subdiv2",
            f"F={F}, q 2-symmetric about {m0} with even transverse gcd",
            lambda: _certify_subdiv2(p, q, g, F, m0),
        )

    axes = sorted(symmetric_axes(q, "four"))
    if not axes:
        return Verdict(
            RULED_OUT, "FourSymmetry", f"F={F} odd but q is not 4-symmetric"
        )
    if F == 1 or _smallest_prime_factor(F) == F:
        return Verdict(UNKNOWN, None, f"F={F} is not composite")
    if deco is None:
        return Verdict(UNKNOWN, None, "not alternating non-coprime")
    if deco.d % 2 != 0 or deco.e % 2 != 0:
        return Verdict(
            UNKNOWN, None, f"alternating gcds d={deco.d}, e={deco.e} not both even"
        )
    m0 = axes[0]
    return exists(
        "Subdiv4",
        f"F={F} odd composite, q 4-symmetric about {m0}, d and e even",
        lambda: _certify_subdiv4(p, q, g, F, m0),
    )


def verdict_to_dict(verdict):
    return {
        "outcome": verdict.outcome,
        "method": verdict.method,
        "reason": verdict.reason,
        "certificate": verdict.certificate,
    }
