"""Closed triangulated surfaces and combinatorial cutting.

Vertex links of the 3-complexes studied here are closed surfaces; this
module classifies them (Euler characteristic plus an orientability
sweep over the dual graph) and implements cutting a surface along a
vertex-simple cycle.  Cutting is the workhorse behind several move
preconditions: a missing triangle in a link either separates the link
(annulus neighbourhood) or sits one-sidedly in it (Moebius
neighbourhood), and the two cases trigger different decompositions.

The cut itself duplicates each cycle vertex into its two local fan
arcs.  Triangles keep their identity, so callers can map every piece
of the cut surface back to original triangles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import CycleError, NotSurfaceError

SPHERE = "Sphere"
RP2 = "RP2"
TORUS = "Torus"
KLEIN = "Klein"
OTHER = "Other"

ANNULUS = "Annulus"
MOEBIUS = "Moebius"


@dataclass(frozen=True)
class SurfaceClass:
    """Classification of a closed connected surface."""

    kind: str
    euler_characteristic: int
    orientable: bool

    def __str__(self) -> str:
        o = "orientable" if self.orientable else "non-orientable"
        return f"{self.kind} (chi={self.euler_characteristic}, {o})"


def _classify(chi: int, orientable: bool) -> str:
    if orientable:
        if chi == 2:
            return SPHERE
        if chi == 0:
            return TORUS
    else:
        if chi == 1:
            return RP2
        if chi == 0:
            return KLEIN
    return OTHER


class Surface:
    """A closed connected triangulated surface.

    Construction validates the closed-surface conditions: triangles
    have three distinct non-negative labels, every edge lies in exactly
    two triangles, and the dual graph is connected.  Violations raise
    :class:`NotSurfaceError`.
    """

    def __init__(self, triangles: Iterable[Iterable[int]]):
        tris = frozenset(frozenset(t) for t in triangles)
        if not tris:
            raise NotSurfaceError("no triangles given")
        for t in tris:
            if len(t) != 3:
                raise NotSurfaceError(f"not a triangle: {sorted(t)}")
        self.triangles = tris
        edge_count: dict = {}
        for t in tris:
            for e in _edges_of(t):
                edge_count[e] = edge_count.get(e, 0) + 1
        bad = sorted(
            (tuple(sorted(e)), n) for e, n in edge_count.items() if n != 2
        )
        if bad:
            raise NotSurfaceError(f"edges not in exactly two triangles: {bad[:5]}")
        self.edges = frozenset(edge_count)
        self.vertices = frozenset(v for t in tris for v in t)
        if _triangle_components(tris) != 1:
            raise NotSurfaceError("surface is not connected")
        self._cache: dict = {}

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    @property
    def is_orientable(self) -> bool:
        got = self._cache.get("orientable")
        if got is None:
            got = _orientable(self.triangles)
            self._cache["orientable"] = got
        return got

    def classify(self) -> SurfaceClass:
        chi = self.euler_characteristic
        orient = self.is_orientable
        return SurfaceClass(_classify(chi, orient), chi, orient)

    @property
    def g2(self) -> int:
        """The surface g2: f1 - 3*f0 + 6 (0 exactly for the 2-sphere)."""
        return len(self.edges) - 3 * len(self.vertices) + 6

    def __repr__(self) -> str:
        return f"Surface({len(self.vertices)} vertices, {len(self.triangles)} triangles)"


def classify_surface(S) -> SurfaceClass:
    """Classify a closed connected surface.

    Accepts a :class:`Surface` or anything acceptable to its
    constructor (an iterable of triangles, e.g. the facet set of a
    2-dimensional complex).
    """
    if not isinstance(S, Surface):
        S = Surface(S)
    return S.classify()


def surface_g2(S) -> int:
    if not isinstance(S, Surface):
        S = Surface(S)
    return S.g2


# ---------------------------------------------------------------------
# cutting along a cycle
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class CutReport:
    """Outcome of cutting a surface along a vertex-simple cycle.

    ``neighborhood`` is ``"Annulus"`` when the cut opens two boundary
    circles (two-sided cycle) and ``"Moebius"`` when it opens one
    (one-sided cycle).  When the cycle separates, ``sides`` holds the
    two triangle sets (original labels) in canonical order - side 0
    contains the lexicographically smallest triangle - and
    ``side_descriptions`` describes each side (``disc``,
    ``moebius-strip`` or ``other``) in the same order.
    """

    cycle: tuple
    is_cycle_in_surface: bool
    separates: bool
    neighborhood: str
    components_after_cut: int
    n_boundary_circles: int
    side_descriptions: tuple
    sides: tuple

    def summary(self) -> str:
        out = f"cycle {self.cycle}: {self.neighborhood}"
        if self.separates:
            out += f", separates into {'+'.join(self.side_descriptions)}"
        else:
            out += ", does not separate"
        return out


def cycle_cut(S: Surface, cycle: Sequence[int]) -> CutReport:
    """Cut a closed surface along a vertex-simple cycle.

    ``cycle`` lists distinct vertices in cyclic order; every
    consecutive pair (wrapping around) must be an edge of ``S``.  A
    cycle of length three bounding an actual triangle is allowed; the
    triangle then forms one side by itself.
    """
    if not isinstance(S, Surface):
        S = Surface(S)
    cyc = tuple(cycle)
    n = len(cyc)
    if n < 3:
        raise CycleError(f"cycle must have at least three vertices, got {cyc}")
    if len(set(cyc)) != n:
        raise CycleError(f"cycle revisits a vertex: {cyc}")
    for v in cyc:
        if v not in S.vertices:
            raise CycleError(f"cycle vertex {v} is not in the surface")
    for i in range(n):
        e = frozenset((cyc[i], cyc[(i + 1) % n]))
        if e not in S.edges:
            raise CycleError(
                f"consecutive cycle vertices {tuple(sorted(e))} are not an edge"
            )

    cycle_set = set(cyc)
    prevnext = {cyc[i]: (cyc[i - 1], cyc[(i + 1) % n]) for i in range(n)}

    # Local side assignment: around each cycle vertex the triangle fan
    # is sliced at the two incident cycle edges, giving two arcs.
    side_of: dict = {}
    for c in cyc:
        fan, gaps = _fan(S, c)
        p, q = prevnext[c]
        ip, iq = gaps.index(p), gaps.index(q)
        k = len(fan)
        arc = []
        j = (ip + 1) % k
        while True:
            arc.append(fan[j])
            if j == iq:
                break
            j = (j + 1) % k
        in_arc = set(arc)
        arcs = [arc, [t for t in fan if t not in in_arc]]
        arcs.sort(key=lambda ts: min(tuple(sorted(t)) for t in ts))
        for s, ts in enumerate(arcs):
            for t in ts:
                side_of[(c, t)] = s

    # Build the cut complex.  Labels become (vertex, copy) pairs with
    # copy = -1 for vertices off the cycle, keeping labels sortable.
    cut_tris = []
    orig_of = {}
    for t in S.triangles:
        newt = frozenset(
            (x, side_of[(x, t)]) if x in cycle_set else (x, -1) for x in t
        )
        cut_tris.append(newt)
        orig_of[newt] = t

    comp_ids = _component_ids(cut_tris)
    n_comps = max(comp_ids.values()) + 1

    boundary = _boundary_edges(cut_tris)
    circles = _count_boundary_circles(boundary)

    separates = n_comps == 2
    neighborhood = ANNULUS if circles == 2 else MOEBIUS

    side_descriptions: tuple = ()
    sides: tuple = ()
    if separates:
        groups: list = [[], []]
        for ct in cut_tris:
            groups[comp_ids[ct]].append(ct)
        groups.sort(key=lambda g: min(tuple(sorted(orig_of[ct])) for ct in g))
        sides = tuple(frozenset(orig_of[ct] for ct in g) for g in groups)
        side_descriptions = tuple(_describe_piece(g) for g in groups)

    return CutReport(
        cycle=cyc,
        is_cycle_in_surface=True,
        separates=separates,
        neighborhood=neighborhood,
        components_after_cut=n_comps,
        n_boundary_circles=circles,
        side_descriptions=side_descriptions,
        sides=sides,
    )


def missing_triangle_neighborhood(K, v: int, triangle: Iterable[int]) -> CutReport:
    """Cut the link of ``v`` along the boundary of a missing triangle.

    ``triangle`` must have its three edges in the link of ``v`` while
    not being a triangle of that link itself.  ``K`` is a 3-complex
    (anything with a ``link`` method returning a complex).
    """
    t = frozenset(triangle)
    if len(t) != 3:
        raise CycleError(f"not a triangle: {sorted(triangle)}")
    S = Surface(K.link((v,)).facets)
    if t in S.triangles:
        raise CycleError(
            f"triangle {sorted(t)} is a face of the link of {v}, not missing"
        )
    for e in _edges_of(t):
        if e not in S.edges:
            raise CycleError(
                f"edge {tuple(sorted(e))} of the triangle is not in the link of {v}"
            )
    return cycle_cut(S, tuple(sorted(t)))


# ---------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------


def _edges_of(t):
    a, b, c = t
    return (frozenset((a, b)), frozenset((b, c)), frozenset((a, c)))


def _fan(S: Surface, c: int):
    """Cyclic order of the triangles around vertex ``c``.

    Returns ``(fan, gaps)`` where ``gaps[i]`` is the link vertex whose
    edge ``{c, gaps[i]}`` is shared by ``fan[i]`` and ``fan[i+1]``
    (cyclically).
    """
    by_gap: dict = {}
    tris = []
    for t in S.triangles:
        if c in t:
            tris.append(t)
            for x in t - {c}:
                by_gap.setdefault(x, []).append(t)
    start = min(tris, key=sorted)
    fan = [start]
    gaps = []
    cur = start
    g = min(cur - {c})
    while True:
        gaps.append(g)
        t1, t2 = by_gap[g]
        nxt = t2 if t1 == cur else t1
        if nxt == start:
            break
        fan.append(nxt)
        cur = nxt
        g = next(x for x in cur - {c} if x != g)
    if len(fan) != len(tris):
        raise NotSurfaceError(f"triangle fan around vertex {c} is not a single cycle")
    return fan, gaps


def _component_ids(triangles) -> dict:
    """Map each triangle to a dual-graph component id (0-based)."""
    by_edge: dict = {}
    for t in triangles:
        for e in _edges_of(t):
            by_edge.setdefault(e, []).append(t)
    ids: dict = {}
    next_id = 0
    for t in triangles:
        if t in ids:
            continue
        stack = [t]
        ids[t] = next_id
        while stack:
            cur = stack.pop()
            for e in _edges_of(cur):
                for other in by_edge[e]:
                    if other not in ids:
                        ids[other] = next_id
                        stack.append(other)
        next_id += 1
    return ids


def _triangle_components(triangles) -> int:
    if not triangles:
        return 0
    return max(_component_ids(list(triangles)).values()) + 1


def _boundary_edges(triangles) -> list:
    count: dict = {}
    for t in triangles:
        for e in _edges_of(t):
            count[e] = count.get(e, 0) + 1
    return [e for e, n in count.items() if n == 1]


def _count_boundary_circles(boundary_edges) -> int:
    if not boundary_edges:
        return 0
    adj: dict = {}
    for e in boundary_edges:
        a, b = e
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen: set = set()
    circles = 0
    for start in adj:
        if start in seen:
            continue
        circles += 1
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return circles


def _describe_piece(triangles) -> str:
    """Describe a connected surface-with-boundary piece of a cut."""
    vs = {v for t in triangles for v in t}
    es: set = set()
    for t in triangles:
        es.update(_edges_of(t))
    chi = len(vs) - len(es) + len(triangles)
    circles = _count_boundary_circles(_boundary_edges(triangles))
    if chi == 1 and circles == 1:
        return "disc"
    if chi == 0 and circles == 1:
        return "moebius-strip"
    return f"other(chi={chi}, boundary={circles})"


def _directed_edges(t_sorted, parity: int):
    a, b, c = t_sorted
    if parity == 0:
        return ((a, b), (b, c), (c, a))
    return ((b, a), (c, b), (a, c))


def _orientable(triangles) -> bool:
    """Dual-graph sweep assigning compatible orientations; works for
    surfaces with or without boundary."""
    by_edge: dict = {}
    for t in triangles:
        for e in _edges_of(t):
            by_edge.setdefault(e, []).append(t)
    parity: dict = {}
    for t0 in triangles:
        if t0 in parity:
            continue
        parity[t0] = 0
        stack = [t0]
        while stack:
            t = stack.pop()
            dirs = _directed_edges(tuple(sorted(t)), parity[t])
            for (x, y) in dirs:
                others = by_edge[frozenset((x, y))]
                for t2 in others:
                    if t2 == t:
                        continue
                    # t2 must traverse the shared edge as (y, x)
                    want = 0
                    if (y, x) not in _directed_edges(tuple(sorted(t2)), 0):
                        want = 1
                    if t2 in parity:
                        if parity[t2] != want:
                            return False
                    else:
                        parity[t2] = want
                        stack.append(t2)
    return True
